#pragma once

#include "wpcyl/types.hpp"

#include <vector>

namespace wpcyl {

enum class Spacing { uniform, graded, chebyshev };

// Finite-difference weights for derivatives 0..m at z from the nodes x (Fornberg 1988).
// Returns w with w(j, d) the weight of x[j] for the d-th derivative.
Mat fornberg_weights(Real z, const std::vector<Real>& x, int m);

// Nodes tau_0 < ... < tau_N with differentiation matrices and quadrature weights.
class RadialGrid {
public:
    static RadialGrid uniform(Real a, Real b, int intervals, int order = 2);
    // tau = scale * sinh(s) with s uniform; spacing ~ sqrt(tau^2 + scale^2).
    // Breakpoints are hit exactly; each segment gets an even number of intervals.
    static RadialGrid graded(Real a, Real b, int intervals, Real scale, int order = 2,
                             const std::vector<Real>& breakpoints = {});
    static RadialGrid chebyshev(Real a, Real b, int intervals);

    int size() const { return static_cast<int>(nodes_.size()); }
    Real a() const { return nodes_(0); }
    Real b() const { return nodes_(size() - 1); }
    const Vec& nodes() const { return nodes_; }
    Real operator[](int i) const { return nodes_(i); }
    Spacing spacing() const { return spacing_; }
    int order() const { return order_; }

    const SpMat& d1() const { return d1_; }
    const SpMat& d2() const { return d2_; }
    const Vec& weights() const { return weights_; }

    Vec diff(const Vec& f) const { return d1_ * f; }
    Vec diff2(const Vec& f) const { return d2_ * f; }
    Real integrate(const Vec& f) const { return weights_.dot(f); }

    // Index of the node equal to tau (to 1e-14 relative), or -1.
    int find(Real tau) const;
    // Indices i with lo <= tau_i <= hi.
    std::vector<int> indices_in(Real lo, Real hi) const;

    template <class Fn>
    Vec sample(Fn&& f) const
    {
        Vec out(size());
        for (int i = 0; i < size(); ++i)
            out(i) = f(nodes_(i));
        return out;
    }

private:
    RadialGrid(Vec nodes, Spacing spacing, int order);
    void build_fd();
    void build_chebyshev();
    void build_simpson();

    Vec nodes_;
    Spacing spacing_;
    int order_;
    SpMat d1_, d2_;
    Vec weights_;
};

} // namespace wpcyl
