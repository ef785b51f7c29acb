#pragma once

#include "wpcyl/grid.hpp"
#include "wpcyl/types.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace wpcyl {

// Rotational metric dtau^2 / F(tau) + F(tau) dtheta^2, described by F and two derivatives.
struct Profile {
    std::function<Real(Real)> F, dF, d2F;

    static Profile hyperbolic(Real ell);
    static Profile flat(Real c = 1);
};

class CylinderMetric {
public:
    explicit CylinderMetric(Real ell, Real tau_min = -1, Real tau_max = 1);

    Real ell() const { return ell_; }
    Real tau_min() const { return tau_min_; }
    Real tau_max() const { return tau_max_; }
    Real F(Real tau) const { return tau * tau + ell_ * ell_; }
    Profile profile() const { return Profile::hyperbolic(ell_); }

private:
    Real ell_, tau_min_, tau_max_;
};

enum class ChartKind { tau, arcsinh, rescaled, plumbing };

// forward: tau -> chart coordinate, inverse: chart coordinate -> tau.
// The plumbing chart maps tau to |z| in [sqrt(t) ... ] with ell = pi / |log t|.
class CoordinateChart {
public:
    CoordinateChart(ChartKind kind, Real ell);
    static CoordinateChart plumbing_from_t(Real t);

    ChartKind kind() const { return kind_; }
    Real ell() const { return ell_; }
    Real forward(Real tau) const;
    Real inverse(Real x) const;

private:
    ChartKind kind_;
    Real ell_;
};

// Profile and derivatives sampled on a grid; the common input of every mode operator.
struct MetricSamples {
    std::shared_ptr<const RadialGrid> grid;
    Vec F, dF, d2F, sqrtF;
    Real ell = 0;
    bool hyperbolic = false;

    // allow_zero admits F = 0 at isolated nodes (the noded metric); rows there are not usable.
    MetricSamples(std::shared_ptr<const RadialGrid> g, const Profile& p, Real ell_value, bool is_hyperbolic,
                  bool allow_zero = false);
    static MetricSamples cylinder(std::shared_ptr<const RadialGrid> g, Real ell);

    int size() const { return grid->size(); }
    // Curvature K = -F''/2 from the analytic second derivative.
    Vec curvature() const { return -d2F / 2; }
};

std::pair<Real, Real> metric_components(const CylinderMetric& m, Real tau);

// K = -F''/2 for dtau^2/F + F dtheta^2, F'' taken with the grid's stencil.
Vec profile_curvature(const RadialGrid& grid, const Vec& F);

Real boundary_distance(const CylinderMetric& m);

// Max relative discrepancy between the plumbing-annulus metric density and the pullback
// of the cylinder metric at the given radii |z|, sqrt(t) <= |z| <= 1/2.
Real mz_substitution_check(Real t, const std::vector<Real>& radii);

} // namespace wpcyl
