#pragma once

#include "wpcyl/mode_calculus.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace wpcyl {

using RealFn = std::function<Real(Real)>;

// Homogeneous solutions of the zero-mode operator -(F w')' + (1 + tau^2/F) w on the cylinder.
struct HomogeneousSolutions {
    Real ell;

    explicit HomogeneousSolutions(Real ell_);
    static Real u_star(Real T);
    static Real v_star(Real T);
    Real u(Real tau) const { return u_star(tau / ell); }
    Real v(Real tau) const { return v_star(tau / ell); }
    Real du(Real tau) const;
    Real dv(Real tau) const;
};

struct GreenSolveReport {
    Real A = 0, B = 0, I1 = 0, I2 = 0, D = 0;
    ModeField solution;
    Real boundary_error = 0;
};

struct GreenOptions {
    int intervals = 2048;
    int order = 2;
    Real c = Real(0.5);
};

// Graded grid on [-1, 1] resolving the ell-scale neck.
std::shared_ptr<const RadialGrid> cylinder_grid(Real ell, const GreenOptions& opt = {});

// Variation of parameters for P_{ell,0} w = h, w(+-1) = eta+-, h vanishing on |tau| <= c.
GreenSolveReport solve_zero_mode(Real ell, const RealFn& h, Real eta_plus, Real eta_minus,
                                 std::shared_ptr<const RadialGrid> grid, Real c = Real(0.5));

// Dirichlet solve of P+_{ell,k} u = h_u and P-_{ell,k} v = h_v (rho frame, k != 0).
ModeField solve_nonzero_mode(Real ell, int k, const ModeField& h_rho, Real eta_plus, Real eta_minus,
                             std::shared_ptr<const RadialGrid> grid, Real c = Real(0.5));

enum class BarrierForm {
    reciprocal, // C exp(alpha|k| (1/c - 1/|tau|))
    neck        // C exp(-alpha|k| (x(c) - x(|tau|))), x = arctan(tau/ell)/ell
};

struct BarrierProfile {
    Real alpha = Real(0.5);
    Real c = Real(0.5);
    Real C = 1;
    BarrierForm form = BarrierForm::reciprocal;

    Real value(Real tau, int k, Real ell) const;
    // min over +- of (P+-_{ell,k} zeta)(tau) / zeta(tau), analytic derivatives.
    Real normalized_image(Real tau, int k, Real ell) const;
};

struct BarrierCertificate {
    bool pass = false;
    Real worst = 0;
    Real worst_tau = 0;
    Real worst_ell = 0;
    int worst_k = 0;
};

BarrierCertificate certify_barrier(const std::vector<Real>& ells, const std::vector<int>& ks, Real alpha,
                                   Real c = Real(0.5), BarrierForm form = BarrierForm::reciprocal,
                                   int samples = 4000);

// Compares a computed mode-k solution against the barrier on |tau| <= c. The rhs is a smooth bump
// supported in [c, 3/2 c] in both rho components, C is the largest |omega| at tau = +-c.
// Values with |omega| <= floor C are below the solver's resolution and count as zero.
struct BarrierComparison {
    Real worst_ratio = 0;  // max |omega| / zeta on |tau| <= c (inf where zeta = 0 < |omega|)
    Real band_lo = 0, band_hi = 0; // |tau| range where the ratio exceeds 1 (empty if lo > hi)
    Real C = 0;
    bool pass() const { return worst_ratio <= 1; }
};

BarrierComparison compare_barrier(Real ell, int k, Real alpha, BarrierForm form,
                                  std::shared_ptr<const RadialGrid> grid, Real c = Real(0.5),
                                  Real floor = Real(1e-14));

// Per-mode rho-frame rhs given by callables; k = 0 uses the explicit formula, k != 0 the BVP solve.
struct ModeRhs {
    int k = 0;
    RealFn u, v;
};

// Solves P_{ell,k} w = rhs (P = 1/2 diag(P+, P-)) with zero Dirichlet data on [-1, 1].
std::vector<ModeField> cylinder_dirichlet_inverse(Real ell, int mode_budget, const std::vector<ModeRhs>& rhs,
                                                  std::shared_ptr<const RadialGrid> grid, Real c = Real(0.5));

} // namespace wpcyl
