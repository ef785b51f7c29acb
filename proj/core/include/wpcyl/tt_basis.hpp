#pragma once

#include "wpcyl/mode_calculus.hpp"

#include <utility>

namespace wpcyl {

enum class TTKind { kappa, nu };

// kappa lives in the cosine class (signed mode +k), nu in the sine class (-k).
// At k = 0 both are theta-constant: kappa = c0 E1 / F, nu = c0 E2 / F.
struct TTBasisElement {
    TTKind kind = TTKind::kappa;
    int k = 0;
    Real ell = 0;
    Real log_C = 0;

    int signed_k() const { return kind == TTKind::kappa ? k : -k; }
    Real C() const { return std::exp(log_C); }
    // sigma-frame trace-free components (P, Q); at ell = 0 the limit tensors.
    std::pair<Real, Real> components(Real tau) const;
    ModeField sample(const RadialGrid& grid) const;
};

// log C_{ell,k}: k >= 1 gives log(sqrt(k)) - k arctan(1/ell)/ell, k = 0 gives log(ell^{3/2}/arctan(1/ell)^{1/2}).
Real tt_log_normalization(int k, Real ell);

TTBasisElement tt_element(TTKind kind, int k, Real ell);
TTBasisElement tt_limit(TTKind kind, int k);

struct TTNormReport {
    Real closed_form_sq = 0;
    Real quadrature_sq = 0;
    Real rel_err = 0;
    Real norm = 0;
};

// Frame-coefficient L2 norm int int (P^2 + Q^2) dtau dtheta over [-1, 1] x S^1.
TTNormReport tt_l2norm(TTKind kind, int k, Real ell);

// sqrt(ell) kappa_{ell,0} (resp. nu) in the rescaled chart T = tau/ell.
struct RescaledZeroMode {
    TTKind kind;
    Real ell;
    Real dT2(Real T) const;     // coefficient of dT^2
    Real dtheta2(Real T) const; // coefficient of dtheta^2
    Real dTdtheta(Real T) const; // coefficient of dT dtheta + dtheta dT
};

RescaledZeroMode tt_rescaled_zero_mode(TTKind kind, Real ell);
// (2/pi)^{1/2} / (1 + T^2)^2, the limit of the dT^2 coefficient.
Real tt_rescaled_limit(Real T);

// Growing ell = 0 solutions mu_k (cosine class) and lambda_k (sine class); tau != 0.
struct GrowingSolution {
    TTKind kind;
    int k;
    std::pair<Real, Real> components(Real tau) const;
    int signed_k() const { return kind == TTKind::kappa ? k : -k; }
};

std::pair<GrowingSolution, GrowingSolution> growing_solutions(int k);

} // namespace wpcyl
