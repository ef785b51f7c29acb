#pragma once

#include "wpcyl/cylinder_model.hpp"
#include "wpcyl/types.hpp"

#include <vector>

namespace wpcyl {

// Fourier mode fields. The mode index is signed: k >= 0 is the cosine-paired class
//   scalar        f cos(k theta)
//   one_form      A cos(k theta) sigma1 + B sin(k theta) sigma2
//   sym2_full     f cos(k theta) g + P cos(k theta) E1 + Q sin(k theta) E2
// and k < 0 the sine-paired class of mode |k| (same formulas with k -> -k).
// sigma1 = dtau / sqrt(F), sigma2 = sqrt(F) dtheta, E1 = sigma1^2 - sigma2^2, E2 = sigma1 sigma2 + sigma2 sigma1.
// rho frame: one-form (u, v) = ((A + B)/2, (A - B)/2), trace-free tensor (p, q) = ((P + Q)/2, (P - Q)/2).
enum class Rank { scalar, one_form, sym2_tracefree, sym2_full };
enum class Frame { sigma, rho };
enum class Boundary { none, dirichlet };

int components(Rank r);

struct ModeField {
    int k = 0;
    Rank rank = Rank::scalar;
    Frame frame = Frame::sigma;
    std::vector<Vec> c;

    ModeField() = default;
    ModeField(int k_, Rank r, Frame f, std::vector<Vec> comps);
    static ModeField zero(int k, Rank r, int n, Frame f = Frame::sigma);
    static ModeField from_stacked(int k, Rank r, Frame f, const Vec& v);

    int size() const { return c.empty() ? 0 : static_cast<int>(c.front().size()); }
    Vec stacked() const;
};

struct DiscreteOperator {
    SpMat matrix;
    Boundary bc = Boundary::none;
    int order = 2;

    Vec operator*(const Vec& x) const { return matrix * x; }
};

SpMat sparse_diag(const Vec& v);
SpMat sparse_identity(int n);
// Block matrix from n x n blocks; empty (0 x 0) entries are zero blocks.
SpMat block_matrix(const std::vector<std::vector<SpMat>>& blocks, int n);
// Replaces boundary rows of every n-sized component block by identity rows.
SpMat with_dirichlet_rows(const SpMat& m, int n);

// Operator matrices on stacked sigma-frame samples (rho where stated), signed k.
namespace op {
SpMat d(const MetricSamples& m, int k);                   // scalar -> one_form
SpMat delta1(const MetricSamples& m, int k);              // one_form -> scalar, delta = -div
SpMat div_star(const MetricSamples& m, int k);            // one_form -> sym2_full (f, P, Q)
SpMat delta2(const MetricSamples& m, int k);              // sym2_full -> one_form
SpMat delta_tf(const MetricSamples& m, int k);            // sym2_tracefree -> one_form
SpMat bianchi(const MetricSamples& m, int k);             // sym2_full -> one_form
SpMat conformal_killing(const MetricSamples& m, int k);   // one_form -> sym2_tracefree
SpMat hodge_laplacian(const MetricSamples& m, int k);     // one_form -> one_form
SpMat scalar_laplacian(const MetricSamples& m, int k);    // scalar -> scalar, nonnegative
SpMat P_sigma(const MetricSamples& m, int k);             // 1/2 (Delta_H - 2K)
SpMat P_rho(const MetricSamples& m, int k);               // 1/2 diag(P+, P-)
SpMat delta_rho(const MetricSamples& m, int k);           // rho tensors -> rho one-forms
SpMat rough_laplacian_tf(const MetricSamples& m, int k);  // 2 D delta - 2K
SpMat linearized_gauge_einstein(const MetricSamples& m, int k); // sym2_full -> sym2_full
SpMat linearized_gauss(const MetricSamples& m, int k);    // sym2_full -> scalar
SpMat double_divergence(const MetricSamples& m, int k);   // sym2_tracefree -> scalar, direct stencil
SpMat one_form_sigma_to_rho(int n);
SpMat one_form_rho_to_sigma(int n);
} // namespace op

ModeField to_rho(const ModeField& f);
ModeField to_sigma(const ModeField& f);

// Angular weight of a mode in L2 pairings: 2 pi for k = 0, pi otherwise.
Real theta_weight(int k);
Real l2_inner(const MetricSamples& m, const ModeField& a, const ModeField& b);
Real l2_norm(const MetricSamples& m, const ModeField& a);

ModeField apply_P_mode(const MetricSamples& m, int k, const ModeField& omega_rho);
ModeField apply_divergence_mode(const MetricSamples& m, int k, const ModeField& h_rho);
ModeField apply_div_star_mode(const MetricSamples& m, int k, const ModeField& omega);
ModeField apply_trace(const MetricSamples& m, const ModeField& h);
ModeField project_tracefree(const MetricSamples& m, const ModeField& h);
ModeField apply_bianchi_mode(const MetricSamples& m, int k, const ModeField& h);
ModeField apply_conformal_killing(const MetricSamples& m, int k, const ModeField& omega);
ModeField apply_hodge_laplacian_mode(const MetricSamples& m, int k, const ModeField& omega);
ModeField apply_linearized_gauge_einstein(const MetricSamples& m, int k, const ModeField& h);
ModeField apply_linearized_gauss(const MetricSamples& m, int k, const ModeField& h);

// ||B(delta* w) - 1/2 (Delta_H w - 2K w)|| / ||w||, the two sides by independent stencils.
Real weitzenboeck_residual(const MetricSamples& m, int k, const ModeField& omega);

// delta^{g1} h for g1 = e^{2u} g computed by a coordinate-form divergence of g1 and compared
// against e^{-2u} delta^g h; L2 discrepancy in the g1-orthonormal frame. u is rotational.
Real conformal_divergence_check(const MetricSamples& m, int k, const Vec& u, const ModeField& h_tf);

} // namespace wpcyl
