#pragma once

#include "wpcyl/mode_calculus.hpp"
#include "wpcyl/tt_basis.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace wpcyl {

// C2 quintic smoothstep on [0, 1], clamped outside.
Real smoothstep(Real x);
Real smoothstep_d(Real x);

// Thick-end shape: beyond |tau| = 3/2 the profile bends with E'' = sin(w t) + tilt (1 - cos(w t)).
struct ThickProfile {
    Real frequency = 4 * kPi;
    Real tilt = Real(0.5);
};

// Dirichlet surrogate on tau in [-2, 2]: F = tau^2 + ell^2 b(|tau|) + E(|tau|),
// b = 1 on |tau| <= 7/8 fading to 0 at 3/2, E = 0 on |tau| <= 3/2.
class ModelSurfaceMetric {
public:
    explicit ModelSurfaceMetric(Real ell, ThickProfile thick = {});

    Real ell() const { return ell_; }
    Real tau_max() const { return 2; }
    const ThickProfile& thick() const { return thick_; }

    Real F(Real tau) const;
    Real dF(Real tau) const;
    Real d2F(Real tau) const;
    Real curvature(Real tau) const { return -d2F(tau) / 2; }
    // dF/d(ell) = 2 ell b(|tau|)
    Real dF_dell(Real tau) const;
    Profile profile() const;
    // Same thick part with ell = 0 (noded).
    ModelSurfaceMetric noded() const { return ModelSurfaceMetric(0, thick_); }

    static Real blend(Real r);
    static Real blend_d(Real r);
    static Real blend_d2(Real r);

private:
    Real E(Real r) const;
    Real E_d(Real r) const;
    Real E_d2(Real r) const;

    Real ell_;
    ThickProfile thick_;
};

ModelSurfaceMetric build_model_surface(Real ell, ThickProfile thick = {});

// chi1: 1 on |tau| <= 1/2, 0 for |tau| >= 3/4; chi0 = 1 - chi1.
// tchi1: 1 on |tau| <= 3/4, 0 for |tau| >= 1. tchi0: 0 on |tau| <= 1/4, 1 for |tau| >= 1/2.
struct CutoffPair {
    Real chi1(Real tau) const { return 1 - smoothstep((std::fabs(tau) - Real(0.5)) * 4); }
    Real chi0(Real tau) const { return 1 - chi1(tau); }
    Real tchi1(Real tau) const { return 1 - smoothstep((std::fabs(tau) - Real(0.75)) * 4); }
    Real tchi0(Real tau) const { return smoothstep((std::fabs(tau) - Real(0.25)) * 4); }
    Real dchi1(Real tau) const;
    // Checks tchi_j chi_j = chi_j on the grid and returns the max violation.
    Real consistency(const RadialGrid& grid) const;
};

struct SurfaceOptions {
    int intervals = 1200;
    int modes = 4;
    Real neumann_tol = Real(1e-14);
    int neumann_max_terms = 200;
    int power_iterations = 500;
    Real power_tol = Real(1e-6);
};

// Breakpoints used by every model-surface grid (cutoff transitions and subdomain ends are nodes).
std::vector<Real> model_surface_breakpoints();

class ModelSurface {
public:
    ModelSurface(Real ell, SurfaceOptions opt = {}, ThickProfile thick = {});

    Real ell() const { return metric_.ell(); }
    const ModelSurfaceMetric& metric() const { return metric_; }
    const SurfaceOptions& options() const { return opt_; }
    std::shared_ptr<const RadialGrid> grid() const { return grid_; }
    const MetricSamples& samples() const { return *samples_; }
    const MetricSamples& noded_samples() const { return *noded_; }
    const CutoffPair& cutoffs() const { return cut_; }
    int index(Real tau) const;

private:
    ModelSurfaceMetric metric_;
    SurfaceOptions opt_;
    std::shared_ptr<const RadialGrid> grid_;
    std::shared_ptr<const MetricSamples> samples_, noded_;
    CutoffPair cut_;
};

// Dirichlet solves of a scalar operator on unions of node ranges [i0, i1] (end nodes pinned to 0).
class IntervalSolver {
public:
    IntervalSolver(const SpMat& A, const std::vector<std::pair<int, int>>& ranges);
    Vec solve(const Vec& h) const;

private:
    struct Block;
    std::vector<std::shared_ptr<Block>> blocks_;
    int n_;
};

struct NeumannResult {
    Vec solution;
    int terms = 0;
    Real last_increment = 0;
};

// w = Gbar sum_j S^j h, stopping once ||S^j h|| <= tol ||h||.
NeumannResult neumann_apply(const std::function<Vec(const Vec&)>& Gbar, const std::function<Vec(const Vec&)>& S,
                            const Vec& h, Real tol, int max_terms);

// Largest singular value of a linear map in the weighted L2 norm sum w_i x_i^2,
// by power iteration on the assembled dense matrix.
Real weighted_operator_norm(const std::function<Vec(const Vec&)>& apply, const Vec& weights,
                            const std::vector<int>& active, int iterations, Real tol);

// Parametrix machinery for one scalar channel 1/2 P+_j (j in [-K, K]); P- of mode k is channel -k.
class ChannelParametrix {
public:
    ChannelParametrix(const ModelSurface& s, int j);

    int channel() const { return j_; }
    Vec apply_P(const Vec& w) const;
    Vec solve_direct(const Vec& h) const;
    Vec local_inverse_thick(const Vec& h) const;
    Vec local_inverse_thin(const Vec& h) const;
    Vec apply_Gtilde(const Vec& h) const;
    Vec apply_R(const Vec& h) const;            // h - P Gtilde h
    Vec apply_R_commutator(const Vec& h) const; // -sum_j [P, tchi_j] G_j chi_j
    Vec apply_R0(const Vec& h) const;
    Vec apply_F(const Vec& h) const;
    Vec apply_Gbar(const Vec& h) const;
    Vec apply_S(const Vec& h) const; // h - P Gbar h
    NeumannResult apply_inverse(const Vec& h) const;
    Real norm_R() const;
    Real norm_S() const;
    // Smallest singular value of the Dirichlet P in the weighted norm (inverse power iteration).
    Real min_singular_value() const;

private:
    Vec interior(const Vec& h) const;

    const ModelSurface* s_;
    int j_;
    int n_;
    SpMat P_, P0_;
    Vec chi0_, chi1_, tchi0_, tchi1_, psi_;
    std::unique_ptr<IntervalSolver> global_, thick_, thin_, thick0_, thin0_, global0_;
    int ip_, im_;
    std::vector<int> active_;
};

struct ParametrixReport {
    Real ell = 0;
    Real norm_R = 0;
    Real norm_S = 0;
    std::vector<std::pair<int, Real>> channel_norm_S;
    int neumann_terms = 0;
    Real residual = 0;
    Real direct_rel_err = 0;
};

// Mode-level global inverse of P (rho one-forms, Dirichlet at tau = +-2).
class SurfaceInverse {
public:
    explicit SurfaceInverse(std::shared_ptr<const ModelSurface> s);

    const ModelSurface& surface() const { return *s_; }
    const ChannelParametrix& channel(int j) const;
    ModeField apply(const ModeField& h_rho) const;
    ModeField apply_direct(const ModeField& h_rho) const;
    // Norms over channels |j| <= K and a Neumann-vs-direct comparison on the given rhs.
    ParametrixReport report(const std::vector<ModeField>& probes) const;

private:
    std::shared_ptr<const ModelSurface> s_;
    mutable std::map<int, std::unique_ptr<ChannelParametrix>> channels_;
    mutable std::mutex mutex_;
};

// T = pi - pi delta* M delta pi on trace-free parts, M the inverse of delta pi delta* on Dirichlet one-forms.
class TTProjector {
public:
    TTProjector(std::shared_ptr<const ModelSurface> s, const MetricSamples* metric = nullptr);
    ModeField apply(const ModeField& h) const;
    // delta of the trace-free part, as a sigma one-form
    ModeField divergence(const ModeField& h) const;
    const MetricSamples& metric() const { return *m_; }
    const ModelSurface& surface() const { return *s_; }

private:
    struct ModeOps;
    const ModeOps& ops(int k) const;
    std::shared_ptr<const ModelSurface> s_;
    const MetricSamples* m_;
    mutable std::map<int, std::shared_ptr<ModeOps>> cache_;
    mutable std::mutex mutex_;
};

std::vector<ModeField> project_tt(const TTProjector& T, const std::vector<ModeField>& g_dot);

struct CutoffTensors {
    ModeField mu_hat1, mu_hat2; // chi kappa_{ell,0}, chi nu_{ell,0}
    ModeField mu1, mu2;         // projections
    Real div_norm1 = 0, div_norm2 = 0;
    Real defect1 = 0, defect2 = 0; // ||mu - mu_hat||
};

CutoffTensors build_cutoff_tensors(const ModelSurface& s, const TTProjector& T);

struct TTFrame {
    std::vector<ModeField> members;
    Mat gram;
    Real min_eigenvalue = 0;
    Real max_cross = 0;
};

// {mu1, mu2} plus projections of chi kappa_{0,k}, chi nu_{0,k}, k = 1..m/2.
TTFrame assemble_tt_frame(const ModelSurface& s, const TTProjector& T, int m);

} // namespace wpcyl
