#include "wpcyl/model_surface.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace wpcyl {

Real smoothstep(Real x)
{
    if (x <= 0)
        return 0;
    if (x >= 1)
        return 1;
    return x * x * x * (10 - 15 * x + 6 * x * x);
}

Real smoothstep_d(Real x)
{
    if (x <= 0 || x >= 1)
        return 0;
    return 30 * x * x * (1 - x) * (1 - x);
}

namespace {

Real smoothstep_d2(Real x)
{
    if (x <= 0 || x >= 1)
        return 0;
    return 60 * x * (1 - x) * (1 - 2 * x);
}

constexpr Real kBlendStart = Real(0.875);
constexpr Real kBlendWidth = Real(0.625);
constexpr Real kThickStart = Real(1.5);

} // namespace

ModelSurfaceMetric::ModelSurfaceMetric(Real ell, ThickProfile thick) : ell_(ell), thick_(thick)
{
    require(ell >= 0, "model surface: ell must be nonnegative");
    require(thick.frequency > 0, "model surface: thick frequency must be positive");
}

Real ModelSurfaceMetric::blend(Real r)
{
    return 1 - smoothstep((r - kBlendStart) / kBlendWidth);
}

Real ModelSurfaceMetric::blend_d(Real r)
{
    return -smoothstep_d((r - kBlendStart) / kBlendWidth) / kBlendWidth;
}

Real ModelSurfaceMetric::blend_d2(Real r)
{
    return -smoothstep_d2((r - kBlendStart) / kBlendWidth) / (kBlendWidth * kBlendWidth);
}

Real ModelSurfaceMetric::E(Real r) const
{
    if (r <= kThickStart)
        return 0;
    const Real t = r - kThickStart, w = thick_.frequency, a = thick_.tilt;
    return t / w - std::sin(w * t) / (w * w) + a * (t * t / 2 - (1 - std::cos(w * t)) / (w * w));
}

Real ModelSurfaceMetric::E_d(Real r) const
{
    if (r <= kThickStart)
        return 0;
    const Real t = r - kThickStart, w = thick_.frequency, a = thick_.tilt;
    return (1 - std::cos(w * t)) / w + a * (t - std::sin(w * t) / w);
}

Real ModelSurfaceMetric::E_d2(Real r) const
{
    if (r <= kThickStart)
        return 0;
    const Real t = r - kThickStart, w = thick_.frequency, a = thick_.tilt;
    return std::sin(w * t) + a * (1 - std::cos(w * t));
}

Real ModelSurfaceMetric::F(Real tau) const
{
    const Real r = std::fabs(tau);
    return tau * tau + ell_ * ell_ * blend(r) + E(r);
}

Real ModelSurfaceMetric::dF(Real tau) const
{
    const Real r = std::fabs(tau);
    const Real s = tau < 0 ? -1 : 1;
    return 2 * tau + s * (ell_ * ell_ * blend_d(r) + E_d(r));
}

Real ModelSurfaceMetric::d2F(Real tau) const
{
    const Real r = std::fabs(tau);
    return 2 + ell_ * ell_ * blend_d2(r) + E_d2(r);
}

Real ModelSurfaceMetric::dF_dell(Real tau) const
{
    return 2 * ell_ * blend(std::fabs(tau));
}

Profile ModelSurfaceMetric::profile() const
{
    const ModelSurfaceMetric self = *this;
    return {[self](Real t) { return self.F(t); }, [self](Real t) { return self.dF(t); },
            [self](Real t) { return self.d2F(t); }};
}

ModelSurfaceMetric build_model_surface(Real ell, ThickProfile thick)
{
    return ModelSurfaceMetric(ell, thick);
}

Real CutoffPair::dchi1(Real tau) const
{
    const Real s = tau < 0 ? -1 : 1;
    return -4 * s * smoothstep_d((std::fabs(tau) - Real(0.5)) * 4);
}

Real CutoffPair::consistency(const RadialGrid& grid) const
{
    Real worst = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const Real t = grid[i];
        worst = std::max(worst, std::fabs(tchi1(t) * chi1(t) - chi1(t)));
        worst = std::max(worst, std::fabs(tchi0(t) * chi0(t) - chi0(t)));
        worst = std::max(worst, std::fabs(chi0(t) + chi1(t) - 1));
    }
    return worst;
}

std::vector<Real> model_surface_breakpoints()
{
    std::vector<Real> out{0};
    for (Real r : {Real(0.25), Real(0.375), Real(0.5), Real(0.75), Real(0.875), Real(1), Real(1.5)}) {
        out.push_back(r);
        out.push_back(-r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ModelSurface::ModelSurface(Real ell, SurfaceOptions opt, ThickProfile thick)
    : metric_(ell, thick), opt_(opt)
{
    require(ell > 0, "model surface discretization needs ell > 0 (the noded operators are built alongside)");
    require(opt.modes >= 0, "model surface: mode budget must be nonnegative");
    grid_ = std::make_shared<const RadialGrid>(
        RadialGrid::graded(-2, 2, opt.intervals, ell, 2, model_surface_breakpoints()));
    samples_ = std::make_shared<const MetricSamples>(grid_, metric_.profile(), ell, false);
    noded_ = std::make_shared<const MetricSamples>(grid_, metric_.noded().profile(), 0, false, true);
}

int ModelSurface::index(Real tau) const
{
    const int i = grid_->find(tau);
    require(i >= 0, "model surface: tau is not a grid node");
    return i;
}

struct IntervalSolver::Block {
    int i0, i1;
    Eigen::SparseLU<SpMat> lu;
};

IntervalSolver::IntervalSolver(const SpMat& A, const std::vector<std::pair<int, int>>& ranges)
    : n_(static_cast<int>(A.rows()))
{
    for (auto [i0, i1] : ranges) {
        require(0 <= i0 && i0 + 1 < i1 && i1 < n_, "interval solver: bad range");
        auto b = std::make_shared<Block>();
        b->i0 = i0;
        b->i1 = i1;
        const int m = i1 - i0 - 1;
        SpMat sub = A.block(i0 + 1, i0 + 1, m, m);
        sub.makeCompressed();
        b->lu.compute(sub);
        if (b->lu.info() != Eigen::Success)
            throw SolverError("interval solver: factorization failed on [" + std::to_string(i0) + ", "
                              + std::to_string(i1) + "]");
        blocks_.push_back(std::move(b));
    }
}

Vec IntervalSolver::solve(const Vec& h) const
{
    Vec x = Vec::Zero(n_);
    for (const auto& b : blocks_) {
        const int m = b->i1 - b->i0 - 1;
        x.segment(b->i0 + 1, m) = b->lu.solve(Vec(h.segment(b->i0 + 1, m)));
    }
    return x;
}

NeumannResult neumann_apply(const std::function<Vec(const Vec&)>& Gbar, const std::function<Vec(const Vec&)>& S,
                            const Vec& h, Real tol, int max_terms)
{
    NeumannResult r;
    const Real base = h.norm();
    Vec term = h, sum = h;
    r.terms = 1;
    if (base == 0) {
        r.solution = Gbar(h);
        return r;
    }
    while (r.terms < max_terms) {
        term = S(term);
        r.last_increment = term.norm() / base;
        if (r.last_increment <= tol)
            break;
        sum += term;
        ++r.terms;
    }
    if (r.last_increment > tol && r.terms >= max_terms)
        throw SolverError("Neumann series did not reach tolerance within " + std::to_string(max_terms) + " terms");
    r.solution = Gbar(sum);
    return r;
}

Real weighted_operator_norm(const std::function<Vec(const Vec&)>& apply, const Vec& weights,
                            const std::vector<int>& active, int iterations, Real tol)
{
    const int m = static_cast<int>(active.size());
    const int n = static_cast<int>(weights.size());
    Eigen::MatrixXd M(m, m);
    for (int c = 0; c < m; ++c) {
        Vec e = Vec::Zero(n);
        e(active[c]) = 1;
        const Vec y = apply(e);
        const Real sc = std::sqrt(weights(active[c]));
        for (int r = 0; r < m; ++r)
            M(r, c) = static_cast<double>(std::sqrt(weights(active[r])) * y(active[r]) / sc);
    }
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i)
        x(i) = 1.0 + 0.5 * std::sin(0.7 * i + 0.3);
    x.normalize();
    double sigma = 0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXd y = M.transpose() * (M * x);
        const double lam = y.norm();
        if (lam == 0)
            return 0;
        const double next = std::sqrt(lam);
        x = y / lam;
        if (it > 0 && std::fabs(next - sigma) <= static_cast<double>(tol) * next) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return sigma;
}

namespace {

SpMat channel_block(const MetricSamples& m, int j)
{
    const int n = m.size();
    const SpMat full = op::P_rho(m, j);
    return full.topLeftCorner(n, n);
}

void zero_row(SpMat& A, int row)
{
    for (int o = 0; o < A.outerSize(); ++o)
        for (SpMat::InnerIterator it(A, o); it; ++it)
            if (it.row() == row)
                it.valueRef() = 0;
}

} // namespace

ChannelParametrix::ChannelParametrix(const ModelSurface& s, int j) : s_(&s), j_(j)
{
    const RadialGrid& g = *s.grid();
    n_ = g.size();
    P_ = channel_block(s.samples(), j);
    P0_ = channel_block(s.noded_samples(), j);
    const int i0 = s.index(0);
    zero_row(P0_, i0);
    const CutoffPair& c = s.cutoffs();
    chi0_ = g.sample([&](Real t) { return c.chi0(t); });
    chi1_ = g.sample([&](Real t) { return c.chi1(t); });
    tchi0_ = g.sample([&](Real t) { return c.tchi0(t); });
    tchi1_ = g.sample([&](Real t) { return c.tchi1(t); });
    psi_ = g.sample([](Real t) { return 1 - smoothstep((std::fabs(t) - Real(0.25)) * 2); });

    const int last = n_ - 1;
    const int m1 = s.index(-1), p1 = s.index(1);
    im_ = s.index(-Real(0.25));
    ip_ = s.index(Real(0.25));
    global_ = std::make_unique<IntervalSolver>(P_, std::vector<std::pair<int, int>>{{0, last}});
    thin_ = std::make_unique<IntervalSolver>(P_, std::vector<std::pair<int, int>>{{m1, p1}});
    thick_ = std::make_unique<IntervalSolver>(P_, std::vector<std::pair<int, int>>{{0, im_}, {ip_, last}});
    global0_ = std::make_unique<IntervalSolver>(P0_, std::vector<std::pair<int, int>>{{0, i0}, {i0, last}});
    thin0_ = std::make_unique<IntervalSolver>(P0_, std::vector<std::pair<int, int>>{{m1, i0}, {i0, p1}});
    thick0_ = std::make_unique<IntervalSolver>(P0_, std::vector<std::pair<int, int>>{{0, im_}, {ip_, last}});
    for (int i = 1; i < last; ++i)
        active_.push_back(i);
}

Vec ChannelParametrix::interior(const Vec& h) const
{
    require(h.size() == n_, "channel parametrix: vector has wrong length");
    Vec x = h;
    x(0) = 0;
    x(n_ - 1) = 0;
    return x;
}

Vec ChannelParametrix::apply_P(const Vec& w) const
{
    Vec y = P_ * interior(w);
    y(0) = 0;
    y(n_ - 1) = 0;
    return y;
}

Vec ChannelParametrix::solve_direct(const Vec& h) const
{
    return global_->solve(interior(h));
}

Vec ChannelParametrix::local_inverse_thick(const Vec& h) const
{
    return thick_->solve(interior(h));
}

Vec ChannelParametrix::local_inverse_thin(const Vec& h) const
{
    return thin_->solve(interior(h));
}

Vec ChannelParametrix::apply_Gtilde(const Vec& h) const
{
    const Vec x = interior(h);
    return tchi0_.cwiseProduct(thick_->solve(chi0_.cwiseProduct(x)))
           + tchi1_.cwiseProduct(thin_->solve(chi1_.cwiseProduct(x)));
}

Vec ChannelParametrix::apply_R(const Vec& h) const
{
    return interior(h) - apply_P(apply_Gtilde(h));
}

Vec ChannelParametrix::apply_R_commutator(const Vec& h) const
{
    const Vec x = interior(h);
    const Vec w0 = thick_->solve(chi0_.cwiseProduct(x));
    const Vec w1 = thin_->solve(chi1_.cwiseProduct(x));
    auto comm = [&](const Vec& chi, const Vec& w) {
        return Vec(apply_P(chi.cwiseProduct(w)) - chi.cwiseProduct(apply_P(w)));
    };
    return -(comm(tchi0_, w0) + comm(tchi1_, w1));
}

Vec ChannelParametrix::apply_R0(const Vec& h) const
{
    const Vec x = interior(h);
    const Vec g = tchi0_.cwiseProduct(thick0_->solve(chi0_.cwiseProduct(x)))
                  + tchi1_.cwiseProduct(thin0_->solve(chi1_.cwiseProduct(x)));
    Vec y = P0_ * g;
    y(0) = 0;
    y(n_ - 1) = 0;
    Vec r = x - y;
    r(s_->index(0)) = 0;
    return r;
}

Vec ChannelParametrix::apply_F(const Vec& h) const
{
    Vec f = global0_->solve(apply_R0(h));
    if (j_ != 0)
        return f;
    // replace the noded branches tau_+, tau_- near the node by exact homogeneous solutions of P_ell
    const RadialGrid& g = *s_->grid();
    const Real ell = s_->ell();
    const Real ap = f(ip_) / g[ip_], am = f(im_) / g[im_];
    const Real A = (ap - am) / 2, B = (ap + am) / 2;
    for (int i = 0; i < n_; ++i) {
        if (psi_(i) == 0)
            continue;
        const Real t = g[i];
        const Real T = t / ell;
        const Real r = std::sqrt(T * T + 1);
        const Real w = 2 / kPi * ell * (T / r + r * std::atan(T));
        f(i) += psi_(i) * (A * (std::sqrt(t * t + ell * ell) - std::fabs(t)) + B * (w - t));
    }
    return f;
}

Vec ChannelParametrix::apply_Gbar(const Vec& h) const
{
    return apply_Gtilde(h) + apply_F(h);
}

Vec ChannelParametrix::apply_S(const Vec& h) const
{
    return interior(h) - apply_P(apply_Gbar(h));
}

NeumannResult ChannelParametrix::apply_inverse(const Vec& h) const
{
    return neumann_apply([this](const Vec& x) { return apply_Gbar(x); }, [this](const Vec& x) { return apply_S(x); },
                         interior(h), s_->options().neumann_tol, s_->options().neumann_max_terms);
}

Real ChannelParametrix::norm_R() const
{
    const auto& o = s_->options();
    return weighted_operator_norm([this](const Vec& x) { return apply_R(x); }, s_->grid()->weights(), active_,
                                  o.power_iterations, o.power_tol);
}

Real ChannelParametrix::norm_S() const
{
    const auto& o = s_->options();
    return weighted_operator_norm([this](const Vec& x) { return apply_S(x); }, s_->grid()->weights(), active_,
                                  o.power_iterations, o.power_tol);
}

Real ChannelParametrix::min_singular_value() const
{
    const auto& o = s_->options();
    const Real inv = weighted_operator_norm([this](const Vec& x) { return solve_direct(x); }, s_->grid()->weights(),
                                            active_, o.power_iterations, o.power_tol);
    return 1 / inv;
}

SurfaceInverse::SurfaceInverse(std::shared_ptr<const ModelSurface> s) : s_(std::move(s)) {}

const ChannelParametrix& SurfaceInverse::channel(int j) const
{
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = channels_.find(j);
    if (it == channels_.end())
        it = channels_.emplace(j, std::make_unique<ChannelParametrix>(*s_, j)).first;
    return *it->second;
}

ModeField SurfaceInverse::apply(const ModeField& h_rho) const
{
    require(h_rho.rank == Rank::one_form, "surface inverse: expected a one-form");
    const ModeField h = to_rho(h_rho);
    const Vec u = channel(h.k).apply_inverse(h.c[0]).solution;
    const Vec v = channel(-h.k).apply_inverse(h.c[1]).solution;
    return ModeField(h.k, Rank::one_form, Frame::rho, {u, v});
}

ModeField SurfaceInverse::apply_direct(const ModeField& h_rho) const
{
    require(h_rho.rank == Rank::one_form, "surface inverse: expected a one-form");
    const ModeField h = to_rho(h_rho);
    return ModeField(h.k, Rank::one_form, Frame::rho,
                     {channel(h.k).solve_direct(h.c[0]), channel(-h.k).solve_direct(h.c[1])});
}

ParametrixReport SurfaceInverse::report(const std::vector<ModeField>& probes) const
{
    ParametrixReport r;
    r.ell = s_->ell();
    const int K = s_->options().modes;
    for (int j = -K; j <= K; ++j) {
        const ChannelParametrix& c = channel(j);
        const Real ns = c.norm_S();
        r.channel_norm_S.emplace_back(j, ns);
        r.norm_S = std::max(r.norm_S, ns);
        r.norm_R = std::max(r.norm_R, c.norm_R());
    }
    for (const ModeField& p : probes) {
        const ModeField h = to_rho(p);
        for (int comp = 0; comp < 2; ++comp) {
            const ChannelParametrix& c = channel(comp == 0 ? h.k : -h.k);
            const NeumannResult nr = c.apply_inverse(h.c[comp]);
            const Vec direct = c.solve_direct(h.c[comp]);
            r.neumann_terms = std::max(r.neumann_terms, nr.terms);
            const Vec rhs = [&] { Vec x = h.c[comp]; x(0) = 0; x(x.size() - 1) = 0; return x; }();
            const Real hn = rhs.norm();
            if (hn > 0)
                r.residual = std::max(r.residual, (c.apply_P(nr.solution) - rhs).norm() / hn);
            const Real dn = direct.norm();
            if (dn > 0)
                r.direct_rel_err = std::max(r.direct_rel_err, (nr.solution - direct).norm() / dn);
        }
    }
    return r;
}

struct TTProjector::ModeOps {
    SpMat delta, ck, select;
    Eigen::SparseLU<SpMat> lu;
};

TTProjector::TTProjector(std::shared_ptr<const ModelSurface> s, const MetricSamples* metric)
    : s_(std::move(s)), m_(metric ? metric : &s_->samples())
{
}

const TTProjector::ModeOps& TTProjector::ops(int k) const
{
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(k);
    if (it != cache_.end())
        return *it->second;
    auto o = std::make_shared<ModeOps>();
    const int n = m_->size();
    o->delta = op::delta_tf(*m_, k);
    o->ck = op::conformal_killing(*m_, k);
    std::vector<Triplet> t;
    int r = 0;
    for (int c = 0; c < 2 * n; ++c)
        if (c % n != 0 && c % n != n - 1)
            t.emplace_back(r++, c, Real(1));
    o->select.resize(r, 2 * n);
    o->select.setFromTriplets(t.begin(), t.end());
    SpMat M = o->select * o->delta * o->ck * SpMat(o->select.transpose());
    M.makeCompressed();
    o->lu.compute(M);
    if (o->lu.info() != Eigen::Success)
        throw SolverError("tt projector: factorization of delta pi delta* failed for mode " + std::to_string(k));
    return *cache_.emplace(k, o).first->second;
}

ModeField TTProjector::apply(const ModeField& h) const
{
    const ModeField p = project_tracefree(*m_, to_sigma(h));
    const ModeOps& o = ops(p.k);
    const Vec x = p.stacked();
    const Vec rhs = o.select * (o.delta * x);
    const Vec w = o.select.transpose() * Vec(o.lu.solve(rhs));
    return ModeField::from_stacked(p.k, Rank::sym2_tracefree, Frame::sigma, x - o.ck * w);
}

ModeField TTProjector::divergence(const ModeField& h) const
{
    const ModeField p = project_tracefree(*m_, to_sigma(h));
    return ModeField::from_stacked(p.k, Rank::one_form, Frame::sigma, ops(p.k).delta * p.stacked());
}

std::vector<ModeField> project_tt(const TTProjector& T, const std::vector<ModeField>& g_dot)
{
    std::vector<ModeField> out;
    out.reserve(g_dot.size());
    for (const ModeField& h : g_dot)
        out.push_back(T.apply(h));
    return out;
}

namespace {

ModeField cutoff_times(const ModelSurface& s, const std::function<std::pair<Real, Real>(Real)>& comp, int k)
{
    const RadialGrid& g = *s.grid();
    Vec P = Vec::Zero(g.size()), Q = Vec::Zero(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const Real c = s.cutoffs().chi1(g[i]);
        if (c == 0)
            continue;
        const auto [p, q] = comp(g[i]);
        P(i) = c * p;
        Q(i) = c * q;
    }
    return ModeField(k, Rank::sym2_tracefree, Frame::sigma, {P, Q});
}

} // namespace

CutoffTensors build_cutoff_tensors(const ModelSurface& s, const TTProjector& T)
{
    CutoffTensors c;
    const TTBasisElement k0 = tt_element(TTKind::kappa, 0, s.ell());
    const TTBasisElement n0 = tt_element(TTKind::nu, 0, s.ell());
    c.mu_hat1 = cutoff_times(s, [&](Real t) { return k0.components(t); }, 0);
    c.mu_hat2 = cutoff_times(s, [&](Real t) { return n0.components(t); }, 0);
    c.mu1 = T.apply(c.mu_hat1);
    c.mu2 = T.apply(c.mu_hat2);
    const MetricSamples& m = s.samples();
    c.div_norm1 = l2_norm(m, T.divergence(c.mu_hat1));
    c.div_norm2 = l2_norm(m, T.divergence(c.mu_hat2));
    auto diff = [&](const ModeField& a, const ModeField& b) {
        return l2_norm(m, ModeField(a.k, a.rank, Frame::sigma, {a.c[0] - b.c[0], a.c[1] - b.c[1]}));
    };
    c.defect1 = diff(c.mu1, c.mu_hat1);
    c.defect2 = diff(c.mu2, c.mu_hat2);
    return c;
}

TTFrame assemble_tt_frame(const ModelSurface& s, const TTProjector& T, int m)
{
    require(m >= 0 && m % 2 == 0, "assemble_tt_frame: frame size must be even");
    TTFrame f;
    const CutoffTensors c = build_cutoff_tensors(s, T);
    f.members = {c.mu1, c.mu2};
    std::vector<ModeField> hats = {c.mu_hat1, c.mu_hat2};
    for (int k = 1; k <= m / 2; ++k)
        for (TTKind kind : {TTKind::kappa, TTKind::nu}) {
            const TTBasisElement e = tt_limit(kind, k);
            auto comp = [&](Real t) { return t == 0 ? std::pair<Real, Real>{0, 0} : e.components(t); };
            const ModeField hat = cutoff_times(s, comp, e.signed_k());
            f.members.push_back(T.apply(hat));
        }
    const int q = static_cast<int>(f.members.size());
    const MetricSamples& ms = s.samples();
    f.gram = Mat::Zero(q, q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            f.gram(a, b) = l2_inner(ms, f.members[a], f.members[b]);
    Eigen::SelfAdjointEigenSolver<Mat> eig(f.gram);
    f.min_eigenvalue = eig.eigenvalues().minCoeff();
    for (int i = 0; i < 2; ++i)
        for (int j = 2; j < q; ++j)
            f.max_cross = std::max(f.max_cross, std::fabs(l2_inner(ms, hats[i], f.members[j])));
    return f;
}

} // namespace wpcyl
