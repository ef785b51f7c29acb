#include "wpcyl/mode_calculus.hpp"

#include <cmath>

namespace wpcyl {

int components(Rank r)
{
    switch (r) {
    case Rank::scalar:
        return 1;
    case Rank::one_form:
    case Rank::sym2_tracefree:
        return 2;
    case Rank::sym2_full:
        return 3;
    }
    return 1;
}

ModeField::ModeField(int k_, Rank r, Frame f, std::vector<Vec> comps)
    : k(k_), rank(r), frame(f), c(std::move(comps))
{
    require(static_cast<int>(c.size()) == components(rank), "mode field: wrong number of components");
    for (const Vec& v : c)
        require(v.size() == c.front().size(), "mode field: components of different length");
    require(frame == Frame::sigma || rank == Rank::one_form || rank == Rank::sym2_tracefree,
            "mode field: rho frame exists for one-forms and trace-free tensors only");
}

ModeField ModeField::zero(int k, Rank r, int n, Frame f)
{
    return ModeField(k, r, f, std::vector<Vec>(static_cast<std::size_t>(components(r)), Vec::Zero(n)));
}

ModeField ModeField::from_stacked(int k, Rank r, Frame f, const Vec& v)
{
    const int m = components(r);
    require(v.size() % m == 0, "mode field: stacked length not divisible by component count");
    const int n = static_cast<int>(v.size()) / m;
    std::vector<Vec> comps;
    for (int j = 0; j < m; ++j)
        comps.push_back(v.segment(j * n, n));
    return ModeField(k, r, f, std::move(comps));
}

Vec ModeField::stacked() const
{
    const int n = size();
    Vec out(n * static_cast<int>(c.size()));
    for (std::size_t j = 0; j < c.size(); ++j)
        out.segment(static_cast<int>(j) * n, n) = c[j];
    return out;
}

SpMat sparse_diag(const Vec& v)
{
    const int n = static_cast<int>(v.size());
    SpMat m(n, n);
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        t.emplace_back(i, i, v(i));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SpMat sparse_identity(int n)
{
    return sparse_diag(Vec::Ones(n));
}

SpMat block_matrix(const std::vector<std::vector<SpMat>>& blocks, int n)
{
    const int rows = static_cast<int>(blocks.size());
    const int cols = static_cast<int>(blocks.front().size());
    std::vector<Triplet> t;
    for (int bi = 0; bi < rows; ++bi) {
        require(static_cast<int>(blocks[bi].size()) == cols, "block_matrix: ragged block rows");
        for (int bj = 0; bj < cols; ++bj) {
            const SpMat& b = blocks[bi][bj];
            if (b.rows() == 0)
                continue;
            require(b.rows() == n && b.cols() == n, "block_matrix: block of wrong size");
            for (int o = 0; o < b.outerSize(); ++o)
                for (SpMat::InnerIterator it(b, o); it; ++it)
                    t.emplace_back(bi * n + static_cast<int>(it.row()), bj * n + static_cast<int>(it.col()), it.value());
        }
    }
    SpMat m(rows * n, cols * n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SpMat with_dirichlet_rows(const SpMat& m, int n)
{
    std::vector<Triplet> t;
    auto boundary = [n](Eigen::Index r) { return r % n == 0 || r % n == n - 1; };
    for (int o = 0; o < m.outerSize(); ++o)
        for (SpMat::InnerIterator it(m, o); it; ++it)
            if (!boundary(it.row()))
                t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (boundary(r))
            t.emplace_back(static_cast<int>(r), static_cast<int>(r), Real(1));
    SpMat out(m.rows(), m.cols());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

namespace op {
namespace {

struct Pieces {
    int n;
    SpMat D, D2, F, Fp, Fpp, s, inv_s;
    Vec Fv, Fpv, Fppv, sv;
};

Pieces pieces(const MetricSamples& m)
{
    Pieces p;
    p.n = m.size();
    p.D = m.grid->d1();
    p.D2 = m.grid->d2();
    p.Fv = m.F;
    p.Fpv = m.dF;
    p.Fppv = m.d2F;
    p.sv = m.sqrtF;
    p.F = sparse_diag(m.F);
    p.Fp = sparse_diag(m.dF);
    p.Fpp = sparse_diag(m.d2F);
    p.s = sparse_diag(m.sqrtF);
    p.inv_s = sparse_diag(m.sqrtF.cwiseInverse());
    return p;
}

SpMat Z()
{
    return SpMat();
}

} // namespace

SpMat d(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    return block_matrix({{SpMat(p.s * p.D)}, {SpMat(-Real(k) * p.inv_s)}}, p.n);
}

SpMat delta1(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    return block_matrix({{SpMat(-(p.D * p.s)), SpMat(-Real(k) * p.inv_s)}}, p.n);
}

SpMat div_star(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    const SpMat q = p.inv_s / 4;
    const SpMat twoFD = 2 * p.F * p.D;
    const SpMat fA = q * (twoFD + p.Fp);
    const SpMat fB = 2 * Real(k) * q;
    const SpMat PA = q * (twoFD - p.Fp);
    const SpMat PB = -2 * Real(k) * q;
    const SpMat QA = -2 * Real(k) * q;
    const SpMat QB = q * (twoFD - p.Fp);
    return block_matrix({{fA, fB}, {PA, PB}, {QA, QB}}, p.n);
}

SpMat delta2(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    const SpMat flux = p.D * p.F;
    const SpMat Af = -(p.inv_s * (flux - p.Fp));
    const SpMat AP = -(p.inv_s * flux);
    const SpMat AQ = -Real(k) * p.inv_s;
    const SpMat Bf = Real(k) * p.inv_s;
    const SpMat BP = -Real(k) * p.inv_s;
    const SpMat BQ = -(p.inv_s * flux);
    return block_matrix({{Af, AP, AQ}, {Bf, BP, BQ}}, p.n);
}

SpMat delta_tf(const MetricSamples& m, int k)
{
    const int n = m.size();
    const SpMat full = delta2(m, k);
    return full.rightCols(2 * n);
}

SpMat bianchi(const MetricSamples& m, int k)
{
    const int n = m.size();
    SpMat b = delta2(m, k);
    const SpMat lift = block_matrix({{sparse_identity(n)}, {Z()}, {Z()}}, n);
    b += d(m, k) * SpMat(lift.transpose());
    return b;
}

SpMat conformal_killing(const MetricSamples& m, int k)
{
    const int n = m.size();
    const SpMat full = div_star(m, k);
    return full.bottomRows(2 * n);
}

SpMat hodge_laplacian(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    const Real kk = Real(k);
    const Vec pot = (kk * kk) * p.Fv.cwiseInverse() - p.Fppv / 2
                    + p.Fpv.cwiseProduct(p.Fpv).cwiseQuotient(4 * p.Fv);
    const SpMat diagonal = -(p.F * p.D2) - p.Fp * p.D + sparse_diag(pot);
    const SpMat off = sparse_diag(kk * p.Fpv.cwiseQuotient(p.Fv));
    return block_matrix({{diagonal, off}, {off, diagonal}}, p.n);
}

SpMat scalar_laplacian(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    const Real kk = Real(k);
    return SpMat(-(p.F * p.D2) - p.Fp * p.D + sparse_diag((kk * kk) * p.Fv.cwiseInverse()));
}

SpMat P_sigma(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    SpMat out = hodge_laplacian(m, k);
    out += block_matrix({{p.Fpp, Z()}, {Z(), p.Fpp}}, p.n);
    return out / 2;
}

SpMat P_rho(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    const Real kk = Real(k);
    auto part = [&](Real sgn) {
        const Vec a = p.Fpv / 2 + Vec::Constant(p.n, sgn * kk);
        const Vec pot = p.Fppv / 2 + a.cwiseProduct(a).cwiseQuotient(p.Fv);
        return SpMat(-(p.F * p.D2) - p.Fp * p.D + sparse_diag(pot));
    };
    return block_matrix({{part(1), Z()}, {Z(), part(-1)}}, p.n) / 2;
}

SpMat delta_rho(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    const Real kk = Real(k);
    const SpMat up = -(p.s * p.D + sparse_diag((p.Fpv + Vec::Constant(p.n, kk)).cwiseQuotient(p.sv)));
    const SpMat down = -(p.s * p.D + sparse_diag((p.Fpv - Vec::Constant(p.n, kk)).cwiseQuotient(p.sv)));
    return block_matrix({{up, Z()}, {Z(), down}}, p.n);
}

SpMat rough_laplacian_tf(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    SpMat out = 2 * (conformal_killing(m, k) * delta_tf(m, k));
    out += block_matrix({{p.Fpp, Z()}, {Z(), p.Fpp}}, p.n);
    return out;
}

SpMat linearized_gauge_einstein(const MetricSamples& m, int k)
{
    require(m.hyperbolic, "linearized gauged Einstein operator needs a hyperbolic base metric");
    const Pieces p = pieces(m);
    const int n = p.n;
    // h0 part: 1/2 (rough - 2) h0 = D delta h0 - (K + 1) h0, with K = -F''/2
    SpMat tf = conformal_killing(m, k) * delta_tf(m, k);
    const SpMat shift = sparse_diag(p.Fppv / 2 - Vec::Ones(n));
    tf += block_matrix({{shift, Z()}, {Z(), shift}}, n);
    const SpMat trace = scalar_laplacian(m, k) / 2 + sparse_identity(n);
    SpMat out(3 * n, 3 * n);
    std::vector<Triplet> t;
    for (int o = 0; o < trace.outerSize(); ++o)
        for (SpMat::InnerIterator it(trace, o); it; ++it)
            t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int o = 0; o < tf.outerSize(); ++o)
        for (SpMat::InnerIterator it(tf, o); it; ++it)
            t.emplace_back(n + static_cast<int>(it.row()), n + static_cast<int>(it.col()), it.value());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

SpMat double_divergence(const MetricSamples& m, int k)
{
    const Pieces p = pieces(m);
    const Real kk = Real(k);
    const SpMat invF = sparse_diag(p.Fv.cwiseInverse());
    const SpMat onP = p.F * p.D2 + 2 * p.Fp * p.D + p.Fpp + (kk * kk) * invF;
    const SpMat onQ = 2 * kk * p.D + kk * invF * p.Fp;
    return block_matrix({{onP, onQ}}, p.n);
}

SpMat linearized_gauss(const MetricSamples& m, int k)
{
    const int n = m.size();
    const SpMat f = scalar_laplacian(m, k) / 2 + sparse_identity(n);
    const SpMat dd = double_divergence(m, k) / 2;
    return block_matrix({{f, SpMat(dd.leftCols(n)), SpMat(dd.rightCols(n))}}, n);
}

SpMat one_form_sigma_to_rho(int n)
{
    const SpMat h = sparse_identity(n) / 2;
    return block_matrix({{h, h}, {h, SpMat(-h)}}, n);
}

SpMat one_form_rho_to_sigma(int n)
{
    const SpMat i = sparse_identity(n);
    return block_matrix({{i, i}, {i, SpMat(-i)}}, n);
}

} // namespace op

ModeField to_rho(const ModeField& f)
{
    if (f.frame == Frame::rho)
        return f;
    require(f.rank == Rank::one_form || f.rank == Rank::sym2_tracefree, "to_rho: unsupported rank");
    return ModeField(f.k, f.rank, Frame::rho, {(f.c[0] + f.c[1]) / 2, (f.c[0] - f.c[1]) / 2});
}

ModeField to_sigma(const ModeField& f)
{
    if (f.frame == Frame::sigma)
        return f;
    return ModeField(f.k, f.rank, Frame::sigma, {f.c[0] + f.c[1], f.c[0] - f.c[1]});
}

Real theta_weight(int k)
{
    return k == 0 ? 2 * kPi : kPi;
}

Real l2_inner(const MetricSamples& m, const ModeField& a, const ModeField& b)
{
    require(a.rank == b.rank, "l2_inner: rank mismatch");
    require(a.size() == m.size() && b.size() == m.size(), "l2_inner: grid mismatch");
    if (a.k != b.k)
        return 0;
    const ModeField x = to_sigma(a), y = to_sigma(b);
    Vec density = Vec::Zero(m.size());
    for (std::size_t j = 0; j < x.c.size(); ++j)
        density += x.c[j].cwiseProduct(y.c[j]);
    if (a.rank == Rank::sym2_full || a.rank == Rank::sym2_tracefree)
        density *= 2;
    return theta_weight(a.k) * m.grid->integrate(density);
}

Real l2_norm(const MetricSamples& m, const ModeField& a)
{
    return std::sqrt(std::max(Real(0), l2_inner(m, a, a)));
}

namespace {

void check(const MetricSamples& m, const ModeField& f, Rank r, int k)
{
    require(f.rank == r, "mode operator: rank mismatch");
    require(f.size() == m.size(), "mode operator: field and metric grid differ");
    require(f.k == k, "mode operator: mode index mismatch");
}

ModeField full_from(const ModeField& h)
{
    const ModeField s = to_sigma(h);
    if (s.rank == Rank::sym2_full)
        return s;
    require(s.rank == Rank::sym2_tracefree, "expected a symmetric two-tensor");
    return ModeField(s.k, Rank::sym2_full, Frame::sigma, {Vec::Zero(s.size()), s.c[0], s.c[1]});
}

} // namespace

ModeField apply_P_mode(const MetricSamples& m, int k, const ModeField& omega_rho)
{
    check(m, omega_rho, Rank::one_form, k);
    const ModeField w = to_rho(omega_rho);
    return ModeField::from_stacked(k, Rank::one_form, Frame::rho, op::P_rho(m, k) * w.stacked());
}

ModeField apply_divergence_mode(const MetricSamples& m, int k, const ModeField& h_rho)
{
    check(m, h_rho, Rank::sym2_tracefree, k);
    const ModeField h = to_rho(h_rho);
    return ModeField::from_stacked(k, Rank::one_form, Frame::rho, op::delta_rho(m, k) * h.stacked());
}

ModeField apply_div_star_mode(const MetricSamples& m, int k, const ModeField& omega)
{
    check(m, omega, Rank::one_form, k);
    return ModeField::from_stacked(k, Rank::sym2_full, Frame::sigma, op::div_star(m, k) * to_sigma(omega).stacked());
}

ModeField apply_trace(const MetricSamples& m, const ModeField& h)
{
    require(h.size() == m.size(), "apply_trace: grid mismatch");
    if (h.rank == Rank::sym2_tracefree)
        return ModeField::zero(h.k, Rank::scalar, h.size());
    require(h.rank == Rank::sym2_full, "apply_trace: expected a symmetric two-tensor");
    return ModeField(h.k, Rank::scalar, Frame::sigma, {2 * h.c[0]});
}

ModeField project_tracefree(const MetricSamples& m, const ModeField& h)
{
    require(h.size() == m.size(), "project_tracefree: grid mismatch");
    if (h.rank == Rank::sym2_tracefree)
        return h;
    require(h.rank == Rank::sym2_full, "project_tracefree: expected a symmetric two-tensor");
    return ModeField(h.k, Rank::sym2_tracefree, Frame::sigma, {h.c[1], h.c[2]});
}

ModeField apply_bianchi_mode(const MetricSamples& m, int k, const ModeField& h)
{
    const ModeField f = full_from(h);
    check(m, f, Rank::sym2_full, k);
    return ModeField::from_stacked(k, Rank::one_form, Frame::sigma, op::bianchi(m, k) * f.stacked());
}

ModeField apply_conformal_killing(const MetricSamples& m, int k, const ModeField& omega)
{
    check(m, omega, Rank::one_form, k);
    return ModeField::from_stacked(k, Rank::sym2_tracefree, Frame::sigma,
                                   op::conformal_killing(m, k) * to_sigma(omega).stacked());
}

ModeField apply_hodge_laplacian_mode(const MetricSamples& m, int k, const ModeField& omega)
{
    check(m, omega, Rank::one_form, k);
    return ModeField::from_stacked(k, Rank::one_form, Frame::sigma,
                                   op::hodge_laplacian(m, k) * to_sigma(omega).stacked());
}

ModeField apply_linearized_gauge_einstein(const MetricSamples& m, int k, const ModeField& h)
{
    const ModeField f = full_from(h);
    check(m, f, Rank::sym2_full, k);
    return ModeField::from_stacked(k, Rank::sym2_full, Frame::sigma,
                                   op::linearized_gauge_einstein(m, k) * f.stacked());
}

ModeField apply_linearized_gauss(const MetricSamples& m, int k, const ModeField& h)
{
    const ModeField f = full_from(h);
    check(m, f, Rank::sym2_full, k);
    return ModeField::from_stacked(k, Rank::scalar, Frame::sigma, op::linearized_gauss(m, k) * f.stacked());
}

Real weitzenboeck_residual(const MetricSamples& m, int k, const ModeField& omega)
{
    check(m, omega, Rank::one_form, k);
    const Vec w = to_sigma(omega).stacked();
    const Vec lhs = op::bianchi(m, k) * (op::div_star(m, k) * w);
    const Vec rhs = op::P_sigma(m, k) * w;
    const ModeField r = ModeField::from_stacked(k, Rank::one_form, Frame::sigma, lhs - rhs);
    const Real base = l2_norm(m, omega);
    return base > 0 ? l2_norm(m, r) / base : l2_norm(m, r);
}

namespace {

// Coordinate divergence of a trace-free tensor for the diagonal metric a dtau^2 + b dtheta^2.
// Returns covector amplitudes (omega_tau, omega_theta).
std::pair<Vec, Vec> coordinate_divergence(const RadialGrid& grid, int k, const Vec& a, const Vec& b,
                                          const Vec& h_tt, const Vec& h_qq, const Vec& h_tq)
{
    const Real kk = Real(k);
    const Vec sg = a.cwiseProduct(b).cwiseSqrt();
    const Vec ia = a.cwiseInverse(), ib = b.cwiseInverse();
    const Vec da = grid.diff(a), db = grid.diff(b);
    const Vec t1 = grid.diff(Vec(sg.cwiseProduct(ia).cwiseProduct(h_tt)));
    const Vec t2 = kk * sg.cwiseProduct(ib).cwiseProduct(h_tq);
    const Vec corr = (da.cwiseProduct(ia).cwiseProduct(ia).cwiseProduct(h_tt)
                      + db.cwiseProduct(ib).cwiseProduct(ib).cwiseProduct(h_qq)) / 2;
    const Vec w_tau = -(t1 + t2).cwiseQuotient(sg) + corr;
    const Vec s1 = grid.diff(Vec(sg.cwiseProduct(ia).cwiseProduct(h_tq)));
    const Vec s2 = -kk * sg.cwiseProduct(ib).cwiseProduct(h_qq);
    const Vec w_theta = -(s1 + s2).cwiseQuotient(sg);
    return {w_tau, w_theta};
}

} // namespace

Real conformal_divergence_check(const MetricSamples& m, int k, const Vec& u, const ModeField& h_tf)
{
    check(m, h_tf, Rank::sym2_tracefree, k);
    require(u.size() == m.size(), "conformal_divergence_check: conformal factor has wrong length");
    const ModeField h = to_sigma(h_tf);
    const RadialGrid& grid = *m.grid;
    const Vec& F = m.F;
    const Vec h_tt = h.c[0].cwiseQuotient(F);
    const Vec h_qq = -F.cwiseProduct(h.c[0]);
    const Vec& h_tq = h.c[1];
    const Vec e2u = (2 * u).array().exp().matrix();

    const auto [g_tau, g_theta] = coordinate_divergence(grid, k, F.cwiseInverse(), F, h_tt, h_qq, h_tq);
    const auto [c_tau, c_theta] = coordinate_divergence(grid, k, e2u.cwiseQuotient(F), e2u.cwiseProduct(F),
                                                        h_tt, h_qq, h_tq);
    const Vec em2u = e2u.cwiseInverse();
    const Vec emu = (-u).array().exp().matrix();
    const Vec dA = (c_tau - em2u.cwiseProduct(g_tau)).cwiseProduct(m.sqrtF).cwiseProduct(emu);
    const Vec dB = (c_theta - em2u.cwiseProduct(g_theta)).cwiseQuotient(m.sqrtF).cwiseProduct(emu);
    const Vec density = (dA.cwiseProduct(dA) + dB.cwiseProduct(dB)).cwiseProduct(e2u);
    return std::sqrt(theta_weight(k) * grid.integrate(density));
}

} // namespace wpcyl
