#include "wpcyl/wp_pairing.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace wpcyl {

Real twist_step(Real tau)
{
    return smoothstep((tau + Real(0.75)) / Real(1.5));
}

Real twist_step_d(Real tau)
{
    return smoothstep_d((tau + Real(0.75)) / Real(1.5)) / Real(1.5);
}

VariationField length_variation(const ModelSurface& s)
{
    const RadialGrid& g = *s.grid();
    const ModelSurfaceMetric& m = s.metric();
    const int n = g.size();
    Vec P = g.sample([&](Real t) { return -m.dF_dell(t) / m.F(t); });
    return {VariationKind::length, ModeField(0, Rank::sym2_full, Frame::sigma, {Vec::Zero(n), P, Vec::Zero(n)})};
}

VariationField twist_variation(const ModelSurface& s)
{
    const RadialGrid& g = *s.grid();
    const ModelSurfaceMetric& m = s.metric();
    const int n = g.size();
    Vec Q = g.sample([&](Real t) { return m.F(t) * twist_step_d(t); });
    return {VariationKind::twist, ModeField(0, Rank::sym2_full, Frame::sigma, {Vec::Zero(n), Vec::Zero(n), Q})};
}

Real wp_inner_product(const TTProjector& T, const ModeField& h1, const ModeField& h2, const Vec& phi)
{
    const ModeField a = T.apply(h1);
    ModeField b = T.apply(h2);
    require(phi.size() == 0 || phi.size() == a.size(), "wp_inner_product: conformal factor has wrong length");
    if (phi.size() > 0) {
        const Vec w = (-2 * phi.array()).exp().matrix();
        for (Vec& c : b.c)
            c = c.cwiseProduct(w);
    }
    return l2_inner(T.metric(), a, b);
}

Real WPRow::normalized_cross() const
{
    const Real d = std::sqrt(g_ll * g_ww);
    return d > 0 ? std::fabs(g_lw) / d : 0;
}

std::vector<Real> log_spaced(Real lo, Real hi, int count)
{
    require(lo > 0 && hi >= lo && count >= 1, "log_spaced: need 0 < lo <= hi and count >= 1");
    std::vector<Real> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
    return out;
}

namespace {

WPRow wp_row(Real ell, const SweepOptions& opt)
{
    auto s = std::make_shared<const ModelSurface>(ell, opt.surface);
    WPRow row;
    row.ell = ell;
    Vec phi;
    if (opt.use_conformal_factor) {
        const ConformalFactor cf = solve_conformal_factor(*s, opt.conformal);
        phi = cf.u;
        row.u_sup = cf.max_abs_u;
        row.u_bound = cf.bound;
    }
    const TTProjector T(s);
    const ModeField l = length_variation(*s).field, w = twist_variation(*s).field;
    row.g_ll = wp_inner_product(T, l, l, phi);
    row.g_lw = wp_inner_product(T, l, w, phi);
    row.g_ww = wp_inner_product(T, w, w, phi);
    return row;
}

} // namespace

std::vector<WPRow> sweep_wp_coefficients(const std::vector<Real>& ells, const SweepOptions& opt)
{
    std::vector<Real> sorted = ells;
    std::sort(sorted.begin(), sorted.end());
    std::vector<WPRow> rows(sorted.size());
    std::vector<std::exception_ptr> errors(sorted.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < sorted.size(); i = next++) {
            try {
                rows[i] = wp_row(sorted[i], opt);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(sorted.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return rows;
}

Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y, int drop)
{
    require(x.size() == y.size(), "loglog_slope: size mismatch");
    const int n = static_cast<int>(x.size()) - 2 * drop;
    require(drop >= 0 && n >= 2, "loglog_slope: not enough points after dropping the ends");
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = drop; i < drop + n; ++i) {
        require(x[i] > 0 && y[i] > 0, "loglog_slope: nonpositive data");
        const Real lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Real ExpansionFit::coefficient(int half_power, int log_power) const
{
    for (const auto& t : terms)
        if (t.half_power == half_power && t.log_power == log_power)
            return t.coeff;
    return 0;
}

Real ExpansionFit::evaluate(Real l) const
{
    Real v = 0;
    for (const auto& t : terms)
        v += t.coeff * std::pow(l, Real(t.half_power) / 2) * std::pow(std::log(l), Real(t.log_power));
    return v;
}

ExpansionFit fit_polyhomogeneous(const std::vector<Real>& ell, const std::vector<Real>& f, int K, int J,
                                 FitOptions opt)
{
    require(K >= 0 && J >= 0, "fit: K and J must be nonnegative");
    require(ell.size() == f.size(), "fit: sample size mismatch");
    const int n = static_cast<int>(ell.size());
    const int cols = (K + 1) * (J + 1);
    if (n < 3 * cols)
        throw DomainError("fit: need at least " + std::to_string(3 * cols) + " samples for K = " + std::to_string(K)
                          + ", J = " + std::to_string(J) + ", got " + std::to_string(n));
    const auto [lo, hi] = std::minmax_element(ell.begin(), ell.end());
    require(*lo > 0, "fit: ell must be positive");
    if (std::log10(*hi / *lo) < opt.min_decades - Real(1e-9))
        throw DomainError("fit: samples span " + std::to_string(double(std::log10(*hi / *lo)))
                          + " decades, need " + std::to_string(double(opt.min_decades)));

    Mat A(n, cols);
    Vec b(n);
    for (int i = 0; i < n; ++i) {
        const Real L = std::log(ell[i]);
        b(i) = f[i];
        int c = 0;
        for (int k = 0; k <= K; ++k)
            for (int j = 0; j <= J; ++j)
                A(i, c++) = std::pow(ell[i], Real(k) / 2) * std::pow(L, Real(j));
    }
    Vec scale(cols);
    for (int c = 0; c < cols; ++c) {
        scale(c) = A.col(c).norm();
        A.col(c) /= scale(c);
    }

    ExpansionFit fit;
    fit.ell = ell;
    fit.values = f;
    Eigen::JacobiSVD<Mat> svd(A);
    const Vec sv = svd.singularValues();
    fit.condition_number = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<Real>::infinity();
    if (!(fit.condition_number <= opt.max_condition))
        throw FitError("fit: design matrix condition number " + std::to_string(double(fit.condition_number))
                           + " exceeds " + std::to_string(double(opt.max_condition))
                           + "; reduce K or J or widen the ell range",
                       fit.condition_number);

    const Real bn = b.norm();
    Vec coef;
    for (int m = 1; m <= cols; ++m) {
        Eigen::ColPivHouseholderQR<Mat> qr(A.leftCols(m));
        coef = qr.solve(b);
        const Real r = (A.leftCols(m) * coef - b).norm();
        fit.residual_sequence.push_back(bn > 0 ? r / bn : r);
    }
    fit.residual = fit.residual_sequence.back();
    int c = 0;
    for (int k = 0; k <= K; ++k)
        for (int j = 0; j <= J; ++j, ++c)
            fit.terms.push_back({k, j, coef(c) / scale(c)});

    const int tail = std::max(1, cols / 3);
    const Real before = fit.residual_sequence[std::max(0, cols - 1 - tail)];
    fit.plateau = fit.residual > opt.plateau_floor && before < opt.plateau_gain * fit.residual;
    return fit;
}

} // namespace wpcyl
