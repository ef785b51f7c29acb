#include "wpcyl/cylinder_green.hpp"

#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpcyl {

HomogeneousSolutions::HomogeneousSolutions(Real ell_) : ell(ell_)
{
    require(ell > 0, "homogeneous solutions: ell must be positive");
}

Real HomogeneousSolutions::u_star(Real T)
{
    return std::sqrt(T * T + 1);
}

Real HomogeneousSolutions::v_star(Real T)
{
    const Real r = std::sqrt(T * T + 1);
    return T / r + r * std::atan(T);
}

Real HomogeneousSolutions::du(Real tau) const
{
    const Real T = tau / ell;
    return T / std::sqrt(T * T + 1) / ell;
}

Real HomogeneousSolutions::dv(Real tau) const
{
    const Real T = tau / ell;
    const Real r = std::sqrt(T * T + 1);
    return (1 / (r * r * r) + T * std::atan(T) / r + 1 / r) / ell;
}

std::shared_ptr<const RadialGrid> cylinder_grid(Real ell, const GreenOptions& opt)
{
    require(ell > 0, "cylinder_grid: ell must be positive");
    return std::make_shared<const RadialGrid>(
        RadialGrid::graded(-1, 1, opt.intervals, ell, opt.order, {-opt.c, 0, opt.c}));
}

namespace {

void require_support(const RadialGrid& grid, const RealFn& h, Real c, const char* who)
{
    for (int i = 0; i < grid.size(); ++i)
        if (std::fabs(grid[i]) < c && h(grid[i]) != 0)
            throw DomainError(std::string(who) + ": rhs does not vanish on |tau| < c");
    for (int j = 1; j < 256; ++j) {
        const Real t = -c + 2 * c * Real(j) / 256;
        if (h(t) != 0)
            throw DomainError(std::string(who) + ": rhs does not vanish on |tau| < c");
    }
}

} // namespace

GreenSolveReport solve_zero_mode(Real ell, const RealFn& h, Real eta_plus, Real eta_minus,
                                 std::shared_ptr<const RadialGrid> grid, Real c)
{
    require(ell > 0, "solve_zero_mode: ell must be positive");
    require(grid && grid->a() == -1 && grid->b() == 1, "solve_zero_mode: grid must span [-1, 1]");
    require_support(*grid, h, c, "solve_zero_mode");
    const HomogeneousSolutions hs(ell);
    using Quad = boost::math::quadrature::gauss<Real, 10>;

    const int n = grid->size();
    Vec Jv = Vec::Zero(n), Ju = Vec::Zero(n);
    for (int i = 0; i + 1 < n; ++i) {
        const Real a = (*grid)[i], b = (*grid)[i + 1];
        Real iv = 0, iu = 0;
        if (std::max(std::fabs(a), std::fabs(b)) > c) {
            iv = Quad::integrate([&](Real t) { return hs.v(t) * h(t); }, a, b);
            iu = Quad::integrate([&](Real t) { return hs.u(t) * h(t); }, a, b);
        }
        Jv(i + 1) = Jv(i) + iv / (2 * ell);
        Ju(i + 1) = Ju(i) + iu / (2 * ell);
    }

    GreenSolveReport r;
    r.I1 = Jv(n - 1);
    r.I2 = Ju(n - 1);
    const Real u1 = hs.u(1), v1 = hs.v(1), um = hs.u(-1), vm = hs.v(-1);
    r.D = u1 * vm - um * v1;
    if (!(std::fabs(r.D) > 0))
        throw SolverError("solve_zero_mode: boundary determinant vanished");
    const Real b1 = eta_plus - u1 * r.I1 + v1 * r.I2;
    const Real b2 = eta_minus;
    r.A = (b1 * vm - v1 * b2) / r.D;
    r.B = (u1 * b2 - um * b1) / r.D;

    Vec w(n);
    for (int i = 0; i < n; ++i) {
        const Real t = (*grid)[i];
        w(i) = r.A * hs.u(t) + r.B * hs.v(t) + hs.u(t) * Jv(i) - hs.v(t) * Ju(i);
    }
    r.boundary_error = std::max(std::fabs(w(n - 1) - eta_plus), std::fabs(w(0) - eta_minus));
    r.solution = ModeField(0, Rank::scalar, Frame::sigma, {w});
    return r;
}

ModeField solve_nonzero_mode(Real ell, int k, const ModeField& h_rho, Real eta_plus, Real eta_minus,
                             std::shared_ptr<const RadialGrid> grid, Real c)
{
    require(k != 0, "solve_nonzero_mode: k must be nonzero");
    require(ell > 0, "solve_nonzero_mode: ell must be positive");
    require(h_rho.rank == Rank::one_form && h_rho.frame == Frame::rho, "solve_nonzero_mode: expected a rho one-form");
    require(h_rho.size() == grid->size(), "solve_nonzero_mode: rhs and grid differ");
    const int n = grid->size();
    for (int i = 0; i < n; ++i)
        if (std::fabs((*grid)[i]) < c && (h_rho.c[0](i) != 0 || h_rho.c[1](i) != 0))
            throw DomainError("solve_nonzero_mode: rhs does not vanish on |tau| < c");

    const MetricSamples m = MetricSamples::cylinder(grid, ell);
    const SpMat A = with_dirichlet_rows(SpMat(2 * op::P_rho(m, k)), n);
    Vec b = h_rho.stacked();
    b(0) = eta_minus;
    b(n - 1) = eta_plus;
    b(n) = eta_minus;
    b(2 * n - 1) = eta_plus;
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("solve_nonzero_mode: factorization failed (n = " + std::to_string(n) + ")");
    const Vec w = lu.solve(b);
    if (lu.info() != Eigen::Success || !w.allFinite())
        throw SolverError("solve_nonzero_mode: solve failed (n = " + std::to_string(n) + ")");
    return ModeField::from_stacked(k, Rank::one_form, Frame::rho, w);
}

Real BarrierProfile::value(Real tau, int k, Real ell) const
{
    const Real a = alpha * std::abs(k);
    const Real r = std::fabs(tau);
    if (form == BarrierForm::reciprocal) {
        if (r == 0)
            return 0;
        return C * std::exp(a * (1 / c - 1 / r));
    }
    return C * std::exp(-a * (std::atan(c / ell) - std::atan(r / ell)) / ell);
}

Real BarrierProfile::normalized_image(Real tau, int k, Real ell) const
{
    require(k != 0, "barrier: k must be nonzero");
    require(tau != 0, "barrier: tau must be nonzero");
    const Real a = alpha * std::abs(k);
    const Real r = std::fabs(tau);
    const Real s = tau > 0 ? 1 : -1;
    const Real F = tau * tau + ell * ell, dF = 2 * tau, d2F = 2;
    Real g1, g2;
    if (form == BarrierForm::reciprocal) {
        g1 = a / (r * r);
        g2 = a * a / (r * r * r * r) - 2 * a / (r * r * r);
    } else {
        g1 = a / F;
        g2 = (a * a - a * 2 * r) / (F * F);
    }
    const Real base = -F * g2 - dF * s * g1 + d2F / 2;
    const Real kk = Real(k);
    const Real plus = base + (dF / 2 + kk) * (dF / 2 + kk) / F;
    const Real minus = base + (dF / 2 - kk) * (dF / 2 - kk) / F;
    return std::min(plus, minus);
}

BarrierCertificate certify_barrier(const std::vector<Real>& ells, const std::vector<int>& ks, Real alpha, Real c,
                                   BarrierForm form, int samples)
{
    require(alpha > 0 && alpha < 1, "certify_barrier: alpha must lie in (0, 1)");
    BarrierProfile z{alpha, c, 1, form};
    BarrierCertificate cert;
    cert.worst = std::numeric_limits<Real>::infinity();
    std::vector<Real> taus;
    for (int j = 1; j <= samples; ++j)
        taus.push_back(Real(j) / samples);
    for (int j = 0; j < samples; ++j)
        taus.push_back(std::pow(Real(10), -8 + 8 * Real(j) / samples));
    for (Real ell : ells)
        for (int k : ks) {
            require(k != 0, "certify_barrier: k = 0 is excluded");
            for (Real t : taus)
                for (Real tau : {t, -t}) {
                    const Real v = z.normalized_image(tau, k, ell);
                    if (v < cert.worst) {
                        cert.worst = v;
                        cert.worst_tau = tau;
                        cert.worst_ell = ell;
                        cert.worst_k = k;
                    }
                }
        }
    cert.pass = cert.worst >= 0;
    return cert;
}

std::vector<ModeField> cylinder_dirichlet_inverse(Real ell, int mode_budget, const std::vector<ModeRhs>& rhs,
                                                  std::shared_ptr<const RadialGrid> grid, Real c)
{
    std::vector<ModeField> out;
    for (const ModeRhs& r : rhs) {
        require(std::abs(r.k) <= mode_budget, "cylinder_dirichlet_inverse: mode outside the budget");
        if (r.k == 0) {
            const auto su = solve_zero_mode(ell, [&](Real t) { return 2 * r.u(t); }, 0, 0, grid, c);
            const auto sv = solve_zero_mode(ell, [&](Real t) { return 2 * r.v(t); }, 0, 0, grid, c);
            out.emplace_back(0, Rank::one_form, Frame::rho, std::vector<Vec>{su.solution.c[0], sv.solution.c[0]});
        } else {
            require_support(*grid, r.u, c, "cylinder_dirichlet_inverse");
            require_support(*grid, r.v, c, "cylinder_dirichlet_inverse");
            const ModeField h(r.k, Rank::one_form, Frame::rho,
                              {grid->sample([&](Real t) { return 2 * r.u(t); }),
                               grid->sample([&](Real t) { return 2 * r.v(t); })});
            out.push_back(solve_nonzero_mode(ell, r.k, h, 0, 0, grid, c));
        }
    }
    return out;
}

BarrierComparison compare_barrier(Real ell, int k, Real alpha, BarrierForm form,
                                  std::shared_ptr<const RadialGrid> grid, Real c, Real floor)
{
    const int n = grid->size();
    const Real lo = c, hi = Real(1.5) * c;
    Vec h = grid->sample([&](Real t) {
        if (t <= lo || t >= hi)
            return Real(0);
        const Real x = (t - lo) / (hi - lo);
        return std::pow(x * (1 - x), 4) * 256;
    });
    const ModeField w = solve_nonzero_mode(ell, k, ModeField(k, Rank::one_form, Frame::rho, {h, h}), 0, 0, grid, c);
    const int ip = grid->find(c), im = grid->find(-c);
    require(ip >= 0 && im >= 0, "compare_barrier: +-c must be grid nodes");

    BarrierComparison r;
    for (const Vec& comp : w.c)
        r.C = std::max({r.C, std::fabs(comp(ip)), std::fabs(comp(im))});
    const BarrierProfile zeta{alpha, c, r.C, form};
    r.band_lo = c;
    r.band_hi = 0;
    for (int i = 0; i < n; ++i) {
        const Real t = (*grid)[i];
        if (std::fabs(t) > c)
            continue;
        const Real a = std::max(std::fabs(w.c[0](i)), std::fabs(w.c[1](i)));
        if (a <= floor * r.C)
            continue;
        const Real z = zeta.value(t, k, ell);
        Real ratio = 0;
        if (z > 0)
            ratio = a / z;
        else if (a > 0)
            ratio = std::numeric_limits<Real>::infinity();
        r.worst_ratio = std::max(r.worst_ratio, ratio);
        if (ratio > 1) {
            r.band_lo = std::min(r.band_lo, std::fabs(t));
            r.band_hi = std::max(r.band_hi, std::fabs(t));
        }
    }
    return r;
}

} // namespace wpcyl
