#include "oracles.hpp"

#include <wpcyl/mode_calculus.hpp>
#include <wpcyl/verify.hpp>

#include <doctest.h>

#include <memory>

using namespace wpcyl;

namespace {

std::shared_ptr<const RadialGrid> grid(int n, int order = 4)
{
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(-1, 1, n, order));
}

Real interior_max(const Vec& v, int n, int comps, int skip = 4)
{
    Real e = 0;
    for (int c = 0; c < comps; ++c)
        for (int i = skip; i < n - skip; ++i)
            e = std::max(e, std::fabs(v(c * n + i)));
    return e;
}

} // namespace

TEST_CASE("scalar laplacian against a manufactured solution")
{
    const Real ell = Real(0.3);
    auto F = [&](Real t) { return t * t + ell * ell; };
    auto f = [](Real t) { return std::sin(2 * t) + t; };
    for (int k : {0, 3}) {
        // -(F f')' + k^2 f / F
        auto exact = [&](Real t) {
            const Real fp = 2 * std::cos(2 * t) + 1, fpp = -4 * std::sin(2 * t);
            return -(2 * t * fp + F(t) * fpp) + k * k * f(t) / F(t);
        };
        Real prev = 0;
        for (int n : {200, 400}) {
            auto g = grid(n);
            const MetricSamples m = MetricSamples::cylinder(g, ell);
            const Vec err = op::scalar_laplacian(m, k) * g->sample(f) - g->sample(exact);
            const Real e = interior_max(err, g->size(), 1);
            if (prev > 0)
                CHECK(prev / e > 12);
            prev = e;
        }
        CHECK(prev < 1e-8);
    }
}

TEST_CASE("rho frame diagonalizes P and swaps k")
{
    auto g = grid(100, 2);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.2));
    const int n = g->size();
    for (int k : {1, 4}) {
        const SpMat a = op::P_rho(m, k), b = op::P_rho(m, -k);
        CHECK(Mat(a.topRightCorner(n, n)).norm() == 0);
        CHECK(Mat(a.bottomLeftCorner(n, n)).norm() == 0);
        CHECK(Mat(a.bottomRightCorner(n, n) - b.topLeftCorner(n, n)).norm() == 0);
    }
}

TEST_CASE("P in the rho frame is the sigma-frame P conjugated")
{
    const Real ell = Real(0.4);
    for (int k : {0, 2, -1}) {
        auto g = grid(300);
        const int n = g->size();
        const MetricSamples m = MetricSamples::cylinder(g, ell);
        Vec w(2 * n);
        w << g->sample([](Real t) { return std::cos(3 * t) * (1 - t * t); }),
            g->sample([](Real t) { return std::exp(t) * t; });
        const Vec lhs = op::P_rho(m, k) * (op::one_form_sigma_to_rho(n) * w);
        const Vec rhs = op::one_form_sigma_to_rho(n) * (op::P_sigma(m, k) * w);
        CHECK(interior_max(lhs - rhs, n, 2) < 1e-6 * (1 + interior_max(rhs, n, 2)));
    }
}

TEST_CASE("frame changes round trip")
{
    auto g = grid(20, 2);
    const int n = g->size();
    const ModeField w(3, Rank::one_form, Frame::sigma, {Vec::LinSpaced(n, 0, 1), Vec::LinSpaced(n, 2, -1)});
    const ModeField back = to_sigma(to_rho(w));
    CHECK((back.stacked() - w.stacked()).norm() < 1e-18);
    const ModeField h(-2, Rank::sym2_tracefree, Frame::sigma, {Vec::LinSpaced(n, 1, 3), Vec::LinSpaced(n, 0, 5)});
    CHECK((to_sigma(to_rho(h)).stacked() - h.stacked()).norm() < 1e-17);
    const ModeField r = to_rho(w);
    CHECK((r.c[0] - (w.c[0] + w.c[1]) / 2).norm() < 1e-18);
}

TEST_CASE("d and delta are L2 adjoint on compactly supported fields")
{
    const Real ell = Real(0.25);
    for (int k : {0, 2, -3}) {
        auto g = grid(400);
        const MetricSamples m = MetricSamples::cylinder(g, ell);
        const Vec f = g->sample([](Real t) { return oracle::bump(t, -Real(0.8), Real(0.7)); });
        const Vec A = g->sample([](Real t) { return oracle::bump(t, -Real(0.6), Real(0.9)) * (1 + t); });
        const Vec B = g->sample([](Real t) { return oracle::bump(t, -Real(0.9), Real(0.5)) * std::cos(t); });
        const ModeField s(k, Rank::scalar, Frame::sigma, {f});
        const ModeField w(k, Rank::one_form, Frame::sigma, {A, B});
        const ModeField df = ModeField::from_stacked(k, Rank::one_form, Frame::sigma, op::d(m, k) * f);
        const ModeField dw = ModeField::from_stacked(k, Rank::scalar, Frame::sigma, op::delta1(m, k) * w.stacked());
        const Real a = l2_inner(m, df, w), b = l2_inner(m, s, dw);
        CHECK(std::fabs(a - b) <= 1e-8 * std::fabs(a));
    }
}

TEST_CASE("trace-free projection and angular weights")
{
    CHECK(theta_weight(0) == doctest::Approx(2 * kPi));
    CHECK(theta_weight(5) == doctest::Approx(kPi));
    CHECK(theta_weight(-5) == doctest::Approx(kPi));
    auto g = grid(30, 2);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.5));
    const int n = g->size();
    const ModeField h(1, Rank::sym2_full, Frame::sigma, {Vec::Constant(n, 2), Vec::Constant(n, 1), Vec::Zero(n)});
    const ModeField tf = project_tracefree(m, h);
    CHECK(tf.rank == Rank::sym2_tracefree);
    CHECK((tf.c[0] - Vec::Constant(n, 1)).norm() < 1e-18);
    CHECK((apply_trace(m, h).c[0] - Vec::Constant(n, 4)).norm() < 1e-17);
}

TEST_CASE("dirichlet rows are identity rows")
{
    auto g = grid(10, 2);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.5));
    const int n = g->size();
    const Mat A = Mat(with_dirichlet_rows(op::P_rho(m, 1), n));
    for (int r : {0, n - 1, n, 2 * n - 1}) {
        Vec e = Vec::Zero(2 * n);
        e(r) = 1;
        CHECK((A.row(r).transpose() - e).norm() == 0);
    }
}

TEST_CASE("operator identities converge at second order")
{
    for (int k : {1, -1, 4}) {
        const verify::IdentityResiduals a = verify::identity_residuals(Real(0.5), 200, k);
        const verify::IdentityResiduals b = verify::identity_residuals(Real(0.5), 400, k);
        CHECK(a.weitzenboeck / b.weitzenboeck > 3.5);
        CHECK(a.bianchi_trace / b.bianchi_trace > 3.5);
        CHECK(a.trace_div_star / b.trace_div_star > 3.5);
        CHECK(a.intertwining / b.intertwining > 3.5);
        CHECK(a.conformal / b.conformal > 3.5);
    }
}
