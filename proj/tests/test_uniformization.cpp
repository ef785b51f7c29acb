#include "oracles.hpp"

#include <wpcyl/uniformization.hpp>

#include <doctest.h>

#include <memory>

using namespace wpcyl;

namespace {

std::shared_ptr<const RadialGrid> grid(int n)
{
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(-1, 1, n));
}

} // namespace

TEST_CASE("pure hyperbolic cylinder needs no conformal change")
{
    for (Real ell : {Real(0.5), Real(0.2)}) {
        const ConformalFactor cf = solve_conformal_factor(MetricSamples::cylinder(grid(200), ell));
        CHECK(cf.max_abs_u < 1e-14);
        CHECK(cf.within_bound());
    }
}

TEST_CASE("manufactured conformal factor converges at second order")
{
    // K = F u'' + F' u' - e^{2u} makes u the exact solution
    const Real ell = Real(0.5), a = Real(0.15);
    auto u = [&](Real t) { return a * std::sin(kPi * (t + 1) / 2) * (1 + t / 3); };
    Real prev = 0;
    for (int n : {200, 400}) {
        auto g = grid(n);
        const MetricSamples m = MetricSamples::cylinder(g, ell);
        const oracle::Fn uf = u;
        const Vec K = g->sample([&](Real t) {
            const Real F = t * t + ell * ell;
            return F * oracle::d2(uf, t, Real(1e-3)) + 2 * t * oracle::d1(uf, t, Real(1e-3)) - std::exp(2 * u(t));
        });
        REQUIRE(K.maxCoeff() < 0);
        const ConformalFactor cf = solve_conformal_equation(m, K);
        CHECK(cf.residual < 1e-10);
        const Real e = (cf.u - g->sample(u)).lpNorm<Eigen::Infinity>();
        if (prev > 0)
            CHECK(prev / e > 3.5);
        prev = e;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("curvature in [-2, -1/2] keeps |u| <= log(2) / 2")
{
    auto g = grid(300);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.3));
    for (Real amp : {Real(0.75), -Real(0.75), Real(0.3)}) {
        const Vec K = g->sample([&](Real t) { return -Real(1.25) + amp * std::cos(3 * t); });
        const ConformalFactor cf = solve_conformal_equation(m, K);
        CHECK(cf.max_abs_u <= std::log(Real(2)) / 2);
        CHECK(cf.residual < 1e-10);
    }
}

TEST_CASE("comparison principle: less negative curvature gives smaller u")
{
    auto g = grid(200);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.3));
    const Vec K1 = Vec::Constant(g->size(), -Real(1.5));
    const Vec K2 = Vec::Constant(g->size(), -Real(0.8));
    const Vec u1 = solve_conformal_equation(m, K1).u, u2 = solve_conformal_equation(m, K2).u;
    CHECK((u1 - u2).minCoeff() > -1e-14);
    CHECK((u1 - u2).maxCoeff() > 0.1);
}

TEST_CASE("newton converges quadratically")
{
    auto g = grid(200);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.3));
    const Vec K = g->sample([](Real t) { return -1 - Real(0.6) * t * t; });
    const ConformalFactor cf = solve_conformal_equation(m, K);
    const auto& h = cf.residual_history;
    REQUIRE(h.size() >= 3);
    for (std::size_t i = 2; i < h.size(); ++i)
        if (h[i - 1] < 1e-2 && h[i] > 1e-14)
            CHECK(h[i] < 10 * h[i - 1] * h[i - 1] + 1e-15);
    CHECK(cf.residual < 1e-12);
}

TEST_CASE("model surface uniformization and refusal of nonnegative curvature")
{
    SurfaceOptions o;
    o.intervals = 400;
    const ModelSurface s(Real(0.05), o);
    const ConformalFactor cf = solve_conformal_factor(s);
    CHECK(cf.within_bound());
    CHECK(cf.bound > 0);

    auto g = grid(50);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.3));
    Vec K = Vec::Constant(g->size(), -1);
    K(10) = Real(0.1);
    CHECK_THROWS_AS(solve_conformal_equation(m, K), DomainError);
}
