#include "oracles.hpp"

#include <wpcyl/cylinder_model.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <memory>

using namespace wpcyl;

TEST_CASE("fornberg weights differentiate polynomials exactly")
{
    const std::vector<Real> x{-Real(0.3), -Real(0.1), 0, Real(0.2), Real(0.5)};
    const Mat w = fornberg_weights(Real(0.05), x, 2);
    auto p = [](Real t) { return 1 + 2 * t - 3 * t * t + t * t * t * t; };
    Real f = 0, df = 0, d2f = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        f += w(j, 0) * p(x[j]);
        df += w(j, 1) * p(x[j]);
        d2f += w(j, 2) * p(x[j]);
    }
    const Real z = Real(0.05);
    CHECK(std::fabs(f - p(z)) < 1e-15);
    CHECK(std::fabs(df - (2 - 6 * z + 4 * z * z * z)) < 1e-13);
    CHECK(std::fabs(d2f - (-6 + 12 * z * z)) < 1e-12);
}

TEST_CASE("grid kinds: breakpoints, derivatives, quadrature")
{
    const RadialGrid g = RadialGrid::graded(-1, 1, 400, Real(0.05), 4, {-Real(0.5), 0, Real(0.5)});
    CHECK(g.find(Real(0.5)) >= 0);
    CHECK(g.find(0) >= 0);
    CHECK(g.find(-Real(0.5)) >= 0);
    CHECK(g.a() == -1);
    CHECK(g.b() == 1);
    for (int i = 1; i < g.size(); ++i)
        REQUIRE(g[i] > g[i - 1]);

    const Vec f = g.sample([](Real t) { return t * t * t; });
    const Vec df = g.diff(f);
    for (int i = 0; i < g.size(); ++i)
        CHECK(std::fabs(df(i) - 3 * g[i] * g[i]) < 1e-9);
    CHECK(std::fabs(g.integrate(g.sample([](Real t) { return std::cos(t); })) - 2 * std::sin(Real(1))) < 1e-8);

    const RadialGrid c = RadialGrid::chebyshev(-1, 1, 32);
    const Vec e = c.sample([](Real t) { return std::exp(t); });
    CHECK((c.diff(e) - e).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(std::fabs(c.integrate(e) - (std::exp(Real(1)) - std::exp(Real(-1)))) < 1e-14);
}

TEST_CASE("hyperbolic profile has curvature -1")
{
    for (Real ell : {Real(1), Real(0.1), Real(0.01)}) {
        const RadialGrid g = RadialGrid::uniform(-1, 1, 64);
        const CylinderMetric m(ell);
        const Vec K = profile_curvature(g, g.sample([&](Real t) { return m.F(t); }));
        CHECK((K.array() + 1).abs().maxCoeff() < 1e-10);
        const auto [gtt, gthth] = metric_components(m, Real(0.3));
        CHECK(gtt * gthth == doctest::Approx(1).epsilon(1e-15));
    }
}

TEST_CASE("boundary distance agrees with quadrature of the arclength")
{
    using GK = boost::math::quadrature::gauss_kronrod<Real, 31>;
    for (Real ell : {Real(0.5), Real(0.05)}) {
        const CylinderMetric m(ell);
        const Real d = GK::integrate([&](Real t) { return 1 / std::sqrt(m.F(t)); }, Real(0), Real(1), 12);
        CHECK(std::fabs(boundary_distance(m) - d) < 1e-12);
    }
    CHECK_THROWS_AS(boundary_distance(CylinderMetric(0)), DomainError);
    CHECK_THROWS_AS(metric_components(CylinderMetric(0), 0), DomainError);
}

TEST_CASE("charts round trip")
{
    for (ChartKind kind : {ChartKind::tau, ChartKind::arcsinh, ChartKind::rescaled, ChartKind::plumbing}) {
        const CoordinateChart c(kind, Real(0.2));
        for (Real t : {-Real(0.9), -Real(0.01), Real(0.3), Real(1)})
            CHECK(std::fabs(c.inverse(c.forward(t)) - t) < 1e-14);
    }
}

TEST_CASE("plumbing chart matches the annulus metric")
{
    for (Real t : {Real(1e-3), Real(1e-9)}) {
        const CoordinateChart c = CoordinateChart::plumbing_from_t(t);
        const Real L = std::fabs(std::log(t));
        CHECK(c.ell() == doctest::Approx(kPi / L).epsilon(1e-15));
        CHECK(std::fabs(c.inverse(std::sqrt(t))) < 1e-12);
        const CylinderMetric m(c.ell());
        // circumference of |z| = r under the complete metric of the annulus t < |z| < 1
        for (Real r : {std::sqrt(t) * 2, Real(0.01), Real(0.3)}) {
            const Real rho = kPi / (r * L * std::sin(kPi * std::log(r) / std::log(t)));
            CHECK(r * rho == doctest::Approx(std::sqrt(m.F(c.inverse(r)))).epsilon(1e-12));
        }
        CHECK(mz_substitution_check(t, {std::sqrt(t), Real(0.1), Real(0.5)}) < 1e-12);
    }
    CHECK_THROWS_AS(CoordinateChart::plumbing_from_t(Real(0.5)), DomainError);
}

TEST_CASE("metric samples reject a vanishing profile unless allowed")
{
    auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(-1, 1, 8));
    CHECK_THROWS_AS(MetricSamples::cylinder(g, 0), DomainError);
    const MetricSamples noded(g, Profile::hyperbolic(0), 0, true, true);
    CHECK(noded.F.minCoeff() == 0);
    const MetricSamples m = MetricSamples::cylinder(g, Real(0.5));
    CHECK((m.curvature().array() + 1).abs().maxCoeff() == 0);
}
