#include "oracles.hpp"

#include <wpcyl/wp_pairing.hpp>

#include <doctest.h>

#include <memory>

using namespace wpcyl;

namespace {

SurfaceOptions small()
{
    SurfaceOptions o;
    o.intervals = 400;
    o.modes = 0;
    return o;
}

} // namespace

TEST_CASE("log spacing and slopes")
{
    const auto x = log_spaced(Real(1e-3), Real(1e-1), 9);
    REQUIRE(x.size() == 9);
    CHECK(x.front() == doctest::Approx(1e-3));
    CHECK(x.back() == doctest::Approx(1e-1));
    CHECK(x[1] / x[0] == doctest::Approx(x[8] / x[7]));
    std::vector<Real> y;
    for (Real v : x)
        y.push_back(Real(0.7) * std::pow(v, Real(2.5)));
    CHECK(loglog_slope(x, y) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(loglog_slope(x, y, 2) == doctest::Approx(oracle::loglog_slope(x, y)).epsilon(1e-12));
}

TEST_CASE("twist step")
{
    CHECK(twist_step(-1) == 0);
    CHECK(twist_step(1) == 1);
    CHECK(twist_step(0) == doctest::Approx(0.5));
    const oracle::Fn s = [](oracle::R t) { return twist_step(t); };
    for (Real t : {-Real(0.5), Real(0.1), Real(0.6)})
        CHECK(std::fabs(oracle::d1(s, t, Real(1e-4)) - twist_step_d(t)) < 1e-10);
}

TEST_CASE("variation fields")
{
    const ModelSurface s(Real(0.1), small());
    const VariationField L = length_variation(s), W = twist_variation(s);
    CHECK(L.kind == VariationKind::length);
    CHECK(W.kind == VariationKind::twist);
    const auto& g = *s.grid();
    const int i = g.find(Real(0.25));
    REQUIRE(i >= 0);
    const Real F = s.metric().F(Real(0.25));
    CHECK(L.field.c[1](i) == doctest::Approx(-s.metric().dF_dell(Real(0.25)) / F));
    CHECK(W.field.c[2](i) == doctest::Approx(F * twist_step_d(Real(0.25))));
}

TEST_CASE("WP pairing: symmetry, positivity, gauge invariance")
{
    auto s = std::make_shared<const ModelSurface>(Real(0.05), small());
    const TTProjector T(s);
    const VariationField L = length_variation(*s), W = twist_variation(*s);
    const Real ll = wp_inner_product(T, L.field, L.field), ww = wp_inner_product(T, W.field, W.field);
    const Real lw = wp_inner_product(T, L.field, W.field), wl = wp_inner_product(T, W.field, L.field);
    CHECK(ll > 0);
    CHECK(ww > 0);
    CHECK(std::fabs(lw - wl) <= 1e-12 * std::sqrt(ll * ww));
    CHECK(std::fabs(lw) <= 1e-12 * std::sqrt(ll * ww));

    const MetricSamples& m = s->samples();
    const int n = s->grid()->size();
    Vec w(2 * n);
    w << s->grid()->sample([](Real t) { return std::sin(kPi * t / 2) * (4 - t * t); }), Vec::Zero(n);
    w(0) = w(n - 1) = 0;
    const Vec tf = op::conformal_killing(m, 0) * w;
    const ModeField dw(0, Rank::sym2_full, Frame::sigma, {Vec::Zero(n), Vec(tf.head(n)), Vec(tf.tail(n))});
    CHECK(wp_inner_product(T, dw, dw) < 1e-20 * l2_inner(m, dw, dw));

    const Vec phi = Vec::Constant(n, Real(0.25));
    CHECK(wp_inner_product(T, L.field, L.field, phi) == doctest::Approx(ll * std::exp(-Real(0.5))));
}

TEST_CASE("sweep is independent of the thread count")
{
    SweepOptions o;
    o.surface = small();
    const auto ells = log_spaced(Real(0.01), Real(0.1), 4);
    const auto a = sweep_wp_coefficients(ells, o);
    o.jobs = 3;
    const auto b = sweep_wp_coefficients(ells, o);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ell == b[i].ell);
        CHECK(a[i].g_ll == b[i].g_ll);
        CHECK(a[i].g_ww == b[i].g_ww);
        CHECK(a[i].u_sup <= a[i].u_bound);
    }
    for (std::size_t i = 1; i < a.size(); ++i)
        CHECK(a[i].ell > a[i - 1].ell);
}

TEST_CASE("fitter recovers planted series")
{
    const auto L = log_spaced(Real(1e-3), Real(1e-1), 40);
    std::vector<Real> f;
    for (Real l : L)
        f.push_back(-1 + Real(0.25) * l * std::log(l) * std::log(l) + 4 * std::pow(l, Real(1.5)));
    const ExpansionFit r = fit_polyhomogeneous(L, f, 3, 2);
    CHECK(r.coefficient(0, 0) == doctest::Approx(-1).epsilon(1e-8));
    CHECK(r.coefficient(2, 2) == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(r.coefficient(3, 0) == doctest::Approx(4).epsilon(1e-8));
    CHECK(std::fabs(r.coefficient(1, 1)) < 1e-8);
    CHECK(r.residual < 1e-12);
    CHECK_FALSE(r.plateau);
    CHECK(r.evaluate(Real(0.01)) == doctest::Approx(-1 + Real(0.25) * Real(0.01) * std::pow(std::log(Real(0.01)), 2)
                                                    + 4 * Real(1e-3)));
    REQUIRE(r.residual_sequence.size() == r.terms.size());
    for (std::size_t i = 1; i < r.residual_sequence.size(); ++i)
        CHECK(r.residual_sequence[i] <= r.residual_sequence[i - 1] * (1 + 1e-12) + 1e-16);
}

TEST_CASE("fitter flags exponents outside the half-integer lattice")
{
    const auto L = log_spaced(Real(1e-3), Real(1e-1), 30);
    std::vector<Real> f;
    for (Real l : L)
        f.push_back(std::pow(l, Real(0.33)));
    CHECK(fit_polyhomogeneous(L, f, 4, 0).plateau);
}

TEST_CASE("fitter input checks")
{
    const auto L = log_spaced(Real(1e-3), Real(1e-1), 30);
    const std::vector<Real> one(30, 1);
    CHECK_THROWS_AS(fit_polyhomogeneous(L, one, 4, 2), DomainError);
    const auto narrow = log_spaced(Real(1e-2), Real(1e-1), 30);
    CHECK_THROWS_AS(fit_polyhomogeneous(narrow, one, 1, 0), DomainError);
    CHECK_THROWS_AS(fit_polyhomogeneous(L, std::vector<Real>(29, 1), 1, 0), DomainError);
    const auto dense = log_spaced(Real(1e-3), Real(1e-1), 200);
    try {
        fit_polyhomogeneous(dense, std::vector<Real>(200, 1), 10, 3);
        FAIL("ill-conditioned design was accepted");
    } catch (const FitError& e) {
        CHECK(e.condition_number() > 1e12);
    }
}
