#include "oracles.hpp"

#include <wpcyl/tt_basis.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <memory>

using namespace wpcyl;

namespace {

// int_{-1}^{1} int_0^{2 pi} |kappa|^2 in frame coefficients, both directions by adaptive Gauss-Kronrod.
Real quadrature_sq(const TTBasisElement& e)
{
    using GK = boost::math::quadrature::gauss_kronrod<Real, 31>;
    const int k = e.k;
    const bool cos_class = e.signed_k() >= 0;
    const Real ct = GK::integrate([&](Real th) { return std::pow(std::cos(k * th), 2); }, 0, 2 * kPi, 10);
    const Real st = GK::integrate([&](Real th) { return std::pow(std::sin(k * th), 2); }, 0, 2 * kPi, 10);
    auto density = [&](Real t) {
        const auto [p, q] = e.components(t);
        if (k == 0)
            return ct * (p * p + q * q);
        return cos_class ? ct * p * p + st * q * q : st * p * p + ct * q * q;
    };
    Real total = 0;
    std::vector<Real> cuts{-1, -Real(0.3), -e.ell, 0, e.ell, Real(0.3), 1};
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += GK::integrate(density, cuts[i], cuts[i + 1], 12, Real(1e-13));
    return total;
}

Real divergence_residual(const TTBasisElement& e, int intervals, Real a, Real b)
{
    auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(a, b, intervals));
    const MetricSamples m = MetricSamples::cylinder(g, e.ell);
    const ModeField h = e.sample(*g);
    const Vec d = op::delta_tf(m, e.signed_k()) * h.stacked();
    const int n = g->size();
    Real r = 0;
    for (int c = 0; c < 2; ++c)
        for (int i = 2; i < n - 2; ++i)
            r = std::max(r, std::fabs(d(c * n + i)));
    return r / h.stacked().lpNorm<Eigen::Infinity>();
}

} // namespace

TEST_CASE("closed-form L2 norms against independent 2D quadrature")
{
    for (TTKind kind : {TTKind::kappa, TTKind::nu})
        for (int k : {0, 1, 3})
            for (Real ell : {Real(0.5), Real(0.1)}) {
                const TTNormReport r = tt_l2norm(kind, k, ell);
                const Real q = quadrature_sq(tt_element(kind, k, ell));
                CHECK(std::fabs(r.closed_form_sq - q) / q < 1e-8);
                CHECK(r.norm == doctest::Approx(std::sqrt(r.closed_form_sq)));
            }
}

TEST_CASE("basis elements are divergence free to discretization order")
{
    for (TTKind kind : {TTKind::kappa, TTKind::nu})
        for (int k : {0, 2}) {
            const TTBasisElement e = tt_element(kind, k, Real(0.5));
            const Real a = divergence_residual(e, 200, -1, 1), b = divergence_residual(e, 400, -1, 1);
            // at k = 0 the stencil is exact up to roundoff
            CHECK((b < 1e-15 || a / b > 3.5));
        }
}

TEST_CASE("growing ell = 0 solutions are divergence free away from the node")
{
    const auto [mu, lambda] = growing_solutions(2);
    for (const GrowingSolution& s : {mu, lambda}) {
        auto residual = [&](int intervals) {
            auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(Real(0.5), 1, intervals));
            const MetricSamples m(g, Profile::hyperbolic(0), 0, true);
            Vec P(g->size()), Q(g->size());
            for (int i = 0; i < g->size(); ++i)
                std::tie(P(i), Q(i)) = s.components((*g)[i]);
            Vec h(2 * g->size());
            h << P, Q;
            const Vec d = op::delta_tf(m, s.signed_k()) * h;
            const int n = g->size();
            const Real r = std::max(d.segment(2, n - 4).lpNorm<Eigen::Infinity>(),
                                    d.segment(n + 2, n - 4).lpNorm<Eigen::Infinity>());
            return r / h.lpNorm<Eigen::Infinity>();
        };
        CHECK(residual(200) / residual(400) > 3.5);
    }
    CHECK_THROWS_AS(mu.components(0), DomainError);
    CHECK_THROWS_AS(growing_solutions(0), DomainError);
}

TEST_CASE("normalization constants")
{
    const Real ell = Real(0.2);
    CHECK(tt_log_normalization(0, ell)
          == doctest::Approx(std::log(std::pow(ell, Real(1.5)) / std::sqrt(std::atan(1 / ell)))));
    CHECK(tt_log_normalization(3, ell) == doctest::Approx(std::log(std::sqrt(Real(3))) - 3 * std::atan(1 / ell) / ell));
}

TEST_CASE("basis converges to the ell = 0 limit away from the neck")
{
    for (TTKind kind : {TTKind::kappa, TTKind::nu})
        for (int k : {1, 2}) {
            const TTBasisElement lim = tt_limit(kind, k);
            Real prev = std::numeric_limits<Real>::infinity();
            for (Real ell : {Real(0.1), Real(0.01), Real(0.001)}) {
                const auto [p, q] = tt_element(kind, k, ell).components(Real(0.6));
                const auto [p0, q0] = lim.components(Real(0.6));
                const Real e = std::max(std::fabs(p - p0), std::fabs(q - q0));
                CHECK(e < prev);
                prev = e;
            }
            CHECK(prev < 1e-2);
            CHECK_THROWS_AS(lim.components(0), DomainError);
        }
}

TEST_CASE("rescaled zero mode approaches its front-face limit")
{
    for (Real T : {Real(0), Real(0.7), Real(3)}) {
        const RescaledZeroMode z = tt_rescaled_zero_mode(TTKind::kappa, Real(1e-5));
        CHECK(z.dT2(T) == doctest::Approx(tt_rescaled_limit(T)).epsilon(1e-4));
        CHECK(tt_rescaled_limit(T) == doctest::Approx(std::sqrt(2 / kPi) / std::pow(1 + T * T, 2)));
    }
    CHECK_THROWS_AS(tt_rescaled_zero_mode(TTKind::nu, 0), DomainError);
}
