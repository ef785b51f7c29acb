#include "oracles.hpp"

#include <wpcyl/cylinder_green.hpp>

#include <doctest.h>

using namespace wpcyl;

namespace {

// the per-mode solvers invert 2 P+-_{ell,k} w = -(F w')' + (1 + (tau +- k)^2 / F) w
oracle::Sturm reference(Real ell, int k, const RealFn& h, Real wm, Real wp, int intervals = 40000)
{
    auto F = [&](Real t) { return t * t + ell * ell; };
    auto q = [&](Real t) { return 1 + (t + k) * (t + k) / F(t); };
    return oracle::solve_sturm(F, q, h, -1, 1, wm, wp, intervals);
}

Real rhs_outer(Real t)
{
    return oracle::bump(t, Real(0.5), Real(0.75)) - Real(0.5) * oracle::bump(t, -Real(0.75), -Real(0.5));
}

} // namespace

TEST_CASE("homogeneous solutions solve the zero-mode ODE")
{
    // -((1 + T^2) w')' + (1 + T^2 / (1 + T^2)) w = 0 in T = tau / ell
    for (auto w : {HomogeneousSolutions::u_star, HomogeneousSolutions::v_star}) {
        const oracle::Fn f = [&](oracle::R T) { return w(T); };
        for (Real T : {-Real(30), -Real(1.5), Real(0.2), Real(4), Real(100)}) {
            const oracle::Fn flux = [&](oracle::R x) { return (1 + x * x) * oracle::d1(f, x, Real(1e-3)); };
            const Real r = -oracle::d1(flux, T, Real(1e-3)) + (1 + T * T / (1 + T * T)) * w(T);
            CHECK(std::fabs(r) < 1e-7 * (1 + std::fabs(w(T))));
        }
    }
}

TEST_CASE("wronskian of the homogeneous pair is constant")
{
    const HomogeneousSolutions hs(Real(0.05));
    auto W = [&](Real t) { return (t * t + hs.ell * hs.ell) * (hs.u(t) * hs.dv(t) - hs.du(t) * hs.v(t)); };
    CHECK(W(Real(0.9)) == doctest::Approx(W(-Real(0.01))).epsilon(1e-14));
    CHECK(W(Real(0.3)) == doctest::Approx(W(0)).epsilon(1e-14));
}

TEST_CASE("zero-mode green solution agrees with a finite-difference oracle")
{
    for (Real ell : {Real(0.2), Real(0.05)}) {
        GreenOptions opt;
        opt.intervals = 1024;
        auto g = cylinder_grid(ell, opt);
        const GreenSolveReport r = solve_zero_mode(ell, rhs_outer, Real(0.3), -Real(0.2), g);
        const oracle::Sturm ref = reference(ell, 0, rhs_outer, -Real(0.2), Real(0.3));
        Real err = 0, scale = 0;
        for (int i = 0; i < g->size(); ++i) {
            err = std::max(err, std::fabs(r.solution.c[0](i) - oracle::interp(ref, (*g)[i])));
            scale = std::max(scale, std::fabs(r.solution.c[0](i)));
        }
        CHECK(err / scale < 1e-5);
        CHECK(r.boundary_error < 1e-10);
    }
}

TEST_CASE("nonzero-mode solve agrees with a finite-difference oracle")
{
    const Real ell = Real(0.1);
    GreenOptions opt;
    opt.intervals = 1024;
    opt.order = 4;
    auto g = cylinder_grid(ell, opt);
    for (int k : {1, 3}) {
        const int n = g->size();
        const Vec hu = g->sample(rhs_outer);
        const Vec hv = g->sample([](Real t) { return oracle::bump(t, -Real(0.9), -Real(0.6)); });
        const ModeField h(k, Rank::one_form, Frame::rho, {hu, hv});
        const ModeField w = solve_nonzero_mode(ell, k, h, 0, 0, g);
        const oracle::Sturm ru = reference(ell, k, rhs_outer, 0, 0);
        const oracle::Sturm rv = reference(
            ell, -k, [](Real t) { return oracle::bump(t, -Real(0.9), -Real(0.6)); }, 0, 0);
        Real eu = 0, ev = 0;
        for (int i = 0; i < n; ++i) {
            eu = std::max(eu, std::fabs(w.c[0](i) - oracle::interp(ru, (*g)[i])));
            ev = std::max(ev, std::fabs(w.c[1](i) - oracle::interp(rv, (*g)[i])));
        }
        CHECK(eu < 1e-5 * w.c[0].lpNorm<Eigen::Infinity>());
        CHECK(ev < 1e-5 * w.c[1].lpNorm<Eigen::Infinity>());
    }
}

TEST_CASE("dirichlet inverse matches the per-mode solves")
{
    const Real ell = Real(0.1);
    GreenOptions opt;
    opt.intervals = 512;
    auto g = cylinder_grid(ell, opt);
    const RealFn z = [](Real) { return Real(0); };
    const auto out = cylinder_dirichlet_inverse(ell, 2, {{0, rhs_outer, z}, {2, rhs_outer, rhs_outer}}, g);
    REQUIRE(out.size() == 2);
    // P = 1/2 diag(P+, P-), so the inverse solves with twice the rhs of the per-mode solvers
    const RealFn twice = [](Real t) { return 2 * rhs_outer(t); };
    const GreenSolveReport r0 = solve_zero_mode(ell, twice, 0, 0, g);
    CHECK((out[0].c[0] - r0.solution.c[0]).lpNorm<Eigen::Infinity>() < 1e-12);
    const ModeField h(2, Rank::one_form, Frame::rho, {g->sample(twice), g->sample(twice)});
    const ModeField w2 = solve_nonzero_mode(ell, 2, h, 0, 0, g);
    CHECK((out[1].stacked() - w2.stacked()).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("green solver input checks")
{
    GreenOptions opt;
    opt.intervals = 64;
    auto g = cylinder_grid(Real(0.1), opt);
    const RealFn inner = [](Real t) { return oracle::bump(t, -Real(0.2), Real(0.2)); };
    CHECK_THROWS_AS(solve_zero_mode(Real(0.1), inner, 0, 0, g), DomainError);
    CHECK_THROWS_AS(cylinder_grid(0, opt), DomainError);
    CHECK_THROWS_AS(HomogeneousSolutions(0), DomainError);
    const ModeField h(1, Rank::one_form, Frame::sigma, {Vec::Zero(g->size()), Vec::Zero(g->size())});
    CHECK_THROWS_AS(solve_nonzero_mode(Real(0.1), 1, h, 0, 0, g), DomainError);
}

TEST_CASE("barrier profiles")
{
    for (BarrierForm form : {BarrierForm::reciprocal, BarrierForm::neck}) {
        BarrierProfile b;
        b.form = form;
        b.C = 2;
        CHECK(b.value(Real(0.5), 4, Real(0.01)) == doctest::Approx(2));
        CHECK(b.value(-Real(0.5), 4, Real(0.01)) == doctest::Approx(2));
        CHECK(b.value(Real(0.2), 4, Real(0.01)) < b.value(Real(0.4), 4, Real(0.01)));
    }
}

TEST_CASE("neck barrier is a certified supersolution and bounds computed modes")
{
    const BarrierCertificate c =
        certify_barrier({Real(1e-2), Real(1e-1)}, {1, 4, 16}, Real(0.5), Real(0.5), BarrierForm::neck, 1000);
    CHECK(c.pass);
    GreenOptions opt;
    opt.intervals = 1024;
    for (Real ell : {Real(0.01), Real(0.1)}) {
        auto g = cylinder_grid(ell, opt);
        for (int k : {2, -8}) {
            const BarrierComparison b = compare_barrier(ell, k, Real(0.5), BarrierForm::neck, g);
            CHECK(b.pass());
            CHECK(b.C > 0);
        }
    }
}
