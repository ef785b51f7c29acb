#include <wpcyl/cylinder_green.hpp>
#include <wpcyl/wp_pairing.hpp>

#include <benchmark/benchmark.h>

#include <memory>

using namespace wpcyl;

namespace {

Real outer_bump(Real t)
{
    const Real a = std::fabs(t);
    if (a <= Real(0.5) || a >= Real(0.75))
        return 0;
    const Real x = (a - Real(0.5)) * 4;
    return std::pow(x * (1 - x), 4) * 256;
}

SurfaceOptions surface(int intervals, int modes)
{
    SurfaceOptions o;
    o.intervals = intervals;
    o.modes = modes;
    return o;
}

} // namespace

static void BM_AssembleP(benchmark::State& state)
{
    const Real ell = Real(0.01);
    auto g = std::make_shared<const RadialGrid>(RadialGrid::graded(-1, 1, static_cast<int>(state.range(0)), ell, 2));
    const MetricSamples m = MetricSamples::cylinder(g, ell);
    for (auto _ : state)
        benchmark::DoNotOptimize(op::P_rho(m, 3));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleP)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

static void BM_ZeroModeGreen(benchmark::State& state)
{
    const Real ell = Real(0.01);
    GreenOptions opt;
    opt.intervals = static_cast<int>(state.range(0));
    auto g = cylinder_grid(ell, opt);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_zero_mode(ell, outer_bump, 1, 1, g));
}
BENCHMARK(BM_ZeroModeGreen)->RangeMultiplier(4)->Range(256, 4096);

static void BM_NonzeroModeSolve(benchmark::State& state)
{
    const Real ell = Real(0.01);
    GreenOptions opt;
    opt.intervals = 2048;
    auto g = cylinder_grid(ell, opt);
    const Vec h = g->sample(outer_bump);
    const ModeField rhs(static_cast<int>(state.range(0)), Rank::one_form, Frame::rho, {h, h});
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_nonzero_mode(ell, rhs.k, rhs, 0, 0, g));
}
BENCHMARK(BM_NonzeroModeSolve)->Arg(1)->Arg(32);

static void BM_ParametrixApply(benchmark::State& state)
{
    auto s = std::make_shared<const ModelSurface>(Real(0.05), surface(static_cast<int>(state.range(0)), 1));
    const ChannelParametrix c(*s, 1);
    const Vec h = s->grid()->sample([](Real t) { return std::sin(kPi * (t + 2) / 4); });
    for (auto _ : state)
        benchmark::DoNotOptimize(c.apply_inverse(h));
}
BENCHMARK(BM_ParametrixApply)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);

static void BM_TTProjection(benchmark::State& state)
{
    auto s = std::make_shared<const ModelSurface>(Real(0.05), surface(1200, 0));
    const TTProjector T(s);
    const int n = s->grid()->size();
    const ModeField h(0, Rank::sym2_tracefree, Frame::sigma,
                      {s->grid()->sample([](Real t) { return std::cos(t) * (4 - t * t); }), Vec::Zero(n)});
    T.apply(h);
    for (auto _ : state)
        benchmark::DoNotOptimize(T.apply(h));
}
BENCHMARK(BM_TTProjection)->Unit(benchmark::kMillisecond);

static void BM_WPSweepPoint(benchmark::State& state)
{
    SweepOptions o;
    o.surface = surface(static_cast<int>(state.range(0)), 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_wp_coefficients({Real(0.01)}, o));
}
BENCHMARK(BM_WPSweepPoint)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);

static void BM_ConformalFactor(benchmark::State& state)
{
    const ModelSurface s(Real(0.01), surface(1200, 0));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_conformal_factor(s));
}
BENCHMARK(BM_ConformalFactor)->Unit(benchmark::kMillisecond);

static void BM_Fit(benchmark::State& state)
{
    const auto L = log_spaced(Real(1e-3), Real(1e-1), 60);
    std::vector<Real> f;
    for (Real l : L)
        f.push_back(1 + std::sqrt(l) * std::log(l));
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_polyhomogeneous(L, f, 3, 1));
}
BENCHMARK(BM_Fit);

BENCHMARK_MAIN();
