#include "wpcyl/cylinder_model.hpp"

#include <algorithm>
#include <cmath>

namespace wpcyl {

Profile Profile::hyperbolic(Real ell)
{
    return {[ell](Real t) { return t * t + ell * ell; }, [](Real t) { return 2 * t; },
            [](Real) { return Real(2); }};
}

Profile Profile::flat(Real c)
{
    return {[c](Real) { return c; }, [](Real) { return Real(0); }, [](Real) { return Real(0); }};
}

CylinderMetric::CylinderMetric(Real ell, Real tau_min, Real tau_max)
    : ell_(ell), tau_min_(tau_min), tau_max_(tau_max)
{
    require(ell >= 0, "cylinder metric: ell must be nonnegative");
    require(tau_max > tau_min, "cylinder metric: empty tau range");
}

CoordinateChart::CoordinateChart(ChartKind kind, Real ell) : kind_(kind), ell_(ell)
{
    require(ell > 0, "coordinate chart: ell must be positive");
}

CoordinateChart CoordinateChart::plumbing_from_t(Real t)
{
    require(t > 0 && t < Real(0.25), "plumbing chart: t must lie in (0, 1/4)");
    return CoordinateChart(ChartKind::plumbing, kPi / std::fabs(std::log(t)));
}

Real CoordinateChart::forward(Real tau) const
{
    switch (kind_) {
    case ChartKind::tau:
        return tau;
    case ChartKind::arcsinh:
        return std::asinh(tau / ell_);
    case ChartKind::rescaled:
        return tau / ell_;
    case ChartKind::plumbing:
        // tau / ell = cot(ell |log|z||), principal branch of arccot in (0, pi)
        return std::exp(-std::atan2(Real(1), tau / ell_) / ell_);
    }
    return tau;
}

Real CoordinateChart::inverse(Real x) const
{
    switch (kind_) {
    case ChartKind::tau:
        return x;
    case ChartKind::arcsinh:
        return ell_ * std::sinh(x);
    case ChartKind::rescaled:
        return ell_ * x;
    case ChartKind::plumbing: {
        require(x > 0 && x < 1, "plumbing chart: |z| must lie in (0, 1)");
        const Real a = ell_ * std::fabs(std::log(x));
        return ell_ * std::cos(a) / std::sin(a);
    }
    }
    return x;
}

MetricSamples::MetricSamples(std::shared_ptr<const RadialGrid> g, const Profile& p, Real ell_value,
                             bool is_hyperbolic, bool allow_zero)
    : grid(std::move(g)), ell(ell_value), hyperbolic(is_hyperbolic)
{
    F = grid->sample(p.F);
    dF = grid->sample(p.dF);
    d2F = grid->sample(p.d2F);
    if (allow_zero)
        require(F.minCoeff() >= 0, "metric samples: profile must be nonnegative on the grid");
    else
        require(F.minCoeff() > 0, "metric samples: profile must be positive on the grid");
    sqrtF = F.cwiseSqrt();
}

MetricSamples MetricSamples::cylinder(std::shared_ptr<const RadialGrid> g, Real ell)
{
    require(ell > 0, "cylinder samples: ell must be positive");
    return MetricSamples(std::move(g), Profile::hyperbolic(ell), ell, true);
}

std::pair<Real, Real> metric_components(const CylinderMetric& m, Real tau)
{
    if (m.ell() == 0 && tau == 0)
        throw DomainError("metric_components: degenerate point tau = 0 of the noded metric");
    const Real F = m.F(tau);
    return {1 / F, F};
}

Vec profile_curvature(const RadialGrid& grid, const Vec& F)
{
    require(F.size() == grid.size(), "profile_curvature: sample count does not match grid");
    require(F.minCoeff() > 0, "profile_curvature: profile must be positive");
    return -grid.diff2(F) / 2;
}

Real boundary_distance(const CylinderMetric& m)
{
    require(m.ell() > 0, "boundary_distance: ell must be positive");
    return std::asinh(1 / m.ell());
}

Real mz_substitution_check(Real t, const std::vector<Real>& radii)
{
    const CoordinateChart chart = CoordinateChart::plumbing_from_t(t);
    const Real ell = chart.ell();
    const Real lt = std::log(t);
    Real worst = 0;
    for (Real r : radii) {
        require(r >= std::sqrt(t) * (1 - 1e-15L) && r <= Real(0.5), "mz_substitution_check: radius outside the annulus");
        const Real lr = std::log(r);
        const Real a = kPi * lr / lt;
        const Real density = std::pow(a / std::sin(a), 2) / (r * r * lr * lr);
        const Real tau = chart.inverse(r);
        const Real F = tau * tau + ell * ell;
        const Real dtau = ell * ell / (std::sin(a) * std::sin(a) * r);
        const Real g_rr = dtau * dtau / F;
        const Real g_tt = F / (r * r);
        worst = std::max({worst, std::fabs(g_rr - density) / density, std::fabs(g_tt - density) / density});
    }
    return worst;
}

} // namespace wpcyl
