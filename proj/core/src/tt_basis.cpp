#include "wpcyl/tt_basis.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace wpcyl {

Real tt_log_normalization(int k, Real ell)
{
    require(ell > 0, "tt normalization: ell must be positive");
    require(k >= 0, "tt normalization: k must be nonnegative");
    const Real at = std::atan(1 / ell);
    if (k == 0)
        return Real(1.5) * std::log(ell) - std::log(at) / 2;
    return std::log(Real(k)) / 2 - Real(k) * at / ell;
}

TTBasisElement tt_element(TTKind kind, int k, Real ell)
{
    if (ell == 0)
        throw DomainError("tt_element: ell = 0 is served by tt_limit");
    require(ell > 0 && k >= 0, "tt_element: need ell > 0 and k >= 0");
    return {kind, k, ell, tt_log_normalization(k, ell)};
}

TTBasisElement tt_limit(TTKind kind, int k)
{
    require(k >= 1, "tt_limit: k = 0 has no limit on the cylinder chart, use tt_rescaled_zero_mode");
    return {kind, k, 0, std::log(Real(k)) / 2};
}

std::pair<Real, Real> TTBasisElement::components(Real tau) const
{
    if (ell == 0) {
        require(tau != 0, "tt limit: tau = 0 is the node");
        const Real amp = std::sqrt(Real(k)) / (2 * tau * tau) * std::exp((1 - 1 / std::fabs(tau)) * k);
        const Real sg = tau > 0 ? 1 : -1;
        return kind == TTKind::kappa ? std::pair{amp, -sg * amp} : std::pair{amp, sg * amp};
    }
    const Real F = tau * tau + ell * ell;
    if (k == 0) {
        const Real v = std::exp(log_C) / F;
        return kind == TTKind::kappa ? std::pair{v, Real(0)} : std::pair{Real(0), v};
    }
    // C cosh(k x) and C sinh(k x), x = arctan(tau/ell)/ell, in log space
    const Real x = std::atan(tau / ell) / ell;
    const Real ep = std::exp(log_C + k * x) / 2;
    const Real em = std::exp(log_C - k * x) / 2;
    const Real ch = (ep + em) / F, sh = (ep - em) / F;
    return kind == TTKind::kappa ? std::pair{ch, -sh} : std::pair{ch, sh};
}

ModeField TTBasisElement::sample(const RadialGrid& grid) const
{
    Vec P(grid.size()), Q(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const auto [p, q] = components(grid[i]);
        P(i) = p;
        Q(i) = q;
    }
    return ModeField(signed_k(), Rank::sym2_tracefree, Frame::sigma, {P, Q});
}

TTNormReport tt_l2norm(TTKind kind, int k, Real ell)
{
    const TTBasisElement e = tt_element(kind, k, ell);
    TTNormReport r;
    const Real at = std::atan(1 / ell);
    if (k == 0) {
        // int_{-1}^{1} dtau / F^2 = ell^{-3} (arctan a + a/(1 + a^2)), a = 1/ell
        const Real a = 1 / ell;
        const Real c2 = std::exp(2 * e.log_C);
        r.closed_form_sq = 2 * kPi * c2 * (std::atan(a) + a / (1 + a * a)) / (ell * ell * ell);
    } else {
        const Real kk = Real(k);
        const Real damp = std::exp(-4 * kk * at / ell);
        const Real ch = (1 + damp) / 2, sh = (1 - damp) / 2; // cosh, sinh of 2k x1 times e^{-2k x1}
        r.closed_form_sq = kPi / (2 * kk * (kk * kk + ell * ell) * (1 + ell * ell)) * kk
                           * (2 * kk * ch + (2 * kk * kk + 1 + ell * ell) * sh);
    }
    // 2D quadrature: trapezoid in theta (exact for the trigonometric factors), Gauss-Kronrod in tau
    const int m = 4 * k + 8;
    Real cos2 = 0, sin2 = 0;
    for (int j = 0; j < m; ++j) {
        const Real th = 2 * kPi * Real(j) / Real(m);
        cos2 += std::pow(std::cos(k * th), 2);
        sin2 += std::pow(std::sin(k * th), 2);
    }
    cos2 *= 2 * kPi / m;
    sin2 *= 2 * kPi / m;
    const bool even_cos = kind == TTKind::kappa || k == 0;
    auto integrand = [&](Real tau) {
        const auto [p, q] = e.components(tau);
        if (k == 0)
            return 2 * kPi * (p * p + q * q);
        return even_cos ? cos2 * p * p + sin2 * q * q : sin2 * p * p + cos2 * q * q;
    };
    using GK = boost::math::quadrature::gauss_kronrod<Real, 61>;
    Real total = 0;
    // split at the neck scale so the peak of width ell is resolved
    std::vector<Real> cuts{-1, -Real(0.5), 0, Real(0.5), 1};
    for (Real s : {ell, 10 * ell})
        if (s < 1) {
            cuts.push_back(s);
            cuts.push_back(-s);
        }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            total += GK::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-16L);
    r.quadrature_sq = total;
    r.rel_err = std::fabs(r.closed_form_sq - r.quadrature_sq) / r.closed_form_sq;
    r.norm = std::sqrt(r.closed_form_sq);
    return r;
}

RescaledZeroMode tt_rescaled_zero_mode(TTKind kind, Real ell)
{
    require(ell > 0, "tt_rescaled_zero_mode: ell must be positive");
    return {kind, ell};
}

Real RescaledZeroMode::dT2(Real T) const
{
    if (kind != TTKind::kappa)
        return 0;
    const Real s = 1 + T * T;
    return 1 / (std::sqrt(std::atan(1 / ell)) * s * s);
}

Real RescaledZeroMode::dtheta2(Real) const
{
    if (kind != TTKind::kappa)
        return 0;
    return -ell * ell / std::sqrt(std::atan(1 / ell));
}

Real RescaledZeroMode::dTdtheta(Real T) const
{
    if (kind != TTKind::nu)
        return 0;
    return ell / (std::sqrt(std::atan(1 / ell)) * (1 + T * T));
}

Real tt_rescaled_limit(Real T)
{
    const Real s = 1 + T * T;
    return std::sqrt(2 / kPi) / (s * s);
}

std::pair<Real, Real> GrowingSolution::components(Real tau) const
{
    if (tau == 0)
        throw DomainError("growing solutions are singular at tau = 0");
    const Real amp = std::exp(Real(k) / std::fabs(tau)) / (tau * tau);
    const Real sg = tau > 0 ? 1 : -1;
    return kind == TTKind::kappa ? std::pair{amp, sg * amp} : std::pair{amp, -sg * amp};
}

std::pair<GrowingSolution, GrowingSolution> growing_solutions(int k)
{
    require(k >= 1, "growing_solutions: k must be positive");
    return {GrowingSolution{TTKind::kappa, k}, GrowingSolution{TTKind::nu, k}};
}

} // namespace wpcyl
