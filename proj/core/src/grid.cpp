#include "wpcyl/grid.hpp"

#include <algorithm>
#include <cmath>

namespace wpcyl {

Mat fornberg_weights(Real z, const std::vector<Real>& x, int m)
{
    const int n = static_cast<int>(x.size()) - 1;
    Mat c = Mat::Zero(n + 1, m + 1);
    Real c1 = 1, c4 = x[0] - z;
    c(0, 0) = 1;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        Real c2 = 1;
        const Real c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const Real c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

RadialGrid::RadialGrid(Vec nodes, Spacing spacing, int order)
    : nodes_(std::move(nodes)), spacing_(spacing), order_(order)
{
    require(nodes_.size() >= 3, "grid needs at least three nodes");
    for (int i = 1; i < nodes_.size(); ++i)
        require(nodes_(i) > nodes_(i - 1), "grid nodes must be strictly increasing");
    if (spacing_ == Spacing::chebyshev) {
        build_chebyshev();
    } else {
        require(order_ == 2 || order_ == 4 || order_ == 6 || order_ == 8,
                "finite-difference order must be 2, 4, 6 or 8");
        build_fd();
        build_simpson();
    }
}

RadialGrid RadialGrid::uniform(Real a, Real b, int intervals, int order)
{
    require(b > a, "uniform grid: empty interval");
    require(intervals >= 2 && intervals % 2 == 0, "uniform grid: intervals must be even and >= 2");
    Vec t(intervals + 1);
    for (int i = 0; i <= intervals; ++i)
        t(i) = a + (b - a) * Real(i) / Real(intervals);
    t(intervals) = b;
    return RadialGrid(std::move(t), Spacing::uniform, order);
}

RadialGrid RadialGrid::graded(Real a, Real b, int intervals, Real scale, int order,
                              const std::vector<Real>& breakpoints)
{
    require(b > a, "graded grid: empty interval");
    require(scale > 0, "graded grid: scale must be positive");
    require(intervals >= 2, "graded grid: too few intervals");
    std::vector<Real> cuts{a};
    for (Real p : breakpoints)
        if (p > a && p < b)
            cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto s_of = [&](Real t) { return std::asinh(t / scale); };
    const Real s_total = s_of(b) - s_of(a);
    std::vector<Real> t{a};
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const Real s0 = s_of(cuts[seg]), s1 = s_of(cuts[seg + 1]);
        int m = static_cast<int>(std::lround(static_cast<double>(intervals * (s1 - s0) / s_total)));
        m = std::max(m, 2);
        if (m % 2)
            ++m;
        for (int i = 1; i <= m; ++i) {
            const Real s = s0 + (s1 - s0) * Real(i) / Real(m);
            t.push_back(i == m ? cuts[seg + 1] : scale * std::sinh(s));
        }
    }
    Vec nodes(static_cast<int>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i)
        nodes(static_cast<int>(i)) = t[i];
    return RadialGrid(std::move(nodes), Spacing::graded, order);
}

RadialGrid RadialGrid::chebyshev(Real a, Real b, int intervals)
{
    require(b > a, "chebyshev grid: empty interval");
    require(intervals >= 4 && intervals % 2 == 0, "chebyshev grid: intervals must be even and >= 4");
    Vec t(intervals + 1);
    for (int j = 0; j <= intervals; ++j)
        t(j) = (a + b) / 2 - (b - a) / 2 * std::cos(kPi * Real(j) / Real(intervals));
    t(0) = a;
    t(intervals) = b;
    if (intervals % 2 == 0)
        t(intervals / 2) = (a + b) / 2;
    return RadialGrid(std::move(t), Spacing::chebyshev, intervals);
}

void RadialGrid::build_fd()
{
    const int n = size();
    const int p = order_;
    std::vector<Triplet> t1, t2;
    t1.reserve(static_cast<std::size_t>(n) * (p + 2));
    t2.reserve(static_cast<std::size_t>(n) * (p + 2));
    auto add = [&](std::vector<Triplet>& trip, int i, int width, int deriv) {
        int lo = i - width / 2;
        lo = std::clamp(lo, 0, n - width);
        std::vector<Real> x(static_cast<std::size_t>(width));
        for (int j = 0; j < width; ++j)
            x[static_cast<std::size_t>(j)] = nodes_(lo + j);
        const Mat w = fornberg_weights(nodes_(i), x, deriv);
        for (int j = 0; j < width; ++j)
            trip.emplace_back(i, lo + j, w(j, deriv));
    };
    for (int i = 0; i < n; ++i) {
        const bool interior = i - p / 2 >= 0 && i + p / 2 <= n - 1;
        add(t1, i, p + 1, 1);
        add(t2, i, interior ? p + 1 : p + 2, 2);
    }
    d1_.resize(n, n);
    d2_.resize(n, n);
    d1_.setFromTriplets(t1.begin(), t1.end());
    d2_.setFromTriplets(t2.begin(), t2.end());
}

void RadialGrid::build_simpson()
{
    const int n = size();
    weights_ = Vec::Zero(n);
    const int intervals = n - 1;
    int i = 0;
    for (; i + 2 <= intervals; i += 2) {
        const Real h0 = nodes_(i + 1) - nodes_(i), h1 = nodes_(i + 2) - nodes_(i + 1);
        const Real s = h0 + h1;
        weights_(i) += s / 6 * (2 - h1 / h0);
        weights_(i + 1) += s * s * s / (6 * h0 * h1);
        weights_(i + 2) += s / 6 * (2 - h0 / h1);
    }
    if (i < intervals) {
        // odd interval count: close with the trapezoid rule on the last interval
        const Real h = nodes_(i + 1) - nodes_(i);
        weights_(i) += h / 2;
        weights_(i + 1) += h / 2;
    }
}

void RadialGrid::build_chebyshev()
{
    // Trefethen's differentiation matrix on x in [-1, 1] (nodes ascending), scaled to [a, b].
    const int N = size() - 1;
    const Real a = nodes_(0), b = nodes_(N);
    const Real half = (b - a) / 2;
    Vec x(N + 1);
    for (int j = 0; j <= N; ++j)
        x(j) = -std::cos(kPi * Real(j) / Real(N));
    if (N % 2 == 0)
        x(N / 2) = 0;
    Mat D = Mat::Zero(N + 1, N + 1);
    auto cw = [&](int j) { return (j == 0 || j == N) ? Real(2) : Real(1); };
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j)
            if (i != j) {
                const Real sgn = ((i + j) % 2) ? -1 : 1;
                D(i, j) = cw(i) / cw(j) * sgn / (x(i) - x(j));
            }
    for (int i = 0; i <= N; ++i)
        D(i, i) = -D.row(i).sum();
    D /= half;
    const Mat D2 = D * D;
    d1_ = D.sparseView();
    d2_ = D2.sparseView();

    // Clenshaw-Curtis weights
    weights_ = Vec::Zero(N + 1);
    for (int j = 0; j <= N; ++j) {
        const Real th = kPi * Real(j) / Real(N);
        Real s = 0;
        for (int k = 1; k <= N / 2; ++k) {
            const Real bk = (k == N / 2) ? 1 : 2;
            s += bk / Real(4 * k * k - 1) * std::cos(2 * k * th);
        }
        const Real cj = (j == 0 || j == N) ? 1 : 2;
        weights_(j) = cj / Real(N) * (1 - s) * half;
    }
}

int RadialGrid::find(Real tau) const
{
    const auto* begin = nodes_.data();
    const auto* end = begin + size();
    const auto* it = std::lower_bound(begin, end, tau - 1e-14L * (1 + std::fabs(tau)));
    if (it != end && std::fabs(*it - tau) <= 1e-14L * (1 + std::fabs(tau)))
        return static_cast<int>(it - begin);
    return -1;
}

std::vector<int> RadialGrid::indices_in(Real lo, Real hi) const
{
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (nodes_(i) >= lo && nodes_(i) <= hi)
            out.push_back(i);
    return out;
}

} // namespace wpcyl
