#include "wpcyl/uniformization.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace wpcyl {

namespace {

Vec interior_residual(const MetricSamples& m, const SpMat& L, const Vec& K, const Vec& u)
{
    Vec r = L * u - K - u.array().exp().square().matrix();
    r(0) = 0;
    r(r.size() - 1) = 0;
    return r;
}

} // namespace

ConformalFactor solve_conformal_equation(const MetricSamples& m, const Vec& K, ConformalOptions opt)
{
    const int n = m.size();
    require(K.size() == n, "conformal factor: curvature has wrong length");
    require(K.maxCoeff() < 0, "conformal factor: K_g must be negative everywhere");
    const RadialGrid& g = *m.grid;
    const SpMat L = SpMat(sparse_diag(m.F) * g.d2()) + SpMat(sparse_diag(m.dF) * g.d1());

    ConformalFactor cf;
    cf.ell = m.ell;
    cf.grid = m.grid;
    cf.u = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        cf.bound = std::max(cf.bound, std::fabs(std::log(-K(i))) / 2);

    Vec r = interior_residual(m, L, K, cf.u);
    Real rn = r.lpNorm<Eigen::Infinity>();
    cf.residual_history.push_back(rn);
    while (rn > opt.tol) {
        if (cf.iterations >= opt.max_iterations)
            throw SolverError("conformal factor: Newton did not converge, residual " + std::to_string(double(rn)));
        SpMat J = L - SpMat(sparse_diag(Vec(2 * (2 * cf.u.array()).exp())));
        J = with_dirichlet_rows(J, n);
        J.makeCompressed();
        Eigen::SparseLU<SpMat> lu(J);
        if (lu.info() != Eigen::Success)
            throw SolverError("conformal factor: Jacobian factorization failed");
        const Vec step = lu.solve(Vec(-r));
        Real t = 1;
        Vec trial;
        Real tn = 0;
        for (int ls = 0; ls < 30; ++ls, t /= 2) {
            trial = cf.u + t * step;
            tn = interior_residual(m, L, K, trial).lpNorm<Eigen::Infinity>();
            if (tn < rn)
                break;
        }
        cf.u = trial;
        r = interior_residual(m, L, K, cf.u);
        rn = r.lpNorm<Eigen::Infinity>();
        cf.residual_history.push_back(rn);
        ++cf.iterations;
        if (t < Real(1e-8))
            throw SolverError("conformal factor: line search stalled");
    }
    cf.residual = rn;
    cf.max_abs_u = cf.u.lpNorm<Eigen::Infinity>();
    return cf;
}

ConformalFactor solve_conformal_factor(const MetricSamples& m, ConformalOptions opt)
{
    return solve_conformal_equation(m, m.curvature(), opt);
}

ConformalFactor solve_conformal_factor(const ModelSurface& s, ConformalOptions opt)
{
    const Vec K = s.samples().curvature();
    if (K.maxCoeff() >= 0)
        throw DomainError("conformal factor: K_g >= 0 somewhere at ell = " + std::to_string(double(s.ell()))
                          + " (max K = " + std::to_string(double(K.maxCoeff())) + ")");
    return solve_conformal_equation(s.samples(), K, opt);
}

Vec conformal_curvature(const MetricSamples& m, const Vec& u)
{
    const RadialGrid& g = *m.grid;
    const Vec lap = g.diff(Vec(m.F.cwiseProduct(g.diff(u))));
    return (m.curvature() - lap).cwiseProduct(Vec((-2 * u.array()).exp().matrix()));
}

} // namespace wpcyl
