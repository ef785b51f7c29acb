#pragma once

#include "wpcyl/model_surface.hpp"

#include <vector>

namespace wpcyl {

struct ConformalOptions {
    Real tol = Real(1e-12);
    int max_iterations = 50;
};

// u with e^{2u} g of curvature -1 and u = 0 at both ends of the grid.
struct ConformalFactor {
    Real ell = 0;
    std::shared_ptr<const RadialGrid> grid;
    Vec u;
    Real residual = 0;
    Real bound = 0; // 1/2 max |log |K_g||
    Real max_abs_u = 0;
    int iterations = 0;
    std::vector<Real> residual_history;

    bool within_bound() const { return max_abs_u <= bound; }
};

// Solves (F u')' = K + e^{2u} on the grid of m, Dirichlet at the ends. K defaults to -F''/2.
ConformalFactor solve_conformal_equation(const MetricSamples& m, const Vec& K, ConformalOptions opt = {});
ConformalFactor solve_conformal_factor(const MetricSamples& m, ConformalOptions opt = {});
ConformalFactor solve_conformal_factor(const ModelSurface& s, ConformalOptions opt = {});

// Curvature of e^{2u} g as e^{-2u} (K_g - (F u')'), the Laplacian in flux form
// (the solver uses F u'' + F' u').
Vec conformal_curvature(const MetricSamples& m, const Vec& u);

} // namespace wpcyl
