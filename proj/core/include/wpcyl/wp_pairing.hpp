#pragma once

#include "wpcyl/uniformization.hpp"

#include <string>
#include <vector>

namespace wpcyl {

enum class VariationKind { length, twist, custom };

struct VariationField {
    VariationKind kind = VariationKind::custom;
    ModeField field; // sym2_full, sigma frame
};

// Twist step s: 0 for tau <= -3/4, 1 for tau >= 3/4.
Real twist_step(Real tau);
Real twist_step_d(Real tau);

// d/d(ell) of the model metric: P = -dF_dell / F.
VariationField length_variation(const ModelSurface& s);
// d/d(omega) of the pullback under theta -> theta + omega s(tau): Q = F s'.
VariationField twist_variation(const ModelSurface& s);

// <T h1, T h2> with weight e^{-2 phi} dA_g; phi may be empty (phi = 0).
Real wp_inner_product(const TTProjector& T, const ModeField& h1, const ModeField& h2, const Vec& phi = {});

struct WPRow {
    Real ell = 0;
    Real g_ll = 0, g_lw = 0, g_ww = 0;
    Real u_sup = 0, u_bound = 0;
    Real normalized_cross() const;
};

struct SweepOptions {
    SurfaceOptions surface;
    ConformalOptions conformal;
    bool use_conformal_factor = true;
    int jobs = 1;
};

std::vector<Real> log_spaced(Real lo, Real hi, int count);

// Rows sorted by ell ascending regardless of evaluation order.
std::vector<WPRow> sweep_wp_coefficients(const std::vector<Real>& ells, const SweepOptions& opt = {});

// Least-squares slope of log y against log x, dropping `drop` points at each end.
Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y, int drop = 0);

struct ExpansionTerm {
    int half_power = 0; // exponent k/2
    int log_power = 0;
    Real coeff = 0;
};

struct ExpansionFit {
    std::vector<ExpansionTerm> terms;
    Real residual = 0;         // ||A a - f|| / ||f||
    Real condition_number = 0; // of the column-equilibrated design matrix
    std::vector<Real> residual_sequence; // after each added column, canonical order
    bool plateau = false;
    std::vector<Real> ell, values;

    Real coefficient(int half_power, int log_power) const;
    Real evaluate(Real ell) const;
};

struct FitOptions {
    Real max_condition = Real(1e12);
    Real min_decades = 2;
    // plateau: final residual above plateau_floor and the last third of the sequence
    // improves by less than plateau_gain
    Real plateau_floor = Real(1e-9);
    Real plateau_gain = 10;
};

class FitError : public SolverError {
public:
    FitError(const std::string& what, Real condition) : SolverError(what), condition_(condition) {}
    Real condition_number() const { return condition_; }

private:
    Real condition_;
};

ExpansionFit fit_polyhomogeneous(const std::vector<Real>& ell, const std::vector<Real>& f, int K, int J,
                                 FitOptions opt = {});

} // namespace wpcyl
