#pragma once

#include "wpcyl/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wpcyl::verify {

struct Check {
    std::string name;
    Real value = 0;
    Real bound = 0;
    bool upper = true; // pass iff value <= bound (upper) or value >= bound
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    bool pass() const;
};

struct Config {
    Real ell_min = Real(1e-3);
    Real ell_max = Real(1e-1);
    int ell_count = 12;
    int grid_n = 2048;     // cylinder grids
    int surface_n = 1200;  // model surface grids
    int modes = 4;
    int jobs = 1;
    std::uint64_t seed = 1;
    Real solver_tol = Real(1e-12);
    Real identity_ratio = Real(3.5);
    Real barrier_alpha = Real(0.5);
    int frame_size = 4;
};

std::vector<std::string> suite_names();
bool has_suite(const std::string& name);
// Throws DomainError for an unknown suite.
SuiteReport run_suite(const std::string& name, const Config& cfg);

// Relative residuals of the operator identities on a uniform order-2 grid with `intervals` intervals.
struct IdentityResiduals {
    Real weitzenboeck = 0, bianchi_trace = 0, trace_div_star = 0, intertwining = 0, conformal = 0;
};
IdentityResiduals identity_residuals(Real ell, int intervals, int k);

} // namespace wpcyl::verify
