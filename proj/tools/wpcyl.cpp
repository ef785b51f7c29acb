#include "wpcyl/tt_basis.hpp"
#include "wpcyl/verify.hpp"
#include "wpcyl/wp_pairing.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

using namespace wpcyl;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

struct RunConfig {
    double ell_min = 1e-3;
    double ell_max = 1e-1;
    int ell_count = 12;
    int grid_n = 2048;
    int surface_n = 1200;
    int modes = 4;
    int jobs = 1;
    std::uint64_t seed = 1;
    double solver_tol = 1e-12;
    double identity_ratio = 3.5;
    double barrier_alpha = 0.5;
    int frame_size = 4;
    std::string out;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void validate(const RunConfig& c)
{
    if (!(c.ell_min > 0))
        throw UsageError("ell-min must be positive");
    if (!(c.ell_max >= c.ell_min))
        throw UsageError("ell-max must be >= ell-min");
    if (c.ell_count < 2)
        throw UsageError("ell-count must be at least 2");
    if (c.grid_n < 16 || c.surface_n < 16)
        throw UsageError("grid sizes must be at least 16");
    if (c.modes < 0 || c.jobs < 1 || c.frame_size < 0 || c.frame_size % 2 != 0)
        throw UsageError("modes >= 0, jobs >= 1 and an even frame-size >= 0 are required");
    if (!(c.solver_tol > 0) || !(c.identity_ratio > 0) || !(c.barrier_alpha > 0))
        throw UsageError("tolerances and alpha must be positive");
}

verify::Config to_verify(const RunConfig& c)
{
    verify::Config v;
    v.ell_min = c.ell_min;
    v.ell_max = c.ell_max;
    v.ell_count = c.ell_count;
    v.grid_n = c.grid_n;
    v.surface_n = c.surface_n;
    v.modes = c.modes;
    v.jobs = c.jobs;
    v.seed = c.seed;
    v.solver_tol = c.solver_tol;
    v.identity_ratio = c.identity_ratio;
    v.barrier_alpha = c.barrier_alpha;
    v.frame_size = c.frame_size;
    return v;
}

std::string num(Real x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
    return buf;
}

// Writes to --out if given, else stdout.
void emit(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f)
        throw std::runtime_error("write to '" + path + "' failed");
}

template <class T>
std::vector<T> parallel_map(const std::vector<Real>& xs, int jobs, const std::function<T(Real)>& fn)
{
    std::vector<T> out(xs.size());
    std::vector<std::exception_ptr> err(xs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < xs.size(); i = next++) {
            try {
                out[i] = fn(xs[i]);
            } catch (...) {
                err[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::min<int>(jobs, static_cast<int>(xs.size())); ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (auto& e : err)
        if (e)
            std::rethrow_exception(e);
    return out;
}

json report_json(const verify::SuiteReport& r)
{
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"value", static_cast<double>(c.value)},
                          {"bound", static_cast<double>(c.bound)},
                          {"comparison", c.upper ? "<=" : ">="},
                          {"pass", c.pass},
                          {"detail", c.detail}});
    return {{"suite", r.suite}, {"checks", checks}, {"pass", r.pass()}};
}

int cmd_verify(const std::string& suite, const RunConfig& cfg)
{
    std::vector<std::string> names;
    if (suite == "all")
        names = verify::suite_names();
    else if (verify::has_suite(suite))
        names = {suite};
    else {
        std::cerr << "unknown suite '" << suite << "'; available: all";
        for (const auto& n : verify::suite_names())
            std::cerr << ", " << n;
        std::cerr << "\n";
        return kUsage;
    }
    json out = json::array();
    bool ok = true;
    for (const auto& n : names) {
        const verify::SuiteReport r = verify::run_suite(n, to_verify(cfg));
        ok = ok && r.pass();
        out.push_back(report_json(r));
        std::cerr << (r.pass() ? "PASS " : "FAIL ") << n << "\n";
    }
    emit(cfg.out, (names.size() == 1 ? out[0] : out).dump(2) + "\n");
    return ok ? kPass : kCheckFailure;
}

int cmd_sweep(const std::string& quantity, const RunConfig& cfg)
{
    const auto ells = log_spaced(cfg.ell_min, cfg.ell_max, cfg.ell_count);
    SurfaceOptions so;
    so.intervals = cfg.surface_n;
    so.modes = 0;
    ConformalOptions co;
    co.tol = cfg.solver_tol;
    std::ostringstream csv;

    if (quantity == "wp") {
        SweepOptions opt;
        opt.surface = so;
        opt.conformal = co;
        opt.jobs = cfg.jobs;
        csv << "ell,quantity,value,g_ll,g_lw,g_ww\r\n";
        for (const WPRow& r : sweep_wp_coefficients(ells, opt))
            csv << num(r.ell) << ",g_ll," << num(r.g_ll) << "," << num(r.g_ll) << "," << num(r.g_lw) << ","
                << num(r.g_ww) << "\r\n";
    } else if (quantity == "ttnorm") {
        csv << "ell,quantity,value\r\n";
        const int K = std::max(1, cfg.modes);
        using Row = std::vector<Real>;
        const auto rows = parallel_map<Row>(ells, cfg.jobs, [&](Real ell) {
            Row r;
            for (int k = 1; k <= K; ++k)
                r.push_back(tt_l2norm(TTKind::kappa, k, ell).norm);
            return r;
        });
        for (std::size_t i = 0; i < ells.size(); ++i)
            for (int k = 1; k <= K; ++k)
                csv << num(ells[i]) << ",kappa_norm_k" << k << "," << num(rows[i][k - 1]) << "\r\n";
    } else if (quantity == "divergence") {
        csv << "ell,quantity,value\r\n";
        const auto vals = parallel_map<Real>(ells, cfg.jobs, [&](Real ell) {
            auto s = std::make_shared<const ModelSurface>(ell, so);
            const TTProjector T(s);
            return build_cutoff_tensors(*s, T).div_norm1;
        });
        for (std::size_t i = 0; i < ells.size(); ++i)
            csv << num(ells[i]) << ",div_mu1," << num(vals[i]) << "\r\n";
    } else if (quantity == "conformal") {
        csv << "ell,quantity,value\r\n";
        using Row = std::pair<Real, Real>;
        const auto rows = parallel_map<Row>(ells, cfg.jobs, [&](Real ell) {
            const ModelSurface s(ell, so);
            const ConformalFactor cf = solve_conformal_factor(s, co);
            return Row{cf.max_abs_u, cf.u(s.index(Real(1.5)))};
        });
        for (std::size_t i = 0; i < ells.size(); ++i) {
            csv << num(ells[i]) << ",u_sup," << num(rows[i].first) << "\r\n";
            csv << num(ells[i]) << ",u_thick," << num(rows[i].second) << "\r\n";
        }
    } else {
        std::cerr << "unknown quantity '" << quantity << "'; available: wp, ttnorm, divergence, conformal\n";
        return kUsage;
    }
    emit(cfg.out, csv.str());
    return kPass;
}

std::vector<std::string> split_csv_line(std::string line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

int cmd_fit(const std::string& path, int K, int J, const std::string& quantity, const std::string& column,
            double ell_power, const RunConfig& cfg)
{
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot open '" << path << "'\n";
        return kUsage;
    }
    std::string line;
    std::getline(f, line);
    const auto header = split_csv_line(line);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return static_cast<int>(i);
        return -1;
    };
    const int ci = col("ell"), qi = col("quantity"), vi = col(column);
    if (ci < 0 || qi < 0 || vi < 0) {
        std::cerr << "'" << path << "': expected columns ell, quantity and " << column << "\n";
        return kUsage;
    }
    std::vector<Real> ell, val;
    std::string first_quantity;
    while (std::getline(f, line)) {
        const auto cells = split_csv_line(line);
        if (cells.size() < header.size())
            continue;
        if (first_quantity.empty())
            first_quantity = cells[qi];
        if (cells[qi] != (quantity.empty() ? first_quantity : quantity))
            continue;
        const Real l = std::stold(cells[ci]);
        ell.push_back(l);
        val.push_back(std::stold(cells[vi]) * std::pow(l, Real(ell_power)));
    }
    json out;
    out["quantity"] = quantity.empty() ? first_quantity : quantity;
    try {
        const ExpansionFit fit = fit_polyhomogeneous(ell, val, K, J);
        json terms = json::array();
        for (const auto& t : fit.terms)
            terms.push_back({{"half_power", t.half_power}, {"log_power", t.log_power},
                             {"coeff", static_cast<double>(t.coeff)}});
        json seq = json::array();
        for (Real r : fit.residual_sequence)
            seq.push_back(static_cast<double>(r));
        out["terms"] = terms;
        out["residual"] = static_cast<double>(fit.residual);
        out["condition_number"] = static_cast<double>(fit.condition_number);
        out["residual_sequence"] = seq;
        out["plateau"] = fit.plateau;
        emit(cfg.out, out.dump(2) + "\n");
        return kPass;
    } catch (const FitError& e) {
        out["error"] = e.what();
        out["condition_number"] = static_cast<double>(e.condition_number());
        emit(cfg.out, out.dump(2) + "\n");
        std::cerr << e.what() << "\n";
        return kCheckFailure;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weil-Petersson asymptotics on degenerating hyperbolic cylinders"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file")->envname("WPCYL_CONFIG");
    app.allow_config_extras(CLI::config_extras_mode::error);

    RunConfig cfg;
    app.add_option("--ell-min", cfg.ell_min, "smallest ell of the sweep")->capture_default_str();
    app.add_option("--ell-max", cfg.ell_max, "largest ell of the sweep")->capture_default_str();
    app.add_option("--ell-count", cfg.ell_count, "number of log-spaced ell values")->capture_default_str();
    app.add_option("--grid-n", cfg.grid_n, "intervals of cylinder grids")->capture_default_str();
    app.add_option("--surface-n", cfg.surface_n, "intervals of model-surface grids")->capture_default_str();
    app.add_option("--modes", cfg.modes, "Fourier mode budget")->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "worker threads for sweeps")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed of random test fields")->capture_default_str();
    app.add_option("--solver-tol", cfg.solver_tol, "nonlinear solver tolerance")->capture_default_str();
    app.add_option("--identity-ratio", cfg.identity_ratio, "required N -> 2N residual ratio")->capture_default_str();
    app.add_option("--barrier-alpha", cfg.barrier_alpha, "barrier exponent alpha")->capture_default_str();
    app.add_option("--frame-size", cfg.frame_size, "TT frame size m (even)")->capture_default_str();
    app.add_option("--out", cfg.out, "output path (default stdout)");

    std::string suite;
    auto* verify_cmd = app.add_subcommand("verify", "run an invariant suite and write a JSON report");
    verify_cmd->add_option("suite", suite, "suite name or 'all'")->required();
    verify_cmd->fallthrough();

    std::string quantity;
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep a quantity over ell and write CSV");
    sweep_cmd->add_option("quantity", quantity, "wp, ttnorm, divergence or conformal")->required();
    sweep_cmd->fallthrough();

    std::string csv_path, fit_quantity, fit_column = "value";
    int K = 2, J = 1;
    double ell_power = 0;
    auto* fit_cmd = app.add_subcommand("fit", "fit sum a_kj ell^(k/2) log(ell)^j to a sweep CSV");
    fit_cmd->add_option("csv", csv_path, "CSV written by sweep")->required();
    fit_cmd->add_option("-K,--half-powers", K, "largest half power k")->capture_default_str();
    fit_cmd->add_option("-J,--log-powers", J, "largest log power j")->capture_default_str();
    fit_cmd->add_option("--quantity", fit_quantity, "quantity rows to fit (default: first in file)");
    fit_cmd->add_option("--column", fit_column, "value column")->capture_default_str();
    fit_cmd->add_option("--ell-power", ell_power, "multiply values by ell^p before fitting")->capture_default_str();
    fit_cmd->fallthrough();

    try {
        app.parse(argc, argv);
        validate(cfg);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (verify_cmd->parsed())
            return cmd_verify(suite, cfg);
        if (sweep_cmd->parsed())
            return cmd_sweep(quantity, cfg);
        return cmd_fit(csv_path, K, J, fit_quantity, fit_column, ell_power, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
