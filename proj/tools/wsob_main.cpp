// wsob: batch driver for the weighted-Sobolev / Grushin laboratory.
//
// Subcommands: constants, ode, minimize, rearrange, grushin, residual,
// moving-sphere. JSON parameters in (file or inline), JSON report to stdout
// or --out directory, CSV artifacts next to it. Exit codes: 0 success,
// 2 usage error, 3 numerical failure.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "wsob/extremals.hpp"
#include "wsob/grushin.hpp"
#include "wsob/io.hpp"
#include "wsob/minimize.hpp"
#include "wsob/ode.hpp"
#include "wsob/params.hpp"
#include "wsob/quadrature.hpp"
#include "wsob/rearrange.hpp"
#include "wsob/special.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace wsob;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_params(const std::string& params_arg) {
    if (params_arg.empty()) return json::object();
    try {
        if (params_arg.front() == '{' || params_arg.front() == '[')
            return json::parse(params_arg);
        std::ifstream in(params_arg);
        if (!in) throw UsageError("cannot open params file: " + params_arg);
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("malformed JSON parameters: ") + e.what());
    }
}

double need_num(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw UsageError(std::string("missing or non-numeric field: ") + key);
    return j[key].get<double>();
}

int need_int(const json& j, const char* key) {
    const double v = need_num(j, key);
    const int i = static_cast<int>(v);
    if (i != v) throw UsageError(std::string("field must be an integer: ") + key);
    return i;
}

WeightPair weight_pair_of(const json& j) {
    return {need_int(j, "n"), need_num(j, "alpha"), need_num(j, "beta")};
}

GrushinParams grushin_of(const json& j) {
    return {need_int(j, "n"), need_int(j, "m"), need_num(j, "tau")};
}

extremals::ExtremalSpec spec_of(const WeightPair& wp) {
    extremals::ExtremalSpec s;
    s.wp = wp;
    if (is_case1_pair(wp))
        s.case_id = extremals::ExtremalCase::Case1;
    else if (is_case2_pair(wp))
        s.case_id = extremals::ExtremalCase::Case2;
    else
        throw NumericalFailure("no closed-form extremal for this (alpha, beta)");
    return s;
}

struct Outputs {
    fs::path dir;  // empty = stdout only
    json manifest;

    fs::path file(const std::string& name) const { return dir / name; }
    void emit(const json& report) const {
        json full = manifest;
        full["report"] = report;
        if (!dir.empty()) {
            std::ofstream out(dir / "report.json");
            out << full.dump(2) << "\n";
        }
        std::cout << full.dump(2) << "\n";
    }
};

// ---------------------------------------------------------------------------

json cmd_constants(const json& p, const Outputs& out) {
    json rep;
    if (p.contains("m")) {
        const GrushinParams gp = grushin_of(p);
        if (std::fabs(gp.tau - 1.0) > 1e-12)
            throw NumericalFailure("closed-form Grushin constants require tau = 1");
        const auto r = special::grushin_sharp_constant_tau1(gp.n, gp.m);
        rep["formula"] = "grushin_tau1";
        rep["value"] = r.value;
        if (gp.m % 2 == 0) {
            const double conv = constant_conversion(
                gp, special::sharp_constant_case1(gp.n, gp.m / 2.0).value);
            rep["conversion_value"] = conv;
            rep["conversion_rel_diff"] = std::fabs(conv - r.value) / r.value;
        }
        if (gp.n + gp.m <= 4) {
            // quadrature cross-check through the reduced Rayleigh quotient
            quad::GrushinRadialFn u = [gp](double xr, double zr) {
                const double D = xr * xr + (zr * zr + 1.0) * (zr * zr + 1.0);
                return std::pow(1.0 / D, (2.0 * gp.n + gp.m - 2.0) / 4.0);
            };
            const double G = quad::rayleigh_G_radial(u, gp);
            rep["quadrature_value"] = G;
            rep["quadrature_rel_diff"] = std::fabs(G - r.value) / r.value;
        }
        return rep;
    }
    const WeightPair wp = weight_pair_of(p);
    const auto spec = spec_of(wp);
    const auto r = is_case1_pair(wp) ? special::sharp_constant_case1(wp.n, wp.alpha)
                                     : special::sharp_constant_case2(wp.n, wp.alpha);
    rep["formula"] = is_case1_pair(wp) ? "case1" : "case2";
    rep["value"] = r.value;
    const double F = quad::rayleigh_F_richardson(extremals::radial_evaluator(spec), wp);
    rep["quadrature_value"] = F;
    rep["quadrature_rel_diff"] = std::fabs(F - r.value) / r.value;
    (void)out;
    return rep;
}

json cmd_ode(const json& p, const Outputs& out) {
    const WeightPair wp = weight_pair_of(p);
    const auto res = ode::solve_bvp(wp);
    json rep;
    rep["params"] = {{"n", wp.n}, {"alpha", wp.alpha}, {"beta", wp.beta}};
    rep["iters"] = res.iters;
    switch (res.status) {
        case ode::SolveStatus::Converged:
            rep["status"] = "converged";
            rep["K"] = res.K;
            rep["psi0"] = res.psi0;
            rep["residual"] = res.residual;
            rep["uniqueness_guaranteed"] = res.uniqueness_guaranteed;
            if (!out.dir.empty())
                io::write_profile_csv(out.file("profile.csv").string(), res.profile);
            break;
        case ode::SolveStatus::NoSolution:
            rep["status"] = "no-solution";
            rep["nonexistence_regime"] = res.nonexistence_regime;
            break;
        case ode::SolveStatus::Stagnation:
            rep["status"] = "stagnation";
            break;
    }
    if (res.status == ode::SolveStatus::Stagnation)
        throw NumericalFailure("shooting stagnated");
    return rep;
}

json cmd_minimize(const json& p, const Outputs& out) {
    const WeightPair wp = weight_pair_of(p);
    minimize::FlowConfig cfg;
    if (p.contains("res")) cfg.n_rho = cfg.n_t = need_int(p, "res");
    if (p.contains("box")) cfg.R = cfg.T = need_num(p, "box");
    if (p.contains("df_tol")) cfg.df_tol = need_num(p, "df_tol");
    const auto res = minimize::minimize_constant(wp, cfg);
    json rep;
    rep["S_estimate"] = res.S_estimate;
    rep["iters"] = res.iters;
    rep["converged"] = res.converged;
    rep["stagnated"] = res.stagnated;
    if (!out.dir.empty()) {
        io::write_trace_csv(out.file("trace.csv").string(), res.F_history);
        io::write_field_csv(out.file("field.csv").string(), res.field);
    }
    if (res.stagnated) throw NumericalFailure("gradient flow stagnated");
    return rep;
}

json cmd_rearrange(const json& p, const Outputs& out, uint64_t seed) {
    const GrushinParams gp = grushin_of(p);
    const int res = p.contains("res") ? need_int(p, "res") : 65;
    if (p.contains("seed")) seed = static_cast<uint64_t>(need_num(p, "seed"));
    const double extent = p.contains("extent") ? need_num(p, "extent") : 10.0;
    const auto u = rearrange::random_smooth_bump(gp.n, gp.m, extent, res, seed);
    const auto ux = rearrange::schwarz_block(u, rearrange::Block::X);
    const auto rr = rearrange::fourier_rearrange(u, gp);
    const double Gu = quad::rayleigh_G(u, gp);
    const double Gux = quad::rayleigh_G(ux, gp);
    const double Gw = quad::rayleigh_G(rr.w, gp);
    json rep;
    rep["seed"] = seed;
    rep["G_u"] = Gu;
    rep["G_ux"] = Gux;
    rep["G_w"] = Gw;
    rep["chain_nonincreasing"] = Gw <= Gux + 1e-3 * Gu && Gux <= Gu + 1e-3 * Gu;
    rep["imag_residue"] = rr.imag_residue;
    rep["hypothesis_integer_exponent"] = rr.hypothesis_ok;
    if (!out.dir.empty()) {
        io::write_lattice_csv(out.file("input.csv").string(), u);
        io::write_lattice_csv(out.file("rearranged.csv").string(), rr.w);
    }
    return rep;
}

json cmd_grushin(const json& p, const Outputs& out) {
    const GrushinParams gp = grushin_of(p);
    const WeightPair wp = grushin_to_weight(gp);
    json rep;
    rep["weight_pair"] = {{"n", wp.n}, {"alpha", wp.alpha}, {"beta", wp.beta}};
    rep["Q"] = gp.homogeneous_dim();
    rep["p_star"] = critical_exponent(wp);
    const auto spec = spec_of(wp);
    const auto uh = extremals::radial_evaluator(spec);
    rep["bridge_deviation"] = quad::functional_bridge_check(uh, gp);
    (void)out;
    return rep;
}

json cmd_residual(const json& p, const Outputs& out) {
    const WeightPair wp = weight_pair_of(p);
    const auto spec = spec_of(wp);
    const auto st = extremals::pde_residual_ratio(extremals::radial_evaluator(spec), wp);
    json rep;
    rep["mean_ratio"] = st.mean;
    rep["relative_spread"] = st.spread;
    (void)out;
    return rep;
}

json cmd_moving_sphere(const json& p, const Outputs& out, uint64_t seed) {
    const WeightPair wp = weight_pair_of(p);
    const auto spec = spec_of(wp);
    const auto u = extremals::evaluator(spec);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> yy(-5.0, 5.0), tt(0.0, 5.0);
    std::vector<std::vector<double>> pts(500, std::vector<double>(wp.n + 1));
    for (auto& pt : pts) {
        for (int i = 0; i < wp.n; ++i) pt[i] = yy(rng);
        pt[wp.n] = tt(rng);
    }
    std::vector<double> b(wp.n + 1, 0.0);
    if (p.contains("b") && p["b"].is_array()) {
        const auto& arr = p["b"];
        for (size_t i = 0; i < arr.size() && i + 1 < b.size(); ++i)
            b[i] = arr[i].get<double>();
    }
    json rep;
    rep["deviation"] = extremals::moving_sphere_check(u, wp, b, pts);
    (void)out;
    return rep;
}

json dispatch(const std::string& cmd, const json& params, const Outputs& out,
              uint64_t seed) {
    if (cmd == "constants") return cmd_constants(params, out);
    if (cmd == "ode") return cmd_ode(params, out);
    if (cmd == "minimize") return cmd_minimize(params, out);
    if (cmd == "rearrange") return cmd_rearrange(params, out, seed);
    if (cmd == "grushin") return cmd_grushin(params, out);
    if (cmd == "residual") return cmd_residual(params, out);
    if (cmd == "moving-sphere") return cmd_moving_sphere(params, out, seed);
    throw UsageError("unknown subcommand: " + cmd);
}

int run_single(const std::string& cmd, const std::string& params_arg,
               const std::string& out_dir, uint64_t seed) {
    const json params = load_params(params_arg);
    Outputs out;
    if (!out_dir.empty()) {
        out.dir = out_dir;
        fs::create_directories(out.dir);
    }
    out.manifest = {{"command", cmd},
                    {"params", params},
                    {"seed", seed},
                    {"out", out_dir},
                    {"version", "0.1.0"}};
    const json rep = dispatch(cmd, params, out, seed);
    out.emit(rep);
    return 0;
}

int run_sweep(const std::string& cmd, const std::string& sweep_file,
              const std::string& out_dir, uint64_t seed) {
    json sweep;
    {
        std::ifstream in(sweep_file);
        if (!in) throw UsageError("cannot open sweep file: " + sweep_file);
        try {
            sweep = json::parse(in);
        } catch (const json::parse_error& e) {
            throw UsageError(std::string("malformed sweep JSON: ") + e.what());
        }
    }
    if (!sweep.is_array()) throw UsageError("sweep file must hold a JSON array");
    if (out_dir.empty()) throw UsageError("--sweep requires --out");

    std::vector<int> codes(sweep.size(), 0);
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(sweep.size())));
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < sweep.size(); i = next.fetch_add(1)) {
                char name[32];
                std::snprintf(name, sizeof name, "run_%03zu", i);
                Outputs out;
                out.dir = fs::path(out_dir) / name;
                fs::create_directories(out.dir);
                out.manifest = {{"command", cmd},
                                {"params", sweep[i]},
                                {"seed", seed + i},
                                {"out", out.dir.string()},
                                {"version", "0.1.0"}};
                try {
                    const json rep = dispatch(cmd, sweep[i], out, seed + i);
                    std::ofstream rf(out.dir / "report.json");
                    json full = out.manifest;
                    full["report"] = rep;
                    rf << full.dump(2) << "\n";
                } catch (const std::exception& e) {
                    std::ofstream rf(out.dir / "report.json");
                    rf << json{{"error", e.what()}}.dump(2) << "\n";
                    codes[i] = 3;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (int c : codes)
        if (c != 0) return 3;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted Sobolev / Baouendi-Grushin sharp constant laboratory"};
    app.require_subcommand(1);

    std::string params_arg, out_dir, sweep_file;
    uint64_t seed = 0;

    const std::vector<std::string> names = {
        "constants", "ode", "minimize", "rearrange", "grushin", "residual",
        "moving-sphere"};
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--params", params_arg, "JSON parameters (file path or inline)");
        sub->add_option("--out", out_dir, "output directory for reports and CSV");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--sweep", sweep_file, "JSON array of parameter sets, fanned out");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (!sweep_file.empty()) return run_sweep(cmd, sweep_file, out_dir, seed);
        return run_single(cmd, params_arg, out_dir, seed);
    } catch (const UsageError& e) {
        std::cerr << json{{"error", e.what()}, {"code", "usage"}}.dump() << "\n";
        return 2;
    } catch (const special::unsupported_case& e) {
        std::cerr << json{{"error", e.what()}, {"code", "unsupported-case"}}.dump() << "\n";
        return 3;
    } catch (const NumericalFailure& e) {
        std::cerr << json{{"error", e.what()}, {"code", "numerical"}}.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"code", "numerical"}}.dump() << "\n";
        return 3;
    }
}
