// Batch front end: parses a strict JSON run configuration, executes one
// command, and emits manifest.json, result.json, and any CSV series into
// the output directory. Exit codes: 0 success, 2 validation error, 3
// numerical failure.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gkdv/direction.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/evolution.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/groundstate.hpp"
#include "gkdv/model.hpp"
#include "gkdv/petviashvili.hpp"
#include "gkdv/spectral.hpp"
#include "gkdv/types.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "gkdv-duo 1.0.0";

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& allowed) {
    if (!obj.is_object()) throw gkdv::ValidationError(where + ": expected a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const auto& k : allowed)
            if (key == k) ok = true;
        if (!ok) throw gkdv::ValidationError(where + ": unknown key '" + key + "'");
    }
}

double get_num(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw gkdv::ValidationError("config: '" + key + "' must be a number");
    return obj[key].get<double>();
}

long get_int(const json& obj, const std::string& key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw gkdv::ValidationError("config: '" + key + "' must be an integer");
    return obj[key].get<long>();
}

gkdv::ModelParams parse_params(const json& cfg) {
    if (!cfg.contains("params")) throw gkdv::ValidationError("config: missing 'params'");
    const json& p = cfg["params"];
    require_keys(p, "params", {"k", "a", "b", "c", "d", "mu"});
    gkdv::ModelParams params;
    params.k = static_cast<int>(get_int(p, "k", 2));
    params.a = get_num(p, "a", 0.0);
    params.b = get_num(p, "b", 0.0);
    params.c = get_num(p, "c", 0.0);
    params.d = get_num(p, "d", 0.0);
    params.mu = static_cast<int>(get_int(p, "mu", 1));
    params.validate();
    return params;
}

gkdv::Grid parse_grid(const json& cfg, double omega) {
    if (!cfg.contains("grid")) return gkdv::suggested_grid(omega);
    const json& g = cfg["grid"];
    require_keys(g, "grid", {"n", "length"});
    gkdv::Grid grid;
    grid.n = static_cast<std::size_t>(get_int(g, "n", 1024));
    grid.length = get_num(g, "length", 64.0 / std::sqrt(omega));
    grid.validate();
    return grid;
}

gkdv::EvolveOptions parse_evolve_options(const json& opts) {
    gkdv::EvolveOptions eo;
    eo.dt = get_num(opts, "dt", 1e-3);
    eo.t_end = get_num(opts, "t_end", 1.0);
    eo.dealias = get_num(opts, "dealias", 2.0 / 3.0);
    eo.filter_order = static_cast<int>(get_int(opts, "filter_order", 36));
    eo.record_every = static_cast<int>(get_int(opts, "record_every", 10));
    eo.validate();
    return eo;
}

gkdv::DirectionPoint pick_direction(const gkdv::ModelParams& params, const json& opts) {
    if (opts.contains("theta"))
        return gkdv::make_direction_point(params, get_num(opts, "theta", 0.0));
    try {
        const auto regime = gkdv::classify_regime(params);
        return regime.predicted_directions.size() == 1 ? regime.predicted_directions.front()
                                                       : regime.predicted_directions.back();
    } catch (const gkdv::ValidationError&) {
        const auto set = gkdv::maximize_f(params);
        return set.points.back();
    }
}

json direction_json(const gkdv::DirectionPoint& p) {
    return json{{"theta", p.theta},
                {"x0", p.x0},
                {"y0", p.y0},
                {"f_value", p.f_value},
                {"lagrange_residual", p.lagrange_residual}};
}

std::string csv_monitor_series(const std::vector<gkdv::MonitorSample>& series) {
    std::ostringstream out;
    out.precision(17);
    out << "t,M,E,G\n";
    for (const auto& s : series) out << s.t << "," << s.mass << "," << s.energy << "," << s.g
                                     << "\n";
    return out.str();
}

struct Emission {
    std::string name;
    std::string content;
};

struct CommandOutput {
    json result;
    std::vector<Emission> csv_files;
};

CommandOutput cmd_ground_state(const gkdv::ModelParams& params, const json& cfg,
                               const json& opts) {
    require_keys(opts, "options", {"omega", "theta"});
    const double omega = get_num(opts, "omega", 1.0);
    const auto grid = parse_grid(cfg, omega);
    const auto dir = pick_direction(params, opts);
    const auto gs = gkdv::build_ground_state(params, omega, grid, dir);
    const auto poh = gkdv::pohozaev_report(params, gs.pair);
    const auto fr = gkdv::functionals(params, gs.pair);

    CommandOutput out;
    out.result = json{{"omega", omega},
                      {"alpha", gs.alpha},
                      {"beta", gs.beta},
                      {"f_max", gs.f_max},
                      {"direction", direction_json(dir)},
                      {"elliptic_residual", gkdv::elliptic_residual(params, omega, gs.pair)},
                      {"pohozaev_residuals", poh.residuals},
                      {"mass", fr.mass},
                      {"energy", fr.energy},
                      {"i_action", fr.i_action}};
    return out;
}

CommandOutput cmd_direction(const gkdv::ModelParams& params, const json& opts) {
    require_keys(opts, "options", {"scan_points"});
    const auto scan = static_cast<std::size_t>(get_int(opts, "scan_points", 2048));
    const auto set = gkdv::maximize_f(params, scan);
    json points = json::array();
    for (const auto& p : set.points) points.push_back(direction_json(p));
    json result{{"f_max", set.f_max}, {"multiplicity", set.multiplicity}, {"points", points}};
    try {
        const auto regime = gkdv::classify_regime(params);
        result["regime"] = gkdv::to_string(regime.regime);
    } catch (const gkdv::ValidationError&) {
        result["regime"] = nullptr;
    }
    return {result, {}};
}

CommandOutput cmd_pohozaev(const gkdv::ModelParams& params, const json& cfg, const json& opts) {
    require_keys(opts, "options", {"omega", "theta"});
    const double omega = get_num(opts, "omega", 1.0);
    const auto grid = parse_grid(cfg, omega);
    const auto gs = gkdv::build_ground_state(params, omega, grid, pick_direction(params, opts));
    const auto rep = gkdv::pohozaev_report(params, gs.pair);
    return {json{{"residuals", rep.residuals}, {"trivial", rep.trivial}}, {}};
}

CommandOutput cmd_sharp_constant(const gkdv::ModelParams& params, const json& cfg,
                                 const json& opts) {
    require_keys(opts, "options", {"theta"});
    const auto grid = parse_grid(cfg, 1.0);
    const auto gs = gkdv::build_ground_state(params, 1.0, grid, pick_direction(params, opts));
    const double kopt = gkdv::sharp_constant(params, gs);
    const auto nehari = gkdv::nehari_level_check(params, gs);
    const auto gn = gkdv::gn_check(params, gs.pair, kopt);
    return {json{{"k_opt", kopt},
                 {"identity_residual", gkdv::sharp_constant_identity_residual(params, gs)},
                 {"gn_lhs", gn.lhs},
                 {"gn_rhs", gn.rhs},
                 {"omega_n", nehari.omega_n},
                 {"lambda1", nehari.lambda1},
                 {"s_of_gs", nehari.s_of_gs},
                 {"p_tilde_of_gs", nehari.p_tilde_of_gs}},
            {}};
}

CommandOutput cmd_petviashvili(const gkdv::ModelParams& params, const json& cfg,
                               const json& opts) {
    require_keys(opts, "options", {"omega", "max_iter", "tol"});
    const double omega = get_num(opts, "omega", 1.0);
    const auto grid = parse_grid(cfg, omega);
    const auto rec = gkdv::cross_check(params, omega, grid,
                                       static_cast<int>(get_int(opts, "max_iter", 500)),
                                       get_num(opts, "tol", 1e-12));
    return {json{{"linf_distance", rec.linf_distance},
                 {"i_gap", rec.i_gap},
                 {"iterations", rec.numerical.iterations},
                 {"final_m", rec.numerical.final_m},
                 {"final_change", rec.numerical.final_change}},
            {}};
}

CommandOutput cmd_evolve(const gkdv::ModelParams& params, const json& cfg, const json& opts) {
    require_keys(opts, "options",
                 {"omega", "theta", "scale", "dt", "t_end", "dealias", "filter_order",
                  "record_every"});
    const double omega = get_num(opts, "omega", 1.0);
    const double scale = get_num(opts, "scale", 1.0);
    const auto grid = parse_grid(cfg, omega);
    const auto eo = parse_evolve_options(opts);
    const auto gs = gkdv::build_ground_state(params, omega, grid, pick_direction(params, opts));
    gkdv::FieldPair pair0 = gs.pair;
    for (auto& x : pair0.u) x *= scale;
    for (auto& x : pair0.v) x *= scale;

    const auto traj = gkdv::evolve(params, pair0, eo);
    const auto& m0 = traj.monitors.front();
    const auto& mN = traj.monitors.back();
    const double e_scale = std::max(std::fabs(m0.energy), m0.mass);
    json result{{"blew_up", traj.blew_up},
                {"t_final", mN.t},
                {"mass_drift", std::fabs(mN.mass - m0.mass) / std::fabs(m0.mass)},
                {"energy_drift", std::fabs(mN.energy - m0.energy) / e_scale}};
    if (traj.blew_up) result["blow_up_time"] = traj.blow_up_time;
    if (scale == 1.0 && params.mu == 1 && !traj.blew_up)
        result["traveling_wave_error"] = gkdv::traveling_wave_error(params, omega, gs, eo);
    return {result, {{"series.csv", csv_monitor_series(traj.monitors)}}};
}

CommandOutput cmd_gwp_check(const gkdv::ModelParams& params, const json& cfg, const json& opts,
                            long seed) {
    require_keys(opts, "options",
                 {"omega", "theta", "scale", "dt", "t_end", "dealias", "filter_order",
                  "record_every", "sweep"});
    const double scale = get_num(opts, "scale", 0.5);
    const auto grid = parse_grid(cfg, 1.0);
    const auto eo = parse_evolve_options(opts);
    const auto dir = pick_direction(params, opts);
    const auto gs1 = gkdv::build_ground_state(params, 1.0, grid, dir);
    gkdv::FieldPair pair0 = gs1.pair;
    for (auto& x : pair0.u) x *= scale;
    for (auto& x : pair0.v) x *= scale;

    const auto rep = gkdv::gwp_monitor(params, pair0, gs1, eo);
    json result{{"A", rep.A},
                {"B", rep.B},
                {"m", rep.m},
                {"gamma_trap", rep.gamma_trap},
                {"hip1_holds", rep.hip1_holds},
                {"hip2_holds", rep.hip2_holds},
                {"trapped", rep.trapped},
                {"threshold_needed", rep.threshold_needed}};

    const auto sweep = get_int(opts, "sweep", 0);
    if (sweep > 0) {
        // hip2 and G(0) < gamma_trap are two routes to the same inequality
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        std::uniform_real_distribution<double> amp(0.2, 1.6);
        long agree = 0;
        const double ng = std::sqrt(gkdv::l2_norm_sq(gs1.pair));
        const double dg = std::sqrt(gkdv::grad_norm_sq(gs1.pair));
        for (long i = 0; i < sweep; ++i) {
            gkdv::FieldPair p = gs1.pair;
            const double s = amp(rng);
            for (auto& x : p.u) x *= s;
            for (auto& x : p.v) x *= s;
            const double n0 = std::sqrt(gkdv::l2_norm_sq(p));
            const double d0 = std::sqrt(gkdv::grad_norm_sq(p));
            const bool hip2 = params.k == 2
                                  ? n0 < ng
                                  : std::pow(d0, params.k - 2) * std::pow(n0, params.k + 2) <
                                        std::pow(dg, params.k - 2) * std::pow(ng, params.k + 2);
            if (hip2 == gkdv::g0_below_trap(params, p, gs1)) ++agree;
        }
        result["sweep_total"] = sweep;
        result["sweep_agreements"] = agree;
    }
    return {result, {{"series.csv", csv_monitor_series(rep.g_trace)}}};
}

CommandOutput cmd_spectrum(const gkdv::ModelParams& params, const json& cfg, const json& opts) {
    require_keys(opts, "options", {"omega", "theta", "gap_floor"});
    const double omega = get_num(opts, "omega", 1.0);
    const auto grid = parse_grid(cfg, omega);
    const auto verdict = gkdv::instability_criterion(params, omega, grid,
                                                     get_num(opts, "gap_floor", 0.0));
    json channels = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "channel,index,eigenvalue\n";
    for (const auto& ch : verdict.report.channels) {
        channels.push_back(json{{"channel", ch.channel},
                                {"eigenvalues", ch.eigenvalues},
                                {"n_negative", ch.n_negative}});
        for (std::size_t i = 0; i < ch.eigenvalues.size(); ++i)
            csv << ch.channel << "," << i << "," << ch.eigenvalues[i] << "\n";
    }
    json result{{"channels", channels},
                {"kernel_residual_l1", verdict.report.kernel_residual_l1},
                {"kernel_residual_l2", verdict.report.kernel_residual_l2},
                {"decoupling_error", verdict.report.decoupling_error},
                {"criterion_met", verdict.report.criterion_met},
                {"spectral_ok", verdict.spectral_ok},
                {"lambda_dd", verdict.lambda_dd},
                {"unstable", verdict.unstable},
                {"verdict", verdict.verdict}};
    return {result, {{"spectrum.csv", csv.str()}}};
}

CommandOutput cmd_instability(const gkdv::ModelParams& params, const json& cfg,
                              const json& opts) {
    require_keys(opts, "options",
                 {"omega", "theta", "eps", "dt", "t_end", "dealias", "filter_order",
                  "record_every"});
    const double omega = get_num(opts, "omega", 1.0);
    const double eps = get_num(opts, "eps", 0.01);
    const auto grid = parse_grid(cfg, omega);
    const auto eo = parse_evolve_options(opts);
    const auto gs = gkdv::build_ground_state(params, omega, grid, pick_direction(params, opts));
    const auto run = gkdv::instability_experiment(params, omega, eps, gs, eo);

    std::ostringstream csv;
    csv.precision(17);
    csv << "t,M,E,G,d\n";
    double d0 = run.series.empty() ? 0.0 : run.series.front().d;
    double max_ratio = 0.0;
    for (const auto& s : run.series) {
        csv << s.t << "," << s.mass << "," << s.energy << "," << s.g << "," << s.d << "\n";
        if (d0 > 0) max_ratio = std::max(max_ratio, s.d / d0);
    }
    json result{{"escaped", run.escaped},
                {"d_initial", d0},
                {"max_deviation_ratio", max_ratio}};
    if (run.escaped) result["escape_time"] = run.escape_time;
    return {result, {{"series.csv", csv.str()}}};
}

CommandOutput cmd_lambda(const gkdv::ModelParams& params, const json& cfg, const json& opts) {
    require_keys(opts, "options", {"omega", "theta"});
    const double omega = get_num(opts, "omega", 1.0);
    const auto grid = parse_grid(cfg, 1.0);
    const auto gs1 = gkdv::build_ground_state(params, 1.0, grid, pick_direction(params, opts));
    const auto ldd = gkdv::lambda_second_derivative(params, omega, gs1);
    return {json{{"omega", omega},
                 {"closed_form", ldd.closed_form},
                 {"finite_difference", ldd.finite_difference}},
            {}};
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(const std::string& data) {
    std::ostringstream out;
    out << std::hex << fnv1a(data);
    return out.str();
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int run_config(const std::string& cli_command, const std::string& config_path,
               const std::string& output_dir_flag) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config file " << config_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string raw = buf.str();

    const std::string start_time = timestamp_now();
    json cfg;
    std::string output_dir = output_dir_flag;
    std::vector<Emission> files;
    json result;
    int status = 0;

    try {
        cfg = json::parse(raw);
        require_keys(cfg, "config",
                     {"command", "params", "grid", "options", "seed", "output_dir"});
        if (cfg.contains("command") && !cfg["command"].is_string())
            throw gkdv::ValidationError("config: 'command' must be a string");
        if (output_dir.empty())
            output_dir = cfg.value("output_dir", std::string("."));

        const std::string command = cfg.value("command", cli_command);
        if (command != cli_command)
            throw gkdv::ValidationError(
                "config: 'command' disagrees with the command-line argument");
        const auto params = parse_params(cfg);
        const json opts = cfg.value("options", json::object());
        const long seed = get_int(cfg, "seed", 12345);

        CommandOutput out;
        if (command == "ground-state") out = cmd_ground_state(params, cfg, opts);
        else if (command == "direction") out = cmd_direction(params, opts);
        else if (command == "pohozaev") out = cmd_pohozaev(params, cfg, opts);
        else if (command == "sharp-constant") out = cmd_sharp_constant(params, cfg, opts);
        else if (command == "petviashvili") out = cmd_petviashvili(params, cfg, opts);
        else if (command == "evolve") out = cmd_evolve(params, cfg, opts);
        else if (command == "gwp-check") out = cmd_gwp_check(params, cfg, opts, seed);
        else if (command == "spectrum") out = cmd_spectrum(params, cfg, opts);
        else if (command == "instability") out = cmd_instability(params, cfg, opts);
        else if (command == "lambda") out = cmd_lambda(params, cfg, opts);
        else throw gkdv::ValidationError("config: unknown command '" + command + "'");

        result = std::move(out.result);
        files = std::move(out.csv_files);
    } catch (const gkdv::ValidationError& e) {
        result = json{{"error", {{"type", "validation"}, {"message", e.what()}}}};
        files.clear();
        status = 2;
    } catch (const gkdv::NumericalError& e) {
        result = json{{"error", {{"type", "numerical"}, {"message", e.what()}}}};
        files.clear();
        status = 3;
    } catch (const json::exception& e) {
        result = json{{"error", {{"type", "validation"}, {"message", e.what()}}}};
        files.clear();
        status = 2;
    }

    if (output_dir.empty()) output_dir = ".";
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << output_dir << "\n";
        return 2;
    }

    files.push_back({"result.json", result.dump(2) + "\n"});
    json emitted = json::array();
    for (const auto& f : files) {
        std::ofstream out(fs::path(output_dir) / f.name, std::ios::binary);
        out << f.content;
        emitted.push_back(json{{"name", f.name}, {"fnv1a64", hash_hex(f.content)}});
    }

    const char* threads_env = std::getenv("GKDV_THREADS");
    json manifest{{"version", kVersion},
                  {"config", cfg},
                  {"input_hash", hash_hex(raw)},
                  {"started", start_time},
                  {"finished", timestamp_now()},
                  {"gkdv_threads", threads_env ? json(std::string(threads_env)) : json(nullptr)},
                  {"files", emitted}};
    std::ofstream mout(fs::path(output_dir) / "manifest.json", std::ios::binary);
    mout << manifest.dump(2) << "\n";
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a coupled generalized KdV system"};
    app.set_version_flag("--version", kVersion);

    std::string command, config_path, output_dir;
    app.add_option("command", command,
                   "one of: ground-state direction pohozaev sharp-constant petviashvili "
                   "evolve gwp-check spectrum instability lambda")
        ->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--output-dir", output_dir, "directory for emitted files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run_config(command, config_path, output_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
