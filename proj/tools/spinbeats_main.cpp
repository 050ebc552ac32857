// Command-line front end: simulate | mfe | noise-study | verify.
// Exit codes: 0 ok, 2 configuration error, 3 numerical verification failure.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "spinbeats/orchestration.hpp"
#include "spinbeats/output.hpp"
#include "spinbeats/rng.hpp"
#include "spinbeats/verify_suite.hpp"

namespace {

using namespace spinbeats;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    bool want_svg = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    cmd->add_option("--config", args.config_path, "run configuration file")
        ->required(config_required);
    cmd->add_option("--seed", args.seed, "master seed (overrides the config)");
    cmd->add_option("--shots", args.shots, "shot count, 0 for exact mode (overrides the config)");
    cmd->add_option("--out", args.out_path, "output CSV path (overrides the config)");
    cmd->add_flag("--svg", args.want_svg, "also write an SVG plot next to the CSV");
}

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = parse_config_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.shots) cfg.method.shots = *args.shots;
    if (!args.out_path.empty()) cfg.out_csv = args.out_path;
    if (args.want_svg && cfg.out_svg.empty() && !cfg.out_csv.empty()) {
        std::string base = cfg.out_csv;
        const auto dot = base.rfind('.');
        cfg.out_svg = (dot == std::string::npos ? base : base.substr(0, dot)) + ".svg";
    }
    if (!args.want_svg) cfg.out_svg.clear();
    cfg.noise_study.seed = cfg.seed;
    cfg.validate();
    if (cfg.out_csv.empty()) throw ConfigError("no output path; set [output] csv or pass --out");
    return cfg;
}

std::string points_summary(std::size_t n, const std::string& path) {
    return std::to_string(n) + " points -> " + path;
}

int cmd_simulate(const CommonArgs& args, bool high_field) {
    const RunConfig cfg = load_config(args);
    const SpinSystemSpec& spec = high_field ? cfg.sys.high : cfg.sys.low;
    const std::vector<double> times = cfg.grid.times();
    const int threads = worker_count(times.size());
    const std::vector<SimPoint> pts =
        run_method_grid(spec, cfg.method, times, cfg.seed, threads);

    Series est{"S_tilde_est", {}}, exact{"S_tilde_exact", {}};
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : pts) {
        est.y.push_back(p.s_est);
        exact.y.push_back(p.s_exact);
        rows.push_back({format_double(p.t_ns), format_double(p.s_est), format_double(p.s_exact),
                        format_double(p.stderr_est), std::to_string(p.shots),
                        std::to_string(p.seed)});
    }
    const std::string csv = csv_document(
        cfg, {"t_ns", "S_tilde_est", "S_tilde_exact", "stderr_est", "shots", "seed"}, rows);
    write_file(cfg.out_csv, csv);
    if (!cfg.out_svg.empty())
        write_file(cfg.out_svg, svg_line_plot("relaxed singlet probability, " + cfg.preset_name +
                                                  (high_field ? " (high field)" : " (low field)"),
                                              "t [ns]", times, {est, exact}));
    std::cout << "simulate: " << points_summary(pts.size(), cfg.out_csv) << "\n";
    return kExitOk;
}

int cmd_mfe(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const std::vector<double> times = cfg.grid.times();
    const int threads = worker_count(times.size());
    const std::vector<SimPoint> high =
        run_method_grid(cfg.sys.high, cfg.method, times, cfg.seed, threads);
    const std::vector<SimPoint> low =
        run_method_grid(cfg.sys.low, cfg.method, times, mix_seed(cfg.seed, 0x10f), threads);
    const std::vector<MfePoint> mfe = assemble_mfe(high, low, cfg.sys.theta);

    Series est{"M_est", {}}, theory{"M_theory", {}};
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : mfe) {
        est.y.push_back(p.m_est);
        theory.y.push_back(p.m_theory);
        rows.push_back({format_double(p.t_ns), format_double(p.m_est), format_double(p.m_theory)});
    }
    const double mse = mse_percent(est.y, theory.y);
    const std::string csv = csv_document(cfg, {"t_ns", "M_est", "M_theory"}, rows,
                                         {"mse_percent_vs_theory = " + format_double(mse)});
    write_file(cfg.out_csv, csv);
    if (!cfg.out_svg.empty())
        write_file(cfg.out_svg,
                   svg_line_plot("time-resolved magnetic field effect, " + cfg.preset_name,
                                 "t [ns]", times, {est, theory}));
    std::cout << "mfe: " << points_summary(mfe.size(), cfg.out_csv)
              << "  mse% = " << format_double(mse) << "\n";
    return kExitOk;
}

int cmd_noise_study(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const std::vector<double> times = cfg.grid.times();
    const auto pts = noisy_mfe_study(cfg.sys, cfg.noise_study, times);

    Series theory{"M_theory", {}}, mean{"M_mean", {}}, stddev{"M_std", {}};
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : pts) {
        theory.y.push_back(p.m_theory);
        mean.y.push_back(p.mean);
        stddev.y.push_back(p.stddev);
        rows.push_back({format_double(p.t_ns), format_double(p.m_theory), format_double(p.mean),
                        format_double(p.stddev), format_double(p.delta_prediction),
                        std::to_string(p.rejected)});
    }
    const std::string csv = csv_document(
        cfg, {"t_ns", "M_theory", "M_mean", "M_std", "M_std_predicted", "rejected"}, rows);
    write_file(cfg.out_csv, csv);
    if (!cfg.out_svg.empty())
        write_file(cfg.out_svg,
                   svg_line_plot("detector-noise spread of the reconstructed TR-MFE, " +
                                     cfg.preset_name,
                                 "t [ns]", times, {theory, mean, stddev}));
    std::cout << "noise-study: " << points_summary(pts.size(), cfg.out_csv) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& out_path) {
    const std::vector<VerifyCheck> checks = run_verify_suite();
    bool all = true;
    for (const auto& c : checks) {
        std::printf("%-46s %-4s  deviation %.3e (%s %.0e)\n", c.name.c_str(),
                    c.passed ? "ok" : "FAIL", c.deviation, c.require_above ? ">" : "<",
                    c.threshold);
        all = all && c.passed;
    }
    const std::string json = verify_report_json(checks);
    if (!out_path.empty()) {
        write_file(out_path, json);
        std::printf("report -> %s\n", out_path.c_str());
    } else {
        std::cout << json;
    }
    return all ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"density-matrix simulator for radical-pair quantum beats under thermal relaxation"};
    app.require_subcommand(1);

    CommonArgs sim_args, mfe_args, noise_args;
    bool high_field = false;

    CLI::App* sim = app.add_subcommand("simulate", "relaxed singlet probability over a time grid");
    add_common(sim, sim_args);
    sim->add_flag("--high-field", high_field, "use the preset's high-field variant");

    CLI::App* mfe = app.add_subcommand("mfe", "combine low- and high-field runs into the TR-MFE");
    add_common(mfe, mfe_args);

    CLI::App* noise = app.add_subcommand("noise-study", "detector-noise spread of the TR-MFE");
    add_common(noise, noise_args);

    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "run the numerical verification suite");
    verify->add_option("--out", verify_out, "write the JSON report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args, high_field);
        if (mfe->parsed()) return cmd_mfe(mfe_args);
        if (noise->parsed()) return cmd_noise_study(noise_args);
        if (verify->parsed()) return cmd_verify(verify_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerify;
    }
    return kExitOk;
}
