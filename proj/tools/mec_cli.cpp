// Experiment driver: single runs, V sweeps, policy comparisons and
// solver certification.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime/solver error.

#include <mec/experiment.hpp>
#include <mec/verify.hpp>
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonArgs
{
    std::string config_path;
    std::string preset_name = "default";
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& a)
{
    cmd->add_option("--config", a.config_path, "JSON config file (defaults to the built-in preset)");
    cmd->add_option("--preset", a.preset_name, "Built-in preset: default, double_arrival, double_devices");
    cmd->add_option("--override", a.overrides, "key=value applied to the config before parsing (repeatable)");
    cmd->add_option("--out-dir", a.out_dir, "Output directory");
    cmd->add_option("--seed", a.seed, "Master seed (overrides the config)");
}

mec::ExperimentConfig build_config(const CommonArgs& a, const std::string& policy)
{
    json raw;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw mec::ConfigError("--config", "cannot open " + a.config_path);
        try {
            raw = json::parse(in);
        } catch (const json::parse_error& e) {
            throw mec::ConfigError("--config", std::string("parse error: ") + e.what());
        }
    } else {
        raw = mec::preset(a.preset_name);
    }
    for (const auto& o : a.overrides) mec::apply_override(raw, o);
    if (a.seed >= 0) raw["seed"] = a.seed;
    if (!policy.empty()) raw["policy"] = policy;
    auto cfg = mec::parse_config(raw);
    mec::make_policy(cfg.policy);
    return cfg;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_config_echo(const fs::path& dir, const mec::ExperimentConfig& cfg)
{
    write_file(dir / "config.json", mec::emit_config(cfg).dump(2) + "\n");
}

int cmd_run(const CommonArgs& a, const std::string& policy, bool trace)
{
    const auto cfg = build_config(a, policy);
    fs::create_directories(a.out_dir);

    mec::RunOptions opts;
    opts.keep_trace = trace;
    const auto s = mec::run(cfg, opts);

    const std::string hash = mec::hex64(mec::config_hash(cfg));
    write_config_echo(a.out_dir, cfg);
    write_file(fs::path(a.out_dir) / "summary.csv", mec::summary_csv_header() + "\n" + mec::summary_csv_row(s) + "\n");
    if (trace) {
        std::ostringstream ss;
        mec::write_trace_csv(ss, s);
        write_file(fs::path(a.out_dir) / ("trace_" + hash + "_s" + std::to_string(s.seed) + ".csv"), ss.str());
    }
    std::cout << "policy " << s.policy << "  V " << mec::format_number(cfg.system.control_V)
              << "  seed " << s.seed << "  config " << hash << "\n"
              << "average power  " << mec::format_number(s.avg_power) << " W\n"
              << "execution delay " << mec::format_number(s.delay_ms) << " ms ("
              << mec::format_number(s.delay_slots) << " slots)\n";
    if (s.nonconverged_slots > 0) {
        std::cout << "solver cap reached in " << s.nonconverged_slots << " of " << s.slots << " slots\n";
    }
    return 0;
}

int cmd_sweep(const CommonArgs& a, std::vector<std::string> policies, const std::string& v_list,
              int seeds, unsigned threads, bool gnuplot, const std::string& stem)
{
    const auto cfg = build_config(a, policies.front());
    for (const auto& p : policies) mec::make_policy(p);
    const auto vs = mec::parse_v_list(v_list);
    const auto seed_list = mec::seed_range(cfg.system.rng_seed, seeds);
    fs::create_directories(a.out_dir);

    const auto result = mec::sweep(cfg, policies, vs, seed_list, threads);
    const auto hash = mec::config_hash(cfg);

    std::ostringstream rows, means;
    mec::write_sweep_csv(rows, result);
    const auto points = mec::average_over_seeds(result);
    mec::write_sweep_mean_csv(means, points, hash);
    write_config_echo(a.out_dir, cfg);
    write_file(fs::path(a.out_dir) / (stem + ".csv"), rows.str());
    write_file(fs::path(a.out_dir) / (stem + "_mean.csv"), means.str());
    if (gnuplot) write_file(fs::path(a.out_dir) / (stem + ".gp"), mec::gnuplot_script(stem + "_mean.csv"));

    std::cout << "policy,V,seeds,avg_power_w,delay_ms\n";
    for (const auto& pt : points) {
        std::cout << pt.policy << ',' << mec::format_number(pt.V) << ',' << pt.seeds << ','
                  << mec::format_number(pt.avg_power) << ',' << mec::format_number(pt.delay_ms) << '\n';
    }
    if (result.failed) {
        for (const auto& row : result.rows) {
            if (row.status == "failed") std::cerr << "run failed: " << row.error << "\n";
        }
        std::cerr << "sweep aborted; partial results written with status column\n";
        return kExitRuntime;
    }
    return 0;
}

int cmd_verify(const CommonArgs& a, mec::VerifyOptions opts)
{
    const auto cfg = build_config(a, "");
    if (a.seed >= 0) opts.seed = static_cast<std::uint64_t>(a.seed);
    bool ok = true;
    for (const auto& r : mec::certify_all(cfg, opts)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, "
                  << r.failures << " failures): " << r.detail << "\n";
        ok = ok && r.passed;
    }
    return ok ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-user mobile-edge computing power/delay simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, cmp_args, verify_args;
    std::string run_policy;
    bool run_trace = false;

    auto* run = app.add_subcommand("run", "Single simulation run");
    add_common(run, run_args);
    run->add_option("--policy", run_policy, "lyapunov | local_only | static_equal");
    run->add_flag("--trace", run_trace, "Write the per-slot trace CSV");

    std::vector<std::string> sweep_policies{"lyapunov"};
    std::string sweep_v = "1e6:5e9:20";
    int sweep_seeds = 1;
    unsigned sweep_threads = 0;
    bool sweep_gp = false;
    auto* sweep = app.add_subcommand("sweep", "Sweep the control parameter V");
    add_common(sweep, sweep_args);
    sweep->add_option("--policy", sweep_policies, "Policies to sweep (repeatable)");
    sweep->add_option("--v-list", sweep_v, "Comma list or lo:hi:count (log-spaced)");
    sweep->add_option("--seeds", sweep_seeds, "Number of consecutive seeds from --seed")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", sweep_threads, "Worker threads (0 = hardware)");
    sweep->add_flag("--gnuplot", sweep_gp, "Also write a gnuplot script");

    std::vector<std::string> cmp_policies{"lyapunov", "local_only"};
    std::string cmp_v = "1e6:5e9:20";
    int cmp_seeds = 1;
    unsigned cmp_threads = 0;
    bool cmp_gp = false;
    auto* compare = app.add_subcommand("compare", "Sweep V for several policies into one file");
    add_common(compare, cmp_args);
    compare->add_option("--policy", cmp_policies, "Policies to compare (at least two)");
    compare->add_option("--v-list", cmp_v, "Comma list or lo:hi:count (log-spaced)");
    compare->add_option("--seeds", cmp_seeds, "Number of consecutive seeds from --seed")->check(CLI::PositiveNumber);
    compare->add_option("--threads", cmp_threads, "Worker threads (0 = hardware)");
    compare->add_flag("--gnuplot", cmp_gp, "Also write a gnuplot script");

    mec::VerifyOptions vopts;
    auto* verify = app.add_subcommand("verify", "Certify the per-slot solvers against brute-force oracles");
    add_common(verify, verify_args);
    verify->add_option("--instances", vopts.sp2_instances, "Random SP2 instances");
    verify->add_option("--max-devices", vopts.max_devices, "Largest instance size (<= 4)")->check(CLI::Range(1, 4));
    verify->add_option("--alpha-step", vopts.alpha_step, "Bandwidth grid step (<= 1e-2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_args, run_policy, run_trace);
        if (*sweep) return cmd_sweep(sweep_args, sweep_policies, sweep_v, sweep_seeds, sweep_threads, sweep_gp, "sweep");
        if (*compare) {
            if (cmp_policies.size() < 2) {
                throw mec::ConfigError("--policy", "compare needs at least two policies");
            }
            return cmd_sweep(cmp_args, cmp_policies, cmp_v, cmp_seeds, cmp_threads, cmp_gp, "compare");
        }
        if (*verify) return cmd_verify(verify_args, vopts);
    } catch (const mec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
