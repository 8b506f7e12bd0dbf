// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero
// exit if any fails. Takes a few minutes (the full 5-seed V sweep).

#include <mec/experiment.hpp>
#include <mec/verify.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail)
{
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

mec::ExperimentConfig config(const char* preset)
{
    return mec::parse_config(mec::preset(preset));
}

double mean_power(const mec::ExperimentConfig& cfg, double V, const std::vector<std::uint64_t>& seeds,
                  double* delay_ms = nullptr)
{
    const auto r = mec::sweep(cfg, {"lyapunov"}, {V}, seeds, 1);
    if (r.failed) throw std::runtime_error("run failed: " + r.rows.front().error);
    const auto pt = mec::average_over_seeds(r).front();
    if (delay_ms) *delay_ms = pt.delay_ms;
    return pt.avg_power;
}

bool within(double x, double target, double rel) { return std::abs(x - target) <= rel * target; }

} // namespace

int main()
{
    const auto base = config("default");
    const auto seeds = mec::seed_range(1, 5);
    const auto vs = mec::log_space(1e6, 5e9, 20);

    const auto t0 = std::chrono::steady_clock::now();
    const auto lyap = mec::sweep(base, {"lyapunov"}, vs, seeds, 1);
    const double sweep_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto local = mec::sweep(base, {"local_only"}, vs, seeds, 1);
    if (lyap.failed || local.failed) {
        report("sweep", false, "a sweep run failed");
        return 1;
    }
    const auto pts = mec::average_over_seeds(lyap);
    const auto lpts = mec::average_over_seeds(local);

    // 1. Tradeoff trend.
    {
        int inversions = 0;
        for (std::size_t k = 1; k < pts.size(); ++k) inversions += pts[k].avg_power > pts[k - 1].avg_power;
        const double p1 = pts[pts.size() - 2].avg_power, p2 = pts.back().avg_power;
        const double flat = std::abs(p2 - p1) / p1;

        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        int m = 0;
        for (const auto& pt : pts) {
            if (pt.V < 1e8) continue;
            sx += pt.V, sy += pt.sum_avg_queue;
            sxx += pt.V * pt.V, sxy += pt.V * pt.sum_avg_queue, syy += pt.sum_avg_queue * pt.sum_avg_queue;
            ++m;
        }
        const double cov = sxy - sx * sy / m, vx = sxx - sx * sx / m, vy = syy - sy * sy / m;
        const double r2 = cov * cov / (vx * vy);

        report("C1a power non-increasing in V", inversions <= 2, fmt("%.0f adjacent inversions (<= 2)", inversions));
        report("C1b power flattens", flat < 0.05, fmt("last-step relative change %.4f (< 0.05)", flat));
        report("C1c backlog linear in V", r2 > 0.95, fmt("R^2 %.5f over %.0f points in [1e8, 5e9] (> 0.95)", r2, m));
        report("C1d sweep runtime", sweep_s < 300.0, fmt("%.1f s for 100 runs on one thread (< 300 s)", sweep_s));
    }

    // 2. Delay endpoints.
    {
        const double lo = pts.front().delay_ms, hi = pts.back().delay_ms;
        report("C2a delay at V=1e6", lo >= 0.7 && lo <= 1.6, fmt("%.3f ms (in [0.7, 1.6])", lo));
        report("C2b delay at V=5e9", hi >= 23 && hi <= 43, fmt("%.2f ms (in [23, 43])", hi));
        double worst = INFINITY;
        for (const auto& pt : lpts) worst = std::min(worst, pt.delay_ms);
        report("C2c local-only delay", worst >= 300, fmt("minimum over V %.1f ms (>= 300)", worst));
    }

    // 3. Operating point.
    {
        double delay = 0;
        const double p = mean_power(base, 3e9, seeds, &delay);
        report("C3a delay at V=3e9", within(delay, 20.0, 0.3), fmt("%.2f ms (20 +- 30%%)", delay));
        report("C3b power at V=3e9", within(p, 0.1, 0.3), fmt("%.4f W (0.1 +- 30%%)", p));
    }

    // 4. Arrival rate versus device count.
    {
        const double p_base = pts.back().avg_power;
        const double p_arr = mean_power(config("double_arrival"), 5e9, seeds);
        const double p_dev = mean_power(config("double_devices"), 5e9, seeds);
        report("C4 doubling arrivals costs more than doubling devices",
               p_arr > p_dev && p_dev > p_base,
               fmt("A_max=8k,N=5: %.4f W > A_max=4k,N=10: %.4f W > default: %.4f W", p_arr, p_dev, p_base));
    }

    // 5-6. Solver certification.
    {
        const auto checks = mec::certify_all(base, mec::VerifyOptions{});
        std::map<std::string, const mec::CheckResult*> by;
        for (const auto& c : checks) by[c.name] = &c;
        auto line = [&](const char* id, const char* name) {
            const auto* c = by.at(name);
            report(id, c->passed, std::string(name) + ", " + std::to_string(c->cases) + " cases, "
                                      + std::to_string(c->failures) + " failures; " + c->detail);
        };
        line("C5a", "sp2_vs_grid_oracle");
        line("C5b", "cpu_freq_vs_grid");
        line("C5c", "tx_power_vs_grid");
        line("C6", "marginal_rate_vs_finite_difference");
    }

    // 7. Stability.
    {
        double worst = 0;
        for (const auto& row : lyap.rows) {
            for (Eigen::Index i = 0; i < row.summary.final_queues.size(); ++i) {
                const double lam = row.summary.config.devices[i].mean_arrival();
                worst = std::max(worst, row.summary.final_queues[i] / row.summary.slots / lam);
            }
        }
        report("C7 mean rate stability", worst < 0.05,
               fmt("max Q_i(T)/(T lambda_i) %.5f over all V and seeds (< 0.05)", worst));
    }

    // 8. Determinism.
    {
        const std::vector<double> sub{vs.front(), vs[10], vs.back()};
        auto csv = [&](unsigned threads) {
            std::ostringstream os;
            mec::write_sweep_csv(os, mec::sweep(base, {"lyapunov", "static_equal"}, sub, {1, 2}, threads));
            return os.str();
        };
        const std::string a = csv(1);
        std::ostringstream full;
        mec::write_sweep_csv(full, lyap);
        std::string again;
        {
            // The first sweep's rows for the same (V, seed) must reproduce exactly.
            std::ostringstream os;
            mec::write_sweep_csv(os, mec::sweep(base, {"lyapunov"}, {vs.front()}, {1}, 1));
            again = os.str();
        }
        const std::string row0 = full.str().substr(0, full.str().find('\n', full.str().find('\n') + 1) + 1);
        report("C8 deterministic output", a == csv(2) && again == row0,
               "repeated sweeps produce byte-identical CSV");
    }

    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
