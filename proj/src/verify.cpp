#include <mec/oracle.hpp>
#include <mec/verify.hpp>
#include <cmath>
#include <sstream>

namespace mec {

double InstanceGenerator::log_uniform(double lo, double hi)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng_));
}

PtsProblem<double> InstanceGenerator::next(int num_devices)
{
    ExperimentConfig cfg = base_;
    cfg.system.num_devices = num_devices;
    cfg.system.control_V = log_uniform(1e6, 5e9);
    cfg.devices.assign(num_devices, base_.devices.front());

    std::exponential_distribution<double> fading(1.0);
    vec_d q(num_devices), h(num_devices);
    for (int i = 0; i < num_devices; ++i) {
        q[i] = log_uniform(1e3, 3e5);
        h[i] = fading(rng_) * pathloss(cfg.system, cfg.devices[i]);
    }
    return make_problem(cfg.system, cfg.devices, q, h);
}

namespace {

void record(CheckResult& r, double violation, bool ok)
{
    ++r.cases;
    r.worst = std::max(r.worst, violation);
    if (!ok) {
        ++r.failures;
        r.passed = false;
    }
}

} // namespace

CheckResult certify_sp2(const ExperimentConfig& base, const VerifyOptions& opts)
{
    CheckResult r;
    r.name = "sp2_vs_grid_oracle";
    InstanceGenerator gen(base, opts.seed);
    long kkt_fail = 0, slack_fail = 0;
    double kkt_worst = 0.0, cs_worst = 0.0;

    for (int k = 0; k < opts.sp2_instances; ++k) {
        const int n = 1 + k % opts.max_devices;
        const auto pb = gen.next(n);
        const auto sol = solve_sp2(pb);
        const auto grid = oracle::grid_sp2(pb, opts.alpha_step);

        const double scale = std::abs(grid.objective);
        const double rel_tol = 1e-6 * scale;
        const bool not_worse = sol.objective <= grid.objective + rel_tol + grid.slack;
        const bool not_better_than_exact = grid.objective <= sol.objective + grid.slack + rel_tol;
        const double violation = scale > 0 ? (sol.objective - grid.objective - grid.slack) / scale : 0.0;
        record(r, std::max(0.0, violation), not_worse && not_better_than_exact);

        // KKT conditions of the bandwidth step at the returned powers.
        const auto bw = bandwidth_allocation(pb, sol.tx_powers);
        if (!bw.active) continue;
        const double lambda = bw.state.lambda;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (bw.bw_fracs[i] > pb.eps_A && sol.tx_powers[i] > 0.0) {
                const double mr = marginal_rate(bw.bw_fracs[i], sol.tx_powers[i], pb.gains[i],
                                                pb.bandwidth, pb.slot_len, pb.noise_psd);
                const double res = std::abs(pb.queues[i] * mr - lambda) / lambda;
                kkt_worst = std::max(kkt_worst, res);
                if (res > 1e-4) ++kkt_fail;
            }
        }
        const double cs = std::abs(lambda * (bw.bw_fracs.sum() - 1.0)) / lambda;
        cs_worst = std::max(cs_worst, cs);
        if (cs > 1e-6) ++slack_fail;
    }
    if (kkt_fail || slack_fail) r.passed = false;
    std::ostringstream ss;
    ss << "worst excess over oracle+slack " << r.worst << " (rel), worst KKT residual " << kkt_worst
       << ", worst slackness " << cs_worst << ", KKT failures " << kkt_fail
       << ", slackness failures " << slack_fail;
    r.detail = ss.str();
    return r;
}

CheckResult certify_cpu_freq(const ExperimentConfig& base, const VerifyOptions& opts)
{
    CheckResult r;
    r.name = "cpu_freq_vs_grid";
    InstanceGenerator gen(base, opts.seed + 1);
    const auto& dev = base.devices.front();
    const auto& sys = base.system;
    for (int k = 0; k < opts.scalar_instances; ++k) {
        const double q = gen.log_uniform(1.0, 1e9);
        const double v = gen.log_uniform(1e5, 1e11);
        const double f = optimal_cpu_freq(q, sys.slot_len, sys.switched_cap, v, dev.cycles_per_bit, dev.f_max);
        const double obj = oracle::sp1_objective(f, q, sys.slot_len, sys.switched_cap, v, dev.cycles_per_bit);
        const auto grid = oracle::grid_sp1(q, sys.slot_len, sys.switched_cap, v, dev.cycles_per_bit, dev.f_max,
                                           opts.grid_points);
        const double step = dev.f_max / static_cast<double>(opts.grid_points - 1);
        const double scale = std::max(std::abs(grid.objective), 1e-300);
        const bool dominates = obj <= grid.objective + 1e-12 * scale;
        const bool near = std::abs(f - grid.freq) <= step * (1.0 + 1e-9);
        record(r, std::max(0.0, (obj - grid.objective) / scale), dominates && near);
    }
    r.detail = "worst excess over grid minimum " + std::to_string(r.worst) + " (rel)";
    return r;
}

CheckResult certify_tx_power(const ExperimentConfig& base, const VerifyOptions& opts)
{
    CheckResult r;
    r.name = "tx_power_vs_grid";
    InstanceGenerator gen(base, opts.seed + 2);
    const auto& dev = base.devices.front();
    const auto& sys = base.system;
    std::uniform_real_distribution<double> ua(sys.eps_A, 1.0);
    for (int k = 0; k < opts.scalar_instances; ++k) {
        const auto pb = gen.next(1);
        const double alpha = ua(gen.rng());
        const double q = pb.queues[0], h = pb.gains[0], v = pb.control_V;
        const double p = optimal_tx_power(q, h, alpha, v, sys.bandwidth, sys.slot_len, sys.noise_psd, dev.p_max);
        const double obj = -q * remote_departure(alpha, p, h, sys.bandwidth, sys.slot_len, sys.noise_psd) + v * p;
        const auto grid = oracle::grid_power(q, h, alpha, v, sys.bandwidth, sys.slot_len, sys.noise_psd,
                                             dev.p_max, opts.grid_points);
        const double step = dev.p_max / static_cast<double>(opts.grid_points - 1);
        const double scale = std::max(std::abs(grid.second), v * step);
        const bool dominates = obj <= grid.second + 1e-12 * scale;
        const bool near = std::abs(p - grid.first) <= step * (1.0 + 1e-9);
        record(r, std::max(0.0, (obj - grid.second) / scale), dominates && near);
    }
    r.detail = "worst excess over grid minimum " + std::to_string(r.worst) + " (rel)";
    return r;
}

CheckResult certify_marginal_rate(const ExperimentConfig& base, const VerifyOptions& opts)
{
    CheckResult r;
    r.name = "marginal_rate_vs_finite_difference";
    InstanceGenerator gen(base, opts.seed + 3);
    const auto& sys = base.system;
    const auto& dev = base.devices.front();
    std::uniform_real_distribution<double> ua(0.01, 1.0), up(1e-3, dev.p_max);
    for (int k = 0; k < opts.derivative_points; ++k) {
        const auto pb = gen.next(1);
        const double alpha = ua(gen.rng()), p = up(gen.rng()), g = pb.gains[0];
        // Step relative to alpha balances rounding against truncation.
        const double h_step = 1e-6 * alpha;
        const double fd = (remote_departure(alpha + h_step, p, g, sys.bandwidth, sys.slot_len, sys.noise_psd)
                         - remote_departure(alpha - h_step, p, g, sys.bandwidth, sys.slot_len, sys.noise_psd))
                        / (2.0 * h_step);
        const double mr = marginal_rate(alpha, p, g, sys.bandwidth, sys.slot_len, sys.noise_psd);
        const double rel = std::abs(mr - fd) / std::abs(fd);
        record(r, rel, rel <= 1e-4);
    }
    r.detail = "worst relative disagreement " + std::to_string(r.worst);
    return r;
}

std::vector<CheckResult> certify_all(const ExperimentConfig& base, const VerifyOptions& opts)
{
    return {
        certify_sp2(base, opts),
        certify_cpu_freq(base, opts),
        certify_tx_power(base, opts),
        certify_marginal_rate(base, opts),
    };
}

} // namespace mec
