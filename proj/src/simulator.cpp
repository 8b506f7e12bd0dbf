#include <mec/baselines.hpp>
#include <mec/simulator.hpp>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace mec {

Policy make_policy(const std::string& name)
{
    if (name == "lyapunov") {
        return [](const PtsProblem<double>& pb, SolverDiagnostics& diag) {
            return decide_slot(pb, &diag);
        };
    }
    if (name == "local_only") {
        return [](const PtsProblem<double>& pb, SolverDiagnostics&) { return local_only_policy(pb); };
    }
    if (name == "static_equal") {
        return [](const PtsProblem<double>& pb, SolverDiagnostics&) { return static_equal_policy(pb); };
    }
    std::string valid;
    for (const auto& n : policy_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("policy", "unknown policy '" + name + "' (valid: " + valid + ")");
}

std::vector<std::string> policy_names()
{
    return {"lyapunov", "local_only", "static_equal"};
}

RunSummary run(const ExperimentConfig& cfg, const Policy& policy, SampleSource& source,
               const RunOptions& opts)
{
    const auto& sys = cfg.system;
    const auto& devices = cfg.devices;
    validate(sys, devices);
    const auto n = static_cast<Eigen::Index>(devices.size());

    RunSummary out;
    out.config = cfg;
    out.policy = cfg.policy;
    out.seed = sys.rng_seed;
    out.slots = sys.horizon;
    out.avg_queue = vec_d::Zero(n);

    vec_d queues = vec_d::Zero(n);
    vec_d gains(n), arrivals(n);
    double power_sum = 0.0;
    if (opts.keep_trace) out.trace.reserve(sys.horizon);

    for (long t = 0; t < sys.horizon; ++t) {
        for (Eigen::Index i = 0; i < n; ++i) {
            gains[i] = draw_channel_gain(devices[i], sys, source, i);
            arrivals[i] = draw_arrival(devices[i], source, i);
        }

        const auto pb = make_problem(sys, devices, queues, gains);
        SolverDiagnostics diag;
        const auto d = policy(pb, diag);
        if (const auto why = check_feasible(d, sys, devices); !why.empty()) {
            throw SimulationError("infeasible decision at slot " + std::to_string(t) + ", " + why);
        }
        if (!diag.converged) ++out.nonconverged_slots;

        SlotRecord rec;
        rec.queues = queues;
        rec.local_departure.resize(n);
        rec.remote_departure.resize(n);
        rec.total_power = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            rec.local_departure[i] = local_departure(d.freqs[i], sys.slot_len, devices[i].cycles_per_bit);
            rec.remote_departure[i] = remote_departure(d.bw_fracs[i], d.tx_powers[i], gains[i],
                                                       sys.bandwidth, sys.slot_len, sys.noise_psd);
            rec.total_power += d.tx_powers[i] + local_power(d.freqs[i], sys.switched_cap);
        }
        rec.total_departure = rec.local_departure + rec.remote_departure;

        if (t >= sys.burn_in) {
            power_sum += rec.total_power;
            out.avg_queue += queues;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            queues[i] = queue_update(queues[i], rec.total_departure[i], arrivals[i]);
        }
        if (opts.keep_trace) {
            out.trace.push_back(SlotTrace{std::move(rec), d, gains, arrivals, diag});
        }
    }

    out.averaged_slots = sys.horizon - sys.burn_in;
    const double m = static_cast<double>(out.averaged_slots);
    out.avg_power = power_sum / m;
    out.avg_queue /= m;
    out.sum_avg_queue = out.avg_queue.sum();
    double rate = 0.0;
    for (const auto& dev : devices) rate += dev.mean_arrival();
    out.delay_slots = out.sum_avg_queue / rate;
    out.delay_ms = out.delay_slots * sys.slot_len * 1e3;
    out.final_queues = queues;
    return out;
}

RunSummary run(const ExperimentConfig& cfg, const RunOptions& opts)
{
    RandomStreams streams(cfg.system.rng_seed, cfg.devices.size());
    return run(cfg, make_policy(cfg.policy), streams, opts);
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_trace_csv(std::ostream& os, const RunSummary& s)
{
    os << "slot,device,queue_bits,arrival_bits,H_linear,f_hz,p_tx_w,alpha,D_l_bits,D_r_bits,P_total_w\n";
    for (std::size_t t = 0; t < s.trace.size(); ++t) {
        const auto& tr = s.trace[t];
        for (Eigen::Index i = 0; i < tr.gains.size(); ++i) {
            os << t << ',' << i << ','
               << format_number(tr.record.queues[i]) << ','
               << format_number(tr.arrivals[i]) << ','
               << format_number(tr.gains[i]) << ','
               << format_number(tr.decision.freqs[i]) << ','
               << format_number(tr.decision.tx_powers[i]) << ','
               << format_number(tr.decision.bw_fracs[i]) << ','
               << format_number(tr.record.local_departure[i]) << ','
               << format_number(tr.record.remote_departure[i]) << ','
               << format_number(tr.record.total_power) << '\n';
        }
    }
}

std::string summary_csv_header()
{
    return "config_hash,seed,policy,V,N,T,avg_power_w,sum_avg_queue_bits,delay_slots,delay_ms,nonconverged_slots";
}

std::string summary_csv_row(const RunSummary& s)
{
    std::ostringstream ss;
    ss << hex64(config_hash(s.config)) << ','
       << s.seed << ','
       << s.policy << ','
       << format_number(s.config.system.control_V) << ','
       << s.config.system.num_devices << ','
       << s.slots << ','
       << format_number(s.avg_power) << ','
       << format_number(s.sum_avg_queue) << ','
       << format_number(s.delay_slots) << ','
       << format_number(s.delay_ms) << ','
       << s.nonconverged_slots;
    return ss.str();
}

} // namespace mec
