#include <mec/model.hpp>
#include <sstream>

namespace mec {
namespace {

void require_positive(double v, const std::string& field)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream ss;
        ss << "must be a positive finite quantity, got " << v << " (SI units)";
        throw ConfigError(field, ss.str());
    }
}

} // namespace

void validate(const SystemConfig& sys)
{
    if (sys.num_devices < 1) throw ConfigError("num_devices", "must be >= 1");
    require_positive(sys.slot_len, "tau_ms");
    require_positive(sys.bandwidth, "w_MHz");
    require_positive(sys.noise_psd, "N0_dBm_per_Hz");
    require_positive(sys.pathloss_const, "g0_dB");
    require_positive(sys.ref_dist, "d0_m");
    require_positive(sys.pathloss_exp, "theta");
    require_positive(sys.switched_cap, "kappa");
    require_positive(sys.control_V, "V_bits2_per_W");
    if (!(sys.eps_A > 0.0) || !(sys.eps_A * sys.num_devices < 1.0)) {
        throw ConfigError("eps_A", "must lie in (0, 1/N)");
    }
    if (sys.horizon < 1) throw ConfigError("horizon_slots", "must be >= 1");
    if (sys.burn_in < 0 || sys.burn_in >= sys.horizon) {
        throw ConfigError("burn_in_slots", "must lie in [0, horizon)");
    }
}

void validate(const DeviceConfig& dev, std::size_t index)
{
    const std::string p = "devices[" + std::to_string(index) + "].";
    require_positive(dev.distance, p + "distance_m");
    require_positive(dev.cycles_per_bit, p + "L_cycles_per_bit");
    require_positive(dev.f_max, p + "f_max_GHz");
    require_positive(dev.p_max, p + "p_max_mW");
    require_positive(dev.arrival_max, p + "A_max_kbits");
    require_positive(dev.fading_mean, p + "fading_mean");
}

void validate(const SystemConfig& sys, const std::vector<DeviceConfig>& devices)
{
    validate(sys);
    if (devices.size() != static_cast<std::size_t>(sys.num_devices)) {
        throw ConfigError("devices", "count does not match num_devices");
    }
    for (std::size_t i = 0; i < devices.size(); ++i) validate(devices[i], i);
}

std::string check_feasible(
    const SlotDecision<double>& d,
    const SystemConfig& sys,
    const std::vector<DeviceConfig>& devices,
    double simplex_tol)
{
    const auto n = static_cast<Eigen::Index>(devices.size());
    if (d.freqs.size() != n || d.tx_powers.size() != n || d.bw_fracs.size() != n) {
        return "decision size does not match device count";
    }
    std::ostringstream ss;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& dev = devices[i];
        // Closed forms may round a hair above their caps.
        const double ftol = 1e-12 * dev.f_max;
        const double ptol = 1e-12 * dev.p_max;
        if (!(d.freqs[i] >= 0.0 && d.freqs[i] <= dev.f_max + ftol)) {
            ss << "device " << i << ": cpu frequency " << d.freqs[i] << " outside [0, f_max]";
            return ss.str();
        }
        if (!(d.tx_powers[i] >= 0.0 && d.tx_powers[i] <= dev.p_max + ptol)) {
            ss << "device " << i << ": transmit power " << d.tx_powers[i] << " outside [0, p_max]";
            return ss.str();
        }
        if (!(d.bw_fracs[i] >= sys.eps_A * (1.0 - 1e-12))) {
            ss << "device " << i << ": bandwidth fraction " << d.bw_fracs[i] << " below eps_A";
            return ss.str();
        }
    }
    const double total = d.bw_fracs.sum();
    if (!(total <= 1.0 + simplex_tol)) {
        ss << "bandwidth fractions sum to " << total << " > 1";
        return ss.str();
    }
    return {};
}

} // namespace mec
