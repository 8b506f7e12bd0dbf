#pragma once
#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mec {

template <class Scalar>
using vec_t = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using vec_d = vec_t<double>;

// Lower bound of the arrival support is fixed at zero.
inline constexpr double kArrivalMin = 0.0;

/*
 * System-wide physical and algorithmic parameters, in SI units.
 * Bandwidth in Hz, noise PSD in W/Hz, slot length in seconds,
 * V in bits^2/W.
 */
struct SystemConfig
{
    int num_devices = 1;
    double slot_len = 1e-3;
    double bandwidth = 1e7;
    double noise_psd = 3.981071705534973e-21;
    double pathloss_const = 1e-4;
    double ref_dist = 1.0;
    double pathloss_exp = 4.0;
    double switched_cap = 1e-27;
    double control_V = 1e9;
    double eps_A = 1e-4;
    long horizon = 5000;
    long burn_in = 0;
    std::uint64_t rng_seed = 1;
};

struct DeviceConfig
{
    double distance = 150.0;
    double cycles_per_bit = 737.5;
    double f_max = 1e9;
    double p_max = 0.5;
    double arrival_max = 4000.0;
    double fading_mean = 1.0;

    /// Mean arrival rate (bits/slot) under the uniform arrival law.
    double mean_arrival() const { return 0.5 * (kArrivalMin + arrival_max); }
};

struct DeviceState
{
    double queue = 0.0;
    double channel_gain = 0.0;
    double arrival = 0.0;
};

/// Per-device controls for one slot.
template <class Scalar>
struct SlotDecision
{
    vec_t<Scalar> freqs;
    vec_t<Scalar> tx_powers;
    vec_t<Scalar> bw_fracs;

    SlotDecision() = default;
    explicit SlotDecision(Eigen::Index n)
        : freqs(vec_t<Scalar>::Zero(n)),
          tx_powers(vec_t<Scalar>::Zero(n)),
          bw_fracs(vec_t<Scalar>::Constant(n, Scalar(1) / Scalar(n)))
    {}

    Eigen::Index size() const { return freqs.size(); }
};

struct SlotRecord
{
    double total_power = 0.0;
    vec_d local_departure;
    vec_d remote_departure;
    vec_d total_departure;
    vec_d queues;
};

/// Raised by configuration parsing/validation; names the offending field.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field))
    {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// -----------------------------------------------------------------------
// Unit conversions
// -----------------------------------------------------------------------

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w * 1000.0); }

/// Large-scale gain g0 (d0/d)^theta.
template <class Scalar>
inline Scalar pathloss(Scalar g0, Scalar d0, Scalar d, Scalar theta)
{
    using std::pow;
    return g0 * pow(d0 / d, theta);
}

inline double pathloss(const SystemConfig& sys, const DeviceConfig& dev)
{
    return pathloss(sys.pathloss_const, sys.ref_dist, dev.distance, sys.pathloss_exp);
}

// -----------------------------------------------------------------------
// Departure and power models
// -----------------------------------------------------------------------

/// Bits executed locally in one slot at CPU frequency f.
template <class Scalar>
inline Scalar local_departure(Scalar f, Scalar slot_len, Scalar cycles_per_bit)
{
    return slot_len * f / cycles_per_bit;
}

template <class Scalar>
inline Scalar local_power(Scalar f, Scalar kappa)
{
    return kappa * f * f * f;
}

/*
 * Bits offloaded in one slot with bandwidth share alpha and transmit power p:
 *   alpha w tau log2(1 + H p / (alpha N0 w)),   zero when alpha == 0.
 */
template <class Scalar>
inline Scalar remote_departure(
    Scalar alpha, Scalar p, Scalar gain,
    Scalar bandwidth, Scalar slot_len, Scalar noise_psd)
{
    using std::log1p;
    if (alpha <= Scalar(0)) return Scalar(0);
    const Scalar snr = gain * p / (alpha * noise_psd * bandwidth);
    return alpha * bandwidth * slot_len * log1p(snr) / Scalar(M_LN2);
}

// -----------------------------------------------------------------------
// Validation
// -----------------------------------------------------------------------

void validate(const SystemConfig& sys);
void validate(const DeviceConfig& dev, std::size_t index);
void validate(const SystemConfig& sys, const std::vector<DeviceConfig>& devices);

/// Checks a decision against box, floor and simplex constraints.
/// Returns an empty string when feasible, otherwise a diagnostic naming the device.
std::string check_feasible(
    const SlotDecision<double>& d,
    const SystemConfig& sys,
    const std::vector<DeviceConfig>& devices,
    double simplex_tol = 1e-6);

} // namespace mec
