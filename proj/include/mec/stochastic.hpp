#pragma once
#include <mec/model.hpp>
#include <cstdint>
#include <random>
#include <vector>

namespace mec {

enum class Process : std::uint64_t { arrival = 1, fading = 2 };

/// Derives an independent generator seed from (master, device, process).
std::uint64_t derive_seed(std::uint64_t master, std::size_t device, Process process);

/*
 * Source of per-slot randomness: task arrivals (bits) and small-scale
 * fading power gains. Injectable so tests can drive the simulator with
 * degenerate processes.
 */
class SampleSource
{
public:
    virtual ~SampleSource() = default;
    virtual double arrival(std::size_t device, const DeviceConfig& dev) = 0;
    virtual double fading(std::size_t device, const DeviceConfig& dev) = 0;
};

/*
 * Uniform[0, A_max] arrivals and Exp(mean h_bar) fading, with one
 * generator per (device, process) pair. Sweeps that share a seed see
 * identical sample paths regardless of policy or V.
 */
class RandomStreams final : public SampleSource
{
public:
    RandomStreams(std::uint64_t master_seed, std::size_t num_devices);

    double arrival(std::size_t device, const DeviceConfig& dev) override;
    double fading(std::size_t device, const DeviceConfig& dev) override;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::vector<std::mt19937_64> arrival_engines_;
    std::vector<std::mt19937_64> fading_engines_;
};

/// Constant arrivals and fading, for tests and hand-checkable runs.
class ConstantSource final : public SampleSource
{
public:
    ConstantSource(double arrival_bits, double fading_gain)
        : arrival_(arrival_bits), fading_(fading_gain)
    {}
    double arrival(std::size_t, const DeviceConfig&) override { return arrival_; }
    double fading(std::size_t, const DeviceConfig&) override { return fading_; }

private:
    double arrival_;
    double fading_;
};

inline double draw_arrival(const DeviceConfig& dev, SampleSource& src, std::size_t device)
{
    return src.arrival(device, dev);
}

/// Channel power gain h g0 (d0/d)^theta for the next slot.
inline double draw_channel_gain(
    const DeviceConfig& dev, const SystemConfig& sys, SampleSource& src, std::size_t device)
{
    return src.fading(device, dev) * pathloss(sys, dev);
}

} // namespace mec
