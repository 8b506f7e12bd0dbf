#include <mec/stochastic.hpp>

namespace mec {
namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::size_t device, Process process)
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(device));
    h = splitmix64(h ^ static_cast<std::uint64_t>(process));
    return h;
}

RandomStreams::RandomStreams(std::uint64_t master_seed, std::size_t num_devices)
    : seed_(master_seed)
{
    arrival_engines_.reserve(num_devices);
    fading_engines_.reserve(num_devices);
    for (std::size_t i = 0; i < num_devices; ++i) {
        arrival_engines_.emplace_back(derive_seed(master_seed, i, Process::arrival));
        fading_engines_.emplace_back(derive_seed(master_seed, i, Process::fading));
    }
}

double RandomStreams::arrival(std::size_t device, const DeviceConfig& dev)
{
    if (dev.arrival_max <= kArrivalMin) return kArrivalMin;
    std::uniform_real_distribution<double> dist(kArrivalMin, dev.arrival_max);
    return dist(arrival_engines_.at(device));
}

double RandomStreams::fading(std::size_t device, const DeviceConfig& dev)
{
    std::exponential_distribution<double> dist(1.0 / dev.fading_mean);
    auto& eng = fading_engines_.at(device);
    // Channel gains must stay strictly positive.
    double h = dist(eng);
    while (!(h > 0.0)) h = dist(eng);
    return h;
}

} // namespace mec
