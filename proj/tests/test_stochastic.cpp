#include <mec/config.hpp>
#include <mec/stochastic.hpp>
#include <doctest.h>
#include <algorithm>
#include <cmath>

using doctest::Approx;

namespace {

// Two-sided one-sample Kolmogorov-Smirnov statistic.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

// Asymptotic critical value at significance 0.01.
double ks_critical_001(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

mec::ExperimentConfig defaults() { return mec::parse_config(mec::preset("default")); }

} // namespace

TEST_CASE("arrivals: bounds, mean and determinism")
{
    auto cfg = defaults();
    mec::RandomStreams s(42, 5);
    const auto& dev = cfg.devices[0];
    double sum = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) {
        const double a = mec::draw_arrival(dev, s, 0);
        REQUIRE(a >= 0.0);
        REQUIRE(a <= dev.arrival_max);
        sum += a;
    }
    CHECK(std::abs(sum / n - 2000.0) < 10.0);

    mec::RandomStreams a(7, 2), b(7, 2);
    for (int k = 0; k < 100; ++k) CHECK(mec::draw_arrival(dev, a, 1) == mec::draw_arrival(dev, b, 1));

    mec::DeviceConfig silent = dev;
    silent.arrival_max = 0.0;
    for (int k = 0; k < 10; ++k) CHECK(mec::draw_arrival(silent, a, 0) == 0.0);
}

TEST_CASE("arrivals pass a KS test against Uniform[0, A_max]")
{
    const auto cfg = defaults();
    mec::RandomStreams s(3, 1);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = mec::draw_arrival(cfg.devices[0], s, 0);
    const double d = ks_statistic(xs, [](double x) { return x / 4000.0; });
    CHECK(d < ks_critical_001(xs.size()));
}

TEST_CASE("fading passes a KS test against Exp(1)")
{
    const auto cfg = defaults();
    mec::RandomStreams s(4, 1);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = s.fading(0, cfg.devices[0]);
    const double d = ks_statistic(xs, [](double x) { return 1.0 - std::exp(-x); });
    CHECK(d < ks_critical_001(xs.size()));
}

TEST_CASE("channel gain scales unit-mean fading by the path loss")
{
    const auto cfg = defaults();
    const double pl = mec::pathloss(cfg.system, cfg.devices[0]);
    CHECK(pl == Approx(1.9753086e-13).epsilon(1e-7));

    mec::RandomStreams s(9, 1);
    double sum = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) {
        const double g = mec::draw_channel_gain(cfg.devices[0], cfg.system, s, 0);
        REQUIRE(g > 0.0);
        sum += g;
    }
    CHECK(sum / n == Approx(pl).epsilon(0.01));

    mec::ConstantSource unit(0.0, 1.0);
    CHECK(mec::draw_channel_gain(cfg.devices[0], cfg.system, unit, 0) == pl);
}

TEST_CASE("substreams differ across devices and processes")
{
    const auto cfg = defaults();
    mec::RandomStreams s(1, 2);
    int same = 0;
    for (int k = 0; k < 100; ++k) {
        if (mec::draw_arrival(cfg.devices[0], s, 0) == mec::draw_arrival(cfg.devices[1], s, 1)) ++same;
    }
    CHECK(same == 0);
    CHECK(mec::derive_seed(1, 0, mec::Process::arrival) != mec::derive_seed(1, 0, mec::Process::fading));
    CHECK(mec::derive_seed(1, 0, mec::Process::arrival) != mec::derive_seed(2, 0, mec::Process::arrival));
}
