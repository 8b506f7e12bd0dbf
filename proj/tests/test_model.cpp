#include <mec/config.hpp>
#include <doctest.h>
#include <random>

using doctest::Approx;
using nlohmann::json;

TEST_CASE("parse_config converts human units to SI")
{
    const auto cfg = mec::parse_config(mec::preset("default"));
    const auto& s = cfg.system;
    // 10^(-17.4) / 1000
    CHECK(s.noise_psd == Approx(3.981071705534973e-21).epsilon(1e-12));
    CHECK(s.pathloss_const == Approx(1e-4).epsilon(1e-12));
    CHECK(s.slot_len == Approx(1e-3));
    CHECK(s.bandwidth == Approx(1e7));
    CHECK(s.num_devices == 5);
    REQUIRE(cfg.devices.size() == 5);
    CHECK(cfg.devices[0].f_max == Approx(1e9));
    CHECK(cfg.devices[0].p_max == Approx(0.5));
    CHECK(cfg.devices[0].arrival_max == Approx(4000.0));
    CHECK(cfg.devices[0].mean_arrival() == Approx(2000.0));
    // 1e-4 / 150^4
    CHECK(mec::pathloss(s, cfg.devices[0]) == Approx(1.9753086419753e-13).epsilon(1e-10));
}

TEST_CASE("parse_config reports the offending field")
{
    auto expect_field = [](json raw, const std::string& field) {
        try {
            mec::parse_config(raw);
            FAIL("expected ConfigError for " << field);
        } catch (const mec::ConfigError& e) {
            CHECK(e.field() == field);
        }
    };

    auto raw = mec::preset("default");
    raw.erase("kappa");
    expect_field(raw, "kappa");

    raw = mec::preset("default");
    raw["w_MHz"] = 0.0;
    expect_field(raw, "w_MHz");

    raw = mec::preset("default");
    raw["eps_A"] = 0.2;    // 1/N = 0.2
    expect_field(raw, "eps_A");

    raw = mec::preset("default");
    raw["device_defaults"]["p_max_mW"] = -5.0;
    expect_field(raw, "devices[0].p_max_mW");

    raw = mec::preset("default");
    raw["devices"] = json::array({json::object({{"distance_m", 100.0}})});
    raw.erase("num_devices");
    const auto cfg = mec::parse_config(raw);
    CHECK(cfg.devices.size() == 1);
    CHECK(cfg.devices[0].distance == 100.0);
    CHECK(cfg.devices[0].cycles_per_bit == 737.5);

    raw["num_devices"] = 3;
    expect_field(raw, "num_devices");
}

TEST_CASE("overrides accept aliases and dotted keys")
{
    auto raw = mec::preset("default");
    mec::apply_override(raw, "V=5e9");
    mec::apply_override(raw, "A_max=8");
    mec::apply_override(raw, "N=10");
    mec::apply_override(raw, "policy=local_only");
    const auto cfg = mec::parse_config(raw);
    CHECK(cfg.system.control_V == 5e9);
    CHECK(cfg.system.num_devices == 10);
    CHECK(cfg.devices[9].arrival_max == Approx(8000.0));
    CHECK(cfg.policy == "local_only");
    CHECK_THROWS_AS(mec::apply_override(raw, "novalue"), mec::ConfigError);
}

TEST_CASE("emit_config round-trips dB and dBm fields")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> n0(-190.0, -150.0), g0(-60.0, -20.0);
    for (int k = 0; k < 200; ++k) {
        auto raw = mec::preset("default");
        raw["N0_dBm_per_Hz"] = n0(rng);
        raw["g0_dB"] = g0(rng);
        const auto cfg = mec::parse_config(raw);
        const auto back = mec::emit_config(cfg);
        CHECK(back["N0_dBm_per_Hz"].get<double>() == Approx(raw["N0_dBm_per_Hz"].get<double>()).epsilon(1e-9));
        CHECK(back["g0_dB"].get<double>() == Approx(raw["g0_dB"].get<double>()).epsilon(1e-9));
        const auto again = mec::parse_config(back);
        CHECK(mec::config_hash(again) == mec::config_hash(cfg));
    }
}

TEST_CASE("local execution model")
{
    CHECK(mec::local_departure(0.0, 1e-3, 737.5) == 0.0);
    CHECK(mec::local_departure(1e9, 1e-3, 737.5) == Approx(1355.9322).epsilon(1e-7));
    CHECK(mec::local_departure(737.5e6, 1e-3, 737.5) == Approx(1000.0).epsilon(1e-12));
    CHECK(mec::local_power(0.0, 1e-27) == 0.0);
    CHECK(mec::local_power(1e9, 1e-27) == Approx(1.0).epsilon(1e-12));
    CHECK(mec::local_power(5e8, 1e-27) == Approx(0.125).epsilon(1e-12));
}

namespace {

const double kW = 1e7, kTau = 1e-3, kN0 = 3.981071705534973e-21, kH = 1.9753086419753e-13;

double dr(double a, double p, double h = kH)
{
    return mec::remote_departure(a, p, h, kW, kTau, kN0);
}

} // namespace

TEST_CASE("remote departure model")
{
    CHECK(dr(0.0, 0.3) == 0.0);
    CHECK(dr(0.4, 0.0) == 0.0);
    // SNR = 2.4809, log2(3.4809) = 1.7995, times alpha w tau = 2000
    CHECK(dr(0.2, 0.1) == Approx(3598.9004).epsilon(1e-6));
}

TEST_CASE("remote departure is increasing and jointly concave")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(1e-4, 1.0), up(0.0, 0.5), uh(0.05, 5.0);
    for (int k = 0; k < 1000; ++k) {
        const double a = ua(rng), p = up(rng), h = uh(rng) * kH;
        const double step = 1e-6;
        if (p > 0.0) CHECK(dr(a + step, p, h) > dr(a, p, h));
        CHECK(dr(a, p + step, h) > dr(a, p, h));

        const double a2 = ua(rng), p2 = up(rng);
        const double mid = dr(0.5 * (a + a2), 0.5 * (p + p2), h);
        const double avg = 0.5 * (dr(a, p, h) + dr(a2, p2, h));
        CHECK(mid >= avg - 1e-9 * std::abs(avg));
    }
}

TEST_CASE("feasibility check names the device")
{
    const auto cfg = mec::parse_config(mec::preset("default"));
    mec::SlotDecision<double> d(5);
    CHECK(mec::check_feasible(d, cfg.system, cfg.devices).empty());

    auto bad = d;
    bad.freqs[3] = 2e9;
    CHECK(mec::check_feasible(bad, cfg.system, cfg.devices).find("device 3") != std::string::npos);
    bad = d;
    bad.bw_fracs[1] = 0.0;
    CHECK(mec::check_feasible(bad, cfg.system, cfg.devices).find("device 1") != std::string::npos);
    bad = d;
    bad.bw_fracs[0] = 0.5;
    CHECK(!mec::check_feasible(bad, cfg.system, cfg.devices).empty());
}
