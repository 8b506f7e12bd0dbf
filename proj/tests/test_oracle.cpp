#include <mec/config.hpp>
#include <mec/oracle.hpp>
#include <doctest.h>
#include <cmath>

using doctest::Approx;

namespace {

mec::PtsProblem<double> problem(const mec::vec_d& q, const mec::vec_d& h, double V)
{
    auto cfg = mec::parse_config(mec::preset("default"));
    cfg.system.num_devices = static_cast<int>(q.size());
    cfg.system.control_V = V;
    cfg.devices.assign(q.size(), cfg.devices.front());
    return mec::make_problem(cfg.system, cfg.devices, q, h);
}

const double kGain = 1.9753086419753e-13;

} // namespace

TEST_CASE("grid_sp1: empty queue keeps the CPU idle")
{
    const auto r = mec::oracle::grid_sp1(0.0, 1e-3, 1e-27, 1e8, 737.5, 1e9, 10000L);
    CHECK(r.freq == 0.0);
    CHECK(r.objective == 0.0);
    CHECK_THROWS_AS(mec::oracle::grid_sp1(0.0, 1e-3, 1e-27, 1e8, 737.5, 1e9, 999L), std::invalid_argument);
}

TEST_CASE("grid_sp2: single device takes the whole band")
{
    const auto pb = problem(mec::vec_d::Constant(1, 4e4), mec::vec_d::Constant(1, kGain), 1e9);
    const auto r = mec::oracle::grid_sp2(pb, 1e-3);
    CHECK(r.bw_fracs[0] == Approx(1.0));
    CHECK(r.tx_powers[0] == Approx(mec::optimal_tx_powers(pb, mec::vec_d(mec::vec_d::Ones(1)))[0]).epsilon(1e-12));
    CHECK(r.objective == Approx(mec::sp2_objective(pb, r.tx_powers, r.bw_fracs)).epsilon(1e-12));
}

TEST_CASE("grid_sp2: symmetric pair splits evenly")
{
    // Both powers capped; with uncapped powers every split ties.
    const auto pb = problem(mec::vec_d::Constant(2, 3e5), mec::vec_d::Constant(2, kGain), 1e9);
    const auto r = mec::oracle::grid_sp2(pb, 1e-3);
    CHECK(std::abs(r.bw_fracs[0] - 0.5) <= 1e-3);
    CHECK(std::abs(r.bw_fracs[1] - 0.5) <= 1e-3);
    CHECK(r.bw_fracs.sum() == Approx(1.0).epsilon(1e-12));
    CHECK(r.slack >= 0.0);
}

TEST_CASE("grid_sp2: objective bookkeeping agrees with the shared objective")
{
    mec::vec_d q(3), h(3);
    q << 2e4, 9e4, 5e4;
    h << 1.1 * kGain, 0.4 * kGain, 2.0 * kGain;
    const auto pb = problem(q, h, 3e8);
    const auto r = mec::oracle::grid_sp2(pb, 1e-2);
    CHECK(r.evaluations > 0);
    CHECK(r.objective == Approx(mec::sp2_objective(pb, r.tx_powers, r.bw_fracs)).epsilon(1e-12));
    CHECK((r.bw_fracs >= pb.eps_A - 1e-15).all());

    const auto fine = mec::oracle::refined_grid_sp2(pb, 1e-2, 2);
    CHECK(fine.objective <= r.objective);
    CHECK(fine.step == Approx(1e-4));
}

TEST_CASE("grid_sp2: argument limits")
{
    const auto big = problem(mec::vec_d::Constant(5, 1e4), mec::vec_d::Constant(5, kGain), 1e9);
    CHECK_THROWS_AS(mec::oracle::grid_sp2(big, 1e-2), std::invalid_argument);
    const auto pb = problem(mec::vec_d::Constant(2, 1e4), mec::vec_d::Constant(2, kGain), 1e9);
    CHECK_THROWS_AS(mec::oracle::grid_sp2(pb, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(mec::oracle::grid_sp2(pb, 0.0), std::invalid_argument);
}
