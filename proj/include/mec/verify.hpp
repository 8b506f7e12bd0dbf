#pragma once
#include <mec/config.hpp>
#include <mec/controller.hpp>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mec {

/*
 * Random per-slot problems around an experiment configuration:
 * log-uniform Q in [1e3, 3e5] bits and V in [1e6, 5e9], unit-mean
 * exponential fading on the configured path loss.
 */
class InstanceGenerator
{
public:
    InstanceGenerator(ExperimentConfig base, std::uint64_t seed) : base_(std::move(base)), rng_(seed) {}

    PtsProblem<double> next(int num_devices);
    std::mt19937_64& rng() { return rng_; }
    double log_uniform(double lo, double hi);

private:
    ExperimentConfig base_;
    std::mt19937_64 rng_;
};

struct CheckResult
{
    std::string name;
    bool passed = true;
    long cases = 0;
    long failures = 0;
    double worst = 0.0;    // worst normalized violation observed
    std::string detail;
};

struct VerifyOptions
{
    int sp2_instances = 100;
    int max_devices = 3;
    double alpha_step = 1e-3;
    int scalar_instances = 1000;
    long grid_points = 10000;
    int derivative_points = 1000;
    std::uint64_t seed = 2024;
};

/// SP2 vs the simplex-grid oracle, with KKT and slackness residuals of the bandwidth step.
CheckResult certify_sp2(const ExperimentConfig& base, const VerifyOptions& opts);
/// Closed-form CPU frequency vs a uniform grid on [0, f_max].
CheckResult certify_cpu_freq(const ExperimentConfig& base, const VerifyOptions& opts);
/// Closed-form transmit power vs a uniform grid on [0, p_max].
CheckResult certify_tx_power(const ExperimentConfig& base, const VerifyOptions& opts);
/// marginal_rate vs a central finite difference of remote_departure.
CheckResult certify_marginal_rate(const ExperimentConfig& base, const VerifyOptions& opts);

std::vector<CheckResult> certify_all(const ExperimentConfig& base, const VerifyOptions& opts);

} // namespace mec
