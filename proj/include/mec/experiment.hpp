#pragma once
#include <mec/simulator.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mec {

struct SweepRow
{
    std::string policy;
    double V = 0.0;
    std::uint64_t seed = 0;
    std::string status = "pending";    // ok | failed | skipped
    std::string error;
    RunSummary summary;
};

struct SweepResult
{
    std::vector<SweepRow> rows;    // ordered by (policy, V, seed)
    bool failed = false;
};

/// Mean over seeds of one (policy, V) point.
struct SweepPoint
{
    std::string policy;
    double V = 0.0;
    int seeds = 0;
    double avg_power = 0.0;
    double sum_avg_queue = 0.0;
    double delay_ms = 0.0;
};

/// count log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int count);

/// Parses "1e6,2e6" or "lo:hi:count" (log-spaced).
std::vector<double> parse_v_list(const std::string& text);

/// seeds base, base+1, ..., base+count-1
std::vector<std::uint64_t> seed_range(std::uint64_t base, int count);

/*
 * Runs every (policy, V, seed) combination. Runs share nothing; each
 * seed drives the same sample path for every V and policy. On the first
 * failure no further runs are started; completed rows are kept.
 */
SweepResult sweep(const ExperimentConfig& base,
                  const std::vector<std::string>& policies,
                  const std::vector<double>& v_list,
                  const std::vector<std::uint64_t>& seeds,
                  unsigned threads = 0);

std::vector<SweepPoint> average_over_seeds(const SweepResult& result);

void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_sweep_mean_csv(std::ostream& os, const std::vector<SweepPoint>& points, std::uint64_t hash);

/// gnuplot script plotting the mean CSV (power vs V, queue vs V, power vs delay).
std::string gnuplot_script(const std::string& mean_csv);

} // namespace mec
