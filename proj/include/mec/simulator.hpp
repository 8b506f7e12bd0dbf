#pragma once
#include <mec/config.hpp>
#include <mec/controller.hpp>
#include <mec/stochastic.hpp>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mec {

/// Queue recursion: max{Q - D, 0} + A.
inline double queue_update(double queue, double departed, double arrived)
{
    return std::max(queue - departed, 0.0) + arrived;
}

/// A per-slot policy maps the observed problem to a decision.
using Policy = std::function<SlotDecision<double>(const PtsProblem<double>&, SolverDiagnostics&)>;

/// lyapunov | local_only | static_equal
Policy make_policy(const std::string& name);
std::vector<std::string> policy_names();

class SimulationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct SlotTrace
{
    SlotRecord record;
    SlotDecision<double> decision;
    vec_d gains;
    vec_d arrivals;
    SolverDiagnostics diagnostics;
};

struct RunOptions
{
    bool keep_trace = false;
};

struct RunSummary
{
    double avg_power = 0.0;
    vec_d avg_queue;
    double sum_avg_queue = 0.0;
    double delay_slots = 0.0;
    double delay_ms = 0.0;
    vec_d final_queues;
    long slots = 0;
    long averaged_slots = 0;
    long nonconverged_slots = 0;
    std::uint64_t seed = 0;
    std::string policy;
    ExperimentConfig config;
    std::vector<SlotTrace> trace;
};

/*
 * Runs the slotted system for cfg.system.horizon slots from empty queues.
 * Each slot: observe Q(t) and H(t), draw A(t), decide, depart, update.
 * Arrivals of slot t are only serviceable from slot t+1.
 */
RunSummary run(const ExperimentConfig& cfg, const Policy& policy, SampleSource& source,
               const RunOptions& opts = {});

/// Convenience overload: RandomStreams from the config seed and policy by name.
RunSummary run(const ExperimentConfig& cfg, const RunOptions& opts = {});

void write_trace_csv(std::ostream& os, const RunSummary& summary);
std::string summary_csv_header();
std::string summary_csv_row(const RunSummary& summary);

/// printf-style "%.12g"; used for every number written to output files.
std::string format_number(double v);

} // namespace mec
