#include <mec/experiment.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

namespace mec {

std::vector<double> log_space(double lo, double hi, int count)
{
    std::vector<double> out;
    if (count <= 0) return out;
    if (count == 1) return {lo};
    const double a = std::log10(lo), b = std::log10(hi);
    for (int k = 0; k < count; ++k) {
        out.push_back(std::pow(10.0, a + (b - a) * k / (count - 1)));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> parse_v_list(const std::string& text)
{
    auto number = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos == s.size() && v > 0.0 && std::isfinite(v)) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("--v-list", "invalid value '" + s + "'");
    };

    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto c1 = text.find(':'), c2 = text.rfind(':');
        const double lo = number(text.substr(0, c1));
        const double hi = number(text.substr(c1 + 1, c2 - c1 - 1));
        const double cnt = number(text.substr(c2 + 1));
        return log_space(lo, hi, static_cast<int>(cnt));
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(number(item));
    }
    if (out.empty()) throw ConfigError("--v-list", "no values given");
    return out;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count)
{
    std::vector<std::uint64_t> out;
    for (int k = 0; k < count; ++k) out.push_back(base + static_cast<std::uint64_t>(k));
    return out;
}

SweepResult sweep(const ExperimentConfig& base,
                  const std::vector<std::string>& policies,
                  const std::vector<double>& v_list,
                  const std::vector<std::uint64_t>& seeds,
                  unsigned threads)
{
    SweepResult result;
    for (const auto& p : policies) {
        make_policy(p);    // reject unknown names before any work
        for (double v : v_list) {
            for (auto s : seeds) {
                SweepRow row;
                row.policy = p;
                row.V = v;
                row.seed = s;
                result.rows.push_back(std::move(row));
            }
        }
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    auto worker = [&]() {
        for (;;) {
            if (abort.load()) return;
            const std::size_t k = next.fetch_add(1);
            if (k >= result.rows.size()) return;
            auto& row = result.rows[k];
            ExperimentConfig cfg = base;
            cfg.policy = row.policy;
            cfg.system.control_V = row.V;
            cfg.system.rng_seed = row.seed;
            try {
                row.summary = run(cfg);
                row.status = "ok";
            } catch (const std::exception& e) {
                row.status = "failed";
                row.error = e.what();
                abort.store(true);
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(result.rows.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (auto& row : result.rows) {
        if (row.status == "pending") row.status = "skipped";
        if (row.status != "ok") result.failed = true;
    }
    return result;
}

std::vector<SweepPoint> average_over_seeds(const SweepResult& result)
{
    std::vector<SweepPoint> out;
    for (const auto& row : result.rows) {
        if (row.status != "ok") continue;
        if (out.empty() || out.back().policy != row.policy || out.back().V != row.V) {
            out.push_back(SweepPoint{row.policy, row.V});
        }
        auto& pt = out.back();
        ++pt.seeds;
        pt.avg_power += row.summary.avg_power;
        pt.sum_avg_queue += row.summary.sum_avg_queue;
        pt.delay_ms += row.summary.delay_ms;
    }
    for (auto& pt : out) {
        pt.avg_power /= pt.seeds;
        pt.sum_avg_queue /= pt.seeds;
        pt.delay_ms /= pt.seeds;
    }
    return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result)
{
    os << summary_csv_header() << ",status\n";
    for (const auto& row : result.rows) {
        if (row.status == "ok") {
            os << summary_csv_row(row.summary) << ",ok\n";
        } else {
            os << ",," << row.policy << ',' << format_number(row.V) << ",,,,,,,," << row.status << '\n';
        }
    }
}

void write_sweep_mean_csv(std::ostream& os, const std::vector<SweepPoint>& points, std::uint64_t hash)
{
    os << "config_hash,policy,V,seeds,avg_power_w,sum_avg_queue_bits,delay_ms\n";
    for (const auto& pt : points) {
        os << hex64(hash) << ',' << pt.policy << ',' << format_number(pt.V) << ',' << pt.seeds << ','
           << format_number(pt.avg_power) << ',' << format_number(pt.sum_avg_queue) << ','
           << format_number(pt.delay_ms) << '\n';
    }
}

std::string gnuplot_script(const std::string& mean_csv)
{
    std::ostringstream ss;
    ss << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set terminal pngcairo size 1200,400\n"
       << "set output 'sweep.png'\n"
       << "set multiplot layout 1,3\n"
       << "set logscale x\n"
       << "set xlabel 'V (bits^2/W)'\n"
       << "set ylabel 'power (W)'\n"
       << "plot '" << mean_csv << "' using 3:5 with linespoints\n"
       << "set ylabel 'sum of average queues (bits)'\n"
       << "plot '" << mean_csv << "' using 3:6 with linespoints\n"
       << "unset logscale x\n"
       << "set xlabel 'delay (ms)'\n"
       << "set ylabel 'power (W)'\n"
       << "plot '" << mean_csv << "' using 7:5 with linespoints\n"
       << "unset multiplot\n";
    return ss.str();
}

} // namespace mec
