#pragma once
#include <mec/model.hpp>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace mec {

/*
 * Parsed experiment configuration. Human-facing documents use the units
 * in the key names (tau_ms, w_MHz, N0_dBm_per_Hz, g0_dB, ...); everything
 * here is SI.
 */
struct ExperimentConfig
{
    SystemConfig system;
    std::vector<DeviceConfig> devices;
    std::string policy = "lyapunov";
};

ExperimentConfig parse_config(const nlohmann::json& raw);
ExperimentConfig load_config(const std::string& path);

/// Inverse of parse_config: re-emits the document in human units.
nlohmann::json emit_config(const ExperimentConfig& cfg);

/*
 * Applies "key=value" overrides to a raw document before parsing.
 * Short aliases: V, N, T, seed, A_max (kbits), policy. Dotted keys
 * address nested objects, e.g. device_defaults.p_max_mW=200.
 */
void apply_override(nlohmann::json& raw, const std::string& assignment);

/// 64-bit FNV-1a digest of the canonical (sorted, compact) emitted config.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string hex64(std::uint64_t v);

/// Built-in experiment presets: default, double_arrival, double_devices.
nlohmann::json preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace mec
