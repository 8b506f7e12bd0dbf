#include <mec/config.hpp>
#include <cstdio>
#include <fstream>

namespace mec {

using nlohmann::json;

namespace {

double get_number(const json& obj, const std::string& key, const std::string& path)
{
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + key, "missing required key");
    if (!it->is_number()) throw ConfigError(path + key, "must be a number");
    return it->get<double>();
}

double get_number_or(const json& obj, const std::string& key, double fallback, const std::string& path)
{
    if (!obj.contains(key)) return fallback;
    return get_number(obj, key, path);
}

DeviceConfig parse_device(const json& block, const json& defaults, const std::string& path)
{
    // Per-device keys fall back to device_defaults.
    auto pick = [&](const std::string& key) {
        if (block.contains(key)) return get_number(block, key, path);
        if (defaults.contains(key)) return get_number(defaults, key, "device_defaults.");
        throw ConfigError(path + key, "missing required key");
    };
    DeviceConfig d;
    d.distance = pick("distance_m");
    d.cycles_per_bit = pick("L_cycles_per_bit");
    d.f_max = pick("f_max_GHz") * 1e9;
    d.p_max = pick("p_max_mW") * 1e-3;
    d.arrival_max = pick("A_max_kbits") * 1e3;
    d.fading_mean = pick("fading_mean");
    return d;
}

json emit_device(const DeviceConfig& d)
{
    return json{
        {"distance_m", d.distance},
        {"L_cycles_per_bit", d.cycles_per_bit},
        {"f_max_GHz", d.f_max / 1e9},
        {"p_max_mW", d.p_max * 1e3},
        {"A_max_kbits", d.arrival_max / 1e3},
        {"fading_mean", d.fading_mean},
    };
}

json parse_scalar(const std::string& text)
{
    if (text == "true") return true;
    if (text == "false") return false;
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos == text.size()) {
            if (text.find_first_of(".eE") == std::string::npos) return static_cast<long long>(v);
            return v;
        }
    } catch (const std::exception&) {
    }
    return text;
}

} // namespace

ExperimentConfig parse_config(const json& raw)
{
    if (!raw.is_object()) throw ConfigError("<root>", "config document must be an object");

    ExperimentConfig cfg;
    auto& s = cfg.system;
    s.slot_len = get_number(raw, "tau_ms", "") * 1e-3;
    s.bandwidth = get_number(raw, "w_MHz", "") * 1e6;
    s.noise_psd = dbm_to_watt(get_number(raw, "N0_dBm_per_Hz", ""));
    s.pathloss_const = db_to_linear(get_number(raw, "g0_dB", ""));
    s.ref_dist = get_number(raw, "d0_m", "");
    s.pathloss_exp = get_number(raw, "theta", "");
    s.switched_cap = get_number(raw, "kappa", "");
    s.control_V = get_number(raw, "V_bits2_per_W", "");
    s.eps_A = get_number_or(raw, "eps_A", 1e-4, "");
    s.horizon = static_cast<long>(get_number(raw, "horizon_slots", ""));
    s.burn_in = static_cast<long>(get_number_or(raw, "burn_in_slots", 0, ""));
    s.rng_seed = static_cast<std::uint64_t>(get_number_or(raw, "seed", 1, ""));
    if (raw.contains("policy")) {
        if (!raw["policy"].is_string()) throw ConfigError("policy", "must be a string");
        cfg.policy = raw["policy"].get<std::string>();
    }

    const json defaults = raw.value("device_defaults", json::object());
    if (raw.contains("devices")) {
        const auto& arr = raw["devices"];
        if (!arr.is_array() || arr.empty()) throw ConfigError("devices", "must be a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            cfg.devices.push_back(parse_device(arr[i], defaults, "devices[" + std::to_string(i) + "]."));
        }
        if (raw.contains("num_devices")
            && static_cast<std::size_t>(get_number(raw, "num_devices", "")) != cfg.devices.size()) {
            throw ConfigError("num_devices", "does not match the length of devices");
        }
        s.num_devices = static_cast<int>(cfg.devices.size());
    } else {
        const double n = get_number(raw, "num_devices", "");
        if (n < 1) throw ConfigError("num_devices", "must be >= 1");
        s.num_devices = static_cast<int>(n);
        const auto d = parse_device(json::object(), defaults, "device_defaults.");
        cfg.devices.assign(s.num_devices, d);
    }

    validate(s, cfg.devices);
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("parse error: ") + e.what());
    }
    return parse_config(raw);
}

json emit_config(const ExperimentConfig& cfg)
{
    const auto& s = cfg.system;
    json devices = json::array();
    for (const auto& d : cfg.devices) devices.push_back(emit_device(d));
    return json{
        {"num_devices", s.num_devices},
        {"tau_ms", s.slot_len * 1e3},
        {"w_MHz", s.bandwidth / 1e6},
        {"N0_dBm_per_Hz", watt_to_dbm(s.noise_psd)},
        {"g0_dB", linear_to_db(s.pathloss_const)},
        {"d0_m", s.ref_dist},
        {"theta", s.pathloss_exp},
        {"kappa", s.switched_cap},
        {"V_bits2_per_W", s.control_V},
        {"eps_A", s.eps_A},
        {"horizon_slots", s.horizon},
        {"burn_in_slots", s.burn_in},
        {"seed", s.rng_seed},
        {"policy", cfg.policy},
        {"devices", devices},
    };
}

void apply_override(json& raw, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(assignment, "override must have the form key=value");
    }
    std::string key = assignment.substr(0, eq);
    const json value = parse_scalar(assignment.substr(eq + 1));

    if (key == "V") key = "V_bits2_per_W";
    else if (key == "N") key = "num_devices";
    else if (key == "T") key = "horizon_slots";
    else if (key == "A_max") key = "device_defaults.A_max_kbits";

    json* node = &raw;
    std::size_t start = 0;
    for (;;) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (dot == std::string::npos) {
            (*node)[part] = value;
            break;
        }
        node = &(*node)[part];
        if (!node->is_object()) *node = json::object();
        start = dot + 1;
    }
}

std::uint64_t config_hash(const ExperimentConfig& cfg)
{
    const std::string canon = emit_config(cfg).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json preset(const std::string& name)
{
    json base = {
        {"num_devices", 5},
        {"tau_ms", 1.0},
        {"w_MHz", 10.0},
        {"N0_dBm_per_Hz", -174.0},
        {"g0_dB", -40.0},
        {"d0_m", 1.0},
        {"theta", 4.0},
        {"kappa", 1e-27},
        {"V_bits2_per_W", 1e9},
        {"eps_A", 1e-4},
        {"horizon_slots", 5000},
        {"burn_in_slots", 0},
        {"seed", 1},
        {"policy", "lyapunov"},
        {"device_defaults", {
            {"distance_m", 150.0},
            {"L_cycles_per_bit", 737.5},
            {"f_max_GHz", 1.0},
            {"p_max_mW", 500.0},
            {"A_max_kbits", 4.0},
            {"fading_mean", 1.0},
        }},
    };
    if (name == "default") return base;
    if (name == "double_arrival") {
        base["device_defaults"]["A_max_kbits"] = 8.0;
        return base;
    }
    if (name == "double_devices") {
        base["num_devices"] = 10;
        return base;
    }
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

std::vector<std::string> preset_names()
{
    return {"default", "double_arrival", "double_devices"};
}

} // namespace mec
