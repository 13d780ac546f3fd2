#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dtmec/common.hpp"
#include "dtmec/mobility.hpp"

namespace dtmec {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what)
        : std::runtime_error("config: " + what) {}
};

// Full scenario description. One flat key per member; see the field tables
// at the bottom of this header for the file schema.
struct ScenarioConfig {
    // Topology and timing
    int mtu_count = 6;
    int device_count = 10;
    int fhp_count = 15;
    int slot_count = 100;
    double slot_len_s = 6.0;
    double slot_share_s = 0.0; // 0 -> slot_len_s / mtu_count
    double uav_alt_m = 500.0;

    // Radio
    double bandwidth_hz = 100e6;
    double noise_w = 3e-11;
    double beta0_db = -30.0;

    // UAV platform
    double uav_fly_power_w = 0.11;
    double uav_hover_power_w = 0.08;
    double uav_speed_mps = 20.0;
    int uav_initial_fhp = 0;
    bool uav_single_fhp_per_slot = false;

    // Region and BS placement (BS sits outside the served region)
    double region_w_m = 1000.0;
    double region_h_m = 1000.0;
    double bs_x_m = 2000.0;
    double bs_y_m = 500.0;

    // CPU caps and hardware coefficients
    double mtu_f_max_hz = 6e9;
    double device_f_max_hz = 8e9;
    double uav_f_max_hz = 10e9;
    // Twin-advertised frequencies; 0 means "advertise the cap".
    double mtu_f_est_hz = 0.0;
    double device_f_est_hz = 0.0;
    double uav_f_est_hz = 2e9;
    double mtu_kappa = 1e-27;
    double device_kappa = 2e-27;
    double uav_kappa = 1e-26;

    // Transmit power caps
    double mtu_p_max_w = 0.3;
    double uav_p_max_w = 0.5;

    // Per-episode energy budgets
    double mtu_energy_budget_j = 2e4;
    double device_energy_budget_j = 5e4;
    double uav_energy_budget_j = 80.0;

    // Task generation
    double task_bits_min = 50e6;
    double task_bits_max = 150e6;
    double cycles_per_bit = 30.0;
    double deadline_min_frac = 0.5; // of the TDMA share
    double deadline_max_frac = 1.0;

    // Twin deviation sampling (fraction of each entity's f_est)
    double mtu_deviation_delta = 0.1;
    double server_deviation_delta = 0.1;
    bool deviation_positive = false; // true: exactly +delta for all entities

    // Mobility
    double mu1 = 0.99;
    double mu2 = 0.95;
    double mean_speed_mps = 1.5;
    double lambda_mean = 0.0;
    double lambda_std = 0.5;
    double gamma_mean = 0.0;
    double gamma_std = 0.3;
    bool literal_eq7 = false;

    // Reward shaping
    double penalty_j = 800.0;
    double reward_scale = 50.0;

    // Learner
    double epsilon_init = 0.95;
    double epsilon_decrement = 1e-4;
    double epsilon_floor = 0.01;
    double discount = 0.9;
    double learning_rate = 0.001;
    int batch_size = 32;
    int replay_capacity = 2400;
    int target_sync_interval = 200;
    int episodes = 300;
    int train_interval = 1; // slots between gradient steps
    bool transition_per_slot = false;
    int eval_episodes = 3;
    std::vector<int> hidden_sizes = {48, 48};

    // Alternating optimizer
    double joint_threshold = 1e-3;
    int joint_max_iters = 20;
    double joint_init_power_frac = 0.5;
    bool retrain_policy = false;

    std::uint64_t seed = 1;

    // Derived quantities
    double slot_share() const {
        return slot_share_s > 0.0 ? slot_share_s
                                  : slot_len_s / static_cast<double>(mtu_count);
    }
    double beta0() const { return db_to_linear(beta0_db); }
    Location bs_location() const { return {bs_x_m, bs_y_m, 0.0}; }
    double mtu_f_est() const {
        return mtu_f_est_hz > 0.0 ? mtu_f_est_hz : mtu_f_max_hz;
    }
    double device_f_est() const {
        return device_f_est_hz > 0.0 ? device_f_est_hz : device_f_max_hz;
    }
    double uav_f_est() const {
        return uav_f_est_hz > 0.0 ? uav_f_est_hz : uav_f_max_hz;
    }

    MobilityConfig mobility() const {
        MobilityConfig m;
        m.mu1 = mu1;
        m.mu2 = mu2;
        m.v_bar = mean_speed_mps;
        m.lambda_mean = lambda_mean;
        m.lambda_std = lambda_std;
        m.gamma_mean = gamma_mean;
        m.gamma_std = gamma_std;
        m.region_w = region_w_m;
        m.region_h = region_h_m;
        m.literal_direction_update = literal_eq7;
        return m;
    }

    void validate() const;
};

namespace detail {

struct DoubleField {
    const char* key;
    double ScenarioConfig::*member;
};
struct IntField {
    const char* key;
    int ScenarioConfig::*member;
};
struct BoolField {
    const char* key;
    bool ScenarioConfig::*member;
};

inline const std::vector<DoubleField>& double_fields() {
    static const std::vector<DoubleField> f = {
        {"slot_len_s", &ScenarioConfig::slot_len_s},
        {"slot_share_s", &ScenarioConfig::slot_share_s},
        {"uav_alt_m", &ScenarioConfig::uav_alt_m},
        {"bandwidth_hz", &ScenarioConfig::bandwidth_hz},
        {"noise_w", &ScenarioConfig::noise_w},
        {"beta0_db", &ScenarioConfig::beta0_db},
        {"uav_fly_power_w", &ScenarioConfig::uav_fly_power_w},
        {"uav_hover_power_w", &ScenarioConfig::uav_hover_power_w},
        {"uav_speed_mps", &ScenarioConfig::uav_speed_mps},
        {"region_w_m", &ScenarioConfig::region_w_m},
        {"region_h_m", &ScenarioConfig::region_h_m},
        {"bs_x_m", &ScenarioConfig::bs_x_m},
        {"bs_y_m", &ScenarioConfig::bs_y_m},
        {"mtu_f_max_hz", &ScenarioConfig::mtu_f_max_hz},
        {"device_f_max_hz", &ScenarioConfig::device_f_max_hz},
        {"uav_f_max_hz", &ScenarioConfig::uav_f_max_hz},
        {"mtu_f_est_hz", &ScenarioConfig::mtu_f_est_hz},
        {"device_f_est_hz", &ScenarioConfig::device_f_est_hz},
        {"uav_f_est_hz", &ScenarioConfig::uav_f_est_hz},
        {"mtu_kappa", &ScenarioConfig::mtu_kappa},
        {"device_kappa", &ScenarioConfig::device_kappa},
        {"uav_kappa", &ScenarioConfig::uav_kappa},
        {"mtu_p_max_w", &ScenarioConfig::mtu_p_max_w},
        {"uav_p_max_w", &ScenarioConfig::uav_p_max_w},
        {"mtu_energy_budget_j", &ScenarioConfig::mtu_energy_budget_j},
        {"device_energy_budget_j", &ScenarioConfig::device_energy_budget_j},
        {"uav_energy_budget_j", &ScenarioConfig::uav_energy_budget_j},
        {"task_bits_min", &ScenarioConfig::task_bits_min},
        {"task_bits_max", &ScenarioConfig::task_bits_max},
        {"cycles_per_bit", &ScenarioConfig::cycles_per_bit},
        {"deadline_min_frac", &ScenarioConfig::deadline_min_frac},
        {"deadline_max_frac", &ScenarioConfig::deadline_max_frac},
        {"mtu_deviation_delta", &ScenarioConfig::mtu_deviation_delta},
        {"server_deviation_delta", &ScenarioConfig::server_deviation_delta},
        {"mu1", &ScenarioConfig::mu1},
        {"mu2", &ScenarioConfig::mu2},
        {"mean_speed_mps", &ScenarioConfig::mean_speed_mps},
        {"lambda_mean", &ScenarioConfig::lambda_mean},
        {"lambda_std", &ScenarioConfig::lambda_std},
        {"gamma_mean", &ScenarioConfig::gamma_mean},
        {"gamma_std", &ScenarioConfig::gamma_std},
        {"penalty_j", &ScenarioConfig::penalty_j},
        {"reward_scale", &ScenarioConfig::reward_scale},
        {"epsilon_init", &ScenarioConfig::epsilon_init},
        {"epsilon_decrement", &ScenarioConfig::epsilon_decrement},
        {"epsilon_floor", &ScenarioConfig::epsilon_floor},
        {"discount", &ScenarioConfig::discount},
        {"learning_rate", &ScenarioConfig::learning_rate},
        {"joint_threshold", &ScenarioConfig::joint_threshold},
        {"joint_init_power_frac", &ScenarioConfig::joint_init_power_frac},
    };
    return f;
}

inline const std::vector<IntField>& int_fields() {
    static const std::vector<IntField> f = {
        {"mtu_count", &ScenarioConfig::mtu_count},
        {"device_count", &ScenarioConfig::device_count},
        {"fhp_count", &ScenarioConfig::fhp_count},
        {"slot_count", &ScenarioConfig::slot_count},
        {"uav_initial_fhp", &ScenarioConfig::uav_initial_fhp},
        {"batch_size", &ScenarioConfig::batch_size},
        {"replay_capacity", &ScenarioConfig::replay_capacity},
        {"target_sync_interval", &ScenarioConfig::target_sync_interval},
        {"episodes", &ScenarioConfig::episodes},
        {"train_interval", &ScenarioConfig::train_interval},
        {"eval_episodes", &ScenarioConfig::eval_episodes},
        {"joint_max_iters", &ScenarioConfig::joint_max_iters},
    };
    return f;
}

inline const std::vector<BoolField>& bool_fields() {
    static const std::vector<BoolField> f = {
        {"uav_single_fhp_per_slot", &ScenarioConfig::uav_single_fhp_per_slot},
        {"deviation_positive", &ScenarioConfig::deviation_positive},
        {"literal_eq7", &ScenarioConfig::literal_eq7},
        {"transition_per_slot", &ScenarioConfig::transition_per_slot},
        {"retrain_policy", &ScenarioConfig::retrain_policy},
    };
    return f;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + v + "'");
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

inline void ScenarioConfig::validate() const {
    require(mtu_count >= 1, "mtu_count must be >= 1");
    require(device_count >= 1, "device_count must be >= 1");
    require(fhp_count >= 1, "fhp_count must be >= 1");
    require(slot_count >= 1, "slot_count must be >= 1");
    require(slot_len_s > 0.0, "slot_len_s must be positive");
    require(slot_share_s >= 0.0, "slot_share_s must be >= 0");
    require(mtu_count * slot_share() <= slot_len_s * (1.0 + 1e-12),
            "slot_share_s: per-MTU durations exceed the slot length");
    require(uav_alt_m > 0.0, "uav_alt_m must be positive");
    require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(noise_w > 0.0, "noise_w must be positive");
    require(std::isfinite(beta0_db), "beta0_db must be finite");
    require(uav_fly_power_w > 0.0, "uav_fly_power_w must be positive");
    require(uav_hover_power_w > 0.0, "uav_hover_power_w must be positive");
    require(uav_speed_mps > 0.0, "uav_speed_mps must be positive");
    require(uav_initial_fhp >= 0 && uav_initial_fhp < fhp_count,
            "uav_initial_fhp must index an FHP");
    require(region_w_m > 0.0 && region_h_m > 0.0,
            "region_w_m/region_h_m must be positive");
    const bool bs_inside = bs_x_m >= 0.0 && bs_x_m <= region_w_m &&
                           bs_y_m >= 0.0 && bs_y_m <= region_h_m;
    require(!bs_inside, "bs_x_m/bs_y_m: BS must lie outside the region");
    require(mtu_f_max_hz > 0.0, "mtu_f_max_hz must be positive");
    require(device_f_max_hz > 0.0, "device_f_max_hz must be positive");
    require(uav_f_max_hz > 0.0, "uav_f_max_hz must be positive");
    require(mtu_f_est_hz >= 0.0 && mtu_f_est_hz <= mtu_f_max_hz,
            "mtu_f_est_hz must lie in [0, mtu_f_max_hz]");
    require(device_f_est_hz >= 0.0 && device_f_est_hz <= device_f_max_hz,
            "device_f_est_hz must lie in [0, device_f_max_hz]");
    require(uav_f_est_hz >= 0.0 && uav_f_est_hz <= uav_f_max_hz,
            "uav_f_est_hz must lie in [0, uav_f_max_hz]");
    require(mtu_kappa > 0.0, "mtu_kappa must be positive");
    require(device_kappa > 0.0, "device_kappa must be positive");
    require(uav_kappa > 0.0, "uav_kappa must be positive");
    require(mtu_p_max_w > 0.0, "mtu_p_max_w must be positive");
    require(uav_p_max_w > 0.0, "uav_p_max_w must be positive");
    require(mtu_energy_budget_j > 0.0, "mtu_energy_budget_j must be positive");
    require(device_energy_budget_j > 0.0,
            "device_energy_budget_j must be positive");
    require(uav_energy_budget_j > 0.0, "uav_energy_budget_j must be positive");
    require(task_bits_min > 0.0 && task_bits_max >= task_bits_min,
            "task_bits_min/task_bits_max must satisfy 0 < min <= max");
    require(cycles_per_bit > 0.0, "cycles_per_bit must be positive");
    require(deadline_min_frac > 0.0, "deadline_min_frac must be positive");
    require(deadline_max_frac >= deadline_min_frac,
            "deadline_max_frac must be >= deadline_min_frac");
    require(deadline_max_frac <= 1.0,
            "deadline_max_frac: deadlines may not exceed the TDMA share");
    require(mtu_deviation_delta >= 0.0 && mtu_deviation_delta < 1.0,
            "mtu_deviation_delta must lie in [0, 1)");
    require(server_deviation_delta >= 0.0 && server_deviation_delta < 1.0,
            "server_deviation_delta must lie in [0, 1)");
    require(mu1 >= 0.0 && mu1 <= 1.0, "mu1 must lie in [0, 1]");
    require(mu2 >= 0.0 && mu2 <= 1.0, "mu2 must lie in [0, 1]");
    require(mean_speed_mps >= 0.0, "mean_speed_mps must be >= 0");
    require(lambda_std >= 0.0, "lambda_std must be >= 0");
    require(gamma_std >= 0.0, "gamma_std must be >= 0");
    require(penalty_j > 0.0, "penalty_j must be positive");
    require(reward_scale > 0.0, "reward_scale must be positive");
    require(epsilon_init >= 0.0 && epsilon_init <= 1.0,
            "epsilon_init must lie in [0, 1]");
    require(epsilon_decrement >= 0.0, "epsilon_decrement must be >= 0");
    require(epsilon_floor >= 0.0 && epsilon_floor <= epsilon_init,
            "epsilon_floor must lie in [0, epsilon_init]");
    require(discount >= 0.0 && discount <= 1.0,
            "discount must lie in [0, 1]");
    require(learning_rate > 0.0 && learning_rate <= 1.0,
            "learning_rate must lie in (0, 1]");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(replay_capacity >= batch_size,
            "replay_capacity must be >= batch_size");
    require(target_sync_interval >= 1, "target_sync_interval must be >= 1");
    require(episodes >= 1, "episodes must be >= 1");
    require(train_interval >= 1, "train_interval must be >= 1");
    require(eval_episodes >= 1, "eval_episodes must be >= 1");
    require(!hidden_sizes.empty(), "hidden_sizes must not be empty");
    for (int h : hidden_sizes)
        require(h >= 1, "hidden_sizes entries must be >= 1");
    require(joint_threshold > 0.0, "joint_threshold must be positive");
    require(joint_max_iters >= 1, "joint_max_iters must be >= 1");
    require(joint_init_power_frac > 0.0 && joint_init_power_frac <= 1.0,
            "joint_init_power_frac must lie in (0, 1]");
}

inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) +
                              ": empty key or value");
        if (!seen.insert(key).second)
            throw ConfigError("duplicate key: " + key);

        bool matched = false;
        for (const auto& f : detail::double_fields()) {
            if (key == f.key) {
                cfg.*f.member = detail::parse_double(key, value);
                matched = true;
                break;
            }
        }
        if (!matched) {
            for (const auto& f : detail::int_fields()) {
                if (key == f.key) {
                    cfg.*f.member =
                        static_cast<int>(detail::parse_int(key, value));
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) {
            for (const auto& f : detail::bool_fields()) {
                if (key == f.key) {
                    cfg.*f.member = detail::parse_bool(key, value);
                    matched = true;
                    break;
                }
            }
        }
        if (!matched && key == "seed") {
            cfg.seed =
                static_cast<std::uint64_t>(detail::parse_int(key, value));
            matched = true;
        }
        if (!matched && key == "hidden_sizes") {
            cfg.hidden_sizes.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                cfg.hidden_sizes.push_back(static_cast<int>(
                    detail::parse_int(key, detail::trim(item))));
            }
            matched = true;
        }
        if (!matched) throw ConfigError("unknown key: " + key);
    }
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    return parse_config(in);
}

// Emits every key; reparsing the output reproduces the config exactly.
inline std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    for (const auto& f : detail::int_fields())
        out << f.key << " = " << cfg.*f.member << "\n";
    for (const auto& f : detail::double_fields())
        out << f.key << " = " << detail::format_double(cfg.*f.member) << "\n";
    for (const auto& f : detail::bool_fields())
        out << f.key << " = " << (cfg.*f.member ? "true" : "false") << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "hidden_sizes = ";
    for (std::size_t i = 0; i < cfg.hidden_sizes.size(); ++i) {
        if (i > 0) out << ",";
        out << cfg.hidden_sizes[i];
    }
    out << "\n";
    return out.str();
}

} // namespace dtmec
