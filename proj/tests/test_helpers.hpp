#pragma once

#include "dtmec/config.hpp"

namespace dtmec::testing {

// Small scenario that keeps training tests fast while exercising every mode.
inline ScenarioConfig tiny_config() {
    ScenarioConfig cfg;
    cfg.mtu_count = 2;
    cfg.device_count = 2;
    cfg.fhp_count = 2;
    cfg.slot_count = 10;
    cfg.slot_len_s = 2.0;
    cfg.region_w_m = 600.0;
    cfg.region_h_m = 600.0;
    cfg.bs_x_m = 1000.0;
    cfg.bs_y_m = 300.0;
    cfg.task_bits_min = 2e7;
    cfg.task_bits_max = 6e7;
    cfg.cycles_per_bit = 30.0;
    cfg.mtu_energy_budget_j = 1e4;
    cfg.device_energy_budget_j = 1e4;
    cfg.uav_energy_budget_j = 20.0;
    cfg.penalty_j = 500.0;
    cfg.reward_scale = 100.0;
    cfg.epsilon_decrement = 1e-3;
    cfg.batch_size = 16;
    cfg.replay_capacity = 200;
    cfg.target_sync_interval = 100;
    cfg.episodes = 60;
    cfg.eval_episodes = 2;
    cfg.hidden_sizes = {24, 24};
    cfg.seed = 7;
    cfg.validate();
    return cfg;
}

} // namespace dtmec::testing
