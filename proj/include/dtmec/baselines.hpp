#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtmec/ddqn.hpp"
#include "dtmec/joint.hpp"
#include "dtmec/policy.hpp"

namespace dtmec {

// The proposed design plus the five benchmark schemes.
enum class DesignId { Proposed, Dqn, NoFOpt, LocalOnly, GreedyDevices, NoDt };

inline const std::vector<std::pair<DesignId, const char*>>& design_table() {
    static const std::vector<std::pair<DesignId, const char*>> t = {
        {DesignId::Proposed, "proposed"},
        {DesignId::Dqn, "dqn"},
        {DesignId::NoFOpt, "no_f_opt"},
        {DesignId::LocalOnly, "local_only"},
        {DesignId::GreedyDevices, "greedy_devices"},
        {DesignId::NoDt, "no_dt"},
    };
    return t;
}

inline std::string design_name(DesignId id) {
    for (const auto& [d, name] : design_table())
        if (d == id) return name;
    throw ModelError("unknown design id");
}

inline std::optional<DesignId> parse_design(const std::string& name) {
    for (const auto& [d, n] : design_table())
        if (name == n) return d;
    return std::nullopt;
}

inline bool design_trains(DesignId id) {
    return id == DesignId::Proposed || id == DesignId::Dqn ||
           id == DesignId::NoFOpt || id == DesignId::NoDt;
}

inline PlanOptions design_plan(DesignId id) {
    PlanOptions plan;
    if (id == DesignId::NoFOpt) plan.optimize_frequency = false;
    if (id == DesignId::NoDt) plan.use_deviation = false;
    return plan;
}

inline TrainConfig train_config_from(const ScenarioConfig& cfg) {
    TrainConfig tc;
    tc.epsilon_init = cfg.epsilon_init;
    tc.epsilon_decrement = cfg.epsilon_decrement;
    tc.epsilon_floor = cfg.epsilon_floor;
    tc.discount = cfg.discount;
    tc.learning_rate = cfg.learning_rate;
    tc.batch_size = cfg.batch_size;
    tc.replay_capacity = cfg.replay_capacity;
    tc.target_sync_interval = cfg.target_sync_interval;
    tc.episodes = cfg.episodes;
    tc.train_interval = cfg.train_interval;
    tc.transition_per_slot = cfg.transition_per_slot;
    tc.hidden_sizes = cfg.hidden_sizes;
    return tc;
}

struct DesignMetrics {
    double total_energy = 0.0;
    double mtu_energy = 0.0;
    double uav_energy = 0.0;
    double violations = 0.0; // mean over evaluation episodes
};

struct DesignRun {
    DesignId id = DesignId::Proposed;
    DesignMetrics metrics;
    std::vector<EpisodeStats> curve;           // empty for untrained designs
    std::vector<ConvergenceRow> convergence;   // first evaluation episode
    std::vector<TraceRecord> eval_trace;       // first evaluation episode
    std::optional<Mlp> policy;
    long gradient_steps = 0;
};

// Trains (where the design calls for it), rolls out greedy evaluation
// episodes, and refines each episode's powers and frequencies with the
// alternating optimizer. Metrics are means over the evaluation episodes.
inline DesignRun run_design(DesignId id, const ScenarioConfig& cfg,
                            const WorldLayout& world) {
    const PlanOptions plan = design_plan(id);
    Environment env(cfg, world, plan);

    DesignRun run;
    run.id = id;

    Policy policy;
    if (id == DesignId::LocalOnly) {
        policy = local_only_policy();
    } else if (id == DesignId::GreedyDevices) {
        policy = nearest_device_policy();
    } else {
        const TargetRule rule =
            id == DesignId::Dqn ? TargetRule::Dqn : TargetRule::Ddqn;
        RngStream agent_rng(derive_seed(cfg.seed, 0xa6e77));
        const int rounds = cfg.retrain_policy ? 2 : 1;
        TrainResult trained;
        for (int round = 0; round < rounds; ++round)
            trained = train(env, train_config_from(cfg), rule, agent_rng);
        run.curve = std::move(trained.curve);
        run.gradient_steps = trained.gradient_steps;
        run.policy = std::move(trained.policy);
        policy = greedy_policy(*run.policy);
    }

    JointConfig jc;
    jc.threshold = cfg.joint_threshold;
    jc.max_iterations = cfg.joint_max_iters;
    jc.init_power_frac = cfg.joint_init_power_frac;
    jc.plan = plan;

    for (int e = 0; e < cfg.eval_episodes; ++e) {
        const int episode = cfg.episodes + e; // fresh seeds past training
        const EpisodeRollout rollout = rollout_episode(env, episode, policy);
        const JointResult joint = alternate(rollout.trace, cfg, jc);
        run.metrics.total_energy += joint.totals.total_energy;
        run.metrics.mtu_energy += joint.totals.mtu_energy;
        run.metrics.uav_energy += joint.totals.uav_energy;
        run.metrics.violations += joint.totals.violations();
        if (e == 0) {
            run.convergence = joint.log;
            run.eval_trace = rollout.trace;
        }
    }
    const double n = cfg.eval_episodes;
    run.metrics.total_energy /= n;
    run.metrics.mtu_energy /= n;
    run.metrics.uav_energy /= n;
    run.metrics.violations /= n;
    return run;
}

} // namespace dtmec
