#pragma once

#include <algorithm>
#include <vector>

#include "dtmec/allocator.hpp"
#include "dtmec/config.hpp"
#include "dtmec/mobility.hpp"
#include "dtmec/world.hpp"

namespace dtmec {

struct RewardConfig {
    double penalty_j = 50.0; // charged per violated constraint
    double scale = 10.0;     // rewards handed to the learner are divided
};

// One (slot, MTU) decision with everything needed to re-derive its
// allocation later: the alternating optimizer re-plans powers and
// frequencies against these frozen contexts.
struct TraceRecord {
    int slot = 0;
    int mtu = 0;
    int action = 0;
    TaskContext ctx;
    Allocation alloc;
    ModeOutcome outcome;
    int violations = 0;
    double reward = 0.0;
};

struct TrajectoryRow {
    int slot = 0;
    int mtu = 0;
    double x = 0.0;
    double y = 0.0;
    double v = 0.0;
    double theta = 0.0;
};

struct EvalTotals {
    double total_energy = 0.0; // objective: sum of task energies
    double mtu_energy = 0.0;
    double uav_energy = 0.0;    // fly + hover + UAV compute + relay hop 2
    double device_energy = 0.0;
    double idle_hover_energy = 0.0; // budget-relevant, outside the objective
    int deadline_violations = 0;
    int budget_violations = 0;
    int violations() const { return deadline_violations + budget_violations; }
};

// Discrete-time MDP over the scenario: per slot, MTUs act in TDMA order;
// the UAV flies between consecutively chosen hover points; mobility advances
// between slots. Episodes run exactly slot_count slots.
class Environment {
  public:
    struct StepOutcome {
        double reward = 0.0;
        bool done = false;     // episode boundary
        bool terminal = false; // no future value beyond this transition
    };

    Environment(ScenarioConfig cfg, WorldLayout world, PlanOptions plan)
        : cfg_(std::move(cfg)), world_(std::move(world)), plan_(plan),
          mobility_cfg_(cfg_.mobility()) {}

    const ScenarioConfig& config() const { return cfg_; }
    const WorldLayout& world() const { return world_; }

    int action_count() const {
        return action_cardinality(cfg_.device_count, cfg_.fhp_count);
    }
    int steps_per_slot() const { return cfg_.mtu_count; }
    // The acting MTU's position and task lead the vector (5 entries), then
    // the UAV position (2), every MTU's position (2M) and task triple (3M),
    // the acting-MTU one-hot (M), and the remaining budgets (M + K + 1):
    // 7M + K + 8 entries, all in [0, 1].
    int observation_size() const {
        return 7 * cfg_.mtu_count + cfg_.device_count + 8;
    }

    void reset(int episode) {
        episode_ = episode;
        RngStream init(derive_seed(cfg_.seed, 0xe9150000ULL + episode));
        kin_.resize(cfg_.mtu_count);
        for (int m = 0; m < cfg_.mtu_count; ++m) {
            kin_[m].location = {init.uniform(0.0, cfg_.region_w_m),
                                init.uniform(0.0, cfg_.region_h_m), 0.0};
            kin_[m].v = cfg_.mean_speed_mps;
            kin_[m].theta = world_.theta_bar[m];
        }
        tasks_ = generate_tasks(cfg_, init);
        deviations_ = sample_deviations(cfg_, init);
        mobility_rng_ = RngStream(derive_seed(cfg_.seed, 0x30b000ULL + episode));
        uav_pos_ = world_.fhps[cfg_.uav_initial_fhp];
        slot_ = 0;
        acting_ = 0;
        slot_fhp_ = -1;
        done_ = false;
        budget_mtu_.assign(cfg_.mtu_count, cfg_.mtu_energy_budget_j);
        budget_device_.assign(cfg_.device_count, cfg_.device_energy_budget_j);
        budget_uav_ = cfg_.uav_energy_budget_j;
        trace_.clear();
        trajectory_.clear();
        record_trajectory();
        idle_hover_energy_ = 0.0;
        encode_observation();
    }

    const std::vector<double>& observation() const { return obs_; }

    bool done() const { return done_; }
    int slot() const { return slot_; }
    int acting_mtu() const { return acting_; }
    Location acting_mtu_location() const { return kin_[acting_].location; }
    Location uav_location() const { return uav_pos_; }
    double remaining_uav_budget() const { return budget_uav_; }
    const std::vector<TraceRecord>& trace() const { return trace_; }
    const std::vector<TrajectoryRow>& trajectory() const {
        return trajectory_;
    }
    double idle_hover_energy() const { return idle_hover_energy_; }
    const TraceRecord& last_record() const { return trace_.back(); }
    RewardConfig reward_config() const {
        return RewardConfig{cfg_.penalty_j, cfg_.reward_scale};
    }

    StepOutcome apply(int action) {
        if (done_) throw ModelError("apply after episode end");
        const int m = acting_;
        const OffloadDecision decision = OffloadDecision::from_action(
            action, cfg_.device_count, cfg_.fhp_count);

        TraceRecord rec;
        rec.slot = slot_;
        rec.mtu = m;
        rec.action = action;
        rec.ctx = make_context(m, decision);
        rec.alloc = allocate_task(rec.ctx, plan_);
        rec.outcome = evaluate_mode(rec.ctx, rec.alloc);

        if (!rec.outcome.deadline_met) ++rec.violations;
        charge_budgets(rec);
        if (decision.mode == Mode::UavCompute) {
            uav_pos_ = used_fhp_location(decision.fhp);
            if (cfg_.uav_single_fhp_per_slot && slot_fhp_ < 0)
                slot_fhp_ = used_fhp_index(decision.fhp);
        } else {
            // The UAV idles through this duration (44n's idle-hover term).
            const double idle = cfg_.uav_hover_power_w * cfg_.slot_share();
            idle_hover_energy_ += idle;
            deduct(budget_uav_, idle, rec.violations);
        }

        rec.reward = -(rec.outcome.total_energy +
                       cfg_.penalty_j * rec.violations) /
                     cfg_.reward_scale;
        trace_.push_back(rec);

        StepOutcome out;
        out.reward = rec.reward;
        if (++acting_ == cfg_.mtu_count) {
            acting_ = 0;
            slot_fhp_ = -1;
            advance_slot();
        }
        encode_observation();
        out.done = done_;
        // The horizon is part of the objective: no value lies beyond slot N.
        out.terminal = done_;
        return out;
    }

    // Joint-action convenience: all M decisions of one slot in TDMA order.
    StepOutcome step(const std::vector<int>& joint_action) {
        if (static_cast<int>(joint_action.size()) != cfg_.mtu_count)
            throw ModelError("joint action must list one action per MTU");
        if (acting_ != 0) throw ModelError("step mid-slot");
        StepOutcome total;
        for (int a : joint_action) {
            const StepOutcome o = apply(a);
            total.reward += o.reward;
            total.done = o.done;
        }
        return total;
    }

    // Frozen per-task planning context for the acting MTU under `decision`.
    TaskContext make_context(int m, const OffloadDecision& decision) const {
        TaskContext ctx;
        ctx.mode = decision.mode;
        ctx.task = tasks_.at(m, slot_);
        ctx.mtu = m;
        ctx.slot = slot_;
        ctx.bandwidth_hz = cfg_.bandwidth_hz;
        ctx.noise_w = cfg_.noise_w;
        ctx.fly_power_w = cfg_.uav_fly_power_w;
        ctx.hover_power_w = cfg_.uav_hover_power_w;
        ctx.uav_speed_mps = cfg_.uav_speed_mps;
        ctx.p_max_mtu = cfg_.mtu_p_max_w;
        ctx.p_max_uav = cfg_.uav_p_max_w;
        const Location& mtu_pos = kin_[m].location;
        const double beta0 = cfg_.beta0();
        switch (decision.mode) {
        case Mode::Local:
            ctx.kappa_exec = cfg_.mtu_kappa;
            ctx.f_dev_exec = deviations_.mtu[m];
            ctx.f_max_exec = cfg_.mtu_f_max_hz;
            ctx.f_est_exec = cfg_.mtu_f_est();
            break;
        case Mode::Device: {
            ctx.device = decision.device;
            ctx.kappa_exec = cfg_.device_kappa;
            ctx.f_dev_exec = deviations_.device[decision.device];
            ctx.f_max_exec = cfg_.device_f_max_hz;
            ctx.f_est_exec = cfg_.device_f_est();
            ctx.gain1 = channel_gain(
                link_distance(mtu_pos, world_.devices[decision.device]),
                beta0);
            break;
        }
        case Mode::UavCompute: {
            const Location target = used_fhp_location(decision.fhp);
            ctx.kappa_exec = cfg_.uav_kappa;
            ctx.f_dev_exec = deviations_.uav;
            ctx.f_max_exec = cfg_.uav_f_max_hz;
            ctx.f_est_exec = cfg_.uav_f_est();
            ctx.gain1 = channel_gain(link_distance(mtu_pos, target), beta0);
            ctx.fly_dist_m = horizontal_distance(uav_pos_, target);
            break;
        }
        case Mode::BsRelay:
            // Relay uses the UAV where it currently hovers; BS execution is
            // external, so no compute-side parameters apply.
            ctx.f_dev_exec = 0.0;
            ctx.f_max_exec = 1.0;
            ctx.f_est_exec = 1.0;
            ctx.kappa_exec = 1e-30;
            ctx.gain1 = channel_gain(link_distance(mtu_pos, uav_pos_), beta0);
            ctx.gain2 =
                channel_gain(link_distance(uav_pos_, world_.bs), beta0);
            break;
        }
        return ctx;
    }

  private:
    void deduct(double& budget, double amount, int& violations) {
        budget -= amount;
        if (budget < 0.0) ++violations;
    }

    void charge_budgets(TraceRecord& rec) {
        const Mode mode = rec.ctx.mode;
        deduct(budget_mtu_[rec.mtu], rec.outcome.mtu_energy, rec.violations);
        if (mode == Mode::Device)
            deduct(budget_device_[rec.ctx.device], rec.outcome.server_energy,
                   rec.violations);
        if (mode == Mode::UavCompute || mode == Mode::BsRelay) {
            const double uav_share = rec.outcome.server_energy +
                                     rec.outcome.uav_fly_energy +
                                     rec.outcome.uav_hover_energy;
            deduct(budget_uav_, uav_share, rec.violations);
        }
    }

    int used_fhp_index(int requested) const {
        if (cfg_.uav_single_fhp_per_slot && slot_fhp_ >= 0) return slot_fhp_;
        return requested;
    }
    Location used_fhp_location(int requested) const {
        return world_.fhps[used_fhp_index(requested)];
    }

    void advance_slot() {
        for (int m = 0; m < cfg_.mtu_count; ++m)
            advance_mobility(kin_[m], world_.theta_bar[m], cfg_.slot_share(),
                             mobility_cfg_, mobility_rng_);
        if (++slot_ >= cfg_.slot_count) {
            done_ = true;
        } else {
            record_trajectory();
        }
    }

    void record_trajectory() {
        for (int m = 0; m < cfg_.mtu_count; ++m)
            trajectory_.push_back({slot_, m, kin_[m].location.x,
                                   kin_[m].location.y, kin_[m].v,
                                   kin_[m].theta});
    }

    void encode_observation() {
        obs_.assign(static_cast<std::size_t>(observation_size()), 0.0);
        std::size_t i = 0;
        const auto clamp01 = [](double v) {
            return std::clamp(v, 0.0, 1.0);
        };
        const int slot_for_tasks = done_ ? cfg_.slot_count - 1 : slot_;
        const auto encode_task = [&](const TaskSpec& t) {
            obs_[i++] = clamp01(t.data_bits / cfg_.task_bits_max);
            obs_[i++] = clamp01(t.cycles_per_bit / cfg_.cycles_per_bit);
            obs_[i++] = clamp01(t.deadline_s / cfg_.slot_share());
        };
        // Acting MTU first: its position and task carry the decision.
        obs_[i++] = clamp01(kin_[acting_].location.x / cfg_.region_w_m);
        obs_[i++] = clamp01(kin_[acting_].location.y / cfg_.region_h_m);
        encode_task(tasks_.at(acting_, slot_for_tasks));
        obs_[i++] = clamp01(uav_pos_.x / cfg_.region_w_m);
        obs_[i++] = clamp01(uav_pos_.y / cfg_.region_h_m);
        for (const auto& k : kin_) {
            obs_[i++] = clamp01(k.location.x / cfg_.region_w_m);
            obs_[i++] = clamp01(k.location.y / cfg_.region_h_m);
        }
        for (int m = 0; m < cfg_.mtu_count; ++m)
            encode_task(tasks_.at(m, slot_for_tasks));
        for (int m = 0; m < cfg_.mtu_count; ++m)
            obs_[i + m] = m == acting_ ? 1.0 : 0.0;
        i += cfg_.mtu_count;
        for (int m = 0; m < cfg_.mtu_count; ++m)
            obs_[i++] = clamp01(budget_mtu_[m] / cfg_.mtu_energy_budget_j);
        for (int k = 0; k < cfg_.device_count; ++k)
            obs_[i++] =
                clamp01(budget_device_[k] / cfg_.device_energy_budget_j);
        obs_[i++] = clamp01(budget_uav_ / cfg_.uav_energy_budget_j);
    }

    ScenarioConfig cfg_;
    WorldLayout world_;
    PlanOptions plan_;
    MobilityConfig mobility_cfg_;

    int episode_ = 0;
    std::vector<MtuKinematics> kin_;
    TaskTable tasks_;
    DeviationDraw deviations_;
    RngStream mobility_rng_;
    Location uav_pos_;
    int slot_ = 0;
    int acting_ = 0;
    int slot_fhp_ = -1;
    bool done_ = false;
    std::vector<double> budget_mtu_;
    std::vector<double> budget_device_;
    double budget_uav_ = 0.0;
    std::vector<TraceRecord> trace_;
    std::vector<TrajectoryRow> trajectory_;
    double idle_hover_energy_ = 0.0;
    std::vector<double> obs_;
};

// Re-evaluates a frozen trace under (possibly re-planned) allocations and
// recomputes budget violations from scratch (the ex-post check of the
// cumulative constraints).
inline EvalTotals evaluate_trace(const std::vector<TraceRecord>& trace,
                                 const std::vector<Allocation>& allocs,
                                 const ScenarioConfig& cfg) {
    if (trace.size() != allocs.size())
        throw ModelError("trace/allocation size mismatch");
    EvalTotals totals;
    std::vector<double> budget_mtu(cfg.mtu_count, cfg.mtu_energy_budget_j);
    std::vector<double> budget_device(cfg.device_count,
                                      cfg.device_energy_budget_j);
    double budget_uav = cfg.uav_energy_budget_j;
    const auto deduct = [&totals](double& budget, double amount) {
        budget -= amount;
        if (budget < 0.0) ++totals.budget_violations;
    };
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceRecord& rec = trace[i];
        const ModeOutcome out = evaluate_mode(rec.ctx, allocs[i]);
        totals.total_energy += out.total_energy;
        totals.mtu_energy += out.mtu_energy;
        if (!out.deadline_met) ++totals.deadline_violations;
        deduct(budget_mtu[rec.mtu], out.mtu_energy);
        switch (rec.ctx.mode) {
        case Mode::Local:
            break;
        case Mode::Device:
            totals.device_energy += out.server_energy;
            deduct(budget_device[rec.ctx.device], out.server_energy);
            break;
        case Mode::UavCompute:
        case Mode::BsRelay: {
            const double uav_share = out.server_energy + out.uav_fly_energy +
                                     out.uav_hover_energy;
            totals.uav_energy += uav_share;
            deduct(budget_uav, uav_share);
            break;
        }
        }
        if (rec.ctx.mode == Mode::Local || rec.ctx.mode == Mode::Device) {
            const double idle = cfg.uav_hover_power_w * cfg.slot_share();
            totals.idle_hover_energy += idle;
            deduct(budget_uav, idle);
        }
    }
    return totals;
}

} // namespace dtmec
