#pragma once

#include <span>
#include <vector>

#include "dtmec/mlp.hpp"
#include "dtmec/replay.hpp"
#include "dtmec/rng.hpp"

namespace dtmec {

enum class TargetRule { Ddqn, Dqn };

struct TrainConfig {
    double epsilon_init = 0.95;
    double epsilon_decrement = 1e-4; // subtracted once per slot
    double epsilon_floor = 0.01;
    double discount = 0.9;
    double learning_rate = 1e-3;
    int batch_size = 32;
    int replay_capacity = 2400;
    int target_sync_interval = 200; // in gradient steps
    int episodes = 300;
    int train_interval = 1; // slots between gradient steps
    bool transition_per_slot = false;
    std::vector<int> hidden_sizes = {48, 48};
};

inline int select_action(const Mlp& net, std::span<const double> obs,
                         double epsilon, RngStream& rng) {
    if (rng.uniform01() < epsilon)
        return static_cast<int>(rng.below(net.output_size()));
    return argmax_lowest(net.forward(obs));
}

// r + w * Q2(s', argmax_a Q1(s', a)); the predicted network selects, the
// target network evaluates.
inline double ddqn_target(double reward, std::span<const double> next_state,
                          bool done, const Mlp& predicted, const Mlp& target,
                          double discount) {
    if (done) return reward;
    const int a = argmax_lowest(predicted.forward(next_state));
    return reward + discount * target.forward(next_state)[a];
}

// r + w * max_a Q2(s', a); selection and evaluation share the target net.
inline double dqn_target(double reward, std::span<const double> next_state,
                         bool done, const Mlp& target, double discount) {
    if (done) return reward;
    const std::vector<double> q = target.forward(next_state);
    return reward + discount * q[argmax_lowest(q)];
}

// One minibatch of mean-squared-error gradient descent on the predicted
// network. Only the taken action's output carries gradient per sample.
inline double train_step(Mlp& predicted, const Mlp& target,
                         std::span<const Transition* const> batch,
                         double learning_rate, double discount,
                         TargetRule rule) {
    if (batch.empty()) throw ModelError("train_step: empty batch");
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    predicted.zero_gradients();
    Mlp::Workspace ws;
    std::vector<double> d_out(static_cast<std::size_t>(predicted.output_size()));
    double loss = 0.0;
    for (const Transition* t : batch) {
        const double y =
            rule == TargetRule::Ddqn
                ? ddqn_target(t->reward, t->next_state, t->done, predicted,
                              target, discount)
                : dqn_target(t->reward, t->next_state, t->done, target,
                             discount);
        const std::vector<double>& q = predicted.forward_cached(t->state, ws);
        const double err = q[t->action] - y;
        loss += err * err * inv_n;
        std::fill(d_out.begin(), d_out.end(), 0.0);
        d_out[t->action] = 2.0 * err * inv_n;
        predicted.backward(ws, d_out);
    }
    predicted.gradient_step(learning_rate);
    return loss;
}

inline void sync_target(const Mlp& predicted, Mlp& target) {
    target = predicted;
}

struct EpisodeStats {
    int episode = 0;
    double total_reward = 0.0;
    double epsilon = 0.0;
    double mean_loss = 0.0;
};

struct TrainResult {
    Mlp policy;
    std::vector<EpisodeStats> curve;
    long gradient_steps = 0;
};

// Experience-replay training loop. The environment models one episode as
// `slots_per_episode` slots of `steps_per_slot` sub-decisions; epsilon is
// decremented once per slot and one minibatch is drawn per train_interval
// slots once the memory is full.
//
// Env requirements:
//   void reset(int episode);
//   const std::vector<double>& observation() const;
//   int observation_size() const;  int action_count() const;
//   int steps_per_slot() const;
//   struct { double reward; bool done; bool terminal; } apply(int action);
// `done` closes the episode; `terminal` marks transitions with no future
// value (a truncated horizon keeps bootstrapping, a terminal one does not).
template <typename Env>
TrainResult train(Env& env, const TrainConfig& cfg, TargetRule rule,
                  RngStream& rng) {
    Mlp predicted = Mlp::make(env.observation_size(), cfg.hidden_sizes,
                              env.action_count(), rng);
    Mlp target = predicted;
    ReplayMemory memory(static_cast<std::size_t>(cfg.replay_capacity));

    TrainResult result;
    double epsilon = cfg.epsilon_init;
    long steps_since_sync = 0;

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        env.reset(episode);
        double total_reward = 0.0;
        double loss_sum = 0.0;
        int loss_count = 0;
        bool done = false;
        int slot_in_episode = 0;

        // Per-slot aggregation when storing one transition per slot.
        std::vector<double> slot_state;
        int slot_action = -1;
        double slot_reward = 0.0;
        bool slot_terminal = false;

        while (!done) {
            ++slot_in_episode;
            if (cfg.transition_per_slot) {
                slot_state = env.observation();
                slot_action = -1;
                slot_reward = 0.0;
                slot_terminal = false;
            }
            for (int sub = 0; sub < env.steps_per_slot() && !done; ++sub) {
                const std::vector<double> state = env.observation();
                const int action =
                    select_action(predicted, state, epsilon, rng);
                const auto outcome = env.apply(action);
                total_reward += outcome.reward;
                done = outcome.done;
                if (cfg.transition_per_slot) {
                    if (slot_action < 0) slot_action = action;
                    slot_reward += outcome.reward;
                    slot_terminal = outcome.terminal;
                } else {
                    memory.push(Transition{state, action, outcome.reward,
                                           env.observation(),
                                           outcome.terminal});
                }
            }
            if (cfg.transition_per_slot && slot_action >= 0) {
                memory.push(Transition{std::move(slot_state), slot_action,
                                       slot_reward, env.observation(),
                                       slot_terminal});
            }
            epsilon = std::max(cfg.epsilon_floor,
                               epsilon - cfg.epsilon_decrement);
            if (memory.full() && slot_in_episode % cfg.train_interval == 0) {
                const auto batch =
                    memory.sample(static_cast<std::size_t>(cfg.batch_size),
                                  rng);
                loss_sum += train_step(predicted, target, batch,
                                       cfg.learning_rate, cfg.discount, rule);
                ++loss_count;
                ++result.gradient_steps;
                if (++steps_since_sync >= cfg.target_sync_interval) {
                    sync_target(predicted, target);
                    steps_since_sync = 0;
                }
            }
        }
        result.curve.push_back(
            {episode, total_reward, epsilon,
             loss_count > 0 ? loss_sum / loss_count : 0.0});
    }
    result.policy = std::move(predicted);
    return result;
}

} // namespace dtmec
