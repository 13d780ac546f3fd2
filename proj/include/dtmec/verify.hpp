#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "dtmec/allocator.hpp"
#include "dtmec/ddqn.hpp"
#include "dtmec/mobility.hpp"

namespace dtmec {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// --- Twin-latency identity -------------------------------------------------

inline CheckResult check_dt_identity(int draws = 10000) {
    RngStream rng(101);
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double bits = rng.uniform(1e5, 1e9);
        const double cpb = rng.uniform(1.0, 2000.0);
        const double f_est = rng.uniform(1e8, 1e10);
        const double f_dev = f_est * rng.uniform(-0.5, 0.5);
        const double direct = bits * cpb / (f_est - f_dev);
        const double composed = actual_compute_time(bits, cpb, f_est, f_dev);
        worst = std::max(worst, std::abs(composed - direct) / direct);
    }
    CheckResult r;
    r.name = "dt-latency-identity";
    r.pass = worst <= 1e-12;
    r.detail = "worst relative error " + std::to_string(worst);
    return r;
}

// --- Closed-form powers ------------------------------------------------------

// Random feasible instances per theorem: the uncapped optimum meets the
// deadline with equality and no grid power undercuts its transmission energy.
inline CheckResult check_power_theorems(int instances = 1000,
                                        int grid = 1000) {
    RngStream rng(102);
    double worst_eq = 0.0;
    int grid_failures = 0;
    int verified = 0;
    for (int theorem = 0; theorem < 3; ++theorem) {
        int done = 0;
        int attempts = 0;
        while (done < instances && attempts < 50 * instances) {
            ++attempts;
            TaskSpec task;
            task.data_bits = rng.uniform(1e6, 2e8);
            task.cycles_per_bit = rng.uniform(1.0, 50.0);
            task.deadline_s = rng.uniform(0.4, 1.0);
            const LinkBudget link{0.0, rng.uniform(1e-9, 1e-6), 1e8, 1e-13};
            const double p_max = 0.5;

            double fixed = 0.0; // non-transmission share of the deadline
            PowerSolution s;
            if (theorem < 2) {
                const double f_est = rng.uniform(4e9, 1e10);
                const double f_dev = f_est * rng.uniform(-0.2, 0.2);
                fixed = actual_compute_time(task.data_bits,
                                            task.cycles_per_bit, f_est,
                                            f_dev);
                s = theorem == 0 ? optimal_power_device(task, link, f_est,
                                                        f_dev, p_max)
                                 : optimal_power_uav(task, link, f_est, f_dev,
                                                     p_max);
            } else {
                fixed = rng.uniform(0.0, 0.5 * task.deadline_s);
                s = optimal_power_bs(task, fixed, link, p_max);
            }
            if (!s.feasible || s.capped) continue; // want feasible instances
            ++done;
            ++verified;
            const double total = task.data_bits / link.rate(s.p_star) + fixed;
            worst_eq = std::max(
                worst_eq, std::abs(total - task.deadline_s) / task.deadline_s);
            if (!verify_optimality(s, task.data_bits, link, p_max, fixed,
                                   task.deadline_s, grid))
                ++grid_failures;
        }
    }
    CheckResult r;
    r.name = "power-theorems";
    r.pass = worst_eq <= 1e-9 && grid_failures == 0 &&
             verified >= 3 * instances;
    r.detail = "verified " + std::to_string(verified) +
               ", worst deadline error " + std::to_string(worst_eq) +
               ", grid failures " + std::to_string(grid_failures);
    return r;
}

// Transmission energy nondecreasing in power for random links of each class.
inline CheckResult check_energy_monotonicity(int links = 100,
                                             int grid = 1000) {
    RngStream rng(103);
    int violations = 0;
    for (int l = 0; l < 3 * links; ++l) {
        const LinkBudget link{0.0, rng.uniform(1e-11, 1e-6), 1e8,
                              rng.uniform(1e-14, 1e-11)};
        const double bits = rng.uniform(1e5, 1e8);
        double prev = 0.0;
        for (int i = 1; i <= grid; ++i) {
            const double p = 0.5 * i / grid;
            const double e = transmit_outcome(bits, p, link).joules;
            if (e < prev * (1.0 - 1e-12)) ++violations;
            prev = e;
        }
    }
    CheckResult r;
    r.name = "transmit-energy-monotone";
    r.pass = violations == 0;
    r.detail = std::to_string(violations) + " violations";
    return r;
}

// --- Capacity allocation ----------------------------------------------------

// Exhaustive frequency grid (1 MHz step) against the closed-form minimum,
// at fixed transmit powers.
inline CheckResult check_capacity_oracle(int instances = 50) {
    RngStream rng(104);
    int failures = 0;
    for (int i = 0; i < instances; ++i) {
        TaskContext ctx;
        ctx.mode = i % 2 == 0 ? Mode::Local : Mode::Device;
        ctx.task.data_bits = rng.uniform(1e6, 5e7);
        ctx.task.cycles_per_bit = rng.uniform(5.0, 40.0);
        ctx.task.deadline_s = rng.uniform(0.4, 1.0);
        ctx.kappa_exec = 1e-27;
        ctx.f_max_exec = rng.uniform(4e9, 8e9);
        ctx.f_est_exec = ctx.f_max_exec;
        ctx.f_dev_exec = ctx.f_max_exec * rng.uniform(-0.1, 0.1);
        ctx.p_max_mtu = 0.3;
        ctx.p_max_uav = 0.5;
        ctx.bandwidth_hz = 1e8;
        ctx.noise_w = 1e-11;
        ctx.gain1 = rng.uniform(1e-8, 1e-6);

        const Allocation alloc = allocate_task(ctx, PlanOptions{});
        const double f_closed = allocated_frequency(ctx, alloc);

        // Window the grid search must respect, at the fixed planned power.
        double window = ctx.task.deadline_s;
        if (ctx.mode == Mode::Device)
            window -= ctx.task.data_bits / ctx.link1().rate(alloc.p1);

        constexpr double kStep = 1e6;
        double best_f = -1.0;
        double best_e = std::numeric_limits<double>::infinity();
        for (double f = kStep; f <= ctx.f_max_exec; f += kStep) {
            if (f <= ctx.f_dev_exec) continue;
            const double t = ctx.task.cycles() / (f - ctx.f_dev_exec);
            if (t > window) continue;
            const double e =
                compute_energy(ctx.task.data_bits, ctx.task.cycles_per_bit, f,
                               ctx.f_dev_exec, ctx.kappa_exec);
            if (e < best_e) {
                best_e = e;
                best_f = f;
            }
        }
        if (best_f < 0.0) continue; // instance infeasible on the grid too
        const double e_closed =
            compute_energy(ctx.task.data_bits, ctx.task.cycles_per_bit,
                           f_closed, ctx.f_dev_exec, ctx.kappa_exec);
        if (std::abs(f_closed - best_f) > kStep * (1.0 + 1e-9)) ++failures;
        if (e_closed > best_e * 1.001) ++failures;
    }
    CheckResult r;
    r.name = "capacity-grid-oracle";
    r.pass = failures == 0;
    r.detail = std::to_string(failures) + " failures";
    return r;
}

// --- Network gradients --------------------------------------------------------

inline CheckResult check_gradients(int networks = 20) {
    RngStream rng(105);
    double worst = 0.0;
    for (int trial = 0; trial < networks; ++trial) {
        const int in = 2 + static_cast<int>(rng.below(4));
        const int hidden = 3 + static_cast<int>(rng.below(6));
        const int out = 2 + static_cast<int>(rng.below(3));
        Mlp net = Mlp::make(in, {hidden}, out, rng);
        std::vector<double> x(in);
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        std::vector<double> target(out);
        for (double& v : target) v = rng.uniform(-1.0, 1.0);

        net.zero_gradients();
        Mlp::Workspace ws;
        const std::vector<double>& q = net.forward_cached(x, ws);
        std::vector<double> d(out);
        for (int k = 0; k < out; ++k) d[k] = q[k] - target[k];
        net.backward(ws, d);

        const auto loss = [&]() {
            const std::vector<double> v = net.forward(x);
            double acc = 0.0;
            for (int k = 0; k < out; ++k) acc += 0.5 * sq(v[k] - target[k]);
            return acc;
        };
        const double eps = 1e-6;
        for (std::size_t p = 0; p < net.parameter_count(); p += 5) {
            const double orig = net.parameter(p);
            net.set_parameter(p, orig + eps);
            const double up = loss();
            net.set_parameter(p, orig - eps);
            const double down = loss();
            net.set_parameter(p, orig);
            const double numeric = (up - down) / (2.0 * eps);
            const double denom = std::max(1e-8, std::abs(numeric));
            worst = std::max(worst,
                             std::abs(net.gradient(p) - numeric) / denom);
        }
    }
    CheckResult r;
    r.name = "gradient-finite-differences";
    r.pass = worst <= 1e-4;
    r.detail = "worst relative error " + std::to_string(worst);
    return r;
}

// --- Target rules -------------------------------------------------------------

// Constructed two-action instance where the predicted and target networks
// disagree on the best next action: the double estimator must come in lower
// than the single-network maximum.
inline CheckResult check_target_rules() {
    Mlp predicted(std::vector<int>{1, 2});
    Mlp target(std::vector<int>{1, 2});
    // Q1(s') = [x, 2x] picks action 1; Q2(s') = [3x, x] rates it lower.
    predicted.set_parameter(0, 1.0);
    predicted.set_parameter(1, 2.0);
    target.set_parameter(0, 3.0);
    target.set_parameter(1, 1.0);
    const std::vector<double> s2 = {1.0};
    const double ddqn = ddqn_target(0.0, s2, false, predicted, target, 0.9);
    const double dqn = dqn_target(0.0, s2, false, target, 0.9);
    const bool separated = ddqn < dqn;
    // With identical networks the two rules coincide exactly.
    const double same = ddqn_target(0.25, s2, false, target, target, 0.9) -
                        dqn_target(0.25, s2, false, target, 0.9);
    CheckResult r;
    r.name = "ddqn-vs-dqn-targets";
    r.pass = separated && same == 0.0;
    std::ostringstream detail;
    detail << "ddqn " << ddqn << " dqn " << dqn << " identical-diff " << same;
    r.detail = detail.str();
    return r;
}

// --- Toy MDP -----------------------------------------------------------------

// Two-state deterministic MDP whose optimum is to keep switching states.
class ToyMdp {
  public:
    explicit ToyMdp(int horizon = 25) : horizon_(horizon) { encode(); }

    struct Outcome {
        double reward = 0.0;
        bool done = false;
        bool terminal = false;
    };

    void reset(int /*episode*/) {
        state_ = 0;
        steps_ = 0;
        encode();
    }
    int observation_size() const { return 2; }
    int action_count() const { return 2; }
    int steps_per_slot() const { return 1; }
    const std::vector<double>& observation() const { return obs_; }

    Outcome apply(int action) {
        const double reward = action == state_ ? kStay : kSwitch;
        state_ = action; // action chooses the next state directly
        encode();
        ++steps_;
        // The horizon truncates the episode without ending the process.
        return {reward, steps_ >= horizon_, false};
    }

    // reward(state, action): stay earns kStay, switching earns kSwitch.
    static double reward(int state, int action) {
        return action == state ? kStay : kSwitch;
    }
    static int transition(int /*state*/, int action) { return action; }

    static constexpr double kStay = 1.0;
    static constexpr double kSwitch = 2.0;

  private:
    void encode() {
        obs_ = {state_ == 0 ? 1.0 : 0.0, state_ == 1 ? 1.0 : 0.0};
    }
    int horizon_;
    int state_ = 0;
    int steps_ = 0;
    std::vector<double> obs_;
};

// Tabular value iteration; independent of the network training path.
inline std::array<std::array<double, 2>, 2>
toy_mdp_optimal_q(double discount, int sweeps = 2000) {
    std::array<std::array<double, 2>, 2> q{{{0.0, 0.0}, {0.0, 0.0}}};
    for (int it = 0; it < sweeps; ++it) {
        auto next = q;
        for (int s = 0; s < 2; ++s) {
            for (int a = 0; a < 2; ++a) {
                const int s2 = ToyMdp::transition(s, a);
                next[s][a] = ToyMdp::reward(s, a) +
                             discount * std::max(q[s2][0], q[s2][1]);
            }
        }
        q = next;
    }
    return q;
}

inline TrainConfig toy_mdp_train_config() {
    TrainConfig tc;
    tc.epsilon_init = 1.0;
    tc.epsilon_decrement = 4e-4;
    tc.epsilon_floor = 0.05;
    tc.discount = 0.8;
    tc.learning_rate = 0.02;
    tc.batch_size = 16;
    tc.replay_capacity = 200;
    tc.target_sync_interval = 25;
    tc.episodes = 200; // 25-step horizon: 5000 environment steps
    tc.train_interval = 1;
    tc.hidden_sizes = {16};
    return tc;
}

// DDQN reaches the value-iteration optimum on the toy MDP for every seed.
inline CheckResult check_toy_mdp(int seeds = 5) {
    const auto q_star = toy_mdp_optimal_q(0.8);
    int ok = 0;
    double worst = 0.0;
    for (int seed = 1; seed <= seeds; ++seed) {
        ToyMdp env;
        RngStream rng(static_cast<std::uint64_t>(seed) * 977);
        const TrainResult result =
            train(env, toy_mdp_train_config(), TargetRule::Ddqn, rng);
        double max_err = 0.0;
        bool greedy_optimal = true;
        for (int s = 0; s < 2; ++s) {
            const std::vector<double> obs = {s == 0 ? 1.0 : 0.0,
                                             s == 1 ? 1.0 : 0.0};
            const std::vector<double> q = result.policy.forward(obs);
            for (int a = 0; a < 2; ++a)
                max_err = std::max(max_err, std::abs(q[a] - q_star[s][a]));
            const int greedy = argmax_lowest(q);
            const int optimal =
                q_star[s][0] >= q_star[s][1] ? 0 : 1;
            if (greedy != optimal) greedy_optimal = false;
        }
        worst = std::max(worst, max_err);
        if (greedy_optimal && max_err <= 0.05) ++ok;
    }
    CheckResult r;
    r.name = "toy-mdp-value-iteration";
    r.pass = ok == seeds;
    r.detail = std::to_string(ok) + "/" + std::to_string(seeds) +
               " seeds, worst max-Q error " + std::to_string(worst);
    return r;
}

// --- Mobility statistics --------------------------------------------------------

inline CheckResult check_gmrm_statistics(int steps = 100000) {
    bool pass = true;
    std::ostringstream detail;
    for (double mu1 : {0.0, 0.5, 0.99}) {
        MobilityConfig cfg;
        cfg.mu1 = mu1;
        cfg.v_bar = 10.0;
        cfg.lambda_std = 2.0;
        cfg.region_w = cfg.region_h = 1000.0;
        RngStream rng(106);
        double v = cfg.v_bar;
        double sum = 0.0;
        for (int i = 0; i < steps; ++i) {
            v = step_velocity(v, cfg, rng);
            sum += v;
        }
        const double mean = sum / steps;
        const double se =
            cfg.lambda_std * std::sqrt((1.0 + mu1) / (1.0 - mu1) / steps);
        const double bound = 2.576 * se + 1e-3;
        if (std::abs(mean - cfg.v_bar) > bound) pass = false;
        detail << "mu1=" << mu1 << " mean=" << mean << " bound=" << bound
               << "; ";
    }
    CheckResult r;
    r.name = "gmrm-long-run-mean";
    r.pass = pass;
    r.detail = detail.str();
    return r;
}

inline std::vector<CheckResult> run_property_checks() {
    return {
        check_dt_identity(),     check_power_theorems(),
        check_energy_monotonicity(), check_capacity_oracle(),
        check_gradients(),       check_target_rules(),
        check_toy_mdp(),         check_gmrm_statistics(),
    };
}

} // namespace dtmec
