#pragma once

#include <functional>
#include <vector>

#include "dtmec/environment.hpp"
#include "dtmec/mlp.hpp"

namespace dtmec {

// A policy maps the environment's current observation to an action.
using Policy = std::function<int(const Environment&)>;

inline Policy greedy_policy(const Mlp& net) {
    return [&net](const Environment& env) {
        return argmax_lowest(net.forward(env.observation()));
    };
}

inline Policy local_only_policy() {
    return [](const Environment&) { return 0; };
}

// Nearest resource device, ties broken toward the lowest device index.
inline Policy nearest_device_policy() {
    return [](const Environment& env) {
        const auto& devices = env.world().devices;
        const Location mtu = env.acting_mtu_location();
        int best = 0;
        double best_d = horizontal_distance(mtu, devices[0]);
        for (int k = 1; k < static_cast<int>(devices.size()); ++k) {
            const double d = horizontal_distance(mtu, devices[k]);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        return 2 + best; // device actions start at index 2
    };
}

struct EpisodeRollout {
    std::vector<TraceRecord> trace;
    double total_reward = 0.0;
};

inline EpisodeRollout rollout_episode(Environment& env, int episode,
                                      const Policy& policy) {
    env.reset(episode);
    EpisodeRollout r;
    while (!env.done()) {
        const auto outcome = env.apply(policy(env));
        r.total_reward += outcome.reward;
    }
    r.trace = env.trace();
    return r;
}

} // namespace dtmec
