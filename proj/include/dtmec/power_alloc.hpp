#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtmec/compute_model.hpp"
#include "dtmec/radio.hpp"

namespace dtmec {

// Exponents beyond this make xi overflow double range; such instances are
// infeasible at any allowed power anyway.
inline constexpr double kMaxRateExponent = 1024.0;

struct PowerSolution {
    double p_star = 0.0;
    bool capped = false;   // analytic value exceeded p_max
    bool feasible = false; // a positive transmit window existed
    double xi = 0.0;       // SNR threshold 2^(D/(B*T)) - 1
};

// SNR threshold needed to push `bits` through bandwidth B in t_window.
inline double snr_threshold(double bits, double bandwidth_hz,
                            double t_window_s) {
    const double e = bits / (bandwidth_hz * t_window_s);
    if (e > kMaxRateExponent) return std::numeric_limits<double>::infinity();
    return std::exp2(e) - 1.0;
}

// Shared closed form: the transmission energy is nondecreasing in p, so the
// cheapest feasible power makes the latency constraint tight. t_window is
// the deadline minus all non-transmission time of the mode.
inline PowerSolution closed_form_power(double bits, double t_window_s,
                                       double gain, double bandwidth_hz,
                                       double noise_w, double p_max) {
    PowerSolution s;
    if (t_window_s <= 0.0) {
        s.p_star = p_max;
        s.capped = true;
        return s;
    }
    s.feasible = true;
    s.xi = snr_threshold(bits, bandwidth_hz, t_window_s);
    if (!std::isfinite(s.xi)) {
        s.p_star = p_max;
        s.capped = true;
        return s;
    }
    const double analytic = s.xi * noise_w / gain;
    if (analytic > p_max) {
        s.p_star = p_max;
        s.capped = true;
    } else {
        s.p_star = analytic;
    }
    return s;
}

// Theorem-style optimum for MTU -> resource device: the transmit window is
// the deadline minus the device's actual compute time at its current twin
// frequency f_est (estimated time plus deviation gap).
inline PowerSolution optimal_power_device(const TaskSpec& task,
                                          const LinkBudget& link, double f_est,
                                          double f_dev, double p_max) {
    const double compute =
        actual_compute_time(task.data_bits, task.cycles_per_bit, f_est, f_dev);
    return closed_form_power(task.data_bits, task.deadline_s - compute,
                             link.gain, link.bandwidth_hz, link.noise_w,
                             p_max);
}

// Same form for MTU -> UAV with the UAV's compute-time terms.
inline PowerSolution optimal_power_uav(const TaskSpec& task,
                                       const LinkBudget& link, double f_est,
                                       double f_dev, double p_max) {
    return optimal_power_device(task, link, f_est, f_dev, p_max);
}

// UAV -> BS second hop given the first hop's transmit time.
inline PowerSolution optimal_power_bs(const TaskSpec& task,
                                      double first_hop_time_s,
                                      const LinkBudget& uav_bs_link,
                                      double p_max_uav) {
    return closed_form_power(task.data_bits,
                             task.deadline_s - first_hop_time_s,
                             uav_bs_link.gain, uav_bs_link.bandwidth_hz,
                             uav_bs_link.noise_w, p_max_uav);
}

// Brute-force check that no deadline-feasible grid power beats p_star on
// transmission energy. `fixed_time_s` is the mode's non-transmission time.
inline bool verify_optimality(const PowerSolution& sol, double bits,
                              const LinkBudget& link, double p_max,
                              double fixed_time_s, double deadline_s,
                              int grid_points = 1000) {
    if (!sol.feasible) return true; // no feasible power exists at all
    const double best_energy =
        sol.capped ? std::numeric_limits<double>::infinity()
                   : sol.p_star * (deadline_s - fixed_time_s);
    for (int i = 1; i <= grid_points; ++i) {
        const double p = p_max * static_cast<double>(i) / grid_points;
        const double r = link.rate(p);
        if (r <= 0.0) continue;
        const double t = bits / r;
        if (fixed_time_s + t > deadline_s * (1.0 + 1e-12)) continue;
        const double e = p * t;
        if (e < best_energy * (1.0 - 1e-9)) return false;
    }
    return true;
}

// Relay deadline split between the two hops. Both hop energies are convex in
// the hop duration, so a ternary search over the first hop's share finds the
// minimum-energy split; each hop power then comes from the closed form.
struct RelaySplit {
    double t1 = 0.0; // first-hop transmit time
    bool feasible = false;
};

inline RelaySplit choose_relay_split(double bits, double deadline_s,
                                     const LinkBudget& hop1,
                                     const LinkBudget& hop2, double p_max_mtu,
                                     double p_max_uav) {
    RelaySplit split;
    const double r1_max = hop1.rate(p_max_mtu);
    const double r2_max = hop2.rate(p_max_uav);
    if (r1_max <= 0.0 || r2_max <= 0.0) return split;
    const double t1_min = bits / r1_max;
    const double t2_min = bits / r2_max;
    if (t1_min + t2_min > deadline_s) return split; // no feasible split
    split.feasible = true;

    const auto hop_energy = [bits](const LinkBudget& link, double t) {
        const double xi = snr_threshold(bits, link.bandwidth_hz, t);
        if (!std::isfinite(xi)) return std::numeric_limits<double>::infinity();
        return xi * link.noise_w / link.gain * t;
    };
    const auto total = [&](double t1) {
        return hop_energy(hop1, t1) + hop_energy(hop2, deadline_s - t1);
    };

    double lo = t1_min;
    double hi = deadline_s - t2_min;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * deadline_s; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (total(m1) <= total(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    split.t1 = 0.5 * (lo + hi);
    return split;
}

} // namespace dtmec
