#pragma once

#include <algorithm>
#include <cmath>

#include "dtmec/common.hpp"

namespace dtmec {

// Every link class in the model uses the free-space LoS inverse-square gain
// beta0 * d^-2 with beta0 referenced at 1 m. Gains are floored at the 1 m
// reference distance.
inline constexpr double kReferenceDistance = 1.0;

inline double link_distance(const Location& a, const Location& b) {
    const double d = std::sqrt(sq(a.x - b.x) + sq(a.y - b.y) + sq(a.z - b.z));
    if (d == 0.0) throw ModelError("zero link distance: gain singularity");
    return d;
}

inline double channel_gain(double distance_m, double beta0) {
    if (distance_m <= 0.0) throw ModelError("channel gain needs distance > 0");
    return beta0 / sq(std::max(distance_m, kReferenceDistance));
}

// Shannon rate B*log2(1 + p*h/sigma^2) in bit/s.
inline double shannon_rate(double power_w, double gain, double bandwidth_hz,
                           double noise_w) {
    if (power_w < 0.0) throw ModelError("negative transmit power");
    return bandwidth_hz * std::log2(1.0 + power_w * gain / noise_w);
}

struct LinkBudget {
    double distance_m = 0.0;
    double gain = 0.0;
    double bandwidth_hz = 0.0;
    double noise_w = 0.0;

    double rate(double power_w) const {
        return shannon_rate(power_w, gain, bandwidth_hz, noise_w);
    }
};

inline LinkBudget make_link(const Location& a, const Location& b, double beta0,
                            double bandwidth_hz, double noise_w) {
    LinkBudget l;
    l.distance_m = link_distance(a, b);
    l.gain = channel_gain(l.distance_m, beta0);
    l.bandwidth_hz = bandwidth_hz;
    l.noise_w = noise_w;
    return l;
}

} // namespace dtmec
