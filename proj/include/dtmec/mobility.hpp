#pragma once

#include <algorithm>
#include <cmath>

#include "dtmec/common.hpp"
#include "dtmec/rng.hpp"

namespace dtmec {

// Gauss-Markov random mobility for the ground users.
struct MobilityConfig {
    double mu1 = 0.99;       // velocity memory factor
    double mu2 = 0.95;       // direction memory factor
    double v_bar = 1.5;      // mean speed shared by all MTUs, m/s
    double lambda_mean = 0.0;
    double lambda_std = 0.0; // velocity noise
    double gamma_mean = 0.0;
    double gamma_std = 0.0;  // direction noise
    double region_w = 0.0;   // [0, region_w] x [0, region_h]
    double region_h = 0.0;
    // The printed direction recursion feeds the previous *velocity* into the
    // memory term. Off by default: the standard model uses the previous
    // direction. Kept selectable for comparison.
    bool literal_direction_update = false;
};

struct MtuKinematics {
    Location location; // z stays 0
    double v = 0.0;
    double theta = 0.0;
};

inline double step_velocity(double prev_v, const MobilityConfig& cfg,
                            RngStream& rng) {
    const double lambda = rng.normal(cfg.lambda_mean, cfg.lambda_std);
    const double v = cfg.mu1 * prev_v + (1.0 - cfg.mu1) * cfg.v_bar +
                     std::sqrt(1.0 - sq(cfg.mu1)) * lambda;
    return std::max(0.0, v); // speed is physical
}

inline double step_direction(double prev_theta, double prev_v,
                             double theta_bar, const MobilityConfig& cfg,
                             RngStream& rng) {
    const double gamma = rng.normal(cfg.gamma_mean, cfg.gamma_std);
    const double memory = cfg.literal_direction_update ? prev_v : prev_theta;
    const double theta = cfg.mu2 * memory + (1.0 - cfg.mu2) * theta_bar +
                         std::sqrt(1.0 - sq(cfg.mu2)) * gamma;
    return wrap_angle(theta);
}

// Reflects a coordinate into [0, span] (handles multi-span overshoots).
inline double reflect_into(double x, double span) {
    if (span <= 0.0) return 0.0;
    const double period = 2.0 * span;
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    return r <= span ? r : period - r;
}

inline Location update_position(const MtuKinematics& kin, double t_s,
                                const MobilityConfig& cfg) {
    if (t_s <= 0.0) throw ModelError("update_position: t must be > 0");
    Location next = kin.location;
    next.x = reflect_into(next.x + kin.v * std::cos(kin.theta) * t_s,
                          cfg.region_w);
    next.y = reflect_into(next.y + kin.v * std::sin(kin.theta) * t_s,
                          cfg.region_h);
    return next;
}

// One slot of the recursion: the position update consumes the previous
// velocity and direction, then both are refreshed.
inline void advance_mobility(MtuKinematics& kin, double theta_bar, double t_s,
                             const MobilityConfig& cfg, RngStream& rng) {
    kin.location = update_position(kin, t_s, cfg);
    const double prev_v = kin.v;
    kin.v = step_velocity(prev_v, cfg, rng);
    kin.theta = step_direction(kin.theta, prev_v, theta_bar, cfg, rng);
}

} // namespace dtmec
