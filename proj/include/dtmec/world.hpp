#pragma once

#include <cmath>
#include <vector>

#include "dtmec/config.hpp"
#include "dtmec/radio.hpp"
#include "dtmec/rng.hpp"
#include "dtmec/types.hpp"

namespace dtmec {

// Static layout shared by every episode of a scenario: resource devices on
// the ground, the FHP grid at altitude, the BS, and per-MTU mean headings.
struct WorldLayout {
    std::vector<Location> devices;
    std::vector<Location> fhps;
    Location bs;
    std::vector<double> theta_bar; // mean direction per MTU
};

struct FhpGrid {
    int cols = 0;
    int rows = 0;
};

// Near-square factorization: rows is the largest divisor <= sqrt(Q).
inline FhpGrid fhp_grid_shape(int q) {
    FhpGrid g{q, 1};
    for (int r = 1; r * r <= q; ++r) {
        if (q % r == 0) {
            g.rows = r;
            g.cols = q / r;
        }
    }
    return g;
}

inline std::vector<Location> fhp_grid(int q, double region_w, double region_h,
                                      double alt) {
    const FhpGrid g = fhp_grid_shape(q);
    const double dx = region_w / (g.cols + 1);
    const double dy = region_h / (g.rows + 1);
    if (dx < kReferenceDistance || dy < kReferenceDistance)
        throw ModelError("region too small for the FHP grid");
    std::vector<Location> fhps;
    fhps.reserve(static_cast<std::size_t>(q));
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c)
            fhps.push_back({dx * (c + 1), dy * (r + 1), alt});
    return fhps;
}

inline void validate_device_locations(const std::vector<Location>& devices) {
    for (std::size_t i = 0; i < devices.size(); ++i)
        for (std::size_t j = i + 1; j < devices.size(); ++j)
            if (devices[i].x == devices[j].x && devices[i].y == devices[j].y)
                throw ModelError(
                    "duplicate device coordinates: zero distance breaks the "
                    "gain model");
}

inline WorldLayout build_world_with_devices(const ScenarioConfig& cfg,
                                            std::vector<Location> devices) {
    if (static_cast<int>(devices.size()) != cfg.device_count)
        throw ModelError("device coordinate list does not match device_count");
    validate_device_locations(devices);
    WorldLayout w;
    w.devices = std::move(devices);
    w.fhps = fhp_grid(cfg.fhp_count, cfg.region_w_m, cfg.region_h_m,
                      cfg.uav_alt_m);
    w.bs = cfg.bs_location();
    RngStream rng(derive_seed(cfg.seed, 0xd17ec7));
    w.theta_bar.resize(static_cast<std::size_t>(cfg.mtu_count));
    for (double& t : w.theta_bar) t = rng.uniform(-M_PI, M_PI);
    return w;
}

// Layout is a pure function of config and seed.
inline WorldLayout build_world(const ScenarioConfig& cfg) {
    RngStream rng(derive_seed(cfg.seed, 0x1a40c7));
    std::vector<Location> devices;
    devices.reserve(static_cast<std::size_t>(cfg.device_count));
    for (int k = 0; k < cfg.device_count; ++k) {
        devices.push_back({rng.uniform(0.0, cfg.region_w_m),
                           rng.uniform(0.0, cfg.region_h_m), 0.0});
    }
    return build_world_with_devices(cfg, std::move(devices));
}

// Per-slot, per-MTU task table; row-major by slot.
struct TaskTable {
    int mtu_count = 0;
    int slot_count = 0;
    std::vector<TaskSpec> tasks;

    const TaskSpec& at(int mtu, int slot) const {
        return tasks[static_cast<std::size_t>(slot) * mtu_count + mtu];
    }
};

inline TaskTable generate_tasks(const ScenarioConfig& cfg, RngStream& rng) {
    TaskTable table;
    table.mtu_count = cfg.mtu_count;
    table.slot_count = cfg.slot_count;
    table.tasks.reserve(
        static_cast<std::size_t>(cfg.mtu_count) * cfg.slot_count);
    const double share = cfg.slot_share();
    for (int n = 0; n < cfg.slot_count; ++n) {
        for (int m = 0; m < cfg.mtu_count; ++m) {
            TaskSpec t;
            t.data_bits = rng.uniform(cfg.task_bits_min, cfg.task_bits_max);
            t.cycles_per_bit = cfg.cycles_per_bit;
            t.deadline_s = share * rng.uniform(cfg.deadline_min_frac,
                                               cfg.deadline_max_frac);
            table.tasks.push_back(t);
        }
    }
    return table;
}

// Twin deviations, fixed for one episode. Entities' twins store f_est =
// f_max; the deviation is a fraction of that.
struct DeviationDraw {
    std::vector<double> mtu;
    std::vector<double> device;
    double uav = 0.0;
};

inline double sample_deviation(double f_est, double delta, bool positive,
                               RngStream& rng) {
    if (positive) return delta * f_est;
    return delta * f_est * rng.uniform(-1.0, 1.0);
}

inline DeviationDraw sample_deviations(const ScenarioConfig& cfg,
                                       RngStream& rng) {
    DeviationDraw d;
    d.mtu.resize(static_cast<std::size_t>(cfg.mtu_count));
    for (double& v : d.mtu)
        v = sample_deviation(cfg.mtu_f_est(), cfg.mtu_deviation_delta,
                             cfg.deviation_positive, rng);
    d.device.resize(static_cast<std::size_t>(cfg.device_count));
    for (double& v : d.device)
        v = sample_deviation(cfg.device_f_est(), cfg.server_deviation_delta,
                             cfg.deviation_positive, rng);
    d.uav = sample_deviation(cfg.uav_f_est(), cfg.server_deviation_delta,
                             cfg.deviation_positive, rng);
    return d;
}

} // namespace dtmec
