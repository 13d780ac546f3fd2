#pragma once

#include <cmath>
#include <initializer_list>

#include "dtmec/common.hpp"
#include "dtmec/radio.hpp"
#include "dtmec/types.hpp"

namespace dtmec {

// Twin-estimated execution time D*C / f_est.
inline double estimated_time(double bits, double cycles_per_bit,
                             double f_est) {
    if (f_est <= 0.0) throw ModelError("estimated_time: f_est must be > 0");
    return bits * cycles_per_bit / f_est;
}

// Gap between actual and twin-estimated compute time. Negative deviation
// (twin under-estimates capacity) yields a negative gap.
inline double latency_gap(double bits, double cycles_per_bit, double f_est,
                          double f_dev) {
    if (f_est == f_dev) throw ModelError("latency_gap: f_est == f_dev");
    return bits * cycles_per_bit * f_dev / (f_est * (f_est - f_dev));
}

// estimated_time + latency_gap; algebraically D*C / (f_est - f_dev).
inline double actual_compute_time(double bits, double cycles_per_bit,
                                  double f_est, double f_dev) {
    return estimated_time(bits, cycles_per_bit, f_est) +
           latency_gap(bits, cycles_per_bit, f_est, f_dev);
}

// kappa * (f_est - f_dev)^2 * C * D: energy at the actually delivered rate.
inline double compute_energy(double bits, double cycles_per_bit, double f_est,
                             double f_dev, double kappa) {
    return kappa * sq(f_est - f_dev) * cycles_per_bit * bits;
}

struct TransmitOutcome {
    double seconds = 0.0;
    double joules = 0.0;
};

inline TransmitOutcome transmit_outcome(double bits, double power_w,
                                        const LinkBudget& link) {
    const double r = link.rate(power_w);
    if (r <= 0.0) throw ModelError("transmit_outcome: zero rate");
    TransmitOutcome t;
    t.seconds = bits / r;
    t.joules = power_w * t.seconds;
    return t;
}

// Flight energy between hover points: P_f * horizontal distance / V.
// One implementation serves both the offload and the relay mode.
inline double uav_fly_energy(double horizontal_dist_m, double fly_power_w,
                             double speed_mps) {
    return fly_power_w * horizontal_dist_m / speed_mps;
}

inline double uav_fly_energy(const Location& prev, const Location& next,
                             double fly_power_w, double speed_mps) {
    return uav_fly_energy(horizontal_distance(prev, next), fly_power_w,
                          speed_mps);
}

inline double uav_hover_energy(std::initializer_list<double> times_s,
                               double hover_power_w) {
    double total = 0.0;
    for (double t : times_s) total += t;
    return hover_power_w * total;
}

// Full latency chain and energy split of one task under its chosen mode.
struct ModeOutcome {
    double transmit_time = 0.0; // sum of transmission hops, s
    double compute_time = 0.0;  // actual execution time incl. twin gap, s
    double total_latency = 0.0;
    double mtu_energy = 0.0;
    double server_energy = 0.0; // executing device's or UAV's compute energy
    double uav_fly_energy = 0.0;
    double uav_hover_energy = 0.0;
    double total_energy = 0.0;
    bool deadline_met = true;
};

// Geometry and entity parameters fixed at decision time; everything the
// per-task allocation and evaluation needs, detached from live world state.
struct TaskContext {
    Mode mode = Mode::Local;
    TaskSpec task;
    int mtu = -1;    // owning MTU
    int device = -1; // executing resource device, Mode::Device only
    int slot = -1;

    // Executing entity (MTU for local, device/UAV otherwise).
    double kappa_exec = 0.0;
    double f_dev_exec = 0.0;
    double f_max_exec = 0.0;
    double f_est_exec = 0.0; // twin-stored frequency, the anchor for powers

    double p_max_mtu = 0.0;
    double p_max_uav = 0.0;

    double gain1 = 0.0; // MTU->device, MTU->UAV, or relay first hop
    double gain2 = 0.0; // UAV->BS, relay only
    double fly_dist_m = 0.0;

    double bandwidth_hz = 0.0;
    double noise_w = 0.0;
    double fly_power_w = 0.0;
    double hover_power_w = 0.0;
    double uav_speed_mps = 0.0;

    LinkBudget link1() const {
        return LinkBudget{0.0, gain1, bandwidth_hz, noise_w};
    }
    LinkBudget link2() const {
        return LinkBudget{0.0, gain2, bandwidth_hz, noise_w};
    }
};

// Assembles the mode's latency chain and energy breakdown from a fixed
// allocation. BS execution itself is external to the model: the relay mode
// carries only its two hops plus hover and flight.
inline ModeOutcome evaluate_mode(const TaskContext& ctx,
                                 const Allocation& alloc) {
    const TaskSpec& task = ctx.task;
    ModeOutcome out;
    switch (ctx.mode) {
    case Mode::Local: {
        out.compute_time = actual_compute_time(
            task.data_bits, task.cycles_per_bit, alloc.f1, ctx.f_dev_exec);
        out.total_latency = out.compute_time;
        out.mtu_energy = compute_energy(task.data_bits, task.cycles_per_bit,
                                        alloc.f1, ctx.f_dev_exec,
                                        ctx.kappa_exec);
        break;
    }
    case Mode::Device: {
        const TransmitOutcome tx =
            transmit_outcome(task.data_bits, alloc.p1, ctx.link1());
        out.transmit_time = tx.seconds;
        out.compute_time = actual_compute_time(
            task.data_bits, task.cycles_per_bit, alloc.f2, ctx.f_dev_exec);
        out.total_latency = out.transmit_time + out.compute_time;
        out.mtu_energy = tx.joules;
        out.server_energy = compute_energy(task.data_bits, task.cycles_per_bit,
                                           alloc.f2, ctx.f_dev_exec,
                                           ctx.kappa_exec);
        break;
    }
    case Mode::UavCompute: {
        const TransmitOutcome tx =
            transmit_outcome(task.data_bits, alloc.p2, ctx.link1());
        out.transmit_time = tx.seconds;
        out.compute_time = actual_compute_time(
            task.data_bits, task.cycles_per_bit, alloc.f3, ctx.f_dev_exec);
        out.total_latency = out.transmit_time + out.compute_time;
        out.mtu_energy = tx.joules;
        out.server_energy = compute_energy(task.data_bits, task.cycles_per_bit,
                                           alloc.f3, ctx.f_dev_exec,
                                           ctx.kappa_exec);
        out.uav_fly_energy =
            uav_fly_energy(ctx.fly_dist_m, ctx.fly_power_w, ctx.uav_speed_mps);
        out.uav_hover_energy = uav_hover_energy(
            {out.transmit_time, out.compute_time}, ctx.hover_power_w);
        break;
    }
    case Mode::BsRelay: {
        const TransmitOutcome hop1 =
            transmit_outcome(task.data_bits, alloc.p2, ctx.link1());
        const TransmitOutcome hop2 =
            transmit_outcome(task.data_bits, alloc.p3, ctx.link2());
        out.transmit_time = hop1.seconds + hop2.seconds;
        out.total_latency = out.transmit_time;
        out.mtu_energy = hop1.joules;
        out.server_energy = hop2.joules; // spent by the UAV radio
        out.uav_fly_energy =
            uav_fly_energy(ctx.fly_dist_m, ctx.fly_power_w, ctx.uav_speed_mps);
        out.uav_hover_energy =
            uav_hover_energy({hop1.seconds, hop2.seconds}, ctx.hover_power_w);
        break;
    }
    }
    out.total_energy = out.mtu_energy + out.server_energy +
                       out.uav_fly_energy + out.uav_hover_energy;
    // Uncapped closed-form powers land on the deadline exactly; leave room
    // for floating-point noise when classifying.
    out.deadline_met = out.total_latency <= task.deadline_s * (1.0 + 1e-9);
    return out;
}

} // namespace dtmec
