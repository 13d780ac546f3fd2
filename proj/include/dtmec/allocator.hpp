#pragma once

#include <vector>

#include "dtmec/capacity_alloc.hpp"
#include "dtmec/compute_model.hpp"
#include "dtmec/power_alloc.hpp"

namespace dtmec {

// Planning policy shared by the environment and the alternating optimizer.
struct PlanOptions {
    // Planner sees the twin deviations (the digital-twin assist). When off,
    // allocations are sized as if every deviation were zero while outcomes
    // are still evaluated against the true frequencies.
    bool use_deviation = true;
    // When off, frequencies stay pinned at each server's f_est and the
    // capacity step is skipped (the "no frequency optimization" design).
    bool optimize_frequency = true;
};

inline double planned_deviation(const TaskContext& ctx,
                                const PlanOptions& opt) {
    return opt.use_deviation ? ctx.f_dev_exec : 0.0;
}

// Power step: closed-form transmit powers with the executing server's
// compute time evaluated at twin frequency `f_current`.
inline void plan_powers(const TaskContext& ctx, double f_current,
                        const PlanOptions& opt, Allocation& alloc) {
    const TaskSpec& task = ctx.task;
    const double dev = planned_deviation(ctx, opt);
    switch (ctx.mode) {
    case Mode::Local:
        break;
    case Mode::Device: {
        const PowerSolution s = optimal_power_device(task, ctx.link1(),
                                                     f_current, dev,
                                                     ctx.p_max_mtu);
        alloc.p1 = s.p_star;
        break;
    }
    case Mode::UavCompute: {
        const PowerSolution s = optimal_power_uav(task, ctx.link1(), f_current,
                                                  dev, ctx.p_max_mtu);
        alloc.p2 = s.p_star;
        break;
    }
    case Mode::BsRelay: {
        const RelaySplit split =
            choose_relay_split(task.data_bits, task.deadline_s, ctx.link1(),
                               ctx.link2(), ctx.p_max_mtu, ctx.p_max_uav);
        if (!split.feasible) {
            alloc.p2 = ctx.p_max_mtu;
            alloc.p3 = ctx.p_max_uav;
            break;
        }
        const PowerSolution hop1 =
            closed_form_power(task.data_bits, split.t1, ctx.gain1,
                              ctx.bandwidth_hz, ctx.noise_w, ctx.p_max_mtu);
        alloc.p2 = hop1.p_star;
        const double t1 = task.data_bits / ctx.link1().rate(alloc.p2);
        const PowerSolution hop2 =
            optimal_power_bs(task, t1, ctx.link2(), ctx.p_max_uav);
        alloc.p3 = hop2.p_star;
        break;
    }
    }
}

// Capacity step: minimal feasible frequency in the time the transmission
// left over. Powers in `alloc` are treated as fixed.
inline void plan_frequency(const TaskContext& ctx, const PlanOptions& opt,
                           Allocation& alloc) {
    const TaskSpec& task = ctx.task;
    const double dev = planned_deviation(ctx, opt);
    if (!opt.optimize_frequency) {
        // Pinned at each server's cap.
        alloc.f1 = alloc.f2 = alloc.f3 = ctx.f_max_exec;
        return;
    }
    switch (ctx.mode) {
    case Mode::Local: {
        alloc.f1 = minimal_feasible_frequency(task.data_bits,
                                              task.cycles_per_bit,
                                              task.deadline_s, dev,
                                              ctx.f_max_exec)
                       .f;
        break;
    }
    case Mode::Device: {
        const double t_rem =
            task.deadline_s - task.data_bits / ctx.link1().rate(alloc.p1);
        alloc.f2 = minimal_feasible_frequency(task.data_bits,
                                              task.cycles_per_bit, t_rem, dev,
                                              ctx.f_max_exec)
                       .f;
        break;
    }
    case Mode::UavCompute: {
        const double t_rem =
            task.deadline_s - task.data_bits / ctx.link1().rate(alloc.p2);
        alloc.f3 = minimal_feasible_frequency(task.data_bits,
                                              task.cycles_per_bit, t_rem, dev,
                                              ctx.f_max_exec)
                       .f;
        break;
    }
    case Mode::BsRelay:
        break; // no compute side; BS execution is external
    }
}

// One power-then-capacity pass anchored at the server's twin frequency
// (or at the cap when frequencies are pinned). This is what a single
// iteration of the alternating optimizer applies to every task, and what
// the environment charges during stepping.
inline Allocation allocate_task(const TaskContext& ctx,
                                const PlanOptions& opt) {
    Allocation alloc;
    const double anchor =
        opt.optimize_frequency ? ctx.f_est_exec : ctx.f_max_exec;
    plan_powers(ctx, anchor, opt, alloc);
    plan_frequency(ctx, opt, alloc);
    return alloc;
}

inline double allocated_frequency(const TaskContext& ctx,
                                  const Allocation& alloc) {
    switch (ctx.mode) {
    case Mode::Local: return alloc.f1;
    case Mode::Device: return alloc.f2;
    case Mode::UavCompute: return alloc.f3;
    case Mode::BsRelay: return 0.0;
    }
    return 0.0;
}

} // namespace dtmec
