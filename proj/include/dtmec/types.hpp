#pragma once

#include <string>

#include "dtmec/common.hpp"

namespace dtmec {

// One computation task U_m[n].
struct TaskSpec {
    double data_bits = 0.0;      // D_m[n]
    double cycles_per_bit = 0.0; // C_m[n]
    double deadline_s = 0.0;     // T_m[n], bounded by the TDMA share

    double cycles() const { return data_bits * cycles_per_bit; }
};

// A network entity (MTU, resource device, or the UAV server role).
struct NodeProfile {
    int id = 0;
    Location location;
    double f_est = 0.0;         // CPU frequency stored in the twin, Hz
    double f_dev = 0.0;         // signed deviation; actual = f_est - f_dev
    double f_max = 0.0;         // hard cap on allocatable frequency, Hz
    double kappa = 0.0;         // switched-capacitance coefficient
    double p_max = 0.0;         // transmit-power cap where applicable, W
    double energy_budget = 0.0; // J per episode

    void validate(const std::string& who) const {
        if (f_est - f_dev <= 0.0)
            throw ModelError(who + ": f_est - f_dev must be positive");
        if (f_est < 0.0 || f_est > f_max)
            throw ModelError(who + ": f_est must lie in [0, f_max]");
        if (kappa <= 0.0) throw ModelError(who + ": kappa must be positive");
        if (energy_budget <= 0.0)
            throw ModelError(who + ": energy_budget must be positive");
    }
};

// Where a task runs. Mirrors the flat action encoding used by the learner:
//   0            -> local
//   1            -> BS relay through the UAV
//   2 .. K+1     -> resource device (index - 2)
//   K+2 .. K+Q+1 -> UAV hovering at FHP (index - K - 2)
enum class Mode { Local, BsRelay, Device, UavCompute };

struct OffloadDecision {
    int action = 0;
    Mode mode = Mode::Local;
    int device = -1; // valid for Mode::Device
    int fhp = -1;    // valid for Mode::UavCompute

    static OffloadDecision from_action(int action, int device_count,
                                       int fhp_count) {
        if (action < 0 || action >= device_count + fhp_count + 2)
            throw ModelError("action index out of range");
        OffloadDecision d;
        d.action = action;
        if (action == 0) {
            d.mode = Mode::Local;
        } else if (action == 1) {
            d.mode = Mode::BsRelay;
        } else if (action < 2 + device_count) {
            d.mode = Mode::Device;
            d.device = action - 2;
        } else {
            d.mode = Mode::UavCompute;
            d.fhp = action - 2 - device_count;
        }
        return d;
    }
};

inline int action_cardinality(int device_count, int fhp_count) {
    return device_count + fhp_count + 2;
}

// Per-task transmit powers and allocated frequencies. Only the entries
// belonging to the task's mode are meaningful.
struct Allocation {
    double p1 = 0.0; // MTU -> resource device
    double p2 = 0.0; // MTU -> UAV (offload or relay first hop)
    double p3 = 0.0; // UAV -> BS (relay second hop)
    double f1 = 0.0; // local CPU frequency
    double f2 = 0.0; // resource-device CPU frequency
    double f3 = 0.0; // UAV CPU frequency
};

} // namespace dtmec
