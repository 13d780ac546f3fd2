#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dtmec/compute_model.hpp"

namespace dtmec {

struct FrequencyDecision {
    double f = 0.0;
    bool feasible = false; // minimal frequency fits under f_max
};

// Smallest allocatable twin frequency. The twin-time decomposition D*C/f is
// undefined at zero, so allocations never drop below this.
inline constexpr double kMinAllocatedHz = 1e6;

// Smallest twin frequency whose actual compute time D*C/(f - f_dev) meets
// t_rem. Compute energy grows with (f - f_dev), so the deadline binds and
// the minimum is exact: f = D*C/t_rem + f_dev.
inline FrequencyDecision minimal_feasible_frequency(double bits,
                                                    double cycles_per_bit,
                                                    double t_rem_s,
                                                    double f_dev,
                                                    double f_max) {
    FrequencyDecision d;
    if (t_rem_s <= 0.0) {
        d.f = f_max;
        return d;
    }
    const double f = std::max(kMinAllocatedHz,
                              bits * cycles_per_bit / t_rem_s + f_dev);
    if (f > f_max) {
        d.f = f_max; // best effort; caller records the violation
        return d;
    }
    d.f = f;
    d.feasible = true;
    return d;
}

} // namespace dtmec
