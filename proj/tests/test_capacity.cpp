#include <catch2/catch_amalgamated.hpp>

#include "dtmec/allocator.hpp"
#include "dtmec/capacity_alloc.hpp"
#include "dtmec/rng.hpp"

using namespace dtmec;

TEST_CASE("minimal feasible frequency: worked instances") {
    // D*C = 1e9, window 0.5 s, deviation 1e8 -> 2.1 GHz.
    const FrequencyDecision a =
        minimal_feasible_frequency(1e6, 1000.0, 0.5, 1e8, 8e9);
    REQUIRE(a.feasible);
    CHECK(a.f == Catch::Approx(2.1e9));

    const FrequencyDecision b =
        minimal_feasible_frequency(1e6, 1000.0, 1.0, 0.0, 8e9);
    REQUIRE(b.feasible);
    CHECK(b.f == Catch::Approx(1e9));

    // Window too small for the cap.
    const FrequencyDecision c =
        minimal_feasible_frequency(1e6, 1000.0, 1e-3, 0.0, 1e9);
    CHECK_FALSE(c.feasible);
    CHECK(c.f == 1e9); // best effort pins the cap
}

TEST_CASE("grid oracle: no feasible lower frequency exists") {
    RngStream rng(41);
    for (int i = 0; i < 50; ++i) {
        const double bits = rng.uniform(1e6, 1e8);
        const double cpb = rng.uniform(1.0, 50.0);
        const double window = rng.uniform(0.1, 1.0);
        const double f_max = rng.uniform(4e9, 10e9);
        const double f_dev = f_max * rng.uniform(-0.1, 0.1);
        const FrequencyDecision d =
            minimal_feasible_frequency(bits, cpb, window, f_dev, f_max);
        if (!d.feasible) continue;
        constexpr double kStep = 1e6;
        // The frequency one grid step below must violate the deadline
        // (unless the minimum sat on the allocation floor).
        const double below = d.f - kStep;
        if (d.f > kMinAllocatedHz && below > f_dev) {
            CHECK(bits * cpb / (below - f_dev) > window);
        }
        CHECK(bits * cpb / (d.f - f_dev) <= window * (1.0 + 1e-12));
        // Energy increases with f, so no feasible grid point beats d.f.
        for (double f = d.f; f <= f_max; f += (f_max - d.f) / 10.0 + kStep) {
            CHECK(compute_energy(bits, cpb, f, f_dev, 1e-27) >=
                  compute_energy(bits, cpb, d.f, f_dev, 1e-27) *
                      (1.0 - 1e-12));
        }
    }
}

TEST_CASE("plan_frequency: local tasks get the whole deadline") {
    TaskContext ctx;
    ctx.mode = Mode::Local;
    ctx.task = TaskSpec{1e6, 1000.0, 1.0};
    ctx.f_dev_exec = 0.0;
    ctx.f_max_exec = 6e9;
    ctx.f_est_exec = 6e9;
    Allocation alloc;
    plan_frequency(ctx, PlanOptions{}, alloc);
    CHECK(alloc.f1 == Catch::Approx(1e9));

    // Deviation-blind planning sizes without the compensation term.
    ctx.f_dev_exec = 5e8;
    plan_frequency(ctx, PlanOptions{}, alloc);
    CHECK(alloc.f1 == Catch::Approx(1.5e9));
    PlanOptions blind;
    blind.use_deviation = false;
    plan_frequency(ctx, blind, alloc);
    CHECK(alloc.f1 == Catch::Approx(1e9));

    // Pinned frequencies skip the capacity step entirely.
    PlanOptions pinned;
    pinned.optimize_frequency = false;
    plan_frequency(ctx, pinned, alloc);
    CHECK(alloc.f1 == 6e9);
}

TEST_CASE("allocated energy is nonincreasing when the window relaxes") {
    RngStream rng(43);
    for (int i = 0; i < 200; ++i) {
        const double bits = rng.uniform(1e6, 1e8);
        const double cpb = 30.0;
        const double window = rng.uniform(0.2, 0.8);
        const double f_dev = rng.uniform(-5e8, 5e8);
        const FrequencyDecision tight =
            minimal_feasible_frequency(bits, cpb, window, f_dev, 10e9);
        const FrequencyDecision relaxed =
            minimal_feasible_frequency(bits, cpb, 1.25 * window, f_dev, 10e9);
        if (!tight.feasible || !relaxed.feasible) continue;
        CHECK(compute_energy(bits, cpb, relaxed.f, f_dev, 1e-27) <=
              compute_energy(bits, cpb, tight.f, f_dev, 1e-27) *
                  (1.0 + 1e-12));
        CHECK(relaxed.f <= tight.f * (1.0 + 1e-12));
    }
}
