#include <catch2/catch_amalgamated.hpp>

#include "dtmec/allocator.hpp"
#include "dtmec/power_alloc.hpp"
#include "dtmec/rng.hpp"

using namespace dtmec;

namespace {
const LinkBudget kLink{0.0, 1e-7, 1e8, 1e-13};
}

TEST_CASE("snr threshold") {
    // D/(B*T) = 1 -> xi = 1.
    CHECK(snr_threshold(1e6, 1e8, 0.01) == Catch::Approx(1.0));
    CHECK(snr_threshold(2e6, 1e8, 0.01) == Catch::Approx(3.0));
    CHECK(std::isinf(snr_threshold(1e12, 1.0, 1e-9))); // overflow guard
}

TEST_CASE("device power: unit-SNR instance") {
    // Device compute takes none of the deadline (f huge), T window 0.01 s.
    TaskSpec task{1e6, 1.0, 0.01 + 1e6 / 1e15};
    const PowerSolution s =
        optimal_power_device(task, kLink, 1e15, 0.0, 10.0);
    REQUIRE(s.feasible);
    CHECK_FALSE(s.capped);
    CHECK(s.xi == Catch::Approx(1.0).epsilon(1e-6));
    CHECK(s.p_star == Catch::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("uncapped device power meets the deadline with equality") {
    RngStream rng(23);
    int verified = 0;
    for (int i = 0; i < 1000; ++i) {
        TaskSpec task;
        task.data_bits = rng.uniform(1e6, 2e8);
        task.cycles_per_bit = rng.uniform(1.0, 50.0);
        task.deadline_s = rng.uniform(0.5, 1.0);
        const double f_est = rng.uniform(4e9, 8e9);
        const double f_dev = f_est * rng.uniform(-0.2, 0.2);
        const LinkBudget link{0.0, rng.uniform(1e-9, 1e-6), 1e8, 1e-13};
        const double compute = actual_compute_time(
            task.data_bits, task.cycles_per_bit, f_est, f_dev);
        if (compute >= task.deadline_s) continue;
        const PowerSolution s = optimal_power_device(
            task, link, f_est, f_dev, std::numeric_limits<double>::max());
        if (!s.feasible || s.capped) continue; // xi overflow guard
        const double total =
            task.data_bits / link.rate(s.p_star) + compute;
        CHECK(std::abs(total - task.deadline_s) <= 1e-9 * task.deadline_s);
        ++verified;
    }
    CHECK(verified > 500);
}

TEST_CASE("analytic power above the cap returns p_max, flagged") {
    TaskSpec task{1e8, 1.0, 0.02}; // needs far more than p_max
    const PowerSolution s = optimal_power_device(task, kLink, 1e15, 0.0, 0.3);
    CHECK(s.capped);
    CHECK(s.p_star == 0.3);
    // Deadline cannot be met at the cap.
    CHECK(task.data_bits / kLink.rate(s.p_star) > task.deadline_s);
}

TEST_CASE("generous deadline drives the power to zero") {
    TaskSpec task{1e6, 1.0, 1e6};
    const PowerSolution s = optimal_power_device(task, kLink, 1e15, 0.0, 0.3);
    REQUIRE(s.feasible);
    CHECK(s.p_star < 1e-9);
    CHECK(s.xi < 1e-6);
}

TEST_CASE("nonpositive window is infeasible") {
    TaskSpec task{1e6, 1000.0, 0.5};
    // Compute alone exceeds the deadline.
    const PowerSolution s = optimal_power_device(task, kLink, 1e9, 0.0, 0.3);
    CHECK_FALSE(s.feasible);
    CHECK(s.capped);
    CHECK(s.p_star == 0.3);
}

TEST_CASE("bs power: substitution and deadline equality") {
    TaskSpec task{1e6, 1.0, 0.015};
    const PowerSolution s = optimal_power_bs(task, 0.005, kLink, 10.0);
    REQUIRE(s.feasible);
    CHECK(s.xi == Catch::Approx(1.0));
    CHECK(s.p_star == Catch::Approx(1e-6));
    // hop1 + hop2 = deadline
    CHECK(0.005 + task.data_bits / kLink.rate(s.p_star) ==
          Catch::Approx(task.deadline_s));

    // First hop consuming the whole deadline is infeasible.
    CHECK_FALSE(optimal_power_bs(task, 0.02, kLink, 10.0).feasible);

    // A stronger UAV-BS channel needs less power.
    const LinkBudget strong{0.0, 2e-7, 1e8, 1e-13};
    CHECK(optimal_power_bs(task, 0.005, strong, 10.0).p_star <
          s.p_star);
}

TEST_CASE("grid oracle confirms optimality of the closed form") {
    RngStream rng(29);
    int verified = 0;
    for (int i = 0; i < 200; ++i) {
        TaskSpec task;
        task.data_bits = rng.uniform(1e6, 1e8);
        task.cycles_per_bit = 1.0;
        task.deadline_s = rng.uniform(0.2, 1.0);
        const LinkBudget link{0.0, rng.uniform(1e-9, 1e-6), 1e8, 1e-13};
        const double fixed = rng.uniform(0.0, 0.5 * task.deadline_s);
        TaskSpec shifted = task;
        shifted.deadline_s -= fixed; // fold non-transmit time into the window
        const PowerSolution s = closed_form_power(
            task.data_bits, shifted.deadline_s, link.gain, link.bandwidth_hz,
            link.noise_w, 0.5);
        CHECK(verify_optimality(s, task.data_bits, link, 0.5, fixed,
                                task.deadline_s));
        if (s.feasible && !s.capped) ++verified;

        // A perturbed power costs strictly more transmission energy.
        if (s.feasible && !s.capped && 1.1 * s.p_star <= 0.5) {
            const double e_opt =
                transmit_outcome(task.data_bits, s.p_star, link).joules;
            const double e_pert =
                transmit_outcome(task.data_bits, 1.1 * s.p_star, link).joules;
            CHECK(e_pert > e_opt);
        }
    }
    CHECK(verified > 50); // the sweep covers genuinely feasible cases
}

TEST_CASE("p_star monotone: nonincreasing in gain, nondecreasing in bits") {
    RngStream rng(31);
    for (int i = 0; i < 200; ++i) {
        TaskSpec task;
        task.data_bits = rng.uniform(1e6, 1e8);
        task.cycles_per_bit = 1.0;
        task.deadline_s = rng.uniform(0.3, 1.0);
        const double gain = rng.uniform(1e-9, 1e-6);
        const auto solve = [&](double bits, double g) {
            return closed_form_power(bits, task.deadline_s, g, 1e8, 1e-13,
                                     std::numeric_limits<double>::max())
                .p_star;
        };
        CHECK(solve(task.data_bits, 2.0 * gain) <=
              solve(task.data_bits, gain));
        CHECK(solve(1.5 * task.data_bits, gain) >=
              solve(task.data_bits, gain));
    }
}

TEST_CASE("relay split is feasible and balanced for symmetric hops") {
    const RelaySplit split =
        choose_relay_split(1e6, 0.02, kLink, kLink, 1.0, 1.0);
    REQUIRE(split.feasible);
    // Symmetric links: the energy-optimal split is the midpoint.
    CHECK(split.t1 == Catch::Approx(0.01).epsilon(1e-3));

    // Infeasible when even p_max on both hops cannot make the deadline.
    const RelaySplit tight =
        choose_relay_split(1e9, 0.001, kLink, kLink, 0.3, 0.5);
    CHECK_FALSE(tight.feasible);
}

TEST_CASE("relay split beats or matches any grid split") {
    RngStream rng(37);
    for (int i = 0; i < 50; ++i) {
        const LinkBudget hop1{0.0, rng.uniform(1e-9, 1e-7), 1e8, 1e-13};
        const LinkBudget hop2{0.0, rng.uniform(1e-10, 1e-8), 1e8, 1e-13};
        const double bits = rng.uniform(1e6, 5e7);
        const double deadline = rng.uniform(0.3, 1.0);
        const RelaySplit split =
            choose_relay_split(bits, deadline, hop1, hop2, 0.3, 0.5);
        if (!split.feasible) continue;
        const auto hop_energy = [bits](const LinkBudget& l, double t) {
            const double xi = snr_threshold(bits, l.bandwidth_hz, t);
            return xi * l.noise_w / l.gain * t;
        };
        const double best =
            hop_energy(hop1, split.t1) + hop_energy(hop2, deadline - split.t1);
        const double t1_min = bits / hop1.rate(0.3);
        const double t1_max = deadline - bits / hop2.rate(0.5);
        for (int g = 0; g <= 100; ++g) {
            const double t1 = t1_min + (t1_max - t1_min) * g / 100.0;
            const double e =
                hop_energy(hop1, t1) + hop_energy(hop2, deadline - t1);
            CHECK(best <= e * (1.0 + 1e-6));
        }
    }
}
