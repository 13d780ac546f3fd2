#include <catch2/catch_amalgamated.hpp>

#include "dtmec/compute_model.hpp"
#include "dtmec/rng.hpp"

using namespace dtmec;

TEST_CASE("estimated execution time") {
    CHECK(estimated_time(1e6, 1000.0, 1e9) == Catch::Approx(1.0));
    CHECK(estimated_time(1e6, 1000.0, 2e9) == Catch::Approx(0.5));
    CHECK(estimated_time(0.0, 1000.0, 1e9) == 0.0);
    CHECK_THROWS_AS(estimated_time(1e6, 1000.0, 0.0), ModelError);
}

TEST_CASE("latency gap sign and value") {
    CHECK(latency_gap(1e6, 1000.0, 1e9, 0.0) == 0.0);
    // D*C = 1e9: gap = 1e9 * 1e8 / (1e9 * 9e8) s.
    CHECK(latency_gap(1e6, 1000.0, 1e9, 1e8) ==
          Catch::Approx(1.0 / 9.0).epsilon(1e-12));
    // Twin under-estimates capacity: negative gap.
    CHECK(latency_gap(1e6, 1000.0, 1e9, -1e8) < 0.0);
    CHECK_THROWS_AS(latency_gap(1e6, 1000.0, 1e9, 1e9), ModelError);
}

TEST_CASE("actual compute time equals D*C/(f_est - f_dev)") {
    CHECK(actual_compute_time(1e6, 1000.0, 1e9, 1e8) ==
          Catch::Approx(1e9 / 9e8).epsilon(1e-12));
    CHECK(actual_compute_time(1e6, 1000.0, 1e9, 0.0) ==
          Catch::Approx(estimated_time(1e6, 1000.0, 1e9)));

    RngStream rng(3);
    for (int i = 0; i < 10000; ++i) {
        const double bits = rng.uniform(1e5, 1e9);
        const double cpb = rng.uniform(1.0, 2000.0);
        const double f_est = rng.uniform(1e8, 1e10);
        const double f_dev = f_est * rng.uniform(-0.5, 0.5);
        const double direct = bits * cpb / (f_est - f_dev);
        const double composed = actual_compute_time(bits, cpb, f_est, f_dev);
        CHECK(std::abs(composed - direct) <= 1e-12 * direct);
    }
}

TEST_CASE("compute energy kappa*(f_est-f_dev)^2*C*D") {
    CHECK(compute_energy(1e6, 1000.0, 1e9, 0.0, 1e-26) ==
          Catch::Approx(10.0));
    // Halving the actual frequency quarters the energy.
    CHECK(compute_energy(1e6, 1000.0, 1e9, 0.5e9, 1e-26) ==
          Catch::Approx(2.5));
    CHECK(compute_energy(2e6, 1000.0, 1e9, 0.0, 1e-26) ==
          Catch::Approx(20.0)); // linear in D
}

TEST_CASE("transmit outcome") {
    const LinkBudget link{0.0, 1e-7, 1e8, 1e-13};
    // SNR 1 at p = 1e-6: rate 1e8 bit/s.
    const TransmitOutcome t = transmit_outcome(1e6, 1e-6, link);
    CHECK(t.seconds == Catch::Approx(0.01));
    CHECK(t.joules == Catch::Approx(1e-8));
    CHECK_THROWS_AS(transmit_outcome(1e6, 0.0, link), ModelError);
}

TEST_CASE("transmission energy nondecreasing in power") {
    RngStream rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const LinkBudget link{0.0, rng.uniform(1e-10, 1e-6), 1e8, 1e-13};
        double prev = 0.0;
        for (int i = 1; i <= 1000; ++i) {
            const double p = 0.5 * i / 1000.0;
            const double e = transmit_outcome(1e6, p, link).joules;
            CHECK(e >= prev);
            prev = e;
        }
    }
}

TEST_CASE("UAV flight and hover energy") {
    CHECK(uav_fly_energy({0, 0, 500}, {0, 0, 500}, 0.11, 20.0) == 0.0);
    CHECK(uav_fly_energy(100.0, 0.11, 20.0) == Catch::Approx(0.55));
    // Altitude does not contribute: flight is horizontal.
    CHECK(uav_fly_energy({0, 0, 500}, {60, 80, 500}, 0.11, 20.0) ==
          Catch::Approx(0.55));
    // Triangle inequality: the direct leg never costs more than a detour.
    const Location a{0, 0, 500}, b{300, 400, 500}, c{700, 100, 500};
    CHECK(uav_fly_energy(a, c, 0.11, 20.0) <=
          uav_fly_energy(a, b, 0.11, 20.0) +
              uav_fly_energy(b, c, 0.11, 20.0));

    CHECK(uav_hover_energy({0.3, 0.2}, 0.08) == Catch::Approx(0.04));
    CHECK(uav_hover_energy({}, 0.08) == 0.0);
    CHECK(uav_hover_energy({0.1, 0.2, 0.3}, 0.08) ==
          Catch::Approx(uav_hover_energy({0.1}, 0.08) +
                        uav_hover_energy({0.2, 0.3}, 0.08)));
}

namespace {

TaskContext base_context(Mode mode) {
    TaskContext ctx;
    ctx.mode = mode;
    ctx.task = TaskSpec{1e6, 1000.0, 0.05};
    ctx.kappa_exec = 1e-27;
    ctx.f_dev_exec = 0.0;
    ctx.f_max_exec = 6e9;
    ctx.f_est_exec = 6e9;
    ctx.p_max_mtu = 0.3;
    ctx.p_max_uav = 0.5;
    ctx.bandwidth_hz = 1e8;
    ctx.noise_w = 1e-13;
    ctx.fly_power_w = 0.11;
    ctx.hover_power_w = 0.08;
    ctx.uav_speed_mps = 20.0;
    return ctx;
}

} // namespace

TEST_CASE("local mode outcome with zero deviation") {
    TaskContext ctx = base_context(Mode::Local);
    Allocation alloc;
    alloc.f1 = 2e9;
    const ModeOutcome out = evaluate_mode(ctx, alloc);
    CHECK(out.compute_time == Catch::Approx(1e9 / 2e9));
    CHECK(out.total_latency == out.compute_time);
    CHECK(out.mtu_energy ==
          Catch::Approx(compute_energy(1e6, 1000.0, 2e9, 0.0, 1e-27)));
    CHECK(out.total_energy == out.mtu_energy);
    CHECK(out.transmit_time == 0.0);
}

TEST_CASE("device mode latency is transmit plus compute") {
    TaskContext ctx = base_context(Mode::Device);
    ctx.gain1 = 1e-7;
    Allocation alloc;
    alloc.p1 = 1e-6; // SNR 1 -> 0.01 s transmit
    alloc.f2 = 5e10; // 0.02 s compute
    const ModeOutcome out = evaluate_mode(ctx, alloc);
    CHECK(out.transmit_time == Catch::Approx(0.01));
    CHECK(out.compute_time == Catch::Approx(0.02));
    CHECK(out.total_latency ==
          Catch::Approx(out.transmit_time + out.compute_time));
    CHECK(out.total_energy ==
          Catch::Approx(out.mtu_energy + out.server_energy));
}

TEST_CASE("relay mode chains two hops") {
    TaskContext ctx = base_context(Mode::BsRelay);
    ctx.gain1 = 1e-7;
    ctx.gain2 = 1e-7;
    ctx.fly_dist_m = 0.0;
    Allocation alloc;
    alloc.p2 = 1e-6; // SNR 1 on both hops: 0.01 s each
    alloc.p3 = 1e-6;
    const ModeOutcome out = evaluate_mode(ctx, alloc);
    CHECK(out.transmit_time == Catch::Approx(0.02));
    CHECK(out.compute_time == 0.0);
    CHECK(out.uav_hover_energy == Catch::Approx(0.08 * 0.02));
    CHECK(out.total_energy ==
          Catch::Approx(out.mtu_energy + out.server_energy +
                        out.uav_hover_energy + out.uav_fly_energy));
}

TEST_CASE("UAV mode accrues hover for transmit plus compute") {
    TaskContext ctx = base_context(Mode::UavCompute);
    ctx.kappa_exec = 1e-26;
    ctx.gain1 = 1e-7;
    ctx.fly_dist_m = 100.0;
    Allocation alloc;
    alloc.p2 = 1e-6;
    alloc.f3 = 1e11;
    const ModeOutcome out = evaluate_mode(ctx, alloc);
    CHECK(out.uav_hover_energy ==
          Catch::Approx(0.08 * (out.transmit_time + out.compute_time)));
    CHECK(out.uav_fly_energy == Catch::Approx(0.55));
    CHECK(out.total_energy ==
          Catch::Approx(out.mtu_energy + out.server_energy +
                        out.uav_fly_energy + out.uav_hover_energy));
}

TEST_CASE("every outcome component is nonnegative on random inputs") {
    RngStream rng(17);
    for (int i = 0; i < 2000; ++i) {
        TaskContext ctx = base_context(Mode::Device);
        ctx.task.data_bits = rng.uniform(1e5, 1e8);
        ctx.task.cycles_per_bit = rng.uniform(1.0, 100.0);
        ctx.gain1 = rng.uniform(1e-10, 1e-6);
        ctx.f_dev_exec = ctx.f_est_exec * rng.uniform(-0.3, 0.3);
        Allocation alloc;
        alloc.p1 = rng.uniform(1e-6, 0.3);
        alloc.f2 = rng.uniform(1e8, 6e9);
        const ModeOutcome out = evaluate_mode(ctx, alloc);
        REQUIRE(out.mtu_energy >= 0.0);
        REQUIRE(out.server_energy >= 0.0);
        REQUIRE(out.uav_fly_energy >= 0.0);
        REQUIRE(out.uav_hover_energy >= 0.0);
        REQUIRE(out.total_energy ==
                out.mtu_energy + out.server_energy + out.uav_fly_energy +
                    out.uav_hover_energy);
    }
}
