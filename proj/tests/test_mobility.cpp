#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dtmec/mobility.hpp"

using namespace dtmec;

namespace {

MobilityConfig base_cfg() {
    MobilityConfig cfg;
    cfg.mu1 = 0.99;
    cfg.mu2 = 0.95;
    cfg.v_bar = 10.0;
    cfg.lambda_std = 2.0;
    cfg.gamma_std = 0.3;
    cfg.region_w = 1000.0;
    cfg.region_h = 1000.0;
    return cfg;
}

} // namespace

TEST_CASE("velocity memory cases") {
    MobilityConfig cfg = base_cfg();
    RngStream rng(1);

    cfg.mu1 = 1.0; // full memory: previous value survives exactly
    CHECK(step_velocity(7.25, cfg, rng) == 7.25);

    cfg.mu1 = 0.0;
    cfg.lambda_std = 0.0;
    cfg.lambda_mean = 0.0;
    CHECK(step_velocity(7.25, cfg, rng) == cfg.v_bar);
}

TEST_CASE("negative velocities clamp to zero") {
    MobilityConfig cfg = base_cfg();
    cfg.v_bar = 0.1;
    cfg.lambda_std = 50.0;
    RngStream rng(2);
    bool clamped = false;
    for (int i = 0; i < 1000; ++i) {
        const double v = step_velocity(0.1, cfg, rng);
        CHECK(v >= 0.0);
        if (v == 0.0) clamped = true;
    }
    CHECK(clamped);
}

TEST_CASE("long-run mean velocity approaches v_bar") {
    for (double mu1 : {0.0, 0.5, 0.99}) {
        MobilityConfig cfg = base_cfg();
        cfg.mu1 = mu1;
        RngStream rng(3);
        double v = cfg.v_bar;
        double sum = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            v = step_velocity(v, cfg, rng);
            sum += v;
        }
        const double mean = sum / n;
        // AR(1) sample-mean standard error with correlation mu1.
        const double se = cfg.lambda_std *
                          std::sqrt((1.0 + mu1) / (1.0 - mu1) / n);
        CHECK(std::abs(mean - cfg.v_bar) <= 2.576 * se + 1e-3);
    }
}

TEST_CASE("direction memory cases and wrapping") {
    MobilityConfig cfg = base_cfg();
    RngStream rng(4);

    cfg.mu2 = 1.0;
    CHECK(step_direction(0.7, 5.0, 0.1, cfg, rng) == Catch::Approx(0.7));

    cfg.mu2 = 0.0;
    cfg.gamma_std = 0.0;
    cfg.gamma_mean = 0.0;
    CHECK(step_direction(0.7, 5.0, 0.1, cfg, rng) == Catch::Approx(0.1));

    cfg = base_cfg();
    for (int i = 0; i < 1000; ++i) {
        const double theta =
            step_direction(rng.uniform(-10.0, 10.0), rng.uniform(0.0, 20.0),
                           rng.uniform(-M_PI, M_PI), cfg, rng);
        CHECK(theta > -M_PI);
        CHECK(theta <= M_PI);
    }
}

TEST_CASE("printed direction recursion is selectable") {
    MobilityConfig cfg = base_cfg();
    cfg.literal_direction_update = true;
    cfg.mu2 = 1.0;
    RngStream rng(5);
    // Memory term feeds the previous velocity, not the previous direction.
    const double theta = step_direction(0.7, 2.0, 0.1, cfg, rng);
    CHECK(theta == Catch::Approx(wrap_angle(2.0)));
}

TEST_CASE("position updates") {
    MobilityConfig cfg = base_cfg();
    MtuKinematics kin;
    kin.location = {100.0, 100.0, 0.0};

    kin.v = 0.0;
    CHECK(update_position(kin, 1.0, cfg).x == 100.0);
    CHECK(update_position(kin, 1.0, cfg).y == 100.0);

    kin.v = 10.0;
    kin.theta = 0.0;
    CHECK(update_position(kin, 1.0, cfg).x == Catch::Approx(110.0));
    CHECK(update_position(kin, 1.0, cfg).y == Catch::Approx(100.0));

    kin.theta = M_PI / 2.0;
    const Location up = update_position(kin, 2.0, cfg);
    CHECK(up.y == Catch::Approx(120.0));
    CHECK(up.x == Catch::Approx(100.0));

    CHECK_THROWS_AS(update_position(kin, 0.0, cfg), ModelError);
}

TEST_CASE("positions stay inside the region over 1e5 random steps") {
    MobilityConfig cfg = base_cfg();
    cfg.v_bar = 30.0;
    cfg.lambda_std = 10.0;
    RngStream rng(6);
    MtuKinematics kin;
    kin.location = {500.0, 500.0, 0.0};
    kin.v = cfg.v_bar;
    for (int i = 0; i < 100000; ++i) {
        advance_mobility(kin, 0.3, 1.0, cfg, rng);
        REQUIRE(kin.location.x >= 0.0);
        REQUIRE(kin.location.x <= cfg.region_w);
        REQUIRE(kin.location.y >= 0.0);
        REQUIRE(kin.location.y <= cfg.region_h);
    }
}

TEST_CASE("trajectories are bit-identical for a fixed seed") {
    MobilityConfig cfg = base_cfg();
    RngStream r1(42), r2(42);
    MtuKinematics a, b;
    a.location = b.location = {500.0, 500.0, 0.0};
    a.v = b.v = cfg.v_bar;
    for (int i = 0; i < 1000; ++i) {
        advance_mobility(a, 0.3, 1.0, cfg, r1);
        advance_mobility(b, 0.3, 1.0, cfg, r2);
        REQUIRE(a.location.x == b.location.x);
        REQUIRE(a.location.y == b.location.y);
        REQUIRE(a.v == b.v);
        REQUIRE(a.theta == b.theta);
    }
}
