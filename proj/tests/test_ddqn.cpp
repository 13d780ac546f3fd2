#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <set>

#include "dtmec/ddqn.hpp"
#include "dtmec/verify.hpp"

using namespace dtmec;

namespace {

Mlp two_action_net(double w0, double w1) {
    Mlp net(std::vector<int>{1, 2});
    net.set_parameter(0, w0);
    net.set_parameter(1, w1);
    return net;
}

} // namespace

TEST_CASE("epsilon 0 exploits the argmax, ties to the lowest index") {
    RngStream rng(1);
    const Mlp net = two_action_net(1.0, 3.0);
    const std::vector<double> obs = {1.0};
    for (int i = 0; i < 50; ++i)
        CHECK(select_action(net, obs, 0.0, rng) == 1);
    const Mlp tied = two_action_net(2.0, 2.0);
    for (int i = 0; i < 50; ++i)
        CHECK(select_action(tied, obs, 0.0, rng) == 0);
}

TEST_CASE("epsilon 1 explores uniformly (chi-squared)") {
    RngStream rng(2);
    Mlp net(std::vector<int>{1, 4});
    const std::vector<double> obs = {1.0};
    std::array<int, 4> counts{0, 0, 0, 0};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[select_action(net, obs, 1.0, rng)];
    double chi2 = 0.0;
    const double expected = n / 4.0;
    for (int c : counts) chi2 += sq(c - expected) / expected;
    // 3 degrees of freedom, 99.9th percentile ~ 16.27.
    CHECK(chi2 < 16.27);
}

TEST_CASE("target rules: worked example and terminal handling") {
    // Q2(s') = [x, 2x]: with x = 1 the evaluated value of action 1 is 2.
    const Mlp predicted = two_action_net(0.5, 3.0); // argmax -> action 1
    const Mlp target = two_action_net(5.0, 2.0);
    const std::vector<double> s2 = {1.0};
    CHECK(ddqn_target(-1.0, s2, false, predicted, target, 0.9) ==
          Catch::Approx(-1.0 + 0.9 * 2.0));
    CHECK(ddqn_target(-1.0, s2, true, predicted, target, 0.9) == -1.0);
    CHECK(dqn_target(-1.0, s2, true, target, 0.9) == -1.0);
    // DQN takes the target's own max (5.0) instead.
    CHECK(dqn_target(-1.0, s2, false, target, 0.9) ==
          Catch::Approx(-1.0 + 0.9 * 5.0));

    // Identical networks: the rules coincide for random transitions.
    RngStream rng(3);
    Mlp net = Mlp::make(3, {8}, 4, rng);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> s = {rng.uniform(-1, 1), rng.uniform(-1, 1),
                                       rng.uniform(-1, 1)};
        const double r = rng.uniform(-2, 2);
        CHECK(ddqn_target(r, s, false, net, net, 0.9) ==
              dqn_target(r, s, false, net, 0.9));
    }
}

TEST_CASE("replay memory ring and no-replacement sampling") {
    ReplayMemory mem(8);
    CHECK_FALSE(mem.full());
    for (int i = 0; i < 8; ++i)
        mem.push(Transition{{double(i)}, i, 0.0, {double(i)}, false});
    CHECK(mem.full());
    CHECK(mem.size() == 8);
    // Overwrite wraps around without growing.
    mem.push(Transition{{99.0}, 99, 0.0, {99.0}, false});
    CHECK(mem.size() == 8);

    RngStream rng(4);
    const auto batch = mem.sample(8, rng);
    std::set<const Transition*> unique(batch.begin(), batch.end());
    CHECK(unique.size() == 8); // without replacement within the batch
    CHECK_THROWS_AS(mem.sample(9, rng), ModelError);
}

TEST_CASE("train_step: zero error leaves parameters unchanged") {
    RngStream rng(5);
    Mlp net = Mlp::make(2, {6}, 2, rng);
    const Mlp before = net;
    // Terminal transitions whose rewards equal the net's own predictions.
    std::vector<Transition> storage;
    for (int i = 0; i < 4; ++i) {
        const std::vector<double> s = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const int a = i % 2;
        storage.push_back(
            Transition{s, a, net.forward(s)[a], {0.0, 0.0}, true});
    }
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);
    const double loss =
        train_step(net, net, batch, 0.05, 0.9, TargetRule::Ddqn);
    CHECK(loss == Catch::Approx(0.0).margin(1e-24));
    CHECK(net == before);
}

TEST_CASE("train_step loss decreases on a frozen batch") {
    RngStream rng(6);
    Mlp net = Mlp::make(2, {8}, 2, rng);
    Mlp target = net;
    std::vector<Transition> storage;
    for (int i = 0; i < 16; ++i) {
        storage.push_back(Transition{{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                     static_cast<int>(rng.below(2)),
                                     rng.uniform(-2, 2),
                                     {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                     true}); // terminal: fixed targets
    }
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);
    const double first =
        train_step(net, target, batch, 0.05, 0.9, TargetRule::Ddqn);
    double prev = first;
    for (int i = 0; i < 100; ++i) {
        const double now =
            train_step(net, target, batch, 0.05, 0.9, TargetRule::Ddqn);
        CHECK(now <= prev * (1.0 + 1e-9));
        prev = now;
    }
    CHECK(prev < 0.5 * first);
}

TEST_CASE("sync_target copies exactly and is idempotent") {
    RngStream rng(7);
    const Mlp predicted = Mlp::make(3, {5}, 2, rng);
    Mlp target = Mlp::make(3, {5}, 2, rng);
    CHECK_FALSE(predicted == target);
    sync_target(predicted, target);
    CHECK(predicted == target);
    sync_target(predicted, target);
    CHECK(predicted == target);
    const std::vector<double> x = {0.1, -0.2, 0.6};
    CHECK(predicted.forward(x) == target.forward(x));
}

TEST_CASE("discount 0 learns the immediate rewards") {
    ToyMdp env;
    TrainConfig tc = toy_mdp_train_config();
    tc.discount = 0.0;
    RngStream rng(8);
    const TrainResult result = train(env, tc, TargetRule::Ddqn, rng);
    for (int s = 0; s < 2; ++s) {
        const std::vector<double> obs = {s == 0 ? 1.0 : 0.0,
                                         s == 1 ? 1.0 : 0.0};
        const std::vector<double> q = result.policy.forward(obs);
        for (int a = 0; a < 2; ++a)
            CHECK(q[a] == Catch::Approx(ToyMdp::reward(s, a)).margin(0.05));
    }
}

TEST_CASE("training is deterministic given a seed") {
    const auto run = [](std::uint64_t seed) {
        ToyMdp env;
        RngStream rng(seed);
        return train(env, toy_mdp_train_config(), TargetRule::Ddqn, rng);
    };
    const TrainResult a = run(11);
    const TrainResult b = run(11);
    REQUIRE(a.curve.size() == b.curve.size());
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
        REQUIRE(a.curve[i].total_reward == b.curve[i].total_reward);
        REQUIRE(a.curve[i].mean_loss == b.curve[i].mean_loss);
    }
    CHECK(a.policy == b.policy);
    const TrainResult c = run(12);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.curve.size(); ++i)
        if (a.curve[i].total_reward != c.curve[i].total_reward)
            any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("epsilon never rises and respects the floor") {
    ToyMdp env;
    TrainConfig tc = toy_mdp_train_config();
    RngStream rng(9);
    const TrainResult result = train(env, tc, TargetRule::Ddqn, rng);
    double prev = tc.epsilon_init;
    for (const EpisodeStats& row : result.curve) {
        CHECK(row.epsilon <= prev);
        CHECK(row.epsilon >= tc.epsilon_floor);
        prev = row.epsilon;
    }
    CHECK(result.curve.back().epsilon == tc.epsilon_floor);
}
