#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include "uavnet/dqn.hpp"
#include "uavnet/error.hpp"

using namespace uavnet;
using namespace uavnet::dqn;

namespace {

QValues oracle_forward(const QNetwork& n, const State& s) {
    double h[kHidden];
    for (std::size_t i = 0; i < kHidden; ++i) {
        const double z = n.w1(i, 0) * s[0] + n.w1(i, 1) * s[1] + n.b1(i);
        h[i] = z > 0 ? z : 0;
    }
    QValues q{};
    for (std::size_t a = 0; a < kActions; ++a) {
        q[a] = n.b2(a);
        for (std::size_t i = 0; i < kHidden; ++i) q[a] += n.w2(a, i) * h[i];
    }
    return q;
}

std::vector<Transition> random_batch(Rng& rng, std::size_t n) {
    std::vector<Transition> b(n);
    for (auto& t : b) {
        t.state = {rng.uniform(), rng.uniform()};
        t.next_state = {rng.uniform(), rng.uniform()};
        t.action = rng.index(kActions);
        t.reward = rng.uniform(-1, 1);
    }
    return b;
}

} // namespace

TEST_CASE("forward trivia") {
    QNetwork n;
    CHECK(forward(n, {0.3, 0.4}) == QValues{0, 0, 0, 0, 0});
    for (std::size_t a = 0; a < kActions; ++a) n.b2(a) = double(a + 1);
    CHECK(forward(n, {0.9, 0.1}) == QValues{1, 2, 3, 4, 5});
    CHECK_THROWS_AS(forward(n, {NAN, 0.0}), DomainError);
    CHECK_THROWS_AS(forward(n, {0.0, INFINITY}), DomainError);
}

TEST_CASE("forward matches oracle") {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        QNetwork n = QNetwork::glorot(rng);
        for (auto& p : n.params()) p += rng.uniform(-0.5, 0.5);
        const State s{rng.uniform(), rng.uniform()};
        const auto q = forward(n, s);
        const auto o = oracle_forward(n, s);
        for (std::size_t a = 0; a < kActions; ++a) CHECK(std::abs(q[a] - o[a]) < 1e-12);
    }
}

TEST_CASE("glorot init") {
    Rng rng(2);
    const QNetwork n = QNetwork::glorot(rng);
    const double l1 = std::sqrt(6.0 / (kInputs + kHidden));
    const double l2 = std::sqrt(6.0 / (kHidden + kActions));
    for (std::size_t i = 0; i < kHidden; ++i) {
        CHECK(n.b1(i) == 0.0);
        for (std::size_t j = 0; j < kInputs; ++j) CHECK(std::abs(n.w1(i, j)) <= l1);
    }
    for (std::size_t a = 0; a < kActions; ++a) {
        CHECK(n.b2(a) == 0.0);
        for (std::size_t i = 0; i < kHidden; ++i) CHECK(std::abs(n.w2(a, i)) <= l2);
    }
    CHECK(kParamCount == 85);
}

TEST_CASE("action selection") {
    Rng rng(3);
    CHECK(select_action({0.1, 0.9, 0.2, 0.3, 0.4}, 0.0, rng) == 1);
    CHECK(select_action({1, 1, 0, 0, 0}, 0.0, rng) == 0);

    std::array<int, kActions> c{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) c[select_action({5, 0, 0, 0, 0}, 1.0, rng)]++;
    const double sigma = std::sqrt(n * 0.2 * 0.8);
    for (int k : c) CHECK(std::abs(k - n * 0.2) < 3 * sigma);
}

TEST_CASE("td targets") {
    Rng rng(4);
    auto batch = random_batch(rng, 8);
    const QNetwork target = QNetwork::glorot(rng);
    auto y = td_targets(batch, target, 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) CHECK(y[i] == batch[i].reward);
    y = td_targets(batch, QNetwork{}, 0.9);
    for (std::size_t i = 0; i < batch.size(); ++i) CHECK(y[i] == batch[i].reward);

    QNetwork two;
    two.b2(3) = 2.0;
    std::vector<Transition> one{{{0.5, 0.5}, 0, 1.0, {0.1, 0.2}}};
    CHECK(td_targets(one, two, 0.9)[0] == doctest::Approx(2.8).epsilon(1e-15));
    CHECK_THROWS_AS(td_targets({}, two, 0.9), DomainError);
}

TEST_CASE("gradient matches central differences") {
    Rng rng(5);
    const double h = 1e-5;
    for (int trial = 0; trial < 12; ++trial) {
        QNetwork n = QNetwork::glorot(rng);
        for (std::size_t i = 0; i < kHidden; ++i) n.b1(i) = rng.uniform(-0.3, 0.3);
        auto batch = random_batch(rng, 16);
        std::vector<double> y(batch.size());
        for (auto& v : y) v = rng.uniform(-2, 2);
        Gradient g{};
        loss_and_gradient(n, batch, y, &g);
        for (std::size_t p = 0; p < kParamCount; ++p) {
            QNetwork plus = n, minus = n;
            plus.params()[p] += h;
            minus.params()[p] -= h;
            const double fd = (loss_and_gradient(plus, batch, y, nullptr) -
                               loss_and_gradient(minus, batch, y, nullptr)) / (2 * h);
            const double denom = std::max({std::abs(fd), std::abs(g[p]), 1e-8});
            CHECK(std::abs(fd - g[p]) / denom < 1e-4);
        }
    }
}

TEST_CASE("zero learning rate is a no-op") {
    Rng rng(6);
    QNetwork n = QNetwork::glorot(rng);
    const QNetwork before = n;
    auto batch = random_batch(rng, 5);
    std::vector<double> y(5, 1.0);
    const double l0 = train_step(n, batch, y, 0.0);
    CHECK(n == before);
    CHECK(train_step(n, batch, y, 0.0) == l0);
}

TEST_CASE("single sample regression converges") {
    Rng rng(7);
    QNetwork n = QNetwork::glorot(rng);
    std::vector<Transition> b{{{0.3, 0.7}, 2, 0.0, {0.0, 0.0}}};
    std::vector<double> y{1.0};
    double prev = 0.0;
    double last = 0.0;
    for (int i = 0; i < 200; ++i) {
        last = train_step(n, b, y, 0.01);
        if (i > 10) CHECK(last <= prev + 1e-15);
        prev = last;
    }
    CHECK(loss_and_gradient(n, b, y, nullptr) < 1e-3);
}

TEST_CASE("non-finite gradient aborts") {
    QNetwork n;
    n.b2(0) = 1e300;
    std::vector<Transition> b{{{0.3, 0.7}, 0, 0.0, {0.0, 0.0}}};
    std::vector<double> y{-std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(train_step(n, b, y, 0.01), TrainingError);
}

TEST_CASE("target copy is frozen") {
    Rng rng(8);
    QNetwork online = QNetwork::glorot(rng);
    const QNetwork target = sync_target(online);
    const State s{0.2, 0.9};
    CHECK(forward(online, s) == forward(target, s));
    auto batch = random_batch(rng, 4);
    std::vector<double> y(4, 3.0);
    const auto before = forward(target, s);
    train_step(online, batch, y, 0.01);
    CHECK(forward(target, s) == before);
    CHECK(forward(online, s) != before);
}

TEST_CASE("replay buffer FIFO") {
    ReplayBuffer buf(3);
    for (int i = 0; i < 4; ++i) buf.push({{0, 0}, 0, double(i), {0, 0}});
    CHECK(buf.size() == 3);
    CHECK(buf.at(0).reward == 1.0);
    CHECK(buf.at(2).reward == 3.0);
    Rng rng(1);
    CHECK_FALSE(buf.sample(4, rng).has_value());
    CHECK_THROWS(buf.push({{0, 0}, 5, 0.0, {0, 0}}));
}

TEST_CASE("replay sampling is distinct and uniform") {
    const std::size_t cap = 100, batch = 10;
    ReplayBuffer buf(cap);
    for (std::size_t i = 0; i < cap; ++i) buf.push({{0, 0}, 0, double(i), {0, 0}});
    Rng rng(9);
    std::vector<int> hits(cap);
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        auto s = buf.sample(batch, rng);
        REQUIRE(s.has_value());
        std::set<double> seen;
        for (const auto& t : *s) {
            seen.insert(t.reward);
            hits[std::size_t(t.reward)]++;
        }
        CHECK(seen.size() == batch);
    }
    const double p = double(batch) / cap;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (int h : hits) CHECK(std::abs(h - n * p) < 3.5 * sigma);
}

TEST_CASE("agent trains once the buffer holds a batch and syncs every C steps") {
    DqnHyperparams hp;
    hp.batch_size = 4;
    hp.target_sync = 10;
    Agent agent(hp, 11);
    Rng rng(2);
    for (int i = 1; i <= 35; ++i) {
        const QNetwork prev_target = agent.target();
        const auto r = agent.observe({{rng.uniform(), rng.uniform()}, rng.index(5), 1.0,
                                      {rng.uniform(), rng.uniform()}});
        CHECK(r.trained == (i >= 4));
        CHECK(r.synced == (i % 10 == 0));
        if (r.synced) {
            CHECK(agent.target() == agent.online());
        } else {
            CHECK(agent.target() == prev_target);
        }
    }
    CHECK(agent.steps() == 35);
    CHECK(agent.gradient_steps() == 32);
}

TEST_CASE("agent training is deterministic") {
    auto run = [] {
        Agent agent(DqnHyperparams{}, 99);
        Rng rng(5);
        for (int i = 0; i < 400; ++i) {
            const State s{rng.uniform(), rng.uniform()};
            agent.observe({s, agent.act(s), rng.uniform() < 0.5 ? 1.0 : -1.0,
                           {rng.uniform(), rng.uniform()}});
        }
        return agent.online();
    };
    CHECK(run() == run());
}

TEST_CASE("checkpoint round-trip") {
    Rng rng(10);
    QNetwork n = QNetwork::glorot(rng);
    for (auto& p : n.params()) p += rng.uniform(-1e-3, 1e-3);
    std::stringstream ss;
    write_checkpoint(ss, n);
    std::string first;
    std::getline(ss, first);
    CHECK(first == "qnet v1 2 10 5");
    ss.seekg(0);
    CHECK(read_checkpoint(ss) == n);

    const auto path = std::filesystem::temp_directory_path() / "uavnet_test.qnet";
    save_checkpoint(path, n);
    CHECK(load_checkpoint(path) == n);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_checkpoint(path), ConfigError);
}

TEST_CASE("malformed checkpoint names the line") {
    std::stringstream ss("qnet v1 2 10 5\n0.1 0.2\n0.3 oops\n");
    try {
        read_checkpoint(ss);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::stringstream bad("qnet v2 2 10 5\n");
    CHECK_THROWS_AS(read_checkpoint(bad), ParseError);
}
