#include <doctest.h>

#include <array>
#include <cmath>

#include "uavnet/error.hpp"
#include "uavnet/mobility.hpp"

using namespace uavnet;
using namespace uavnet::mobility;

TEST_CASE("init population") {
    Rng a(9), b(9);
    const Area area{5000, 5000};
    const auto p = init_population(500, area, a);
    const auto q = init_population(500, area, b);
    CHECK(p.positions == q.positions);
    for (const auto& pt : p.positions) CHECK(area.contains(pt));
    for (const auto& r : p.home_regions) CHECK(r == area.bounds());
    Rng c(1);
    CHECK_THROWS_AS(init_population(0, area, c), ConfigError);
}

TEST_CASE("quadrant counts are balanced") {
    Rng rng(2024);
    const Area area{1000, 1000};
    const std::size_t n = 10000;
    const auto p = init_population(n, area, rng);
    std::array<int, 4> q{};
    for (const auto& pt : p.positions) q[(pt.x > 500 ? 1 : 0) + (pt.y > 500 ? 2 : 0)]++;
    const double sigma = std::sqrt(n * 0.25 * 0.75);
    for (int c : q) CHECK(std::abs(c - n / 4.0) < 3 * sigma);
}

TEST_CASE("walk steps are unit and axis aligned") {
    Rng rng(3);
    const Area area{100, 100};
    auto cfg = MobilityConfig::for_horizon(area, 300);
    auto pop = init_population(50, area, rng);
    for (int t = 0; t < 300; ++t) {
        auto next = step_population(pop, cfg, t, rng);
        if (t != cfg.t1 && t != cfg.t2) {
            for (std::size_t i = 0; i < pop.size(); ++i) {
                const double dx = std::abs(next.positions[i].x - pop.positions[i].x);
                const double dy = std::abs(next.positions[i].y - pop.positions[i].y);
                CHECK((dx == 0.0 || dy == 0.0));
                CHECK((dx + dy == 0.0 || dx + dy == doctest::Approx(1.0)));
            }
        }
        for (std::size_t i = 0; i < next.size(); ++i)
            CHECK(next.home_regions[i].contains(next.positions[i]));
        pop = std::move(next);
    }
}

TEST_CASE("concentration at t1 puts exactly round(0.9 n) UEs in section 1") {
    Rng rng(77);
    const Area area{5000, 5000};
    auto cfg = MobilityConfig::for_horizon(area, 500);
    CHECK(cfg.t1 == 166);
    CHECK(cfg.t2 == 333);
    auto pop = init_population(500, area, rng);
    const auto after = step_population(pop, cfg, cfg.t1, rng);
    int homed = 0;
    for (std::size_t i = 0; i < after.size(); ++i) {
        if (after.home_regions[i] == cfg.section1) {
            ++homed;
            CHECK(cfg.section1.contains(after.positions[i]));
        } else {
            CHECK(after.positions[i] == pop.positions[i]);
        }
    }
    CHECK(homed == 450);
}

TEST_CASE("fraction zero keeps everyone in the area") {
    Rng rng(4);
    const Area area{20, 20};
    auto cfg = MobilityConfig::for_horizon(area, 400);
    cfg.concentrate_fraction = 0.0;
    auto pop = init_population(30, area, rng);
    for (int t = 0; t < 400; ++t) {
        pop = step_population(pop, cfg, t, rng);
        for (const auto& p : pop.positions) CHECK(area.contains(p));
    }
}

TEST_CASE("home regions change only at t1 and t2") {
    Rng rng(12);
    const Area area{1000, 1000};
    auto cfg = MobilityConfig::for_horizon(area, 90);
    auto pop = init_population(40, area, rng);
    for (int t = 0; t < 90; ++t) {
        auto next = step_population(pop, cfg, t, rng);
        const bool changed = next.home_regions != pop.home_regions;
        CHECK(changed == (t == cfg.t1 || t == cfg.t2));
        if (t == cfg.t2) {
            for (const auto& r : next.home_regions) CHECK(r == area.bounds());
        }
        pop = std::move(next);
    }
}

TEST_CASE("move distribution is uniform") {
    Rng rng(31);
    const Area area{1e6, 1e6};
    MobilityConfig cfg = MobilityConfig::for_horizon(area, 100000);
    auto pop = init_population(100, area, rng);
    std::array<int, kMoveCount> counts{};
    std::vector<Move> moves;
    for (int t = 0; t < 200; ++t) {
        moves.clear();
        pop = step_population(pop, cfg, t, rng, &moves);
        for (Move m : moves) counts[static_cast<int>(m)]++;
    }
    const double n = 200 * 100;
    const double sigma = std::sqrt(n * 0.2 * 0.8);
    for (int c : counts) CHECK(std::abs(c - n * 0.2) < 3 * sigma);
}

TEST_CASE("trajectory is deterministic") {
    const Area area{1000, 1000};
    const auto cfg = MobilityConfig::for_horizon(area, 60);
    Rng a(5), b(5);
    const auto ta = generate_trajectory(25, cfg, 60, a);
    const auto tb = generate_trajectory(25, cfg, 60, b);
    CHECK(ta.horizon() == 60);
    CHECK(ta.positions == tb.positions);
}

TEST_CASE("config validation") {
    auto cfg = MobilityConfig::for_horizon({1000, 1000}, 200);
    CHECK_NOTHROW(cfg.validate(200));
    cfg.concentrate_fraction = 1.5;
    CHECK_THROWS(cfg.validate(200));
}
