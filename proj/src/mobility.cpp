#include "uavnet/mobility.hpp"

#include <algorithm>

#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uavnet/error.hpp"

namespace uavnet::mobility {

MobilityConfig MobilityConfig::for_horizon(Area area, int horizon, double ue_step_m) {
    MobilityConfig cfg;
    cfg.ue_step_m = ue_step_m;
    cfg.area = area;
    cfg.t1 = horizon / 3;
    cfg.t2 = std::max(2 * horizon / 3, cfg.t1 + 1);
    cfg.section1 = area.section1();
    return cfg;
}

void MobilityConfig::validate(int horizon) const {
    if (!(ue_step_m >= 0.0)) throw ConfigError("mobility: ue_step_m must be >= 0");
    // Boundaries at or past the horizon never fire.
    if (!(0 <= t1 && t1 < t2)) {
        throw ConfigError(
            fmt::format("mobility: need 0 <= t1 < t2, got t1={} t2={} (T={})", t1, t2, horizon));
    }
    if (!(concentrate_fraction >= 0.0 && concentrate_fraction <= 1.0)) {
        throw ConfigError("mobility: concentrate_fraction must lie in [0, 1]");
    }
    if (!area.bounds().contains(section1) || section1.width() <= 0.0 || section1.height() <= 0.0) {
        throw ConfigError("mobility: section1 must be a non-empty rectangle inside the area");
    }
}

Point apply_move(Point p, Move m, double step) {
    switch (m) {
    case Move::right: return {p.x + step, p.y};
    case Move::left: return {p.x - step, p.y};
    case Move::forward: return {p.x, p.y + step};
    case Move::backward: return {p.x, p.y - step};
    case Move::stay: break;
    }
    return p;
}

namespace {

Point uniform_in(const Rect& r, Rng& rng) {
    const double x = rng.uniform(r.x0, r.x1);
    const double y = rng.uniform(r.y0, r.y1);
    return {x, y};
}

} // namespace

UePopulation init_population(std::size_t n_ues, Area area, Rng& rng) {
    if (n_ues == 0) throw ConfigError("init_population: n_ues must be positive");
    UePopulation pop;
    pop.positions.reserve(n_ues);
    for (std::size_t i = 0; i < n_ues; ++i) pop.positions.push_back(uniform_in(area.bounds(), rng));
    pop.home_regions.assign(n_ues, area.bounds());
    return pop;
}

UePopulation step_population(const UePopulation& pop, const MobilityConfig& cfg, int t, Rng& rng,
                             std::vector<Move>* moves_out) {
    UePopulation next = pop;
    const std::size_t n = pop.size();

    if (t == cfg.t1) {
        // Partial Fisher-Yates picks the concentrating UEs without replacement.
        const auto k = static_cast<std::size_t>(std::llround(cfg.concentrate_fraction * double(n)));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + rng.index(n - i);
            std::swap(order[i], order[j]);
        }
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t ue = order[i];
            next.home_regions[ue] = cfg.section1;
            next.positions[ue] = uniform_in(cfg.section1, rng);
        }
        return next;
    }
    if (t == cfg.t2) {
        for (std::size_t ue = 0; ue < n; ++ue) {
            next.home_regions[ue] = cfg.area.bounds();
            next.positions[ue] = uniform_in(cfg.area.bounds(), rng);
        }
        return next;
    }

    for (std::size_t ue = 0; ue < n; ++ue) {
        const Rect& home = next.home_regions[ue];
        Move m;
        Point p;
        do {
            m = static_cast<Move>(rng.index(kMoveCount));
            p = apply_move(pop.positions[ue], m, cfg.ue_step_m);
        } while (!home.contains(p));
        next.positions[ue] = p;
        if (moves_out) moves_out->push_back(m);
    }
    return next;
}

Trajectory generate_trajectory(std::size_t n_ues, const MobilityConfig& cfg, int horizon,
                               Rng& rng) {
    Trajectory traj;
    traj.positions.reserve(static_cast<std::size_t>(horizon) + 1);
    UePopulation pop = init_population(n_ues, cfg.area, rng);
    traj.positions.push_back(pop.positions);
    for (int t = 0; t < horizon; ++t) {
        pop = step_population(pop, cfg, t, rng);
        traj.positions.push_back(pop.positions);
    }
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,ue_index,x,y\n";
    for (std::size_t t = 0; t < traj.positions.size(); ++t) {
        const auto& pts = traj.positions[t];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            fmt::print(out, "{},{},{:.9g},{:.9g}\n", t, i, pts[i].x, pts[i].y);
        }
    }
}

} // namespace uavnet::mobility
