#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "uavnet/geometry.hpp"
#include "uavnet/rng.hpp"

namespace uavnet::mobility {

struct MobilityConfig {
    double ue_step_m = 1.0;
    Area area{};
    // Concentration starts at t1, uniform redistribution at t2.
    int t1 = 0;
    int t2 = 0;
    double concentrate_fraction = 0.9;
    Rect section1{};

    // Defaults for a T-step horizon: t1 = T/3, t2 = 2T/3, section1 = lower-left quadrant.
    static MobilityConfig for_horizon(Area area, int horizon, double ue_step_m = 1.0);

    void validate(int horizon) const;

    friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

struct UePopulation {
    std::vector<Point> positions;
    std::vector<Rect> home_regions;

    std::size_t size() const { return positions.size(); }
};

// Random-walk moves, in order: +x, -x, +y, -y, stay.
enum class Move : int { right = 0, left, forward, backward, stay };
inline constexpr int kMoveCount = 5;

Point apply_move(Point p, Move m, double step);

UePopulation init_population(std::size_t n_ues, Area area, Rng& rng);

// One time instant. Illegal moves (leaving the home region) are redrawn.
// Per-UE chosen moves are appended to `moves_out` when non-null.
UePopulation step_population(const UePopulation& pop, const MobilityConfig& cfg, int t, Rng& rng,
                             std::vector<Move>* moves_out = nullptr);

// positions[0] is the initial layout; positions[t + 1] follows step t.
struct Trajectory {
    std::vector<std::vector<Point>> positions;

    int horizon() const { return static_cast<int>(positions.size()) - 1; }
};

Trajectory generate_trajectory(std::size_t n_ues, const MobilityConfig& cfg, int horizon,
                               Rng& rng);

// CSV with header t,ue_index,x,y.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

} // namespace uavnet::mobility
