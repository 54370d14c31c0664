#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "uavnet/channel.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/rng.hpp"

namespace uavnet {

enum class FadingMode { deterministic, rayleigh };

// Positions of every entity at one time instant. UAVs share the altitude.
struct WorldState {
    std::vector<Point> ues;
    std::vector<Point> uavs;
    std::vector<Point> gbss;
    double altitude_h = 100.0;
    Area area{};
    int time_index = 0;

    std::size_t station_count() const { return uavs.size() + gbss.size(); }
    bool is_uav(std::size_t station) const { return station < uavs.size(); }
    // Combined station list: UAVs first, then GBSs.
    Point station(std::size_t station) const;

    // Throws ConfigError if an entity lies outside the area or altitude <= 0.
    void validate() const;
};

// serving[i] is the combined station index serving UE i.
struct Association {
    std::vector<std::size_t> serving;

    friend bool operator==(const Association&, const Association&) = default;
};

// Nearest station by horizontal distance, ties to the lowest combined index.
Association associate(const WorldState& state);

// Path loss from station to UE. GBS links use a 1 m reference distance floor.
double link_path_loss_db(const WorldState& state, std::size_t station, Point ue,
                         const channel::EnvParams& env);

// Per-UE Shannon rates. In rayleigh mode one unit-mean exponential gain is drawn
// per (UE, station) link, UE-major.
std::vector<double> ue_rates(const WorldState& state, const Association& assoc,
                             const channel::EnvParams& env, FadingMode mode, Rng& rng);

double sum_rate(const WorldState& state, const Association& assoc,
                const channel::EnvParams& env, FadingMode mode, Rng& rng);

// Deterministic-mode sum rate after re-association.
double sum_rate(const WorldState& state, const channel::EnvParams& env);

// CSV snapshot with header kind,index,x,y and kinds ue/uav/gbs.
void write_snapshot_csv(std::ostream& out, const WorldState& state);

} // namespace uavnet
