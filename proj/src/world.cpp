#include "uavnet/world.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uavnet/error.hpp"

namespace uavnet {

Point WorldState::station(std::size_t station) const {
    return is_uav(station) ? uavs[station] : gbss.at(station - uavs.size());
}

void WorldState::validate() const {
    if (!(altitude_h > 0.0)) throw ConfigError("world: altitude_h must be positive");
    auto check = [&](const std::vector<Point>& pts, const char* kind) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!area.contains(pts[i])) {
                throw ConfigError(fmt::format("world: {} {} at ({}, {}) lies outside the area", kind,
                                              i, pts[i].x, pts[i].y));
            }
        }
    };
    check(ues, "ue");
    check(uavs, "uav");
    check(gbss, "gbs");
}

Association associate(const WorldState& state) {
    const std::size_t stations = state.station_count();
    if (stations == 0) throw ConfigError("associate: no base stations");

    Association assoc;
    assoc.serving.resize(state.ues.size());
    for (std::size_t i = 0; i < state.ues.size(); ++i) {
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < stations; ++s) {
            const double d2 = squared_distance(state.ues[i], state.station(s));
            if (d2 < best_d2) {
                best_d2 = d2;
                best = s;
            }
        }
        assoc.serving[i] = best;
    }
    return assoc;
}

double link_path_loss_db(const WorldState& state, std::size_t station, Point ue,
                         const channel::EnvParams& env) {
    const double r = distance(ue, state.station(station));
    if (state.is_uav(station)) return channel::a2g_mean_pl_db(r, state.altitude_h, env);
    return channel::terrestrial_pl_db(std::max(r, 1.0), env);
}

std::vector<double> ue_rates(const WorldState& state, const Association& assoc,
                             const channel::EnvParams& env, FadingMode mode, Rng& rng) {
    const std::size_t stations = state.station_count();
    if (assoc.serving.size() != state.ues.size()) {
        throw ConfigError("sum_rate: association does not match the UE count");
    }
    const double noise_w = channel::dbm_to_watts(env.noise_dbm);

    std::vector<double> rates(state.ues.size(), 0.0);
    for (std::size_t i = 0; i < state.ues.size(); ++i) {
        const std::size_t serving = assoc.serving[i];
        double signal_w = 0.0;
        double interference_w = 0.0;
        double serving_pl = 0.0;
        for (std::size_t s = 0; s < stations; ++s) {
            const channel::LinkBudget link{
                state.is_uav(s) ? env.uav_tx_dbm : env.gbs_tx_dbm,
                link_path_loss_db(state, s, state.ues[i], env),
                mode == FadingMode::rayleigh ? rng.exponential() : 1.0,
            };
            if (s == serving) {
                signal_w = link.received_watts();
                serving_pl = link.path_loss_db;
            } else {
                interference_w += link.received_watts();
            }
        }
        if (env.pl_max_db && serving_pl > *env.pl_max_db) continue;
        rates[i] = channel::rate_bps(signal_w / (noise_w + interference_w), env.bandwidth_hz);
    }
    return rates;
}

double sum_rate(const WorldState& state, const Association& assoc,
                const channel::EnvParams& env, FadingMode mode, Rng& rng) {
    double total = 0.0;
    for (double r : ue_rates(state, assoc, env, mode, rng)) total += r;
    return total;
}

double sum_rate(const WorldState& state, const channel::EnvParams& env) {
    Rng unused(0);
    return sum_rate(state, associate(state), env, FadingMode::deterministic, unused);
}

void write_snapshot_csv(std::ostream& out, const WorldState& state) {
    out << "kind,index,x,y\n";
    auto emit = [&](const std::vector<Point>& pts, const char* kind) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            fmt::print(out, "{},{},{:.9g},{:.9g}\n", kind, i, pts[i].x, pts[i].y);
        }
    };
    emit(state.ues, "ue");
    emit(state.uavs, "uav");
    emit(state.gbss, "gbs");
}

} // namespace uavnet
