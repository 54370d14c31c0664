#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uavnet/channel.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/mobility.hpp"
#include "uavnet/world.hpp"

namespace uavnet {

enum class Scale { desk, paper };

Scale parse_scale(std::string_view name);

struct RunConfig {
    Area area{1000.0, 1000.0};
    std::size_t n_ues = 50;
    std::size_t n_uavs = 2;
    std::vector<Point> gbs_positions{{500.0, 500.0}};
    double altitude_h = 100.0;
    double uav_step_m = 1.0;
    int horizon = 200;  // time instants per episode
    int episodes = 2000;
    dqn::DqnHyperparams dqn{};
    channel::EnvParams env{};
    mobility::MobilityConfig mobility = mobility::MobilityConfig::for_horizon({1000.0, 1000.0}, 200);
    std::uint64_t seed = 1;
    FadingMode fading = FadingMode::deterministic;
    int init_grid = 25;
    // Replay one seeded UE trajectory every episode instead of redrawing the walk.
    bool replay_ue_trajectory = true;

    static RunConfig desk();
    static RunConfig paper();
    static RunConfig preset(Scale scale);

    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Flat document with dotted keys ("env.a", "dqn.batch_size", ...).
nlohmann::json to_json(const RunConfig& cfg);

// Overlays `doc` onto `base`. Unknown keys and wrong types raise ConfigError.
// Changing area or horizon without explicit mobility keys re-derives the phase
// boundaries and Section 1.
RunConfig apply_json(const nlohmann::json& doc, RunConfig base);

RunConfig load_config(const std::filesystem::path& path, Scale scale);

} // namespace uavnet
