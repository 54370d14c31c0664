#include "uavnet/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <fmt/format.h>

#include "uavnet/error.hpp"

namespace uavnet {

using nlohmann::json;

Scale parse_scale(std::string_view name) {
    if (name == "desk") return Scale::desk;
    if (name == "paper") return Scale::paper;
    throw ConfigError(fmt::format("unknown scale '{}' (expected desk or paper)", name));
}

RunConfig RunConfig::desk() { return RunConfig{}; }

RunConfig RunConfig::paper() {
    RunConfig cfg;
    cfg.area = {5000.0, 5000.0};
    cfg.n_ues = 500;
    cfg.n_uavs = 4;
    cfg.gbs_positions = {{2500.0, 2500.0}};
    cfg.horizon = 500;
    cfg.episodes = 50000;
    cfg.mobility = mobility::MobilityConfig::for_horizon(cfg.area, cfg.horizon);
    return cfg;
}

RunConfig RunConfig::preset(Scale scale) { return scale == Scale::paper ? paper() : desk(); }

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("config: " + what);
    };
    require(area.width > 0.0 && area.height > 0.0, "area must be positive");
    require(n_ues >= 1, "n_ues must be >= 1");
    require(n_uavs >= 1, "n_uavs must be >= 1");
    require(altitude_h > 0.0, "altitude_h must be positive");
    require(uav_step_m > 0.0, "uav_step_m must be positive");
    require(horizon >= 1, "T must be >= 1");
    require(episodes >= 1, "episodes must be >= 1");
    require(init_grid >= 2, "init_grid must be >= 2");
    for (const Point& g : gbs_positions) {
        require(area.contains(g), fmt::format("GBS at ({}, {}) lies outside the area", g.x, g.y));
    }
    require(mobility.area == area, "mobility area must match the world area");
    dqn.validate();
    env.validate();
    mobility.validate(horizon);
}

json to_json(const RunConfig& cfg) {
    json gbs = json::array();
    for (const Point& g : cfg.gbs_positions) gbs.push_back({g.x, g.y});
    const auto& m = cfg.mobility;
    json doc = {
        {"area.width", cfg.area.width},
        {"area.height", cfg.area.height},
        {"world.n_ues", cfg.n_ues},
        {"world.n_uavs", cfg.n_uavs},
        {"world.gbs_positions", gbs},
        {"world.altitude_h", cfg.altitude_h},
        {"world.uav_step_m", cfg.uav_step_m},
        {"env.a", cfg.env.a},
        {"env.b", cfg.env.b},
        {"env.eta_los_db", cfg.env.eta_los_db},
        {"env.eta_nlos_db", cfg.env.eta_nlos_db},
        {"env.carrier_hz", cfg.env.carrier_hz},
        {"env.terrestrial_alpha", cfg.env.terrestrial_alpha},
        {"env.terrestrial_eta_db", cfg.env.terrestrial_eta_db},
        {"env.bandwidth_hz", cfg.env.bandwidth_hz},
        {"env.noise_dbm", cfg.env.noise_dbm},
        {"env.uav_tx_dbm", cfg.env.uav_tx_dbm},
        {"env.gbs_tx_dbm", cfg.env.gbs_tx_dbm},
        {"env.pl_max_db", cfg.env.pl_max_db ? json(*cfg.env.pl_max_db) : json(nullptr)},
        {"mobility.ue_step_m", m.ue_step_m},
        {"mobility.t1", m.t1},
        {"mobility.t2", m.t2},
        {"mobility.concentrate_fraction", m.concentrate_fraction},
        {"mobility.section1", {m.section1.x0, m.section1.y0, m.section1.x1, m.section1.y1}},
        {"mobility.replay_ue_trajectory", cfg.replay_ue_trajectory},
        {"dqn.learning_rate", cfg.dqn.learning_rate},
        {"dqn.gamma", cfg.dqn.gamma},
        {"dqn.capacity", cfg.dqn.capacity},
        {"dqn.batch_size", cfg.dqn.batch_size},
        {"dqn.target_sync", cfg.dqn.target_sync},
        {"dqn.epsilon", cfg.dqn.epsilon},
        {"dqn.epsilon_decay", cfg.dqn.epsilon_decay},
        {"dqn.epsilon_min", cfg.dqn.epsilon_min},
        {"sim.T", cfg.horizon},
        {"sim.episodes", cfg.episodes},
        {"sim.seed", cfg.seed},
        {"sim.fading", cfg.fading == FadingMode::rayleigh ? "rayleigh" : "deterministic"},
        {"sim.init_grid", cfg.init_grid},
    };
    return doc;
}

namespace {

template <class T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("config key '{}': wrong value type ({})", key, v.dump()));
    }
}

Point get_point(const json& v, const std::string& key) {
    const auto xy = get_as<std::vector<double>>(v, key);
    if (xy.size() != 2) throw ConfigError(fmt::format("config key '{}': expected [x, y]", key));
    return {xy[0], xy[1]};
}

} // namespace

RunConfig apply_json(const json& doc, RunConfig cfg) {
    if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");

    const auto& m_before = cfg.mobility;
    const auto base_derived = mobility::MobilityConfig::for_horizon(cfg.area, cfg.horizon);
    const bool mobility_was_derived = m_before.t1 == base_derived.t1 &&
                                      m_before.t2 == base_derived.t2 &&
                                      m_before.section1 == base_derived.section1;
    std::set<std::string> mobility_keys;

    for (const auto& [key, v] : doc.items()) {
        if (key == "area.width") cfg.area.width = get_as<double>(v, key);
        else if (key == "area.height") cfg.area.height = get_as<double>(v, key);
        else if (key == "world.n_ues") cfg.n_ues = get_as<std::size_t>(v, key);
        else if (key == "world.n_uavs") cfg.n_uavs = get_as<std::size_t>(v, key);
        else if (key == "world.gbs_positions") {
            if (!v.is_array()) throw ConfigError("config key 'world.gbs_positions': expected a list");
            cfg.gbs_positions.clear();
            for (const auto& p : v) cfg.gbs_positions.push_back(get_point(p, key));
        }
        else if (key == "world.altitude_h") cfg.altitude_h = get_as<double>(v, key);
        else if (key == "world.uav_step_m") cfg.uav_step_m = get_as<double>(v, key);
        else if (key == "env.a") cfg.env.a = get_as<double>(v, key);
        else if (key == "env.b") cfg.env.b = get_as<double>(v, key);
        else if (key == "env.eta_los_db") cfg.env.eta_los_db = get_as<double>(v, key);
        else if (key == "env.eta_nlos_db") cfg.env.eta_nlos_db = get_as<double>(v, key);
        else if (key == "env.carrier_hz") cfg.env.carrier_hz = get_as<double>(v, key);
        else if (key == "env.terrestrial_alpha") cfg.env.terrestrial_alpha = get_as<double>(v, key);
        else if (key == "env.terrestrial_eta_db") cfg.env.terrestrial_eta_db = get_as<double>(v, key);
        else if (key == "env.bandwidth_hz") cfg.env.bandwidth_hz = get_as<double>(v, key);
        else if (key == "env.noise_dbm") cfg.env.noise_dbm = get_as<double>(v, key);
        else if (key == "env.uav_tx_dbm") cfg.env.uav_tx_dbm = get_as<double>(v, key);
        else if (key == "env.gbs_tx_dbm") cfg.env.gbs_tx_dbm = get_as<double>(v, key);
        else if (key == "env.pl_max_db") {
            if (v.is_null()) cfg.env.pl_max_db.reset();
            else cfg.env.pl_max_db = get_as<double>(v, key);
        }
        else if (key.starts_with("mobility.") && key != "mobility.replay_ue_trajectory") {
            mobility_keys.insert(key);
            if (key == "mobility.ue_step_m") cfg.mobility.ue_step_m = get_as<double>(v, key);
            else if (key == "mobility.t1") cfg.mobility.t1 = get_as<int>(v, key);
            else if (key == "mobility.t2") cfg.mobility.t2 = get_as<int>(v, key);
            else if (key == "mobility.concentrate_fraction") cfg.mobility.concentrate_fraction = get_as<double>(v, key);
            else if (key == "mobility.section1") {
                const auto r = get_as<std::vector<double>>(v, key);
                if (r.size() != 4) throw ConfigError("config key 'mobility.section1': expected [x0, y0, x1, y1]");
                cfg.mobility.section1 = {r[0], r[1], r[2], r[3]};
            }
            else throw ConfigError(fmt::format("config: unknown key '{}'", key));
        }
        else if (key == "mobility.replay_ue_trajectory") cfg.replay_ue_trajectory = get_as<bool>(v, key);
        else if (key == "dqn.learning_rate") cfg.dqn.learning_rate = get_as<double>(v, key);
        else if (key == "dqn.gamma") cfg.dqn.gamma = get_as<double>(v, key);
        else if (key == "dqn.capacity") cfg.dqn.capacity = get_as<std::size_t>(v, key);
        else if (key == "dqn.batch_size") cfg.dqn.batch_size = get_as<std::size_t>(v, key);
        else if (key == "dqn.target_sync") cfg.dqn.target_sync = get_as<std::uint64_t>(v, key);
        else if (key == "dqn.epsilon") cfg.dqn.epsilon = get_as<double>(v, key);
        else if (key == "dqn.epsilon_decay") cfg.dqn.epsilon_decay = get_as<double>(v, key);
        else if (key == "dqn.epsilon_min") cfg.dqn.epsilon_min = get_as<double>(v, key);
        else if (key == "sim.T") cfg.horizon = get_as<int>(v, key);
        else if (key == "sim.episodes") cfg.episodes = get_as<int>(v, key);
        else if (key == "sim.seed") cfg.seed = get_as<std::uint64_t>(v, key);
        else if (key == "sim.fading") {
            const auto s = get_as<std::string>(v, key);
            if (s == "deterministic") cfg.fading = FadingMode::deterministic;
            else if (s == "rayleigh") cfg.fading = FadingMode::rayleigh;
            else throw ConfigError(fmt::format("config key 'sim.fading': unknown mode '{}'", s));
        }
        else if (key == "sim.init_grid") cfg.init_grid = get_as<int>(v, key);
        else throw ConfigError(fmt::format("config: unknown key '{}'", key));
    }

    // Keep derived scenario geometry in step with the area and horizon unless
    // the document pins it.
    cfg.mobility.area = cfg.area;
    if (mobility_was_derived) {
        const auto derived = mobility::MobilityConfig::for_horizon(cfg.area, cfg.horizon);
        if (!mobility_keys.contains("mobility.t1")) cfg.mobility.t1 = derived.t1;
        if (!mobility_keys.contains("mobility.t2")) cfg.mobility.t2 = derived.t2;
        if (!mobility_keys.contains("mobility.section1")) cfg.mobility.section1 = derived.section1;
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, Scale scale) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("config file not found: {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config {}: {}", path.string(), e.what()));
    }
    return apply_json(doc, RunConfig::preset(scale));
}

} // namespace uavnet
