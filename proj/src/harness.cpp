#include "uavnet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "uavnet/error.hpp"

namespace uavnet::sim {

using policies::PolicyKind;

namespace {

// Named sub-streams of the run seed.
enum Stream : std::uint64_t {
    kMobilityStream = 1,
    kFadingStream = 2,
    kKmeansStream = 3,
    kWalkStream = 1000,
    kAgentStream = 100,
};

} // namespace

double reward(double prev_sum_rate, double new_sum_rate) {
    const double scale = std::max(std::abs(prev_sum_rate), std::abs(new_sum_rate));
    if (std::abs(new_sum_rate - prev_sum_rate) <= 1e-9 * scale) return kRewardSame;
    return new_sum_rate > prev_sum_rate ? kRewardUp : kRewardDown;
}

std::vector<Point> lattice_points(Area area, int grid_resolution) {
    if (grid_resolution < 2) throw ConfigError("initial placement: grid resolution must be >= 2");
    std::vector<Point> pts;
    const double n = grid_resolution;
    for (int iy = 0; iy < grid_resolution; ++iy) {
        for (int ix = 0; ix < grid_resolution; ++ix) {
            pts.push_back({(ix + 0.5) * area.width / n, (iy + 0.5) * area.height / n});
        }
    }
    return pts;
}

std::vector<Point> initial_uav_positions(const WorldState& state0, const channel::EnvParams& env,
                                         int grid_resolution) {
    const auto lattice = lattice_points(state0.area, grid_resolution);
    const std::size_t n = state0.uavs.size();

    auto best_for = [&](WorldState& trial, std::size_t j) {
        Point best = lattice.front();
        double best_rate = -std::numeric_limits<double>::infinity();
        for (const Point& p : lattice) {
            trial.uavs[j] = p;
            const double rate = sum_rate(trial, env);
            if (rate > best_rate) {
                best_rate = rate;
                best = p;
            }
        }
        trial.uavs[j] = best;
    };

    WorldState trial = state0;
    trial.uavs.clear();
    for (std::size_t j = 0; j < n; ++j) {
        trial.uavs.push_back(lattice.front());
        best_for(trial, j);
    }
    for (std::size_t j = 0; j < n; ++j) best_for(trial, j);
    return trial.uavs;
}

WorldState Scenario::state_at(const RunConfig& cfg, int t) const {
    WorldState s;
    s.ues = trajectory.positions.at(static_cast<std::size_t>(t));
    s.uavs = initial_uavs;
    s.gbss = cfg.gbs_positions;
    s.altitude_h = cfg.altitude_h;
    s.area = cfg.area;
    s.time_index = t;
    return s;
}

namespace {

mobility::Trajectory walk_from(const mobility::UePopulation& start, const RunConfig& cfg, Rng& rng) {
    mobility::Trajectory traj;
    traj.positions.reserve(static_cast<std::size_t>(cfg.horizon) + 1);
    traj.positions.push_back(start.positions);
    mobility::UePopulation pop = start;
    for (int t = 0; t < cfg.horizon; ++t) {
        pop = mobility::step_population(pop, cfg.mobility, t, rng);
        traj.positions.push_back(pop.positions);
    }
    return traj;
}

} // namespace

Scenario prepare_scenario(const RunConfig& cfg) {
    cfg.validate();
    Scenario sc;
    Rng rng(derive_seed(cfg.seed, kMobilityStream));
    sc.initial_population = mobility::init_population(cfg.n_ues, cfg.area, rng);
    sc.trajectory = walk_from(sc.initial_population, cfg, rng);

    WorldState s0;
    s0.ues = sc.initial_population.positions;
    s0.uavs.assign(cfg.n_uavs, Point{});
    s0.gbss = cfg.gbs_positions;
    s0.altitude_h = cfg.altitude_h;
    s0.area = cfg.area;
    sc.initial_uavs = initial_uav_positions(s0, cfg.env, cfg.init_grid);
    return sc;
}

namespace {

class RateEvaluator {
public:
    RateEvaluator(const RunConfig& cfg, std::uint64_t seed) : cfg_(cfg), fading_rng_(seed) {}

    double operator()(const WorldState& s) {
        return sum_rate(s, associate(s), cfg_.env, cfg_.fading, fading_rng_);
    }

private:
    const RunConfig& cfg_;
    Rng fading_rng_;
};

StepRow make_row(int episode, int t, PolicyKind policy, std::size_t agent, double reward_value,
                 std::size_t action, double step, Point uav) {
    const auto& a = policies::kActions[action];
    return {episode, t, policy, 0.0, agent, reward_value, a.dx * step, a.dy * step, uav.x, uav.y};
}

} // namespace

TrainResult train(const RunConfig& cfg, const TrainOptions& options) {
    return train(cfg, prepare_scenario(cfg), options);
}

TrainResult train(const RunConfig& cfg, const Scenario& scenario, const TrainOptions& options) {
    cfg.validate();
    const std::size_t n = cfg.n_uavs;

    std::vector<dqn::Agent> agents;
    agents.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t seed = derive_seed(cfg.seed, kAgentStream + j);
        if (options.initial_nets) {
            if (options.initial_nets->size() != n) throw ConfigError("train: one initial network per UAV required");
            agents.emplace_back(cfg.dqn, seed, (*options.initial_nets)[j]);
        } else {
            agents.emplace_back(cfg.dqn, seed);
        }
    }

    TrainResult result;
    result.scenario = scenario;
    result.transitions_stored.assign(n, 0);
    RateEvaluator rate(cfg, derive_seed(cfg.seed, kFadingStream));

    WorldState state = scenario.state_at(cfg, 0);
    std::vector<StepRow> rows(n);
    double epsilon = cfg.dqn.epsilon;

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        if (ep > 0) epsilon = std::max(cfg.dqn.epsilon_min, epsilon * cfg.dqn.epsilon_decay);
        for (auto& a : agents) a.set_epsilon(epsilon);

        mobility::Trajectory fresh;
        const mobility::Trajectory* traj = &scenario.trajectory;
        if (!cfg.replay_ue_trajectory && ep > 0) {
            Rng walk(derive_seed(cfg.seed, kWalkStream + static_cast<std::uint64_t>(ep)));
            fresh = walk_from(scenario.initial_population, cfg, walk);
            traj = &fresh;
        }

        state.uavs = scenario.initial_uavs;
        double rate_total = 0.0;
        double reward_total = 0.0;
        for (int t = 0; t < cfg.horizon; ++t) {
            state.ues = traj->positions[static_cast<std::size_t>(t) + 1];
            state.time_index = t;
            double current = rate(state);
            for (std::size_t j = 0; j < n; ++j) {
                const dqn::State s = policies::observe(state.uavs[j], cfg.area);
                const std::size_t action = agents[j].act(s);
                const auto move = policies::apply_action(state.uavs[j], action, cfg.uav_step_m, cfg.area);
                result.clamped_moves += move.clamped;
                state.uavs[j] = move.position;
                const double next = rate(state);
                const double r = reward(current, next);
                current = next;
                const dqn::Transition tr{s, action, r, policies::observe(move.position, cfg.area)};
                try {
                    agents[j].observe(tr);
                } catch (const TrainingError& e) {
                    if (options.failure_dir) {
                        std::filesystem::create_directories(*options.failure_dir);
                        for (std::size_t k = 0; k < n; ++k) {
                            dqn::save_checkpoint(*options.failure_dir / fmt::format("agent_{}.qnet", k),
                                                 agents[k].online());
                        }
                    }
                    throw TrainingError(fmt::format("episode {}, t {}, agent {}: {}", ep, t, j, e.what()));
                }
                ++result.transitions_stored[j];
                reward_total += r;
                rows[j] = make_row(ep, t, PolicyKind::dqn, j, r, action, cfg.uav_step_m, move.position);
            }
            rate_total += current;
            if (options.sink) {
                for (auto& row : rows) {
                    row.sum_rate_bps = current;
                    options.sink->on_step(row);
                }
            }
        }

        EpisodeSummary summary{ep, rate_total / cfg.horizon, reward_total, epsilon};
        result.episodes.push_back(summary);
        if (options.sink) options.sink->on_episode(summary);
    }

    for (const auto& a : agents) {
        result.nets.push_back(a.online());
        result.gradient_steps.push_back(a.gradient_steps());
    }
    return result;
}

namespace {

policies::PolicyContext make_context(const RunConfig& cfg, PolicyKind policy,
                                     std::span<const dqn::QNetwork> nets) {
    if ((policy == PolicyKind::dqn) != !nets.empty()) {
        throw ConfigError(policy == PolicyKind::dqn ? "evaluate: dqn policy requires trained networks"
                                                    : "evaluate: networks given for a non-dqn policy");
    }
    policies::PolicyContext ctx;
    ctx.env = cfg.env;
    ctx.uav_step_m = cfg.uav_step_m;
    ctx.nets = nets;
    ctx.kmeans_seed = derive_seed(cfg.seed, kKmeansStream);
    return ctx;
}

} // namespace

EvalResult evaluate(const RunConfig& cfg, const Scenario& scenario, PolicyKind policy,
                    std::span<const dqn::QNetwork> nets) {
    const auto ctx = make_context(cfg, policy, nets);
    const std::size_t n = cfg.n_uavs;
    RateEvaluator rate(cfg, derive_seed(cfg.seed, kFadingStream));

    EvalResult out;
    out.policy = policy;
    WorldState state = scenario.state_at(cfg, 0);
    std::vector<StepRow> rows(n);
    double decision_ms = 0.0;

    for (int t = 0; t < cfg.horizon; ++t) {
        state.ues = scenario.trajectory.positions[static_cast<std::size_t>(t) + 1];
        state.time_index = t;

        const auto start = std::chrono::steady_clock::now();
        const auto actions = policies::policy_step(policy, state, ctx);
        decision_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

        double current = rate(state);
        for (std::size_t j = 0; j < n; ++j) {
            const auto move = policies::apply_action(state.uavs[j], actions[j], cfg.uav_step_m, cfg.area);
            out.clamped_moves += move.clamped;
            state.uavs[j] = move.position;
            const double next = rate(state);
            const double r = reward(current, next);
            current = next;
            rows[j] = make_row(0, t, policy, j, r, actions[j], cfg.uav_step_m, move.position);
        }
        for (auto& row : rows) {
            row.sum_rate_bps = current;
            out.record.on_step(row);
        }
        out.sum_rate_by_t.push_back(current);
    }

    double total = 0.0;
    for (double r : out.sum_rate_by_t) total += r;
    out.mean_sum_rate_bps = total / cfg.horizon;
    out.mean_decision_ms = decision_ms / cfg.horizon;
    out.record.on_episode({0, out.mean_sum_rate_bps, 0.0, 0.0});
    return out;
}

double time_decisions_ms(const RunConfig& cfg, const Scenario& scenario, PolicyKind policy,
                         std::span<const dqn::QNetwork> nets, int decisions) {
    const auto ctx = make_context(cfg, policy, nets);
    WorldState state = scenario.state_at(cfg, 0);
    double total_ms = 0.0;
    const int count = std::min(decisions, cfg.horizon);
    for (int t = 0; t < count; ++t) {
        state.ues = scenario.trajectory.positions[static_cast<std::size_t>(t) + 1];
        const auto start = std::chrono::steady_clock::now();
        const auto actions = policies::policy_step(policy, state, ctx);
        total_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        for (std::size_t j = 0; j < actions.size(); ++j) {
            state.uavs[j] = policies::apply_action(state.uavs[j], actions[j], cfg.uav_step_m, cfg.area).position;
        }
    }
    return total_ms / count;
}

} // namespace uavnet::sim
