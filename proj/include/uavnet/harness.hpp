#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "uavnet/config.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/mobility.hpp"
#include "uavnet/policies.hpp"
#include "uavnet/world.hpp"

namespace uavnet::sim {

// +1 when the sum rate rises, -0.2 when it is unchanged at 1e-9 relative
// precision, -1 when it falls.
double reward(double prev_sum_rate, double new_sum_rate);

inline constexpr double kRewardUp = 1.0;
inline constexpr double kRewardSame = -0.2;
inline constexpr double kRewardDown = -1.0;

// Greedy sequential lattice search: UAV j is placed at the best of the
// grid_resolution^2 cell centers given UAVs 0..j-1, then one refinement pass
// re-places every UAV given all others. Ties go to the lowest lattice index.
// The UAV count is taken from state0.uavs.
std::vector<Point> initial_uav_positions(const WorldState& state0, const channel::EnvParams& env,
                                         int grid_resolution);

std::vector<Point> lattice_points(Area area, int grid_resolution);

struct StepRow {
    int episode = 0;
    int t = 0;
    policies::PolicyKind policy = policies::PolicyKind::dqn;
    // Sum rate at the end of instant t, after every UAV moved.
    double sum_rate_bps = 0.0;
    std::size_t agent = 0;
    double reward = 0.0;
    double action_dx = 0.0;
    double action_dy = 0.0;
    double uav_x = 0.0;
    double uav_y = 0.0;
};

struct EpisodeSummary {
    int episode = 0;
    double mean_sum_rate_bps = 0.0;
    double total_reward = 0.0;
    double epsilon = 0.0;
};

class RecordSink {
public:
    virtual ~RecordSink() = default;
    virtual void on_step(const StepRow& row) = 0;
    virtual void on_episode(const EpisodeSummary&) {}
};

struct RunRecord : RecordSink {
    std::vector<StepRow> rows;
    std::vector<EpisodeSummary> episodes;

    void on_step(const StepRow& row) override { rows.push_back(row); }
    void on_episode(const EpisodeSummary& e) override { episodes.push_back(e); }
};

// Seeded UE trajectory and starting UAV layout shared by training and every
// evaluated policy.
struct Scenario {
    mobility::UePopulation initial_population;
    mobility::Trajectory trajectory;
    std::vector<Point> initial_uavs;

    WorldState state_at(const RunConfig& cfg, int t) const;
};

Scenario prepare_scenario(const RunConfig& cfg);

struct TrainOptions {
    RecordSink* sink = nullptr;
    // Where to dump checkpoints if training hits a numerical failure.
    std::optional<std::filesystem::path> failure_dir;
    // Overrides the Glorot initialization (one network per UAV).
    std::optional<std::vector<dqn::QNetwork>> initial_nets;
};

struct TrainResult {
    std::vector<dqn::QNetwork> nets;
    std::vector<EpisodeSummary> episodes;
    Scenario scenario;
    std::vector<std::size_t> transitions_stored;  // per agent
    std::vector<std::size_t> gradient_steps;      // per agent
    std::size_t clamped_moves = 0;
};

TrainResult train(const RunConfig& cfg, const TrainOptions& options = {});
TrainResult train(const RunConfig& cfg, const Scenario& scenario, const TrainOptions& options = {});

struct EvalResult {
    policies::PolicyKind policy = policies::PolicyKind::fixed;
    RunRecord record;
    std::vector<double> sum_rate_by_t;
    double mean_sum_rate_bps = 0.0;
    double mean_decision_ms = 0.0;
    std::size_t clamped_moves = 0;
};

// One frozen episode (no exploration, no learning) over the scenario trajectory.
EvalResult evaluate(const RunConfig& cfg, const Scenario& scenario, policies::PolicyKind policy,
                    std::span<const dqn::QNetwork> nets = {});

// Mean wall clock of `decisions` policy_step calls on successive instants.
double time_decisions_ms(const RunConfig& cfg, const Scenario& scenario,
                         policies::PolicyKind policy, std::span<const dqn::QNetwork> nets,
                         int decisions);

} // namespace uavnet::sim
