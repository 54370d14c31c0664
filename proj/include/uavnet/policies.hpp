#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uavnet/channel.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/world.hpp"

namespace uavnet::policies {

enum class PolicyKind { dqn, fixed, kmeans, exhaustive };

// Report and plot order.
inline constexpr std::array<PolicyKind, 4> kAllPolicies{
    PolicyKind::dqn, PolicyKind::exhaustive, PolicyKind::kmeans, PolicyKind::fixed};

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);

// Unit displacement; multiplied by the UAV step size.
struct Action {
    int dx = 0;
    int dy = 0;

    friend bool operator==(const Action&, const Action&) = default;
};

// Index order is the Q-network output order: right, left, forward, backward, stay.
inline constexpr std::array<Action, dqn::kActions> kActions{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}}};
inline constexpr std::size_t kStay = 4;

struct MoveResult {
    Point position;
    // The axis that would have left the area contributed no displacement.
    bool clamped = false;
};

MoveResult apply_action(Point from, std::size_t action, double step, Area area);

// Network input: position divided by the area extent.
dqn::State observe(Point uav, Area area);

struct PolicyContext {
    channel::EnvParams env{};
    double uav_step_m = 1.0;
    std::span<const dqn::QNetwork> nets{};
    std::uint64_t kmeans_seed = 0;
    int kmeans_max_iters = 100;
};

// One action index per UAV from the snapshot.
std::vector<std::size_t> policy_step(PolicyKind kind, const WorldState& state,
                                     const PolicyContext& ctx);

// Joint action over all 5^|Q| tuples maximizing deterministic sum rate after the
// move, lexicographically first among ties (UAV 0 most significant).
std::vector<std::size_t> exhaustive_joint_action(const WorldState& state,
                                                 const channel::EnvParams& env, double step);

// Lloyd iterations from k distinct sampled UE positions. An empty cluster takes
// the point farthest from its current centroid.
std::vector<Point> kmeans_centroids(std::span<const Point> points, std::size_t k, Rng& rng,
                                    int max_iters);

double within_cluster_ss(std::span<const Point> points, std::span<const Point> centroids);

// assignment[j] is the centroid for UAV j; minimizes the summed distance.
std::vector<std::size_t> match_to_centroids(std::span<const Point> uavs,
                                            std::span<const Point> centroids);

// Legal action most reducing the distance to `goal`; stay when none does.
std::size_t step_toward(Point from, Point goal, double step, Area area);

} // namespace uavnet::policies
