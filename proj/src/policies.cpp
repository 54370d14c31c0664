#include "uavnet/policies.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "uavnet/error.hpp"

namespace uavnet::policies {

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::dqn: return "dqn";
    case PolicyKind::fixed: return "fixed";
    case PolicyKind::kmeans: return "kmeans";
    case PolicyKind::exhaustive: return "exhaustive";
    }
    return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
    for (PolicyKind k : kAllPolicies) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError(fmt::format("unknown policy '{}' (expected dqn, exhaustive, kmeans or fixed)", name));
}

MoveResult apply_action(Point from, std::size_t action, double step, Area area) {
    const Action& a = kActions.at(action);
    MoveResult r{from, false};
    const double x = from.x + a.dx * step;
    const double y = from.y + a.dy * step;
    if (x >= 0.0 && x <= area.width) r.position.x = x; else r.clamped = true;
    if (y >= 0.0 && y <= area.height) r.position.y = y; else r.clamped = true;
    return r;
}

dqn::State observe(Point uav, Area area) { return {uav.x / area.width, uav.y / area.height}; }

std::vector<std::size_t> exhaustive_joint_action(const WorldState& state,
                                                 const channel::EnvParams& env, double step) {
    const std::size_t n = state.uavs.size();
    std::size_t combos = 1;
    for (std::size_t j = 0; j < n; ++j) combos *= dqn::kActions;

    WorldState candidate = state;
    std::vector<std::size_t> tuple(n, 0);
    std::vector<std::size_t> best(n, 0);
    double best_rate = -std::numeric_limits<double>::infinity();
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rest = code;
        for (std::size_t j = n; j-- > 0;) {
            tuple[j] = rest % dqn::kActions;
            rest /= dqn::kActions;
        }
        for (std::size_t j = 0; j < n; ++j) {
            candidate.uavs[j] = apply_action(state.uavs[j], tuple[j], step, state.area).position;
        }
        const double rate = sum_rate(candidate, env);
        if (rate > best_rate) {
            best_rate = rate;
            best = tuple;
        }
    }
    return best;
}

std::size_t step_toward(Point from, Point goal, double step, Area area) {
    std::size_t best = kStay;
    double best_d2 = squared_distance(from, goal);
    for (std::size_t a = 0; a < kActions.size(); ++a) {
        const double d2 = squared_distance(apply_action(from, a, step, area).position, goal);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = a;
        }
    }
    return best;
}

std::vector<std::size_t> policy_step(PolicyKind kind, const WorldState& state,
                                     const PolicyContext& ctx) {
    const std::size_t n = state.uavs.size();
    if (kind == PolicyKind::dqn) {
        if (ctx.nets.size() != n) {
            throw ConfigError(fmt::format("dqn policy: {} networks for {} UAVs", ctx.nets.size(), n));
        }
    } else if (!ctx.nets.empty()) {
        throw ConfigError(fmt::format("{} policy does not take networks", to_string(kind)));
    }

    std::vector<std::size_t> actions(n, kStay);
    switch (kind) {
    case PolicyKind::fixed:
        break;
    case PolicyKind::dqn:
        for (std::size_t j = 0; j < n; ++j) {
            actions[j] = dqn::argmax(dqn::forward(ctx.nets[j], observe(state.uavs[j], state.area)));
        }
        break;
    case PolicyKind::exhaustive:
        actions = exhaustive_joint_action(state, ctx.env, ctx.uav_step_m);
        break;
    case PolicyKind::kmeans: {
        Rng rng(ctx.kmeans_seed);
        const auto centroids = kmeans_centroids(state.ues, n, rng, ctx.kmeans_max_iters);
        const auto match = match_to_centroids(state.uavs, centroids);
        for (std::size_t j = 0; j < n; ++j) {
            actions[j] = step_toward(state.uavs[j], centroids[match[j]], ctx.uav_step_m, state.area);
        }
        break;
    }
    }
    return actions;
}

} // namespace uavnet::policies
