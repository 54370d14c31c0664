#include "uavnet/channel.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "uavnet/error.hpp"

namespace uavnet::channel {

void EnvParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(fmt::format("env: {}", what));
    };
    require(a > 0.0, "a must be positive");
    require(b > 0.0, "b must be positive");
    require(carrier_hz > 0.0, "carrier_hz must be positive");
    require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(eta_nlos_db >= eta_los_db, "eta_nlos_db must be >= eta_los_db");
    require(terrestrial_alpha >= 2.0, "terrestrial_alpha must be >= 2");
    require(std::isfinite(noise_dbm) && std::isfinite(uav_tx_dbm) && std::isfinite(gbs_tx_dbm),
            "powers must be finite");
}

double LinkBudget::received_watts() const {
    return dbm_to_watts(tx_power_dbm - path_loss_db) * fading_linear;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double elevation_deg(double r, double h) {
    // atan2 gives exactly 90 degrees at r = 0.
    return std::atan2(h, r) * (180.0 / std::numbers::pi);
}

double los_probability(double r, double h, const EnvParams& env) {
    if (!(h > 0.0)) throw DomainError(fmt::format("los_probability: altitude must be > 0, got {}", h));
    if (!(r >= 0.0)) throw DomainError(fmt::format("los_probability: distance must be >= 0, got {}", r));
    const double theta = elevation_deg(r, h);
    return 1.0 / (1.0 + env.a * std::exp(-env.b * (theta - env.a)));
}

double free_space_pl_db(double d, double carrier_hz) {
    if (!(d > 0.0)) throw DomainError(fmt::format("free_space_pl_db: distance must be > 0, got {}", d));
    return 20.0 * std::log10(4.0 * std::numbers::pi * carrier_hz * d / kSpeedOfLight);
}

double a2g_mean_pl_db(double r, double h, const EnvParams& env) {
    const double p_los = los_probability(r, h, env);
    const double fspl = free_space_pl_db(std::hypot(h, r), env.carrier_hz);
    return p_los * (fspl + env.eta_los_db) + (1.0 - p_los) * (fspl + env.eta_nlos_db);
}

double terrestrial_pl_db(double r, const EnvParams& env) {
    if (!(r > 0.0)) throw DomainError(fmt::format("terrestrial_pl_db: distance must be > 0, got {}", r));
    return env.terrestrial_eta_db + 10.0 * env.terrestrial_alpha * std::log10(r);
}

double sinr_linear(const LinkBudget& signal, std::span<const LinkBudget> interferers,
                   double noise_dbm) {
    double denominator = dbm_to_watts(noise_dbm);
    for (const auto& link : interferers) denominator += link.received_watts();
    return signal.received_watts() / denominator;
}

double rate_bps(double sinr, double bandwidth_hz) {
    if (!(sinr >= 0.0)) throw DomainError(fmt::format("rate_bps: sinr must be >= 0, got {}", sinr));
    return bandwidth_hz * std::log2(1.0 + sinr);
}

} // namespace uavnet::channel
