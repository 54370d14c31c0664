#pragma once

#include <optional>
#include <span>

namespace uavnet::channel {

// Link-budget rounding of the speed of light.
inline constexpr double kSpeedOfLight = 3.0e8;

// Propagation environment. Defaults are the dense-urban air-to-ground set at
// 2 GHz with a 1 MHz per-UE channel and thermal noise over that bandwidth.
struct EnvParams {
    double a = 9.61;
    double b = 0.43;
    double eta_los_db = 0.1;
    double eta_nlos_db = 20.0;
    double carrier_hz = 2e9;
    double terrestrial_alpha = 3.5;
    double terrestrial_eta_db = 30.0;
    double bandwidth_hz = 1e6;
    double noise_dbm = -114.0;
    double uav_tx_dbm = 37.0;
    double gbs_tx_dbm = 40.0;
    // Serving links above this loss deliver zero rate. Disabled when empty.
    std::optional<double> pl_max_db;

    // Throws ConfigError when an invariant is violated.
    void validate() const;

    friend bool operator==(const EnvParams&, const EnvParams&) = default;
};

struct LinkBudget {
    double tx_power_dbm = 0.0;
    double path_loss_db = 0.0;
    double fading_linear = 1.0;

    double received_watts() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Elevation angle in degrees of a UAV at altitude h seen from horizontal distance r.
double elevation_deg(double r, double h);

// Probability of a line-of-sight link. NLoS probability is the complement.
double los_probability(double r, double h, const EnvParams& env);

double free_space_pl_db(double d, double carrier_hz);

// Expected air-to-ground loss: P_LoS * L_LoS + (1 - P_LoS) * L_NLoS over slant distance.
double a2g_mean_pl_db(double r, double h, const EnvParams& env);

double terrestrial_pl_db(double r, const EnvParams& env);

double sinr_linear(const LinkBudget& signal, std::span<const LinkBudget> interferers,
                   double noise_dbm);

double rate_bps(double sinr, double bandwidth_hz);

} // namespace uavnet::channel
