#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavnet/config.hpp"
#include "uavnet/harness.hpp"
#include "uavnet/policies.hpp"

namespace uavnet::cli {

inline constexpr const char* kVersion = "uavnet 0.1.0";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Preset for `scale`, overlaid with the config file, then the seed override.
RunConfig resolve_config(const std::optional<std::filesystem::path>& config_path, Scale scale,
                         std::optional<std::uint64_t> seed);

nlohmann::json run_metadata(const RunConfig& cfg, const sim::Scenario* scenario);
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct TrainOutputs {
    sim::TrainResult result;
    std::vector<std::filesystem::path> checkpoints;
};

// Writes agent_<j>.qnet, train_episodes.csv, snapshot_t0.csv, metadata.json and,
// with log_steps, train_steps.csv under `out`.
TrainOutputs run_train(const RunConfig& cfg, const std::filesystem::path& out, bool log_steps);

std::vector<dqn::QNetwork> load_nets(const std::filesystem::path& dir, std::size_t n_uavs);

// Writes eval_<policy>.csv, eval_<policy>_timing.csv and snapshot_<policy>.csv.
sim::EvalResult run_evaluate(const RunConfig& cfg, policies::PolicyKind policy,
                             const std::optional<std::filesystem::path>& checkpoint,
                             const std::filesystem::path& out, int snapshot_t);

struct PolicySummary {
    policies::PolicyKind policy;
    double mean_sum_rate_bps = 0.0;  // mean over seeds of the time average
    double mean_decision_ms = 0.0;
    std::vector<double> per_seed_mean;
};

struct CompareReport {
    std::vector<std::uint64_t> seeds;
    std::vector<PolicySummary> policies;  // dqn, exhaustive, kmeans, fixed

    const PolicySummary& get(policies::PolicyKind kind) const;
};

// Evaluates every policy on each seed's scenario. DQN networks come from
// `checkpoint` (seed_<s>/agent_<j>.qnet, else agent_<j>.qnet) or, when absent,
// from training on that seed. Writes compare_sum_rate.csv, summary.csv,
// timing.csv, compare_sum_rate.svg and per-policy records under `out`.
CompareReport run_compare(const RunConfig& base, std::span<const std::uint64_t> seeds,
                          const std::optional<std::filesystem::path>& checkpoint,
                          const std::filesystem::path& out);

std::string format_summary(const CompareReport& report);

std::vector<std::filesystem::path> run_plot(std::span<const std::filesystem::path> inputs,
                                            const std::filesystem::path& out);

struct SweepSpec {
    double r_min = 0.0;
    double r_max = 1000.0;
    double r_step = 10.0;
    std::optional<double> height;
};

// CSV r_m,elevation_deg,p_los,pl_db,snr_db,rate_bps for a lone UAV link.
void inspect_channel(const RunConfig& cfg, const SweepSpec& sweep, std::ostream& out);

} // namespace uavnet::cli
