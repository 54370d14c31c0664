#include "uavnet/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uavnet/channel.hpp"
#include "uavnet/error.hpp"
#include "uavnet/plot.hpp"
#include "uavnet/record.hpp"

namespace uavnet::cli {

namespace fs = std::filesystem;
using policies::PolicyKind;

RunConfig resolve_config(const std::optional<fs::path>& config_path, Scale scale,
                         std::optional<std::uint64_t> seed) {
    RunConfig cfg = config_path ? load_config(*config_path, scale) : RunConfig::preset(scale);
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
}

nlohmann::json run_metadata(const RunConfig& cfg, const sim::Scenario* scenario) {
    nlohmann::json meta = {
        {"version", kVersion},
        {"seed", cfg.seed},
        {"config", to_json(cfg)},
        {"interpretation",
         {{"exhaustive", "one-step-joint"},
          {"init_search", fmt::format("greedy-grid-{}", cfg.init_grid)},
          {"association", "nearest-horizontal"},
          {"fading", cfg.fading == FadingMode::rayleigh ? "rayleigh" : "deterministic"}}},
    };
    if (scenario) {
        nlohmann::json uavs = nlohmann::json::array();
        for (const Point& p : scenario->initial_uavs) uavs.push_back({p.x, p.y});
        meta["initial_uav_positions"] = uavs;
    }
    return meta;
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

namespace {

template <class Fn>
void write_with(const fs::path& path, Fn&& fn) {
    std::ostringstream ss;
    fn(ss);
    write_text_file(path, ss.str());
}

std::vector<fs::path> save_nets(const fs::path& dir, const std::vector<dqn::QNetwork>& nets) {
    fs::create_directories(dir);
    std::vector<fs::path> paths;
    for (std::size_t j = 0; j < nets.size(); ++j) {
        paths.push_back(dir / fmt::format("agent_{}.qnet", j));
        dqn::save_checkpoint(paths.back(), nets[j]);
    }
    return paths;
}

} // namespace

TrainOutputs run_train(const RunConfig& cfg, const fs::path& out, bool log_steps) {
    fs::create_directories(out);
    const auto scenario = sim::prepare_scenario(cfg);

    sim::TrainOptions options;
    options.failure_dir = out / "failure";
    std::optional<std::ofstream> steps_file;
    std::optional<record::CsvStepWriter> steps_writer;
    if (log_steps) {
        steps_file.emplace(out / "train_steps.csv", std::ios::binary | std::ios::trunc);
        steps_writer.emplace(*steps_file);
        options.sink = &*steps_writer;
    }

    TrainOutputs outputs;
    outputs.result = sim::train(cfg, scenario, options);
    outputs.checkpoints = save_nets(out, outputs.result.nets);
    write_with(out / "train_episodes.csv",
               [&](std::ostream& os) { record::write_episodes(os, outputs.result.episodes); });
    write_with(out / "snapshot_t0.csv",
               [&](std::ostream& os) { write_snapshot_csv(os, scenario.state_at(cfg, 0)); });
    write_text_file(out / "metadata.json", run_metadata(cfg, &scenario).dump(2) + "\n");
    return outputs;
}

std::vector<dqn::QNetwork> load_nets(const fs::path& dir, std::size_t n_uavs) {
    std::vector<dqn::QNetwork> nets;
    for (std::size_t j = 0; j < n_uavs; ++j) {
        const auto path = dir / fmt::format("agent_{}.qnet", j);
        if (!fs::exists(path)) throw ConfigError(fmt::format("missing DQN checkpoint: {}", path.string()));
        nets.push_back(dqn::load_checkpoint(path));
    }
    return nets;
}

namespace {

void write_timing(const fs::path& path, const std::vector<std::pair<PolicyKind, double>>& ms) {
    write_with(path, [&](std::ostream& os) {
        os << "policy,mean_decision_ms\n";
        for (const auto& [kind, v] : ms) fmt::print(os, "{},{}\n", policies::to_string(kind), record::format_number(v));
    });
}

// Replays a finished evaluation up to instant t to recover the snapshot.
WorldState snapshot_at(const RunConfig& cfg, const sim::Scenario& sc, const sim::EvalResult& ev, int t) {
    WorldState s = sc.state_at(cfg, t + 1);
    s.time_index = t;
    for (const auto& row : ev.record.rows) {
        if (row.t == t) s.uavs[row.agent] = {row.uav_x, row.uav_y};
    }
    return s;
}

} // namespace

sim::EvalResult run_evaluate(const RunConfig& cfg, PolicyKind policy,
                             const std::optional<fs::path>& checkpoint, const fs::path& out,
                             int snapshot_t) {
    std::vector<dqn::QNetwork> nets;
    if (policy == PolicyKind::dqn) {
        if (!checkpoint) throw UsageError("evaluate --policy dqn requires --checkpoint DIR");
        nets = load_nets(*checkpoint, cfg.n_uavs);
    }
    if (snapshot_t < 0 || snapshot_t >= cfg.horizon) {
        throw UsageError(fmt::format("--snapshot-t must lie in [0, {})", cfg.horizon));
    }
    const auto scenario = sim::prepare_scenario(cfg);
    auto ev = sim::evaluate(cfg, scenario, policy, nets);

    const std::string name(policies::to_string(policy));
    fs::create_directories(out);
    write_with(out / fmt::format("eval_{}.csv", name),
               [&](std::ostream& os) { record::write_run_record(os, ev.record.rows); });
    write_timing(out / fmt::format("eval_{}_timing.csv", name), {{policy, ev.mean_decision_ms}});
    write_with(out / fmt::format("snapshot_{}.csv", name), [&](std::ostream& os) {
        write_snapshot_csv(os, snapshot_at(cfg, scenario, ev, snapshot_t));
    });
    write_text_file(out / "metadata.json", run_metadata(cfg, &scenario).dump(2) + "\n");
    return ev;
}

const PolicySummary& CompareReport::get(PolicyKind kind) const {
    for (const auto& p : policies) {
        if (p.policy == kind) return p;
    }
    throw std::out_of_range("policy missing from report");
}

CompareReport run_compare(const RunConfig& base, std::span<const std::uint64_t> seeds,
                          const std::optional<fs::path>& checkpoint, const fs::path& out) {
    if (seeds.empty()) throw UsageError("compare needs at least one seed");
    fs::create_directories(out);

    CompareReport report;
    report.seeds.assign(seeds.begin(), seeds.end());
    for (PolicyKind k : policies::kAllPolicies) report.policies.push_back({k, 0.0, 0.0, {}});

    std::ostringstream series;
    series << record::kCompareHeader << '\n';
    for (std::uint64_t seed : seeds) {
        RunConfig cfg = base;
        cfg.seed = seed;
        const auto scenario = sim::prepare_scenario(cfg);
        const fs::path seed_dir = out / fmt::format("seed_{}", seed);

        std::vector<dqn::QNetwork> nets;
        if (checkpoint) {
            const fs::path per_seed = *checkpoint / fmt::format("seed_{}", seed);
            nets = load_nets(fs::exists(per_seed) ? per_seed : *checkpoint, cfg.n_uavs);
        } else {
            auto trained = sim::train(cfg, scenario);
            save_nets(seed_dir, trained.nets);
            write_with(seed_dir / "train_episodes.csv",
                       [&](std::ostream& os) { record::write_episodes(os, trained.episodes); });
            nets = std::move(trained.nets);
        }

        for (auto& summary : report.policies) {
            const auto ev = sim::evaluate(cfg, scenario, summary.policy,
                                          summary.policy == PolicyKind::dqn ? std::span<const dqn::QNetwork>(nets)
                                                                            : std::span<const dqn::QNetwork>());
            summary.per_seed_mean.push_back(ev.mean_sum_rate_bps);
            summary.mean_decision_ms += ev.mean_decision_ms / double(seeds.size());
            const std::string name(policies::to_string(summary.policy));
            for (std::size_t t = 0; t < ev.sum_rate_by_t.size(); ++t) {
                fmt::print(series, "{},{},{},{}\n", seed, t, name, record::format_number(ev.sum_rate_by_t[t]));
            }
            write_with(out / "records" / fmt::format("{}_seed{}.csv", name, seed),
                       [&](std::ostream& os) { record::write_run_record(os, ev.record.rows); });
        }
    }

    for (auto& summary : report.policies) {
        double total = 0.0;
        for (double v : summary.per_seed_mean) total += v;
        summary.mean_sum_rate_bps = total / double(summary.per_seed_mean.size());
    }

    write_text_file(out / "compare_sum_rate.csv", series.str());
    const double exhaustive = report.get(PolicyKind::exhaustive).mean_sum_rate_bps;
    write_with(out / "summary.csv", [&](std::ostream& os) {
        os << "policy,mean_sum_rate_bps,fraction_of_exhaustive\n";
        for (const auto& p : report.policies) {
            fmt::print(os, "{},{},{}\n", policies::to_string(p.policy), record::format_number(p.mean_sum_rate_bps),
                       record::format_number(p.mean_sum_rate_bps / exhaustive));
        }
    });
    std::vector<std::pair<PolicyKind, double>> timing;
    for (const auto& p : report.policies) timing.emplace_back(p.policy, p.mean_decision_ms);
    write_timing(out / "timing.csv", timing);
    plot::plot_file(out / "compare_sum_rate.csv", out);

    auto meta = run_metadata(base, nullptr);
    meta["seeds"] = report.seeds;
    meta["dqn_source"] = checkpoint ? checkpoint->string() : "trained per seed";
    write_text_file(out / "metadata.json", meta.dump(2) + "\n");
    return report;
}

std::string format_summary(const CompareReport& report) {
    const double exhaustive = report.get(PolicyKind::exhaustive).mean_sum_rate_bps;
    std::string s = fmt::format("{:<12}{:>20}{:>16}{:>20}\n", "policy", "mean sum rate (Mbps)",
                                "of exhaustive", "decision time (ms)");
    for (const auto& p : report.policies) {
        s += fmt::format("{:<12}{:>20.4f}{:>15.2f}%{:>20.4f}\n", policies::to_string(p.policy),
                         p.mean_sum_rate_bps / 1e6, 100.0 * p.mean_sum_rate_bps / exhaustive,
                         p.mean_decision_ms);
    }
    return s;
}

std::vector<fs::path> run_plot(std::span<const fs::path> inputs, const fs::path& out) {
    if (inputs.empty()) throw UsageError("plot needs at least one --input file");
    std::vector<fs::path> written;
    for (const auto& in : inputs) written.push_back(plot::plot_file(in, out));
    return written;
}

void inspect_channel(const RunConfig& cfg, const SweepSpec& sweep, std::ostream& out) {
    if (!(sweep.r_min >= 0.0)) throw UsageError("inspect-channel: --r-min must be >= 0");
    if (sweep.r_max < sweep.r_min) throw UsageError("inspect-channel: --r-max is below --r-min");
    if (!(sweep.r_step > 0.0)) throw UsageError("inspect-channel: --r-step must be positive");
    const double h = sweep.height.value_or(cfg.altitude_h);
    const auto& env = cfg.env;

    out << "r_m,elevation_deg,p_los,pl_db,snr_db,rate_bps\n";
    const auto steps = static_cast<long long>(std::floor((sweep.r_max - sweep.r_min) / sweep.r_step + 1e-9));
    for (long long i = 0; i <= steps; ++i) {
        const double r = sweep.r_min + double(i) * sweep.r_step;
        const double pl = channel::a2g_mean_pl_db(r, h, env);
        const channel::LinkBudget link{env.uav_tx_dbm, pl, 1.0};
        const double snr = channel::sinr_linear(link, {}, env.noise_dbm);
        fmt::print(out, "{},{},{},{},{},{}\n", record::format_number(r),
                   record::format_number(channel::elevation_deg(r, h)),
                   record::format_number(channel::los_probability(r, h, env)), record::format_number(pl),
                   record::format_number(channel::linear_to_db(snr)),
                   record::format_number(channel::rate_bps(snr, env.bandwidth_hz)));
    }
}

} // namespace uavnet::cli
