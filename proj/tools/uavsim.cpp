#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uavnet/cli.hpp"
#include "uavnet/error.hpp"

namespace fs = std::filesystem;
using namespace uavnet;

namespace {

struct Common {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::string scale = "desk";

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON config file (dotted keys)")->check(CLI::ExistingFile);
        app->add_option("--seed", seed, "Run seed");
        app->add_option("--out", out, "Output directory")->capture_default_str();
        app->add_option("--scale", scale, "Preset: desk or paper")
            ->check(CLI::IsMember({"desk", "paper"}))
            ->capture_default_str();
    }

    RunConfig resolve() const {
        std::optional<fs::path> path;
        if (config) path = *config;
        return cli::resolve_config(path, parse_scale(scale), seed);
    }
};

int fail(const char* kind, const std::exception& e, int code) {
    fmt::print(std::cerr, "error[{}]: {}\n", kind, e.what());
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV base-station movement simulator with DQN agents and baseline policies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cli::kVersion);

    Common train_opts;
    bool log_steps = false;
    std::optional<int> episodes;
    auto* train = app.add_subcommand("train", "Train one DQN agent per UAV");
    train_opts.attach(train);
    train->add_flag("--log-steps", log_steps, "Also write the per-step run record");
    train->add_option("--episodes", episodes, "Override the episode count")->check(CLI::PositiveNumber);

    Common eval_opts;
    std::string policy_name;
    std::optional<std::string> eval_checkpoint;
    std::optional<int> snapshot_t;
    auto* evaluate = app.add_subcommand("evaluate", "Run one frozen episode of a policy");
    eval_opts.attach(evaluate);
    evaluate->add_option("--policy", policy_name, "dqn, exhaustive, kmeans or fixed")
        ->required()
        ->check(CLI::IsMember({"dqn", "exhaustive", "kmeans", "fixed"}));
    evaluate->add_option("--checkpoint", eval_checkpoint, "Directory holding agent_<j>.qnet");
    evaluate->add_option("--snapshot-t", snapshot_t, "Instant of the association snapshot (default T/2)");

    Common cmp_opts;
    std::vector<std::uint64_t> seeds;
    std::optional<std::string> cmp_checkpoint;
    auto* compare = app.add_subcommand("compare", "Evaluate all policies over several seeds");
    cmp_opts.attach(compare);
    compare->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');
    compare->add_option("--checkpoint", cmp_checkpoint,
                        "Trained networks (seed_<s>/agent_<j>.qnet or agent_<j>.qnet); trains when absent");

    std::vector<std::string> inputs;
    std::string plot_out = "out";
    auto* plot = app.add_subcommand("plot", "Render CSV outputs as SVG");
    plot->add_option("--input", inputs, "CSV file (repeatable)")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_out, "Output directory")->capture_default_str();

    Common ch_opts;
    cli::SweepSpec sweep;
    auto* inspect = app.add_subcommand("inspect-channel", "Tabulate path loss and rate against distance");
    ch_opts.attach(inspect);
    inspect->add_option("--r-min", sweep.r_min, "First horizontal distance (m)")->capture_default_str();
    inspect->add_option("--r-max", sweep.r_max, "Last horizontal distance (m)")->capture_default_str();
    inspect->add_option("--r-step", sweep.r_step, "Distance step (m)")->capture_default_str();
    inspect->add_option("--height", sweep.height, "UAV altitude (m); config value by default");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            RunConfig cfg = train_opts.resolve();
            if (episodes) {
                cfg.episodes = *episodes;
                cfg.validate();
            }
            const auto outputs = cli::run_train(cfg, train_opts.out, log_steps);
            const auto& eps = outputs.result.episodes;
            fmt::print("trained {} agents for {} episodes; final episode mean sum rate {:.4f} Mbps\n",
                       cfg.n_uavs, eps.size(), eps.back().mean_sum_rate_bps / 1e6);
            fmt::print("checkpoints written to {}\n", train_opts.out);
        } else if (*evaluate) {
            const RunConfig cfg = eval_opts.resolve();
            std::optional<fs::path> ckpt;
            if (eval_checkpoint) ckpt = *eval_checkpoint;
            const auto ev = cli::run_evaluate(cfg, policies::parse_policy(policy_name), ckpt, eval_opts.out,
                                              snapshot_t.value_or(cfg.horizon / 2));
            fmt::print("{}: mean sum rate {:.4f} Mbps, mean decision time {:.4f} ms\n", policy_name,
                       ev.mean_sum_rate_bps / 1e6, ev.mean_decision_ms);
        } else if (*compare) {
            const RunConfig cfg = cmp_opts.resolve();
            if (seeds.empty()) seeds.push_back(cfg.seed);
            std::optional<fs::path> ckpt;
            if (cmp_checkpoint) ckpt = *cmp_checkpoint;
            const auto report = cli::run_compare(cfg, seeds, ckpt, cmp_opts.out);
            std::cout << cli::format_summary(report);
        } else if (*plot) {
            std::vector<fs::path> paths(inputs.begin(), inputs.end());
            for (const auto& p : cli::run_plot(paths, plot_out)) fmt::print("wrote {}\n", p.string());
        } else if (*inspect) {
            const RunConfig cfg = ch_opts.resolve();
            std::ostringstream table;
            cli::inspect_channel(cfg, sweep, table);
            cli::write_text_file(fs::path(ch_opts.out) / "channel_sweep.csv", table.str());
            std::cout << table.str();
        }
    } catch (const cli::UsageError& e) {
        return fail("usage", e, 2);
    } catch (const ConfigError& e) {
        return fail("config", e, 1);
    } catch (const ParseError& e) {
        return fail("parse", e, 1);
    } catch (const TrainingError& e) {
        return fail("training", e, 1);
    } catch (const DomainError& e) {
        return fail("domain", e, 1);
    } catch (const std::exception& e) {
        return fail("io", e, 1);
    }
    return 0;
}
