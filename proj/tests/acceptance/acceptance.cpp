// One line per acceptance criterion. Exits nonzero only with --strict.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "uavnet/channel.hpp"
#include "uavnet/cli.hpp"
#include "uavnet/config.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/harness.hpp"
#include "uavnet/plot.hpp"
#include "uavnet/world.hpp"

using namespace uavnet;
namespace fs = std::filesystem;
using policies::PolicyKind;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    fmt::print("{} {}: {}\n", ok ? "PASS" : "FAIL", name, detail);
    std::fflush(stdout);
    failures += !ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void channel_exactness() {
    const channel::EnvParams env;
    // Horizontal distance at which the elevation angle is exactly a degrees.
    const double r = 100.0 / std::tan(env.a * M_PI / 180.0);
    const double los_err = std::abs(channel::los_probability(r, 100.0, env) - 1.0 / (1.0 + env.a));
    const double fspl = channel::free_space_pl_db(1.0, 2e9);
    const double a2g = channel::a2g_mean_pl_db(0.0, 100.0, env);
    const bool ok = los_err <= 1e-12 && std::abs(fspl - 38.4624) <= 1e-4 && std::abs(a2g - 78.5624) <= 1e-4;
    report(ok, "channel exactness",
           fmt::format("|P_LoS - 1/(1+a)| = {:.2e}, FSPL(1 m) = {:.6f} dB, a2g(0, 100 m) = {:.6f} dB", los_err,
                       fspl, a2g));
}

void gradient_check() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    const double h = 1e-5;
    double worst = 0.0;
    const int nets = 20;
    for (int n = 0; n < nets; ++n) {
        dqn::QNetwork net = dqn::QNetwork::glorot(rng);
        for (auto& p : net.params()) p += rng.uniform(-0.1, 0.1);
        std::vector<dqn::Transition> batch(1 + rng.index(50));
        std::vector<double> y(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            batch[i] = {{rng.uniform(), rng.uniform()}, rng.index(dqn::kActions), 0.0,
                        {rng.uniform(), rng.uniform()}};
            y[i] = rng.uniform(-3.0, 3.0);
        }
        dqn::Gradient g{};
        dqn::loss_and_gradient(net, batch, y, &g);
        for (std::size_t p = 0; p < dqn::kParamCount; ++p) {
            auto plus = net, minus = net;
            plus.params()[p] += h;
            minus.params()[p] -= h;
            const double fd = (dqn::loss_and_gradient(plus, batch, y, nullptr) -
                               dqn::loss_and_gradient(minus, batch, y, nullptr)) /
                              (2 * h);
            const double scale = std::max({std::abs(fd), std::abs(g[p]), 1e-8});
            worst = std::max(worst, std::abs(fd - g[p]) / scale);
        }
    }
    const double secs = seconds_since(t0);
    report(worst < 1e-4 && secs < 10.0, "gradient check",
           fmt::format("{} networks x {} parameters, worst relative error {:.2e}, {:.2f} s", nets,
                       dqn::kParamCount, worst, secs));
}

void association_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(99);
    int agree = 0;
    const int instances = 1000;
    for (int k = 0; k < instances; ++k) {
        WorldState s;
        s.area = {1000, 1000};
        const auto stations = 1 + rng.index(6);
        const auto n_uav = rng.index(stations + 1);
        // Half the instances on a coarse grid so ties occur.
        const bool coarse = k % 2 == 0;
        auto pt = [&] {
            return coarse ? Point{50.0 * rng.index(21), 50.0 * rng.index(21)}
                          : Point{rng.uniform(0, 1000), rng.uniform(0, 1000)};
        };
        for (auto i = rng.index(51); i > 0; --i) s.ues.push_back(pt());
        for (std::size_t i = 0; i < stations; ++i) (i < n_uav ? s.uavs : s.gbss).push_back(pt());
        std::vector<Point> all = s.uavs;
        all.insert(all.end(), s.gbss.begin(), s.gbss.end());
        std::vector<std::size_t> expect;
        for (const Point& u : s.ues) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < all.size(); ++j)
                if (std::hypot(u.x - all[j].x, u.y - all[j].y) < std::hypot(u.x - all[best].x, u.y - all[best].y))
                    best = j;
            expect.push_back(best);
        }
        agree += associate(s).serving == expect;
    }
    const double secs = seconds_since(t0);
    report(agree == instances && secs < 5.0, "association oracle",
           fmt::format("{}/{} instances agree, {:.2f} s", agree, instances, secs));
}

// Checks every logged reward and every per-step UAV displacement.
class DomainSink : public sim::RecordSink {
public:
    explicit DomainSink(std::vector<Point> start) : start_(std::move(start)), last_(start_) {}

    void on_step(const sim::StepRow& row) override {
        ++rows;
        if (row.reward != sim::kRewardUp && row.reward != sim::kRewardSame && row.reward != sim::kRewardDown)
            ++bad_rewards;
        if (row.t == 0) last_[row.agent] = start_[row.agent];
        const double dx = std::abs(row.uav_x - last_[row.agent].x);
        const double dy = std::abs(row.uav_y - last_[row.agent].y);
        const bool unit = (dx == 0.0 && (dy == 0.0 || dy == 1.0)) || (dy == 0.0 && dx == 1.0);
        if (!unit) ++bad_moves;
        last_[row.agent] = {row.uav_x, row.uav_y};
    }

    std::size_t rows = 0;
    std::size_t bad_rewards = 0;
    std::size_t bad_moves = 0;

private:
    std::vector<Point> start_;
    std::vector<Point> last_;
};

struct SeedRun {
    std::uint64_t seed;
    sim::Scenario scenario;
    sim::TrainResult trained;
    double train_secs;
};

double mean_of(const std::vector<sim::EpisodeSummary>& eps, std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t i = from; i < to; ++i) s += eps[i].mean_sum_rate_bps;
    return s / static_cast<double>(to - from);
}

void learning_and_ordering(const std::vector<std::uint64_t>& seeds) {
    std::vector<SeedRun> runs;
    DomainSink* domain = nullptr;
    std::unique_ptr<DomainSink> domain_holder;
    for (auto seed : seeds) {
        RunConfig cfg = RunConfig::desk();
        cfg.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        auto scenario = sim::prepare_scenario(cfg);
        sim::TrainOptions opt;
        if (!domain) {
            domain_holder = std::make_unique<DomainSink>(scenario.initial_uavs);
            domain = domain_holder.get();
            opt.sink = domain;
        }
        auto trained = sim::train(cfg, scenario, opt);
        runs.push_back({seed, std::move(scenario), std::move(trained), seconds_since(t0)});
        fmt::print("  seed {}: trained {} episodes in {:.1f} s\n", seed, cfg.episodes, runs.back().train_secs);
        std::fflush(stdout);
    }

    {
        const RunConfig cfg = RunConfig::desk();
        const bool ok = domain->rows == std::size_t(cfg.episodes) * cfg.horizon * cfg.n_uavs &&
                        domain->bad_rewards == 0 && domain->bad_moves == 0;
        report(ok, "reward domain",
               fmt::format("seed {}: {} rows, {} rewards outside {{1, -0.2, -1}}, {} displacements not in {{0, 1 m}}",
                           seeds.front(), domain->rows, domain->bad_rewards, domain->bad_moves));
    }

    {
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < std::min<std::size_t>(3, runs.size()); ++i) {
            const auto& eps = runs[i].trained.episodes;
            const std::size_t tenth = eps.size() / 10;
            const double first = mean_of(eps, 0, tenth);
            const double last = mean_of(eps, eps.size() - tenth, eps.size());
            ok = ok && last > first;
            detail += fmt::format("{}seed {} first10% {:.2f} -> last10% {:.2f} Mbps", i ? "; " : "", runs[i].seed,
                                  first / 1e6, last / 1e6);
        }
        report(ok, "learning signal", detail);
    }

    std::map<PolicyKind, double> mean;
    std::string per_seed;
    for (const auto& run : runs) {
        RunConfig cfg = RunConfig::desk();
        cfg.seed = run.seed;
        per_seed += fmt::format("\n  seed {}:", run.seed);
        for (auto kind : policies::kAllPolicies) {
            const auto nets = kind == PolicyKind::dqn ? std::span<const dqn::QNetwork>(run.trained.nets)
                                                      : std::span<const dqn::QNetwork>();
            const auto ev = sim::evaluate(cfg, run.scenario, kind, nets);
            mean[kind] += ev.mean_sum_rate_bps / static_cast<double>(runs.size());
            per_seed += fmt::format(" {} {:.2f}", policies::to_string(kind), ev.mean_sum_rate_bps / 1e6);
        }
    }
    const double d = mean[PolicyKind::dqn];
    const bool ok = d > mean[PolicyKind::fixed] && d > mean[PolicyKind::kmeans] &&
                    d >= 0.85 * mean[PolicyKind::exhaustive];
    report(ok, "policy ordering",
           fmt::format("seed-mean Mbps over {} seeds: dqn {:.2f}, exhaustive {:.2f}, kmeans {:.2f}, fixed {:.2f}; "
                       "dqn/exhaustive = {:.3f}{}",
                       runs.size(), d / 1e6, mean[PolicyKind::exhaustive] / 1e6, mean[PolicyKind::kmeans] / 1e6,
                       mean[PolicyKind::fixed] / 1e6, d / mean[PolicyKind::exhaustive], per_seed));
}

void timing_ordering() {
    RunConfig cfg = RunConfig::paper();
    cfg.episodes = 1;
    const auto scenario = sim::prepare_scenario(cfg);
    Rng rng(5);
    std::vector<dqn::QNetwork> nets;
    for (std::size_t j = 0; j < cfg.n_uavs; ++j) nets.push_back(dqn::QNetwork::glorot(rng));
    const double dqn_ms = sim::time_decisions_ms(cfg, scenario, PolicyKind::dqn, nets, 200);
    const double ex_ms = sim::time_decisions_ms(cfg, scenario, PolicyKind::exhaustive, {}, 10);
    report(ex_ms >= 5.0 * dqn_ms, "timing ordering",
           fmt::format("4 UAVs, 500 UEs: exhaustive {:.3f} ms vs dqn {:.5f} ms per decision ({:.0f}x)", ex_ms, dqn_ms,
                       ex_ms / dqn_ms));
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

// Runs every command twice into separate directories.
void produce(const fs::path& out) {
    fs::remove_all(out);
    RunConfig cfg = RunConfig::desk();
    cfg.seed = 7;
    cfg.episodes = 100;
    cli::run_train(cfg, out / "train", true);
    for (auto kind : policies::kAllPolicies) {
        std::optional<fs::path> ckpt;
        if (kind == PolicyKind::dqn) ckpt = out / "train";
        cli::run_evaluate(cfg, kind, ckpt, out / "evaluate", cfg.horizon / 2);
    }
    const std::vector<std::uint64_t> seeds{7, 8};
    cli::run_compare(cfg, seeds, std::nullopt, out / "compare");
    const std::vector<fs::path> inputs{out / "train" / "train_episodes.csv", out / "train" / "snapshot_t0.csv",
                                       out / "train" / "train_steps.csv", out / "compare" / "compare_sum_rate.csv"};
    cli::run_plot(inputs, out / "plot");
    std::ostringstream sweep;
    cli::inspect_channel(cfg, {}, sweep);
    cli::write_text_file(out / "inspect" / "channel_sweep.csv", sweep.str());
}

void determinism() {
    const auto root = fs::temp_directory_path() / "uavnet_acceptance";
    produce(root / "a");
    produce(root / "b");
    std::size_t compared = 0;
    std::vector<std::string> diffs;
    for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), root / "a");
        const auto ext = rel.extension();
        if (ext != ".csv" && ext != ".svg") continue;
        if (rel.filename().string().find("timing") != std::string::npos) continue;
        ++compared;
        if (slurp(e.path()) != slurp(root / "b" / rel)) diffs.push_back(rel.string());
    }
    report(diffs.empty() && compared > 0, "determinism",
           fmt::format("{} CSV/SVG files compared across two runs, {} differ{}", compared, diffs.size(),
                       diffs.empty() ? "" : " (" + diffs.front() + ", ...)"));
}

} // namespace

int main(int argc, char** argv) {
    bool strict = false;
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) strict = true;
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    }
    channel_exactness();
    gradient_check();
    association_oracle();
    timing_ordering();
    determinism();
    if (!quick) learning_and_ordering({1, 2, 3, 4, 5});
    fmt::print("{} criteria failed\n", failures);
    return strict && failures ? 1 : 0;
}
