#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "uavnet/rng.hpp"

namespace uavnet::dqn {

inline constexpr std::size_t kInputs = 2;
inline constexpr std::size_t kHidden = 10;
inline constexpr std::size_t kActions = 5;
inline constexpr std::size_t kParamCount =
    kHidden * kInputs + kHidden + kActions * kHidden + kActions;

// Normalized (x, y) position in [0, 1]^2.
using State = std::array<double, kInputs>;
using QValues = std::array<double, kActions>;
using Gradient = std::array<double, kParamCount>;

// 2-10-5 perceptron with a rectifier hidden layer. Parameters are stored flat in
// checkpoint order: W1 (row-major, one row per hidden unit), b1, W2 (row-major,
// one row per action), b2.
class QNetwork {
public:
    static constexpr std::size_t kW1 = 0;
    static constexpr std::size_t kB1 = kW1 + kHidden * kInputs;
    static constexpr std::size_t kW2 = kB1 + kHidden;
    static constexpr std::size_t kB2 = kW2 + kActions * kHidden;

    QNetwork() = default;

    // Glorot-uniform weights, zero biases.
    static QNetwork glorot(Rng& rng);

    double& w1(std::size_t hidden, std::size_t input) { return theta_[kW1 + hidden * kInputs + input]; }
    double w1(std::size_t hidden, std::size_t input) const { return theta_[kW1 + hidden * kInputs + input]; }
    double& b1(std::size_t hidden) { return theta_[kB1 + hidden]; }
    double b1(std::size_t hidden) const { return theta_[kB1 + hidden]; }
    double& w2(std::size_t action, std::size_t hidden) { return theta_[kW2 + action * kHidden + hidden]; }
    double w2(std::size_t action, std::size_t hidden) const { return theta_[kW2 + action * kHidden + hidden]; }
    double& b2(std::size_t action) { return theta_[kB2 + action]; }
    double b2(std::size_t action) const { return theta_[kB2 + action]; }

    std::span<double, kParamCount> params() { return theta_; }
    std::span<const double, kParamCount> params() const { return theta_; }

    bool all_finite() const;

    friend bool operator==(const QNetwork&, const QNetwork&) = default;

private:
    std::array<double, kParamCount> theta_{};
};

QValues forward(const QNetwork& net, const State& state);

// Lowest index among maximal entries.
std::size_t argmax(const QValues& q);

// Argmax with probability 1 - epsilon, otherwise uniform over all actions.
std::size_t select_action(const QValues& q, double epsilon, Rng& rng);

struct Transition {
    State state{};
    std::size_t action = 0;
    double reward = 0.0;
    State next_state{};
};

// y = r + gamma * max_a' Q_target(s', a').
std::vector<double> td_targets(std::span<const Transition> batch, const QNetwork& target,
                               double gamma);

// Summed squared TD error on the taken actions. Fills `grad` when non-null.
double loss_and_gradient(const QNetwork& net, std::span<const Transition> batch,
                         std::span<const double> targets, Gradient* grad);

// One plain gradient-descent step; returns the loss before the update.
double train_step(QNetwork& net, std::span<const Transition> batch,
                  std::span<const double> targets, double learning_rate);

inline QNetwork sync_target(const QNetwork& net) { return net; }

// Fixed-capacity FIFO store.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return storage_.size(); }
    // i-th oldest stored transition.
    const Transition& at(std::size_t i) const;

    // Uniform draw without replacement; empty when fewer than `batch_size` are stored.
    std::optional<std::vector<Transition>> sample(std::size_t batch_size, Rng& rng) const;

private:
    std::vector<Transition> storage_;
    std::size_t head_ = 0;  // slot of the oldest item
    std::size_t size_ = 0;
};

struct DqnHyperparams {
    double learning_rate = 0.01;
    double gamma = 0.9;
    std::size_t capacity = 2000;
    std::size_t batch_size = 50;
    std::uint64_t target_sync = 200;
    double epsilon = 0.1;
    // Per-episode multiplicative decay, floored at epsilon_min. 1.0 disables decay.
    double epsilon_decay = 1.0;
    double epsilon_min = 0.0;

    void validate() const;

    friend bool operator==(const DqnHyperparams&, const DqnHyperparams&) = default;
};

// One UAV's learner: online and target networks, replay memory and its own RNG.
class Agent {
public:
    Agent(const DqnHyperparams& hp, std::uint64_t seed);
    Agent(const DqnHyperparams& hp, std::uint64_t seed, const QNetwork& initial);

    std::size_t act(const State& s);
    std::size_t greedy(const State& s) const { return argmax(forward(online_, s)); }

    struct StepReport {
        bool trained = false;
        double loss = 0.0;
        bool synced = false;
    };

    // Stores the transition, trains on a mini-batch once enough samples exist,
    // and refreshes the target network every `target_sync` calls.
    StepReport observe(const Transition& t);

    void set_epsilon(double eps) { epsilon_ = eps; }
    double epsilon() const { return epsilon_; }

    const QNetwork& online() const { return online_; }
    const QNetwork& target() const { return target_; }
    const ReplayBuffer& memory() const { return memory_; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t gradient_steps() const { return gradient_steps_; }

private:
    DqnHyperparams hp_;
    Rng rng_;
    QNetwork online_;
    QNetwork target_;
    ReplayBuffer memory_;
    double epsilon_;
    std::uint64_t steps_ = 0;
    std::uint64_t gradient_steps_ = 0;
};

// Text checkpoint: "qnet v1 2 10 5" then one row of decimals per output neuron of
// each block in parameter order.
void write_checkpoint(std::ostream& out, const QNetwork& net);
QNetwork read_checkpoint(std::istream& in);
// Writes via a temporary file and rename.
void save_checkpoint(const std::filesystem::path& path, const QNetwork& net);
QNetwork load_checkpoint(const std::filesystem::path& path);

} // namespace uavnet::dqn
