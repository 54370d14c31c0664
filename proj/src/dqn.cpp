#include "uavnet/dqn.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "uavnet/error.hpp"

namespace uavnet::dqn {

QNetwork QNetwork::glorot(Rng& rng) {
    QNetwork net;
    const double limit1 = std::sqrt(6.0 / double(kInputs + kHidden));
    const double limit2 = std::sqrt(6.0 / double(kHidden + kActions));
    for (std::size_t h = 0; h < kHidden; ++h)
        for (std::size_t i = 0; i < kInputs; ++i) net.w1(h, i) = rng.uniform(-limit1, limit1);
    for (std::size_t a = 0; a < kActions; ++a)
        for (std::size_t h = 0; h < kHidden; ++h) net.w2(a, h) = rng.uniform(-limit2, limit2);
    return net;
}

bool QNetwork::all_finite() const {
    return std::all_of(theta_.begin(), theta_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

struct Activations {
    std::array<double, kHidden> pre{};
    std::array<double, kHidden> hidden{};
    QValues q{};
};

Activations run(const QNetwork& net, const State& s) {
    Activations act;
    for (std::size_t h = 0; h < kHidden; ++h) {
        double z = net.b1(h);
        for (std::size_t i = 0; i < kInputs; ++i) z += net.w1(h, i) * s[i];
        act.pre[h] = z;
        act.hidden[h] = z > 0.0 ? z : 0.0;
    }
    for (std::size_t a = 0; a < kActions; ++a) {
        double z = net.b2(a);
        for (std::size_t h = 0; h < kHidden; ++h) z += net.w2(a, h) * act.hidden[h];
        act.q[a] = z;
    }
    return act;
}

} // namespace

QValues forward(const QNetwork& net, const State& state) {
    for (double v : state) {
        if (!std::isfinite(v)) throw DomainError("forward: non-finite state component");
    }
    return run(net, state).q;
}

std::size_t argmax(const QValues& q) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < q.size(); ++a) {
        if (q[a] > q[best]) best = a;
    }
    return best;
}

std::size_t select_action(const QValues& q, double epsilon, Rng& rng) {
    if (epsilon > 0.0 && rng.uniform() < epsilon) return rng.index(kActions);
    return argmax(q);
}

std::vector<double> td_targets(std::span<const Transition> batch, const QNetwork& target,
                               double gamma) {
    if (batch.empty()) throw DomainError("td_targets: empty batch");
    std::vector<double> y;
    y.reserve(batch.size());
    for (const auto& t : batch) {
        const QValues q = forward(target, t.next_state);
        y.push_back(t.reward + gamma * *std::max_element(q.begin(), q.end()));
    }
    return y;
}

double loss_and_gradient(const QNetwork& net, std::span<const Transition> batch,
                         std::span<const double> targets, Gradient* grad) {
    if (batch.size() != targets.size()) {
        throw DomainError("train_step: targets are not aligned with the batch");
    }
    if (grad) grad->fill(0.0);

    double loss = 0.0;
    for (std::size_t e = 0; e < batch.size(); ++e) {
        const Transition& t = batch[e];
        const Activations act = run(net, t.state);
        const double err = targets[e] - act.q[t.action];
        loss += err * err;
        if (!grad) continue;

        // d(err^2)/dq_a = -2 err; other outputs carry no error.
        const double dq = -2.0 * err;
        auto& g = *grad;
        g[QNetwork::kB2 + t.action] += dq;
        for (std::size_t h = 0; h < kHidden; ++h) {
            g[QNetwork::kW2 + t.action * kHidden + h] += dq * act.hidden[h];
            if (act.pre[h] <= 0.0) continue;
            const double dpre = dq * net.w2(t.action, h);
            g[QNetwork::kB1 + h] += dpre;
            for (std::size_t i = 0; i < kInputs; ++i) {
                g[QNetwork::kW1 + h * kInputs + i] += dpre * t.state[i];
            }
        }
    }
    return loss;
}

double train_step(QNetwork& net, std::span<const Transition> batch,
                  std::span<const double> targets, double learning_rate) {
    Gradient grad;
    const double loss = loss_and_gradient(net, batch, targets, &grad);
    for (std::size_t p = 0; p < kParamCount; ++p) {
        if (!std::isfinite(grad[p])) {
            throw TrainingError(fmt::format(
                "train_step: non-finite gradient for parameter {} (loss {}, batch {})", p, loss,
                batch.size()));
        }
    }
    auto theta = net.params();
    for (std::size_t p = 0; p < kParamCount; ++p) theta[p] -= learning_rate * grad[p];
    return loss;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : storage_(capacity) {
    if (capacity == 0) throw ConfigError("replay buffer capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
    if (t.action >= kActions) throw DomainError(fmt::format("replay: action {} out of range", t.action));
    if (size_ < storage_.size()) {
        storage_[(head_ + size_) % storage_.size()] = t;
        ++size_;
    } else {
        storage_[head_] = t;
        head_ = (head_ + 1) % storage_.size();
    }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("replay: index past the stored transitions");
    return storage_[(head_ + i) % storage_.size()];
}

std::optional<std::vector<Transition>> ReplayBuffer::sample(std::size_t batch_size,
                                                            Rng& rng) const {
    if (batch_size == 0 || size_ < batch_size) return std::nullopt;
    // Floyd's algorithm: batch_size distinct indices in O(batch_size^2) without
    // touching the whole store.
    std::vector<std::size_t> chosen;
    chosen.reserve(batch_size);
    for (std::size_t j = size_ - batch_size; j < size_; ++j) {
        const auto r = static_cast<std::size_t>(rng.index(j + 1));
        const bool seen = std::find(chosen.begin(), chosen.end(), r) != chosen.end();
        chosen.push_back(seen ? j : r);
    }
    std::vector<Transition> batch;
    batch.reserve(batch_size);
    for (std::size_t i : chosen) batch.push_back(at(i));
    return batch;
}

void DqnHyperparams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(fmt::format("dqn: {}", what));
    };
    require(learning_rate > 0.0, "learning_rate must be positive");
    require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
    require(capacity >= 1, "capacity must be positive");
    require(batch_size >= 1 && batch_size <= capacity, "batch_size must lie in [1, capacity]");
    require(target_sync >= 1, "target_sync must be >= 1");
    require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(epsilon_decay > 0.0 && epsilon_decay <= 1.0, "epsilon_decay must lie in (0, 1]");
    require(epsilon_min >= 0.0 && epsilon_min <= 1.0, "epsilon_min must lie in [0, 1]");
}

Agent::Agent(const DqnHyperparams& hp, std::uint64_t seed)
    : hp_(hp), rng_(seed), memory_(hp.capacity), epsilon_(hp.epsilon) {
    online_ = QNetwork::glorot(rng_);
    target_ = sync_target(online_);
}

Agent::Agent(const DqnHyperparams& hp, std::uint64_t seed, const QNetwork& initial)
    : hp_(hp), rng_(seed), online_(initial), target_(initial), memory_(hp.capacity),
      epsilon_(hp.epsilon) {}

std::size_t Agent::act(const State& s) {
    return select_action(forward(online_, s), epsilon_, rng_);
}

Agent::StepReport Agent::observe(const Transition& t) {
    StepReport report;
    memory_.push(t);
    ++steps_;
    if (auto batch = memory_.sample(hp_.batch_size, rng_)) {
        const auto targets = td_targets(*batch, target_, hp_.gamma);
        report.loss = train_step(online_, *batch, targets, hp_.learning_rate);
        if (!std::isfinite(report.loss)) {
            throw TrainingError(fmt::format("non-finite loss at agent step {}", steps_));
        }
        report.trained = true;
        ++gradient_steps_;
    }
    if (steps_ % hp_.target_sync == 0) {
        target_ = sync_target(online_);
        report.synced = true;
    }
    return report;
}

} // namespace uavnet::dqn
