#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "geosteer/environment.hpp"
#include "geosteer/neuralnet.hpp"
#include "geosteer/particle_filter.hpp"
#include "geosteer/rng.hpp"

namespace geosteer {

struct Transition {
    std::vector<double> state;
    int action;
    double reward;
    std::vector<double> next_state;
    bool terminal;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

    void push(Transition t) {
        if (data_.size() < capacity_) {
            data_.push_back(std::move(t));
        } else {
            data_[cursor_] = std::move(t); // overwrite oldest
        }
        cursor_ = (cursor_ + 1) % capacity_;
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return data_[i]; }

private:
    std::vector<Transition> data_;
    std::size_t capacity_;
    std::size_t cursor_ = 0;
};

// How the minibatch objective scales the per-sample step: `mean` steps each
// sample by lr/minibatch (one conventional alpha step per minibatch), `sum`
// steps each by the full lr. At these reward magnitudes `sum` multiplies the
// effective rate 64-fold and blows the ReLU layers up; it exists so the
// choice is an explicit setting rather than an accident of implementation.
enum class BatchReduction { mean, sum };

struct AgentConfig {
    double gamma = 0.95;
    double lr = 0.0005;
    double eps_init = 1.0;
    double eps_final = 0.1;
    double eps_mult = 0.9997; // per episode
    int minibatch = 64;
    int target_update_every = 1000; // training steps between target syncs
    int episodes = 20000;
    std::size_t replay_capacity = 50000;
    int train_steps_per_decision = 1;
    BatchReduction batch_reduction = BatchReduction::mean;
};

struct Agent {
    QNetwork online;
    QNetwork target;
    AgentConfig config;
    ReplayBuffer buffer;
    double epsilon;
    long long step_counter = 0;
    SplitMix64 explore_rng;
    SplitMix64 sample_rng;

    Agent(const LayerSpec& spec, const AgentConfig& cfg, std::uint64_t master_seed);
};

// Epsilon-greedy; ties in the Q-values break toward the lowest action index.
// eps = 0 consumes no randomness.
int select_action(const QNetwork& net, const std::vector<double>& state, double eps,
                  SplitMix64& rng);

inline double decay_epsilon(double eps, const AgentConfig& cfg) {
    return std::max(cfg.eps_final, eps * cfg.eps_mult);
}

void sync_target(const QNetwork& online, QNetwork& target);

// One minibatch of per-sample SGD updates against the online net; each sample
// steps by lr/minibatch (its share of the minibatch-mean objective). Returns
// the summed loss, or nothing when the buffer is still too small. Handles the
// step counter and scheduled target sync.
std::optional<double> train_step(Agent& agent);

// --- episode driver ---------------------------------------------------------

enum class Mode { train, eval };

struct EpisodeSetup {
    const OffsetLog* log = nullptr;
    EnvConfig env_config;
    bool use_filter = false;
    TransitionModel model;
    double sigma = 0.2;
    int n_par = 128;
    double prior_lo_offset = 180.0; // prior support = bit + [lo, hi]
    double prior_hi_offset = 270.0;
    int trace_top_k = 1;
    // Charge the landing-phase -1s inside the transition rewards (the episode
    // reward metric always stays landing-exempt). Without them the first 3
    // decisions carry no learning signal at all and training stalls.
    bool charge_landing_in_transitions = true;
};

// What an encoder may look at: the live episode plus the filter (if enabled).
struct EpisodeContext {
    const EnvState* env;
    const ParticleSet* filter;
};

using Encoder = std::function<std::vector<double>(const EpisodeContext&)>;

struct EpisodeResult {
    int reward = 0;
    std::vector<Transition> transitions;
    PfTrace trace;                 // per-station filter estimates (when enabled)
    std::vector<double> true_top;  // aligned with trace.stations
    std::vector<double> true_gamma;
    double loss_sum = 0.0;
    int loss_count = 0;
    EnvState env; // final state, kept for traces/plots
};

EpisodeResult run_episode(Realization real, const EpisodeSetup& setup, const Encoder& encoder,
                          Agent& agent, Mode mode, std::uint64_t episode_seed);

} // namespace geosteer
