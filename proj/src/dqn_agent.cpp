#include "geosteer/dqn_agent.hpp"

#include <algorithm>

#include "geosteer/errors.hpp"

namespace geosteer {

Agent::Agent(const LayerSpec& spec, const AgentConfig& cfg, std::uint64_t master_seed)
    : online(nn_init(spec, derive_seed(master_seed, "weights"))),
      target(online),
      config(cfg),
      buffer(cfg.replay_capacity),
      epsilon(cfg.eps_init),
      explore_rng(derive_seed(master_seed, "explore")),
      sample_rng(derive_seed(master_seed, "replay")) {}

int select_action(const QNetwork& net, const std::vector<double>& state, double eps,
                  SplitMix64& rng) {
    if (eps > 0.0 && rng.uniform01() < eps)
        return static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(net.output_dim())));
    const std::vector<double> q = nn_forward(net, state);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a)
        if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) best = a;
    return best;
}

void sync_target(const QNetwork& online, QNetwork& target) {
    if (!(online.spec == target.spec)) throw usage_error("sync_target: spec mismatch");
    target.weights = online.weights;
    target.biases = online.biases;
}

std::optional<double> train_step(Agent& agent) {
    const std::size_t batch = static_cast<std::size_t>(agent.config.minibatch);
    if (agent.buffer.size() < batch) return std::nullopt;

    // Under `mean` each sample descends its own share of the minibatch-mean
    // objective, so alpha keeps its conventional one-step-per-minibatch
    // meaning while the weights still move once per sample.
    const double sample_lr = agent.config.batch_reduction == BatchReduction::sum
                                 ? agent.config.lr
                                 : agent.config.lr / static_cast<double>(batch);
    double total = 0.0;
    for (std::size_t k = 0; k < batch; ++k) {
        const Transition& t = agent.buffer.at(agent.sample_rng.uniform_int(agent.buffer.size()));
        double y = t.reward;
        if (!t.terminal) {
            const std::vector<double> q = nn_forward(agent.target, t.next_state);
            y += agent.config.gamma * *std::max_element(q.begin(), q.end());
        }
        total += nn_backward_sgd(agent.online, t.state, t.action, y, sample_lr);
    }
    agent.step_counter += 1;
    if (agent.step_counter % agent.config.target_update_every == 0)
        sync_target(agent.online, agent.target);
    return total;
}

EpisodeResult run_episode(Realization real, const EpisodeSetup& setup, const Encoder& encoder,
                          Agent& agent, Mode mode, std::uint64_t episode_seed) {
    EpisodeResult result;
    EnvState env = reset(std::move(real), *setup.log, setup.env_config, episode_seed);

    ParticleSet filter;
    PfTrace* trace = nullptr;
    const double thickness = env.config.strat.thickness_h;
    if (setup.use_filter) {
        result.trace.top_k = setup.trace_top_k;
        trace = &result.trace;
        filter = pf_init(env.well.tvd + setup.prior_lo_offset,
                         env.well.tvd + setup.prior_hi_offset, setup.model, setup.n_par,
                         derive_seed(episode_seed, "pf"));
        // Decision-station resamples are deferred past the encoder so the
        // policy always sees posterior weights.
        pf_assimilate(filter, setup.model, *setup.log, setup.sigma, env.well.tvd,
                      env.gamma_history[0], thickness, /*propagate_first=*/false, trace,
                      /*allow_resample=*/false);
    }

    EpisodeContext ctx{&env, setup.use_filter ? &filter : nullptr};
    std::vector<double> state = encoder(ctx);

    while (!env.done()) {
        if (setup.use_filter && pf_resample_due(filter.station)) pf_resample(filter);

        const double eps = mode == Mode::train ? agent.epsilon : 0.0;
        const int action = select_action(agent.online, state, eps, agent.explore_rng);
        const StepOutcome out = step(env, action);

        if (setup.use_filter)
            for (std::size_t i = 0; i < out.stations.size(); ++i)
                pf_assimilate(filter, setup.model, *setup.log, setup.sigma,
                              out.stations[i].tvd, out.gammas[i], thickness,
                              /*propagate_first=*/true, trace,
                              /*allow_resample=*/i + 1 < out.stations.size());

        std::vector<double> next_state = encoder(ctx);
        const double signal = setup.charge_landing_in_transitions
                                  ? out.reward - out.landing_misses
                                  : static_cast<double>(out.reward);
        result.transitions.push_back({state, action, signal, next_state, out.done});
        if (mode == Mode::train) {
            agent.buffer.push(result.transitions.back());
            for (int k = 0; k < agent.config.train_steps_per_decision; ++k)
                if (const auto loss = train_step(agent)) {
                    result.loss_sum += *loss;
                    result.loss_count += 1;
                }
        }
        state = std::move(next_state);
        result.reward += out.reward;
    }

    for (int s : result.trace.stations) {
        result.true_top.push_back(env.realization.top(s));
        result.true_gamma.push_back(env.gamma_history[static_cast<std::size_t>(s)]);
    }
    result.env = std::move(env);
    return result;
}

} // namespace geosteer
