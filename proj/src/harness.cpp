#include "geosteer/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geosteer/csv.hpp"
#include "geosteer/errors.hpp"
#include "geosteer/svg.hpp"

namespace geosteer {

namespace fs = std::filesystem;

Method parse_method(const std::string& name) {
    for (Method m : {Method::rule_based_1, Method::rule_based_5, Method::rl_log,
                     Method::rl_est_1, Method::rl_est_5, Method::oracle_true,
                     Method::oracle_lookahead})
        if (name == method_name(m)) return m;
    throw config_error("unknown method: " + name);
}

const char* method_name(Method m) {
    switch (m) {
        case Method::rule_based_1: return "rule_based_1";
        case Method::rule_based_5: return "rule_based_5";
        case Method::rl_log: return "rl_log";
        case Method::rl_est_1: return "rl_est_1";
        case Method::rl_est_5: return "rl_est_5";
        case Method::oracle_true: return "oracle_true";
        case Method::oracle_lookahead: return "oracle_lookahead";
    }
    throw usage_error("unknown method");
}

bool method_is_rl(Method m) {
    return m != Method::rule_based_1 && m != Method::rule_based_5;
}

EncoderId method_encoder(Method m) {
    switch (m) {
        case Method::rl_log: return EncoderId::rl_log;
        case Method::rl_est_1: return EncoderId::rl_est_1;
        case Method::rl_est_5: return EncoderId::rl_est_5;
        case Method::oracle_true: return EncoderId::oracle_true;
        case Method::oracle_lookahead: return EncoderId::oracle_lookahead;
        default: throw usage_error("rule-based methods have no encoder");
    }
}

double median(std::vector<double> values) {
    if (values.empty()) throw usage_error("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<Realization> make_eval_set(const HarnessConfig& cfg, int count, const char* tag) {
    std::vector<Realization> reals;
    reals.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        reals.push_back(generate_realization(cfg.env.strat, derive_seed(cfg.eval_seed, tag, i)));
    return reals;
}

std::uint64_t realization_set_hash(const std::vector<Realization>& reals) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix_bytes = [&h](const void* p, std::size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ull;
        }
    };
    for (const Realization& r : reals) {
        mix_bytes(r.top_depth.data(), r.top_depth.size() * sizeof(double));
        mix_bytes(r.fault_stations.data(), r.fault_stations.size() * sizeof(int));
        mix_bytes(r.fault_throws.data(), r.fault_throws.size() * sizeof(double));
        mix_bytes(&r.start_offset, sizeof(double));
    }
    return h;
}

namespace {

constexpr int kSweepRealizations = 100;
constexpr int kSweepNbestMax = 8;
const int kSweepNpar[] = {32, 64, 128, 256, 512, 1024};
constexpr int kSweepNparForNbest = 128;
// Straight-hold: level out over the first four decisions, then hold.
const int kSweepActions[] = {0, 0, 0, 0, 5, 5, 5, 5, 5, 5};

void validate(const HarnessConfig& cfg) {
    cfg.env.strat.validate();
    if (cfg.env.strat.n_stations != cfg.env.total_stations())
        throw config_error("strat.n_stations must equal total_decisions * interval_stations");
    if (cfg.seeds.empty()) throw config_error("seeds must not be empty");
    if (cfg.agent.episodes < 1) throw config_error("agent.episodes must be >= 1");
    if (cfg.pf_n_par < 1) throw config_error("pf.n_par must be >= 1");
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    fs::create_directories(cfg.out_dir);
}

std::string out_path(const HarnessConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

std::string checkpoint_path_impl(const HarnessConfig& cfg, const std::string& method,
                                 std::uint64_t seed, const std::string& suffix) {
    return out_path(cfg, method + "_seed" + std::to_string(seed) + suffix + ".ckpt");
}

int x_best_of(Method m) {
    switch (m) {
        case Method::rule_based_5:
        case Method::rl_est_5: return 5;
        default: return 1;
    }
}

bool uses_filter(Method m) {
    return m == Method::rl_est_1 || m == Method::rl_est_5 || m == Method::rule_based_1 ||
           m == Method::rule_based_5;
}

EpisodeSetup make_setup(const HarnessConfig& cfg, const OffsetLog& log, Method m) {
    EpisodeSetup s;
    s.log = &log;
    s.env_config = cfg.env;
    s.use_filter = uses_filter(m) && method_is_rl(m);
    s.model = cfg.pf_model;
    s.sigma = cfg.pf_sigma;
    s.n_par = cfg.pf_n_par;
    s.prior_lo_offset = cfg.pf_prior_lo;
    s.prior_hi_offset = cfg.pf_prior_hi;
    s.trace_top_k = x_best_of(m);
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string mae_cell(double v) {
    return std::isfinite(v) ? format_double(v, 6) : "nan";
}

// --- training ----------------------------------------------------------------

void train_one(const HarnessConfig& cfg, Method m, std::uint64_t seed, const OffsetLog& log) {
    const EncoderId id = method_encoder(m);
    Agent agent(layer_spec_for(id), cfg.agent, seed);
    const Encoder encoder = make_encoder(id);
    const EpisodeSetup setup = make_setup(cfg, log, m);

    const std::string curve_name =
        "train_curve_" + std::string(method_name(m)) + "_seed" + std::to_string(seed) + ".csv";
    CsvWriter curve(out_path(cfg, curve_name),
                    {"episode", "reward", "epsilon", "loss_mean", "wall_ms"});

    nlohmann::json meta{{"method", method_name(m)},
                        {"encoder", encoder_name(id)},
                        {"seed", seed},
                        {"log_seed", cfg.log_seed},
                        {"alpha", cfg.agent.lr},
                        {"gamma", cfg.agent.gamma},
                        {"init", "glorot_uniform"},
                        {"precision", "float64"}};

    const auto t0 = std::chrono::steady_clock::now();
    for (int ep = 0; ep < cfg.agent.episodes; ++ep) {
        const auto ep0 = std::chrono::steady_clock::now();
        Realization real =
            generate_realization(cfg.env.strat, derive_seed(seed, "train_real", ep));
        EpisodeResult res = run_episode(std::move(real), setup, encoder, agent, Mode::train,
                                        derive_seed(seed, "train_episode", ep));
        const double eps_used = agent.epsilon;
        agent.epsilon = decay_epsilon(agent.epsilon, cfg.agent);

        const double loss_mean = res.loss_count ? res.loss_sum / res.loss_count : 0.0;
        const long wall_ms =
            cfg.timing ? static_cast<long>(seconds_since(ep0) * 1000.0 + 0.5) : 0;
        curve.write_row({std::to_string(ep), std::to_string(res.reward),
                         format_double(eps_used, 6), format_sci(loss_mean, 6),
                         std::to_string(wall_ms)});

        if ((ep + 1) % cfg.checkpoint_every == 0) {
            meta["episodes_trained"] = ep + 1;
            meta["epsilon_final"] = agent.epsilon;
            nn_save(agent.online, checkpoint_path_impl(cfg, method_name(m), seed, "_latest"),
                    meta);
        }
        if ((ep + 1) % 1000 == 0)
            std::printf("  %s seed %llu: episode %d/%d reward %d eps %.3f\n", method_name(m),
                        static_cast<unsigned long long>(seed), ep + 1, cfg.agent.episodes,
                        res.reward, eps_used);
    }
    curve.close();

    meta["episodes_trained"] = cfg.agent.episodes;
    meta["epsilon_final"] = agent.epsilon;
    nn_save(agent.online, checkpoint_path_impl(cfg, method_name(m), seed, ""), meta);
    std::printf("trained %s seed %llu in %.1f s\n", method_name(m),
                static_cast<unsigned long long>(seed), seconds_since(t0));
}

} // namespace

std::string checkpoint_path(const HarnessConfig& cfg, Method m, std::uint64_t seed) {
    return checkpoint_path_impl(cfg, method_name(m), seed, "");
}

void cmd_train(const HarnessConfig& cfg) {
    validate(cfg);
    const Method m = parse_method(cfg.method);
    if (!method_is_rl(m))
        throw config_error("method " + cfg.method + " is not trainable; train rl_est_1 instead");
    const OffsetLog log = synth_offset_log(cfg.log_seed);
    for (std::uint64_t seed : cfg.seeds) train_one(cfg, m, seed, log);
}

// --- evaluation ---------------------------------------------------------------

namespace {

QNetwork load_checkpoint_for(const HarnessConfig& cfg, Method m, std::uint64_t seed,
                             EncoderId expected) {
    const std::string path = checkpoint_path(cfg, m, seed);
    if (!fs::exists(path)) throw validation_error("missing checkpoint: " + path);
    nlohmann::json meta;
    QNetwork net = nn_load(path, &meta);
    const std::string enc = meta.value("encoder", "");
    if (!enc.empty() && enc != encoder_name(expected))
        throw validation_error("checkpoint " + path + " was trained with encoder '" + enc +
                               "', expected '" + encoder_name(expected) + "'");
    if (!(net.spec == layer_spec_for(expected)))
        throw validation_error("checkpoint " + path + " layer widths do not match encoder " +
                               encoder_name(expected));
    return net;
}

EvalEpisode make_row(const HarnessConfig& cfg, Method m, std::uint64_t seed, int realization,
                     const EpisodeResult& res) {
    EvalEpisode row;
    row.method = method_name(m);
    row.seed = seed;
    row.realization = realization;
    row.reward = res.reward;
    row.contact = contact_fraction(res.reward, cfg.env);
    row.faults = static_cast<int>(res.env.realization.fault_stations.size());
    if (!res.trace.stations.empty()) {
        const int x = x_best_of(m);
        row.boundary_mae = res.trace.boundary_mae(x, res.true_top);
        row.gamma_mae = res.trace.gamma_mae(x, res.true_gamma);
    } else {
        row.boundary_mae = std::nan("");
        row.gamma_mae = std::nan("");
    }
    return row;
}

std::vector<EvalEpisode> eval_rl_seed(const HarnessConfig& cfg, Method m, std::uint64_t seed,
                                      const OffsetLog& log,
                                      const std::vector<Realization>& reals) {
    const EncoderId id = method_encoder(m);
    Agent agent(layer_spec_for(id), cfg.agent, seed);
    agent.online = load_checkpoint_for(cfg, m, seed, id);
    sync_target(agent.online, agent.target);
    const Encoder encoder = make_encoder(id);
    const EpisodeSetup setup = make_setup(cfg, log, m);

    std::vector<EvalEpisode> rows(reals.size());
    std::atomic<bool> failed{false};
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(reals.size()); ++i) {
        if (failed.load()) continue;
        try {
            EpisodeResult res =
                run_episode(reals[static_cast<std::size_t>(i)], setup, encoder, agent,
                            Mode::eval, derive_seed(cfg.eval_seed, "eval_ep", i));
            rows[static_cast<std::size_t>(i)] = make_row(cfg, m, seed, i, res);
        } catch (...) {
#pragma omp critical
            {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    return rows;
}

// One rule-based episode: PF-driven greedy decisions, landing steered by a
// trained rl_est_1 policy.
EvalEpisode rule_based_episode(const HarnessConfig& cfg, Method m, std::uint64_t seed,
                               const OffsetLog& log, Realization real, int realization_idx,
                               const QNetwork& landing_net) {
    const double thickness = cfg.env.strat.thickness_h;
    const std::uint64_t episode_seed = derive_seed(cfg.eval_seed, "eval_ep", realization_idx);
    EnvState env = reset(std::move(real), log, cfg.env, episode_seed);
    ParticleSet set =
        pf_init(env.well.tvd + cfg.pf_prior_lo, env.well.tvd + cfg.pf_prior_hi, cfg.pf_model,
                cfg.pf_n_par, derive_seed(episode_seed, "pf"));
    pf_assimilate(set, cfg.pf_model, log, cfg.pf_sigma, env.well.tvd, env.gamma_history[0],
                  thickness, /*propagate_first=*/false, nullptr, /*allow_resample=*/false);

    RuleBasedConfig rule = cfg.rule;
    rule.x_best = x_best_of(m);

    double mae_sum = 0.0;
    int mae_count = 0;
    while (!env.done()) {
        int action;
        if (env.phase == Phase::landing) {
            const auto est = pf_best(set, 1, thickness);
            const std::vector<double> state = encode_rl_est(env, est);
            const std::vector<double> q = nn_forward(landing_net, state);
            action = 0;
            for (int a = 1; a < static_cast<int>(q.size()); ++a)
                if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(action)])
                    action = a;
        } else {
            const auto best = pf_best_particles(set, rule.x_best);
            std::vector<double> true_top;
            for (int j = 1; j <= cfg.env.steer.interval_stations; ++j)
                true_top.push_back(env.realization.top(env.well.station + j));
            double mae = 0.0;
            action = rule_based_decide(best, env.well, env.phase, cfg.env.steer, cfg.pf_model,
                                       thickness, rule,
                                       derive_seed(episode_seed, "rule", env.decision_index),
                                       &true_top, &mae);
            mae_sum += mae;
            mae_count += 1;
        }

        if (pf_resample_due(set.station)) pf_resample(set);
        const StepOutcome out = step(env, action);
        for (std::size_t i = 0; i < out.stations.size(); ++i)
            pf_assimilate(set, cfg.pf_model, log, cfg.pf_sigma, out.stations[i].tvd,
                          out.gammas[i], thickness, /*propagate_first=*/true, nullptr,
                          /*allow_resample=*/i + 1 < out.stations.size());
    }

    EvalEpisode row;
    row.method = method_name(m);
    row.seed = seed;
    row.realization = realization_idx;
    row.reward = env.reward_total;
    row.contact = contact_fraction(env.reward_total, cfg.env);
    row.faults = static_cast<int>(env.realization.fault_stations.size());
    row.boundary_mae = mae_count ? mae_sum / mae_count : std::nan("");
    row.gamma_mae = std::nan("");
    return row;
}

std::vector<EvalEpisode> eval_rule_based(const HarnessConfig& cfg, Method m,
                                         const OffsetLog& log,
                                         const std::vector<Realization>& reals) {
    const std::uint64_t landing_seed = cfg.seeds.front();
    const std::string landing_path = cfg.rule_landing_checkpoint.empty()
                                         ? checkpoint_path(cfg, Method::rl_est_1, landing_seed)
                                         : cfg.rule_landing_checkpoint;
    if (!fs::exists(landing_path))
        throw validation_error("missing landing checkpoint for rule-based method: " +
                               landing_path);
    nlohmann::json meta;
    const QNetwork landing_net = nn_load(landing_path, &meta);
    const std::string enc = meta.value("encoder", "");
    if (!enc.empty() && enc != encoder_name(EncoderId::rl_est_1))
        throw validation_error("rule-based landing checkpoint must be rl_est_1, got " + enc);
    if (!(landing_net.spec == layer_spec_for(EncoderId::rl_est_1)))
        throw validation_error("rule-based landing checkpoint has wrong layer widths");

    std::vector<EvalEpisode> rows(reals.size());
    std::atomic<bool> failed{false};
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(reals.size()); ++i) {
        if (failed.load()) continue;
        try {
            rows[static_cast<std::size_t>(i)] =
                rule_based_episode(cfg, m, landing_seed, log, reals[static_cast<std::size_t>(i)],
                                   i, landing_net);
        } catch (...) {
#pragma omp critical
            {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    return rows;
}

double stratum_contact_pct(const HarnessConfig& cfg, const std::vector<EvalEpisode>& episodes,
                           const std::vector<std::uint64_t>& seeds, int min_faults) {
    std::vector<double> per_seed;
    for (std::uint64_t seed : seeds) {
        double sum = 0.0;
        int n = 0;
        for (const EvalEpisode& e : episodes)
            if (e.seed == seed && e.faults >= min_faults) {
                sum += e.reward;
                n += 1;
            }
        if (n) per_seed.push_back(sum / n);
    }
    if (per_seed.empty()) return std::nan("");
    return 100.0 * contact_fraction(median(per_seed), cfg.env);
}

EvalReport aggregate_report(const HarnessConfig& cfg, Method m,
                            const std::vector<EvalEpisode>& episodes,
                            const std::vector<std::uint64_t>& seeds, std::uint64_t set_hash) {
    EvalReport rep;
    rep.method = method_name(m);
    rep.episodes = episodes;
    rep.eval_set_hash = set_hash;

    for (std::uint64_t seed : seeds) {
        double sum = 0.0;
        int n = 0;
        for (const EvalEpisode& e : episodes)
            if (e.seed == seed) {
                sum += e.reward;
                n += 1;
            }
        if (n) rep.per_seed_mean_reward.emplace_back(seed, sum / n);
    }
    std::vector<double> means;
    for (const auto& [seed, mean] : rep.per_seed_mean_reward) means.push_back(mean);
    rep.median_reward = median(means);
    rep.contact_pct = 100.0 * contact_fraction(rep.median_reward, cfg.env);
    rep.contact_pct_ge1 = stratum_contact_pct(cfg, episodes, seeds, 1);
    rep.contact_pct_ge2 = stratum_contact_pct(cfg, episodes, seeds, 2);

    double bsum = 0.0, gsum = 0.0;
    int bn = 0, gn = 0;
    for (const EvalEpisode& e : episodes) {
        if (std::isfinite(e.boundary_mae)) { bsum += e.boundary_mae; bn += 1; }
        if (std::isfinite(e.gamma_mae)) { gsum += e.gamma_mae; gn += 1; }
    }
    rep.boundary_mae_mean = bn ? bsum / bn : std::nan("");
    rep.gamma_mae_mean = gn ? gsum / gn : std::nan("");
    return rep;
}

void write_results_csv(const HarnessConfig& cfg, const EvalReport& rep) {
    CsvWriter csv(out_path(cfg, "results_" + rep.method + ".csv"),
                  {"method", "seed", "realization", "reward", "contact", "faults",
                   "boundary_mae", "gamma_mae"});
    for (const EvalEpisode& e : rep.episodes)
        csv.write_row({e.method, std::to_string(e.seed), std::to_string(e.realization),
                       std::to_string(e.reward), format_double(e.contact, 6),
                       std::to_string(e.faults), mae_cell(e.boundary_mae),
                       mae_cell(e.gamma_mae)});
    csv.close();
}

void print_report(const EvalReport& rep) {
    std::printf(
        "%-16s median reward %8.2f  contact %6.2f%%  (faults>=1 %6.2f%%, >=2 %6.2f%%)  "
        "MAE top %s ft  gamma %s  [%.1f s]\n",
        rep.method.c_str(), rep.median_reward, rep.contact_pct, rep.contact_pct_ge1,
        rep.contact_pct_ge2, mae_cell(rep.boundary_mae_mean).c_str(),
        mae_cell(rep.gamma_mae_mean).c_str(), rep.wall_seconds);
}

EvalReport evaluate_method(const HarnessConfig& cfg, Method m, const OffsetLog& log,
                           const std::vector<Realization>& reals, std::uint64_t set_hash) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<EvalEpisode> episodes;
    std::vector<std::uint64_t> seeds;
    if (method_is_rl(m)) {
        seeds = cfg.seeds;
        for (std::uint64_t seed : cfg.seeds) {
            const auto rows = eval_rl_seed(cfg, m, seed, log, reals);
            episodes.insert(episodes.end(), rows.begin(), rows.end());
        }
    } else {
        // Rule-based has no training-seed dimension: evaluated once.
        seeds = {cfg.seeds.front()};
        episodes = eval_rule_based(cfg, m, log, reals);
    }
    EvalReport rep = aggregate_report(cfg, m, episodes, seeds, set_hash);
    rep.wall_seconds = seconds_since(t0);
    write_results_csv(cfg, rep);
    return rep;
}

} // namespace

EvalReport cmd_evaluate(const HarnessConfig& cfg) {
    validate(cfg);
    const Method m = parse_method(cfg.method);
    const OffsetLog log = synth_offset_log(cfg.log_seed);
    const std::vector<Realization> reals =
        make_eval_set(cfg, cfg.eval_realizations, "eval_real");
    const std::uint64_t set_hash = realization_set_hash(reals);
    std::printf("eval set: %d realizations, hash %016llx\n", cfg.eval_realizations,
                static_cast<unsigned long long>(set_hash));
    EvalReport rep = evaluate_method(cfg, m, log, reals, set_hash);
    print_report(rep);
    return rep;
}

void cmd_benchmark(const HarnessConfig& cfg) {
    validate(cfg);
    const OffsetLog log = synth_offset_log(cfg.log_seed);
    const std::vector<Realization> reals =
        make_eval_set(cfg, cfg.eval_realizations, "eval_real");
    const std::uint64_t set_hash = realization_set_hash(reals);
    std::printf("benchmark eval set: %d realizations, hash %016llx\n", cfg.eval_realizations,
                static_cast<unsigned long long>(set_hash));

    const Method methods[] = {Method::rule_based_1, Method::rule_based_5, Method::rl_log,
                              Method::rl_est_1,     Method::rl_est_5,     Method::oracle_true,
                              Method::oracle_lookahead};

    CsvWriter csv(out_path(cfg, "benchmark_summary.csv"),
                  {"method", "stratum", "contact_pct", "median_reward", "boundary_mae",
                   "gamma_mae"});
    BarChart bars;
    bars.title = "Reservoir contact by method and fault stratum";
    bars.y_label = "contact (%)";
    bars.groups = {{"faults >= 0", {}}, {"faults >= 1", {}}, {"faults >= 2", {}}};

    for (Method m : methods) {
        EvalReport rep = evaluate_method(cfg, m, log, reals, set_hash);
        print_report(rep);
        if (rep.eval_set_hash != set_hash)
            throw validation_error("evaluation realization set diverged between methods");
        const double strata[3] = {rep.contact_pct, rep.contact_pct_ge1, rep.contact_pct_ge2};
        const char* names[3] = {"ge0", "ge1", "ge2"};
        const double rewards[3] = {rep.median_reward, std::nan(""), std::nan("")};
        for (int s = 0; s < 3; ++s) {
            csv.write_row({method_name(m), names[s], format_double(strata[s], 4),
                           std::isfinite(rewards[s]) ? format_double(rewards[s], 4) : "nan",
                           mae_cell(rep.boundary_mae_mean), mae_cell(rep.gamma_mae_mean)});
            bars.groups[static_cast<std::size_t>(s)].values.push_back(strata[s]);
        }
        bars.series_labels.push_back(method_name(m));
    }
    csv.close();
    bars.save(out_path(cfg, "contact_bars.svg"));
    std::printf("wrote %s and %s\n", out_path(cfg, "benchmark_summary.csv").c_str(),
                out_path(cfg, "contact_bars.svg").c_str());
}

// --- pf sweep -----------------------------------------------------------------

void cmd_pf_sweep(const HarnessConfig& cfg) {
    validate(cfg);
    const OffsetLog log = synth_offset_log(cfg.log_seed);
    const std::vector<Realization> reals = make_eval_set(cfg, kSweepRealizations, "sweep_real");

    // One filtered run per (n_par, realization); per-episode MAE per n_best.
    struct EpisodeMae {
        double gamma[kSweepNbestMax];
        double boundary[kSweepNbestMax];
    };

    auto run_sweep_episode = [&](int n_par, int i) {
        const std::uint64_t episode_seed = derive_seed(cfg.eval_seed, "sweep_ep", i);
        EnvState env = reset(reals[static_cast<std::size_t>(i)], log, cfg.env, episode_seed);
        ParticleSet set = pf_init(env.well.tvd + cfg.pf_prior_lo,
                                  env.well.tvd + cfg.pf_prior_hi, cfg.pf_model, n_par,
                                  derive_seed(episode_seed, "pf"));
        PfTrace trace;
        trace.top_k = std::min(kSweepNbestMax, n_par);
        const double h = cfg.env.strat.thickness_h;
        pf_assimilate(set, cfg.pf_model, log, cfg.pf_sigma, env.well.tvd, env.gamma_history[0],
                      h, false, &trace, false);
        int d = 0;
        while (!env.done()) {
            if (pf_resample_due(set.station)) pf_resample(set);
            const StepOutcome out = step(env, kSweepActions[d++]);
            for (std::size_t s = 0; s < out.stations.size(); ++s)
                pf_assimilate(set, cfg.pf_model, log, cfg.pf_sigma, out.stations[s].tvd,
                              out.gammas[s], h, true, &trace, s + 1 < out.stations.size());
        }
        std::vector<double> true_top, true_gamma;
        for (int s : trace.stations) {
            true_top.push_back(env.realization.top(s));
            true_gamma.push_back(env.gamma_history[static_cast<std::size_t>(s)]);
        }
        EpisodeMae m;
        for (int x = 1; x <= kSweepNbestMax; ++x) {
            const int xx = std::min(x, trace.top_k);
            m.gamma[x - 1] = trace.gamma_mae(xx, true_gamma);
            m.boundary[x - 1] = trace.boundary_mae(xx, true_top);
        }
        return m;
    };

    CsvWriter csv(out_path(cfg, "pf_sweep.csv"),
                  {"sweep", "n_par", "n_best", "median_gamma_mae", "mean_gamma_mae",
                   "median_boundary_mae", "mean_boundary_mae"});
    Series npar_median;
    npar_median.label = "median gamma MAE";
    Series nbest_mean;
    nbest_mean.label = "mean gamma MAE";

    for (int n_par : kSweepNpar) {
        std::vector<EpisodeMae> maes(static_cast<std::size_t>(kSweepRealizations));
        std::atomic<bool> failed{false};
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < kSweepRealizations; ++i) {
            if (failed.load()) continue;
            try {
                maes[static_cast<std::size_t>(i)] = run_sweep_episode(n_par, i);
            } catch (...) {
#pragma omp critical
                {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        }
        if (error) std::rethrow_exception(error);

        auto column = [&](int x, bool gamma) {
            std::vector<double> v;
            for (const EpisodeMae& m : maes)
                v.push_back(gamma ? m.gamma[x - 1] : m.boundary[x - 1]);
            return v;
        };
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };

        const std::vector<double> g1 = column(1, true), b1 = column(1, false);
        csv.write_row({"n_par", std::to_string(n_par), "1", format_double(median(g1), 6),
                       format_double(mean(g1), 6), format_double(median(b1), 6),
                       format_double(mean(b1), 6)});
        npar_median.x.push_back(n_par);
        npar_median.y.push_back(median(g1));
        std::printf("pf-sweep n_par %4d: median gamma MAE %.5f, median top MAE %.3f ft\n",
                    n_par, median(g1), median(b1));

        if (n_par == kSweepNparForNbest) {
            for (int x = 1; x <= kSweepNbestMax; ++x) {
                const std::vector<double> gx = column(x, true), bx = column(x, false);
                csv.write_row({"n_best", std::to_string(n_par), std::to_string(x),
                               format_double(median(gx), 6), format_double(mean(gx), 6),
                               format_double(median(bx), 6), format_double(mean(bx), 6)});
                nbest_mean.x.push_back(x);
                nbest_mean.y.push_back(mean(gx));
            }
        }
    }
    csv.close();

    LineChart npar_chart;
    npar_chart.title = "Gamma MAE vs particle count (median of 100 realizations)";
    npar_chart.x_label = "N_par";
    npar_chart.y_label = "gamma MAE";
    npar_chart.series = {npar_median};
    npar_chart.save(out_path(cfg, "pf_sweep_npar.svg"));

    LineChart nbest_chart;
    nbest_chart.title = "Gamma MAE vs N_best at N_par 128 (mean of 100 realizations)";
    nbest_chart.x_label = "N_best";
    nbest_chart.y_label = "gamma MAE";
    nbest_chart.series = {nbest_mean};
    nbest_chart.save(out_path(cfg, "pf_sweep_nbest.svg"));
}

// --- generate / report ---------------------------------------------------------

void cmd_generate(const HarnessConfig& cfg) {
    validate(cfg);
    const OffsetLog log = synth_offset_log(cfg.log_seed);
    {
        CsvWriter csv(out_path(cfg, "offset_log.csv"), {"rel_depth_ft", "gamma"});
        for (std::size_t i = 0; i < log.rel_depth.size(); ++i)
            csv.write_row({format_double(log.rel_depth[i], 1), format_double(log.gamma[i], 6)});
        csv.close();
    }
    const std::vector<Realization> reals =
        make_eval_set(cfg, cfg.eval_realizations, "eval_real");
    for (std::size_t i = 0; i < reals.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "realization_%04zu.csv", i);
        save_realization_csv(reals[i], out_path(cfg, name));
    }
    std::printf("generated offset_log.csv and %zu realizations, set hash %016llx\n",
                reals.size(),
                static_cast<unsigned long long>(realization_set_hash(reals)));
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

// Trailing window mean (the training-curve smoothing convention).
std::vector<double> smooth100(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        if (i >= 100) acc -= v[i - 100];
        out[i] = acc / static_cast<double>(std::min<std::size_t>(i + 1, 100));
    }
    return out;
}

} // namespace

void cmd_report(const HarnessConfig& cfg) {
    if (!fs::exists(cfg.out_dir))
        throw validation_error("artifact directory does not exist: " + cfg.out_dir);

    // Group training-curve files by method.
    std::map<std::string, std::vector<std::string>> curves; // method -> sorted paths
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(cfg.out_dir))
        names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    for (const std::string& name : names) {
        if (name.rfind("train_curve_", 0) != 0 || name.find(".csv") == std::string::npos)
            continue;
        const auto seed_pos = name.rfind("_seed");
        if (seed_pos == std::string::npos) continue;
        curves[name.substr(12, seed_pos - 12)].push_back(name);
    }

    bool wrote_anything = false;
    for (const auto& [method, files] : curves) {
        std::vector<std::vector<double>> smoothed;
        std::size_t min_len = SIZE_MAX;
        for (const std::string& file : files) {
            const auto rows = read_csv((fs::path(cfg.out_dir) / file).string());
            std::vector<double> rewards;
            for (std::size_t r = 1; r < rows.size(); ++r) // skip header
                rewards.push_back(std::stod(rows[r].at(1)));
            smoothed.push_back(smooth100(rewards));
            min_len = std::min(min_len, smoothed.back().size());
        }
        if (min_len == 0 || min_len == SIZE_MAX) continue;

        LineChart chart;
        chart.title = "Training rewards: " + method + " (100-episode trailing mean)";
        chart.x_label = "episode";
        chart.y_label = "reward";
        Series mean_line;
        mean_line.label = "mean of " + std::to_string(smoothed.size()) + " seeds";
        for (std::size_t i = 0; i < min_len; ++i) {
            double lo = smoothed[0][i], hi = lo, sum = 0.0;
            for (const auto& s : smoothed) {
                lo = std::min(lo, s[i]);
                hi = std::max(hi, s[i]);
                sum += s[i];
            }
            chart.band_x.push_back(static_cast<double>(i));
            chart.band_lo.push_back(lo);
            chart.band_hi.push_back(hi);
            mean_line.x.push_back(static_cast<double>(i));
            mean_line.y.push_back(sum / static_cast<double>(smoothed.size()));
        }
        chart.series = {mean_line};
        chart.save(out_path(cfg, "training_curve_" + method + ".svg"));
        wrote_anything = true;
        std::printf("wrote training_curve_%s.svg (%zu seeds)\n", method.c_str(),
                    smoothed.size());
    }

    // Re-render the benchmark bar chart from its CSV when present.
    const std::string bench = out_path(cfg, "benchmark_summary.csv");
    if (fs::exists(bench)) {
        const auto rows = read_csv(bench);
        BarChart bars;
        bars.title = "Reservoir contact by method and fault stratum";
        bars.y_label = "contact (%)";
        bars.groups = {{"faults >= 0", {}}, {"faults >= 1", {}}, {"faults >= 2", {}}};
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const std::string& method = rows[r].at(0);
            const std::string& stratum = rows[r].at(1);
            const double pct = std::stod(rows[r].at(2));
            if (stratum == "ge0") bars.series_labels.push_back(method);
            const int g = stratum == "ge0" ? 0 : stratum == "ge1" ? 1 : 2;
            bars.groups[static_cast<std::size_t>(g)].values.push_back(pct);
        }
        bars.save(out_path(cfg, "contact_bars.svg"));
        wrote_anything = true;
        std::printf("wrote contact_bars.svg\n");
    }

    if (!wrote_anything)
        throw validation_error("no artifacts found in " + cfg.out_dir +
                               " (expected train_curve_*.csv or benchmark_summary.csv)");
}

} // namespace geosteer
