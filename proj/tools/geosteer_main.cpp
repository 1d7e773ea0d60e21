#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geosteer/config.hpp"
#include "geosteer/errors.hpp"
#include "geosteer/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"geosteer: faulted-reservoir geosteering with a particle filter and DQN policies"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string preset = "full";
    std::vector<std::string> configs;
    std::vector<std::string> sets;
    std::string out;
    std::uint64_t seed = 0;
    int threads = -1;
    app.add_option("--preset", preset, "parameter preset")
        ->check(CLI::IsMember({"desk", "full"}))
        ->capture_default_str();
    app.add_option("--config", configs, "key=value config file; repeatable, later files win");
    app.add_option("--set", sets, "inline override, e.g. --set agent.episodes=100; repeatable");
    auto* seed_opt =
        app.add_option("--seed", seed, "run a single seed (replaces the preset's seed list)");
    app.add_option("--out", out, "output directory (default: out)");
    app.add_option("--threads", threads, "worker thread cap (0 = library default)");

    std::string method;
    int episodes = 0;
    int realizations = 0;
    auto* c_generate =
        app.add_subcommand("generate", "write the offset log and the evaluation realizations");
    auto* c_train = app.add_subcommand("train", "train a DQN policy, one run per seed");
    auto* c_evaluate =
        app.add_subcommand("evaluate", "evaluate one method on the shared realization set");
    auto* c_sweep =
        app.add_subcommand("pf-sweep", "particle-count and N_best sweep of the filter");
    auto* c_benchmark =
        app.add_subcommand("benchmark", "evaluate all seven methods, fault-stratified");
    auto* c_report = app.add_subcommand("report", "render charts from existing run artifacts");
    for (CLI::App* sub : {c_train, c_evaluate, c_benchmark})
        sub->add_option("--method", method,
                        "rule_based_1|rule_based_5|rl_log|rl_est_1|rl_est_5|oracle_true|"
                        "oracle_lookahead");
    c_train->add_option("--episodes", episodes, "training episodes per seed");
    for (CLI::App* sub : {c_evaluate, c_benchmark, c_generate})
        sub->add_option("--realizations", realizations, "evaluation set size");

    CLI11_PARSE(app, argc, argv);

    try {
        geosteer::HarnessConfig cfg = geosteer::preset_config(preset);
        for (const std::string& path : configs) geosteer::apply_config_file(cfg, path);
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw geosteer::config_error("--set expects key=value, got: " + kv);
            geosteer::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (*seed_opt) cfg.seeds = {seed};
        if (!out.empty()) cfg.out_dir = out;
        if (threads >= 0) cfg.threads = threads;
        if (!method.empty()) cfg.method = method;
        if (episodes > 0) cfg.agent.episodes = episodes;
        if (realizations > 0) cfg.eval_realizations = realizations;
        cfg.preset = preset;

        if (app.got_subcommand(c_generate)) geosteer::cmd_generate(cfg);
        else if (app.got_subcommand(c_train)) geosteer::cmd_train(cfg);
        else if (app.got_subcommand(c_evaluate)) geosteer::cmd_evaluate(cfg);
        else if (app.got_subcommand(c_sweep)) geosteer::cmd_pf_sweep(cfg);
        else if (app.got_subcommand(c_benchmark)) geosteer::cmd_benchmark(cfg);
        else if (app.got_subcommand(c_report)) geosteer::cmd_report(cfg);
        return 0;
    } catch (const geosteer::io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const geosteer::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const geosteer::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
