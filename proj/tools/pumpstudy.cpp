#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pumpstudy/cli.hpp"
#include "pumpstudy/errors.hpp"

using namespace pumpstudy;

int main(int argc, char** argv) {
    CLI::App app{"Event-study pipeline for cryptocurrency pump-and-dump analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global options after the subcommand name

    std::string config_path;
    std::string out_dir, klines_dir, tweets_dir, events_file;
    int threshold_rank = -1;
    std::string policy;
    bool robust_se = false;
    int workers = 0;
    std::int64_t seed = -1;
    int n_events = 0;
    bool all_events = false;

    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--klines-dir", klines_dir, "directory of <PAIR>.csv kline files");
    app.add_option("--tweets-dir", tweets_dir, "directory of <SYMBOL>.jsonl tweet dumps");
    app.add_option("--events", events_file, "events CSV file");
    app.add_option("--threshold-rank", threshold_rank, "success rank threshold (default 3)");
    app.add_option("--standardize-policy", policy, "car-raw (default) or dep-raw");
    app.add_flag("--robust-se", robust_se, "heteroskedasticity-robust standard errors");
    app.add_option("--workers", workers, "parallel workers for per-event stages");
    app.add_option("--seed", seed, "corpus generator seed");
    app.add_option("--n-events", n_events, "number of synthetic events");
    app.add_flag("--all-events", all_events, "study every event, not only successful ones");

    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic corpus");
    auto* classify = app.add_subcommand("classify", "qualify events by five-minute volume rank");
    auto* study = app.add_subcommand("study", "build abnormality panels and average curves");
    auto* regress = app.add_subcommand("regress", "run the five cross-sectional regressions");
    auto* report = app.add_subcommand("report", "emit dataset tables and plot data");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        // Flags override the config file.
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!klines_dir.empty()) cfg.klines_dir = klines_dir;
        if (!tweets_dir.empty()) cfg.tweets_dir = tweets_dir;
        if (!events_file.empty()) cfg.events_file = events_file;
        if (threshold_rank >= 0) cfg.threshold_rank = threshold_rank;
        if (!policy.empty()) apply_config_entry(cfg, "standardize_policy", policy);
        if (robust_se) cfg.robust_se = true;
        if (workers > 0) cfg.workers = workers;
        if (seed >= 0) cfg.synth.seed = static_cast<std::uint64_t>(seed);
        if (n_events > 0) cfg.synth.n_events = n_events;
        if (all_events) cfg.all_events = true;
        cfg.resolve_defaults();

        if (synth->parsed()) return cmd_synth(cfg);
        if (classify->parsed()) return cmd_classify(cfg);
        if (study->parsed()) return cmd_study(cfg);
        if (regress->parsed()) return cmd_regress(cfg);
        if (report->parsed()) return cmd_report(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
