#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pumpstudy/regression.hpp"
#include "pumpstudy/synth.hpp"
#include "pumpstudy/timeseries.hpp"

namespace pumpstudy {

/// Resolved settings for one pipeline run. Flags override config-file keys;
/// unset paths default to locations under the output directory.
struct RunConfig {
    std::filesystem::path klines_dir;
    std::filesystem::path tweets_dir;
    std::filesystem::path events_file;
    std::filesystem::path out_dir = "out";

    int threshold_rank = 3;
    RelativeWindow tweet_window{-2880, 720};
    StandardizePolicy policy = StandardizePolicy::CarRaw;
    bool robust_se = false;
    int workers = 1;
    bool all_events = false;

    SynthConfig synth;

    /// Fill unset data paths from the output directory's data/ subtree.
    void resolve_defaults();
};

/// Parse a flat key=value config file ('#' comments, blank lines ignored).
RunConfig load_config(const std::filesystem::path& path);

/// Apply one key=value setting; throws ParseError on unknown keys or bad
/// values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Subcommand drivers; each returns a process exit code (0 ok, 2 data error).
int cmd_synth(const RunConfig& cfg);
int cmd_classify(const RunConfig& cfg);
int cmd_study(const RunConfig& cfg);
int cmd_regress(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

}  // namespace pumpstudy
