#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pumpstudy/eventstore.hpp"
#include "pumpstudy/eventstudy.hpp"
#include "pumpstudy/timeseries.hpp"

namespace pumpstudy {

/// Generative parameters for the seeded synthetic corpus. Effect sizes are
/// planted so the cross-sectional regressions have a known ground truth.
struct SynthConfig {
    int n_events = 100;
    std::uint64_t seed = 42;

    double base_volatility = 0.002;    // per-minute log-return std
    double base_volume_mean = 50.0;    // base-asset quantity per minute
    double tweet_base_rate = 0.5;      // tweets per minute off-event

    /// Planted pre-event effect: percent of cumulative abnormal return over
    /// (-31,-2) per standard deviation of the matching cumulative abnormal
    /// tweets.
    double beta_pre = 0.0;
    double pump_jump = 0.10;           // total log return across the pump window
    double dump_reversal_frac = 0.6;   // fraction of the pump reversed in (2,31)
    /// Planted post-dump effect: percent of CAR(32,720) per standard
    /// deviation of CAT(-31,-2).
    double post_dump_tweet_loading = 0.0;
    int vip_rampup_minutes = 120;
};

/// Population slopes implied by the construction for the three
/// single-regressor specifications (columns 1, 2 and 4).
struct PlantedTruth {
    double beta_pre = 0.0;
    double beta_dump = 0.0;
    double beta_post = 0.0;
};

struct SynthEvent {
    EventRecord record;
    MinuteSeries close;   // covers [announce-2890, announce+1450]
    MinuteSeries volume;  // same grid as close
    MinuteSeries tweets;  // per-minute counts on [announce-2880, announce+720]
};

struct SynthCorpus {
    SynthConfig config;
    std::vector<SynthEvent> events;
    PlantedTruth truth;
};

/// Deterministic pure function of the config: per-event generator streams are
/// derived from (seed, event index), so the corpus is reproducible under any
/// generation order.
SynthCorpus generate_corpus(const SynthConfig& cfg);

/// Emit the corpus in the pipeline's file formats: events.csv, truth.csv,
/// klines/<PAIR>.csv and tweets/<SYMBOL>.jsonl under data_dir. Tweet files
/// carry the event's cashtag and also include decoy tweets that the filters
/// must reject. Byte-identical for a fixed config.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& data_dir);

/// Serialize close/volume back to the klines CSV schema (minutes where either
/// series has a gap are omitted, mirroring missing bars).
void write_klines_csv(const MinuteSeries& close, const MinuteSeries& volume,
                      const std::filesystem::path& path);

/// Naive direct reimplementation of the panel construction, kept free of the
/// production series machinery; equivalence oracle for build_panel.
AbnormalPanel brute_force_panel(const EventRecord& event, const MinuteSeries& close,
                                const MinuteSeries& volume, const MinuteSeries& tweets);

}  // namespace pumpstudy
