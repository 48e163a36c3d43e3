#include "pumpstudy/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "pumpstudy/classifier.hpp"
#include "pumpstudy/csv.hpp"
#include "pumpstudy/errors.hpp"
#include "pumpstudy/ingestion.hpp"
#include "pumpstudy/report.hpp"

namespace pumpstudy {

namespace fs = std::filesystem;

void RunConfig::resolve_defaults() {
    if (klines_dir.empty()) klines_dir = out_dir / "data" / "klines";
    if (tweets_dir.empty()) tweets_dir = out_dir / "data" / "tweets";
    if (events_file.empty()) events_file = out_dir / "data" / "events.csv";
}

namespace {

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError("expected a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// Run fn(i) for i in [0, n) over the requested worker count. Work items are
// independent; results land in caller-owned slots, so output order never
// depends on scheduling.
template <typename Fn>
void parallel_for(int workers, std::size_t n, Fn&& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min<std::size_t>(workers, n);
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

namespace {

// Paths are checked up front so a stage fails before any computation starts.
int check_inputs(const RunConfig& cfg, bool klines, bool tweets) {
    std::vector<std::string> missing;
    if (!fs::exists(cfg.events_file)) missing.push_back("events file " + cfg.events_file.string());
    if (klines && !fs::is_directory(cfg.klines_dir)) {
        missing.push_back("klines directory " + cfg.klines_dir.string());
    }
    if (tweets && !fs::is_directory(cfg.tweets_dir)) {
        missing.push_back("tweets directory " + cfg.tweets_dir.string());
    }
    for (const auto& m : missing) std::cerr << "error: missing " << m << "\n";
    return missing.empty() ? 0 : 2;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "klines_dir") cfg.klines_dir = value;
    else if (key == "tweets_dir") cfg.tweets_dir = value;
    else if (key == "events_file") cfg.events_file = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "threshold_rank") cfg.threshold_rank = static_cast<int>(parse_int_field(value, 0));
    else if (key == "tweet_window_tau1") cfg.tweet_window.tau1 = static_cast<int>(parse_int_field(value, 0));
    else if (key == "tweet_window_tau2") cfg.tweet_window.tau2 = static_cast<int>(parse_int_field(value, 0));
    else if (key == "standardize_policy") {
        if (value == "car-raw") cfg.policy = StandardizePolicy::CarRaw;
        else if (value == "dep-raw") cfg.policy = StandardizePolicy::DepRaw;
        else throw ParseError("standardize_policy must be car-raw or dep-raw, got '" + value + "'");
    } else if (key == "robust_se") cfg.robust_se = parse_bool(value);
    else if (key == "workers") cfg.workers = static_cast<int>(parse_int_field(value, 0));
    else if (key == "all_events") cfg.all_events = parse_bool(value);
    else if (key == "seed") cfg.synth.seed = static_cast<std::uint64_t>(parse_int_field(value, 0));
    else if (key == "synth.n_events") cfg.synth.n_events = static_cast<int>(parse_int_field(value, 0));
    else if (key == "synth.base_volatility") cfg.synth.base_volatility = parse_double_field(value, 0);
    else if (key == "synth.base_volume_mean") cfg.synth.base_volume_mean = parse_double_field(value, 0);
    else if (key == "synth.tweet_base_rate") cfg.synth.tweet_base_rate = parse_double_field(value, 0);
    else if (key == "synth.beta_pre") cfg.synth.beta_pre = parse_double_field(value, 0);
    else if (key == "synth.pump_jump") cfg.synth.pump_jump = parse_double_field(value, 0);
    else if (key == "synth.dump_reversal_frac") cfg.synth.dump_reversal_frac = parse_double_field(value, 0);
    else if (key == "synth.post_dump_tweet_loading") cfg.synth.post_dump_tweet_loading = parse_double_field(value, 0);
    else if (key == "synth.vip_rampup_minutes") cfg.synth.vip_rampup_minutes = static_cast<int>(parse_int_field(value, 0));
    else throw ParseError("unknown config key '" + key + "'");
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    RunConfig cfg;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        try {
            apply_config_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " in " + path.string(), line_no);
        }
    }
    return cfg;
}

int cmd_synth(const RunConfig& cfg) {
    const SynthCorpus corpus = generate_corpus(cfg.synth);
    const fs::path data_dir = cfg.events_file.parent_path();
    fs::create_directories(data_dir);
    write_corpus(corpus, data_dir);
    std::cout << "generated " << corpus.events.size() << " events under " << data_dir.string()
              << "\n";
    return 0;
}

namespace {

struct ClassifyOutcome {
    SuccessReport report;
    bool ok = false;
    std::string error;
};

}  // namespace

int cmd_classify(const RunConfig& cfg) {
    if (int rc = check_inputs(cfg, true, false)) return rc;
    std::vector<EventRecord> events;
    try {
        events = load_events(cfg.events_file);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<ClassifyOutcome> outcomes(events.size());
    parallel_for(cfg.workers, events.size(), [&](std::size_t i) {
        const EventRecord& ev = events[i];
        try {
            const KlineData k = load_klines(cfg.klines_dir / (ev.pair + ".csv"), ev.pair);
            outcomes[i].report =
                qualify_event(k.volume, ev.announce_minute, cfg.threshold_rank, ev.event_id);
            outcomes[i].ok = true;
        } catch (const Error& e) {
            outcomes[i].error = e.what();
        }
    });

    fs::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir / "success_report.csv", std::ios::binary);
    out << "event_id,rank,event_chunk_volume,total_chunks,success\n";
    int successes = 0, failures = 0;
    std::vector<EventRecord> classified = events;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].ok) {
            ++failures;
            std::cerr << "event " << events[i].event_id << ": " << outcomes[i].error << "\n";
            continue;
        }
        const SuccessReport& r = outcomes[i].report;
        out << csv_escape(r.event_id) << ',' << r.rank << ',' << format_double(r.event_chunk_volume)
            << ',' << r.total_chunks << ',' << (r.success ? "true" : "false") << '\n';
        classified[i].success = r.success;
        if (r.success) ++successes;
    }
    save_events(classified, cfg.out_dir / "events_classified.csv");
    std::cout << successes << " of " << events.size() << " successful\n";
    return failures > 0 ? 2 : 0;
}

namespace {

struct StudyOutcome {
    std::optional<AbnormalPanel> panel;
    double total_tweets = 0.0;
    std::string error;
};

std::vector<EventRecord> events_for_analysis(const RunConfig& cfg) {
    const fs::path classified = cfg.out_dir / "events_classified.csv";
    std::vector<EventRecord> events;
    if (fs::exists(classified)) {
        events = load_events(classified);
    } else {
        events = load_events(cfg.events_file);
        if (!cfg.all_events) {
            throw DataError("no classification found at " + classified.string() +
                            "; run classify first or pass --all-events");
        }
    }
    if (!cfg.all_events) {
        std::erase_if(events, [](const EventRecord& e) { return !(e.success && *e.success); });
    }
    return events;
}

}  // namespace

int cmd_study(const RunConfig& cfg) {
    if (int rc = check_inputs(cfg, true, true)) return rc;
    std::vector<EventRecord> events;
    try {
        events = events_for_analysis(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (events.empty()) {
        std::cerr << "error: no events to study\n";
        return 2;
    }

    std::vector<StudyOutcome> outcomes(events.size());
    parallel_for(cfg.workers, events.size(), [&](std::size_t i) {
        const EventRecord& ev = events[i];
        try {
            const KlineData k = load_klines(cfg.klines_dir / (ev.pair + ".csv"), ev.pair);
            const auto tweets = load_tweets(cfg.tweets_dir / (ev.symbol + ".jsonl"));
            const MinuteSeries counts =
                tweet_minute_counts(tweets, ev.symbol, ev.announce_minute, cfg.tweet_window);
            double total = 0.0;
            for (const auto& v : counts.values()) {
                if (v) total += *v;
            }
            outcomes[i].total_tweets = total;
            outcomes[i].panel = build_panel(ev, k.close, k.volume, counts);
        } catch (const Error& e) {
            outcomes[i].error = e.what();
        }
    });

    fs::create_directories(cfg.out_dir / "panels");
    std::vector<AbnormalPanel> panels;
    std::ofstream index(cfg.out_dir / "panels" / "index.csv", std::ios::binary);
    index << "event_id,file,at_defined\n";
    std::ofstream totals(cfg.out_dir / "tweet_totals.csv", std::ios::binary);
    totals << "event_id,total_tweets\n";
    int failed = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].panel) {
            ++failed;
            std::cerr << "event " << events[i].event_id << " skipped: " << outcomes[i].error
                      << "\n";
            continue;
        }
        const AbnormalPanel& p = *outcomes[i].panel;
        const std::string file = p.event_id + ".csv";
        write_panel_csv(p, cfg.out_dir / "panels" / file);
        index << csv_escape(p.event_id) << ',' << csv_escape(file) << ','
              << (p.at_defined ? "true" : "false") << '\n';
        totals << csv_escape(p.event_id) << ',' << format_double(outcomes[i].total_tweets) << '\n';
        panels.push_back(p);
    }
    if (panels.empty()) {
        std::cerr << "error: every event failed\n";
        return 2;
    }
    write_curves_csv(average_curves(panels), cfg.out_dir / "fig9_curves.csv");
    std::cout << panels.size() << " panels written, " << failed << " events skipped\n";
    return 0;
}

namespace {

AbnormalPanel load_panel_csv(const fs::path& path, const std::string& event_id, bool at_defined) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open panel: " + path.string());
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty panel file: " + path.string());
    ++line_no;
    std::vector<MinuteSeries::Value> ar, av, at;
    std::int64_t tau0 = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 4) throw ParseError("expected 4 fields", line_no);
        const std::int64_t tau = parse_int_field(f[0], line_no);
        if (first) {
            tau0 = tau;
            first = false;
        }
        ar.push_back(f[1].empty() ? MinuteSeries::Value{} : parse_double_field(f[1], line_no));
        av.push_back(f[2].empty() ? MinuteSeries::Value{} : parse_double_field(f[2], line_no));
        at.push_back(f[3].empty() ? MinuteSeries::Value{} : parse_double_field(f[3], line_no));
    }
    AbnormalPanel p{event_id, MinuteSeries(tau0, std::move(ar), "abnormal return"),
                    MinuteSeries(tau0, std::move(av), "abnormal volume"),
                    MinuteSeries(tau0, std::move(at), "abnormal tweets"), TrainingStats{},
                    at_defined};
    return p;
}

}  // namespace

int cmd_regress(const RunConfig& cfg) {
    const fs::path index_path = cfg.out_dir / "panels" / "index.csv";
    std::ifstream index(index_path);
    if (!index) {
        std::cerr << "error: no panels at " << index_path.string() << "; run study first\n";
        return 2;
    }
    std::string line;
    std::getline(index, line);
    std::vector<AbnormalPanel> panels;
    long line_no = 1;
    try {
        while (std::getline(index, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() != 3) throw ParseError("expected 3 fields in panel index", line_no);
            panels.push_back(
                load_panel_csv(cfg.out_dir / "panels" / f[1], f[0], f[2] == "true"));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    Table3 table;
    try {
        table = run_table3(panels, cfg.policy, cfg.robust_se);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const std::string rendered = render_regression_table(table);
    {
        std::ofstream out(cfg.out_dir / "table3.txt", std::ios::binary);
        out << rendered;
    }
    write_table3_csv(table, cfg.out_dir / "table3.csv");
    std::cout << rendered;
    for (const auto& col : table.columns) {
        if (col.result && col.result->dropped_events > 0) {
            std::cout << "dropped " << col.result->dropped_events
                      << " events without a defined tweet deviation\n";
            break;
        }
    }
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    if (int rc = check_inputs(cfg, false, false)) return rc;
    std::vector<EventRecord> events;
    try {
        events = events_for_analysis(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (events.empty()) {
        std::cerr << "error: no events to report on\n";
        return 2;
    }
    fs::create_directories(cfg.out_dir);
    write_table1_csv(per_crypto_counts(events, 20), cfg.out_dir / "table1.csv");
    write_weekly_csv(weekly_counts(events), cfg.out_dir / "fig7_weekly.csv");
    const auto hist = events_per_crypto_histogram(events);
    write_histogram_csv(hist, cfg.out_dir / "fig8_hist.csv");

    // Tweet-count summary over the events studied, from the study stage's
    // per-event totals.
    const fs::path totals_path = cfg.out_dir / "tweet_totals.csv";
    std::ifstream totals(totals_path);
    if (totals) {
        std::string line;
        std::getline(totals, line);
        std::vector<double> values;
        long line_no = 1;
        while (std::getline(totals, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() == 2) values.push_back(parse_double_field(f[1], line_no));
        }
        if (!values.empty()) write_table2_csv(summary_stats(values), cfg.out_dir / "table2.csv");
    } else {
        std::cerr << "warning: no tweet totals at " << totals_path.string()
                  << "; table2.csv skipped (run study first)\n";
    }
    std::cout << "events per crypto: mean " << format_double(round_half_up(hist.mean, 2))
              << ", median " << format_double(hist.median) << "\n";
    return 0;
}

}  // namespace pumpstudy
