#include "matchsim/io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"

namespace matchsim {

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::Continuum: return "continuum";
        case Command::Sweep: return "sweep";
        case Command::Verify: return "verify";
        case Command::PartitionDump: return "partition-dump";
    }
    return "?";
}

SimulationConfig RunConfig::simulation(std::int64_t n_value, Lifetime T_value, std::int64_t run) const {
    return {n_value, T_value, steps, strategy, seed_of(run)};
}

// ------------------------------------------------------------------- parsing

CliRequest parse_config(int argc, const char* const* argv) {
    CliRequest req;
    RunConfig& cfg = req.config;

    CLI::App app{"Two-sided dynamic matching market simulator", "matchsim"};
    app.require_subcommand(1, 1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "TOML/INI file of default flag values; flags win");

    std::string strategy = "modified";
    std::string out_dir = cfg.out_dir.string();
    bool no_timeseries = false;

    app.add_option("--n", cfg.n, "Entrants per step (comma list for sweep)")
        ->delimiter(',')
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--T", cfg.T, "Agent lifetime, >= 4 (comma list for sweep)")
        ->delimiter(',')
        ->check(CLI::Range(4, 1 << 16))
        ->capture_default_str();
    app.add_option("--steps", cfg.steps, "Steps per run")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--strategy", strategy, "accept-all | reasonable | modified")
        ->check(CLI::IsMember({"accept-all", "reasonable", "modified"}))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Base seed; run k uses seed + k")->capture_default_str();
    app.add_option("--runs", cfg.runs, "Independent runs per configuration")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->envname("MATCHSIM_OUT_DIR")->capture_default_str();
    app.add_flag("--no-timeseries", no_timeseries, "Skip per-run time-series CSVs");
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();

    struct Sub {
        const char* name;
        const char* help;
        Command command;
    };
    const Sub subs[] = {
        {"simulate", "Discrete runs for one (n, T)", Command::Simulate},
        {"continuum", "Deterministic mean-field run for one (n, T)", Command::Continuum},
        {"sweep", "Discrete runs over an (n, T) grid", Command::Sweep},
        {"verify", "Run the exact-enumeration oracle sweeps", Command::Verify},
        {"partition-dump", "Write the strip partition for T as CSV", Command::PartitionDump},
    };
    std::vector<CLI::App*> handles;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();
        handles.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), 0);
    } catch (const CLI::CallForAllHelp&) {
        throw UsageError(app.help("", CLI::AppFormatMode::All), 0);
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\nRun with --help for usage.", 2);
    }

    for (std::size_t i = 0; i < handles.size(); ++i)
        if (handles[i]->parsed()) req.command = subs[i].command;

    cfg.strategy = *parse_strategy(strategy);
    cfg.out_dir = out_dir;
    cfg.write_timeseries = !no_timeseries;
    cfg.model = req.command == Command::Continuum ? ModelKind::Continuum : ModelKind::Discrete;

    const bool single = req.command == Command::Simulate || req.command == Command::Continuum ||
                        req.command == Command::PartitionDump;
    if (single && (cfg.n.size() != 1 || cfg.T.size() != 1))
        throw UsageError(std::string(to_string(req.command)) + " takes a single --n and --T", 2);
    if (cfg.n.empty() || cfg.T.empty()) throw UsageError("--n and --T need at least one value", 2);
    return req;
}

// ---------------------------------------------------------------- formatting

std::string format_fixed(double value, int decimals) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) return "nan";
    std::string s(buf, ptr);
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);  // no "-0.000"
    return s;
}

namespace {

std::string opt_fixed(const std::optional<double>& v, int decimals = kCsvDecimals) {
    return v ? format_fixed(*v, decimals) : std::string();
}

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void write_timeseries_csv(std::ostream& out, const std::vector<TimeseriesRow>& series) {
    out << "step,population,men,women,entrants,matches,aged_out,cum_loss,avg_loss_all,avg_loss_matched,diag_population\n";
    for (const auto& r : series) {
        out << r.step << ',' << r.population << ',' << r.men << ',' << r.women << ',' << r.entrants << ',' << r.matches
            << ',' << r.aged_out << ',' << r.cum_loss << ',' << opt_fixed(ratio(r.cum_loss, r.cum_departures)) << ','
            << opt_fixed(ratio(r.cum_loss_matched, r.cum_departures_matched)) << ',' << r.diag_population << '\n';
    }
}

void write_continuum_timeseries_csv(std::ostream& out, const ContinuumSummary& run) {
    out << "step,population,entrants,matches,aged_out,cum_loss,avg_loss_all,diag_population\n";
    double cum_loss = 0.0, cum_departed = 0.0;
    for (std::size_t i = 0; i < run.series.size(); ++i) {
        const auto& f = run.series[i];
        cum_loss += f.loss_added;
        cum_departed += f.matched_mass + f.aged_out_mass;
                out << i << ',' << format_fixed(f.population_after_entry, kCsvDecimals) << ','
            << format_fixed(f.entered_mass, kCsvDecimals) << ',' << format_fixed(f.matched_mass, kCsvDecimals) << ','
            << format_fixed(f.aged_out_mass, kCsvDecimals) << ',' << format_fixed(cum_loss, kCsvDecimals) << ','
            << (cum_departed > 0.0 ? format_fixed(cum_loss / cum_departed, kCsvDecimals) : "") << ',' << format_fixed(f.diag_population, kCsvDecimals) << '\n';
    }
}

void write_partition_csv(std::ostream& out, const StripPartition& part) {
    out << "kind,index,diag_lo,diag_hi,height\n";
    for (std::int32_t f = 0; f < part.strip_count(); ++f) {
        const StripId id = part.from_flat(f);
        const auto [lo, hi] = part.diag_range(id);
        out << (id.kind == StripKind::Type1 ? "type1" : "type2") << ',' << id.index << ',' << lo << ',' << hi << ','
            << part.height(id) << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ------------------------------------------------------------- batch results

Spread spread_of(const std::vector<double>& values) {
    Spread s;
    if (values.empty()) return s;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(sorted.size());
    s.min = sorted.front();
    s.max = sorted.back();
    s.midrange = 0.5 * (s.min + s.max);
    s.spread_pct = s.mean != 0.0 ? 100.0 * 0.5 * (s.max - s.min) / s.mean : 0.0;
    return s;
}

Spread BatchResult::population() const {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(r.summary.avg_population);
    return spread_of(v);
}

std::optional<Spread> BatchResult::loss_over_T() const {
    std::vector<double> v;
    for (const auto& r : runs) {
        if (!r.summary.loss_over_T) return std::nullopt;
        v.push_back(*r.summary.loss_over_T);
    }
    return spread_of(v);
}

std::optional<Spread> BatchResult::loss_over_T_matched() const {
    std::vector<double> v;
    for (const auto& r : runs) {
        if (!r.summary.loss_over_T_matched) return std::nullopt;
        v.push_back(*r.summary.loss_over_T_matched);
    }
    return spread_of(v);
}

std::int64_t BatchResult::match_bound_violations() const {
    std::int64_t total = 0;
    for (const auto& r : runs) total += r.summary.match_bound_violations;
    return total;
}

namespace {

// Runs job(i) for i in [0, count) on a small pool; rethrows the first failure.
void parallel_for(std::int64_t count, unsigned threads, const std::function<void(std::int64_t)>& job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));
    std::atomic<std::int64_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::int64_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        errors[static_cast<std::size_t>(i)] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

BatchResult run_batch(const RunConfig& config, std::int64_t n, Lifetime T, bool keep_series) {
    BatchResult batch;
    batch.n = n;
    batch.T = T;
    batch.strategy = config.strategy;
    batch.steps = config.steps;
    batch.runs.resize(static_cast<std::size_t>(config.runs));
    for (std::int64_t k = 0; k < config.runs; ++k) batch.seeds.push_back(config.seed_of(k));

    parallel_for(config.runs, config.threads, [&](std::int64_t k) {
        RunResult r = run(config.simulation(n, T, k));
        if (!keep_series) {
            r.series.clear();
            r.series.shrink_to_fit();
        }
        batch.runs[static_cast<std::size_t>(k)] = std::move(r);
    });
    return batch;
}

SweepResult run_sweep(const RunConfig& config) {
    SweepResult sweep;
    for (std::int64_t n : config.n)
        for (Lifetime T : config.T) sweep.cells.push_back(run_batch(config, n, T, false));
    return sweep;
}

namespace {

using nlohmann::json;

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json spread_json(const Spread& s) {
    return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"midrange", s.midrange}, {"spread_pct", s.spread_pct}};
}

json opt_spread_json(const std::optional<Spread>& s) { return s ? spread_json(*s) : json(nullptr); }

json config_json(const RunConfig& c) {
    return {{"n", c.n},
            {"T", c.T},
            {"steps", c.steps},
            {"strategy", std::string(to_string(c.strategy))},
            {"seed", c.seed},
            {"runs", c.runs},
            {"model", c.model == ModelKind::Discrete ? "discrete" : "continuum"}};
}

json constraints_json(std::int64_t n, Lifetime T) {
    const ConstraintCheck c = constraints_satisfied(static_cast<double>(n), T, 1.0);
    return {{"c", 1.0},         {"c_ok", c.c_ok}, {"T_rhs", c.T_rhs},         {"T_ok", c.T_ok},
            {"n_rhs", c.n_rhs}, {"n_ok", c.n_ok}, {"satisfied", c.satisfied()}};
}

json run_json(const RunResult& r, std::int64_t index) {
    const RunSummary& s = r.summary;
    json bounds = json::object();
    for (std::size_t i = 0; i < kBoundClauseCount; ++i) {
        const auto& t = s.clauses[i];
        bounds[std::string(to_string(static_cast<BoundClause>(i)))] = {{"observed_steps", t.observed_steps},
                                                                       {"violations", t.violations},
                                                                       {"satisfied_fraction", t.satisfied_fraction()},
                                                                       {"worst_margin", t.worst_margin}};
    }
    return {{"run", index},
            {"seed", r.config.seed},
            {"avg_population", s.avg_population},
            {"avg_loss_all", opt_json(s.avg_loss_all)},
            {"avg_loss_matched", opt_json(s.avg_loss_matched)},
            {"loss_over_T", opt_json(s.loss_over_T)},
            {"loss_over_T_matched", opt_json(s.loss_over_T_matched)},
            {"normalized_population", s.normalized_population},
            {"normalized_loss", opt_json(s.normalized_loss)},
            {"departures_matched", s.departures_matched},
            {"departures_aged_out", s.departures_aged_out},
            {"match_loss_bound",
             {{"matches_checked", s.matches_checked},
              {"violations", s.match_bound_violations},
              {"age_scaled_violations", s.match_bound_violations_age_scaled},
              {"worst_margin", s.worst_match_bound_margin}}},
            {"bounds", bounds}};
}

json batch_cell_json(const BatchResult& b) {
    const double root = std::sqrt(static_cast<double>(b.T));
    const Spread pop = b.population();
    const auto loss = b.loss_over_T();
    json runs = json::array();
    for (std::size_t k = 0; k < b.runs.size(); ++k) runs.push_back(run_json(b.runs[k], static_cast<std::int64_t>(k)));
    return {{"n", b.n},
            {"T", b.T},
            {"strategy", std::string(to_string(b.strategy))},
            {"steps", b.steps},
            {"seeds", b.seeds},
            {"runs", runs},
            {"population", spread_json(pop)},
            {"loss_over_T", opt_spread_json(loss)},
            {"loss_over_T_matched", opt_spread_json(b.loss_over_T_matched())},
            {"normalized_population", b.n > 0 ? json(pop.mean / (static_cast<double>(b.n) * root)) : json(nullptr)},
            {"normalized_loss", loss ? json(loss->mean / root) : json(nullptr)},
            {"match_bound_violations", b.match_bound_violations()},
            {"constraints", constraints_json(b.n, b.T)}};
}

}  // namespace

json summary_json(const BatchResult& batch, const RunConfig& config) {
    json doc = batch_cell_json(batch);
    doc["config"] = config_json(config);
    return doc;
}

json sweep_json(const SweepResult& sweep, const RunConfig& config) {
    json cells = json::array();
    for (const auto& b : sweep.cells) cells.push_back(batch_cell_json(b));
    return {{"config", config_json(config)}, {"cells", cells}};
}

json continuum_json(const ContinuumSummary& run) {
    const auto& c = run.config;
    auto per_T = [&](const std::optional<double>& v) { return v ? json(*v / c.T) : json(nullptr); };
    return {{"config",
             {{"n", c.n}, {"T", c.T}, {"steps", c.steps}, {"strategy", std::string(to_string(c.strategy))},
              {"model", "continuum"}}},
            {"avg_population", run.avg_population},
            {"avg_loss", opt_json(run.avg_loss)},
            {"loss_over_T", per_T(run.avg_loss)},
            {"avg_population_after_burn_in", run.avg_population_after_burn_in},
            {"loss_over_T_after_burn_in", per_T(run.avg_loss_after_burn_in)},
            {"final_population", run.final_population},
            {"final_loss_over_T", per_T(run.final_loss)},
            {"converged", run.converged},
            {"convergence_step", run.convergence_step ? json(*run.convergence_step) : json(nullptr)},
            {"imbalance", 0.0}};
}

void write_batch_table_csv(std::ostream& out, const BatchResult& batch) {
    out << "run,seed,avg_population,loss_over_T,loss_over_T_matched,departures_matched,departures_aged_out,"
           "match_bound_violations\n";
    for (std::size_t k = 0; k < batch.runs.size(); ++k) {
        const RunSummary& s = batch.runs[k].summary;
        out << k << ',' << batch.runs[k].config.seed << ',' << format_fixed(s.avg_population, 1) << ','
            << opt_fixed(s.loss_over_T, 2) << ',' << opt_fixed(s.loss_over_T_matched, 2) << ',' << s.departures_matched
            << ',' << s.departures_aged_out << ',' << s.match_bound_violations << '\n';
    }
    const Spread pop = batch.population();
    const auto loss = batch.loss_over_T();
    const auto loss_m = batch.loss_over_T_matched();
    auto row = [&](const char* label, auto pick) {
        out << label << ",," << format_fixed(pick(pop), 2) << ',' << (loss ? format_fixed(pick(*loss), 2) : "") << ','
            << (loss_m ? format_fixed(pick(*loss_m), 2) : "") << ",,,\n";
    };
    row("mean", [](const Spread& s) { return s.mean; });
    row("midrange", [](const Spread& s) { return s.midrange; });
    row("spread_pct", [](const Spread& s) { return s.spread_pct; });
}

void write_sweep_table_csv(std::ostream& out, const SweepResult& sweep) {
    out << "n,T,runs,avg_population,population_spread_pct,loss_over_T,loss_spread_pct,loss_over_T_matched,"
           "normalized_population,normalized_loss\n";
    for (const auto& b : sweep.cells) {
        const double root = std::sqrt(static_cast<double>(b.T));
        const Spread pop = b.population();
        const auto loss = b.loss_over_T();
        const auto loss_m = b.loss_over_T_matched();
        out << b.n << ',' << b.T << ',' << b.runs.size() << ',' << format_fixed(pop.mean, 2) << ','
            << format_fixed(pop.spread_pct, 2) << ',' << (loss ? format_fixed(loss->mean, 4) : "") << ','
            << (loss ? format_fixed(loss->spread_pct, 2) : "") << ',' << (loss_m ? format_fixed(loss_m->mean, 4) : "")
            << ',' << (b.n > 0 ? format_fixed(pop.mean / (static_cast<double>(b.n) * root), 6) : "") << ','
            << (loss ? format_fixed(loss->mean / root, 6) : "") << '\n';
    }
}

namespace {

void dump_value(std::string& out, const nlohmann::json& v, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    if (v.is_object()) {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            dump_value(out, it.value(), depth + 1);
        }
        out += "\n" + close + "}";
    } else if (v.is_array()) {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump_value(out, v[i], depth + 1);
        }
        out += "\n" + close + "]";
    } else if (v.is_number_float()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            out += "null";
            return;
        }
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::general, 17);
        std::string s(buf, ptr);
        if (s.find_first_of(".e") == std::string::npos) s += ".0";
        out += s;
    } else {
        out += v.dump();
    }
}

}  // namespace

std::string dump_json(const nlohmann::json& doc) {
    std::string out;
    dump_value(out, doc, 0);
    out += "\n";
    return out;
}

}  // namespace matchsim
