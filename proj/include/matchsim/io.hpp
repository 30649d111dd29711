#pragma once

// Command-line configuration, batch/sweep orchestration and the CSV/JSON
// writers.
//
// Output formats are stable: CSV uses '.' decimals, fixed places and LF line
// endings; absent values (e.g. an average loss before anyone has left) are
// empty cells, never 0.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "matchsim/continuum.hpp"
#include "matchsim/metrics.hpp"
#include "matchsim/simulation.hpp"

namespace matchsim {

enum class Command { Simulate, Continuum, Sweep, Verify, PartitionDump };
enum class ModelKind { Discrete, Continuum };

std::string_view to_string(Command c) noexcept;

struct RunConfig {
    std::vector<std::int64_t> n{500};
    std::vector<Lifetime> T{100};
    std::int64_t steps = 2000;
    StrategyKind strategy = StrategyKind::ModifiedReasonable;
    std::uint64_t seed = 1;
    std::int64_t runs = 10;
    ModelKind model = ModelKind::Discrete;
    std::filesystem::path out_dir = "out";
    bool write_timeseries = true;
    unsigned threads = 0;  // 0: hardware concurrency

    /// Run k of a batch uses seed + k.
    std::uint64_t seed_of(std::int64_t run) const noexcept { return seed + static_cast<std::uint64_t>(run); }
    SimulationConfig simulation(std::int64_t n_value, Lifetime T_value, std::int64_t run) const;
};

/// Bad flags or values. `exit_code` is what the CLI should return; help
/// requests carry exit code 0 and the help text as the message.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& message, int exit_code) : std::runtime_error(message), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

struct CliRequest {
    Command command = Command::Simulate;
    RunConfig config;
};

/// Parses `matchsim <subcommand> [flags]`. Flags override values from an
/// optional `--config FILE` (TOML/INI keys named like the long flags). Unknown
/// flags and keys are rejected. Throws UsageError.
CliRequest parse_config(int argc, const char* const* argv);

// ---------------------------------------------------------------- formatting

/// Locale-independent fixed-point formatting.
std::string format_fixed(double value, int decimals);

inline constexpr int kCsvDecimals = 6;

void write_timeseries_csv(std::ostream& out, const std::vector<TimeseriesRow>& series);
void write_continuum_timeseries_csv(std::ostream& out, const ContinuumSummary& run);
void write_partition_csv(std::ostream& out, const StripPartition& part);

/// Writes via `body`, creating parent directories. I/O failures are reported
/// as std::runtime_error naming the path.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

// ------------------------------------------------------------- batch results

struct Spread {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double midrange = 0.0;    // (min + max) / 2
    double spread_pct = 0.0;  // half-range as a percentage of the mean
};

/// Order-independent: the result depends only on the multiset of values.
Spread spread_of(const std::vector<double>& values);

struct BatchResult {
    std::int64_t n = 0;
    Lifetime T = 0;
    StrategyKind strategy = StrategyKind::ModifiedReasonable;
    std::int64_t steps = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<RunResult> runs;  // series may be dropped to save memory

    Spread population() const;
    std::optional<Spread> loss_over_T() const;
    std::optional<Spread> loss_over_T_matched() const;
    std::int64_t match_bound_violations() const;
};

/// Runs config.runs independent seeds for one (n, T) in parallel. Results are
/// ordered by run index regardless of scheduling.
BatchResult run_batch(const RunConfig& config, std::int64_t n, Lifetime T, bool keep_series = true);

struct SweepResult {
    std::vector<BatchResult> cells;  // n-major, then T
};
SweepResult run_sweep(const RunConfig& config);

nlohmann::json summary_json(const BatchResult& batch, const RunConfig& config);
nlohmann::json sweep_json(const SweepResult& sweep, const RunConfig& config);
nlohmann::json continuum_json(const ContinuumSummary& run);

/// One row per run plus mean and spread rows.
void write_batch_table_csv(std::ostream& out, const BatchResult& batch);
/// One row per (n, T) with normalized columns.
void write_sweep_table_csv(std::ostream& out, const SweepResult& sweep);

/// Emits JSON with 17 significant digits for doubles.
std::string dump_json(const nlohmann::json& doc);

}  // namespace matchsim
