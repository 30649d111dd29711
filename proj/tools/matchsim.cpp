// matchsim: command-line front end.
//
//   matchsim simulate  --n 500 --T 100 --strategy modified --runs 10
//   matchsim continuum --n 500 --T 100 --strategy reasonable
//   matchsim sweep     --n 500 --T 100,200,300,400,500
//   matchsim verify
//   matchsim partition-dump --T 16
//
// Exit codes: 0 ok, 1 runtime failure or failed verification, 2 usage error.

#include <iostream>
#include <string>

#include "matchsim/io.hpp"
#include "matchsim/verify.hpp"

namespace fs = std::filesystem;
using namespace matchsim;

namespace {

std::string cell_name(const RunConfig& c, std::int64_t n, Lifetime T) {
    return std::string(to_string(c.strategy)) + "_n" + std::to_string(n) + "_T" + std::to_string(T);
}

int do_simulate(const RunConfig& cfg) {
    const std::int64_t n = cfg.n.front();
    const Lifetime T = cfg.T.front();
    const BatchResult batch = run_batch(cfg, n, T, cfg.write_timeseries);
    const fs::path dir = cfg.out_dir / "simulate" / cell_name(cfg, n, T);
    if (cfg.write_timeseries) {
        for (std::size_t k = 0; k < batch.runs.size(); ++k) {
            write_file(dir / ("run_" + std::to_string(k) + ".csv"),
                       [&](std::ostream& o) { write_timeseries_csv(o, batch.runs[k].series); });
        }
    }
    write_file(dir / "table.csv", [&](std::ostream& o) { write_batch_table_csv(o, batch); });
    write_file(dir / "summary.json", [&](std::ostream& o) { o << dump_json(summary_json(batch, cfg)); });

    const Spread pop = batch.population();
    const auto loss = batch.loss_over_T();
    std::cout << to_string(cfg.strategy) << " n=" << n << " T=" << T << " runs=" << batch.runs.size()
              << "  population " << format_fixed(pop.mean, 1) << " (+/-" << format_fixed(pop.spread_pct, 1)
              << "%)  loss/T " << (loss ? format_fixed(loss->mean, 2) : "n/a") << "\n"
              << "wrote " << dir.string() << "\n";
    return 0;
}

int do_continuum(const RunConfig& cfg) {
    const ContinuumConfig cc{static_cast<double>(cfg.n.front()), cfg.T.front(), cfg.steps, cfg.strategy};
    const ContinuumSummary run = continuum_run(cc);
    const fs::path dir = cfg.out_dir / "continuum" / cell_name(cfg, cc.n, cc.T);
    if (cfg.write_timeseries)
        write_file(dir / "timeseries.csv", [&](std::ostream& o) { write_continuum_timeseries_csv(o, run); });
    write_file(dir / "summary.json", [&](std::ostream& o) { o << dump_json(continuum_json(run)); });
    std::cout << to_string(cfg.strategy) << " continuum n=" << cc.n << " T=" << cc.T << "  population "
              << format_fixed(run.avg_population, 1) << "  loss/T "
              << (run.avg_loss ? format_fixed(*run.avg_loss / cc.T, 3) : "n/a")
              << (run.converged ? "  converged" : "  not converged") << "\n"
              << "wrote " << dir.string() << "\n";
    return 0;
}

int do_sweep(const RunConfig& cfg) {
    const SweepResult sweep = run_sweep(cfg);
    const fs::path dir = cfg.out_dir / "sweep" / std::string(to_string(cfg.strategy));
    write_file(dir / "table.csv", [&](std::ostream& o) { write_sweep_table_csv(o, sweep); });
    write_file(dir / "summary.json", [&](std::ostream& o) { o << dump_json(sweep_json(sweep, cfg)); });
    write_sweep_table_csv(std::cout, sweep);
    std::cout << "wrote " << dir.string() << "\n";
    return 0;
}

int do_verify(const RunConfig& cfg) {
    VerifyOptions opts;
    opts.seed = cfg.seed;
    int failed = 0;
    for (const auto& c : run_verification(opts)) {
        std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  [" << c.detail << "]\n";
        if (!c.passed) ++failed;
    }
    std::cout << (failed ? std::to_string(failed) + " check(s) failed\n" : "all checks passed\n");
    return failed ? 1 : 0;
}

int do_partition_dump(const RunConfig& cfg) {
    const StripPartition part = build_partition(cfg.T.front());
    write_partition_csv(std::cout, part);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const CliRequest req = parse_config(argc, argv);
        switch (req.command) {
            case Command::Simulate: return do_simulate(req.config);
            case Command::Continuum: return do_continuum(req.config);
            case Command::Sweep: return do_sweep(req.config);
            case Command::Verify: return do_verify(req.config);
            case Command::PartitionDump: return do_partition_dump(req.config);
        }
    } catch (const UsageError& e) {
        (e.exit_code() == 0 ? std::cout : std::cerr) << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "matchsim: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
