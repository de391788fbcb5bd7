///
/// \file run.hpp
///
/// Runs one scenario and writes its artifacts:
///   <scenario>_results.csv, <scenario>_summary.json, <scenario>_<aux>.csv
///
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include <krein/errors.hpp>
#include <krein/lab/config.hpp>
#include <krein/lab/scenarios.hpp>

namespace krein::lab
{

enum ExitCode : int
{
    exit_ok      = 0,
    exit_failed  = 1,
    exit_usage   = 2,
};

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

///
/// Returns the process exit status: 0 when every asserted row passes, 1 on
/// an assertion failure or numerical breakdown, 2 on a bad config.
///
inline int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                          bool quiet, std::ostream& log)
{
    const ScenarioInfo* sc = find_scenario(cfg.scenario);
    if (!sc)
    {
        log << "error: unknown scenario '" << cfg.scenario << "' (see `krein-lab scenarios`)\n";
        return exit_usage;
    }

    const auto start = std::chrono::steady_clock::now();
    RunOutput out(cfg.scenario);
    try
    {
        out = sc->run(cfg);
    }
    catch (const config_error& e)
    {
        log << "config error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const invalid_input& e)
    {
        log << "config error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const json::exception& e)
    {
        log << "config error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const krein::error& e)
    {
        log << "numerical error: " << e.what() << '\n';
        return exit_failed;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::filesystem::create_directories(out_dir);
    const std::string stem = cfg.scenario + "_";
    {
        std::ostringstream os;
        out.table.write_csv(os);
        write_text(out_dir / (stem + "results.csv"), os.str());
    }
    for (const auto& [name, text] : out.files)
        write_text(out_dir / (stem + name), text);

    json summary{{"scenario", cfg.scenario},
                 {"config", cfg.doc},
                 {"seed", cfg.seed},
                 {"rows", out.table.rows().size()},
                 {"passed", out.table.passed()},
                 {"failed", out.table.failed()},
                 {"exploratory", out.table.exploratory()},
                 {"details", out.details},
                 {"wall_time_s", wall}};
    write_text(out_dir / (stem + "summary.json"), summary.dump(2) + "\n");

    if (!quiet)
    {
        for (const auto& r : out.table.rows())
        {
            const auto p = r.pass();
            if (p && !*p)
                log << "FAIL " << r.quantity << " [" << r.parameters << "] measured " << fmt(r.measured)
                    << " reference " << fmt(r.reference) << " error " << fmt(r.rel_error)
                    << " > " << fmt(*r.tolerance) << '\n';
        }
        log << cfg.scenario << ": " << out.table.passed() << " passed, " << out.table.failed()
            << " failed, " << out.table.exploratory() << " exploratory (" << wall << " s) -> "
            << out_dir.string() << '\n';
    }
    return out.table.failed() == 0 ? exit_ok : exit_failed;
}

} // namespace krein::lab
