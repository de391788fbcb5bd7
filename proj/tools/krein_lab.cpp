// krein-lab: config-driven experiment runner.
//
//   krein-lab run CONFIG.json [--out DIR] [--seed N] [--quiet]
//   krein-lab scenarios

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include <krein/lab/run.hpp>

namespace
{

int list_scenarios()
{
    for (const auto& s : krein::lab::scenarios())
        std::cout << s.name << "\n    " << s.citation << "\n    " << s.summary << "\n";
    return krein::lab::exit_ok;
}

int run(const std::string& path, std::optional<std::string> out_dir,
        std::optional<std::uint64_t> seed, bool quiet)
{
    std::ifstream in(path);
    if (!in)
    {
        std::cerr << "error: cannot read " << path << '\n';
        return krein::lab::exit_usage;
    }
    std::stringstream text;
    text << in.rdbuf();

    krein::lab::ExperimentConfig cfg;
    try
    {
        cfg = krein::lab::ExperimentConfig::parse(text.str());
    }
    catch (const krein::lab::config_error& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return krein::lab::exit_usage;
    }
    if (seed)
        cfg.override_seed(*seed);
    if (!out_dir)
        out_dir = cfg.doc.contains("output_dir") && cfg.doc.at("output_dir").is_string()
                      ? cfg.doc.at("output_dir").get<std::string>()
                      : std::string("out");
    try
    {
        return krein::lab::run_experiment(cfg, *out_dir, quiet, std::cerr);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return krein::lab::exit_failed;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Krein systems numerical lab"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run the experiment described by a JSON config");
    std::string config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    run_cmd->add_option("config", config, "experiment config (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "output directory (default: config output_dir or ./out)");
    run_cmd->add_option("--seed", seed, "override the config seed");
    run_cmd->add_flag("--quiet", quiet, "only report errors");

    app.add_subcommand("scenarios", "list scenarios and the results they check");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : krein::lab::exit_usage;
    }

    if (*run_cmd)
        return run(config, out_dir, seed, quiet);
    return list_scenarios();
}
