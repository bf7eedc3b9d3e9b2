// Command-line front end: ingest, optimize, compare, verify.

#include "scenopt/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Scenario-based minimum-variance portfolio optimization with shortfall constraints"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<std::string> log;
    app.add_option("--seed", seed, "Override the seed from the config file");
    app.add_option("--log", log, "Write one CSV line per generation to this path");

    std::string prices, scenarios_out;
    auto *ingest = app.add_subcommand("ingest", "Convert daily prices to weekly-return scenarios");
    ingest->add_option("prices", prices, "Daily price CSV (date,<tickers...>)")->required()->check(CLI::ExistingFile);
    ingest->add_option("output", scenarios_out, "Scenario CSV to write")->required();

    scenopt::cli::OptimizeArgs opt;
    std::string opt_scenarios, opt_config, opt_output;
    std::optional<std::string> opt_histogram, opt_checkpoint;
    bool opt_constraint = false;
    auto *optimize = app.add_subcommand("optimize", "Run the evolutionary optimizer");
    optimize->add_option("scenarios", opt_scenarios, "Scenario CSV")->required();
    optimize->add_option("config", opt_config, "Config JSON")->required();
    optimize->add_option("output", opt_output, "Result JSON to write")->required();
    optimize->add_option("--histogram", opt_histogram, "Histogram CSV path (default <output>.histogram.csv)");
    optimize->add_option("--checkpoint", opt_checkpoint, "Write the final population as JSON");
    auto *opt_flag = optimize->add_flag("--constraint,!--no-constraint", opt_constraint,
                                        "Override probabilistic_constraint_enabled");

    std::string cmp_scenarios;
    std::vector<std::string> cmp_results;
    double cmp_delta = 0.0;
    auto *compare = app.add_subcommand("compare", "Tabulate mean, std. dev. and shortfall probability");
    compare->add_option("scenarios", cmp_scenarios, "Scenario CSV")->required();
    compare->add_option("results", cmp_results, "Result JSON files from optimize")->required();
    compare->add_option("--delta", cmp_delta, "Shortfall threshold")->required();

    scenopt::cli::VerifyArgs ver;
    std::string ver_scenarios, ver_config;
    bool ver_constraint = false;
    auto *verify = app.add_subcommand("verify", "Compare the optimizer against an exhaustive grid search");
    verify->add_option("scenarios", ver_scenarios, "Scenario CSV (at most 5 assets)")->required();
    verify->add_option("config", ver_config, "Config JSON")->required();
    verify->add_option("--tolerance", ver.tolerance, "Maximum relative fitness gap")->capture_default_str();
    verify->add_option("--step", ver.step, "Grid spacing")->capture_default_str();
    auto *ver_flag = verify->add_flag("--constraint,!--no-constraint", ver_constraint,
                                      "Override probabilistic_constraint_enabled");

    CLI11_PARSE(app, argc, argv);

    std::optional<std::filesystem::path> log_path;
    if (log)
        log_path = *log;

    if (ingest->parsed())
        return scenopt::cli::cmd_ingest(prices, scenarios_out, std::cout, std::cerr);

    if (optimize->parsed())
    {
        opt.scenarios = opt_scenarios;
        opt.config = opt_config;
        opt.output = opt_output;
        if (opt_histogram)
            opt.histogram = *opt_histogram;
        if (opt_checkpoint)
            opt.checkpoint = *opt_checkpoint;
        opt.log = log_path;
        opt.seed = seed;
        if (opt_flag->count() > 0)
            opt.constraint = opt_constraint;
        return scenopt::cli::cmd_optimize(opt, std::cout, std::cerr);
    }

    if (compare->parsed())
    {
        std::vector<std::filesystem::path> paths(cmp_results.begin(), cmp_results.end());
        return scenopt::cli::cmd_compare(cmp_scenarios, paths, cmp_delta, std::cout, std::cerr);
    }

    ver.scenarios = ver_scenarios;
    ver.config = ver_config;
    ver.log = log_path;
    ver.seed = seed;
    if (ver_flag->count() > 0)
        ver.constraint = ver_constraint;
    return scenopt::cli::cmd_verify(ver, std::cout, std::cerr);
}
