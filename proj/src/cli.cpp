#include "scenopt/cli.hpp"

#include "scenopt/data_ingest.hpp"
#include "scenopt/detail/numeric.hpp"
#include "scenopt/errors.hpp"
#include "scenopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace scenopt::cli
{

    namespace
    {
        std::string error_kind(const std::exception &e)
        {
            if (dynamic_cast<const DimensionError *>(&e))
                return "DimensionError";
            if (dynamic_cast<const ValidationError *>(&e))
                return "ValidationError";
            if (dynamic_cast<const InfeasibleBoundsError *>(&e))
                return "InfeasibleBoundsError";
            if (dynamic_cast<const ConfigError *>(&e))
                return "ConfigError";
            if (dynamic_cast<const IoError *>(&e))
                return "IoError";
            if (dynamic_cast<const FormatError *>(&e))
                return "FormatError";
            if (dynamic_cast<const InsufficientDataError *>(&e))
                return "InsufficientDataError";
            if (dynamic_cast<const ComplexityGuardError *>(&e))
                return "ComplexityGuardError";
            return "Error";
        }

        template <typename Body>
        int guarded(std::ostream &err, Body &&body)
        {
            try
            {
                return body();
            }
            catch (const std::exception &e)
            {
                err << error_kind(e) << ": " << e.what() << '\n';
                return 1;
            }
        }

        nlohmann::json read_json(const std::filesystem::path &path)
        {
            std::ifstream in(path);
            if (!in)
                throw IoError("cannot open " + path.string());
            try
            {
                return nlohmann::json::parse(in);
            }
            catch (const nlohmann::json::parse_error &e)
            {
                throw ValidationError(path.string() + " is not valid JSON: " + e.what());
            }
        }

        OptimizationConfig load_config(const std::filesystem::path &path, const std::optional<std::uint64_t> &seed,
                                       const std::optional<bool> &constraint)
        {
            auto cfg = read_config(path);
            if (seed)
                cfg.seed = *seed;
            if (constraint)
                cfg.probabilistic_constraint_enabled = *constraint;
            cfg.validate();
            return cfg;
        }

        nlohmann::ordered_json number_or_null(double v)
        {
            return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
        }

        std::string format_weights(const ScenarioSet &scenarios, const Portfolio &p)
        {
            std::ostringstream os;
            for (std::size_t i = 0; i < p.weights.size(); ++i)
                os << (i ? " " : "") << scenarios.asset_labels()[i] << '=' << std::fixed << std::setprecision(4)
                   << p.weights[i];
            return os.str();
        }
    } // namespace

    std::vector<HistogramBin> histogram(const Distribution &dist, std::size_t bins)
    {
        if (bins == 0)
            throw ConfigError("histogram needs at least one bin");
        if (dist.profits.empty())
            throw DimensionError("histogram of an empty distribution");
        const auto [lo_it, hi_it] = std::minmax_element(dist.profits.begin(), dist.profits.end());
        const double lo = *lo_it;
        const double hi = *hi_it;
        const double width = (hi - lo) / static_cast<double>(bins);

        std::vector<HistogramBin> out(bins);
        for (std::size_t i = 0; i < bins; ++i)
        {
            out[i].low = width > 0.0 ? lo + width * static_cast<double>(i) : lo;
            out[i].high = width > 0.0 ? (i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1)) : lo;
        }
        std::vector<detail::CompensatedSum> mass(bins);
        for (std::size_t k = 0; k < dist.profits.size(); ++k)
        {
            std::size_t idx = 0;
            if (width > 0.0)
                idx = std::min(bins - 1, static_cast<std::size_t>((dist.profits[k] - lo) / width));
            mass[idx].add(dist.probabilities[k]);
        }
        for (std::size_t i = 0; i < bins; ++i)
            out[i].probability = mass[i].value();
        return out;
    }

    void write_histogram_csv(std::ostream &out, const std::vector<HistogramBin> &bins)
    {
        out << "bin_low,bin_high,probability\n";
        for (const auto &bin : bins)
            out << detail::format_double(bin.low) << ',' << detail::format_double(bin.high) << ','
                << detail::format_double(bin.probability) << '\n';
    }

    nlohmann::ordered_json result_to_json(const ScenarioSet &scenarios, const OptimizationConfig &cfg,
                                          const EvolutionResult &result)
    {
        const auto &best = result.best;
        nlohmann::ordered_json j;
        nlohmann::ordered_json weights = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < scenarios.num_assets(); ++i)
            weights[scenarios.asset_labels()[i]] = best.portfolio.weights[i];
        j["weights"] = std::move(weights);
        j["mean"] = best.stats.mean;
        j["std_dev"] = best.stats.std_dev;
        j["shortfall_probability"] = number_or_null(best.stats.shortfall_probability);
        j["delta"] = cfg.delta ? nlohmann::ordered_json(*cfg.delta) : nlohmann::ordered_json(nullptr);
        j["epsilon"] = cfg.epsilon;
        j["mu"] = cfg.mu;
        j["probabilistic_constraint_enabled"] = cfg.probabilistic_constraint_enabled;
        j["raw_variance"] = best.raw_variance;
        j["penalty"] = best.penalty;
        j["fitness"] = best.fitness;
        j["generations"] = result.generations_run;
        j["seed"] = cfg.seed;
        j["genotype"] = to_json(best.genotype);
        return j;
    }

    Portfolio portfolio_from_result(const nlohmann::json &result, const ScenarioSet &scenarios)
    {
        if (!result.is_object() || !result.contains("weights") || !result.at("weights").is_object())
            throw ValidationError("result document has no 'weights' object");
        const auto &weights = result.at("weights");
        std::set<std::string> result_tickers;
        for (const auto &item : weights.items())
            result_tickers.insert(item.key());
        const auto &labels = scenarios.asset_labels();
        if (result_tickers != std::set<std::string>(labels.begin(), labels.end()))
            throw ValidationError("result tickers do not match the scenario set's assets");

        Portfolio p{std::vector<double>(labels.size())};
        for (std::size_t i = 0; i < labels.size(); ++i)
        {
            const auto &w = weights.at(labels[i]);
            if (!w.is_number())
                throw ValidationError("weight for " + labels[i] + " is not a number");
            p.weights[i] = w.get<double>();
        }
        validate_portfolio(p);
        return p;
    }

    void print_comparison(std::ostream &out, const std::vector<ComparisonColumn> &columns, double delta)
    {
        constexpr int label_width = 10;
        std::size_t col_width = 12;
        for (const auto &c : columns)
            col_width = std::max(col_width, c.name.size() + 2);
        const int w = static_cast<int>(col_width);

        out << std::left << std::setw(label_width) << "" << std::right;
        for (const auto &c : columns)
            out << std::setw(w) << c.name;
        out << '\n';

        auto row = [&](const char *label, auto field) {
            out << std::left << std::setw(label_width) << label << std::right << std::fixed << std::setprecision(6);
            for (const auto &c : columns)
                out << std::setw(w) << field(c.summary);
            out << '\n';
        };
        row("Mean", [](const DistributionSummary &s) { return s.mean; });
        row("Std.Dev.", [](const DistributionSummary &s) { return s.std_dev; });
        row("Prob.", [](const DistributionSummary &s) { return s.shortfall_probability; });
        out << "(Prob. = P(profit <= " << detail::format_double(delta) << "))\n";
        out.unsetf(std::ios::floatfield);
    }

    double relative_gap(double ea_fitness, double grid_fitness)
    {
        const double diff = ea_fitness - grid_fitness;
        return grid_fitness != 0.0 ? diff / std::abs(grid_fitness) : diff;
    }

    int cmd_ingest(const std::filesystem::path &prices, const std::filesystem::path &output,
                   std::ostream &out, std::ostream &err)
    {
        return guarded(err, [&] {
            const auto scenarios = weekly_returns(load_prices(prices));
            write_scenarios_csv(output, scenarios);
            out << "wrote " << scenarios.num_scenarios() << " scenarios x " << scenarios.num_assets()
                << " assets to " << output.string() << '\n';
            return 0;
        });
    }

    int cmd_optimize(const OptimizeArgs &args, std::ostream &out, std::ostream &err)
    {
        return guarded(err, [&] {
            const auto scenarios = read_scenarios_csv(args.scenarios);
            const auto cfg = load_config(args.config, args.seed, args.constraint);

            EvolveOptions options;
            options.log_path = args.log;
            options.checkpoint_path = args.checkpoint;
            const auto result = evolve(scenarios, cfg, options);

            {
                std::ofstream file(args.output);
                if (!file)
                    throw IoError("cannot write result file " + args.output.string());
                file << result_to_json(scenarios, cfg, result).dump(2) << '\n';
            }

            auto hist_path = args.histogram;
            if (!hist_path)
            {
                hist_path = args.output;
                hist_path->replace_extension(".histogram.csv");
            }
            {
                std::ofstream file(*hist_path);
                if (!file)
                    throw IoError("cannot write histogram file " + hist_path->string());
                write_histogram_csv(file, histogram(profit_distribution(scenarios, result.best.portfolio)));
            }

            const auto &best = result.best;
            out << "generations " << result.generations_run << ", f' = " << detail::format_double(best.fitness)
                << ", f = " << detail::format_double(best.raw_variance) << ", p = "
                << detail::format_double(best.penalty) << '\n'
                << "mean " << detail::format_double(best.stats.mean) << ", std.dev "
                << detail::format_double(best.stats.std_dev);
            if (cfg.delta)
                out << ", P(profit <= " << detail::format_double(*cfg.delta)
                    << ") = " << detail::format_double(best.stats.shortfall_probability);
            out << '\n'
                << "weights " << format_weights(scenarios, best.portfolio) << '\n';
            return 0;
        });
    }

    int cmd_compare(const std::filesystem::path &scenarios_path, const std::vector<std::filesystem::path> &results,
                    double delta, std::ostream &out, std::ostream &err)
    {
        return guarded(err, [&] {
            if (results.empty())
                throw ConfigError("compare needs at least one result file");
            if (!std::isfinite(delta))
                throw ConfigError("delta must be finite");
            const auto scenarios = read_scenarios_csv(scenarios_path);

            std::vector<ComparisonColumn> columns;
            for (const auto &path : results)
            {
                const auto portfolio = portfolio_from_result(read_json(path), scenarios);
                columns.push_back({path.stem().string(),
                                   distribution_summary(profit_distribution(scenarios, portfolio), delta)});
            }
            columns.push_back({"1/N", distribution_summary(
                                          profit_distribution(scenarios, equal_weight_portfolio(scenarios.num_assets())),
                                          delta)});
            print_comparison(out, columns, delta);
            return 0;
        });
    }

    int cmd_verify(const VerifyArgs &args, std::ostream &out, std::ostream &err)
    {
        return guarded(err, [&] {
            const auto scenarios = read_scenarios_csv(args.scenarios);
            if (scenarios.num_assets() > kGridMaxAssets)
                throw ComplexityGuardError("verify is limited to " + std::to_string(kGridMaxAssets) +
                                           " assets, got " + std::to_string(scenarios.num_assets()));
            if (!(args.tolerance >= 0.0))
                throw ConfigError("tolerance must be non-negative");
            const auto cfg = load_config(args.config, args.seed, args.constraint);

            EvolveOptions options;
            options.log_path = args.log;
            const auto ea = evolve(scenarios, cfg, options);
            const auto grid = grid_search(scenarios, cfg, args.step);
            const double gap = relative_gap(ea.best.fitness, grid.score.fitness);

            out << "evolutionary: f' = " << detail::format_double(ea.best.fitness) << "  "
                << format_weights(scenarios, ea.best.portfolio) << '\n'
                << "grid (step " << detail::format_double(args.step) << ", " << grid.points_evaluated
                << " points): f' = " << detail::format_double(grid.score.fitness) << "  "
                << format_weights(scenarios, grid.best) << '\n'
                << "relative gap " << detail::format_double(gap) << " (tolerance "
                << detail::format_double(args.tolerance) << ")\n";
            const bool ok = gap <= args.tolerance;
            out << (ok ? "PASS" : "FAIL") << '\n';
            return ok ? 0 : 1;
        });
    }

} // namespace scenopt::cli
