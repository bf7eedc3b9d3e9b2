#pragma once

#include "scenopt/evolution.hpp"
#include "scenopt/scenario_model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace scenopt::cli
{

    inline constexpr std::size_t kHistogramBins = 30;

    struct HistogramBin
    {
        double low = 0.0;
        double high = 0.0;
        double probability = 0.0;
    };

    /// Equal-width bins over [min, max] of the profits; each bin carries the
    /// summed scenario probability. The last bin is closed on the right. When
    /// all profits coincide every bin is [min, min] and the first holds all
    /// the mass.
    std::vector<HistogramBin> histogram(const Distribution &dist, std::size_t bins = kHistogramBins);
    void write_histogram_csv(std::ostream &out, const std::vector<HistogramBin> &bins);

    /// Result document written by `optimize` and read back by `compare`.
    nlohmann::ordered_json result_to_json(const ScenarioSet &scenarios, const OptimizationConfig &cfg,
                                          const EvolutionResult &result);

    /// Weights from a result document, reordered to the scenario set's asset
    /// order. Throws ValidationError when the ticker sets differ.
    Portfolio portfolio_from_result(const nlohmann::json &result, const ScenarioSet &scenarios);

    struct ComparisonColumn
    {
        std::string name;
        DistributionSummary summary;
    };

    /// Mean / Std.Dev. / Prob. rows, one column per portfolio.
    void print_comparison(std::ostream &out, const std::vector<ComparisonColumn> &columns, double delta);

    struct OptimizeArgs
    {
        std::filesystem::path scenarios;
        std::filesystem::path config;
        std::filesystem::path output;
        std::optional<std::filesystem::path> histogram;  ///< defaults to <output stem>.histogram.csv
        std::optional<std::filesystem::path> log;
        std::optional<std::filesystem::path> checkpoint;
        std::optional<std::uint64_t> seed;
        std::optional<bool> constraint;
    };

    struct VerifyArgs
    {
        std::filesystem::path scenarios;
        std::filesystem::path config;
        double tolerance = 1e-3;
        double step = 0.01;
        std::optional<std::filesystem::path> log;
        std::optional<std::uint64_t> seed;
        std::optional<bool> constraint;
    };

    /// Command bodies. Each returns the process exit status and reports
    /// errors on `err` instead of throwing.
    int cmd_ingest(const std::filesystem::path &prices, const std::filesystem::path &output,
                   std::ostream &out, std::ostream &err);
    int cmd_optimize(const OptimizeArgs &args, std::ostream &out, std::ostream &err);
    int cmd_compare(const std::filesystem::path &scenarios, const std::vector<std::filesystem::path> &results,
                    double delta, std::ostream &out, std::ostream &err);
    int cmd_verify(const VerifyArgs &args, std::ostream &out, std::ostream &err);

    /// (ea - grid) / |grid|, or the absolute difference when grid is zero.
    double relative_gap(double ea_fitness, double grid_fitness);

} // namespace scenopt::cli
