#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace scenopt
{

    /// Per-asset weight limits shared by every asset position.
    struct Bounds
    {
        double lower = 0.0;
        double upper = 1.0;

        friend bool operator==(const Bounds &, const Bounds &) = default;
    };

    /**
     * @brief Finite set of joint asset-return outcomes with probabilities.
     *
     * Returns are stored row-major: one row per scenario, one column per
     * asset. The constructor validates shape, finiteness and the
     * probability simplex, so a constructed ScenarioSet is always valid.
     */
    class ScenarioSet
    {
    public:
        ScenarioSet(std::vector<double> returns,
                    std::size_t num_scenarios,
                    std::size_t num_assets,
                    std::vector<double> probabilities,
                    std::vector<std::string> asset_labels);

        /// Equiprobable scenarios built from a list of rows.
        static ScenarioSet equiprobable(const std::vector<std::vector<double>> &rows,
                                        std::vector<std::string> asset_labels = {});

        static ScenarioSet from_rows(const std::vector<std::vector<double>> &rows,
                                     std::vector<double> probabilities,
                                     std::vector<std::string> asset_labels = {});

        std::size_t num_scenarios() const noexcept { return num_scenarios_; }
        std::size_t num_assets() const noexcept { return num_assets_; }

        std::span<const double> row(std::size_t scenario) const;
        double at(std::size_t scenario, std::size_t asset) const;
        std::span<const double> returns() const noexcept { return returns_; }
        const std::vector<double> &probabilities() const noexcept { return probabilities_; }
        const std::vector<std::string> &asset_labels() const noexcept { return labels_; }

    private:
        std::vector<double> returns_;
        std::size_t num_scenarios_;
        std::size_t num_assets_;
        std::vector<double> probabilities_;
        std::vector<std::string> labels_;
    };

    struct Portfolio
    {
        std::vector<double> weights;
    };

    /// Throws ValidationError unless weights are finite, sum to 1 within
    /// 1e-9 and every non-zero weight lies in [lower, upper]. A zero weight
    /// marks an unselected asset and is always accepted.
    void validate_portfolio(const Portfolio &portfolio, const Bounds &bounds = {});

    /// Probability-weighted profit outcomes of one portfolio.
    struct Distribution
    {
        std::vector<double> profits;
        std::vector<double> probabilities;
    };

    /// The three statistics reported per portfolio in comparison tables.
    struct DistributionSummary
    {
        double mean = 0.0;
        double std_dev = 0.0;
        double shortfall_probability = 0.0;
    };

    Distribution profit_distribution(const ScenarioSet &scenarios, const Portfolio &portfolio);

    double expected_profit(const Distribution &dist);

    /// Probability-weighted population variance of the loss -profit.
    double loss_variance(const Distribution &dist);

    /// Total probability of scenarios whose profit is <= delta.
    double shortfall_probability(const Distribution &dist, double delta);

    DistributionSummary distribution_summary(const Distribution &dist, double delta);

    /// Scenario CSV: header `prob,<asset_1>,...`; without a `prob` column the
    /// scenarios are equiprobable.
    ScenarioSet parse_scenarios_csv(std::istream &in);
    ScenarioSet read_scenarios_csv(const std::filesystem::path &path);
    void write_scenarios_csv(std::ostream &out, const ScenarioSet &scenarios);
    void write_scenarios_csv(const std::filesystem::path &path, const ScenarioSet &scenarios);

} // namespace scenopt
