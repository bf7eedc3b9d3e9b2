#include "scenopt/scenario_model.hpp"

#include "scenopt/detail/numeric.hpp"
#include "scenopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace scenopt
{

    namespace
    {
        constexpr double kSumTolerance = 1e-9;

        std::vector<std::string> default_labels(std::size_t count)
        {
            std::vector<std::string> labels;
            labels.reserve(count);
            for (std::size_t i = 0; i < count; ++i)
                labels.push_back("A" + std::to_string(i));
            return labels;
        }

        void check_shape(const Distribution &dist)
        {
            if (dist.profits.size() != dist.probabilities.size())
                throw DimensionError("distribution has " + std::to_string(dist.profits.size()) +
                                     " profits but " + std::to_string(dist.probabilities.size()) +
                                     " probabilities");
        }

        std::vector<double> flatten(const std::vector<std::vector<double>> &rows, std::size_t &num_assets)
        {
            if (rows.empty())
                throw DimensionError("scenario set needs at least one scenario");
            num_assets = rows.front().size();
            std::vector<double> flat;
            flat.reserve(rows.size() * num_assets);
            for (std::size_t k = 0; k < rows.size(); ++k)
            {
                if (rows[k].size() != num_assets)
                    throw DimensionError("scenario row " + std::to_string(k) + " has " +
                                         std::to_string(rows[k].size()) + " returns, expected " +
                                         std::to_string(num_assets));
                flat.insert(flat.end(), rows[k].begin(), rows[k].end());
            }
            return flat;
        }
    } // namespace

    ScenarioSet::ScenarioSet(std::vector<double> returns,
                             std::size_t num_scenarios,
                             std::size_t num_assets,
                             std::vector<double> probabilities,
                             std::vector<std::string> asset_labels)
        : returns_(std::move(returns)),
          num_scenarios_(num_scenarios),
          num_assets_(num_assets),
          probabilities_(std::move(probabilities)),
          labels_(std::move(asset_labels))
    {
        if (num_scenarios_ == 0 || num_assets_ == 0)
            throw DimensionError("scenario set needs at least one scenario and one asset");
        if (returns_.size() != num_scenarios_ * num_assets_)
            throw DimensionError("returns matrix has " + std::to_string(returns_.size()) +
                                 " entries, expected " + std::to_string(num_scenarios_) + "x" +
                                 std::to_string(num_assets_));
        if (probabilities_.size() != num_scenarios_)
            throw DimensionError("probability vector has length " + std::to_string(probabilities_.size()) +
                                 ", expected " + std::to_string(num_scenarios_));
        if (labels_.empty())
            labels_ = default_labels(num_assets_);
        if (labels_.size() != num_assets_)
            throw DimensionError("got " + std::to_string(labels_.size()) + " asset labels for " +
                                 std::to_string(num_assets_) + " assets");
        if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
            throw ValidationError("asset labels must be unique");

        for (std::size_t i = 0; i < returns_.size(); ++i)
        {
            if (!std::isfinite(returns_[i]))
                throw ValidationError("non-finite return at scenario " + std::to_string(i / num_assets_) +
                                      ", asset " + std::to_string(i % num_assets_));
        }

        detail::CompensatedSum total;
        for (std::size_t k = 0; k < num_scenarios_; ++k)
        {
            const double p = probabilities_[k];
            if (!std::isfinite(p) || p < 0.0 || p > 1.0)
                throw ValidationError("probability of scenario " + std::to_string(k) + " is outside [0, 1]");
            total.add(p);
        }
        if (std::abs(total.value() - 1.0) > kSumTolerance)
            throw ValidationError("scenario probabilities sum to " + detail::format_double(total.value()) +
                                  ", expected 1");
    }

    ScenarioSet ScenarioSet::equiprobable(const std::vector<std::vector<double>> &rows,
                                          std::vector<std::string> asset_labels)
    {
        std::size_t num_assets = 0;
        auto flat = flatten(rows, num_assets);
        std::vector<double> probs(rows.size(), 1.0 / static_cast<double>(rows.size()));
        return ScenarioSet(std::move(flat), rows.size(), num_assets, std::move(probs), std::move(asset_labels));
    }

    ScenarioSet ScenarioSet::from_rows(const std::vector<std::vector<double>> &rows,
                                       std::vector<double> probabilities,
                                       std::vector<std::string> asset_labels)
    {
        std::size_t num_assets = 0;
        auto flat = flatten(rows, num_assets);
        return ScenarioSet(std::move(flat), rows.size(), num_assets, std::move(probabilities), std::move(asset_labels));
    }

    std::span<const double> ScenarioSet::row(std::size_t scenario) const
    {
        if (scenario >= num_scenarios_)
            throw DimensionError("scenario index out of range");
        return std::span<const double>(returns_).subspan(scenario * num_assets_, num_assets_);
    }

    double ScenarioSet::at(std::size_t scenario, std::size_t asset) const
    {
        if (scenario >= num_scenarios_ || asset >= num_assets_)
            throw DimensionError("scenario/asset index out of range");
        return returns_[scenario * num_assets_ + asset];
    }

    void validate_portfolio(const Portfolio &portfolio, const Bounds &bounds)
    {
        if (portfolio.weights.empty())
            throw ValidationError("portfolio has no weights");
        detail::CompensatedSum total;
        for (std::size_t i = 0; i < portfolio.weights.size(); ++i)
        {
            const double w = portfolio.weights[i];
            if (!std::isfinite(w))
                throw ValidationError("weight " + std::to_string(i) + " is not finite");
            if (w != 0.0 && (w < bounds.lower - kSumTolerance || w > bounds.upper + kSumTolerance))
                throw ValidationError("weight " + std::to_string(i) + " = " + detail::format_double(w) +
                                      " is outside [" + detail::format_double(bounds.lower) + ", " +
                                      detail::format_double(bounds.upper) + "]");
            total.add(w);
        }
        if (std::abs(total.value() - 1.0) > kSumTolerance)
            throw ValidationError("portfolio weights sum to " + detail::format_double(total.value()) +
                                  ", expected 1");
    }

    Distribution profit_distribution(const ScenarioSet &scenarios, const Portfolio &portfolio)
    {
        if (portfolio.weights.size() != scenarios.num_assets())
            throw DimensionError("portfolio has " + std::to_string(portfolio.weights.size()) +
                                 " weights but the scenario set has " +
                                 std::to_string(scenarios.num_assets()) + " assets");
        validate_portfolio(portfolio);

        Distribution dist;
        dist.profits.resize(scenarios.num_scenarios());
        dist.probabilities = scenarios.probabilities();
        const auto &w = portfolio.weights;
        for (std::size_t k = 0; k < scenarios.num_scenarios(); ++k)
        {
            const auto r = scenarios.row(k);
            double profit = 0.0;
            for (std::size_t a = 0; a < r.size(); ++a)
                profit += r[a] * w[a];
            dist.profits[k] = profit;
        }
        return dist;
    }

    double expected_profit(const Distribution &dist)
    {
        check_shape(dist);
        detail::CompensatedSum sum;
        for (std::size_t k = 0; k < dist.profits.size(); ++k)
            sum.add(dist.probabilities[k] * dist.profits[k]);
        return sum.value();
    }

    double loss_variance(const Distribution &dist)
    {
        check_shape(dist);
        detail::CompensatedSum mean_loss;
        for (std::size_t k = 0; k < dist.profits.size(); ++k)
            mean_loss.add(dist.probabilities[k] * -dist.profits[k]);
        const double m = mean_loss.value();

        detail::CompensatedSum second;
        for (std::size_t k = 0; k < dist.profits.size(); ++k)
        {
            const double d = -dist.profits[k] - m;
            second.add(dist.probabilities[k] * d * d);
        }
        return std::max(0.0, second.value());
    }

    double shortfall_probability(const Distribution &dist, double delta)
    {
        check_shape(dist);
        detail::CompensatedSum mass;
        std::size_t hits = 0;
        for (std::size_t k = 0; k < dist.profits.size(); ++k)
        {
            if (dist.profits[k] <= delta)
            {
                mass.add(dist.probabilities[k]);
                ++hits;
            }
        }
        if (hits == 0)
            return 0.0;
        if (hits == dist.profits.size())
            return 1.0;
        return std::clamp(mass.value(), 0.0, 1.0);
    }

    DistributionSummary distribution_summary(const Distribution &dist, double delta)
    {
        return {expected_profit(dist), std::sqrt(loss_variance(dist)), shortfall_probability(dist, delta)};
    }

    ScenarioSet parse_scenarios_csv(std::istream &in)
    {
        std::string line;
        std::size_t line_no = 0;
        std::vector<std::string> header;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            header = detail::split_csv_line(line);
            break;
        }
        if (header.empty())
            throw FormatError("scenario file is empty");

        const bool has_prob = header.front() == "prob";
        std::vector<std::string> labels(header.begin() + (has_prob ? 1 : 0), header.end());
        if (labels.empty())
            throw FormatError("line " + std::to_string(line_no) + ": header names no assets");
        for (const auto &label : labels)
            if (label.empty())
                throw FormatError("line " + std::to_string(line_no) + ": empty asset label");

        std::vector<double> returns;
        std::vector<double> probs;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            const auto fields = detail::split_csv_line(line);
            if (fields.size() != header.size())
                throw FormatError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
            for (std::size_t i = 0; i < fields.size(); ++i)
            {
                double value = 0.0;
                if (!detail::parse_double(fields[i], value) || !std::isfinite(value))
                    throw FormatError("line " + std::to_string(line_no) + ", column '" + header[i] +
                                      "': invalid number '" + fields[i] + "'");
                if (has_prob && i == 0)
                    probs.push_back(value);
                else
                    returns.push_back(value);
            }
        }
        const std::size_t s = returns.size() / labels.size();
        if (s == 0)
            throw FormatError("scenario file has a header but no scenarios");
        if (!has_prob)
            probs.assign(s, 1.0 / static_cast<double>(s));
        const std::size_t a = labels.size();
        return ScenarioSet(std::move(returns), s, a, std::move(probs), std::move(labels));
    }

    ScenarioSet read_scenarios_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open scenario file " + path.string());
        return parse_scenarios_csv(in);
    }

    void write_scenarios_csv(std::ostream &out, const ScenarioSet &scenarios)
    {
        out << "prob";
        for (const auto &label : scenarios.asset_labels())
            out << ',' << label;
        out << '\n';
        for (std::size_t k = 0; k < scenarios.num_scenarios(); ++k)
        {
            out << detail::format_double(scenarios.probabilities()[k]);
            for (double r : scenarios.row(k))
                out << ',' << detail::format_double(r);
            out << '\n';
        }
    }

    void write_scenarios_csv(const std::filesystem::path &path, const ScenarioSet &scenarios)
    {
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot write scenario file " + path.string());
        write_scenarios_csv(out, scenarios);
        if (!out)
            throw IoError("failed writing scenario file " + path.string());
    }

} // namespace scenopt
