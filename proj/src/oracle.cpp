#include "scenopt/oracle.hpp"

#include "scenopt/detail/numeric.hpp"
#include "scenopt/errors.hpp"

#include <cmath>

namespace scenopt
{

    Portfolio equal_weight_portfolio(std::size_t num_assets)
    {
        if (num_assets == 0)
            throw ConfigError("equal-weight portfolio needs at least one asset");
        return Portfolio{std::vector<double>(num_assets, 1.0 / static_cast<double>(num_assets))};
    }

    namespace
    {
        bool within_bounds(const Portfolio &p, const Bounds &bounds)
        {
            for (double w : p.weights)
                if (w != 0.0 && (w < bounds.lower - 1e-12 || w > bounds.upper + 1e-12))
                    return false;
            return true;
        }
    } // namespace

    GridSearchResult grid_search(const ScenarioSet &scenarios, const OptimizationConfig &cfg, double step,
                                 const std::function<void(const Portfolio &, const Score &)> &visit)
    {
        const std::size_t a = scenarios.num_assets();
        if (a > kGridMaxAssets)
            throw ComplexityGuardError("grid search is limited to " + std::to_string(kGridMaxAssets) +
                                       " assets, got " + std::to_string(a));
        if (!(step >= kGridMinStep - 1e-12))
            throw ComplexityGuardError("grid step must be at least " + detail::format_double(kGridMinStep));
        if (step > 1.0)
            throw ConfigError("grid step must not exceed 1");
        const double inverse = 1.0 / step;
        const auto divisions = static_cast<std::size_t>(std::llround(inverse));
        if (std::abs(inverse - static_cast<double>(divisions)) > 1e-9 * inverse)
            throw ConfigError("grid step " + detail::format_double(step) + " does not divide 1 evenly");

        GridSearchResult result;
        bool have_best = false;
        std::vector<std::size_t> units(a, 0);
        Portfolio candidate{std::vector<double>(a, 0.0)};

        // Depth-first over compositions of `divisions` into `a` parts; earlier
        // coordinates vary slowest, so visit order is lexicographic.
        auto recurse = [&](auto &&self, std::size_t index, std::size_t remaining) -> void {
            if (index + 1 == a)
            {
                units[index] = remaining;
                for (std::size_t i = 0; i < a; ++i)
                    candidate.weights[i] = static_cast<double>(units[i]) / static_cast<double>(divisions);
                if (!within_bounds(candidate, cfg.bounds))
                    return;
                const auto score = score_portfolio(scenarios, candidate, cfg);
                ++result.points_evaluated;
                if (visit)
                    visit(candidate, score);
                if (!have_best || score.fitness < result.score.fitness)
                {
                    result.best = candidate;
                    result.score = score;
                    have_best = true;
                }
                return;
            }
            for (std::size_t u = 0; u <= remaining; ++u)
            {
                units[index] = u;
                self(self, index + 1, remaining - u);
            }
        };
        recurse(recurse, 0, divisions);

        if (!have_best)
            throw InfeasibleBoundsError("no lattice point satisfies the weight bounds");
        return result;
    }

    double covariance_variance_check(const ScenarioSet &scenarios, const Portfolio &portfolio)
    {
        const std::size_t a = scenarios.num_assets();
        const std::size_t s = scenarios.num_scenarios();
        if (portfolio.weights.size() != a)
            throw DimensionError("portfolio length does not match the scenario set");
        const auto &p = scenarios.probabilities();

        std::vector<double> means(a);
        for (std::size_t j = 0; j < a; ++j)
        {
            detail::CompensatedSum m;
            for (std::size_t k = 0; k < s; ++k)
                m.add(p[k] * scenarios.at(k, j));
            means[j] = m.value();
        }

        std::vector<double> cov(a * a);
        for (std::size_t i = 0; i < a; ++i)
        {
            for (std::size_t j = i; j < a; ++j)
            {
                detail::CompensatedSum c;
                for (std::size_t k = 0; k < s; ++k)
                    c.add(p[k] * (scenarios.at(k, i) - means[i]) * (scenarios.at(k, j) - means[j]));
                cov[i * a + j] = cov[j * a + i] = c.value();
            }
        }

        detail::CompensatedSum quad;
        for (std::size_t i = 0; i < a; ++i)
            for (std::size_t j = 0; j < a; ++j)
                quad.add(portfolio.weights[i] * cov[i * a + j] * portfolio.weights[j]);
        return quad.value();
    }

} // namespace scenopt
