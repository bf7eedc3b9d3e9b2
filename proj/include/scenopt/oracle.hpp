#pragma once

#include "scenopt/evolution.hpp"
#include "scenopt/scenario_model.hpp"

#include <cstddef>
#include <functional>

namespace scenopt
{

    /// Naive 1/N allocation.
    Portfolio equal_weight_portfolio(std::size_t num_assets);

    inline constexpr std::size_t kGridMaxAssets = 5;
    inline constexpr double kGridMinStep = 0.01;

    struct GridSearchResult
    {
        Portfolio best;
        Score score;
        std::size_t points_evaluated = 0;
    };

    /**
     * @brief Exhaustive search over the simplex lattice with spacing `step`.
     *
     * Every weight vector with entries in {0, step, 2*step, ..., 1} summing to
     * one is scored with score_portfolio(). Points are visited in ascending
     * lexicographic order and only a strictly better fitness replaces the
     * incumbent, so ties resolve to the lexicographically smallest vector.
     *
     * Lattice points whose non-zero weights fall outside cfg.bounds are
     * skipped. Throws ComplexityGuardError for more than kGridMaxAssets assets
     * or a step finer than kGridMinStep, and ConfigError when 1/step is not an
     * integer.
     *
     * `visit`, when given, sees every evaluated point.
     */
    GridSearchResult grid_search(const ScenarioSet &scenarios, const OptimizationConfig &cfg, double step,
                                 const std::function<void(const Portfolio &, const Score &)> &visit = {});

    /// x' Sigma x with Sigma the probability-weighted covariance of asset returns.
    double covariance_variance_check(const ScenarioSet &scenarios, const Portfolio &portfolio);

} // namespace scenopt
