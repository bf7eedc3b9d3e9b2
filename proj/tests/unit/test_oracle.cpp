#include <doctest.h>

#include "scenopt/errors.hpp"
#include "scenopt/oracle.hpp"
#include "test_support.hpp"

#include <set>

using namespace scenopt;

TEST_CASE("equal_weight_portfolio")
{
    CHECK(equal_weight_portfolio(1).weights == std::vector<double>{1.0});
    CHECK(equal_weight_portfolio(4).weights == std::vector<double>(4, 0.25));
    const auto p = equal_weight_portfolio(30);
    CHECK(p.weights.size() == 30);
    CHECK(p.weights.front() == 1.0 / 30.0);
    CHECK_THROWS_AS(equal_weight_portfolio(0), ConfigError);
}

TEST_CASE("grid_search")
{
    OptimizationConfig cfg;
    cfg.mu = -1.0;

    SUBCASE("one asset")
    {
        const auto r = grid_search(ScenarioSet::equiprobable({{0.1}, {-0.2}}), cfg, 0.1);
        CHECK(r.best.weights == std::vector<double>{1.0});
        CHECK(r.points_evaluated == 1);
    }
    SUBCASE("step 0.5 visits exactly three points in lexicographic order")
    {
        std::vector<std::vector<double>> seen;
        grid_search(ScenarioSet::equiprobable({{0.1, 0.0}, {-0.1, 0.02}}), cfg, 0.5,
                    [&](const Portfolio &p, const Score &) { seen.push_back(p.weights); });
        CHECK(seen == std::vector<std::vector<double>>{{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}});
    }
    SUBCASE("matches the closed-form two-asset minimum variance weight")
    {
        // asset 0 low variance, asset 1 high variance, mildly correlated
        const auto s = ScenarioSet::equiprobable(
            {{0.01, 0.05}, {-0.01, -0.04}, {0.005, 0.03}, {-0.004, -0.02}, {0.002, 0.01}, {-0.003, -0.03}});
        std::vector<double> c0, c1;
        for (std::size_t k = 0; k < s.num_scenarios(); ++k)
        {
            c0.push_back(s.at(k, 0));
            c1.push_back(s.at(k, 1));
        }
        const auto &p = s.probabilities();
        const long double v0 = testing::ref_variance(c0, p);
        const long double v1 = testing::ref_variance(c1, p);
        const long double m0 = testing::ref_mean(c0, p), m1 = testing::ref_mean(c1, p);
        long double cov = 0.0L;
        for (std::size_t k = 0; k < c0.size(); ++k)
            cov += p[k] * (c0[k] - m0) * (c1[k] - m1);
        const double w_star = static_cast<double>(std::clamp((v1 - cov) / (v0 + v1 - 2 * cov), 0.0L, 1.0L));

        const auto r = grid_search(s, cfg, 0.01);
        CHECK(std::abs(r.best.weights[0] - w_star) <= 0.01 + 1e-12);
        CHECK(r.best.weights[0] >= 0.5);
        CHECK(r.points_evaluated == 101);
    }
    SUBCASE("ties go to the lexicographically smallest vector")
    {
        // identical assets: every lattice point has the same fitness
        const auto s = ScenarioSet::equiprobable({{0.5, 0.5}, {-0.25, -0.25}});
        const auto r = grid_search(s, cfg, 0.25);
        CHECK(r.best.weights == std::vector<double>{0.0, 1.0});
    }
    SUBCASE("bounds skip lattice points")
    {
        cfg.bounds = {0.0, 0.6};
        const auto r = grid_search(ScenarioSet::equiprobable({{0.1, 0.0}, {-0.1, 0.02}}), cfg, 0.1);
        CHECK(r.points_evaluated == 3); // (0.4,0.6) (0.5,0.5) (0.6,0.4)
    }
    SUBCASE("guards")
    {
        const auto six = ScenarioSet::equiprobable({{0, 0, 0, 0, 0, 0}});
        CHECK_THROWS_AS(grid_search(six, cfg, 0.1), ComplexityGuardError);
        const auto two = ScenarioSet::equiprobable({{0, 0}});
        CHECK_THROWS_AS(grid_search(two, cfg, 0.005), ComplexityGuardError);
        CHECK_THROWS_AS(grid_search(two, cfg, 0.3), ConfigError);
    }
}

TEST_CASE("covariance_variance_check")
{
    const auto s = ScenarioSet::from_rows({{0.10, -0.05}, {0.00, 0.02}, {-0.10, 0.04}}, {0.5, 0.3, 0.2});
    CHECK(covariance_variance_check(s, Portfolio{{0.5, 0.5}}) == doctest::Approx(0.00043225).epsilon(1e-10));
    CHECK(covariance_variance_check(ScenarioSet::equiprobable({{0.3, -0.1}}), Portfolio{{0.5, 0.5}}) == 0.0);

    const std::vector<double> col{0.01, -0.02, 0.05, 0.0};
    const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
    const auto one = ScenarioSet::from_rows({{0.01}, {-0.02}, {0.05}, {0.0}}, probs);
    CHECK(covariance_variance_check(one, Portfolio{{1.0}}) ==
          doctest::Approx(static_cast<double>(testing::ref_variance(col, probs))).epsilon(1e-12));
}
