import math
import os
from pathlib import Path

import pytest

import scenopt

DATA_DIR = Path(os.environ.get("SCENOPT_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def three_scenarios():
    return scenopt.ScenarioSet([[0.10, -0.05], [0.00, 0.02], [-0.10, 0.04]], [0.5, 0.3, 0.2])


def test_distribution_statistics():
    s = three_scenarios()
    dist = scenopt.profit_distribution(s, [0.5, 0.5])
    assert dist.profits == pytest.approx([0.025, 0.01, -0.03], abs=1e-15)
    assert scenopt.expected_profit(dist) == pytest.approx(0.0095, abs=1e-15)
    assert scenopt.loss_variance(dist) == pytest.approx(0.00043225, rel=1e-12)
    assert scenopt.shortfall_probability(dist, 0.0) == pytest.approx(0.2)
    summary = scenopt.distribution_summary(dist, 0.0)
    assert summary["std_dev"] == pytest.approx(math.sqrt(0.00043225), rel=1e-12)
    assert scenopt.covariance_variance_check(s, [0.5, 0.5]) == pytest.approx(0.00043225, rel=1e-9)


def test_decode_and_genotype():
    g = scenopt.Genotype([0.2, 0.4, 0.2, 0.2], [1, 1])
    assert scenopt.decode(g) == pytest.approx([0.4, 0.6])
    assert len(g) == 6
    assert scenopt.Genotype.from_json(g.to_json()) == g
    r = scenopt.random_genotype(30, 100, seed=5)
    assert len(r) == 130
    w = scenopt.decode(r, scenopt.Bounds(0.0, 1.0))
    assert sum(w) == pytest.approx(1.0, abs=1e-9)


def test_evolve_matches_grid_on_a_small_instance():
    s = scenopt.read_scenarios_csv(DATA_DIR / "toy_two_asset.csv")
    cfg = scenopt.OptimizationConfig()
    cfg.mu = -1.0
    cfg.b = 10
    cfg.operator_counts = [20, 100, 50, 30]
    cfg.initial_population = 200
    cfg.max_generations = 200
    cfg.seed = 11
    best, history, generations = scenopt.evolve(s, cfg)
    assert generations == len(history) - 1
    assert all(h["population_size"] == 200 for h in history[1:])
    _, grid_fitness = scenopt.grid_search(s, cfg, 0.01)
    assert (best.fitness - grid_fitness) / grid_fitness <= 1e-3
    assert sum(best.weights) == pytest.approx(1.0, abs=1e-9)


def test_errors_map_to_python_exceptions():
    with pytest.raises(scenopt.ValidationError):
        scenopt.ScenarioSet([[0.1], [0.2]], [0.5, 0.6])
    with pytest.raises(scenopt.DimensionError):
        scenopt.profit_distribution(three_scenarios(), [1.0])
    cfg = scenopt.OptimizationConfig()
    cfg.probabilistic_constraint_enabled = True
    with pytest.raises(scenopt.ConfigError, match="delta"):
        cfg.validate()
    wide = scenopt.ScenarioSet([[0.01] * 6])
    with pytest.raises(scenopt.ComplexityGuardError):
        scenopt.grid_search(wide, scenopt.OptimizationConfig(), 0.1)
    assert issubclass(scenopt.FormatError, scenopt.ScenoptError)


def test_bundled_prices_become_fifty_weeks(tmp_path):
    prices = scenopt.load_prices(DATA_DIR / "synthetic_djia_2009.csv")
    assert prices.num_dates == 252
    assert prices.num_assets == 30
    weekly = scenopt.weekly_returns(prices)
    assert weekly.num_scenarios == 50
    out = tmp_path / "weekly.csv"
    scenopt.write_scenarios_csv(out, weekly)
    again = scenopt.read_scenarios_csv(out)
    assert again.returns == weekly.returns
    assert again.labels == prices.labels
