#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>
#include <pybind11/operators.h>

#include "scenopt/data_ingest.hpp"
#include "scenopt/errors.hpp"
#include "scenopt/evolution.hpp"
#include "scenopt/genotype.hpp"
#include "scenopt/oracle.hpp"
#include "scenopt/scenario_model.hpp"

#include <optional>

namespace py = pybind11;
using namespace scenopt;

namespace
{
    Portfolio as_portfolio(std::vector<double> weights)
    {
        return Portfolio{std::move(weights)};
    }

    py::dict summary_dict(const DistributionSummary &s)
    {
        py::dict d;
        d["mean"] = s.mean;
        d["std_dev"] = s.std_dev;
        d["shortfall_probability"] = s.shortfall_probability;
        return d;
    }
} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Scenario-based minimum-variance portfolio optimization (C++ core)";

    auto base = py::register_exception<Error>(m, "ScenoptError", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<InfeasibleBoundsError>(m, "InfeasibleBoundsError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());
    py::register_exception<ComplexityGuardError>(m, "ComplexityGuardError", base.ptr());

    py::class_<Bounds>(m, "Bounds")
        .def(py::init<>())
        .def(py::init([](double lower, double upper) { return Bounds{lower, upper}; }), py::arg("lower"), py::arg("upper"))
        .def_readwrite("lower", &Bounds::lower)
        .def_readwrite("upper", &Bounds::upper);

    py::class_<ScenarioSet>(m, "ScenarioSet")
        .def(py::init([](const std::vector<std::vector<double>> &rows, std::optional<std::vector<double>> probabilities,
                         std::vector<std::string> labels) {
                 if (probabilities)
                     return ScenarioSet::from_rows(rows, *probabilities, std::move(labels));
                 return ScenarioSet::equiprobable(rows, std::move(labels));
             }),
             py::arg("returns"), py::arg("probabilities") = py::none(), py::arg("labels") = std::vector<std::string>{},
             "Rows are scenarios, columns assets. Omitted probabilities mean equiprobable scenarios.")
        .def_property_readonly("num_scenarios", &ScenarioSet::num_scenarios)
        .def_property_readonly("num_assets", &ScenarioSet::num_assets)
        .def_property_readonly("probabilities", &ScenarioSet::probabilities)
        .def_property_readonly("labels", &ScenarioSet::asset_labels)
        .def_property_readonly("returns", [](const ScenarioSet &s) {
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < s.num_scenarios(); ++k)
            {
                const auto r = s.row(k);
                rows.emplace_back(r.begin(), r.end());
            }
            return rows;
        });

    py::class_<Distribution>(m, "Distribution")
        .def_readonly("profits", &Distribution::profits)
        .def_readonly("probabilities", &Distribution::probabilities);

    m.def("read_scenarios_csv", &read_scenarios_csv, py::arg("path"));
    m.def("write_scenarios_csv", py::overload_cast<const std::filesystem::path &, const ScenarioSet &>(&write_scenarios_csv),
          py::arg("path"), py::arg("scenarios"));

    m.def("profit_distribution", [](const ScenarioSet &s, std::vector<double> w) {
        return profit_distribution(s, as_portfolio(std::move(w)));
    }, py::arg("scenarios"), py::arg("weights"));
    m.def("expected_profit", &expected_profit, py::arg("dist"));
    m.def("loss_variance", &loss_variance, py::arg("dist"));
    m.def("shortfall_probability", &shortfall_probability, py::arg("dist"), py::arg("delta"));
    m.def("distribution_summary", [](const Distribution &d, double delta) {
        return summary_dict(distribution_summary(d, delta));
    }, py::arg("dist"), py::arg("delta"));

    py::class_<Genotype>(m, "Genotype")
        .def(py::init([](std::vector<double> g1, const std::vector<int> &g2) {
                 std::vector<std::uint8_t> bits(g2.begin(), g2.end());
                 return Genotype(std::move(g1), std::move(bits));
             }),
             py::arg("g1"), py::arg("g2"))
        .def_property_readonly("g1", &Genotype::buckets)
        .def_property_readonly("g2", [](const Genotype &g) { return std::vector<int>(g.selection().begin(), g.selection().end()); })
        .def("__len__", &Genotype::length)
        .def("to_json", [](const Genotype &g) { return to_json(g).dump(); })
        .def_static("from_json", [](const std::string &s) { return genotype_from_json(nlohmann::json::parse(s)); })
        .def(py::self == py::self);

    m.def("decode", [](const Genotype &g, const Bounds &b) { return decode(g, b).weights; },
          py::arg("genotype"), py::arg("bounds") = Bounds{});
    m.def("random_genotype", [](std::size_t a, std::size_t b, std::uint64_t seed) {
        Rng rng(seed);
        return random_genotype(a, b, rng);
    }, py::arg("num_assets"), py::arg("num_buckets"), py::arg("seed"));

    py::class_<OptimizationConfig>(m, "OptimizationConfig")
        .def(py::init<>())
        .def_readwrite("mu", &OptimizationConfig::mu)
        .def_readwrite("delta", &OptimizationConfig::delta)
        .def_readwrite("epsilon", &OptimizationConfig::epsilon)
        .def_readwrite("gamma", &OptimizationConfig::gamma)
        .def_readwrite("gamma_mu", &OptimizationConfig::gamma_mu)
        .def_readwrite("bounds", &OptimizationConfig::bounds)
        .def_readwrite("b", &OptimizationConfig::b)
        .def_property("operator_counts",
                      [](const OptimizationConfig &c) {
                          const auto &o = c.operator_counts;
                          return std::vector<std::size_t>{o.elite, o.crossover, o.mutation, o.random};
                      },
                      [](OptimizationConfig &c, const std::vector<std::size_t> &o) {
                          if (o.size() != 4)
                              throw ConfigError("operator_counts must have four entries");
                          c.operator_counts = {o[0], o[1], o[2], o[3]};
                      })
        .def_readwrite("initial_population", &OptimizationConfig::initial_population)
        .def_readwrite("max_generations", &OptimizationConfig::max_generations)
        .def_readwrite("stagnation_patience", &OptimizationConfig::stagnation_patience)
        .def_readwrite("seed", &OptimizationConfig::seed)
        .def_readwrite("probabilistic_constraint_enabled", &OptimizationConfig::probabilistic_constraint_enabled)
        .def("validate", &OptimizationConfig::validate)
        .def("to_json", [](const OptimizationConfig &c) { return to_json(c).dump(); })
        .def_static("from_json", [](const std::string &s) { return config_from_json(nlohmann::json::parse(s)); });

    py::class_<Individual>(m, "Individual")
        .def_readonly("genotype", &Individual::genotype)
        .def_property_readonly("weights", [](const Individual &i) { return i.portfolio.weights; })
        .def_readonly("fitness", &Individual::fitness)
        .def_readonly("raw_variance", &Individual::raw_variance)
        .def_readonly("penalty", &Individual::penalty)
        .def_property_readonly("stats", [](const Individual &i) { return summary_dict(i.stats); });

    m.def("fitness", &evaluate_fitness, py::arg("genotype"), py::arg("scenarios"), py::arg("config"));

    m.def("evolve", [](const ScenarioSet &s, const OptimizationConfig &cfg) {
        std::optional<EvolutionResult> res;
        {
            py::gil_scoped_release release;
            res = evolve(s, cfg);
        }
        const auto &r = *res;
        py::list history;
        for (const auto &rec : r.history)
        {
            py::dict d;
            d["generation"] = rec.generation;
            d["population_size"] = rec.population_size;
            d["best_fitness"] = rec.best_fitness;
            d["best_raw_variance"] = rec.best_raw_variance;
            d["best_shortfall"] = rec.best_shortfall;
            d["mean_fitness"] = rec.mean_fitness;
            d["best_ever_fitness"] = rec.best_ever_fitness;
            history.append(std::move(d));
        }
        return py::make_tuple(r.best, history, r.generations_run);
    }, py::arg("scenarios"), py::arg("config"),
       "Returns (best Individual, per-generation history, generations run).");

    m.def("equal_weight_portfolio", [](std::size_t a) { return equal_weight_portfolio(a).weights; }, py::arg("num_assets"));
    m.def("grid_search", [](const ScenarioSet &s, const OptimizationConfig &cfg, double step) {
        const auto r = grid_search(s, cfg, step);
        return py::make_tuple(r.best.weights, r.score.fitness);
    }, py::arg("scenarios"), py::arg("config"), py::arg("step") = 0.01);
    m.def("covariance_variance_check", [](const ScenarioSet &s, std::vector<double> w) {
        return covariance_variance_check(s, as_portfolio(std::move(w)));
    }, py::arg("scenarios"), py::arg("weights"));

    py::class_<PriceSeries>(m, "PriceSeries")
        .def_readonly("dates", &PriceSeries::dates)
        .def_readonly("labels", &PriceSeries::asset_labels)
        .def_property_readonly("num_dates", &PriceSeries::num_dates)
        .def_property_readonly("num_assets", &PriceSeries::num_assets);

    m.def("load_prices", &load_prices, py::arg("path"));
    m.def("weekly_returns", &weekly_returns, py::arg("series"));
}
