#include "scenopt/evolution.hpp"

#include "scenopt/detail/numeric.hpp"
#include "scenopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

namespace scenopt
{

    // ---------------------------------------------------------------- config

    void OptimizationConfig::validate() const
    {
        if (!std::isfinite(mu))
            throw ConfigError("mu must be finite");
        if (delta && !std::isfinite(*delta))
            throw ConfigError("delta must be finite");
        if (probabilistic_constraint_enabled && !delta)
            throw ConfigError("delta is required when probabilistic_constraint_enabled is true");
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw ConfigError("epsilon must lie in [0, 1]");
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw ConfigError("gamma must be positive");
        if (gamma_mu && (!(*gamma_mu > 0.0) || !std::isfinite(*gamma_mu)))
            throw ConfigError("gamma_mu must be positive");
        if (!(bounds.lower >= 0.0 && bounds.lower <= bounds.upper && bounds.upper <= 1.0 && bounds.upper > 0.0))
            throw ConfigError("bounds must satisfy 0 <= lower <= upper <= 1 with upper > 0");
        if (b == 0)
            throw ConfigError("b must be at least 1");
        if (initial_population == 0)
            throw ConfigError("initial_population must be at least 1");
        if (initial_population < operator_counts.elite)
            throw ConfigError("initial_population must be at least operator_counts[0] (elite count)");
        if (max_generations > 0 && operator_counts.total() == 0)
            throw ConfigError("operator_counts must produce at least one individual per generation");
    }

    namespace
    {
        const std::set<std::string> kConfigKeys = {
            "mu", "delta", "epsilon", "gamma", "gamma_mu", "bounds", "b", "operator_counts",
            "initial_population", "max_generations", "stagnation_patience", "seed",
            "probabilistic_constraint_enabled"};

        double number_field(const nlohmann::json &j, const char *key)
        {
            const auto &v = j.at(key);
            if (!v.is_number())
                throw ConfigError(std::string(key) + " must be a number");
            return v.get<double>();
        }

        std::size_t count_field(const nlohmann::json &v, const std::string &key)
        {
            if (!v.is_number_unsigned())
                throw ConfigError(key + " must be a non-negative integer");
            return v.get<std::size_t>();
        }
    } // namespace

    OptimizationConfig config_from_json(const nlohmann::json &j)
    {
        if (!j.is_object())
            throw ConfigError("config must be a JSON object");
        for (const auto &item : j.items())
            if (!kConfigKeys.contains(item.key()))
                throw ConfigError("unknown config key '" + item.key() + "'");

        OptimizationConfig cfg;
        if (j.contains("mu"))
            cfg.mu = number_field(j, "mu");
        if (j.contains("delta") && !j.at("delta").is_null())
            cfg.delta = number_field(j, "delta");
        if (j.contains("epsilon"))
            cfg.epsilon = number_field(j, "epsilon");
        if (j.contains("gamma"))
            cfg.gamma = number_field(j, "gamma");
        if (j.contains("gamma_mu") && !j.at("gamma_mu").is_null())
            cfg.gamma_mu = number_field(j, "gamma_mu");
        if (j.contains("bounds"))
        {
            const auto &v = j.at("bounds");
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                throw ConfigError("bounds must be [lower, upper]");
            cfg.bounds = {v[0].get<double>(), v[1].get<double>()};
        }
        if (j.contains("b"))
            cfg.b = count_field(j.at("b"), "b");
        if (j.contains("operator_counts"))
        {
            const auto &v = j.at("operator_counts");
            if (!v.is_array() || v.size() != 4)
                throw ConfigError("operator_counts must be [o1, o2, o3, o4]");
            cfg.operator_counts = {count_field(v[0], "operator_counts[0]"), count_field(v[1], "operator_counts[1]"),
                                   count_field(v[2], "operator_counts[2]"), count_field(v[3], "operator_counts[3]")};
        }
        if (j.contains("initial_population"))
            cfg.initial_population = count_field(j.at("initial_population"), "initial_population");
        if (j.contains("max_generations"))
            cfg.max_generations = count_field(j.at("max_generations"), "max_generations");
        if (j.contains("stagnation_patience"))
            cfg.stagnation_patience = count_field(j.at("stagnation_patience"), "stagnation_patience");
        if (j.contains("seed"))
        {
            const auto &v = j.at("seed");
            if (!v.is_number_unsigned())
                throw ConfigError("seed must be a non-negative integer");
            cfg.seed = v.get<std::uint64_t>();
        }
        if (j.contains("probabilistic_constraint_enabled"))
        {
            const auto &v = j.at("probabilistic_constraint_enabled");
            if (!v.is_boolean())
                throw ConfigError("probabilistic_constraint_enabled must be true or false");
            cfg.probabilistic_constraint_enabled = v.get<bool>();
        }
        cfg.validate();
        return cfg;
    }

    nlohmann::json to_json(const OptimizationConfig &cfg)
    {
        nlohmann::json j;
        j["mu"] = cfg.mu;
        j["delta"] = cfg.delta ? nlohmann::json(*cfg.delta) : nlohmann::json(nullptr);
        j["epsilon"] = cfg.epsilon;
        j["gamma"] = cfg.gamma;
        j["gamma_mu"] = cfg.effective_gamma_mu();
        j["bounds"] = {cfg.bounds.lower, cfg.bounds.upper};
        j["b"] = cfg.b;
        j["operator_counts"] = {cfg.operator_counts.elite, cfg.operator_counts.crossover,
                                cfg.operator_counts.mutation, cfg.operator_counts.random};
        j["initial_population"] = cfg.initial_population;
        j["max_generations"] = cfg.max_generations;
        j["stagnation_patience"] = cfg.stagnation_patience;
        j["seed"] = cfg.seed;
        j["probabilistic_constraint_enabled"] = cfg.probabilistic_constraint_enabled;
        return j;
    }

    OptimizationConfig read_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file " + path.string());
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
        }
        return config_from_json(j);
    }

    // ---------------------------------------------------------------- fitness

    double probability_penalty(double raw_variance, double shortfall, double epsilon, double gamma)
    {
        return raw_variance * std::max(0.0, shortfall - epsilon) * gamma;
    }

    double return_floor_penalty(double raw_variance, double mean, double mu, double gamma_mu)
    {
        return raw_variance * std::max(0.0, mu - mean) * gamma_mu;
    }

    Score score_portfolio(const ScenarioSet &scenarios, const Portfolio &portfolio, const OptimizationConfig &cfg)
    {
        const auto dist = profit_distribution(scenarios, portfolio);
        Score score;
        score.raw_variance = loss_variance(dist);
        score.stats.mean = expected_profit(dist);
        score.stats.std_dev = std::sqrt(score.raw_variance);
        score.stats.shortfall_probability = cfg.delta ? shortfall_probability(dist, *cfg.delta)
                                                      : std::numeric_limits<double>::quiet_NaN();

        double penalty = return_floor_penalty(score.raw_variance, score.stats.mean, cfg.mu, cfg.effective_gamma_mu());
        if (cfg.probabilistic_constraint_enabled)
            penalty += probability_penalty(score.raw_variance, score.stats.shortfall_probability, cfg.epsilon, cfg.gamma);
        score.penalty = penalty;
        score.fitness = score.raw_variance + penalty;
        return score;
    }

    Individual evaluate_fitness(const Genotype &geno, const ScenarioSet &scenarios, const OptimizationConfig &cfg)
    {
        if (geno.num_assets() != scenarios.num_assets())
            throw DimensionError("genotype covers " + std::to_string(geno.num_assets()) +
                                 " assets but the scenario set has " + std::to_string(scenarios.num_assets()));
        auto portfolio = decode(geno, cfg.bounds);
        validate_portfolio(portfolio, cfg.bounds);
        const auto score = score_portfolio(scenarios, portfolio, cfg);
        return Individual{geno, std::move(portfolio), score.fitness, score.raw_variance, score.penalty, score.stats};
    }

    // ---------------------------------------------------------------- operators

    std::vector<Individual> select_elite(std::span<const Individual> population, std::size_t count)
    {
        if (count > population.size())
            throw ConfigError("cannot select " + std::to_string(count) + " elites from a population of " +
                              std::to_string(population.size()));
        std::vector<std::size_t> order(population.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            const auto &a = population[x];
            const auto &b = population[y];
            if (a.fitness != b.fitness)
                return a.fitness < b.fitness;
            return a.raw_variance < b.raw_variance;
        });
        std::vector<Individual> elite;
        elite.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            elite.push_back(population[order[i]]);
        return elite;
    }

    namespace
    {
        void check_same_shape(const Genotype &a, const Genotype &b)
        {
            if (a.num_buckets() != b.num_buckets() || a.num_assets() != b.num_assets())
                throw DimensionError("crossover parents differ in shape");
        }

        std::size_t lowest_selected(const Genotype &geno)
        {
            const auto &sel = geno.selection();
            return static_cast<std::size_t>(std::find(sel.begin(), sel.end(), std::uint8_t{1}) - sel.begin());
        }

        void repair_selection(std::vector<std::uint8_t> &selection, const Genotype &fitter)
        {
            if (std::none_of(selection.begin(), selection.end(), [](auto bit) { return bit != 0; }))
                selection[lowest_selected(fitter)] = 1;
        }
    } // namespace

    Genotype crossover_onepoint_at(const Genotype &parent_a, const Genotype &parent_b,
                                   std::size_t cut_g1, std::size_t cut_g2)
    {
        check_same_shape(parent_a, parent_b);
        cut_g1 = std::min(cut_g1, parent_a.num_buckets());
        cut_g2 = std::min(cut_g2, parent_a.num_assets());

        std::vector<double> buckets(parent_a.buckets().begin(), parent_a.buckets().begin() + cut_g1);
        buckets.insert(buckets.end(), parent_b.buckets().begin() + cut_g1, parent_b.buckets().end());
        std::vector<std::uint8_t> selection(parent_a.selection().begin(), parent_a.selection().begin() + cut_g2);
        selection.insert(selection.end(), parent_b.selection().begin() + cut_g2, parent_b.selection().end());
        repair_selection(selection, parent_a);
        return Genotype(std::move(buckets), std::move(selection));
    }

    Genotype crossover_onepoint(const Genotype &parent_a, const Genotype &parent_b, Rng &rng)
    {
        check_same_shape(parent_a, parent_b);
        const std::size_t b = parent_a.num_buckets();
        const std::size_t a = parent_a.num_assets();
        // A length-1 part has no interior cut; it is copied from parent_a.
        const std::size_t cut_g1 = b > 1 ? 1 + rng.index(b - 1) : b;
        const std::size_t cut_g2 = a > 1 ? 1 + rng.index(a - 1) : a;
        return crossover_onepoint_at(parent_a, parent_b, cut_g1, cut_g2);
    }

    Genotype crossover_intermediate_with(const Genotype &parent_a, const Genotype &parent_b, double alpha)
    {
        check_same_shape(parent_a, parent_b);
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw ConfigError("intermediate crossover alpha must lie in [0, 1]");
        std::vector<double> buckets(parent_a.num_buckets());
        for (std::size_t i = 0; i < buckets.size(); ++i)
            buckets[i] = alpha * parent_a.buckets()[i] + (1.0 - alpha) * parent_b.buckets()[i];
        return Genotype(std::move(buckets), parent_a.selection());
    }

    Genotype crossover_intermediate(const Genotype &parent_a, const Genotype &parent_b, Rng &rng)
    {
        return crossover_intermediate_with(parent_a, parent_b, rng.uniform01());
    }

    MutationRates MutationRates::defaults_for(std::size_t num_buckets, std::size_t num_assets)
    {
        return {1.0 / static_cast<double>(std::max<std::size_t>(num_buckets, 1)),
                1.0 / static_cast<double>(std::max<std::size_t>(num_assets, 1))};
    }

    Genotype mutate(const Genotype &parent, Rng &rng, const MutationRates &rates)
    {
        if (!(rates.g1 >= 0.0 && rates.g1 <= 1.0) || !(rates.g2 >= 0.0 && rates.g2 <= 1.0))
            throw ConfigError("mutation rates must lie in [0, 1]");
        auto buckets = parent.buckets();
        for (auto &v : buckets)
            if (rng.bernoulli(rates.g1))
                v = rng.uniform01();
        auto selection = parent.selection();
        for (auto &bit : selection)
            if (rng.bernoulli(rates.g2))
                bit = bit ? 0 : 1;
        repair_selection(selection, parent);
        return Genotype(std::move(buckets), std::move(selection));
    }

    // ---------------------------------------------------------------- loop

    namespace
    {
        const Individual &tournament(std::span<const Individual> population, Rng &rng)
        {
            const auto &first = population[rng.index(population.size())];
            const auto &second = population[rng.index(population.size())];
            return second.fitness < first.fitness ? second : first;
        }

        // Orders a parent pair so the fitter one comes first; ties keep order.
        std::pair<const Individual *, const Individual *> ordered(const Individual &x, const Individual &y)
        {
            if (y.fitness < x.fitness)
                return {&y, &x};
            return {&x, &y};
        }

        GenerationRecord summarize(std::size_t generation, std::span<const Individual> population, double best_ever)
        {
            GenerationRecord rec;
            rec.generation = generation;
            rec.population_size = population.size();
            const auto best = std::min_element(population.begin(), population.end(),
                                               [](const Individual &a, const Individual &b) { return a.fitness < b.fitness; });
            detail::CompensatedSum total;
            for (const auto &ind : population)
                total.add(ind.fitness);
            rec.best_fitness = best->fitness;
            rec.best_raw_variance = best->raw_variance;
            rec.best_shortfall = best->stats.shortfall_probability;
            rec.mean_fitness = total.value() / static_cast<double>(population.size());
            rec.best_ever_fitness = best_ever;
            return rec;
        }

        void write_log_line(std::ostream &out, const GenerationRecord &rec)
        {
            out << rec.generation << ',' << detail::format_double(rec.best_fitness) << ','
                << detail::format_double(rec.best_raw_variance) << ','
                << (std::isnan(rec.best_shortfall) ? std::string() : detail::format_double(rec.best_shortfall)) << ','
                << detail::format_double(rec.mean_fitness) << '\n';
        }
    } // namespace

    EvolutionResult evolve(const ScenarioSet &scenarios, const OptimizationConfig &cfg, const EvolveOptions &options)
    {
        cfg.validate();
        const std::size_t num_assets = scenarios.num_assets();
        const auto rates = options.mutation_rates.value_or(MutationRates::defaults_for(cfg.b, num_assets));
        const auto &ops = cfg.operator_counts;

        std::ofstream log;
        if (options.log_path)
        {
            log.open(*options.log_path);
            if (!log)
                throw IoError("cannot write log file " + options.log_path->string());
            log << "generation,best_fitness,best_raw_variance,best_shortfall_probability,mean_fitness\n";
        }

        Rng rng(cfg.seed);
        auto fresh = [&] { return fit_selection_to_bounds(random_genotype(num_assets, cfg.b, rng), cfg.bounds); };

        std::vector<Genotype> genotypes;
        genotypes.reserve(cfg.initial_population);
        for (std::size_t i = 0; i < cfg.initial_population; ++i)
            genotypes.push_back(fresh());

        std::vector<Individual> population;
        population.reserve(genotypes.size());
        for (const auto &g : genotypes)
            population.push_back(evaluate_fitness(g, scenarios, cfg));

        EvolutionResult result{select_elite(population, 1).front(), {}, {}, 0};
        result.history.push_back(summarize(0, population, result.best.fitness));
        if (log)
            write_log_line(log, result.history.back());

        const std::size_t crossover_intermediate_count = ops.crossover / 2;
        const std::size_t crossover_onepoint_count = ops.crossover - crossover_intermediate_count;
        std::size_t stagnant = 0;

        for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen)
        {
            auto next = select_elite(population, ops.elite);
            next.reserve(ops.total());

            // All random draws happen here, before any evaluation.
            std::vector<Genotype> offspring;
            offspring.reserve(ops.total() - ops.elite);
            for (std::size_t i = 0; i < crossover_onepoint_count; ++i)
            {
                const auto &x = tournament(population, rng);
                const auto &y = tournament(population, rng);
                const auto [fitter, other] = ordered(x, y);
                offspring.push_back(fit_selection_to_bounds(
                    crossover_onepoint(fitter->genotype, other->genotype, rng), cfg.bounds));
            }
            for (std::size_t i = 0; i < crossover_intermediate_count; ++i)
            {
                const auto &x = tournament(population, rng);
                const auto &y = tournament(population, rng);
                const auto [fitter, other] = ordered(x, y);
                offspring.push_back(crossover_intermediate(fitter->genotype, other->genotype, rng));
            }
            for (std::size_t i = 0; i < ops.mutation; ++i)
            {
                const auto &parent = tournament(population, rng);
                offspring.push_back(fit_selection_to_bounds(mutate(parent.genotype, rng, rates), cfg.bounds));
            }
            for (std::size_t i = 0; i < ops.random; ++i)
                offspring.push_back(fresh());

            for (const auto &g : offspring)
                next.push_back(evaluate_fitness(g, scenarios, cfg));
            population = std::move(next);

            const auto gen_best = select_elite(population, 1).front();
            if (gen_best.fitness < result.best.fitness - 1e-12)
            {
                result.best = gen_best;
                stagnant = 0;
            }
            else
            {
                if (gen_best.fitness < result.best.fitness)
                    result.best = gen_best;
                ++stagnant;
            }
            result.history.push_back(summarize(gen, population, result.best.fitness));
            result.generations_run = gen;
            if (log)
                write_log_line(log, result.history.back());
            if (cfg.stagnation_patience > 0 && stagnant >= cfg.stagnation_patience)
                break;
        }

        if (options.checkpoint_path)
        {
            std::ofstream out(*options.checkpoint_path);
            if (!out)
                throw IoError("cannot write checkpoint " + options.checkpoint_path->string());
            out << population_to_json(population).dump() << '\n';
        }
        result.final_population = std::move(population);
        return result;
    }

    nlohmann::json population_to_json(std::span<const Individual> population)
    {
        auto arr = nlohmann::json::array();
        for (const auto &ind : population)
            arr.push_back(to_json(ind.genotype));
        return arr;
    }

    std::vector<Genotype> population_from_json(const nlohmann::json &j)
    {
        if (!j.is_array())
            throw ValidationError("population checkpoint must be a JSON array");
        std::vector<Genotype> out;
        out.reserve(j.size());
        for (const auto &item : j)
            out.push_back(genotype_from_json(item));
        return out;
    }

} // namespace scenopt
