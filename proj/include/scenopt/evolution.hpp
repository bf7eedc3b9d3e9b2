#pragma once

#include "scenopt/genotype.hpp"
#include "scenopt/random.hpp"
#include "scenopt/scenario_model.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace scenopt
{

    /// Number of individuals produced by each operator per follow-up generation.
    struct OperatorCounts
    {
        std::size_t elite = 100;
        std::size_t crossover = 420;
        std::size_t mutation = 210;
        std::size_t random = 100;

        std::size_t total() const noexcept { return elite + crossover + mutation + random; }

        friend bool operator==(const OperatorCounts &, const OperatorCounts &) = default;
    };

    struct OptimizationConfig
    {
        double mu = 0.001;                ///< expected-return floor
        std::optional<double> delta;      ///< shortfall threshold; required when the constraint is on
        double epsilon = 0.1;             ///< cap on P(profit <= delta)
        double gamma = 100.0;             ///< shortfall penalty factor
        std::optional<double> gamma_mu;   ///< return-floor penalty factor, defaults to gamma
        Bounds bounds;
        std::size_t b = 100;              ///< bucket count
        OperatorCounts operator_counts;
        std::size_t initial_population = 1000;
        std::size_t max_generations = 500;
        std::size_t stagnation_patience = 50;
        std::uint64_t seed = 1;
        bool probabilistic_constraint_enabled = false;

        double effective_gamma_mu() const noexcept { return gamma_mu.value_or(gamma); }

        /// Throws ConfigError naming the first offending field.
        void validate() const;
    };

    /// Config JSON uses the field names above; `bounds` is `[lower, upper]` and
    /// `operator_counts` is `[o1, o2, o3, o4]`. Absent keys keep their defaults,
    /// unknown keys are rejected.
    OptimizationConfig config_from_json(const nlohmann::json &j);
    nlohmann::json to_json(const OptimizationConfig &cfg);
    OptimizationConfig read_config(const std::filesystem::path &path);

    /// Shortfall penalty f * max(0, prob - epsilon) * gamma.
    double probability_penalty(double raw_variance, double shortfall, double epsilon, double gamma);

    /// Return-floor penalty f * max(0, mu - mean) * gamma_mu.
    double return_floor_penalty(double raw_variance, double mean, double mu, double gamma_mu);

    /// Objective terms of one portfolio under a config.
    struct Score
    {
        double fitness = 0.0;       ///< f' = f + p
        double raw_variance = 0.0;  ///< f
        double penalty = 0.0;       ///< p
        DistributionSummary stats;  ///< shortfall is NaN when no delta is configured
    };

    /// Single scoring path shared by the optimizer and the exhaustive oracle.
    Score score_portfolio(const ScenarioSet &scenarios, const Portfolio &portfolio, const OptimizationConfig &cfg);

    struct Individual
    {
        Genotype genotype;
        Portfolio portfolio;
        double fitness = 0.0;
        double raw_variance = 0.0;
        double penalty = 0.0;
        DistributionSummary stats;
    };

    /// Decodes and scores a genotype. The decoded portfolio is checked against
    /// the budget and bound constraints on every call.
    Individual evaluate_fitness(const Genotype &geno, const ScenarioSet &scenarios, const OptimizationConfig &cfg);

    /// The `count` fittest individuals, ordered by fitness, then raw variance,
    /// then input position.
    std::vector<Individual> select_elite(std::span<const Individual> population, std::size_t count);

    /// One-point crossover on both parts. `parent_a` is treated as the fitter
    /// parent when an empty selection has to be repaired.
    Genotype crossover_onepoint(const Genotype &parent_a, const Genotype &parent_b, Rng &rng);

    /// Deterministic form: the child takes `cut_g1` buckets and `cut_g2`
    /// selection bits from `parent_a`, the rest from `parent_b`.
    Genotype crossover_onepoint_at(const Genotype &parent_a, const Genotype &parent_b,
                                   std::size_t cut_g1, std::size_t cut_g2);

    /// Blends buckets with one uniform alpha; selection copied from `parent_a`.
    Genotype crossover_intermediate(const Genotype &parent_a, const Genotype &parent_b, Rng &rng);
    Genotype crossover_intermediate_with(const Genotype &parent_a, const Genotype &parent_b, double alpha);

    struct MutationRates
    {
        double g1 = 0.0;
        double g2 = 0.0;

        /// 1/b and 1/a.
        static MutationRates defaults_for(std::size_t num_buckets, std::size_t num_assets);
    };

    /// Resets each bucket with probability rates.g1 and flips each selection
    /// bit with probability rates.g2. An emptied selection gets the parent's
    /// lowest selected index back.
    Genotype mutate(const Genotype &parent, Rng &rng, const MutationRates &rates);

    struct GenerationRecord
    {
        std::size_t generation = 0;
        std::size_t population_size = 0;
        double best_fitness = 0.0;        ///< best f' within this generation
        double best_raw_variance = 0.0;   ///< f of that individual
        double best_shortfall = 0.0;      ///< P(profit <= delta) of that individual
        double mean_fitness = 0.0;
        double best_ever_fitness = 0.0;
    };

    struct EvolutionResult
    {
        Individual best;
        std::vector<GenerationRecord> history;
        std::vector<Individual> final_population;
        std::size_t generations_run = 0;   ///< follow-up generations, excluding generation 0
    };

    struct EvolveOptions
    {
        std::optional<std::filesystem::path> log_path;         ///< per-generation CSV
        std::optional<std::filesystem::path> checkpoint_path;  ///< final population as JSON
        std::optional<MutationRates> mutation_rates;           ///< defaults to 1/b, 1/a
    };

    /// Runs the generational loop. Deterministic in (scenarios, cfg).
    EvolutionResult evolve(const ScenarioSet &scenarios, const OptimizationConfig &cfg,
                           const EvolveOptions &options = {});

    nlohmann::json population_to_json(std::span<const Individual> population);
    std::vector<Genotype> population_from_json(const nlohmann::json &j);

} // namespace scenopt
