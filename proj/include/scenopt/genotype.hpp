#pragma once

#include "scenopt/random.hpp"
#include "scenopt/scenario_model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

namespace scenopt
{

    /**
     * @brief Two-part chromosome: budget buckets and an asset-selection mask.
     *
     * `buckets` holds b values in [0, 1]; `selection` holds one flag per asset.
     * Construction clamps buckets into [0, 1] and, when no asset is selected,
     * sets the lowest-index bit so the genotype always names at least one asset.
     */
    class Genotype
    {
    public:
        Genotype(std::vector<double> buckets, std::vector<std::uint8_t> selection);

        const std::vector<double> &buckets() const noexcept { return buckets_; }
        const std::vector<std::uint8_t> &selection() const noexcept { return selection_; }

        std::size_t num_buckets() const noexcept { return buckets_.size(); }
        std::size_t num_assets() const noexcept { return selection_.size(); }
        std::size_t length() const noexcept { return buckets_.size() + selection_.size(); }
        std::size_t selected_count() const noexcept;

        friend bool operator==(const Genotype &, const Genotype &) = default;

    private:
        std::vector<double> buckets_;
        std::vector<std::uint8_t> selection_;
    };

    /// Decodes a genotype into portfolio weights.
    ///
    /// Bucket i goes to the (i mod k)-th selected asset in ascending index
    /// order. Raw masses are normalized (equal split when all are zero) and
    /// then clipped into `bounds` with proportional redistribution.
    Portfolio decode(const Genotype &geno, const Bounds &bounds = {});

    /// Fresh genotype with uniform buckets and fair selection bits. An empty
    /// selection is repaired by setting one uniformly chosen bit.
    Genotype random_genotype(std::size_t num_assets, std::size_t num_buckets, Rng &rng);

    /// Returns a copy whose selection count k satisfies k*lower <= 1 <= k*upper.
    /// Missing assets are added from the lowest unselected index; surplus
    /// assets are dropped from the highest selected index.
    Genotype fit_selection_to_bounds(const Genotype &geno, const Bounds &bounds);

    /// `{"g1": [...], "g2": "0101..."}`
    nlohmann::json to_json(const Genotype &geno);
    Genotype genotype_from_json(const nlohmann::json &j);

} // namespace scenopt
