#include "scenopt/genotype.hpp"

#include "scenopt/detail/numeric.hpp"
#include "scenopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace scenopt
{

    Genotype::Genotype(std::vector<double> buckets, std::vector<std::uint8_t> selection)
        : buckets_(std::move(buckets)), selection_(std::move(selection))
    {
        if (buckets_.empty())
            throw DimensionError("genotype needs at least one bucket");
        if (selection_.empty())
            throw DimensionError("genotype needs at least one asset");
        for (auto &v : buckets_)
        {
            if (std::isnan(v))
                throw ValidationError("bucket value is NaN");
            v = std::clamp(v, 0.0, 1.0);
        }
        for (auto &bit : selection_)
            bit = bit ? 1 : 0;
        if (selected_count() == 0)
            selection_.front() = 1;
    }

    std::size_t Genotype::selected_count() const noexcept
    {
        return static_cast<std::size_t>(std::count(selection_.begin(), selection_.end(), std::uint8_t{1}));
    }

    namespace
    {
        void check_bounds(const Bounds &bounds)
        {
            if (!(bounds.lower >= 0.0 && bounds.lower <= bounds.upper && bounds.upper <= 1.0))
                throw InfeasibleBoundsError("weight bounds must satisfy 0 <= lower <= upper <= 1");
        }

        bool bounds_admit(std::size_t k, const Bounds &bounds)
        {
            const double kd = static_cast<double>(k);
            return kd * bounds.lower <= 1.0 + 1e-12 && kd * bounds.upper >= 1.0 - 1e-12;
        }

        // Clip into [lower, upper], moving the residual onto the still-free
        // entries in proportion to their weight. Upper violations are resolved
        // before lower ones; each pass fixes at least one entry.
        double clamped_sum(const std::vector<double> &w, double scale, const Bounds &bounds)
        {
            detail::CompensatedSum total;
            for (double v : w)
                total.add(std::clamp(v * scale, bounds.lower, bounds.upper));
            return total.value();
        }

        // Clip and redistribute proportionally until stable. The stable point is
        // w_i = clamp(c * r_i, l, u) with c chosen so the weights sum to 1; solving
        // for c directly avoids clipping an asset that a later pass would free again.
        void enforce_bounds(std::vector<double> &w, const Bounds &bounds)
        {
            const std::size_t k = w.size();
            if (std::all_of(w.begin(), w.end(), [&](double v) { return v >= bounds.lower && v <= bounds.upper; }))
                return;

            const double min_positive = [&] {
                double m = std::numeric_limits<double>::infinity();
                for (double v : w)
                    if (v > 0.0)
                        m = std::min(m, v);
                return m;
            }();
            double lo = 0.0;
            double hi = bounds.upper / min_positive;
            if (clamped_sum(w, hi, bounds) < 1.0)
            {
                // assets with zero mass take an equal share of what the others cannot hold
                std::size_t zeros = 0;
                for (double v : w)
                    zeros += v > 0.0 ? 0 : 1;
                const double share =
                    (1.0 - static_cast<double>(k - zeros) * bounds.upper) / static_cast<double>(zeros);
                for (auto &v : w)
                    v = v > 0.0 ? bounds.upper : std::clamp(share, bounds.lower, bounds.upper);
                return;
            }
            for (int iter = 0; iter < 200 && lo < hi; ++iter)
            {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                (clamped_sum(w, mid, bounds) < 1.0 ? lo : hi) = mid;
            }

            detail::CompensatedSum fixed_mass;
            detail::CompensatedSum free_mass;
            std::vector<bool> clipped(k);
            for (std::size_t i = 0; i < k; ++i)
            {
                const double scaled = w[i] * hi;
                w[i] = std::clamp(scaled, bounds.lower, bounds.upper);
                clipped[i] = w[i] != scaled;
                (clipped[i] ? fixed_mass : free_mass).add(w[i]);
            }
            const double free_total = free_mass.value();
            if (free_total > 0.0)
            {
                const double factor = (1.0 - fixed_mass.value()) / free_total;
                for (std::size_t i = 0; i < k; ++i)
                    if (!clipped[i])
                        w[i] = std::clamp(w[i] * factor, bounds.lower, bounds.upper);
            }
            for (double v : w)
                if (v < bounds.lower - 1e-9 || v > bounds.upper + 1e-9)
                    throw InfeasibleBoundsError("bound repair did not converge");
        }
    } // namespace

    Portfolio decode(const Genotype &geno, const Bounds &bounds)
    {
        check_bounds(bounds);
        std::vector<std::size_t> chosen;
        for (std::size_t a = 0; a < geno.num_assets(); ++a)
            if (geno.selection()[a])
                chosen.push_back(a);
        const std::size_t k = chosen.size();
        if (!bounds_admit(k, bounds))
            throw InfeasibleBoundsError("bounds [" + detail::format_double(bounds.lower) + ", " +
                                        detail::format_double(bounds.upper) + "] are infeasible for " +
                                        std::to_string(k) + " selected assets");

        std::vector<detail::CompensatedSum> mass(k);
        for (std::size_t i = 0; i < geno.num_buckets(); ++i)
            mass[i % k].add(geno.buckets()[i]);

        detail::CompensatedSum total;
        std::vector<double> raw(k);
        for (std::size_t j = 0; j < k; ++j)
        {
            raw[j] = mass[j].value();
            total.add(raw[j]);
        }
        const double sum = total.value();
        for (auto &v : raw)
            v = sum > 0.0 ? v / sum : 1.0 / static_cast<double>(k);

        enforce_bounds(raw, bounds);

        Portfolio portfolio{std::vector<double>(geno.num_assets(), 0.0)};
        for (std::size_t j = 0; j < k; ++j)
            portfolio.weights[chosen[j]] = raw[j];
        return portfolio;
    }

    Genotype random_genotype(std::size_t num_assets, std::size_t num_buckets, Rng &rng)
    {
        if (num_assets == 0 || num_buckets == 0)
            throw ConfigError("random genotype needs at least one asset and one bucket");
        std::vector<double> buckets(num_buckets);
        for (auto &v : buckets)
            v = rng.uniform01();
        std::vector<std::uint8_t> selection(num_assets);
        for (auto &bit : selection)
            bit = rng.bernoulli(0.5) ? 1 : 0;
        if (std::none_of(selection.begin(), selection.end(), [](auto b) { return b != 0; }))
            selection[rng.index(num_assets)] = 1;
        return Genotype(std::move(buckets), std::move(selection));
    }

    Genotype fit_selection_to_bounds(const Genotype &geno, const Bounds &bounds)
    {
        check_bounds(bounds);
        auto selection = geno.selection();
        std::size_t k = geno.selected_count();
        for (std::size_t a = 0; a < selection.size() && !bounds_admit(k, bounds) &&
                                static_cast<double>(k) * bounds.upper < 1.0;
             ++a)
        {
            if (!selection[a])
            {
                selection[a] = 1;
                ++k;
            }
        }
        for (std::size_t a = selection.size(); a-- > 0 && !bounds_admit(k, bounds) &&
                                               static_cast<double>(k) * bounds.lower > 1.0;)
        {
            if (selection[a] && k > 1)
            {
                selection[a] = 0;
                --k;
            }
        }
        if (!bounds_admit(k, bounds))
            throw InfeasibleBoundsError("no selection of " + std::to_string(selection.size()) +
                                        " assets satisfies the weight bounds");
        return Genotype(geno.buckets(), std::move(selection));
    }

    nlohmann::json to_json(const Genotype &geno)
    {
        std::string bits;
        bits.reserve(geno.num_assets());
        for (auto b : geno.selection())
            bits.push_back(b ? '1' : '0');
        return nlohmann::json{{"g1", geno.buckets()}, {"g2", bits}};
    }

    Genotype genotype_from_json(const nlohmann::json &j)
    {
        if (!j.is_object() || !j.contains("g1") || !j.contains("g2"))
            throw ValidationError("genotype JSON needs 'g1' and 'g2'");
        if (!j.at("g1").is_array() || !j.at("g2").is_string())
            throw ValidationError("genotype JSON: 'g1' must be an array and 'g2' a bit string");
        std::vector<double> buckets;
        for (const auto &v : j.at("g1"))
        {
            if (!v.is_number())
                throw ValidationError("genotype JSON: non-numeric bucket value");
            buckets.push_back(v.get<double>());
        }
        std::vector<std::uint8_t> selection;
        for (char c : j.at("g2").get<std::string>())
        {
            if (c != '0' && c != '1')
                throw ValidationError("genotype JSON: 'g2' may only contain '0' and '1'");
            selection.push_back(c == '1' ? 1 : 0);
        }
        return Genotype(std::move(buckets), std::move(selection));
    }

} // namespace scenopt
