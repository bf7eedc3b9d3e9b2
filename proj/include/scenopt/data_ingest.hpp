#pragma once

#include "scenopt/scenario_model.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace scenopt
{

    /// Daily closing prices, one row per trading day.
    struct PriceSeries
    {
        std::vector<std::string> dates;         ///< ISO-8601, strictly increasing
        std::vector<double> prices;             ///< row-major, dates x assets
        std::vector<std::string> asset_labels;

        std::size_t num_dates() const noexcept { return dates.size(); }
        std::size_t num_assets() const noexcept { return asset_labels.size(); }
        double at(std::size_t row, std::size_t asset) const { return prices.at(row * asset_labels.size() + asset); }
    };

    /// Trading days per weekly block.
    inline constexpr std::size_t kTradingDaysPerWeek = 5;

    /// Reads `date,<ticker_1>,...` price CSV. Dates must be valid ISO-8601
    /// calendar dates in strictly increasing order; every price must be a
    /// finite positive number.
    PriceSeries parse_prices_csv(std::istream &in);
    PriceSeries load_prices(const std::filesystem::path &path);

    /// Equiprobable scenarios of simple returns over consecutive blocks of
    /// five trading days starting at the first date; a trailing partial block
    /// is dropped.
    ScenarioSet weekly_returns(const PriceSeries &series);

} // namespace scenopt
