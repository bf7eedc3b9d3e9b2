#include "scenopt/data_ingest.hpp"

#include "scenopt/detail/numeric.hpp"
#include "scenopt/errors.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

namespace scenopt
{

    namespace
    {
        bool is_iso_date(const std::string &text)
        {
            if (text.size() != 10 || text[4] != '-' || text[7] != '-')
                return false;
            for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
                if (text[i] < '0' || text[i] > '9')
                    return false;
            const int y = std::stoi(text.substr(0, 4));
            const unsigned m = static_cast<unsigned>(std::stoi(text.substr(5, 2)));
            const unsigned d = static_cast<unsigned>(std::stoi(text.substr(8, 2)));
            return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}.ok();
        }

        std::string where(std::size_t line_no)
        {
            return "line " + std::to_string(line_no);
        }
    } // namespace

    PriceSeries parse_prices_csv(std::istream &in)
    {
        std::string line;
        std::size_t line_no = 0;
        std::vector<std::string> header;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            header = detail::split_csv_line(line);
            break;
        }
        if (header.empty())
            throw FormatError("price file is empty");
        if (header.front() != "date")
            throw FormatError(where(line_no) + ": first column must be 'date'");
        if (header.size() < 2)
            throw FormatError(where(line_no) + ": header names no tickers");

        PriceSeries series;
        series.asset_labels.assign(header.begin() + 1, header.end());
        if (std::set<std::string>(series.asset_labels.begin(), series.asset_labels.end()).size() !=
            series.asset_labels.size())
            throw FormatError(where(line_no) + ": duplicate ticker in header");
        for (const auto &label : series.asset_labels)
            if (label.empty())
                throw FormatError(where(line_no) + ": empty ticker in header");

        while (std::getline(in, line))
        {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            const auto fields = detail::split_csv_line(line);
            if (fields.size() != header.size())
                throw FormatError(where(line_no) + ": expected " + std::to_string(header.size()) +
                                  " fields, got " + std::to_string(fields.size()));
            const auto &date = fields.front();
            if (!is_iso_date(date))
                throw FormatError(where(line_no) + ": invalid date '" + date + "'");
            if (!series.dates.empty())
            {
                // ISO-8601 dates order lexicographically.
                if (date == series.dates.back())
                    throw FormatError(where(line_no) + ": duplicate date " + date);
                if (date < series.dates.back())
                    throw FormatError(where(line_no) + ": date " + date + " is earlier than " + series.dates.back());
            }
            series.dates.push_back(date);
            for (std::size_t i = 1; i < fields.size(); ++i)
            {
                double price = 0.0;
                if (fields[i].empty())
                    throw FormatError(where(line_no) + ", " + header[i] + ": missing price");
                if (!detail::parse_double(fields[i], price) || !std::isfinite(price))
                    throw FormatError(where(line_no) + ", " + header[i] + ": invalid price '" + fields[i] + "'");
                if (price <= 0.0)
                    throw FormatError(where(line_no) + ", " + header[i] + ": price must be positive, got " + fields[i]);
                series.prices.push_back(price);
            }
        }
        return series;
    }

    PriceSeries load_prices(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open price file " + path.string());
        return parse_prices_csv(in);
    }

    ScenarioSet weekly_returns(const PriceSeries &series)
    {
        const std::size_t rows = series.num_dates();
        const std::size_t assets = series.num_assets();
        if (assets == 0 || series.prices.size() != rows * assets)
            throw DimensionError("price matrix does not match dates x tickers");
        if (rows < kTradingDaysPerWeek + 1)
            throw InsufficientDataError("need at least " + std::to_string(kTradingDaysPerWeek + 1) +
                                        " trading days for one weekly return, got " + std::to_string(rows));

        const std::size_t weeks = (rows - 1) / kTradingDaysPerWeek;
        std::vector<double> returns(weeks * assets);
        for (std::size_t k = 0; k < weeks; ++k)
        {
            const std::size_t start = k * kTradingDaysPerWeek;
            const std::size_t end = start + kTradingDaysPerWeek;
            for (std::size_t a = 0; a < assets; ++a)
                returns[k * assets + a] = series.at(end, a) / series.at(start, a) - 1.0;
        }
        std::vector<double> probs(weeks, 1.0 / static_cast<double>(weeks));
        return ScenarioSet(std::move(returns), weeks, assets, std::move(probs), series.asset_labels);
    }

} // namespace scenopt
