#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace scenopt::detail
{

    /// Neumaier compensated accumulator.
    class CompensatedSum
    {
    public:
        void add(double value) noexcept
        {
            const double t = sum_ + value;
            if (std::abs(sum_) >= std::abs(value))
                compensation_ += (sum_ - t) + value;
            else
                compensation_ += (value - t) + sum_;
            sum_ = t;
        }

        double value() const noexcept { return sum_ + compensation_; }

    private:
        double sum_ = 0.0;
        double compensation_ = 0.0;
    };

    /// Shortest decimal text that parses back to the same double.
    std::string format_double(double value);

    /// Strict full-string double parse; returns false on any trailing junk.
    bool parse_double(std::string_view text, double &out);

    /// Splits one CSV line on commas and trims surrounding whitespace and a
    /// trailing carriage return. Quoted fields are not supported.
    std::vector<std::string> split_csv_line(std::string_view line);

} // namespace scenopt::detail
