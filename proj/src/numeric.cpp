#include "scenopt/detail/numeric.hpp"

#include <array>
#include <charconv>

namespace scenopt::detail
{

    std::string format_double(double value)
    {
        std::array<char, 64> buffer{};
        const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
        return std::string(buffer.data(), result.ptr);
    }

    bool parse_double(std::string_view text, double &out)
    {
        if (!text.empty() && text.front() == '+')
            text.remove_prefix(1);
        if (text.empty())
            return false;
        const auto result = std::from_chars(text.data(), text.data() + text.size(), out);
        return result.ec == std::errc{} && result.ptr == text.data() + text.size();
    }

    namespace
    {
        std::string_view trim(std::string_view s)
        {
            constexpr std::string_view ws = " \t\r\n";
            const auto first = s.find_first_not_of(ws);
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(ws);
            return s.substr(first, last - first + 1);
        }
    } // namespace

    std::vector<std::string> split_csv_line(std::string_view line)
    {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true)
        {
            const auto comma = line.find(',', start);
            const auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            fields.emplace_back(trim(field));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        return fields;
    }

} // namespace scenopt::detail
