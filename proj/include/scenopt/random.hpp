#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace scenopt
{

    /// Seeded random source. Draws are derived from the raw 64-bit engine
    /// output so a seed reproduces the same stream on every standard library.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        /// Uniform on [0, 1).
        double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        /// Uniform integer in [0, n). n must be positive.
        std::size_t index(std::size_t n)
        {
            const std::uint64_t range = n;
            const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
            std::uint64_t draw = engine_();
            while (draw >= limit)
                draw = engine_();
            return static_cast<std::size_t>(draw % range);
        }

        bool bernoulli(double p) { return uniform01() < p; }

    private:
        std::mt19937_64 engine_;
    };

} // namespace scenopt
