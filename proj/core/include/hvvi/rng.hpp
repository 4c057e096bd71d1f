#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace hvvi {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

} // namespace detail

/// Counter-based random stream keyed by (seed, label). Every draw is a pure
/// function of (key, index, slot), so batches can be partitioned across
/// workers in any order and still reproduce bit-identical values.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string_view label) {
        std::uint64_t h = 0xCBF29CE484222325ull;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ull;
        }
        key_ = detail::mix64(detail::mix64(seed + detail::kGolden) ^ h);
    }

    std::uint64_t bits(std::uint64_t index, std::uint64_t slot = 0) const {
        return detail::mix64(key_ ^ detail::mix64(index * detail::kGolden + 1) ^
                             detail::mix64(slot * 0xD1B54A32D192ED03ull + 2));
    }

    /// Uniform in [0, 1).
    double uniform(std::uint64_t index, std::uint64_t slot = 0) const {
        return static_cast<double>(bits(index, slot) >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes slots (2*slot, 2*slot+1).
    double normal(std::uint64_t index, std::uint64_t slot = 0) const {
        // (bits>>11)+1 keeps u1 in (0,1] so the log is finite.
        const double u1 =
            static_cast<double>((bits(index, 2 * slot) >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform(index, 2 * slot + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Derive a child seed, e.g. one per suite.
    std::uint64_t child(std::string_view label) const {
        RandomStream s(key_, label);
        return s.key_;
    }

private:
    std::uint64_t key_;
};

} // namespace hvvi
