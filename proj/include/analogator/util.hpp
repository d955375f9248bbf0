#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace analogator {

inline constexpr std::string_view kToolVersion = "analogator 1.0.0";

/// Seeded random source. Wraps mt19937_64 with explicit integer-to-real
/// mappings so draws do not depend on the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (-half, +half); zero-width endpoints are excluded.
    double symmetric(double half) {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return (2.0 * u - 1.0) * half;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Derive an independent stream seed from a base seed and a tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(std::span<const double> values, std::uint64_t basis = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

/// Shortest round-trip decimal (locale independent).
std::string format_real(double value);
/// Fixed 17 significant digits, scientific when needed (locale independent).
std::string format_real17(double value);
/// Parse a real without consulting the locale. Throws std::invalid_argument.
double parse_real(std::string_view text);
long long parse_integer(std::string_view text);

std::vector<std::string> split_ws(std::string_view line);

}  // namespace analogator
