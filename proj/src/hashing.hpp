#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace d2d::detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_words(std::initializer_list<std::uint64_t> words)
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t w : words)
        h = splitmix64(h ^ w);
    return h;
}

// Uniform in (0, 1] from the top 53 bits.
inline double unit_open(std::uint64_t h)
{
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform in [0, 1).
inline double unit(std::uint64_t h)
{
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Counter-based generator usable as a UniformRandomBitGenerator.
class SplitMix {
public:
    using result_type = std::uint64_t;
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return unit((*this)()); }
    double normal();

private:
    std::uint64_t state_;
};

// Ziggurat tables (Marsaglia-Tsang layout, 128 layers, Doornik's variant).
struct ZigguratTables {
    static constexpr int kLayers = 128;
    static constexpr double kR = 3.442619855899;
    static constexpr double kV = 9.91256303526217e-3;
    double x[kLayers + 1];
    double ratio[kLayers];

    ZigguratTables()
    {
        const double f = std::exp(-0.5 * kR * kR);
        x[0] = kV / f;
        x[1] = kR;
        x[kLayers] = 0.0;
        for (int i = 2; i < kLayers; ++i)
            x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + std::exp(-0.5 * x[i - 1] * x[i - 1])));
        for (int i = 0; i < kLayers; ++i)
            ratio[i] = x[i + 1] / x[i];
    }
};

inline const ZigguratTables& ziggurat()
{
    static const ZigguratTables t;
    return t;
}

// Standard normal deviate fully determined by h.
inline double normal_from_hash(std::uint64_t h)
{
    const ZigguratTables& z = ziggurat();
    SplitMix g(h);
    for (;;) {
        const std::uint64_t bits = g();
        const int i = static_cast<int>(bits & 0x7f);
        const double u = 2.0 * unit(bits) - 1.0;
        if (std::abs(u) < z.ratio[i])
            return u * z.x[i];
        if (i == 0) {
            double x;
            double y;
            do {
                x = std::log(unit_open(g())) / ZigguratTables::kR;
                y = std::log(unit_open(g()));
            } while (-2.0 * y < x * x);
            return u < 0.0 ? x - ZigguratTables::kR : ZigguratTables::kR - x;
        }
        const double xx = u * z.x[i];
        const double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - xx * xx));
        const double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - xx * xx));
        if (f1 + unit(g()) * (f0 - f1) < 1.0)
            return xx;
    }
}

inline double SplitMix::normal()
{
    return normal_from_hash((*this)());
}

// Hash of a link between two ids under a per-endpoint prefix.
inline std::uint64_t link_hash(std::uint64_t prefix, std::uint64_t other)
{
    return splitmix64(prefix ^ splitmix64(other));
}

}  // namespace d2d::detail
