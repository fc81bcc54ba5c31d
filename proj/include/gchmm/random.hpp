#ifndef GCHMM_RANDOM_HPP
#define GCHMM_RANDOM_HPP

#include <cstdint>
#include <random>

namespace gchmm {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p)
{
    return uniform01(rng) < p;
}

inline double beta_draw(Rng& rng, double a, double b)
{
    double x = std::gamma_distribution<double>(a, 1.0)(rng);
    double y = std::gamma_distribution<double>(b, 1.0)(rng);
    if (x + y == 0.0)
        return a / (a + b);
    return x / (x + y);
}

// SplitMix64 finalizer, used to derive independent per-task seeds from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
{
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace gchmm

#endif
