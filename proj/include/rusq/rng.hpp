// rng.hpp
// Counter-based random streams: one independent stream per Monte Carlo trial.

#pragma once

#include <cstdint>

namespace rusq {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/*!
 * Stream keyed by (seed, trial). The k-th draw is a pure function of
 * (seed, trial, k), so changing the number of trials never shifts the draws
 * of earlier trials and trials can be evaluated in any order.
 */
class TrialStream
{
  public:
    TrialStream(std::uint64_t seed, std::uint64_t trial)
        : key_(mix64(seed ^ mix64(trial ^ 0xD1B54A32D192ED03ull)))
    {
    }

    std::uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t draws() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rusq
