// chain_model.hpp
// Entanglement distribution rate of a nested multiple-memory repeater chain.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rusq/detector.hpp"
#include "rusq/swap_analytics.hpp"

namespace rusq {

inline constexpr int kDefaultMaxNesting = 12;

/// Success probability of elementary entanglement distribution over L0.
inline double ps_model(double segment_km, double attenuation_km, double prefactor = 0.1)
{
    if (!(segment_km > 0.0) || !(attenuation_km > 0.0))
        throw std::invalid_argument("ps_model: lengths must be positive");
    return prefactor * std::exp(-segment_km / attenuation_km);
}

/*!
 * Chain of 2^n segments of length L0 = L / 2^n with the same swap success
 * probability at every nesting level. Lengths in km, light speed in km/s.
 */
struct ChainConfig
{
    double distance_km = 1000.0;
    int nesting = 0;
    double attenuation_km = 25.0;
    double light_speed_km_s = 2e5;
    double source_prefactor = 0.1;
    double swap_success = 0.5;

    double segment_km() const { return std::ldexp(distance_km, -nesting); }
    double round_time_s() const { return segment_km() / light_speed_km_s; }
    double source_success() const
    {
        return ps_model(segment_km(), attenuation_km, source_prefactor);
    }

    void validate() const
    {
        if (!(distance_km > 0.0))
            throw std::invalid_argument("chain: distance must be positive");
        if (nesting < 0)
            throw std::invalid_argument("chain: nesting level must be >= 0");
        if (!(attenuation_km > 0.0) || !(light_speed_km_s > 0.0))
            throw std::invalid_argument("chain: attenuation length and light speed must be positive");
        if (!(source_prefactor > 0.0 && source_prefactor <= 1.0))
            throw std::invalid_argument("chain: source prefactor must lie in (0, 1]");
        if (!(swap_success >= 0.0 && swap_success <= 1.0))
            throw std::invalid_argument("chain: swap success must lie in [0, 1]");
    }
};

/// Entangled pairs per second per logical memory: P_S P_succ^n / (2 L / c).
inline double entanglement_rate(const ChainConfig& config)
{
    config.validate();
    return config.source_success() * std::pow(config.swap_success, config.nesting)
           / (2.0 * config.distance_km / config.light_speed_km_s);
}

/// Chain whose swaps use the RUS measurement with a depth-N splitter tree
/// (N = 0 reproduces the conventional linear-optics BSM).
inline ChainConfig chain_for_branching(double distance_km,
                                       double eta,
                                       BranchingDepth depth,
                                       ChainConfig base = {})
{
    base.distance_km = distance_km;
    base.swap_success = p_succ_branching(eta, depth);
    return base;
}

struct NestingOptimum
{
    int nesting = 0;
    double rate = 0.0;
};

/// argmax of the rate over n in [0, max_nesting]; ties go to the smaller n.
inline NestingOptimum optimize_nesting(const ChainConfig& config_template,
                                       int max_nesting = kDefaultMaxNesting)
{
    if (max_nesting < 0)
        throw std::invalid_argument("optimize_nesting: max_nesting must be >= 0");
    NestingOptimum best{-1, -1.0};
    for (int n = 0; n <= max_nesting; ++n)
    {
        ChainConfig c = config_template;
        c.nesting = n;
        const double rate = entanglement_rate(c);
        if (rate > best.rate)
            best = {n, rate};
    }
    return best;
}

struct SweepRow
{
    double distance_km = 0.0;
    BranchingDepth depth;
    int nesting = 0;
    double rate = 0.0;
};

/// Optimized rate for every (distance, branching depth) pair, distance-major.
inline std::vector<SweepRow> sweep_distance(const std::vector<double>& distances_km,
                                            const std::vector<BranchingDepth>& depths,
                                            double eta,
                                            const ChainConfig& base = {},
                                            int max_nesting = kDefaultMaxNesting)
{
    if (distances_km.empty() || depths.empty())
        throw std::invalid_argument("sweep_distance: empty distance or variant list");
    std::vector<SweepRow> rows;
    for (double L : distances_km)
    {
        for (const auto& d : depths)
        {
            const auto opt = optimize_nesting(chain_for_branching(L, eta, d, base), max_nesting);
            rows.push_back({L, d, opt.nesting, opt.rate});
        }
    }
    return rows;
}

/// CSV label of a chain variant.
inline std::string variant_label(BranchingDepth d)
{
    if (!d.is_infinite() && d.levels() == 0)
        return "non-RUS";
    return "N=" + d.to_string();
}

}  // namespace rusq
