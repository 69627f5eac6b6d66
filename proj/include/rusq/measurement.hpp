// measurement.hpp
// Lossy photodetection of every photonic mode, leaving memory-only states.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rusq/detector.hpp"
#include "rusq/hybrid_state.hpp"

namespace rusq {

using DetectorId = int;

/// Registered photon count per detector; detectors without a count are absent.
using ClickPattern = std::map<DetectorId, int>;

/// Mode label -> detector receiving that mode.
using DetectorMap = std::map<std::string, DetectorId>;

struct MeasurementBranch
{
    ClickPattern pattern;
    double probability = 0.0;
    WeightedEnsemble memory;  // conditional, weights sum to one
};

inline int registered_photons(const ClickPattern& pattern)
{
    int n = 0;
    for (const auto& kv : pattern)
        n += kv.second;
    return n;
}

inline std::string to_string(const ClickPattern& pattern)
{
    std::string s = "{";
    bool first = true;
    for (const auto& [d, n] : pattern)
    {
        if (!first)
            s += ", ";
        s += "D" + std::to_string(d) + ":" + std::to_string(n);
        first = false;
    }
    return s + "}";
}

namespace detail {

struct Survival
{
    double probability;
    std::vector<std::uint16_t> modes;
};

// Each photon reaches its detector independently with probability eta.
inline std::vector<Survival> survivals(const Occupation& occ, double eta)
{
    const auto m0 = occ.modes[0];
    const auto m1 = occ.modes[1];
    const double loss = 1.0 - eta;
    if (m0 == Occupation::kEmpty)
        return {{1.0, {}}};
    if (m1 == Occupation::kEmpty)
        return {{eta, {m0}}, {loss, {}}};
    if (m0 == m1)
        return {{eta * eta, {m0, m0}}, {2.0 * eta * loss, {m0}}, {loss * loss, {}}};
    return {{eta * eta, {m0, m1}}, {eta * loss, {m0}}, {loss * eta, {m1}}, {loss * loss, {}}};
}

inline std::vector<std::pair<double, ClickPattern>> registrations(
    const std::vector<std::uint16_t>& arrived,
    const std::vector<DetectorId>& detector_of_mode,
    const DetectorModel& detector)
{
    std::map<DetectorId, int> counts;
    for (auto m : arrived)
        ++counts[detector_of_mode[m]];
    std::vector<std::pair<double, ClickPattern>> out{{1.0, {}}};
    for (const auto& [det, n] : counts)
    {
        std::vector<std::pair<double, ClickPattern>> next;
        for (const auto& [p, pattern] : out)
        {
            if (n == 1)
            {
                auto q = pattern;
                q[det] = 1;
                next.emplace_back(p, std::move(q));
                continue;
            }
            const double both = detector.both_registered_probability();
            if (both > 0.0)
            {
                auto q = pattern;
                q[det] = 2;
                next.emplace_back(p * both, std::move(q));
            }
            if (both < 1.0)
            {
                auto q = pattern;
                q[det] = 1;
                next.emplace_back(p * (1.0 - both), std::move(q));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace detail

/*!
 * Loss of efficiency eta in front of every detector, then counting.
 *
 * Distinct photonic occupations never interfere after detection (each one
 * leaves a different loss record or count), so the conditional memory state
 * for a pattern is the mixture of the memory vectors <occ|psi> weighted by
 * P(pattern | occ). Equal memory states are merged.
 */
inline std::vector<MeasurementBranch> measure_photons(const WeightedEnsemble& input,
                                                      const DetectorMap& detectors,
                                                      const DetectorModel& detector)
{
    if (detectors.empty())
        throw std::invalid_argument("measure_photons: empty detector map");
    std::map<ClickPattern, WeightedEnsemble> by_pattern;

    for (const auto& member : input.members())
    {
        const HybridState& state = member.state;
        std::vector<DetectorId> detector_of_mode(state.num_modes(), -1);
        for (const auto& [label, id] : detectors)
            if (state.has_mode(label))
                detector_of_mode[state.mode_index(label)] = id;

        std::map<Occupation, HybridState::Amplitudes> by_occupation;
        for (const auto& [key, amp] : state.amplitudes())
        {
            for (auto m : key.photons.modes)
                if (m != Occupation::kEmpty && detector_of_mode[m] < 0)
                    throw std::invalid_argument("measure_photons: mode '"
                                                + state.mode_labels()[m]
                                                + "' is not covered by a detector");
            by_occupation[key.photons][BasisKey{key.memory, Occupation{}}] += amp;
        }

        for (auto& [occ, amps] : by_occupation)
        {
            double weight = 0.0;
            for (const auto& kv : amps)
                weight += std::norm(kv.second);
            if (weight < kPruneThreshold * kPruneThreshold)
                continue;
            const HybridState memory(state.memory_labels(), {}, std::move(amps),
                                     state.max_photons());
            for (const auto& s : detail::survivals(occ, detector.efficiency()))
            {
                if (s.probability == 0.0)
                    continue;
                for (const auto& [p, pattern] :
                     detail::registrations(s.modes, detector_of_mode, detector))
                {
                    const double w = member.weight * weight * s.probability * p;
                    if (w > 0.0)
                        by_pattern[pattern].add_merged(w, memory);
                }
            }
        }
    }

    std::vector<MeasurementBranch> out;
    for (auto& [pattern, ens] : by_pattern)
    {
        const double p = ens.total_weight();
        out.push_back({pattern, p, ens.normalized()});
    }
    return out;
}

inline std::vector<MeasurementBranch> measure_photons(const HybridState& state,
                                                      const DetectorMap& detectors,
                                                      const DetectorModel& detector)
{
    return measure_photons(WeightedEnsemble(state), detectors, detector);
}

}  // namespace rusq
