// swap_analytics.hpp
// Closed-form outcome probabilities, success rates and fidelities of the
// repeat-until-success Bell-state measurement.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "rusq/detector.hpp"

namespace rusq {

/// Outcome probabilities of one measurement round on the double-encoded pair.
struct AnalyticProbs
{
    double p11 = 0.0;    // two different detectors click
    double p20 = 0.0;    // both photons registered at one detector
    double p10_1 = 0.0;  // one click, photons were heading to the same detector
    double p10_2 = 0.0;  // one click, photons were heading to different detectors
    double p00 = 0.0;    // no click

    double p10() const { return p10_1 + p10_2; }
    double total() const { return p11 + p20 + p10_1 + p10_2 + p00; }
};

namespace detail {
inline void check_eta_mu(double eta, double mu)
{
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in [0, 1]");
    if (!(mu >= 0.0 && mu <= eta))
        throw std::invalid_argument("mu must lie in [0, eta]");
}
}  // namespace detail

inline AnalyticProbs outcome_probs(double eta, double mu)
{
    detail::check_eta_mu(eta, mu);
    AnalyticProbs p;
    p.p11 = 0.5 * eta * eta;
    p.p20 = 0.5 * eta * mu;
    p.p10_1 = 0.5 * eta * (1.0 - mu) + 0.5 * (1.0 - eta) * eta;
    p.p10_2 = eta * (1.0 - eta);
    p.p00 = (1.0 - eta) * (1.0 - eta);
    return p;
}

/// Success probability of the basic protocol, eta^2 / (2 - eta mu).
inline double p_succ_basic(double eta, double mu)
{
    detail::check_eta_mu(eta, mu);
    return eta * eta / (2.0 - eta * mu);
}

inline double p_succ_basic(const DetectorModel& detector)
{
    return p_succ_basic(detector.efficiency(), detector.resolution());
}

/// Metrics of the modified protocol that repeats on single clicks.
struct ModifiedMetrics
{
    // Printed closed forms.
    double p_succ = 0.0;    // eta / (4 - 3 eta)
    double p_error = 0.0;   // 2 (1 - eta) / (4 - 3 eta)
    double fidelity = 0.0;  // eta / (2 - eta)
    // The recursions P = P11 + P10 P and F = P11 + P10(1) F solved literally
    // at mu = 0; these do not reduce to the printed forms.
    double recursion_p_succ = 0.0;    // eta^2 / (2 - 4 eta + 3 eta^2)
    double recursion_fidelity = 0.0;  // eta^2 / (2 - 2 eta + eta^2)

    double qber() const { return 0.5 * p_error; }
};

inline ModifiedMetrics modified_metrics(double eta)
{
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("modified_metrics: eta must lie in (0, 1]");
    const AnalyticProbs p = outcome_probs(eta, 0.0);
    ModifiedMetrics m;
    m.p_succ = eta / (4.0 - 3.0 * eta);
    m.p_error = 2.0 * (1.0 - eta) / (4.0 - 3.0 * eta);
    m.fidelity = eta / (2.0 - eta);
    m.recursion_p_succ = p.p11 / (1.0 - p.p10());
    m.recursion_fidelity = p.p11 / (1.0 - p.p10_1);
    return m;
}

/// Effective resolution of a depth-N splitter tree, eta (1 - 2^-N).
inline double branching_resolution(double eta, BranchingDepth depth)
{
    return eta * (1.0 - depth.same_leaf_probability());
}

inline double p_succ_branching(double eta, BranchingDepth depth)
{
    return p_succ_basic(eta, branching_resolution(eta, depth));
}

/// Smallest eta with p_succ_branching > 1/2: sqrt(2 / (3 - 2^-N)).
/// No threshold exists below eta = 1 without branching.
inline std::optional<double> threshold_eta(BranchingDepth depth)
{
    if (!depth.is_infinite() && depth.levels() == 0)
        return std::nullopt;
    return std::sqrt(2.0 / (3.0 - depth.same_leaf_probability()));
}

/// Same threshold by bisection on p_succ_branching(eta) = 1/2.
inline std::optional<double> threshold_eta_bisection(BranchingDepth depth, double tol = 1e-13)
{
    auto excess = [&](double eta) { return p_succ_branching(eta, depth) - 0.5; };
    if (excess(1.0) <= 0.0)
        return std::nullopt;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > tol)
    {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rusq
