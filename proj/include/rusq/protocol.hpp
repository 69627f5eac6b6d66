// protocol.hpp
// Repeat-until-success entanglement swapping at a single repeater node:
// double encoding, swap unitaries, node measurement with local frame
// correction, an exact round-by-round evaluator and a Monte Carlo sampler.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rusq/detector.hpp"
#include "rusq/hybrid_state.hpp"
#include "rusq/optical_bench.hpp"
#include "rusq/rng.hpp"

namespace rusq {

inline const std::string kQubitA = "A";
inline const std::string kQubitAp = "A'";
inline const std::string kQubitB = "B";
inline const std::string kQubitBp = "B'";

/// Pairs A-A' and B-B' each in |01> + |10>.
inline HybridState initial_memory_state()
{
    const double h = 0.5;
    return make_state({kQubitA, kQubitAp, kQubitB, kQubitBp}, {},
                      {{"0101", {}, h}, {"0110", {}, h}, {"1001", {}, h}, {"1010", {}, h}});
}

/// (|01> + |10>)/sqrt2 on A, B.
inline HybridState bell_target()
{
    const double s = 1.0 / std::sqrt(2.0);
    return make_state({kQubitA, kQubitB}, {}, {{"01", {}, s}, {"10", {}, s}});
}

//---------------------------------------------------------------------------//
// Double encoding and swap unitaries
//---------------------------------------------------------------------------//

/// a|0> + b|1> on the qubit becomes a|0,V> + b|1,H> with a fresh photon on `path`.
inline HybridState double_encode(const HybridState& state,
                                 const std::string& qubit,
                                 const std::string& path)
{
    const auto h_label = mode_label(path, Polarization::H);
    const auto v_label = mode_label(path, Polarization::V);
    std::vector<std::string> missing;
    for (const auto& label : {h_label, v_label})
    {
        if (!state.has_mode(label))
            missing.push_back(label);
        else if (state.mode_occupied(state.mode_index(label)))
            throw std::invalid_argument("double_encode: mode '" + label + "' is occupied");
    }
    const HybridState base = state.with_modes(missing);
    const std::uint32_t mask = base.qubit_mask(base.qubit_index(qubit));
    const auto h = base.mode_index(h_label);
    const auto v = base.mode_index(v_label);
    HybridState::Amplitudes out;
    for (const auto& [key, amp] : base.amplitudes())
    {
        BasisKey k = key;
        if (!k.photons.add((key.memory & mask) ? h : v)
            || k.photons.photon_count() > base.max_photons())
            throw std::invalid_argument("double_encode: photon number exceeds max_photons");
        out[k] += amp;
    }
    return HybridState::from_unnormalized(base, std::move(out));
}

/// Diagonal of U_i in the |00>,|01>,|10>,|11> basis of (A', B').
inline std::array<Complex, 4> swap_unitary_diagonal(int i)
{
    const Complex j{0, 1};
    switch (i)
    {
        case 1: return {1.0, 1.0, 1.0, 1.0};
        case 2: return {1.0, -1.0, -1.0, 1.0};
        case 3: return {-1.0, -j, j, 1.0};
        case 4: return {1.0, -j, j, -1.0};
        default: throw std::invalid_argument("swap unitary index must be 1..4");
    }
}

inline HybridState apply_swap_unitary(int i, const HybridState& state)
{
    const auto diag = swap_unitary_diagonal(i);
    const std::uint32_t ma = state.qubit_mask(state.qubit_index(kQubitAp));
    const std::uint32_t mb = state.qubit_mask(state.qubit_index(kQubitBp));
    HybridState::Amplitudes out;
    for (const auto& [key, amp] : state.amplitudes())
    {
        const int idx = ((key.memory & ma) ? 2 : 0) + ((key.memory & mb) ? 1 : 0);
        out[key] = diag[idx] * amp;
    }
    return HybridState::from_unnormalized(state, std::move(out));
}

//---------------------------------------------------------------------------//
// Local frames
//---------------------------------------------------------------------------//

struct Clifford
{
    std::string label;
    Matrix2 matrix;
};

namespace detail {
inline bool equal_up_to_phase(const Matrix2& a, const Matrix2& b)
{
    Complex tr{};
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            tr += std::conj(a[i][k]) * b[i][k];
    return std::abs(std::abs(tr) - 2.0) < 1e-9;
}
}  // namespace detail

/// The 24 single-qubit Cliffords modulo phase; Paulis I, X, Y, Z come first.
inline const std::vector<Clifford>& single_qubit_cliffords()
{
    static const std::vector<Clifford> group = [] {
        std::vector<Clifford> g{{"I", identity2()},
                                {"X", gates::pauli_x()},
                                {"Y", gates::pauli_y()},
                                {"Z", gates::pauli_z()}};
        auto known = [&](const Matrix2& m) {
            return std::any_of(g.begin(), g.end(), [&](const Clifford& c) {
                return detail::equal_up_to_phase(c.matrix, m);
            });
        };
        std::vector<Clifford> frontier = g;
        const std::array<Clifford, 2> generators{Clifford{"H", gates::hadamard()},
                                                 Clifford{"S", gates::phase_s()}};
        while (!frontier.empty())
        {
            std::vector<Clifford> next;
            for (const auto& c : frontier)
            {
                for (const auto& gen : generators)
                {
                    const Matrix2 m = multiply(gen.matrix, c.matrix);
                    if (known(m))
                        continue;
                    const std::string label =
                        c.label == "I" ? gen.label : gen.label + "*" + c.label;
                    g.push_back({label, m});
                    next.push_back(g.back());
                }
            }
            frontier = std::move(next);
        }
        return g;
    }();
    return group;
}

/// Local corrections applied to A and B.
struct LocalFrame
{
    Clifford a;
    Clifford b;

    std::string to_string() const { return a.label + "(A) " + b.label + "(B)"; }
};

inline HybridState apply_frame(const HybridState& ab, const LocalFrame& frame)
{
    return apply_qubit_gate(apply_qubit_gate(ab, kQubitA, frame.a.matrix), kQubitB,
                            frame.b.matrix);
}

inline double fidelity_to_bell(const WeightedEnsemble& ab)
{
    const HybridState target = bell_target();
    double f = 0.0;
    for (const auto& m : ab.members())
        f += m.weight * fidelity(target, m.state);
    return f / ab.total_weight();
}

/// Sign of a |0 +- 1> measurement result.
enum class NodeSign { Plus, Minus };

inline std::array<Complex, 2> node_basis_vector(NodeSign s)
{
    const double r = 1.0 / std::sqrt(2.0);
    return {r, s == NodeSign::Plus ? r : -r};
}

struct NodeBranch
{
    NodeSign sign_a = NodeSign::Plus;  // result on A'
    NodeSign sign_b = NodeSign::Plus;  // result on B'
    double probability = 0.0;
    LocalFrame frame;
    WeightedEnsemble ab;          // corrected, conditional
    double fidelity = 0.0;        // to |01> + |10>
    double worst_fidelity = 0.0;  // minimum over ensemble members
};

namespace detail {

struct Projected
{
    double probability = 0.0;
    std::optional<HybridState> ab;
};

inline Projected project_node(const HybridState& memory, NodeSign sa, NodeSign sb)
{
    const auto first = project_qubit(memory, kQubitAp, node_basis_vector(sa));
    if (!first.remaining)
        return {};
    const auto second = project_qubit(*first.remaining, kQubitBp, node_basis_vector(sb));
    if (!second.remaining)
        return {};
    return {first.probability * second.probability, second.remaining};
}

struct FrameTable
{
    // [chi3 | chi4][sign A'][sign B']
    std::array<std::array<std::array<LocalFrame, 2>, 2>, 2> frames;
};

inline const FrameTable& frame_table();

}  // namespace detail

/// Correction for (entangling outcome, node results).
inline const LocalFrame& frame_for(OutcomeTag tag, NodeSign sa, NodeSign sb)
{
    if (tag != OutcomeTag::Chi3 && tag != OutcomeTag::Chi4)
        throw std::invalid_argument("frame_for: not an entangling outcome");
    return detail::frame_table()
        .frames[tag == OutcomeTag::Chi3 ? 0 : 1][sa == NodeSign::Plus ? 0 : 1]
               [sb == NodeSign::Plus ? 0 : 1];
}

/*!
 * Measure A' and B' in the |0 +- 1> basis and correct A, B with the frame
 * looked up for the outcome. All four results are returned.
 */
inline std::vector<NodeBranch> node_measure_and_correct(const WeightedEnsemble& memory,
                                                        SwapOutcome outcome)
{
    if (!outcome.entangling())
        throw std::invalid_argument("node_measure_and_correct: outcome " + to_string(outcome)
                                    + " does not complete the swap");
    const HybridState target = bell_target();
    std::vector<NodeBranch> out;
    for (NodeSign sa : {NodeSign::Plus, NodeSign::Minus})
    {
        for (NodeSign sb : {NodeSign::Plus, NodeSign::Minus})
        {
            NodeBranch branch;
            branch.sign_a = sa;
            branch.sign_b = sb;
            branch.frame = frame_for(outcome.tag, sa, sb);
            branch.worst_fidelity = 1.0;
            double fid_mass = 0.0;
            for (const auto& m : memory.members())
            {
                const auto proj = detail::project_node(m.state, sa, sb);
                if (!proj.ab)
                    continue;
                const double w = m.weight * proj.probability;
                HybridState corrected = apply_frame(*proj.ab, branch.frame);
                const double f = fidelity(target, corrected);
                fid_mass += w * f;
                branch.worst_fidelity = std::min(branch.worst_fidelity, f);
                branch.ab.add_merged(w, std::move(corrected));
            }
            branch.probability = branch.ab.total_weight();
            if (branch.probability <= 0.0)
                continue;
            branch.fidelity = fid_mass / branch.probability;
            branch.ab = branch.ab.normalized();
            out.push_back(std::move(branch));
        }
    }
    return out;
}

inline std::vector<NodeBranch> node_measure_and_correct(const HybridState& memory,
                                                        SwapOutcome outcome)
{
    return node_measure_and_correct(WeightedEnsemble(memory), outcome);
}

//---------------------------------------------------------------------------//
// Variants and the per-round kernel
//---------------------------------------------------------------------------//

enum class VariantKind { Basic, ModifiedErrors, Branching };

struct ProtocolVariant
{
    VariantKind kind = VariantKind::Basic;
    int levels = 0;  // branching depth, Branching only

    static ProtocolVariant basic() { return {VariantKind::Basic, 0}; }
    static ProtocolVariant modified() { return {VariantKind::ModifiedErrors, 0}; }
    static ProtocolVariant branching(int levels)
    {
        if (levels < 0 || levels > kMaxBranchingLevels)
            throw std::invalid_argument("branching depth out of range");
        return {VariantKind::Branching, levels};
    }

    std::string name() const
    {
        switch (kind)
        {
            case VariantKind::Basic: return "basic";
            case VariantKind::ModifiedErrors: return "modified";
            case VariantKind::Branching: return "branching(" + std::to_string(levels) + ")";
        }
        return "";
    }
};

inline void validate(const ProtocolVariant& variant, const DetectorModel& detector)
{
    if (variant.kind == VariantKind::ModifiedErrors && detector.kind() != DetectorKind::Threshold)
        throw std::invalid_argument(
            "the modified protocol repeats on single clicks and is only defined for "
            "threshold detectors");
    if (variant.kind == VariantKind::Branching && detector.kind() != DetectorKind::Threshold)
        throw std::invalid_argument("branching trees are built from threshold detectors");
}

enum class RoundAction { Success, Repeat, Abort };

inline RoundAction round_action(const ProtocolVariant& variant, SwapOutcome outcome)
{
    switch (outcome.tag)
    {
        case OutcomeTag::Chi3:
        case OutcomeTag::Chi4: return RoundAction::Success;
        case OutcomeTag::Chi1:
        case OutcomeTag::Chi2: return RoundAction::Repeat;
        case OutcomeTag::SingleClick:
            return variant.kind == VariantKind::ModifiedErrors ? RoundAction::Repeat
                                                               : RoundAction::Abort;
        case OutcomeTag::NoClick: return RoundAction::Abort;
    }
    return RoundAction::Abort;
}

/// Repeats read as chi2 (two photons, or a single click, on a V detector)
/// are undone with Z on A' and B'.
inline bool needs_restore(SwapOutcome outcome)
{
    return outcome.tag == OutcomeTag::Chi2
           || (outcome.tag == OutcomeTag::SingleClick && !is_horizontal_detector(outcome.detector));
}

inline HybridState restore_frame(const HybridState& memory)
{
    return apply_qubit_gate(apply_qubit_gate(memory, kQubitAp, gates::pauli_z()), kQubitBp,
                            gates::pauli_z());
}

/*!
 * One round of the protocol on a memory state: double encode A' and B',
 * measure in the mutually unbiased basis, classify. Results are cached per
 * memory state (up to global phase). Not thread-safe.
 */
class RoundKernel
{
  public:
    RoundKernel(ProtocolVariant variant, DetectorModel detector)
        : variant_(variant),
          detector_(detector),
          bench_(build_mub_bench(variant.kind == VariantKind::Branching ? variant.levels : 0))
    {
        validate(variant_, detector_);
    }

    const ProtocolVariant& variant() const { return variant_; }
    const DetectorModel& detector() const { return detector_; }
    const Bench& bench() const { return bench_; }

    const std::vector<OutcomeBranch>& transitions(const HybridState& memory)
    {
        for (const auto& [state, branches] : cache_)
            if (same_state(state, memory, kMergeTolerance))
                return branches;
        const HybridState encoded =
            double_encode(double_encode(memory, kQubitAp, kPathA), kQubitBp, kPathB);
        cache_.emplace_back(memory, simulate_bench(encoded, bench_, detector_));
        return cache_.back().second;
    }

    std::size_t cached_states() const { return cache_.size(); }

  private:
    ProtocolVariant variant_;
    DetectorModel detector_;
    Bench bench_;
    std::vector<std::pair<HybridState, std::vector<OutcomeBranch>>> cache_;
};

namespace detail {
inline const FrameTable& frame_table()
{
    static const FrameTable table = [] {
        FrameTable t;
        RoundKernel ideal(ProtocolVariant::basic(), DetectorModel::resolving(1.0));
        const HybridState target = bell_target();
        const auto& cliffords = single_qubit_cliffords();
        for (const auto& branch : ideal.transitions(initial_memory_state()))
        {
            if (!branch.outcome.entangling())
                continue;
            const int ti = branch.outcome.tag == OutcomeTag::Chi3 ? 0 : 1;
            const HybridState& memory = branch.memory.members().front().state;
            for (NodeSign sa : {NodeSign::Plus, NodeSign::Minus})
            {
                for (NodeSign sb : {NodeSign::Plus, NodeSign::Minus})
                {
                    const auto proj = project_node(memory, sa, sb);
                    bool found = false;
                    for (std::size_t ia = 0; ia < cliffords.size() && !found; ++ia)
                    {
                        for (std::size_t ib = 0; ib < cliffords.size() && !found; ++ib)
                        {
                            const LocalFrame f{cliffords[ia], cliffords[ib]};
                            if (fidelity(target, apply_frame(*proj.ab, f))
                                >= 1.0 - kStateEqualityTolerance)
                            {
                                t.frames[ti][sa == NodeSign::Plus ? 0 : 1]
                                        [sb == NodeSign::Plus ? 0 : 1] = f;
                                found = true;
                            }
                        }
                    }
                    if (!found)
                        throw std::logic_error("frame table: no local Clifford correction");
                }
            }
        }
        return t;
    }();
    return table;
}
}  // namespace detail

//---------------------------------------------------------------------------//
// Exact evaluation
//---------------------------------------------------------------------------//

inline constexpr int kDefaultMaxRounds = 64;
inline constexpr double kDefaultTolerance = 1e-12;

struct ExactOptions
{
    double tolerance = kDefaultTolerance;
    int max_rounds = 256;
};

struct ExactResult
{
    double p_success = 0.0;
    double p_abort = 0.0;
    double residual = 0.0;         // live mass left at the round cap
    double fidelity = 0.0;         // conditional on success
    double worst_fidelity = 1.0;   // minimum over every success branch member
    double expected_rounds = 0.0;  // capped trajectories count max_rounds
    int rounds_evaluated = 0;
    bool stationary = false;  // geometric tail summed in closed form
    bool converged = false;
    std::vector<double> success_by_round;  // explicit rounds only
};

namespace detail {
inline bool same_ensemble(const WeightedEnsemble& a, const WeightedEnsemble& b, double tol)
{
    if (a.size() != b.size())
        return false;
    const auto na = a.normalized();
    const auto nb = b.normalized();
    for (const auto& ma : na.members())
    {
        bool matched = false;
        for (const auto& mb : nb.members())
        {
            if (std::abs(ma.weight - mb.weight) <= tol && same_state(ma.state, mb.state, tol))
            {
                matched = true;
                break;
            }
        }
        if (!matched)
            return false;
    }
    return true;
}
}  // namespace detail

/*!
 * Evolve the live (repeat) ensemble round by round, moving mass into
 * success or abort. Stops when the live mass drops below the tolerance, or
 * when the normalized live ensemble repeats itself, in which case the
 * remaining geometric series is summed exactly.
 */
inline ExactResult exact_markov_eval(RoundKernel& kernel, ExactOptions options = {})
{
    if (!(options.tolerance > 0.0))
        throw std::invalid_argument("exact_markov_eval: tolerance must be positive");
    if (options.max_rounds < 1)
        throw std::invalid_argument("exact_markov_eval: max_rounds must be >= 1");

    ExactResult r;
    double fidelity_mass = 0.0;
    double rounds_mass = 0.0;
    WeightedEnsemble live(initial_memory_state());

    for (int round = 1; round <= options.max_rounds; ++round)
    {
        const double live_mass = live.total_weight();
        double success = 0.0;
        double abort = 0.0;
        double round_fidelity = 0.0;
        WeightedEnsemble next;
        for (const auto& member : live.members())
        {
            for (const auto& branch : kernel.transitions(member.state))
            {
                const double w = member.weight * branch.probability;
                switch (round_action(kernel.variant(), branch.outcome))
                {
                    case RoundAction::Success:
                    {
                        success += w;
                        for (const auto& nb : node_measure_and_correct(branch.memory, branch.outcome))
                        {
                            round_fidelity += w * nb.probability * nb.fidelity;
                            r.worst_fidelity = std::min(r.worst_fidelity, nb.worst_fidelity);
                        }
                        break;
                    }
                    case RoundAction::Repeat:
                        for (const auto& m : branch.memory.members())
                            next.add_merged(w * m.weight,
                                            needs_restore(branch.outcome) ? restore_frame(m.state)
                                                                          : m.state);
                        break;
                    case RoundAction::Abort: abort += w; break;
                }
            }
        }
        r.p_success += success;
        r.p_abort += abort;
        fidelity_mass += round_fidelity;
        rounds_mass += round * (success + abort);
        r.success_by_round.push_back(success);
        r.rounds_evaluated = round;

        const double next_mass = next.total_weight();
        if (next_mass < options.tolerance)
        {
            r.residual = next_mass;
            live = std::move(next);
            break;
        }
        const double q = next_mass / live_mass;
        if (q < 1.0 - 1e-15 && detail::same_ensemble(live, next, kMergeTolerance))
        {
            // Every later round repeats this one, scaled by q per round.
            const double s = success / live_mass;
            const double a = abort / live_mass;
            const double tail = next_mass / (1.0 - q);
            r.p_success += s * tail;
            r.p_abort += a * tail;
            fidelity_mass += (success > 0.0 ? round_fidelity / success : 0.0) * s * tail;
            rounds_mass += (s + a) * next_mass
                           * (round / (1.0 - q) + 1.0 / ((1.0 - q) * (1.0 - q)));
            r.stationary = true;
            r.residual = 0.0;
            live = WeightedEnsemble{};
            break;
        }
        live = std::move(next);
        r.residual = next_mass;
    }
    r.converged = r.residual < options.tolerance;
    r.fidelity = r.p_success > 0.0 ? fidelity_mass / r.p_success : 0.0;
    r.expected_rounds = rounds_mass + r.residual * options.max_rounds;
    return r;
}

inline ExactResult exact_markov_eval(const ProtocolVariant& variant,
                                     const DetectorModel& detector,
                                     ExactOptions options = {})
{
    RoundKernel kernel(variant, detector);
    return exact_markov_eval(kernel, options);
}

/// Exhaustive evaluation of run_protocol: the full outcome distribution,
/// truncated at max_rounds like the sampler.
inline ExactResult run_protocol_exhaustive(const ProtocolVariant& variant,
                                           const DetectorModel& detector,
                                           int max_rounds = kDefaultMaxRounds)
{
    return exact_markov_eval(variant, detector, {kDefaultTolerance, max_rounds});
}

//---------------------------------------------------------------------------//
// Sampling
//---------------------------------------------------------------------------//

enum class ProtocolStatus { Success, Abort };

struct ProtocolResult
{
    ProtocolStatus status = ProtocolStatus::Abort;
    bool capped = false;  // aborted because max_rounds was reached
    int rounds = 0;
    int restores = 0;  // Z(A') Z(B') frame restores applied along the way
    SwapOutcome last_outcome;
    std::optional<NodeSign> sign_a;
    std::optional<NodeSign> sign_b;
    std::optional<LocalFrame> frame;
    std::optional<HybridState> final_ab_state;  // after correction
    double fidelity_to_bell = 0.0;
};

/// One trajectory, drawing from the (seed, trial) stream.
inline ProtocolResult run_protocol(RoundKernel& kernel,
                                   std::uint64_t seed,
                                   std::uint64_t trial,
                                   int max_rounds = kDefaultMaxRounds)
{
    if (max_rounds < 1)
        throw std::invalid_argument("run_protocol: max_rounds must be >= 1");
    TrialStream rng(seed, trial);
    ProtocolResult result;
    HybridState memory = initial_memory_state();
    for (int round = 1; round <= max_rounds; ++round)
    {
        result.rounds = round;
        const auto& branches = kernel.transitions(memory);
        // Draw the outcome and, within it, which unobserved branch occurred.
        double u = rng.uniform();
        const OutcomeBranch* chosen = &branches.back();
        const HybridState* state = &chosen->memory.members().back().state;
        bool picked = false;
        for (const auto& b : branches)
        {
            for (const auto& m : b.memory.members())
            {
                u -= b.probability * m.weight;
                if (u < 0.0)
                {
                    chosen = &b;
                    state = &m.state;
                    picked = true;
                    break;
                }
            }
            if (picked)
                break;
        }
        result.last_outcome = chosen->outcome;
        switch (round_action(kernel.variant(), chosen->outcome))
        {
            case RoundAction::Success:
            {
                const auto node = node_measure_and_correct(*state, chosen->outcome);
                double v = rng.uniform();
                const NodeBranch* nb = &node.back();
                for (const auto& n : node)
                {
                    v -= n.probability;
                    if (v < 0.0)
                    {
                        nb = &n;
                        break;
                    }
                }
                result.status = ProtocolStatus::Success;
                result.sign_a = nb->sign_a;
                result.sign_b = nb->sign_b;
                result.frame = nb->frame;
                result.final_ab_state = nb->ab.members().front().state;
                result.fidelity_to_bell = nb->fidelity;
                return result;
            }
            case RoundAction::Repeat:
                if (needs_restore(chosen->outcome))
                {
                    memory = restore_frame(*state);
                    ++result.restores;
                }
                else
                {
                    memory = *state;
                }
                break;
            case RoundAction::Abort: result.status = ProtocolStatus::Abort; return result;
        }
    }
    result.status = ProtocolStatus::Abort;
    result.capped = true;
    return result;
}

inline ProtocolResult run_protocol(const ProtocolVariant& variant,
                                   const DetectorModel& detector,
                                   std::uint64_t seed,
                                   std::uint64_t trial = 0,
                                   int max_rounds = kDefaultMaxRounds)
{
    RoundKernel kernel(variant, detector);
    return run_protocol(kernel, seed, trial, max_rounds);
}

struct McEstimate
{
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t capped = 0;
    double p_success = 0.0;
    double p_success_se = 0.0;
    double fidelity = 0.0;  // mean over successes
    double fidelity_se = 0.0;
    double expected_rounds = 0.0;
    double expected_rounds_se = 0.0;
};

namespace detail {
struct RunningMean
{
    std::uint64_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x)
    {
        ++n;
        sum += x;
        sum_sq += x * x;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double standard_error() const
    {
        if (n < 2)
            return 0.0;
        const double m = mean();
        const double var =
            std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
        return std::sqrt(var / static_cast<double>(n));
    }
};
}  // namespace detail

/// i.i.d. trajectories 0..trials-1 of the (seed) family.
inline McEstimate mc_estimate(RoundKernel& kernel,
                              std::uint64_t trials,
                              std::uint64_t seed,
                              int max_rounds = kDefaultMaxRounds)
{
    if (trials < 1)
        throw std::invalid_argument("mc_estimate: trials must be >= 1");
    detail::RunningMean success;
    detail::RunningMean fid;
    detail::RunningMean rounds;
    McEstimate est;
    for (std::uint64_t t = 0; t < trials; ++t)
    {
        const auto res = run_protocol(kernel, seed, t, max_rounds);
        const bool ok = res.status == ProtocolStatus::Success;
        success.add(ok ? 1.0 : 0.0);
        rounds.add(res.rounds);
        if (ok)
            fid.add(res.fidelity_to_bell);
        if (res.capped)
            ++est.capped;
    }
    est.trials = trials;
    est.successes = fid.n;
    est.p_success = success.mean();
    est.p_success_se = std::sqrt(est.p_success * (1.0 - est.p_success) / static_cast<double>(trials));
    est.fidelity = fid.mean();
    est.fidelity_se = fid.standard_error();
    est.expected_rounds = rounds.mean();
    est.expected_rounds_se = rounds.standard_error();
    return est;
}

inline McEstimate mc_estimate(const ProtocolVariant& variant,
                              const DetectorModel& detector,
                              std::uint64_t trials,
                              std::uint64_t seed,
                              int max_rounds = kDefaultMaxRounds)
{
    RoundKernel kernel(variant, detector);
    return mc_estimate(kernel, trials, seed, max_rounds);
}

}  // namespace rusq
