// hybrid_state.hpp
// Exact state engine for a few memory qubits jointly entangled with at most
// two photons spread over labeled bosonic modes.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rusq {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix. Acting on a mode pair, column k holds the
/// image of the creation operator of target k.
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

inline constexpr int kMaxPhotons = 2;
inline constexpr double kPruneThreshold = 1e-14;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr double kStateEqualityTolerance = 1e-9;
inline constexpr double kMergeTolerance = 1e-12;

enum class Polarization { H, V };

inline std::string mode_label(const std::string& path, Polarization pol)
{
    return path + (pol == Polarization::H ? ".H" : ".V");
}

//---------------------------------------------------------------------------//
// Small matrix helpers
//---------------------------------------------------------------------------//

inline Matrix2 identity2()
{
    return {{{Complex{1, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{1, 0}}}};
}

inline Matrix2 multiply(const Matrix2& a, const Matrix2& b)
{
    Matrix2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return out;
}

inline Matrix2 adjoint(const Matrix2& a)
{
    Matrix2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out[i][j] = std::conj(a[j][i]);
    return out;
}

inline bool is_unitary(const Matrix2& u, double tol = kUnitaryTolerance)
{
    const Matrix2 p = multiply(adjoint(u), u);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(p[i][j] - Complex(i == j ? 1.0 : 0.0, 0.0)) > tol)
                return false;
    return true;
}

namespace gates {
inline Matrix2 pauli_x() { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
inline Matrix2 pauli_y()
{
    return {{{Complex{0, 0}, Complex{0, -1}}, {Complex{0, 1}, Complex{0, 0}}}};
}
inline Matrix2 pauli_z() { return {{{1.0, 0.0}, {0.0, -1.0}}}; }
inline Matrix2 hadamard()
{
    const double s = 1.0 / std::sqrt(2.0);
    return {{{s, s}, {s, -s}}};
}
inline Matrix2 phase_s()
{
    return {{{Complex{1, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{0, 1}}}};
}
}  // namespace gates

//---------------------------------------------------------------------------//
// Basis keys
//---------------------------------------------------------------------------//

/// Multiset of occupied mode indices, sorted ascending, unused slots last.
struct Occupation
{
    static constexpr std::uint16_t kEmpty = 0xFFFF;
    std::array<std::uint16_t, kMaxPhotons> modes{kEmpty, kEmpty};

    int photon_count() const
    {
        return static_cast<int>(std::count_if(
            modes.begin(), modes.end(), [](auto m) { return m != kEmpty; }));
    }
    int count_in(std::uint16_t mode) const
    {
        return static_cast<int>(std::count(modes.begin(), modes.end(), mode));
    }
    bool add(std::uint16_t mode)
    {
        for (auto& m : modes)
        {
            if (m == kEmpty)
            {
                m = mode;
                std::sort(modes.begin(), modes.end());
                return true;
            }
        }
        return false;
    }
    void remove_one(std::uint16_t mode)
    {
        for (auto& m : modes)
        {
            if (m == mode)
            {
                m = kEmpty;
                std::sort(modes.begin(), modes.end());
                return;
            }
        }
        throw std::logic_error("Occupation::remove_one: mode not occupied");
    }
    /// Product of n! over modes, i.e. the Fock normalization factor squared.
    double factorial_product() const
    {
        return (modes[0] != kEmpty && modes[0] == modes[1]) ? 2.0 : 1.0;
    }

    auto operator<=>(const Occupation&) const = default;
};

struct BasisKey
{
    std::uint32_t memory = 0;  // qubit 0 is the most significant bit
    Occupation photons;

    auto operator<=>(const BasisKey&) const = default;
};

//---------------------------------------------------------------------------//
// HybridState
//---------------------------------------------------------------------------//

/*!
 * Pure state over (memory qubits) x (photonic occupations with at most
 * max_photons photons). Amplitudes below kPruneThreshold are dropped and the
 * state is kept normalized, so any two states with the same labels compare
 * through their overlap.
 */
class HybridState
{
  public:
    using Amplitudes = std::map<BasisKey, Complex>;

    HybridState() = default;

    HybridState(std::vector<std::string> memory_labels,
                std::vector<std::string> mode_labels,
                Amplitudes amplitudes,
                int max_photons = kMaxPhotons)
        : memory_labels_(std::move(memory_labels)),
          mode_labels_(std::move(mode_labels)),
          amplitudes_(std::move(amplitudes)),
          max_photons_(max_photons)
    {
        if (max_photons_ < 0 || max_photons_ > kMaxPhotons)
            throw std::invalid_argument("HybridState: max_photons must be in [0, 2]");
        if (memory_labels_.size() > 31)
            throw std::invalid_argument("HybridState: too many memory qubits");
        check_unique(memory_labels_, "memory");
        check_unique(mode_labels_, "mode");
        const std::uint32_t mem_limit = 1u << memory_labels_.size();
        for (const auto& [key, amp] : amplitudes_)
        {
            if (key.memory >= mem_limit)
                throw std::invalid_argument("HybridState: memory bits out of range");
            if (key.photons.photon_count() > max_photons_)
                throw std::invalid_argument("HybridState: occupation exceeds max_photons");
            for (auto m : key.photons.modes)
                if (m != Occupation::kEmpty && m >= mode_labels_.size())
                    throw std::invalid_argument("HybridState: unknown mode index");
            (void)amp;
        }
        normalize();
    }

    const std::vector<std::string>& memory_labels() const { return memory_labels_; }
    const std::vector<std::string>& mode_labels() const { return mode_labels_; }
    const Amplitudes& amplitudes() const { return amplitudes_; }
    int max_photons() const { return max_photons_; }
    std::size_t num_qubits() const { return memory_labels_.size(); }
    std::size_t num_modes() const { return mode_labels_.size(); }

    Complex amplitude(const BasisKey& key) const
    {
        auto it = amplitudes_.find(key);
        return it == amplitudes_.end() ? Complex{} : it->second;
    }

    double norm_squared() const
    {
        double n = 0.0;
        for (const auto& kv : amplitudes_)
            n += std::norm(kv.second);
        return n;
    }

    std::size_t qubit_index(const std::string& label) const
    {
        auto it = std::find(memory_labels_.begin(), memory_labels_.end(), label);
        if (it == memory_labels_.end())
            throw std::invalid_argument("unknown memory qubit '" + label + "'");
        return static_cast<std::size_t>(it - memory_labels_.begin());
    }

    bool has_mode(const std::string& label) const
    {
        return std::find(mode_labels_.begin(), mode_labels_.end(), label)
               != mode_labels_.end();
    }

    std::uint16_t mode_index(const std::string& label) const
    {
        auto it = std::find(mode_labels_.begin(), mode_labels_.end(), label);
        if (it == mode_labels_.end())
            throw std::invalid_argument("unknown mode '" + label + "'");
        return static_cast<std::uint16_t>(it - mode_labels_.begin());
    }

    /// Bit mask of a qubit inside BasisKey::memory.
    std::uint32_t qubit_mask(std::size_t index) const
    {
        return 1u << (memory_labels_.size() - 1 - index);
    }

    /// Same state with extra vacuum modes appended.
    HybridState with_modes(const std::vector<std::string>& extra) const
    {
        HybridState out = *this;
        for (const auto& label : extra)
        {
            if (out.has_mode(label))
                throw std::invalid_argument("mode '" + label + "' already exists");
            out.mode_labels_.push_back(label);
        }
        return out;
    }

    /// Photons present in any basis key of the given mode.
    bool mode_occupied(std::uint16_t mode) const
    {
        for (const auto& kv : amplitudes_)
            if (kv.first.photons.count_in(mode) > 0)
                return true;
        return false;
    }

    /// Builds a state from unnormalized amplitudes; throws if all vanish.
    static HybridState from_unnormalized(const HybridState& shape, Amplitudes amps)
    {
        HybridState out;
        out.memory_labels_ = shape.memory_labels_;
        out.mode_labels_ = shape.mode_labels_;
        out.max_photons_ = shape.max_photons_;
        out.amplitudes_ = std::move(amps);
        out.normalize();
        return out;
    }

  private:
    static void check_unique(const std::vector<std::string>& labels, const char* what)
    {
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j])
                    throw std::invalid_argument(std::string("duplicate ") + what
                                                + " label '" + labels[i] + "'");
    }

    void normalize()
    {
        double n = 0.0;
        for (const auto& kv : amplitudes_)
            n += std::norm(kv.second);
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("HybridState: state is not normalizable");
        const double scale = 1.0 / std::sqrt(n);
        for (auto it = amplitudes_.begin(); it != amplitudes_.end();)
        {
            it->second *= scale;
            if (std::abs(it->second) < kPruneThreshold)
                it = amplitudes_.erase(it);
            else
                ++it;
        }
        if (amplitudes_.empty())
            throw std::invalid_argument("HybridState: state is not normalizable");
    }

    std::vector<std::string> memory_labels_;
    std::vector<std::string> mode_labels_;
    Amplitudes amplitudes_;
    int max_photons_ = kMaxPhotons;
};

/// <psi|phi>; labels must agree.
inline Complex overlap(const HybridState& psi, const HybridState& phi)
{
    if (psi.memory_labels() != phi.memory_labels() || psi.mode_labels() != phi.mode_labels())
        throw std::invalid_argument("overlap: states have different labels");
    const auto& small = psi.amplitudes().size() <= phi.amplitudes().size()
                            ? psi.amplitudes()
                            : phi.amplitudes();
    const bool psi_small = &small == &psi.amplitudes();
    Complex sum{};
    for (const auto& [key, a] : small)
    {
        const Complex b = (psi_small ? phi : psi).amplitude(key);
        sum += psi_small ? std::conj(a) * b : std::conj(b) * a;
    }
    return sum;
}

inline double fidelity(const HybridState& psi, const HybridState& phi)
{
    return std::norm(overlap(psi, phi));
}

/// Equality up to global phase.
inline bool same_state(const HybridState& psi,
                       const HybridState& phi,
                       double tol = kStateEqualityTolerance)
{
    if (psi.memory_labels() != phi.memory_labels() || psi.mode_labels() != phi.mode_labels())
        return false;
    return fidelity(psi, phi) >= 1.0 - tol;
}

//---------------------------------------------------------------------------//
// WeightedEnsemble
//---------------------------------------------------------------------------//

struct EnsembleMember
{
    double weight = 0.0;
    HybridState state;
};

/*!
 * Mixture of pure states. Weights may sum to less than one when the ensemble
 * stands for a conditional branch.
 */
class WeightedEnsemble
{
  public:
    WeightedEnsemble() = default;
    explicit WeightedEnsemble(HybridState state)
    {
        members_.push_back({1.0, std::move(state)});
    }

    void add(double weight, HybridState state)
    {
        if (weight < 0.0)
            throw std::invalid_argument("WeightedEnsemble: negative weight");
        if (weight == 0.0)
            return;
        members_.push_back({weight, std::move(state)});
    }

    /// Adds, folding into an existing member equal up to global phase.
    void add_merged(double weight, HybridState state, double tol = kMergeTolerance)
    {
        if (weight < 0.0)
            throw std::invalid_argument("WeightedEnsemble: negative weight");
        if (weight == 0.0)
            return;
        for (auto& m : members_)
        {
            if (same_state(m.state, state, tol))
            {
                m.weight += weight;
                return;
            }
        }
        members_.push_back({weight, std::move(state)});
    }

    const std::vector<EnsembleMember>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    double total_weight() const
    {
        double w = 0.0;
        for (const auto& m : members_)
            w += m.weight;
        return w;
    }

    WeightedEnsemble merged(double tol = kMergeTolerance) const
    {
        WeightedEnsemble out;
        for (const auto& m : members_)
            out.add_merged(m.weight, m.state, tol);
        return out;
    }

    WeightedEnsemble scaled(double factor) const
    {
        WeightedEnsemble out;
        for (const auto& m : members_)
            out.add(m.weight * factor, m.state);
        return out;
    }

    WeightedEnsemble normalized() const
    {
        const double w = total_weight();
        if (!(w > 0.0))
            throw std::invalid_argument("WeightedEnsemble: zero total weight");
        return scaled(1.0 / w);
    }

  private:
    std::vector<EnsembleMember> members_;
};

/// Sparse density matrix, mainly for comparing ensembles.
using DensityMatrix = std::map<std::pair<BasisKey, BasisKey>, Complex>;

inline DensityMatrix density_matrix(const WeightedEnsemble& ens)
{
    DensityMatrix rho;
    for (const auto& m : ens.members())
        for (const auto& [k1, a1] : m.state.amplitudes())
            for (const auto& [k2, a2] : m.state.amplitudes())
                rho[{k1, k2}] += m.weight * a1 * std::conj(a2);
    return rho;
}

inline double max_abs_difference(const DensityMatrix& a, const DensityMatrix& b)
{
    double worst = 0.0;
    for (const auto& [k, v] : a)
    {
        auto it = b.find(k);
        worst = std::max(worst, std::abs(v - (it == b.end() ? Complex{} : it->second)));
    }
    for (const auto& [k, v] : b)
        if (a.find(k) == a.end())
            worst = std::max(worst, std::abs(v));
    return worst;
}

//---------------------------------------------------------------------------//
// Construction
//---------------------------------------------------------------------------//

/// Memory kets given as bitstrings over the listed labels ("0101").
struct MemorySpec
{
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, Complex>> terms;
};

/// Photonic Fock kets: each term lists the occupied modes, repeated for
/// multiply occupied modes. Kets are normalized Fock states. An empty term
/// list means vacuum.
struct PhotonSpec
{
    std::vector<std::string> modes;
    std::vector<std::pair<std::vector<std::string>, Complex>> terms;
};

/// Tensor product of two memory specs on disjoint labels.
inline MemorySpec memory_product(const MemorySpec& a, const MemorySpec& b)
{
    MemorySpec out;
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    for (const auto& [ba, ca] : a.terms)
        for (const auto& [bb, cb] : b.terms)
            out.terms.emplace_back(ba + bb, ca * cb);
    return out;
}

/// Joint ket: memory bitstring together with occupied modes.
struct JointTerm
{
    std::string memory_bits;
    std::vector<std::string> photons;
    Complex coefficient;
};

namespace detail {
inline std::uint32_t parse_bits(const std::string& bits, std::size_t n)
{
    if (bits.size() != n)
        throw std::invalid_argument("memory ket '" + bits + "' has wrong length");
    std::uint32_t v = 0;
    for (char c : bits)
    {
        if (c != '0' && c != '1')
            throw std::invalid_argument("memory ket '" + bits + "' is not a bitstring");
        v = (v << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return v;
}

inline Occupation parse_photons(const std::vector<std::string>& photons,
                                const std::vector<std::string>& modes,
                                int max_photons)
{
    if (static_cast<int>(photons.size()) > max_photons)
        throw std::invalid_argument("photonic ket exceeds max_photons");
    Occupation occ;
    for (const auto& p : photons)
    {
        auto it = std::find(modes.begin(), modes.end(), p);
        if (it == modes.end())
            throw std::invalid_argument("unknown mode '" + p + "'");
        occ.add(static_cast<std::uint16_t>(it - modes.begin()));
    }
    return occ;
}
}  // namespace detail

inline HybridState make_state(const std::vector<std::string>& memory_labels,
                              const std::vector<std::string>& mode_labels,
                              const std::vector<JointTerm>& terms,
                              int max_photons = kMaxPhotons)
{
    HybridState::Amplitudes amps;
    for (const auto& t : terms)
    {
        BasisKey key{detail::parse_bits(t.memory_bits, memory_labels.size()),
                     detail::parse_photons(t.photons, mode_labels, max_photons)};
        amps[key] += t.coefficient;
    }
    return HybridState(memory_labels, mode_labels, std::move(amps), max_photons);
}

inline HybridState make_state(const MemorySpec& memory,
                              const PhotonSpec& photons,
                              int max_photons = kMaxPhotons)
{
    std::vector<JointTerm> terms;
    const auto memory_terms = memory.terms.empty()
                                  ? std::vector<std::pair<std::string, Complex>>{
                                        {std::string(memory.labels.size(), '0'), 1.0}}
                                  : memory.terms;
    const auto photon_terms = photons.terms.empty()
                                  ? std::vector<std::pair<std::vector<std::string>, Complex>>{
                                        {{}, 1.0}}
                                  : photons.terms;
    for (const auto& [bits, cm] : memory_terms)
        for (const auto& [occ, cp] : photon_terms)
            terms.push_back({bits, occ, cm * cp});
    return make_state(memory.labels, photons.modes, terms, max_photons);
}

//---------------------------------------------------------------------------//
// Unitary operations
//---------------------------------------------------------------------------//

struct ModeTransform
{
    std::array<std::string, 2> targets;
    Matrix2 matrix;
};

/*!
 * Apply a linear-optical element to two modes. Each creation operator of a
 * target mode is replaced by the column of the matrix; the induced map on the
 * <=2 photon space is expanded term by term with Fock normalization.
 */
inline HybridState apply_mode_transform(const HybridState& state, const ModeTransform& t)
{
    if (!is_unitary(t.matrix))
        throw std::invalid_argument("apply_mode_transform: matrix is not unitary");
    const std::array<std::uint16_t, 2> target{state.mode_index(t.targets[0]),
                                              state.mode_index(t.targets[1])};
    if (target[0] == target[1])
        throw std::invalid_argument("apply_mode_transform: targets must differ");

    HybridState::Amplitudes out;
    for (const auto& [key, amp] : state.amplitudes())
    {
        // Each photon expands into one or two alternatives.
        struct Partial
        {
            Occupation occ;
            Complex coeff;
        };
        std::vector<Partial> partial{{Occupation{}, amp / std::sqrt(key.photons.factorial_product())}};
        for (auto mode : key.photons.modes)
        {
            if (mode == Occupation::kEmpty)
                continue;
            int k = -1;
            if (mode == target[0])
                k = 0;
            else if (mode == target[1])
                k = 1;
            std::vector<Partial> next;
            next.reserve(partial.size() * 2);
            for (const auto& p : partial)
            {
                if (k < 0)
                {
                    Partial q = p;
                    q.occ.add(mode);
                    next.push_back(q);
                    continue;
                }
                for (int j = 0; j < 2; ++j)
                {
                    const Complex w = t.matrix[j][k];
                    if (w == Complex{})
                        continue;
                    Partial q{p.occ, p.coeff * w};
                    q.occ.add(target[j]);
                    next.push_back(q);
                }
            }
            partial = std::move(next);
        }
        for (const auto& p : partial)
            out[BasisKey{key.memory, p.occ}] += p.coeff * std::sqrt(p.occ.factorial_product());
    }
    return HybridState::from_unnormalized(state, std::move(out));
}

inline HybridState apply_qubit_gate(const HybridState& state,
                                    const std::string& qubit,
                                    const Matrix2& gate)
{
    if (!is_unitary(gate))
        throw std::invalid_argument("apply_qubit_gate: matrix is not unitary");
    const std::uint32_t mask = state.qubit_mask(state.qubit_index(qubit));
    HybridState::Amplitudes out;
    for (const auto& [key, amp] : state.amplitudes())
    {
        const int bit = (key.memory & mask) ? 1 : 0;
        for (int row = 0; row < 2; ++row)
        {
            const Complex g = gate[row][bit];
            if (g == Complex{})
                continue;
            BasisKey k = key;
            k.memory = row ? (key.memory | mask) : (key.memory & ~mask);
            out[k] += g * amp;
        }
    }
    return HybridState::from_unnormalized(state, std::move(out));
}

//---------------------------------------------------------------------------//
// Loss
//---------------------------------------------------------------------------//

namespace detail {
inline double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

inline void check_efficiency(double eta)
{
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("efficiency must lie in [0, 1]");
}
}  // namespace detail

/*!
 * Virtual beamsplitter of transmissivity eta on one mode, environment traced
 * out. Branch k (photons lost) appears once, in increasing k.
 */
inline WeightedEnsemble loss_channel(const HybridState& state, const std::string& mode, double eta)
{
    detail::check_efficiency(eta);
    const auto m = state.mode_index(mode);
    std::map<int, HybridState::Amplitudes> branches;
    for (const auto& [key, amp] : state.amplitudes())
    {
        const int n = key.photons.count_in(m);
        for (int lost = 0; lost <= n; ++lost)
        {
            const double p = detail::binomial(n, lost) * std::pow(eta, n - lost)
                             * std::pow(1.0 - eta, lost);
            if (p == 0.0)
                continue;
            BasisKey k = key;
            for (int i = 0; i < lost; ++i)
                k.photons.remove_one(m);
            branches[lost][k] += amp * std::sqrt(p);
        }
    }
    WeightedEnsemble out;
    for (auto& [lost, amps] : branches)
    {
        double w = 0.0;
        for (const auto& kv : amps)
            w += std::norm(kv.second);
        if (w < kPruneThreshold * kPruneThreshold)
            continue;
        out.add(w, HybridState::from_unnormalized(state, std::move(amps)));
    }
    return out;
}

inline WeightedEnsemble loss_channel(const WeightedEnsemble& ens, const std::string& mode, double eta)
{
    WeightedEnsemble out;
    for (const auto& m : ens.members())
    {
        const WeightedEnsemble branches = loss_channel(m.state, mode, eta);
        for (const auto& b : branches.members())
            out.add(m.weight * b.weight, b.state);
    }
    return out;
}

//---------------------------------------------------------------------------//
// Memory-only projections
//---------------------------------------------------------------------------//

/// Result of projecting one memory qubit onto a basis vector.
struct QubitProjection
{
    double probability = 0.0;
    std::optional<HybridState> remaining;  // empty when probability is zero
};

/// Project a qubit onto a|0> + b|1> and drop it from the register.
inline QubitProjection project_qubit(const HybridState& state,
                                     const std::string& qubit,
                                     const std::array<Complex, 2>& onto)
{
    const double n = std::norm(onto[0]) + std::norm(onto[1]);
    if (std::abs(n - 1.0) > kNormTolerance)
        throw std::invalid_argument("project_qubit: basis vector not normalized");
    const std::size_t q = state.qubit_index(qubit);
    const std::size_t nq = state.num_qubits();
    std::vector<std::string> labels = state.memory_labels();
    labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(q));

    HybridState::Amplitudes out;
    const std::uint32_t mask = state.qubit_mask(q);
    const std::uint32_t low = mask - 1;
    for (const auto& [key, amp] : state.amplitudes())
    {
        const int bit = (key.memory & mask) ? 1 : 0;
        const std::uint32_t reduced = ((key.memory >> 1) & ~low) | (key.memory & low);
        out[BasisKey{reduced & ((nq > 1) ? ((1u << (nq - 1)) - 1) : 0u), key.photons}] +=
            std::conj(onto[bit]) * amp;
    }
    double p = 0.0;
    for (const auto& kv : out)
        p += std::norm(kv.second);
    QubitProjection result;
    result.probability = p;
    if (p > kPruneThreshold * kPruneThreshold)
        result.remaining = HybridState(std::move(labels), state.mode_labels(), std::move(out),
                                       state.max_photons());
    return result;
}

}  // namespace rusq
