// test_support.hpp
// Shared fixtures and hand-written reference states for the test suites.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "rusq/hybrid_state.hpp"
#include "rusq/protocol.hpp"

namespace rusq::testing {

inline const Complex kI{0.0, 1.0};
inline const double kS = 1.0 / std::sqrt(2.0);

/// Both memories double encoded: A' onto photon a, B' onto photon b.
inline HybridState encoded_input()
{
    return double_encode(double_encode(initial_memory_state(), kQubitAp, kPathA), kQubitBp,
                         kPathB);
}

/// Four-qubit memory state over (A, A', B, B') from amplitudes on
/// |0101>, |0110>, |1001>, |1010>.
inline HybridState memory_state(Complex c0101, Complex c0110, Complex c1001, Complex c1010)
{
    return make_state({kQubitA, kQubitAp, kQubitB, kQubitBp}, {},
                      {{"0101", {}, c0101}, {"0110", {}, c0110}, {"1001", {}, c1001},
                       {"1010", {}, c1010}});
}

/// Memory states after each chi outcome, written out term by term.
inline HybridState expected_memory(int i)
{
    switch (i)
    {
        case 1: return memory_state(1.0, 1.0, 1.0, 1.0);
        case 2: return memory_state(1.0, -1.0, -1.0, 1.0);
        case 3: return memory_state(1.0, kI, -kI, -1.0);
        case 4: return memory_state(1.0, -kI, kI, -1.0);
        default: throw std::invalid_argument("expected_memory: i must be 1..4");
    }
}

/// Random normalized state on the given labels with up to two photons.
inline HybridState random_state(std::mt19937_64& rng,
                                const std::vector<std::string>& qubits,
                                const std::vector<std::string>& modes,
                                int photons)
{
    std::normal_distribution<double> g;
    std::vector<JointTerm> terms;
    const std::size_t nq = qubits.size();
    for (std::uint32_t bits = 0; bits < (1u << nq); ++bits)
    {
        std::string b;
        for (std::size_t q = 0; q < nq; ++q)
            b += (bits >> (nq - 1 - q)) & 1u ? '1' : '0';
        if (photons == 0)
            terms.push_back({b, {}, {g(rng), g(rng)}});
        for (std::size_t m = 0; m < modes.size() && photons >= 1; ++m)
        {
            if (photons == 1)
                terms.push_back({b, {modes[m]}, {g(rng), g(rng)}});
            for (std::size_t k = m; k < modes.size() && photons == 2; ++k)
                terms.push_back({b, {modes[m], modes[k]}, {g(rng), g(rng)}});
        }
    }
    return make_state(qubits, modes, terms);
}

inline Matrix2 random_unitary(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    const double theta = u(rng) / 4.0;
    const Complex e1 = std::polar(1.0, u(rng));
    const Complex e2 = std::polar(1.0, u(rng));
    const Complex e3 = std::polar(1.0, u(rng));
    return {{{e1 * std::cos(theta), e2 * std::sin(theta)},
             {-e3 * std::conj(e2) * std::sin(theta), e3 * std::conj(e1) * std::cos(theta)}}};
}

}  // namespace rusq::testing
