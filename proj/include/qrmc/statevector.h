// Copyright 2026 The qrmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRMC_STATEVECTOR_H
#define QRMC_STATEVECTOR_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "qrmc/circuit.h"

namespace qrmc {

using Amplitude = std::complex<double>;

/// 28 qubits of complex<double> is 4 GiB.
inline constexpr std::size_t kDefaultMaxQubits = 28;

/// Dense statevector over n qubits; amplitude index bit k is qubit k.
///
/// A StateVector is a plain value: copy it to branch a simulation, move it
/// between threads freely, but never touch one instance from two threads.
class StateVector {
   public:
    /// |0...0> on `num_qubits` qubits. Throws ResourceError above `max_qubits`
    /// and ParameterError for zero qubits.
    explicit StateVector(std::size_t num_qubits, std::size_t max_qubits = kDefaultMaxQubits);

    /// Basis state |index>.
    static StateVector basis(std::size_t num_qubits, std::uint64_t index, std::size_t max_qubits = kDefaultMaxQubits);

    /// Takes ownership of explicit amplitudes (length must be a power of two).
    /// The caller is responsible for normalization.
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const Amplitude &operator[](std::uint64_t index) const { return amplitudes_[index]; }

    void apply(const Gate &gate);
    void apply(const Circuit &circuit);

    /// new[i] = old[source[i]]; `source` must be a permutation of the indices.
    void gather(std::span<const std::uint32_t> source);

    /// Probability that measuring `qubit` yields 1.
    double probability_one(Qubit qubit) const;

    /// Marginal distribution over `qubits`; entry p has bit j = value of qubits[j].
    std::vector<double> marginal(std::span<const Qubit> qubits) const;

    double norm_squared() const;

    /// The basis index of a computational basis state. Throws ContractError
    /// unless exactly one amplitude has magnitude above 1 - 1e-9.
    std::uint64_t read_basis() const;

    /// Max |a_i - b_i| over all amplitudes.
    double max_abs_diff(const StateVector &other) const;

   private:
    StateVector() = default;

    std::size_t num_qubits_ = 0;
    std::vector<Amplitude> amplitudes_;
};

/// Seeded multinomial draw of `shots` outcomes from `probabilities`
/// (sequential conditional binomials; deterministic for a given engine state).
std::vector<std::uint64_t> sample_distribution(std::span<const double> probabilities, std::uint64_t shots,
                                               std::mt19937_64 &rng);

/// Histogram of `shots` simulated measurements of `qubits`. Keys are basis
/// patterns with bit j equal to the value of qubits[j]; only nonzero counts
/// are present. Identical arguments always give identical histograms.
std::map<std::uint64_t, std::uint64_t> sample_counts(const StateVector &state, std::span<const Qubit> qubits,
                                                     std::uint64_t shots, std::uint64_t seed);

/// Image of a basis index under a circuit made only of X/SWAP gates.
/// Throws ContractError if the circuit contains any other gate.
std::uint64_t permute_basis(const Circuit &circuit, std::uint64_t index);

/// A circuit prepared for repeated application: runs of consecutive
/// permutation gates are fused into a single gather table, everything else
/// is applied gate by gate. Building costs one pass per fused gate over a
/// 2^width index table, so this only pays off for circuits applied many
/// times (Grover powers).
class CompiledCircuit {
   public:
    explicit CompiledCircuit(const Circuit &circuit, std::size_t min_run = 4);

    void apply(StateVector &state) const;
    std::size_t width() const { return width_; }
    std::size_t fused_segments() const;

   private:
    struct Segment {
        std::vector<std::uint32_t> gather;  // empty for a direct gate
        Gate gate;
    };
    std::size_t width_;
    std::vector<Segment> segments_;
};

}  // namespace qrmc

#endif
