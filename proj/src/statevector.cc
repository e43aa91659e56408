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

#include "qrmc/statevector.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qrmc/errors.h"

namespace qrmc {
namespace {

std::uint64_t mask_of(std::span<const Qubit> qubits) {
    std::uint64_t m = 0;
    for (Qubit q : qubits) {
        m |= std::uint64_t{1} << q;
    }
    return m;
}

/// Calls fn(i) for every index i < 2^n whose bits under `fixed_mask` equal
/// `fixed_value`. Walks the subsets of the free bits in increasing order.
template <typename F>
void for_each_fixed(std::size_t n, std::uint64_t fixed_mask, std::uint64_t fixed_value, F &&fn) {
    const std::uint64_t full = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    const std::uint64_t free = full & ~fixed_mask;
    std::uint64_t s = 0;
    do {
        fn(s | fixed_value);
        s = (s - free) & free;
    } while (s != 0);
}

/// Applies a permutation gate to any indexable array (amplitudes or a
/// gather table).
template <typename T>
void apply_permutation_gate(std::vector<T> &data, std::size_t n, const Gate &gate) {
    const std::uint64_t cmask = mask_of(gate.controls);
    if (gate.kind == GateKind::X) {
        const std::uint64_t t = std::uint64_t{1} << gate.targets[0];
        for_each_fixed(n, cmask | t, cmask, [&](std::uint64_t i) { std::swap(data[i], data[i | t]); });
    } else {
        const std::uint64_t a = std::uint64_t{1} << gate.targets[0];
        const std::uint64_t b = std::uint64_t{1} << gate.targets[1];
        for_each_fixed(n, cmask | a | b, cmask | a, [&](std::uint64_t i) { std::swap(data[i], data[i ^ a ^ b]); });
    }
}

void check_width(const Gate &gate, std::size_t n) {
    validate_gate(gate, n);
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits, std::size_t max_qubits) {
    if (num_qubits == 0) {
        throw ParameterError("a state needs at least one qubit");
    }
    if (num_qubits > max_qubits) {
        throw ResourceError("state of " + std::to_string(num_qubits) + " qubits exceeds the cap of " +
                            std::to_string(max_qubits));
    }
    num_qubits_ = num_qubits;
    amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index, std::size_t max_qubits) {
    StateVector s(num_qubits, max_qubits);
    if (index >= s.size()) {
        throw std::out_of_range("basis index out of range");
    }
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    if (amplitudes.size() < 2 || !std::has_single_bit(amplitudes.size())) {
        throw ParameterError("amplitude count must be a power of two >= 2");
    }
    StateVector s;
    s.num_qubits_ = std::countr_zero(amplitudes.size());
    s.amplitudes_ = std::move(amplitudes);
    return s;
}

void StateVector::apply(const Gate &gate) {
    const std::size_t n = num_qubits_;
    check_width(gate, n);
    const std::uint64_t cmask = mask_of(gate.controls);
    switch (gate.kind) {
        case GateKind::X:
        case GateKind::SWAP:
            apply_permutation_gate(amplitudes_, n, gate);
            break;
        case GateKind::H: {
            const std::uint64_t t = std::uint64_t{1} << gate.targets[0];
            const double r = std::sqrt(0.5);
            for_each_fixed(n, cmask | t, cmask, [&](std::uint64_t i) {
                const Amplitude a0 = amplitudes_[i];
                const Amplitude a1 = amplitudes_[i | t];
                amplitudes_[i] = r * (a0 + a1);
                amplitudes_[i | t] = r * (a0 - a1);
            });
            break;
        }
        case GateKind::ROT: {
            const std::uint64_t t = std::uint64_t{1} << gate.targets[0];
            const double c = std::cos(gate.angle);
            const double s = std::sin(gate.angle);
            for_each_fixed(n, cmask | t, cmask, [&](std::uint64_t i) {
                const Amplitude a0 = amplitudes_[i];
                const Amplitude a1 = amplitudes_[i | t];
                amplitudes_[i] = c * a0 - s * a1;
                amplitudes_[i | t] = s * a0 + c * a1;
            });
            break;
        }
        case GateKind::PHASE_FLIP_ALL_ZERO: {
            const std::uint64_t tmask = mask_of(gate.targets);
            for_each_fixed(n, cmask | tmask, cmask, [&](std::uint64_t i) { amplitudes_[i] = -amplitudes_[i]; });
            break;
        }
        case GateKind::PHASE_FLIP_ONE: {
            const std::uint64_t t = std::uint64_t{1} << gate.targets[0];
            for_each_fixed(n, cmask | t, cmask | t, [&](std::uint64_t i) { amplitudes_[i] = -amplitudes_[i]; });
            break;
        }
    }
}

void StateVector::apply(const Circuit &circuit) {
    if (circuit.width() > num_qubits_) {
        throw std::out_of_range("circuit is wider than the state");
    }
    for (const Gate &g : circuit.gates()) {
        apply(g);
    }
}

void StateVector::gather(std::span<const std::uint32_t> source) {
    if (source.size() != amplitudes_.size()) {
        throw ParameterError("gather table size mismatch");
    }
    std::vector<Amplitude> out(amplitudes_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = amplitudes_[source[i]];
    }
    amplitudes_.swap(out);
}

double StateVector::probability_one(Qubit qubit) const {
    if (qubit >= num_qubits_) {
        throw std::out_of_range("qubit out of range");
    }
    const std::uint64_t t = std::uint64_t{1} << qubit;
    double p = 0.0;
    for_each_fixed(num_qubits_, t, t, [&](std::uint64_t i) { p += std::norm(amplitudes_[i]); });
    return p;
}

std::vector<double> StateVector::marginal(std::span<const Qubit> qubits) const {
    for (Qubit q : qubits) {
        if (q >= num_qubits_) {
            throw std::out_of_range("qubit out of range");
        }
    }
    std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
    for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        if (p == 0.0) {
            continue;
        }
        std::uint64_t pattern = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            pattern |= ((i >> qubits[j]) & 1u) << j;
        }
        out[pattern] += p;
    }
    return out;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const Amplitude &a : amplitudes_) {
        s += std::norm(a);
    }
    return s;
}

std::uint64_t StateVector::read_basis() const {
    std::uint64_t found = 0;
    std::size_t hits = 0;
    for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
        if (std::abs(amplitudes_[i]) > 1.0 - 1e-9) {
            found = i;
            ++hits;
        }
    }
    if (hits != 1) {
        throw ContractError("state is not a computational basis state");
    }
    return found;
}

double StateVector::max_abs_diff(const StateVector &other) const {
    if (other.size() != size()) {
        throw ParameterError("states have different sizes");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        m = std::max(m, std::abs(amplitudes_[i] - other.amplitudes_[i]));
    }
    return m;
}

std::vector<std::uint64_t> sample_distribution(std::span<const double> probabilities, std::uint64_t shots,
                                               std::mt19937_64 &rng) {
    std::vector<std::uint64_t> counts(probabilities.size(), 0);
    std::uint64_t remaining = shots;
    double mass_left = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    for (std::size_t k = 0; k < probabilities.size() && remaining > 0; ++k) {
        if (k + 1 == probabilities.size()) {
            counts[k] = remaining;
            break;
        }
        const double p = mass_left > 0.0 ? std::clamp(probabilities[k] / mass_left, 0.0, 1.0) : 0.0;
        std::uint64_t c = 0;
        if (p >= 1.0) {
            c = remaining;
        } else if (p > 0.0) {
            std::binomial_distribution<std::uint64_t> draw(remaining, p);
            c = draw(rng);
        }
        counts[k] = c;
        remaining -= c;
        mass_left -= probabilities[k];
    }
    return counts;
}

std::map<std::uint64_t, std::uint64_t> sample_counts(const StateVector &state, std::span<const Qubit> qubits,
                                                     std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ParameterError("shots must be >= 1");
    }
    std::mt19937_64 rng(seed);
    const std::vector<double> probs = state.marginal(qubits);
    const std::vector<std::uint64_t> counts = sample_distribution(probs, shots, rng);
    std::map<std::uint64_t, std::uint64_t> out;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] != 0) {
            out[k] = counts[k];
        }
    }
    return out;
}

std::uint64_t permute_basis(const Circuit &circuit, std::uint64_t index) {
    for (const Gate &g : circuit.gates()) {
        const std::uint64_t cmask = mask_of(g.controls);
        if ((index & cmask) != cmask) {
            if (!g.is_permutation()) {
                throw ContractError("circuit contains a non-permutation gate");
            }
            continue;
        }
        switch (g.kind) {
            case GateKind::X:
                index ^= std::uint64_t{1} << g.targets[0];
                break;
            case GateKind::SWAP: {
                const std::uint64_t a = (index >> g.targets[0]) & 1u;
                const std::uint64_t b = (index >> g.targets[1]) & 1u;
                if (a != b) {
                    index ^= (std::uint64_t{1} << g.targets[0]) | (std::uint64_t{1} << g.targets[1]);
                }
                break;
            }
            default:
                throw ContractError("circuit contains a non-permutation gate");
        }
    }
    return index;
}

CompiledCircuit::CompiledCircuit(const Circuit &circuit, std::size_t min_run) : width_(circuit.width()) {
    if (width_ > 32) {
        throw ResourceError("cannot compile a circuit wider than 32 qubits");
    }
    const auto &gates = circuit.gates();
    std::size_t i = 0;
    while (i < gates.size()) {
        std::size_t j = i;
        while (j < gates.size() && gates[j].is_permutation()) {
            ++j;
        }
        if (j - i >= min_run) {
            std::vector<std::uint32_t> table(std::size_t{1} << width_);
            std::iota(table.begin(), table.end(), 0u);
            for (std::size_t k = i; k < j; ++k) {
                apply_permutation_gate(table, width_, gates[k]);
            }
            segments_.push_back(Segment{std::move(table), Gate{}});
            i = j;
        } else if (j > i) {
            for (; i < j; ++i) {
                segments_.push_back(Segment{{}, gates[i]});
            }
        } else {
            segments_.push_back(Segment{{}, gates[i]});
            ++i;
        }
    }
}

void CompiledCircuit::apply(StateVector &state) const {
    if (state.num_qubits() != width_) {
        throw ParameterError("compiled circuit width does not match the state");
    }
    for (const Segment &s : segments_) {
        if (!s.gather.empty()) {
            state.gather(s.gather);
        } else {
            state.apply(s.gate);
        }
    }
}

std::size_t CompiledCircuit::fused_segments() const {
    return static_cast<std::size_t>(
        std::count_if(segments_.begin(), segments_.end(), [](const Segment &s) { return !s.gather.empty(); }));
}

}  // namespace qrmc
