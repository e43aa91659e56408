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

#ifndef QRMC_CIRCUIT_H
#define QRMC_CIRCUIT_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrmc {

/// Qubit index. Throughout the library, bit k of a basis index is the value
/// of qubit k.
using Qubit = std::uint32_t;

enum class GateKind : std::uint8_t {
    X,
    H,
    SWAP,
    /// Real rotation [[cos a, -sin a], [sin a, cos a]]. Angles add.
    ROT,
    /// Negates the amplitude when every target qubit is |0>.
    PHASE_FLIP_ALL_ZERO,
    /// Negates the amplitude when the (single) target qubit is |1>.
    PHASE_FLIP_ONE,
};

std::string_view gate_kind_name(GateKind kind);

struct Gate {
    GateKind kind;
    std::vector<Qubit> targets;
    std::vector<Qubit> controls;
    double angle = 0.0;

    static Gate x(Qubit target, std::vector<Qubit> controls = {});
    static Gate h(Qubit target, std::vector<Qubit> controls = {});
    static Gate swap(Qubit a, Qubit b, std::vector<Qubit> controls = {});
    static Gate rot(Qubit target, double angle, std::vector<Qubit> controls = {});
    static Gate phase_flip_all_zero(std::vector<Qubit> targets, std::vector<Qubit> controls = {});
    static Gate phase_flip_one(Qubit target, std::vector<Qubit> controls = {});

    Gate inverse() const;

    /// True for gates that map every basis state to a basis state with no
    /// phase (X and SWAP, controlled or not).
    bool is_permutation() const;

    /// Largest qubit index touched plus one.
    std::size_t min_width() const;

    bool operator==(const Gate &other) const = default;
};

/// An ordered gate list over a fixed number of qubits.
///
/// `ancillas` records which qubits the builders used as scratch space that
/// is promised to start and end in |0>. It is bookkeeping for resource
/// reports; the simulator does not treat those qubits specially.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(std::size_t width, std::string label = {});

    std::size_t width() const { return width_; }
    const std::vector<Gate> &gates() const { return gates_; }
    const std::string &label() const { return label_; }
    const std::vector<Qubit> &ancillas() const { return ancillas_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    void set_label(std::string label) { label_ = std::move(label); }

    /// Appends a gate after validating its indices against the width.
    /// Throws std::out_of_range or qrmc::ParameterError.
    void append(Gate gate);

    /// Appends every gate of `other`; `other` must not be wider.
    void append(const Circuit &other);

    void mark_ancillas(std::span<const Qubit> qubits);

    bool is_permutation() const;

    bool operator==(const Circuit &other) const { return width_ == other.width_ && gates_ == other.gates_; }

   private:
    std::size_t width_ = 0;
    std::vector<Gate> gates_;
    std::string label_;
    std::vector<Qubit> ancillas_;
};

/// Reversed gate order, each gate replaced by its inverse.
Circuit inverse(const Circuit &circuit);

/// Every gate gains `controls` as extra controls. The controls must not
/// collide with any qubit the circuit already touches.
Circuit controlled(const Circuit &circuit, std::span<const Qubit> controls);

/// `gate` fired only when controls[j] holds bit j of `pattern`; zero bits
/// are handled by X conjugation.
Circuit pattern_controlled(const Gate &gate, std::span<const Qubit> controls, std::uint64_t pattern);

/// Validates a gate: disjoint targets/controls, indices below `width`,
/// target count matching the kind.
void validate_gate(const Gate &gate, std::size_t width);

}  // namespace qrmc

#endif
