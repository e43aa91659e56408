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

#include "qrmc/circuit.h"

#include <algorithm>
#include <stdexcept>

#include "qrmc/errors.h"

namespace qrmc {

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::X:
            return "X";
        case GateKind::H:
            return "H";
        case GateKind::SWAP:
            return "SWAP";
        case GateKind::ROT:
            return "ROT";
        case GateKind::PHASE_FLIP_ALL_ZERO:
            return "PHASE_FLIP_ALL_ZERO";
        case GateKind::PHASE_FLIP_ONE:
            return "PHASE_FLIP_ONE";
    }
    return "?";
}

Gate Gate::x(Qubit target, std::vector<Qubit> controls) {
    return Gate{GateKind::X, {target}, std::move(controls), 0.0};
}
Gate Gate::h(Qubit target, std::vector<Qubit> controls) {
    return Gate{GateKind::H, {target}, std::move(controls), 0.0};
}
Gate Gate::swap(Qubit a, Qubit b, std::vector<Qubit> controls) {
    return Gate{GateKind::SWAP, {a, b}, std::move(controls), 0.0};
}
Gate Gate::rot(Qubit target, double angle, std::vector<Qubit> controls) {
    return Gate{GateKind::ROT, {target}, std::move(controls), angle};
}
Gate Gate::phase_flip_all_zero(std::vector<Qubit> targets, std::vector<Qubit> controls) {
    return Gate{GateKind::PHASE_FLIP_ALL_ZERO, std::move(targets), std::move(controls), 0.0};
}
Gate Gate::phase_flip_one(Qubit target, std::vector<Qubit> controls) {
    return Gate{GateKind::PHASE_FLIP_ONE, {target}, std::move(controls), 0.0};
}

Gate Gate::inverse() const {
    Gate g = *this;
    if (kind == GateKind::ROT) {
        g.angle = -angle;
    }
    return g;
}

bool Gate::is_permutation() const {
    return kind == GateKind::X || kind == GateKind::SWAP;
}

std::size_t Gate::min_width() const {
    Qubit m = 0;
    for (Qubit q : targets) {
        m = std::max(m, q + 1);
    }
    for (Qubit q : controls) {
        m = std::max(m, q + 1);
    }
    return m;
}

void validate_gate(const Gate &gate, std::size_t width) {
    std::size_t expected_targets = 1;
    if (gate.kind == GateKind::SWAP) {
        expected_targets = 2;
    }
    if (gate.kind == GateKind::PHASE_FLIP_ALL_ZERO) {
        if (gate.targets.empty()) {
            throw ParameterError("PHASE_FLIP_ALL_ZERO needs at least one target");
        }
    } else if (gate.targets.size() != expected_targets) {
        throw ParameterError(std::string(gate_kind_name(gate.kind)) + " has the wrong number of targets");
    }
    std::vector<Qubit> all = gate.targets;
    all.insert(all.end(), gate.controls.begin(), gate.controls.end());
    for (Qubit q : all) {
        if (q >= width) {
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range for width " + std::to_string(width));
        }
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw ParameterError("gate qubits collide (targets and controls must be distinct)");
    }
}

Circuit::Circuit(std::size_t width, std::string label) : width_(width), label_(std::move(label)) {
}

void Circuit::append(Gate gate) {
    validate_gate(gate, width_);
    gates_.push_back(std::move(gate));
}

void Circuit::append(const Circuit &other) {
    if (other.width_ > width_) {
        throw ParameterError("cannot append a wider circuit");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    mark_ancillas(other.ancillas_);
}

void Circuit::mark_ancillas(std::span<const Qubit> qubits) {
    for (Qubit q : qubits) {
        if (q >= width_) {
            throw std::out_of_range("ancilla index out of range");
        }
        if (std::find(ancillas_.begin(), ancillas_.end(), q) == ancillas_.end()) {
            ancillas_.push_back(q);
        }
    }
    std::sort(ancillas_.begin(), ancillas_.end());
}

bool Circuit::is_permutation() const {
    return std::all_of(gates_.begin(), gates_.end(), [](const Gate &g) { return g.is_permutation(); });
}

Circuit inverse(const Circuit &circuit) {
    Circuit out(circuit.width(), circuit.label().empty() ? std::string{} : circuit.label() + "^-1");
    for (auto it = circuit.gates().rbegin(); it != circuit.gates().rend(); ++it) {
        out.append(it->inverse());
    }
    out.mark_ancillas(circuit.ancillas());
    return out;
}

Circuit controlled(const Circuit &circuit, std::span<const Qubit> controls) {
    std::size_t width = circuit.width();
    for (Qubit c : controls) {
        width = std::max<std::size_t>(width, c + 1);
    }
    Circuit out(width, circuit.label().empty() ? std::string{} : "c-" + circuit.label());
    for (const Gate &g : circuit.gates()) {
        Gate cg = g;
        for (Qubit c : controls) {
            if (std::find(g.targets.begin(), g.targets.end(), c) != g.targets.end() ||
                std::find(g.controls.begin(), g.controls.end(), c) != g.controls.end()) {
                throw ParameterError("control qubit " + std::to_string(c) + " collides with the controlled circuit");
            }
            cg.controls.push_back(c);
        }
        out.append(std::move(cg));
    }
    for (Qubit c : controls) {
        if (std::find(circuit.ancillas().begin(), circuit.ancillas().end(), c) != circuit.ancillas().end()) {
            throw ParameterError("control qubit collides with an ancilla of the controlled circuit");
        }
    }
    out.mark_ancillas(circuit.ancillas());
    return out;
}

Circuit pattern_controlled(const Gate &gate, std::span<const Qubit> controls, std::uint64_t pattern) {
    std::size_t width = gate.min_width();
    for (Qubit c : controls) {
        width = std::max<std::size_t>(width, c + 1);
    }
    Circuit out(width);
    std::vector<Qubit> flipped;
    for (std::size_t j = 0; j < controls.size(); ++j) {
        if (((pattern >> j) & 1u) == 0) {
            flipped.push_back(controls[j]);
        }
    }
    for (Qubit q : flipped) {
        out.append(Gate::x(q));
    }
    Gate g = gate;
    g.controls.insert(g.controls.end(), controls.begin(), controls.end());
    out.append(std::move(g));
    for (Qubit q : flipped) {
        out.append(Gate::x(q));
    }
    return out;
}

}  // namespace qrmc
