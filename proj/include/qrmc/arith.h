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

// Reversible integer arithmetic on qubit registers.
//
// Every builder returns a Circuit of X/SWAP gates (possibly multi-controlled)
// whose width is one past the largest qubit it touches; callers append it
// into wider circuits. Builders that need scratch space take it explicitly as
// a Register of clean qubits and return it clean for every input satisfying
// the documented promise. For inputs outside the promise (x >= m) the
// circuits are still permutations, but the result and the scratch qubits
// are unspecified.

#ifndef QRMC_ARITH_H
#define QRMC_ARITH_H

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "qrmc/circuit.h"

namespace qrmc {

/// An ordered list of distinct qubits, least-significant first.
class Register {
   public:
    Register() = default;
    explicit Register(std::vector<Qubit> qubits);
    Register(std::initializer_list<Qubit> qubits) : Register(std::vector<Qubit>(qubits)) {}

    /// Qubits [start, start + width).
    static Register range(Qubit start, std::size_t width);

    std::size_t width() const { return qubits_.size(); }
    Qubit operator[](std::size_t i) const { return qubits_[i]; }
    const std::vector<Qubit> &qubits() const { return qubits_; }
    operator std::span<const Qubit>() const { return qubits_; }

    /// Sub-register [from, from + count).
    Register slice(std::size_t from, std::size_t count) const;
    /// This register with `q` appended as a new most-significant bit.
    Register extended(Qubit q) const;

    bool contains(Qubit q) const;

    /// Value encoded in a basis index.
    std::uint64_t read(std::uint64_t basis_index) const;
    /// `basis_index` with this register overwritten by `value`.
    std::uint64_t write(std::uint64_t basis_index, std::uint64_t value) const;

   private:
    std::vector<Qubit> qubits_;
};

/// ceil(log2 m) qubits, at least one.
std::size_t bits_for_modulus(std::uint64_t m);

/// b with a*b = 1 (mod m), 0 < b < m. Throws ParameterError if gcd(a, m) != 1.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m);

/// |x> -> |(x + k) mod 2^w>. Ancilla-free carry cascade: each set bit j of k
/// increments the sub-register [j, w).
Circuit build_add_const(const Register &reg, std::uint64_t k);

/// As build_add_const, but only when `control` is |1>.
Circuit build_ctrl_add_const(const Register &reg, std::uint64_t k, Qubit control);

/// |x>|y>|f> -> |x>|y>|f xor (x < y)>, equal widths, no ancillas.
Circuit build_compare_less(const Register &x, const Register &y, Qubit flag);

/// |x>|f> -> |x>|f xor (x < K)> for 0 <= K <= 2^w.
Circuit build_compare_less_const(const Register &x, std::uint64_t k, Qubit flag);

/// |x> -> |(x + c) mod m> for x < m; 0 <= c < m <= 2^w.
/// Uses scratch[0] (overflow bit) and scratch[1] (wrap flag).
Circuit build_modadd_const(const Register &reg, std::uint64_t c, std::uint64_t m, const Register &scratch);

/// |x>|t> -> |x>|(t + a x) mod m> for t < m, by controlled modular additions
/// of a*2^j mod m. `scratch` as for build_modadd_const.
Circuit build_modmul_accumulate(const Register &x, const Register &target, std::uint64_t a, std::uint64_t m,
                                const Register &scratch);

/// |x> -> |a x mod m> in place for x < m, gcd(a, m) = 1: multiply into a
/// work register, swap, then run the inverse of multiplying by a^-1 mod m.
/// Needs width(reg) + 2 scratch qubits. Throws ParameterError when a has no
/// inverse mod m.
Circuit build_modmul_const_inplace(const Register &reg, std::uint64_t a, std::uint64_t m, const Register &scratch);

/// |k>|x> -> |k>|a^k x mod m>: one controlled in-place multiply by
/// a^(2^j) mod m per bit j of k. Scratch as for build_modmul_const_inplace.
Circuit build_modexp_mul(const Register &k_reg, const Register &target, std::uint64_t a, std::uint64_t m,
                         const Register &scratch);

/// Scratch qubits build_modmul_const_inplace needs for a register of `width`.
inline std::size_t modmul_scratch_size(std::size_t width) { return width + 2; }

}  // namespace qrmc

#endif
