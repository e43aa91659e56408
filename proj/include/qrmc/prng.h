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

// Permuted congruential generators, classically and as reversible circuits.
//
// Sequence convention: the seed is the background state x~_0, the n-th
// background state is x~_n = T^n(x~_0) with T(x) = (a x + c) mod m, and the
// n-th delivered number is x_n = window(g(x~_n)). The first number handed to
// a computation is x_1, so sample i of a computation that draws N numbers per
// sample starts at x_{iN+1}.
//
// Bit strings follow the usual written order: in "x_1 x_2 ... x_n" the first
// digit is the most significant, which lives on register qubit n-1.

#ifndef QRMC_PRNG_H
#define QRMC_PRNG_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "qrmc/arith.h"
#include "qrmc/circuit.h"

namespace qrmc {

struct LcgParams {
    std::uint64_t a = 1;
    std::uint64_t c = 0;
    std::uint64_t m = 2;
    std::uint64_t seed = 0;

    /// Checks a > 0, m > 0, seed < m. Throws ParameterError.
    void validate() const;
    bool operator==(const LcgParams &) const = default;
};

struct PermutationSpec {
    enum class Kind { None, RandomRotation, Xorshift };

    Kind kind = Kind::None;
    /// RandomRotation: r middle bits (a power of two), rotated by the top
    /// t = log2(r) bits.
    std::size_t rotation_bits = 0;
    /// Xorshift: the low `shift` bits are XORed with the top `shift` bits.
    std::size_t shift = 0;

    static PermutationSpec none() { return {}; }
    static PermutationSpec random_rotation(std::size_t r) { return {Kind::RandomRotation, r, 0}; }
    static PermutationSpec xorshift(std::size_t s) { return {Kind::Xorshift, 0, s}; }

    std::size_t control_bits() const;
    /// Throws ParameterError if the permutation does not fit `width` bits.
    void validate(std::size_t width) const;
    std::string describe() const;
    bool operator==(const PermutationSpec &) const = default;
};

/// Register bits [offset, offset + bits) that form the delivered number.
struct OutputWindow {
    std::size_t offset = 0;
    std::size_t bits = 0;
    bool operator==(const OutputWindow &) const = default;
};

struct PcgSpec {
    LcgParams lcg;
    PermutationSpec perm;
    /// ceil(log2 m).
    std::size_t n_prn = 1;
    OutputWindow window;

    /// Builds a spec with n_prn = ceil(log2 m) and, unless given, the default
    /// window: the middle r bits for random rotation, the full register
    /// otherwise. Validates everything.
    static PcgSpec make(const LcgParams &lcg, const PermutationSpec &perm = PermutationSpec::none(),
                        std::optional<OutputWindow> window = std::nullopt);

    /// One past the largest deliverable number, 2^window.bits.
    std::uint64_t m_prn() const { return std::uint64_t{1} << window.bits; }

    void validate() const;
    bool operator==(const PcgSpec &) const = default;
};

// Classical reference.

/// (a x + c) mod m. Throws ParameterError for x >= m.
std::uint64_t lcg_next(const LcgParams &p, std::uint64_t x);

/// The k-fold lcg_next in closed form: (A_k x + B_k) mod m with
/// A_k = a^k mod m and B_k = c (A_k - 1) / (a - 1) mod m, the division done
/// by a modular inverse. Throws ParameterError when c != 0 and
/// gcd(a - 1, m) != 1.
std::uint64_t lcg_jump(const LcgParams &p, std::uint64_t x, std::uint64_t k);

/// (A_k, B_k) as above.
std::pair<std::uint64_t, std::uint64_t> lcg_jump_coefficients(const LcgParams &p, std::uint64_t k);

/// The permutation g on `width`-bit integers.
std::uint64_t perm_apply(const PermutationSpec &perm, std::size_t width, std::uint64_t x);

/// Window bits of g(state).
std::uint64_t pcg_output(const PcgSpec &spec, std::uint64_t state);

/// Background state x~_n, by iteration.
std::uint64_t pcg_state(const PcgSpec &spec, std::uint64_t n);

/// Delivered number x_n (n >= 1 in normal use).
std::uint64_t pcg_value(const PcgSpec &spec, std::uint64_t n);

/// Least p > 0 with T^p(seed) = seed, or nullopt if the seed is not on a
/// cycle. Scans at most m steps; throws ParameterError for m > 2^24.
std::optional<std::uint64_t> period(const LcgParams &p);

// Circuits. `prn` must have spec.n_prn qubits.

/// g as an ancilla-free circuit: Fredkin networks for random rotation
/// (rotation by 2^(t-i) controlled by the i-th top bit), CNOTs applied from
/// the last pair up for xorshift.
Circuit build_perm(const PcgSpec &spec, const Register &prn);

/// |g(x~)> -> |g(T(x~))>: g^-1, in-place multiply by a, add c, g.
/// Needs modmul_scratch_size(n_prn) clean scratch qubits.
Circuit build_p_prn(const PcgSpec &spec, const Register &prn, const Register &scratch);

/// |i>|0> -> |i>|g(x~_{i N_ran + 1})>: load x~_1, then for each bit j of i a
/// controlled affine step T^(N_ran 2^j) (in-place multiply by A, add B), and
/// finally g. Same scratch as build_p_prn.
Circuit build_j_prn(const PcgSpec &spec, const Register &sample_index, const Register &prn, std::uint64_t n_ran,
                    const Register &scratch);

}  // namespace qrmc

#endif
