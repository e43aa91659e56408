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

#include "qrmc/prng.h"

#include <bit>
#include <string>

#include "qrmc/errors.h"

namespace qrmc {
namespace {

std::uint64_t low_bits(std::size_t w) {
    return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
}

std::uint64_t rotate_right(std::uint64_t y, std::size_t k, std::size_t r) {
    k %= r;
    if (k == 0) {
        return y;
    }
    return ((y >> k) | (y << (r - k))) & low_bits(r);
}

}  // namespace

void LcgParams::validate() const {
    if (a == 0) {
        throw ParameterError("LCG multiplier must be positive");
    }
    if (m == 0) {
        throw ParameterError("LCG modulus must be positive");
    }
    if (seed >= m) {
        throw ParameterError("LCG seed must be below the modulus");
    }
}

std::size_t PermutationSpec::control_bits() const {
    return kind == Kind::RandomRotation ? static_cast<std::size_t>(std::countr_zero(rotation_bits)) : 0;
}

void PermutationSpec::validate(std::size_t width) const {
    switch (kind) {
        case Kind::None:
            return;
        case Kind::RandomRotation:
            if (rotation_bits < 2 || !std::has_single_bit(rotation_bits)) {
                throw ParameterError("random rotation width must be a power of two >= 2");
            }
            if (control_bits() + rotation_bits > width) {
                throw ParameterError("random rotation needs t + r <= register width");
            }
            return;
        case Kind::Xorshift:
            if (shift < 1 || shift + 1 > width) {
                throw ParameterError("xorshift shift must satisfy 1 <= s <= n - 1");
            }
            return;
    }
}

std::string PermutationSpec::describe() const {
    switch (kind) {
        case Kind::None:
            return "none";
        case Kind::RandomRotation:
            return "rotation:" + std::to_string(rotation_bits);
        case Kind::Xorshift:
            return "xorshift:" + std::to_string(shift);
    }
    return "?";
}

PcgSpec PcgSpec::make(const LcgParams &lcg, const PermutationSpec &perm, std::optional<OutputWindow> window) {
    lcg.validate();
    PcgSpec s;
    s.lcg = lcg;
    s.perm = perm;
    s.n_prn = bits_for_modulus(lcg.m);
    perm.validate(s.n_prn);
    if (window) {
        s.window = *window;
    } else if (perm.kind == PermutationSpec::Kind::RandomRotation) {
        s.window = OutputWindow{s.n_prn - perm.control_bits() - perm.rotation_bits, perm.rotation_bits};
    } else {
        s.window = OutputWindow{0, s.n_prn};
    }
    s.validate();
    return s;
}

void PcgSpec::validate() const {
    lcg.validate();
    if (n_prn != bits_for_modulus(lcg.m)) {
        throw ParameterError("PRN register width must be ceil(log2 m)");
    }
    perm.validate(n_prn);
    if (window.bits == 0 || window.offset + window.bits > n_prn) {
        throw ParameterError("output window out of range");
    }
    switch (perm.kind) {
        case PermutationSpec::Kind::None:
            if (window.offset != 0 || window.bits != n_prn) {
                throw ParameterError("without a permutation the window is the whole register");
            }
            break;
        case PermutationSpec::Kind::RandomRotation:
            if (window.bits != perm.rotation_bits ||
                window.offset != n_prn - perm.control_bits() - perm.rotation_bits) {
                throw ParameterError("random rotation delivers exactly the rotated middle bits");
            }
            break;
        case PermutationSpec::Kind::Xorshift:
            if (window.offset + window.bits != n_prn) {
                throw ParameterError("xorshift windows keep the top bits and drop the bottom ones");
            }
            break;
    }
}

std::uint64_t lcg_next(const LcgParams &p, std::uint64_t x) {
    if (x >= p.m) {
        throw ParameterError("LCG state out of range");
    }
    return (mod_mul(p.a % p.m, x, p.m) + p.c % p.m) % p.m;
}

std::pair<std::uint64_t, std::uint64_t> lcg_jump_coefficients(const LcgParams &p, std::uint64_t k) {
    const std::uint64_t ak = mod_pow(p.a, k, p.m);
    if (p.c % p.m == 0) {
        return {ak, 0};
    }
    std::uint64_t inv = 0;
    try {
        inv = mod_inverse((p.a + p.m - 1) % p.m, p.m);
    } catch (const ParameterError &) {
        throw ParameterError("jump-ahead with c != 0 needs gcd(a - 1, m) = 1");
    }
    const std::uint64_t geometric = mod_mul((ak + p.m - 1) % p.m, inv, p.m);
    return {ak, mod_mul(p.c % p.m, geometric, p.m)};
}

std::uint64_t lcg_jump(const LcgParams &p, std::uint64_t x, std::uint64_t k) {
    if (x >= p.m) {
        throw ParameterError("LCG state out of range");
    }
    if (k == 0) {
        return x;
    }
    const auto [ak, bk] = lcg_jump_coefficients(p, k);
    return (mod_mul(ak, x, p.m) + bk) % p.m;
}

std::uint64_t perm_apply(const PermutationSpec &perm, std::size_t width, std::uint64_t x) {
    perm.validate(width);
    if (x > low_bits(width)) {
        throw ParameterError("value does not fit the permutation width");
    }
    switch (perm.kind) {
        case PermutationSpec::Kind::None:
            return x;
        case PermutationSpec::Kind::RandomRotation: {
            const std::size_t t = perm.control_bits();
            const std::size_t r = perm.rotation_bits;
            const std::size_t mid_offset = width - t - r;
            const std::uint64_t k = x >> (width - t);
            const std::uint64_t mid = (x >> mid_offset) & low_bits(r);
            const std::uint64_t rotated = rotate_right(mid, k, r);
            return (x & ~(low_bits(r) << mid_offset)) | (rotated << mid_offset);
        }
        case PermutationSpec::Kind::Xorshift:
            return x ^ (x >> (width - perm.shift));
    }
    return x;
}

std::uint64_t pcg_output(const PcgSpec &spec, std::uint64_t state) {
    const std::uint64_t permuted = perm_apply(spec.perm, spec.n_prn, state);
    return (permuted >> spec.window.offset) & low_bits(spec.window.bits);
}

std::uint64_t pcg_state(const PcgSpec &spec, std::uint64_t n) {
    // Plain iteration: valid for every LCG, including those without a
    // closed-form jump.
    std::uint64_t x = spec.lcg.seed;
    for (std::uint64_t i = 0; i < n; ++i) {
        x = lcg_next(spec.lcg, x);
    }
    return x;
}

std::uint64_t pcg_value(const PcgSpec &spec, std::uint64_t n) {
    return pcg_output(spec, pcg_state(spec, n));
}

std::optional<std::uint64_t> period(const LcgParams &p) {
    p.validate();
    if (p.m > (std::uint64_t{1} << 24)) {
        throw ParameterError("period scan is limited to m <= 2^24");
    }
    std::uint64_t x = p.seed;
    for (std::uint64_t steps = 1; steps <= p.m; ++steps) {
        x = lcg_next(p, x);
        if (x == p.seed) {
            return steps;
        }
    }
    return std::nullopt;
}

Circuit build_perm(const PcgSpec &spec, const Register &prn) {
    spec.validate();
    const std::size_t n = spec.n_prn;
    if (prn.width() != n) {
        throw ParameterError("PRN register width does not match the generator");
    }
    std::size_t width = 0;
    for (Qubit q : prn.qubits()) {
        width = std::max<std::size_t>(width, q + 1);
    }
    Circuit c(width, "perm:" + spec.perm.describe());
    // Digit d of the written bit string (1 = most significant) lives on
    // register position n - d.
    const auto digit = [&](std::size_t d) { return prn[n - d]; };
    switch (spec.perm.kind) {
        case PermutationSpec::Kind::None:
            break;
        case PermutationSpec::Kind::RandomRotation: {
            const std::size_t t = spec.perm.control_bits();
            const std::size_t r = spec.perm.rotation_bits;
            const auto middle = [&](std::size_t s) { return digit(t + s); };
            for (std::size_t i = 1; i <= t; ++i) {
                const std::size_t J = std::size_t{1} << (t - i);
                const std::size_t L = r / J;
                const Qubit control = digit(i);
                // J groups of stride J; each chain of L - 1 swaps, walked from
                // the bottom pair up, rotates its group right by one slot.
                for (std::size_t g = 1; g <= J; ++g) {
                    for (std::size_t q = L - 1; q-- > 0;) {
                        c.append(Gate::swap(middle(q * J + g), middle((q + 1) * J + g), {control}));
                    }
                }
            }
            break;
        }
        case PermutationSpec::Kind::Xorshift: {
            const std::size_t s = spec.perm.shift;
            for (std::size_t i = s; i >= 1; --i) {
                c.append(Gate::x(digit(n - s + i), {digit(i)}));
            }
            break;
        }
    }
    return c;
}

Circuit build_p_prn(const PcgSpec &spec, const Register &prn, const Register &scratch) {
    spec.validate();
    const LcgParams &p = spec.lcg;
    mod_inverse(p.a % p.m, p.m);
    const Circuit g = build_perm(spec, prn);
    const Circuit mul = build_modmul_const_inplace(prn, p.a, p.m, scratch);
    Circuit c(std::max(g.width(), mul.width()), "P_PRN");
    c.append(inverse(g));
    c.append(mul);
    if (p.c % p.m != 0) {
        c.append(build_modadd_const(prn, p.c % p.m, p.m, scratch.slice(prn.width(), 2)));
    }
    c.append(g);
    return c;
}

Circuit build_j_prn(const PcgSpec &spec, const Register &sample_index, const Register &prn, std::uint64_t n_ran,
                    const Register &scratch) {
    spec.validate();
    if (n_ran == 0) {
        throw ParameterError("N_ran must be positive");
    }
    const LcgParams &p = spec.lcg;
    mod_inverse(p.a % p.m, p.m);
    std::size_t width = 0;
    for (const Register *r : {&sample_index, &prn, &scratch}) {
        for (Qubit q : r->qubits()) {
            width = std::max<std::size_t>(width, q + 1);
        }
    }
    Circuit c(width, "J_PRN");
    const std::uint64_t first = lcg_next(p, p.seed);
    for (std::size_t j = 0; j < prn.width(); ++j) {
        if ((first >> j) & 1u) {
            c.append(Gate::x(prn[j]));
        }
    }
    const Register add_scratch = scratch.slice(prn.width(), 2);
    for (std::size_t j = 0; j < sample_index.width(); ++j) {
        const std::uint64_t steps = n_ran << j;
        const auto [ak, bk] = lcg_jump_coefficients(p, steps);
        const Qubit ctl[] = {sample_index[j]};
        if (ak != 1 % p.m) {
            c.append(controlled(build_modmul_const_inplace(prn, ak, p.m, scratch), ctl));
        }
        if (bk != 0) {
            c.append(controlled(build_modadd_const(prn, bk, p.m, add_scratch), ctl));
        }
    }
    c.append(build_perm(spec, prn));
    return c;
}

}  // namespace qrmc
