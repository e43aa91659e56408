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

#include "qrmc/arith.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qrmc/errors.h"

namespace qrmc {
namespace {

std::size_t width_covering(std::initializer_list<std::span<const Qubit>> groups) {
    std::size_t w = 0;
    for (auto g : groups) {
        for (Qubit q : g) {
            w = std::max<std::size_t>(w, q + 1);
        }
    }
    return w;
}

void require_disjoint(std::initializer_list<std::span<const Qubit>> groups) {
    std::vector<Qubit> all;
    for (auto g : groups) {
        all.insert(all.end(), g.begin(), g.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw ParameterError("registers overlap");
    }
}

void require_scratch(const Register &scratch, std::size_t need) {
    if (scratch.width() < need) {
        throw ParameterError("need " + std::to_string(need) + " scratch qubits, got " +
                             std::to_string(scratch.width()));
    }
}

std::uint64_t low_mask(std::size_t w) {
    return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
}

void check_modulus(const Register &reg, std::uint64_t m) {
    if (m == 0) {
        throw ParameterError("modulus must be positive");
    }
    if (reg.width() < 64 && m > (std::uint64_t{1} << reg.width())) {
        throw ParameterError("modulus " + std::to_string(m) + " does not fit a " + std::to_string(reg.width()) +
                             "-qubit register");
    }
}

}  // namespace

Register::Register(std::vector<Qubit> qubits) : qubits_(std::move(qubits)) {
    std::vector<Qubit> sorted = qubits_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ParameterError("register qubits must be distinct");
    }
}

Register Register::range(Qubit start, std::size_t width) {
    std::vector<Qubit> q(width);
    std::iota(q.begin(), q.end(), start);
    return Register(std::move(q));
}

Register Register::slice(std::size_t from, std::size_t count) const {
    if (from + count > qubits_.size()) {
        throw std::out_of_range("register slice out of range");
    }
    return Register(std::vector<Qubit>(qubits_.begin() + from, qubits_.begin() + from + count));
}

Register Register::extended(Qubit q) const {
    std::vector<Qubit> out = qubits_;
    out.push_back(q);
    return Register(std::move(out));
}

bool Register::contains(Qubit q) const {
    return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
}

std::uint64_t Register::read(std::uint64_t basis_index) const {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < qubits_.size(); ++j) {
        v |= ((basis_index >> qubits_[j]) & 1u) << j;
    }
    return v;
}

std::uint64_t Register::write(std::uint64_t basis_index, std::uint64_t value) const {
    for (std::size_t j = 0; j < qubits_.size(); ++j) {
        const std::uint64_t bit = std::uint64_t{1} << qubits_[j];
        basis_index = ((value >> j) & 1u) ? (basis_index | bit) : (basis_index & ~bit);
    }
    return basis_index;
}

std::size_t bits_for_modulus(std::uint64_t m) {
    if (m <= 2) {
        return 1;
    }
    return static_cast<std::size_t>(std::bit_width(m - 1));
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) {
        return 0;
    }
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1u) {
            result = mod_mul(result, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
    if (m < 2) {
        throw ParameterError("modulus must be at least 2");
    }
    // Extended Euclid on signed values.
    __int128 old_r = static_cast<__int128>(a % m), r = m;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        const __int128 q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) {
        throw ParameterError("no inverse of " + std::to_string(a) + " modulo " + std::to_string(m));
    }
    __int128 inv = old_s % static_cast<__int128>(m);
    if (inv < 0) {
        inv += m;
    }
    return static_cast<std::uint64_t>(inv);
}

Circuit build_add_const(const Register &reg, std::uint64_t k) {
    const std::size_t w = reg.width();
    if (w == 0) {
        throw ParameterError("empty register");
    }
    if (w < 64 && k >= (std::uint64_t{1} << w)) {
        throw ParameterError("constant " + std::to_string(k) + " out of range for a " + std::to_string(w) +
                             "-qubit register");
    }
    Circuit c(width_covering({reg}), "add_const");
    for (std::size_t j = 0; j < w; ++j) {
        if (((k >> j) & 1u) == 0) {
            continue;
        }
        // Increment the sub-register [j, w): flip bit i when bits j..i-1 are all 1.
        for (std::size_t i = w; i-- > j;) {
            std::vector<Qubit> controls;
            for (std::size_t l = j; l < i; ++l) {
                controls.push_back(reg[l]);
            }
            c.append(Gate::x(reg[i], std::move(controls)));
        }
    }
    return c;
}

Circuit build_ctrl_add_const(const Register &reg, std::uint64_t k, Qubit control) {
    if (reg.contains(control)) {
        throw ParameterError("control qubit lies inside the register");
    }
    const Qubit controls[] = {control};
    return controlled(build_add_const(reg, k), controls);
}

Circuit build_compare_less(const Register &x, const Register &y, Qubit flag) {
    const std::size_t w = x.width();
    if (w == 0 || y.width() != w) {
        throw ParameterError("compare_less needs two nonempty registers of equal width");
    }
    const Qubit f[] = {flag};
    require_disjoint({x, y, f});
    Circuit c(width_covering({x, y, f}), "compare_less");
    // x_j <- x_j xor y_j marks the differing bits.
    for (std::size_t j = 0; j < w; ++j) {
        c.append(Gate::x(x[j], {y[j]}));
    }
    // x < y iff the highest differing bit i has y_i = 1. From the top down,
    // each term fires on "d_i = 1, y_i = 1, all higher d negated"; the X after
    // each term leaves d_i negated for the lower terms.
    for (std::size_t i = w; i-- > 0;) {
        std::vector<Qubit> controls{x[i], y[i]};
        for (std::size_t j = i + 1; j < w; ++j) {
            controls.push_back(x[j]);
        }
        c.append(Gate::x(flag, std::move(controls)));
        c.append(Gate::x(x[i]));
    }
    for (std::size_t j = 0; j < w; ++j) {
        c.append(Gate::x(x[j]));
    }
    for (std::size_t j = 0; j < w; ++j) {
        c.append(Gate::x(x[j], {y[j]}));
    }
    return c;
}

Circuit build_compare_less_const(const Register &x, std::uint64_t k, Qubit flag) {
    const std::size_t w = x.width();
    if (w == 0 || w >= 63) {
        throw ParameterError("compare_less_const register width out of range");
    }
    if (k > (std::uint64_t{1} << w)) {
        throw ParameterError("comparison constant exceeds 2^width");
    }
    if (x.contains(flag)) {
        throw ParameterError("flag qubit lies inside the register");
    }
    // Treat the flag as bit w of an extended register: subtracting K flips it
    // exactly when x < K; adding K back to the low bits restores x.
    const Register ext = x.extended(flag);
    const std::uint64_t sub = ((std::uint64_t{1} << (w + 1)) - k) & low_mask(w + 1);
    Circuit c(width_covering({ext}), "compare_less_const");
    c.append(build_add_const(ext, sub));
    c.append(build_add_const(x, k & low_mask(w)));
    return c;
}

Circuit build_modadd_const(const Register &reg, std::uint64_t cst, std::uint64_t m, const Register &scratch) {
    check_modulus(reg, m);
    if (cst >= m) {
        throw ParameterError("modular addend must be below the modulus");
    }
    require_scratch(scratch, 2);
    const Qubit high = scratch[0];
    const Qubit wrap = scratch[1];
    const Qubit s2[] = {high, wrap};
    require_disjoint({reg, s2});
    const std::size_t w = reg.width();
    Circuit c(width_covering({reg, s2}), "modadd_const");
    c.mark_ancillas(s2);
    if (cst == 0) {
        return c;
    }
    const Register ext = reg.extended(high);
    const std::uint64_t full = std::uint64_t{1} << (w + 1);
    c.append(build_add_const(ext, cst));
    c.append(build_add_const(ext, full - m));
    // high is set iff x + c < m (no wrap).
    c.append(Gate::x(wrap, {high}));
    c.append(build_ctrl_add_const(ext, m, wrap));
    // No wrap iff the result is >= c; clear the flag with that test.
    c.append(build_compare_less_const(reg, cst, wrap));
    c.append(Gate::x(wrap));
    return c;
}

Circuit build_modmul_accumulate(const Register &x, const Register &target, std::uint64_t a, std::uint64_t m,
                                const Register &scratch) {
    check_modulus(target, m);
    require_scratch(scratch, 2);
    const Register s2 = scratch.slice(0, 2);
    require_disjoint({x, target, s2});
    Circuit c(width_covering({x, target, s2}), "modmul_accumulate");
    c.mark_ancillas(s2.qubits());
    std::uint64_t term = a % m;
    for (std::size_t j = 0; j < x.width(); ++j) {
        if (term != 0) {
            const Qubit ctl[] = {x[j]};
            c.append(controlled(build_modadd_const(target, term, m, s2), ctl));
        }
        term = mod_mul(term, 2, m);
    }
    return c;
}

Circuit build_modmul_const_inplace(const Register &reg, std::uint64_t a, std::uint64_t m, const Register &scratch) {
    check_modulus(reg, m);
    const std::uint64_t a_red = a % m;
    const std::uint64_t a_inv = mod_inverse(a_red, m);
    const std::size_t w = reg.width();
    require_scratch(scratch, modmul_scratch_size(w));
    const Register work = scratch.slice(0, w);
    const Register s2 = scratch.slice(w, 2);
    require_disjoint({reg, work, s2});
    Circuit c(width_covering({reg, work, s2}), "modmul_inplace");
    c.mark_ancillas(work.qubits());
    c.mark_ancillas(s2.qubits());
    if (a_red == 1 % m) {
        return c;
    }
    c.append(build_modmul_accumulate(reg, work, a_red, m, s2));
    for (std::size_t j = 0; j < w; ++j) {
        c.append(Gate::swap(reg[j], work[j]));
    }
    c.append(inverse(build_modmul_accumulate(reg, work, a_inv, m, s2)));
    return c;
}

Circuit build_modexp_mul(const Register &k_reg, const Register &target, std::uint64_t a, std::uint64_t m,
                         const Register &scratch) {
    check_modulus(target, m);
    mod_inverse(a % m, m);
    require_scratch(scratch, modmul_scratch_size(target.width()));
    require_disjoint({k_reg, target, scratch});
    Circuit c(width_covering({k_reg, target, scratch}), "modexp_mul");
    c.mark_ancillas(scratch.slice(0, modmul_scratch_size(target.width())).qubits());
    std::uint64_t factor = a % m;
    for (std::size_t j = 0; j < k_reg.width(); ++j) {
        const Qubit ctl[] = {k_reg[j]};
        c.append(controlled(build_modmul_const_inplace(target, factor, m, scratch), ctl));
        factor = mod_mul(factor, factor, m);
    }
    return c;
}

}  // namespace qrmc
