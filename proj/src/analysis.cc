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

#include "qrmc/analysis.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <unordered_map>

#include "qrmc/arith.h"
#include "qrmc/errors.h"

namespace qrmc {
namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Eigen::VectorXd least_squares(std::span<const double> x, std::span<const double> y, int degree) {
    Eigen::MatrixXd a(x.size(), degree + 1);
    Eigen::VectorXd b(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int p = 0; p <= degree; ++p) {
            a(i, p) = std::pow(x[i], p);
        }
        b(i) = y[i];
    }
    return a.colPivHouseholderQr().solve(b);
}

ScalingFit fit_depths(std::string name, std::vector<std::size_t> widths, std::vector<double> depths) {
    ScalingFit f;
    f.name = std::move(name);
    std::vector<double> x(widths.begin(), widths.end());
    f.r2_linear = polynomial_r2(x, depths, 1);
    f.r2_quadratic = polynomial_r2(x, depths, 2);
    f.quadratic_better = f.r2_quadratic > f.r2_linear;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(depths[i]));
    }
    f.exponent = least_squares(lx, ly, 1)(1);
    f.widths = std::move(widths);
    f.depths = std::move(depths);
    return f;
}

}  // namespace

ErrorModelParams ErrorModelParams::unit_prefactors() {
    ErrorModelParams p;
    // E (1 - E) = 1 / (4 pi^2), smaller root.
    p.E = (1 - std::sqrt(1 - 1 / (std::numbers::pi * std::numbers::pi))) / 2;
    return p;
}

void ErrorModelParams::validate() const {
    if (!(c > 0) || !(d > 0)) {
        throw ParameterError("c and d must be positive");
    }
    if (!(sigma >= 0)) {
        throw ParameterError("sigma must be non-negative");
    }
    if (!(E >= 0 && E <= 1)) {
        throw ParameterError("E must lie in [0, 1]");
    }
}

double ErrorModelParams::estimation_prefactor() const { return 2 * std::numbers::pi * d * std::sqrt(E * (1 - E)); }

double delta_our(const ErrorModelParams &p, double n_samp, double n_orac) {
    p.validate();
    if (!(n_orac >= 1)) {
        throw ParameterError("N_orac must be at least 1");
    }
    return p.c * p.sigma * std::exp2(-n_samp / 2) + p.estimation_prefactor() / n_orac;
}

double delta_prev(const ErrorModelParams &p, double n_orac) {
    p.validate();
    if (!(n_orac >= 1)) {
        throw ParameterError("N_orac must be at least 1");
    }
    return p.estimation_prefactor() / n_orac;
}

double delta_class(const ErrorModelParams &p, double n_orac) {
    p.validate();
    if (!(n_orac >= 1)) {
        throw ParameterError("N_orac must be at least 1");
    }
    return p.c * p.sigma / std::sqrt(n_orac);
}

Budget budget_for_error(const ErrorModelParams &p, double epsilon) {
    p.validate();
    if (!(epsilon > 0)) {
        throw ParameterError("epsilon must be positive");
    }
    Budget b;
    const double cs = p.c * p.sigma;
    if (cs > epsilon) {
        b.n_samp = static_cast<std::uint64_t>(std::ceil(2 * std::log2(cs / epsilon)));
    }
    b.n_orac = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(p.estimation_prefactor() / epsilon)));
    return b;
}

std::string ErrorCurves::to_csv() const {
    std::string out = "n_orac,delta_class,delta_prev";
    for (std::uint64_t n : n_samp_list) {
        out += ",delta_our_ns" + std::to_string(n);
    }
    out += '\n';
    for (const ErrorCurveRow &r : rows) {
        out += fmt17(r.n_orac) + ',' + fmt17(r.delta_class) + ',' + fmt17(r.delta_prev);
        for (double v : r.delta_our) {
            out += ',' + fmt17(v);
        }
        out += '\n';
    }
    return out;
}

ErrorCurves error_curves(const ErrorModelParams &p, std::span<const std::uint64_t> n_samp_list, int lo_exp,
                         int hi_exp, int points_per_decade) {
    p.validate();
    if (n_samp_list.empty() || lo_exp < 0 || hi_exp < lo_exp || points_per_decade < 1) {
        throw ParameterError("bad error-curve range");
    }
    ErrorCurves t;
    t.n_samp_list.assign(n_samp_list.begin(), n_samp_list.end());
    for (int i = lo_exp * points_per_decade; i <= hi_exp * points_per_decade; ++i) {
        ErrorCurveRow r;
        r.n_orac = i % points_per_decade == 0 ? std::pow(10.0, i / points_per_decade)
                                              : std::pow(10.0, static_cast<double>(i) / points_per_decade);
        r.delta_class = delta_class(p, r.n_orac);
        r.delta_prev = delta_prev(p, r.n_orac);
        for (std::uint64_t n : n_samp_list) {
            r.delta_our.push_back(delta_our(p, static_cast<double>(n), r.n_orac));
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

ResourceReport resources(const Circuit &circuit) {
    ResourceReport r;
    r.total_qubits = circuit.width();
    r.ancilla_qubits = circuit.ancillas().size();
    r.gate_count = circuit.size();
    std::vector<std::size_t> level(circuit.width(), 0);
    for (const Gate &g : circuit.gates()) {
        ++r.gates_by_kind[std::string(gate_kind_name(g.kind)) + "/c" + std::to_string(g.controls.size())];
        std::size_t layer = 0;
        for (Qubit q : g.targets) {
            layer = std::max(layer, level[q]);
        }
        for (Qubit q : g.controls) {
            layer = std::max(layer, level[q]);
        }
        ++layer;
        for (Qubit q : g.targets) {
            level[q] = layer;
        }
        for (Qubit q : g.controls) {
            level[q] = layer;
        }
        r.depth = std::max(r.depth, layer);
    }
    return r;
}

std::size_t fredkin_depth(const Circuit &circuit) {
    std::size_t total = 0;
    std::vector<Qubit> block_controls;
    std::unordered_map<Qubit, std::size_t> level;
    std::size_t block_depth = 0;
    for (const Gate &g : circuit.gates()) {
        if (g.kind != GateKind::SWAP || g.controls.empty()) {
            continue;
        }
        std::vector<Qubit> controls = g.controls;
        std::sort(controls.begin(), controls.end());
        if (controls != block_controls) {
            total += block_depth;
            block_depth = 0;
            level.clear();
            block_controls = std::move(controls);
        }
        const std::size_t layer = std::max(level[g.targets[0]], level[g.targets[1]]) + 1;
        level[g.targets[0]] = level[g.targets[1]] = layer;
        block_depth = std::max(block_depth, layer);
    }
    return total + block_depth;
}

std::size_t cnot_count(const Circuit &circuit) {
    return static_cast<std::size_t>(std::count_if(circuit.gates().begin(), circuit.gates().end(), [](const Gate &g) {
        return g.kind == GateKind::X && g.controls.size() == 1;
    }));
}

double polynomial_r2(std::span<const double> x, std::span<const double> y, int degree) {
    if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree) + 1) {
        throw ParameterError("not enough points for the fit");
    }
    const Eigen::VectorXd coef = least_squares(x, y, degree);
    double mean = 0;
    for (double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double fit = 0;
        for (int p = 0; p <= degree; ++p) {
            fit += coef(p) * std::pow(x[i], p);
        }
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    return ss_tot == 0 ? 1.0 : 1 - ss_res / ss_tot;
}

PrngResourceClaims check_prng_resource_claims(const PcgSpec &spec) {
    spec.validate();
    PrngResourceClaims out;
    for (std::size_t r : {4u, 8u, 16u}) {
        const std::size_t t = static_cast<std::size_t>(std::countr_zero(r));
        const std::size_t n = t + r;
        const PcgSpec s = PcgSpec::make({1, 0, std::uint64_t{1} << n, 0}, PermutationSpec::random_rotation(r));
        const Circuit c = build_perm(s, Register::range(0, n));
        FormulaCheck f;
        f.name = "rotation r=" + std::to_string(r);
        f.measured = fredkin_depth(c);
        f.expected = 2 * r - t - 2;
        f.generic_depth = resources(c).depth;
        f.ok = f.measured == f.expected;
        out.rotation.push_back(f);
    }
    for (const auto &[n, s] : std::vector<std::pair<std::size_t, std::size_t>>{{8, 2}, {8, 4}, {8, 6}, {16, 8}}) {
        const PcgSpec p = PcgSpec::make({1, 0, std::uint64_t{1} << n, 0}, PermutationSpec::xorshift(s));
        const Circuit c = build_perm(p, Register::range(0, n));
        FormulaCheck f;
        f.name = "xorshift n=" + std::to_string(n) + " s=" + std::to_string(s);
        f.measured = cnot_count(c);
        f.expected = s;
        f.generic_depth = resources(c).depth;
        f.ok = f.measured == f.expected;
        out.xorshift.push_back(f);
    }

    std::vector<std::size_t> widths;
    std::vector<double> add_depth, mul_depth;
    for (std::size_t w = 3; w <= 6; ++w) {
        const std::uint64_t m = (std::uint64_t{1} << w) - 1;
        const Register reg = Register::range(0, w);
        const Register scratch = Register::range(static_cast<Qubit>(w), modmul_scratch_size(w));
        widths.push_back(w);
        add_depth.push_back(static_cast<double>(resources(build_modadd_const(reg, m - 2, m, scratch.slice(0, 2))).depth));
        mul_depth.push_back(static_cast<double>(resources(build_modmul_const_inplace(reg, m - 2, m, scratch)).depth));
    }
    out.modadd = fit_depths("modadd", widths, add_depth);
    out.modmul = fit_depths("modmul", widths, mul_depth);

    const Register prn = Register::range(0, spec.n_prn);
    out.perm = resources(build_perm(spec, prn));
    if (spec.lcg.m > 1) {
        out.p_prn = resources(build_p_prn(spec, prn, Register::range(static_cast<Qubit>(spec.n_prn),
                                                                      modmul_scratch_size(spec.n_prn))));
    }

    out.all_ok = out.modmul.quadratic_better;
    for (const auto &f : out.rotation) {
        out.all_ok = out.all_ok && f.ok;
    }
    for (const auto &f : out.xorshift) {
        out.all_ok = out.all_ok && f.ok;
    }
    return out;
}

PeriodCheck period_budget_check(const PcgSpec &spec, std::uint64_t n_ran, std::uint64_t n_samp) {
    PeriodCheck c;
    c.needed = n_ran * n_samp;
    c.period = period(spec.lcg);
    if (c.needed == 0) {
        c.message = "nothing drawn";
        return c;
    }
    if (!c.period) {
        c.ok = false;
        c.message = "seed is not on a cycle of the generator";
        return c;
    }
    if (c.needed > *c.period) {
        c.ok = false;
        c.message = "N_ran * N_samp = " + std::to_string(c.needed) + " exceeds the period " + std::to_string(*c.period);
        return c;
    }
    c.message = "N_ran * N_samp = " + std::to_string(c.needed) + " fits in the period " + std::to_string(*c.period);
    return c;
}

}  // namespace qrmc
