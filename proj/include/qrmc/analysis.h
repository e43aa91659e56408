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

// Error trade-offs between sampled and exact Monte Carlo targets, and
// circuit resource accounting.

#ifndef QRMC_ANALYSIS_H
#define QRMC_ANALYSIS_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrmc/circuit.h"
#include "qrmc/prng.h"

namespace qrmc {

// Error model.

struct ErrorModelParams {
    double c = 1;
    double sigma = 1;
    double d = 1;
    /// Target amplitude, E_samp or E_true.
    double E = 0.5;

    /// c = sigma = d = 1 and E chosen so that 2 pi d sqrt(E (1 - E)) = 1.
    static ErrorModelParams unit_prefactors();
    void validate() const;

    /// 2 pi d sqrt(E (1 - E)).
    double estimation_prefactor() const;
};

/// c sigma 2^{-n_samp/2} + 2 pi d sqrt(E(1-E)) / N_orac.
double delta_our(const ErrorModelParams &p, double n_samp, double n_orac);
/// 2 pi d sqrt(E(1-E)) / N_orac.
double delta_prev(const ErrorModelParams &p, double n_orac);
/// c sigma / sqrt(N_orac).
double delta_class(const ErrorModelParams &p, double n_orac);

struct Budget {
    std::uint64_t n_samp = 0;
    std::uint64_t n_orac = 1;
};

/// n_samp = ceil(2 log2(c sigma / eps)) (at least 0) and
/// N_orac = ceil(2 pi d sqrt(E(1-E)) / eps) (at least 1).
Budget budget_for_error(const ErrorModelParams &p, double epsilon);

struct ErrorCurveRow {
    double n_orac = 0;
    double delta_class = 0;
    double delta_prev = 0;
    std::vector<double> delta_our;
};

struct ErrorCurves {
    std::vector<std::uint64_t> n_samp_list;
    std::vector<ErrorCurveRow> rows;

    /// Columns n_orac, delta_class, delta_prev, delta_our_ns<k>..., %.17g.
    std::string to_csv() const;
};

/// `points_per_decade` log-spaced N_orac values from 10^lo_exp to 10^hi_exp;
/// exact powers of ten land on the decades.
ErrorCurves error_curves(const ErrorModelParams &p, std::span<const std::uint64_t> n_samp_list, int lo_exp = 1,
                         int hi_exp = 8, int points_per_decade = 10);

// Resources.

struct ResourceReport {
    std::size_t total_qubits = 0;
    std::size_t ancilla_qubits = 0;
    std::size_t gate_count = 0;
    std::map<std::string, std::size_t> gates_by_kind;
    /// Greedy layering: each gate goes one layer above the latest gate on
    /// any of its qubits.
    std::size_t depth = 0;
};

/// Gate-kind keys include the control count, e.g. "X/c1" for CNOT.
ResourceReport resources(const Circuit &circuit);

/// Depth of the controlled swaps, counted the way a Fredkin network for a
/// rotation is costed: consecutive gates sharing one control set form a
/// block, a block's depth is its greedy layering over target qubits, and the
/// blocks add up.
std::size_t fredkin_depth(const Circuit &circuit);

/// Number of singly controlled X gates.
std::size_t cnot_count(const Circuit &circuit);

struct FormulaCheck {
    std::string name;
    std::size_t measured = 0;
    std::size_t expected = 0;
    std::size_t generic_depth = 0;
    bool ok = false;
};

struct ScalingFit {
    std::string name;
    std::vector<std::size_t> widths;
    std::vector<double> depths;
    double r2_linear = 0;
    double r2_quadratic = 0;
    /// Slope of log depth against log width.
    double exponent = 0;
    bool quadratic_better = false;
};

struct PrngResourceClaims {
    std::vector<FormulaCheck> rotation;
    std::vector<FormulaCheck> xorshift;
    ScalingFit modadd;
    ScalingFit modmul;
    ResourceReport perm;
    ResourceReport p_prn;
    bool all_ok = false;
};

/// Fredkin depth 2r - log2 r - 2 for r in {4, 8, 16}, CNOT count s for
/// xorshift, depth scaling of modular add and multiply over widths 3..6, and
/// resource reports for the given spec's permutation and P_PRN.
PrngResourceClaims check_prng_resource_claims(const PcgSpec &spec);

/// Least-squares polynomial fit of the given degree; returns R^2.
double polynomial_r2(std::span<const double> x, std::span<const double> y, int degree);

struct PeriodCheck {
    bool ok = true;
    std::optional<std::uint64_t> period;
    std::uint64_t needed = 0;
    std::string message;
};

/// Warns when N_ran * N_samp numbers exceed the generator's period.
PeriodCheck period_budget_check(const PcgSpec &spec, std::uint64_t n_ran, std::uint64_t n_samp);

}  // namespace qrmc

#endif
