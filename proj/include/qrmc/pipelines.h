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

// Monte Carlo integrands driven by in-circuit pseudo-random numbers.
//
// Every pipeline has the same skeleton: a uniform superposition over sample
// indices, J_PRN to jump each branch to the start of its subsequence, then
// N_ran steps that each read the PRN output window, with P_PRN in between.

#ifndef QRMC_PIPELINES_H
#define QRMC_PIPELINES_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "qrmc/arith.h"
#include "qrmc/circuit.h"
#include "qrmc/prng.h"
#include "qrmc/qae.h"

namespace qrmc {

// Sequential integrands.

struct SequentialLayout {
    Register samp;
    Register prn;
    /// modmul_scratch_size(prn.width()) clean qubits shared by P_PRN, J_PRN
    /// and (while clean) by the steps.
    Register scratch;
};

/// Builds the circuit for step `step` (0-based) given the output window.
using StepBuilder = std::function<Circuit(std::size_t step, const Register &window)>;

/// H on samp, J_PRN, `prologue`, then the steps with P_PRN between them.
/// With zero steps J_PRN still loads the first subsequence start. If
/// `boundaries` is given it receives the gate count after the prologue and
/// after each step block (including its trailing P_PRN).
Circuit build_sequential(const PcgSpec &spec, const SequentialLayout &layout, std::size_t n_steps,
                         const StepBuilder &step, std::size_t width, const Circuit &prologue = Circuit(),
                         std::vector<std::size_t> *boundaries = nullptr);

/// The register bits of `prn` that hold the delivered number.
Register output_window(const PcgSpec &spec, const Register &prn);

// Multi-variable sin^2 integral.

struct Sin2Config {
    double theta = 0;
    std::size_t n_var = 1;
    std::size_t n_samp = 1;
    PcgSpec prng;

    /// theta = pi/6, two variables, 8 samples, LCG(11, 0, 31, seed 1).
    static Sin2Config demo();
    void validate() const;
};

struct Sin2Circuit {
    EstimationProblem problem;
    SequentialLayout layout;
};

/// (1/theta^N) times the integral of sin^2(x_1 + ... + x_N) over [0, theta]^N,
/// in closed form: 1/2 - Re[((e^{2i theta} - 1) / (2i theta))^N] / 2.
double sin2_exact(double theta, std::size_t n_var);

/// The same integral by nested adaptive Gauss-Kronrod quadrature; N <= 2.
double sin2_quadrature(double theta, std::size_t n_var);

/// Midpoint grid average with N points per axis, evaluated as the N_var-th
/// power of a one-dimensional sum.
double sin2_grid_sum(double theta, std::size_t n_var, std::uint64_t n);

/// sin^2 of the accumulated angle for one list of window values.
double sin2_term(double theta, std::size_t window_bits, std::span<const std::uint64_t> xs);

/// (1/N_samp) sum_i sin2_term(x_{i N_var + 1}, ..., x_{i N_var + N_var}).
double sin2_sample_average(const Sin2Config &config);

/// One controlled rotation per window bit, plus the midpoint offset, so that
/// after all variables the objective's angle is sum_j (x_j + 1/2) theta / 2^r.
Circuit build_sin2_step(double theta, const Register &window, Qubit objective);

/// Layout: samp, prn, objective, scratch.
Sin2Circuit build_sin2_circuit(const Sin2Config &config, std::size_t max_qubits = kDefaultMaxQubits);

MlqaeResult estimate_sin2(const Sin2Config &config, const MlqaeSchedule &schedule, MlqaeMode mode);

// Standard normal.

double normal_cdf(double x);

/// Throws ParameterError unless 0 < p < 1.
double normal_cdf_inv(double p);

// Toy Merton one-factor credit model.

struct Obligor {
    std::uint64_t exposure = 0;
    /// Default probability in [0, 1]; the endpoints mean never and always.
    double p = 0.5;
    /// Loading on the common factor, in [0, 1).
    double alpha = 0;

    void validate() const;
};

struct Portfolio {
    std::vector<Obligor> obligors;
    std::size_t n_x = 2;
    double x_max = 3;
    std::size_t n_loss = 3;
    std::size_t n_samp = 3;
    PcgSpec prng;

    std::uint64_t total_exposure() const;
    void validate() const;
};

/// round(M_PRN * Phi((z - alpha eps) / sqrt(1 - alpha^2))) clamped to [0, M_PRN].
std::uint64_t y_threshold(const Obligor &obligor, double eps_com, std::uint64_t m_prn);

/// 2^n_x equal bins on [-x_max, x_max]: midpoints and renormalized masses.
struct NormalGrid {
    std::vector<double> midpoints;
    std::vector<double> masses;
};
NormalGrid normal_grid(std::size_t n_x, double x_max);

/// |0> -> sum_k sqrt(p_k) |k> over the grid masses, by conditional rotations
/// from the most significant qubit down. n_x <= 4.
Circuit build_sn_loader(const Register &x_reg, double x_max);

/// |k>|0> -> |k>|y_threshold(obligor, eps_k)>.
Circuit build_y_gate(const Obligor &obligor, const Register &x_reg, const Register &out_reg, std::uint64_t m_prn,
                     const NormalGrid &grid);

struct MertonCircuit {
    Circuit circuit;
    SequentialLayout layout;
    Register x;
    Register loss;
    Qubit flag = 0;
    /// Y register plus the zero extension of the window, overlapping the
    /// PRN scratch.
    Register pool;
    Qubit objective = 0;
    /// circuit split at obligor boundaries: prologue first, then one block
    /// per obligor (each ending after its P_PRN, if any).
    std::vector<Circuit> stages;
};

/// Layout: samp, prn, x, loss, flag, pool, objective. The objective qubit is
/// reserved but untouched; see merton_problem.
MertonCircuit build_merton_circuit(const Portfolio &portfolio, std::size_t max_qubits = kDefaultMaxQubits);

struct LossDistribution {
    std::map<std::uint64_t, double> probabilities;
    double expected_loss = 0;
};

/// Exact enumeration over all (sample, grid bin) pairs.
LossDistribution merton_classical(const Portfolio &portfolio);

/// Every subset sum of the exposures.
std::vector<std::uint64_t> realizable_losses(const Portfolio &portfolio);

/// For each v in `values`, ROT(arcsin sqrt(v / l_max)) on the objective when
/// the loss register reads v. Throws ParameterError for v >= l_max.
Circuit build_loss_amplitude_encoder(const Register &loss_reg, Qubit objective, std::uint64_t l_max,
                                     std::span<const std::uint64_t> values);

/// The Merton circuit followed by the encoder; a = EL / l_max.
EstimationProblem merton_problem(const Portfolio &portfolio, std::uint64_t l_max,
                                 std::size_t max_qubits = kDefaultMaxQubits);

/// 2^n_loss, the default encoder scale.
std::uint64_t default_loss_scale(const Portfolio &portfolio);

MlqaeResult estimate_expected_loss(const Portfolio &portfolio, const MlqaeSchedule &schedule, MlqaeMode mode,
                                   std::uint64_t l_max);

}  // namespace qrmc

#endif
