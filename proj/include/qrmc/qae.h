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

// Grover operators and maximum-likelihood amplitude estimation.

#ifndef QRMC_QAE_H
#define QRMC_QAE_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrmc/circuit.h"
#include "qrmc/statevector.h"

namespace qrmc {

/// A|0> with target a = P(objective = 1).
struct EstimationProblem {
    Circuit a_circuit;
    Qubit objective = 0;

    void validate() const;
};

struct MlqaeSchedule {
    std::vector<std::uint64_t> m_list;
    std::vector<std::uint64_t> n_list;
    std::uint64_t seed = 0;

    /// m_k = 2^k for k = 0..max_k, N_k = shots.
    static MlqaeSchedule powers_of_two(std::size_t max_k, std::uint64_t shots, std::uint64_t seed);

    /// Parses "m:N,m:N,...".
    static MlqaeSchedule parse(const std::string &text, std::uint64_t seed);

    std::string to_string() const;
    void validate() const;
};

struct MlqaeResult {
    double theta_hat = 0;
    double a_hat = 0;
    std::vector<std::uint64_t> h_list;
    /// (theta, log-likelihood) on the search grid; filled on request only.
    std::vector<std::pair<double, double>> loglik_curve;
};

enum class MlqaeMode { FullCircuit, AnalyticBinomial };

/// Negates |0...0> over `width` qubits.
Circuit build_s0(std::size_t width);

/// Negates every amplitude with the objective qubit set.
Circuit build_schi(Qubit objective, std::size_t width);

/// A S0 A^-1 S_chi. The overall -1 is dropped since it is a global phase.
Circuit build_q(const EstimationProblem &problem);

/// P(objective = 1) in A|0>.
double exact_amplitude(const EstimationProblem &problem, std::size_t max_qubits = kDefaultMaxQubits);

/// P(objective = 1) in Q^m A|0> for each m in `m_list`, by one pass of
/// repeated Q applications up to the largest m.
std::vector<double> grover_probabilities(const EstimationProblem &problem, std::span<const std::uint64_t> m_list,
                                         std::size_t max_qubits = kDefaultMaxQubits);

/// Log-likelihood of hit counts at angle theta, with each probability
/// floored at 1e-300.
double mlqae_loglik(double theta, std::span<const std::uint64_t> m_list, std::span<const std::uint64_t> n_list,
                    std::span<const std::uint64_t> h_list);

/// Maximizer over [0, pi/2]: a 2e4-point grid, then Brent refinement of the
/// best local maxima.
MlqaeResult mlqae_estimate(std::span<const std::uint64_t> m_list, std::span<const std::uint64_t> n_list,
                           std::span<const std::uint64_t> h_list, bool keep_curve = false);

/// Draws h_k ~ Binomial(N_k, p_k), with the k-th stream seeded by (seed, k).
std::vector<std::uint64_t> draw_counts(std::span<const double> probabilities, const MlqaeSchedule &schedule);

/// Caches everything about a problem that does not depend on the seed, so
/// repeated-seed experiments pay for the simulation once.
class MlqaeRunner {
   public:
    MlqaeRunner(EstimationProblem problem, MlqaeMode mode, std::size_t max_qubits = kDefaultMaxQubits);

    MlqaeResult run(const MlqaeSchedule &schedule);
    double exact() const { return exact_; }

    /// Per-m hit probabilities the counts are drawn from.
    std::vector<double> probabilities(std::span<const std::uint64_t> m_list);

   private:
    EstimationProblem problem_;
    MlqaeMode mode_;
    std::size_t max_qubits_;
    double exact_;
    std::vector<std::pair<std::uint64_t, double>> cache_;
};

/// One-shot convenience wrapper around MlqaeRunner.
MlqaeResult run_mlqae(const EstimationProblem &problem, const MlqaeSchedule &schedule, MlqaeMode mode,
                      std::size_t max_qubits = kDefaultMaxQubits);

}  // namespace qrmc

#endif
