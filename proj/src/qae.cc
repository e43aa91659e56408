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

#include "qrmc/qae.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "qrmc/errors.h"

namespace qrmc {
namespace {

constexpr std::size_t kGridPoints = 20000;
constexpr std::size_t kRefineCandidates = 8;
constexpr double kProbabilityFloor = 1e-300;

}  // namespace

void EstimationProblem::validate() const {
    if (a_circuit.width() == 0) {
        throw ParameterError("state preparation circuit has no qubits");
    }
    if (objective >= a_circuit.width()) {
        throw ParameterError("objective qubit outside the state preparation circuit");
    }
}

MlqaeSchedule MlqaeSchedule::powers_of_two(std::size_t max_k, std::uint64_t shots, std::uint64_t seed) {
    MlqaeSchedule s;
    for (std::size_t k = 0; k <= max_k; ++k) {
        s.m_list.push_back(std::uint64_t{1} << k);
        s.n_list.push_back(shots);
    }
    s.seed = seed;
    s.validate();
    return s;
}

MlqaeSchedule MlqaeSchedule::parse(const std::string &text, std::uint64_t seed) {
    MlqaeSchedule s;
    s.seed = seed;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ParameterError("schedule entries must look like m:N, got '" + item + "'");
        }
        try {
            std::size_t used = 0;
            const std::string m = item.substr(0, colon), n = item.substr(colon + 1);
            if (m.empty() || n.empty() || m[0] == '-' || n[0] == '-') {
                throw std::invalid_argument(item);
            }
            s.m_list.push_back(std::stoull(m, &used));
            if (used != m.size()) {
                throw std::invalid_argument(item);
            }
            s.n_list.push_back(std::stoull(n, &used));
            if (used != n.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error &) {
            throw ParameterError("bad schedule entry '" + item + "'");
        }
    }
    s.validate();
    return s;
}

std::string MlqaeSchedule::to_string() const {
    std::string out;
    for (std::size_t k = 0; k < m_list.size(); ++k) {
        if (k) {
            out += ',';
        }
        out += std::to_string(m_list[k]) + ':' + std::to_string(n_list[k]);
    }
    return out;
}

void MlqaeSchedule::validate() const {
    if (m_list.empty()) {
        throw ParameterError("schedule is empty");
    }
    if (m_list.size() != n_list.size()) {
        throw ParameterError("schedule m and N lists differ in length");
    }
    for (std::uint64_t n : n_list) {
        if (n == 0) {
            throw ParameterError("every schedule entry needs at least one shot");
        }
    }
}

Circuit build_s0(std::size_t width) {
    if (width == 0) {
        throw ParameterError("S0 needs at least one qubit");
    }
    std::vector<Qubit> all(width);
    std::iota(all.begin(), all.end(), Qubit{0});
    Circuit c(width, "S0");
    c.append(Gate::phase_flip_all_zero(std::move(all)));
    return c;
}

Circuit build_schi(Qubit objective, std::size_t width) {
    Circuit c(std::max<std::size_t>(width, objective + 1), "S_chi");
    c.append(Gate::phase_flip_one(objective));
    return c;
}

Circuit build_q(const EstimationProblem &problem) {
    problem.validate();
    const std::size_t w = problem.a_circuit.width();
    Circuit q(w, "Q");
    q.append(build_schi(problem.objective, w));
    q.append(inverse(problem.a_circuit));
    q.append(build_s0(w));
    q.append(problem.a_circuit);
    return q;
}

double exact_amplitude(const EstimationProblem &problem, std::size_t max_qubits) {
    problem.validate();
    StateVector s(problem.a_circuit.width(), max_qubits);
    CompiledCircuit(problem.a_circuit).apply(s);
    return s.probability_one(problem.objective);
}

std::vector<double> grover_probabilities(const EstimationProblem &problem, std::span<const std::uint64_t> m_list,
                                         std::size_t max_qubits) {
    problem.validate();
    std::vector<double> out(m_list.size());
    if (m_list.empty()) {
        return out;
    }
    StateVector s(problem.a_circuit.width(), max_qubits);
    CompiledCircuit(problem.a_circuit).apply(s);
    const std::uint64_t top = *std::max_element(m_list.begin(), m_list.end());
    std::optional<CompiledCircuit> q;
    if (top > 0) {
        q.emplace(build_q(problem));
    }
    for (std::uint64_t m = 0;; ++m) {
        const double p = s.probability_one(problem.objective);
        for (std::size_t k = 0; k < m_list.size(); ++k) {
            if (m_list[k] == m) {
                out[k] = p;
            }
        }
        if (m == top) {
            break;
        }
        q->apply(s);
    }
    return out;
}

double mlqae_loglik(double theta, std::span<const std::uint64_t> m_list, std::span<const std::uint64_t> n_list,
                    std::span<const std::uint64_t> h_list) {
    double ll = 0;
    for (std::size_t k = 0; k < m_list.size(); ++k) {
        const double angle = static_cast<double>(2 * m_list[k] + 1) * theta;
        const double s = std::sin(angle), c = std::cos(angle);
        const double p1 = std::max(s * s, kProbabilityFloor);
        const double p0 = std::max(c * c, kProbabilityFloor);
        ll += static_cast<double>(h_list[k]) * std::log(p1) + static_cast<double>(n_list[k] - h_list[k]) * std::log(p0);
    }
    return ll;
}

MlqaeResult mlqae_estimate(std::span<const std::uint64_t> m_list, std::span<const std::uint64_t> n_list,
                           std::span<const std::uint64_t> h_list, bool keep_curve) {
    if (m_list.size() != n_list.size() || m_list.size() != h_list.size() || m_list.empty()) {
        throw ParameterError("MLQAE inputs must be nonempty and of equal length");
    }
    for (std::size_t k = 0; k < h_list.size(); ++k) {
        if (h_list[k] > n_list[k]) {
            throw ParameterError("hit count exceeds shot count");
        }
    }
    const double half_pi = std::numbers::pi / 2;
    const double step = half_pi / kGridPoints;
    std::vector<double> grid(kGridPoints), ll(kGridPoints);
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        grid[i] = (static_cast<double>(i) + 0.5) * step;
        ll[i] = mlqae_loglik(grid[i], m_list, n_list, h_list);
    }

    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        const bool left = i == 0 || ll[i] >= ll[i - 1];
        const bool right = i + 1 == kGridPoints || ll[i] >= ll[i + 1];
        if (left && right) {
            peaks.push_back(i);
        }
    }
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return ll[a] > ll[b]; });
    if (peaks.size() > kRefineCandidates) {
        peaks.resize(kRefineCandidates);
    }

    const auto neg = [&](double t) { return -mlqae_loglik(t, m_list, n_list, h_list); };
    double best_theta = grid[peaks.front()];
    double best_ll = ll[peaks.front()];
    for (std::size_t i : peaks) {
        const double lo = i == 0 ? 0.0 : grid[i - 1];
        const double hi = i + 1 == kGridPoints ? half_pi : grid[i + 1];
        const auto [t, f] = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
        if (-f > best_ll) {
            best_ll = -f;
            best_theta = t;
        }
    }

    MlqaeResult r;
    r.theta_hat = std::clamp(best_theta, 0.0, half_pi);
    const double s = std::sin(r.theta_hat);
    r.a_hat = s * s;
    r.h_list.assign(h_list.begin(), h_list.end());
    if (keep_curve) {
        r.loglik_curve.reserve(kGridPoints);
        for (std::size_t i = 0; i < kGridPoints; ++i) {
            r.loglik_curve.emplace_back(grid[i], ll[i]);
        }
    }
    return r;
}

std::vector<std::uint64_t> draw_counts(std::span<const double> probabilities, const MlqaeSchedule &schedule) {
    schedule.validate();
    if (probabilities.size() != schedule.m_list.size()) {
        throw ParameterError("one probability per schedule entry is required");
    }
    std::vector<std::uint64_t> h(probabilities.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        std::seed_seq seq{schedule.seed, static_cast<std::uint64_t>(k)};
        std::mt19937_64 rng(seq);
        std::binomial_distribution<std::uint64_t> dist(schedule.n_list[k], std::clamp(probabilities[k], 0.0, 1.0));
        h[k] = dist(rng);
    }
    return h;
}

MlqaeRunner::MlqaeRunner(EstimationProblem problem, MlqaeMode mode, std::size_t max_qubits)
    : problem_(std::move(problem)), mode_(mode), max_qubits_(max_qubits) {
    exact_ = exact_amplitude(problem_, max_qubits_);
}

std::vector<double> MlqaeRunner::probabilities(std::span<const std::uint64_t> m_list) {
    std::vector<double> out(m_list.size());
    if (mode_ == MlqaeMode::AnalyticBinomial) {
        const double theta_a = std::asin(std::sqrt(std::clamp(exact_, 0.0, 1.0)));
        for (std::size_t k = 0; k < m_list.size(); ++k) {
            const double s = std::sin(static_cast<double>(2 * m_list[k] + 1) * theta_a);
            out[k] = s * s;
        }
        return out;
    }
    std::vector<std::uint64_t> missing;
    for (std::uint64_t m : m_list) {
        const bool cached =
            std::any_of(cache_.begin(), cache_.end(), [&](const auto &e) { return e.first == m; });
        if (!cached) {
            missing.push_back(m);
        }
    }
    if (!missing.empty()) {
        const auto p = grover_probabilities(problem_, missing, max_qubits_);
        for (std::size_t k = 0; k < missing.size(); ++k) {
            cache_.emplace_back(missing[k], p[k]);
        }
    }
    for (std::size_t k = 0; k < m_list.size(); ++k) {
        out[k] = std::find_if(cache_.begin(), cache_.end(), [&](const auto &e) { return e.first == m_list[k]; })
                     ->second;
    }
    return out;
}

MlqaeResult MlqaeRunner::run(const MlqaeSchedule &schedule) {
    schedule.validate();
    const auto h = draw_counts(probabilities(schedule.m_list), schedule);
    return mlqae_estimate(schedule.m_list, schedule.n_list, h);
}

MlqaeResult run_mlqae(const EstimationProblem &problem, const MlqaeSchedule &schedule, MlqaeMode mode,
                      std::size_t max_qubits) {
    MlqaeRunner runner(problem, mode, max_qubits);
    return runner.run(schedule);
}

}  // namespace qrmc
