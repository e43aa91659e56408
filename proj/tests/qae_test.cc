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
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "qrmc/errors.h"
#include "qrmc/pipelines.h"
#include "test_util.h"

using namespace qrmc;

namespace {

EstimationProblem rot_problem(double angle) {
    Circuit a(1, "A");
    a.append(Gate::rot(0, angle));
    return {a, 0};
}

double law(double theta_a, std::uint64_t m) { return std::pow(std::sin(static_cast<double>(2 * m + 1) * theta_a), 2); }

std::vector<std::uint64_t> noiseless_counts(const MlqaeSchedule &s, double theta_a) {
    std::vector<std::uint64_t> h;
    for (std::size_t k = 0; k < s.m_list.size(); ++k) {
        h.push_back(static_cast<std::uint64_t>(std::llround(static_cast<double>(s.n_list[k]) * law(theta_a, s.m_list[k]))));
    }
    return h;
}

}  // namespace

TEST(Reflections, s0_and_schi) {
    StateVector zero(2);
    zero.apply(build_s0(2));
    EXPECT_EQ(zero[0], Amplitude(-1, 0));

    StateVector one = StateVector::basis(1, 1);
    one.apply(build_s0(1));
    EXPECT_EQ(one[1], Amplitude(1, 0));

    StateVector plus(1);
    plus.apply(Gate::h(0));
    plus.apply(build_schi(0, 1));
    EXPECT_NEAR(plus[0].real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(plus[1].real(), -std::sqrt(0.5), 1e-15);

    EXPECT_THROW(build_s0(0), ParameterError);
}

TEST(ExactAmplitude, examples) {
    EXPECT_NEAR(exact_amplitude(rot_problem(std::numbers::pi / 6)), 0.25, 1e-15);
    EXPECT_EQ(exact_amplitude({Circuit(1), 0}), 0.0);
    Circuit x(2);
    x.append(Gate::x(1));
    EXPECT_EQ(exact_amplitude({x, 1}), 1.0);
    EXPECT_THROW(exact_amplitude({x, 2}), ParameterError);
}

TEST(GroverOperator, single_qubit_law) {
    const double theta = 0.21;
    const std::vector<std::uint64_t> ms{0, 1, 2, 4, 7, 30};
    const auto p = grover_probabilities(rot_problem(theta), ms);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        EXPECT_NEAR(p[k], law(theta, ms[k]), 1e-12) << "m=" << ms[k];
    }
}

TEST(GroverOperator, zero_amplitude_is_a_fixed_point) {
    Circuit id(2);
    id.append(Gate::h(0));
    const std::vector<std::uint64_t> ms{0, 1, 5, 16};
    for (double p : grover_probabilities({id, 1}, ms)) {
        EXPECT_LT(p, 1e-15);
    }
}

TEST(GroverOperator, demo_circuit_follows_the_amplification_law) {
    const auto demo = build_sin2_circuit(Sin2Config::demo());
    const double theta_a = std::asin(std::sqrt(exact_amplitude(demo.problem)));
    std::vector<std::uint64_t> ms(65);
    for (std::uint64_t m = 0; m <= 64; ++m) {
        ms[m] = m;
    }
    const auto p = grover_probabilities(demo.problem, ms);
    for (std::uint64_t m = 0; m <= 64; ++m) {
        ASSERT_LT(std::abs(p[m] - law(theta_a, m)), 1e-8) << "m=" << m;
    }
}

TEST(GroverOperator, memory_cap) {
    const auto demo = build_sin2_circuit(Sin2Config::demo());
    EXPECT_THROW(exact_amplitude(demo.problem, 10), ResourceError);
    EXPECT_THROW(run_mlqae(demo.problem, MlqaeSchedule::powers_of_two(2, 10, 0), MlqaeMode::FullCircuit, 10),
                 ResourceError);
}

TEST(Schedule, parse_and_validate) {
    const auto s = MlqaeSchedule::parse("0:10,1:20,4:30", 9);
    EXPECT_EQ(s.m_list, (std::vector<std::uint64_t>{0, 1, 4}));
    EXPECT_EQ(s.n_list, (std::vector<std::uint64_t>{10, 20, 30}));
    EXPECT_EQ(s.seed, 9u);
    EXPECT_EQ(s.to_string(), "0:10,1:20,4:30");
    EXPECT_THROW(MlqaeSchedule::parse("", 0), ParameterError);
    EXPECT_THROW(MlqaeSchedule::parse("1:0", 0), ParameterError);
    EXPECT_THROW(MlqaeSchedule::parse("1-4", 0), ParameterError);
    EXPECT_THROW(MlqaeSchedule::parse("-1:4", 0), ParameterError);
    EXPECT_THROW(MlqaeSchedule::parse("1:4x", 0), ParameterError);

    const auto p = MlqaeSchedule::powers_of_two(8, 100, 0);
    EXPECT_EQ(p.m_list.size(), 9u);
    EXPECT_EQ(p.m_list.front(), 1u);
    EXPECT_EQ(p.m_list.back(), 256u);
}

TEST(Mlqae, noiseless_counts_recover_theta) {
    const auto s = MlqaeSchedule::powers_of_two(8, 100, 0);
    const auto h = noiseless_counts(s, 0.3);
    const auto r = mlqae_estimate(s.m_list, s.n_list, h);
    EXPECT_NEAR(r.theta_hat, 0.3, 2e-3);
    EXPECT_NEAR(r.a_hat, std::pow(std::sin(r.theta_hat), 2), 1e-15);
}

TEST(Mlqae, zero_counts_give_zero_amplitude) {
    const auto s = MlqaeSchedule::powers_of_two(8, 100, 0);
    const std::vector<std::uint64_t> h(s.m_list.size(), 0);
    EXPECT_LT(mlqae_estimate(s.m_list, s.n_list, h).a_hat, 1e-4);
}

TEST(Mlqae, all_hits_give_full_amplitude) {
    const std::vector<std::uint64_t> m{0}, n{50}, h{50};
    EXPECT_GT(mlqae_estimate(m, n, h).a_hat, 1 - 1e-4);
}

TEST(Mlqae, rejects_inconsistent_counts) {
    const std::vector<std::uint64_t> m{0, 1}, n{10, 10}, h{11, 0};
    EXPECT_THROW(mlqae_estimate(m, n, h), ParameterError);
    EXPECT_THROW(mlqae_estimate(m, n, std::vector<std::uint64_t>{1}), ParameterError);
}

TEST(Mlqae, global_maximum_is_unique_for_noiseless_counts) {
    auto rng = test::test_rng(11);
    std::uniform_real_distribution<double> theta_dist(0.05, 1.5);
    for (std::uint64_t m0 : {0u, 1u}) {
        MlqaeSchedule s;
        for (std::uint64_t k = 0; k <= 6; ++k) {
            s.m_list.push_back(k == 0 ? m0 : std::uint64_t{1} << k);
            s.n_list.push_back(100);
        }
        for (int trial = 0; trial < 20; ++trial) {
            const double theta_a = theta_dist(rng);
            const auto r = mlqae_estimate(s.m_list, s.n_list, noiseless_counts(s, theta_a), true);
            // Best grid peak must beat every other local peak by a clear margin.
            const auto &c = r.loglik_curve;
            std::vector<double> peaks;
            for (std::size_t i = 1; i + 1 < c.size(); ++i) {
                if (c[i].second >= c[i - 1].second && c[i].second >= c[i + 1].second) {
                    peaks.push_back(c[i].second);
                }
            }
            std::sort(peaks.rbegin(), peaks.rend());
            ASSERT_GE(peaks.size(), 1u);
            if (peaks.size() > 1) {
                EXPECT_GT(peaks[0] - peaks[1], 1.0) << "theta_a=" << theta_a << " m0=" << m0;
            }
            EXPECT_NEAR(r.theta_hat, theta_a, 5e-3);
        }
    }
}

TEST(Mlqae, deterministic_for_fixed_seed) {
    const auto problem = rot_problem(0.4);
    const auto s = MlqaeSchedule::powers_of_two(5, 100, 77);
    const auto a = run_mlqae(problem, s, MlqaeMode::FullCircuit);
    const auto b = run_mlqae(problem, s, MlqaeMode::FullCircuit);
    EXPECT_EQ(a.h_list, b.h_list);
    EXPECT_EQ(a.theta_hat, b.theta_hat);
}

TEST(Mlqae, draw_counts_edges) {
    const auto s = MlqaeSchedule::parse("0:40,1:40", 3);
    const std::vector<double> p{0.0, 1.0};
    EXPECT_EQ(draw_counts(p, s), (std::vector<std::uint64_t>{0, 40}));
    EXPECT_THROW(draw_counts(std::vector<double>{0.5}, s), ParameterError);
}

TEST(Mlqae, doubling_shots_does_not_hurt_the_median_error) {
    MlqaeRunner runner(rot_problem(0.5), MlqaeMode::AnalyticBinomial);
    const double a = runner.exact();
    const auto median_error = [&](std::uint64_t shots) {
        std::vector<double> err;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            err.push_back(std::abs(runner.run(MlqaeSchedule::powers_of_two(6, shots, seed)).a_hat - a));
        }
        std::nth_element(err.begin(), err.begin() + 50, err.end());
        return err[50];
    };
    EXPECT_LE(median_error(200), median_error(100));
}

TEST(Mlqae, modes_agree_statistically) {
    // Pooled hits per Grover power, full-circuit vs analytic, on disjoint
    // seeds; chi-square over the 2x2 tables summed across powers.
    const auto demo = build_sin2_circuit(Sin2Config::demo());
    MlqaeRunner full(demo.problem, MlqaeMode::FullCircuit);
    MlqaeRunner analytic(demo.problem, MlqaeMode::AnalyticBinomial);
    const std::size_t K = 6;
    std::vector<double> hits_full(K), hits_analytic(K), shots(K);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto hf = full.run(MlqaeSchedule::powers_of_two(K - 1, 100, seed)).h_list;
        const auto ha = analytic.run(MlqaeSchedule::powers_of_two(K - 1, 100, 1000 + seed)).h_list;
        for (std::size_t k = 0; k < K; ++k) {
            hits_full[k] += static_cast<double>(hf[k]);
            hits_analytic[k] += static_cast<double>(ha[k]);
            shots[k] += 100;
        }
    }
    double chi2 = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double pooled = (hits_full[k] + hits_analytic[k]) / (2 * shots[k]);
        for (double h : {hits_full[k], hits_analytic[k]}) {
            const double e1 = shots[k] * pooled, e0 = shots[k] * (1 - pooled);
            chi2 += (h - e1) * (h - e1) / e1 + (h - e1) * (h - e1) / e0;
        }
    }
    const boost::math::chi_squared dist(static_cast<double>(K));
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01);
}
