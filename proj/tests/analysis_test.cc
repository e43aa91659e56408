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

#include <cmath>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"
#include "qrmc/errors.h"

using namespace qrmc;

namespace {

const std::vector<std::uint64_t> kDefaultNs{10, 20, 30};

}  // namespace

TEST(ErrorModel, unit_prefactors) {
    const auto p = ErrorModelParams::unit_prefactors();
    EXPECT_NEAR(p.estimation_prefactor(), 1.0, 1e-14);
    EXPECT_EQ(p.c * p.sigma, 1.0);
}

TEST(ErrorModel, examples) {
    const auto p = ErrorModelParams::unit_prefactors();
    EXPECT_NEAR(delta_our(p, 20, 1e3), std::pow(2.0, -10) + 1e-3, 1e-12);
    EXPECT_NEAR(delta_our(p, 20, 1e3), 1.9766e-3, 1e-7);
    EXPECT_EQ(delta_class(p, 1e6), 1e-3);
    EXPECT_NEAR(delta_our(p, 16, 1e15), std::pow(2.0, -8), 1e-14);
    EXPECT_THROW(delta_prev(p, 0.5), ParameterError);
}

TEST(ErrorModel, our_minus_prev_is_the_sampling_term) {
    ErrorModelParams p{1.7, 0.3, 0.9, 0.2};
    for (double n : {0.0, 7.0, 21.0}) {
        for (double orac : {1.0, 33.0, 1e5}) {
            EXPECT_NEAR(delta_our(p, n, orac) - delta_prev(p, orac), 1.7 * 0.3 * std::exp2(-n / 2), 1e-15);
        }
    }
}

TEST(Budget, examples_and_clamps) {
    const auto p = ErrorModelParams::unit_prefactors();
    EXPECT_EQ(budget_for_error(p, std::pow(2.0, -5)).n_samp, 10u);
    EXPECT_EQ(budget_for_error(p, 1.0).n_samp, 0u);
    EXPECT_EQ(budget_for_error(p, 3.0).n_samp, 0u);
    ErrorModelParams zero = p;
    zero.E = 0;
    EXPECT_EQ(budget_for_error(zero, 1e-3).n_orac, 1u);
    EXPECT_THROW(budget_for_error(p, 0), ParameterError);
}

TEST(Budget, total_error_is_within_twice_epsilon) {
    ErrorModelParams p{1.3, 0.7, 1.1, 0.3};
    for (double eps = 0.2; eps > 1e-6; eps /= 3.7) {
        const Budget b = budget_for_error(p, eps);
        EXPECT_LE(delta_our(p, static_cast<double>(b.n_samp), static_cast<double>(b.n_orac)),
                  2 * eps * (1 + 1e-12));
    }
}

TEST(ErrorCurves, default_table) {
    const auto t = error_curves(ErrorModelParams::unit_prefactors(), kDefaultNs);
    ASSERT_EQ(t.rows.size(), 71u);
    bool found = false;
    for (const auto &r : t.rows) {
        if (r.n_orac == 1e6) {
            EXPECT_EQ(r.delta_class, 1e-3);
            found = true;
        }
        if (r.n_orac == 1e3) {
            EXPECT_LT(r.delta_our[1], 10 * 1e-3);
            EXPECT_NEAR(r.delta_our[1], std::pow(2.0, -10) + 1e-3, 1e-12);
        }
        // Relative gap is 2^{-15} N_orac, so it stays under 10% up to
        // N_orac = 0.1 * 2^15 ~ 3277 and not all the way to 10^4.
        const double gap = std::abs(r.delta_our[2] - r.delta_prev) / r.delta_prev;
        EXPECT_NEAR(gap, std::pow(2.0, -15) * r.n_orac, 1e-9);
        if (r.n_orac <= 3276) {
            EXPECT_LT(gap, 0.1);
        }
    }
    EXPECT_TRUE(found);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        EXPECT_LE(t.rows[i].delta_class, t.rows[i - 1].delta_class);
        EXPECT_LE(t.rows[i].delta_prev, t.rows[i - 1].delta_prev);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_LE(t.rows[i].delta_our[j], t.rows[i - 1].delta_our[j]);
        }
    }
    // Past the crossing, the sampling floor dominates the n_samp = 10 curve.
    EXPECT_NEAR(t.rows.back().delta_our[0], std::pow(2.0, -5), 1e-7);
    EXPECT_LT(t.rows.back().delta_prev, t.rows.back().delta_our[0]);
}

TEST(ErrorCurves, csv_round_trip) {
    const auto t = error_curves(ErrorModelParams::unit_prefactors(), kDefaultNs, 1, 3, 4);
    std::istringstream in(t.to_csv());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "n_orac,delta_class,delta_prev,delta_our_ns10,delta_our_ns20,delta_our_ns30");
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(cells, cell, ',')) {
            v.push_back(std::stod(cell));
        }
        ASSERT_EQ(v.size(), 6u);
        EXPECT_EQ(v[0], t.rows[row].n_orac);
        EXPECT_EQ(v[1], t.rows[row].delta_class);
        EXPECT_EQ(v[5], t.rows[row].delta_our[2]);
        ++row;
    }
    EXPECT_EQ(row, t.rows.size());
}

TEST(Resources, empty_and_greedy_depth) {
    const ResourceReport empty = resources(Circuit(3));
    EXPECT_EQ(empty.gate_count, 0u);
    EXPECT_EQ(empty.depth, 0u);
    EXPECT_TRUE(empty.gates_by_kind.empty());

    Circuit chain(4);
    for (int i = 0; i < 5; ++i) {
        chain.append(Gate::x(0, {static_cast<Qubit>(1 + i % 3)}));
    }
    EXPECT_EQ(resources(chain).depth, 5u);
    EXPECT_EQ(resources(chain).gates_by_kind.at("X/c1"), 5u);
    EXPECT_EQ(cnot_count(chain), 5u);

    Circuit parallel(4);
    for (Qubit q = 0; q < 4; ++q) {
        parallel.append(Gate::h(q));
    }
    EXPECT_EQ(resources(parallel).depth, 1u);
}

TEST(Resources, fredkin_depth_of_rotations) {
    for (std::size_t r : {2u, 4u, 8u, 16u, 32u}) {
        const std::size_t t = static_cast<std::size_t>(std::countr_zero(r));
        const std::size_t n = t + r;
        const PcgSpec s = PcgSpec::make({1, 0, std::uint64_t{1} << n, 0}, PermutationSpec::random_rotation(r));
        const Circuit c = build_perm(s, Register::range(0, n));
        EXPECT_EQ(fredkin_depth(c), 2 * r - t - 2) << "r=" << r;
    }
}

TEST(Resources, prng_claims) {
    const auto c = check_prng_resource_claims(PcgSpec::make({11, 0, 31, 1}));
    ASSERT_EQ(c.rotation.size(), 3u);
    EXPECT_EQ(c.rotation[0].expected, 4u);
    EXPECT_EQ(c.rotation[1].expected, 11u);
    EXPECT_EQ(c.rotation[2].expected, 26u);
    for (const auto &f : c.rotation) {
        EXPECT_TRUE(f.ok) << f.name;
    }
    for (const auto &f : c.xorshift) {
        EXPECT_TRUE(f.ok) << f.name;
    }
    EXPECT_TRUE(c.modmul.quadratic_better);
    EXPECT_TRUE(c.all_ok);
    EXPECT_EQ(c.perm.gate_count, 0u);
    EXPECT_GT(c.p_prn.gate_count, 0u);
    EXPECT_LE(c.p_prn.depth, c.p_prn.gate_count);
}

TEST(Fits, polynomial_r2) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> line{3, 5, 7, 9, 11};
    const std::vector<double> parabola{1, 4, 9, 16, 25};
    EXPECT_NEAR(polynomial_r2(x, line, 1), 1.0, 1e-12);
    EXPECT_NEAR(polynomial_r2(x, parabola, 2), 1.0, 1e-12);
    EXPECT_LT(polynomial_r2(x, parabola, 1), 0.99);
    EXPECT_THROW(polynomial_r2(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 2), ParameterError);
}

TEST(PeriodBudget, examples) {
    const PcgSpec demo = PcgSpec::make({11, 0, 31, 1});
    EXPECT_TRUE(period_budget_check(demo, 2, 8).ok);
    EXPECT_EQ(period_budget_check(demo, 2, 8).period, 30u);
    EXPECT_FALSE(period_budget_check(demo, 2, 16).ok);
    EXPECT_TRUE(period_budget_check(demo, 2, 0).ok);
    EXPECT_FALSE(period_budget_check(PcgSpec::make({2, 0, 4, 1}), 1, 1).ok);
}
