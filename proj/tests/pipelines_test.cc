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

#include "qrmc/pipelines.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "qrmc/errors.h"

using namespace qrmc;

namespace {

constexpr double kPi = std::numbers::pi;

/// Direct N_var-fold midpoint summation, no factorization.
double brute_grid_sum(double theta, std::size_t n_var, std::uint64_t n) {
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < n_var; ++j) {
        total *= n;
    }
    double sum = 0;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        double angle = 0;
        std::uint64_t rest = idx;
        for (std::size_t j = 0; j < n_var; ++j) {
            angle += (static_cast<double>(rest % n) + 0.5) * theta / static_cast<double>(n);
            rest /= n;
        }
        sum += std::pow(std::sin(angle), 2);
    }
    return sum / static_cast<double>(total);
}

Portfolio small_portfolio() {
    Portfolio p;
    p.obligors = {{1, 0.3, 0.4}, {2, 0.2, 0.6}};
    p.n_x = 2;
    p.n_loss = 2;
    p.n_samp = 2;
    p.prng = PcgSpec::make({11, 0, 31, 1});
    return p;
}

StateVector run(const Circuit &c) {
    StateVector s(c.width());
    CompiledCircuit(c).apply(s);
    return s;
}

}  // namespace

TEST(Sin2Exact, closed_form_examples) {
    EXPECT_LT(sin2_exact(1e-6, 1), 1e-12);
    EXPECT_NEAR(sin2_exact(kPi / 2, 1), 0.5, 1e-15);
    // Antiderivative of sin^2 is x/2 - sin(2x)/4.
    EXPECT_NEAR(sin2_exact(0.7, 1), (0.35 - std::sin(1.4) / 4) / 0.7, 1e-15);
    EXPECT_THROW(sin2_exact(0, 2), ParameterError);
}

TEST(Sin2Exact, matches_quadrature) {
    for (double theta : {0.1, kPi / 6, 1.0, 2.5}) {
        for (std::size_t n : {1u, 2u}) {
            const double a = sin2_exact(theta, n), b = sin2_quadrature(theta, n);
            EXPECT_LT(std::abs(a - b), 1e-9 * std::abs(b)) << theta << " " << n;
        }
    }
    EXPECT_THROW(sin2_quadrature(1.0, 3), ParameterError);
}

TEST(Sin2GridSum, matches_brute_force_and_converges) {
    EXPECT_NEAR(sin2_grid_sum(0.8, 1, 1), std::pow(std::sin(0.4), 2), 1e-15);
    EXPECT_NEAR(sin2_grid_sum(kPi / 6, 2, 32), brute_grid_sum(kPi / 6, 2, 32), 1e-13);
    EXPECT_NEAR(sin2_grid_sum(1.3, 3, 7), brute_grid_sum(1.3, 3, 7), 1e-13);

    // Midpoint rule: error ratio ~4 for each doubling of N.
    const double exact = sin2_exact(kPi / 6, 2);
    double prev = std::abs(sin2_grid_sum(kPi / 6, 2, 8) - exact);
    for (std::uint64_t n : {16u, 32u, 64u}) {
        const double err = std::abs(sin2_grid_sum(kPi / 6, 2, n) - exact);
        EXPECT_NEAR(prev / err, 4.0, 0.05) << "N=" << n;
        prev = err;
    }
}

TEST(Sin2Circuit, single_path_rotation_angle) {
    // One variable, one sample: the circuit prepares x_1 deterministically.
    Sin2Config cfg;
    cfg.theta = 0.9;
    cfg.n_var = 1;
    cfg.n_samp = 0;
    cfg.prng = PcgSpec::make({11, 0, 31, 1});
    const auto sc = build_sin2_circuit(cfg);
    const double x1 = static_cast<double>(pcg_value(cfg.prng, 1));
    EXPECT_NEAR(exact_amplitude(sc.problem), std::pow(std::sin((x1 + 0.5) * 0.9 / 32), 2), 1e-14);
    EXPECT_NEAR(sin2_sample_average(cfg), exact_amplitude(sc.problem), 1e-14);
}

TEST(Sin2Circuit, step_angle_for_every_window_value) {
    const Register window = Register::range(0, 4);
    const Circuit step = build_sin2_step(1.1, window, 4);
    for (std::uint64_t x = 0; x < 16; ++x) {
        StateVector s = StateVector::basis(5, x);
        s.apply(step);
        EXPECT_NEAR(s.probability_one(4), std::pow(std::sin((static_cast<double>(x) + 0.5) * 1.1 / 16), 2), 1e-14);
    }
}

TEST(Sin2Circuit, demo_configuration_matches_classical_average) {
    const Sin2Config cfg = Sin2Config::demo();
    const auto sc = build_sin2_circuit(cfg);
    EXPECT_EQ(sc.problem.a_circuit.width(), 16u);
    EXPECT_NEAR(exact_amplitude(sc.problem), sin2_sample_average(cfg), 1e-10);
}

TEST(Sin2Circuit, oracle_identity_over_configurations) {
    const std::vector<PcgSpec> specs{
        PcgSpec::make({11, 0, 31, 1}),
        PcgSpec::make({3, 7, 61, 5}, PermutationSpec::random_rotation(4)),
        PcgSpec::make({11, 0, 31, 1}, PermutationSpec::xorshift(2), OutputWindow{1, 4}),
    };
    for (const auto &spec : specs) {
        for (std::size_t n_var : {1u, 3u}) {
            for (std::size_t n_samp : {0u, 2u, 4u}) {
                Sin2Config cfg{0.8, n_var, n_samp, spec};
                const auto sc = build_sin2_circuit(cfg);
                ASSERT_NEAR(exact_amplitude(sc.problem), sin2_sample_average(cfg), 1e-10)
                    << spec.perm.describe() << " n_var=" << n_var << " n_samp=" << n_samp;
            }
        }
    }
}

TEST(Sin2Circuit, zero_theta_and_clean_scratch) {
    Sin2Config cfg = Sin2Config::demo();
    cfg.theta = 0;
    const auto sc = build_sin2_circuit(cfg);
    const StateVector s = run(sc.problem.a_circuit);
    EXPECT_LT(s.probability_one(sc.problem.objective), 1e-15);
    for (Qubit q : sc.layout.scratch.qubits()) {
        EXPECT_LT(s.probability_one(q), 1e-15);
    }
    EXPECT_THROW(build_sin2_circuit(Sin2Config::demo(), 12), ResourceError);
}

TEST(Sin2Estimate, degenerate_single_sample) {
    Sin2Config cfg = Sin2Config::demo();
    cfg.n_samp = 0;
    const auto r = estimate_sin2(cfg, MlqaeSchedule::powers_of_two(8, 100, 5), MlqaeMode::FullCircuit);
    EXPECT_NEAR(r.a_hat, sin2_sample_average(cfg), 5e-3);
}

TEST(Sin2Estimate, huge_noiseless_schedule_hits_the_average) {
    const Sin2Config cfg = Sin2Config::demo();
    const double a = sin2_sample_average(cfg);
    const double theta_a = std::asin(std::sqrt(a));
    const auto s = MlqaeSchedule::powers_of_two(8, 1000000, 0);
    std::vector<std::uint64_t> h;
    for (std::size_t k = 0; k < s.m_list.size(); ++k) {
        h.push_back(static_cast<std::uint64_t>(
            std::llround(1e6 * std::pow(std::sin(static_cast<double>(2 * s.m_list[k] + 1) * theta_a), 2))));
    }
    EXPECT_NEAR(mlqae_estimate(s.m_list, s.n_list, h).a_hat, a, 1e-6);
}

TEST(Normal, cdf_and_inverse) {
    EXPECT_EQ(normal_cdf(0), 0.5);
    EXPECT_EQ(normal_cdf_inv(0.5), 0.0);
    EXPECT_NEAR(normal_cdf(1.959964), 0.975, 1e-6);
    // High-precision reference values.
    EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145705, 1e-15);
    EXPECT_NEAR(normal_cdf_inv(0.025), -1.959963984540054, 1e-12);
    for (double p = 0.001; p < 1; p += 0.0137) {
        EXPECT_NEAR(normal_cdf(normal_cdf_inv(p)), p, 1e-12);
    }
    EXPECT_THROW(normal_cdf_inv(0), ParameterError);
    EXPECT_THROW(normal_cdf_inv(1), ParameterError);
    EXPECT_THROW(normal_cdf_inv(std::nan("")), ParameterError);
}

TEST(YThreshold, examples) {
    EXPECT_EQ(y_threshold({1, 0.5, 0.5}, 0.0, 32), 16u);
    EXPECT_EQ(y_threshold({1, 0.3, 0.0}, 2.0, 32), static_cast<std::uint64_t>(std::round(32 * 0.3)));
    EXPECT_EQ(y_threshold({1, 0.3, 0.0}, -2.0, 32), y_threshold({1, 0.3, 0.0}, 2.0, 32));
    EXPECT_EQ(y_threshold({1, 1.0, 0.4}, 0.0, 32), 32u);
    EXPECT_EQ(y_threshold({1, 0.0, 0.4}, -3.0, 32), 0u);
    std::uint64_t prev = 33;
    for (double eps = -3; eps <= 3; eps += 0.25) {
        const std::uint64_t y = y_threshold({1, 0.2, 0.7}, eps, 32);
        EXPECT_LE(y, prev);
        prev = y;
    }
    EXPECT_THROW(y_threshold({1, 1.2, 0.1}, 0, 32), ParameterError);
    EXPECT_THROW(y_threshold({1, 0.2, 1.0}, 0, 32), ParameterError);
}

TEST(SnLoader, probabilities_match_the_grid) {
    for (std::size_t n = 1; n <= 4; ++n) {
        const Register x = Register::range(0, n);
        const StateVector s = run(build_sn_loader(x, 3.0));
        const NormalGrid g = normal_grid(n, 3.0);
        double total = 0;
        for (std::size_t k = 0; k < g.masses.size(); ++k) {
            EXPECT_NEAR(std::norm(s[k]), g.masses[k], 1e-10);
            total += g.masses[k];
        }
        EXPECT_NEAR(total, 1.0, 1e-14);
        if (n == 1) {
            EXPECT_NEAR(g.masses[0], 0.5, 1e-15);
        }
    }
    EXPECT_THROW(build_sn_loader(Register::range(0, 5), 3.0), ParameterError);
}

TEST(YGate, exhaustive_and_reversible) {
    const Register x = Register::range(0, 3);
    const Register out = Register::range(3, 6);
    const NormalGrid g = normal_grid(3, 3.0);
    const Obligor o{1, 0.3, 0.6};
    const Circuit y = build_y_gate(o, x, out, 32, g);
    for (std::uint64_t k = 0; k < 8; ++k) {
        const std::uint64_t after = permute_basis(y, k);
        EXPECT_EQ(x.read(after), k);
        EXPECT_EQ(out.read(after), y_threshold(o, g.midpoints[k], 32));
        EXPECT_EQ(permute_basis(inverse(y), after), k);
    }
    const Circuit all = build_y_gate({1, 1.0, 0.3}, x, out, 32, g);
    for (std::uint64_t k = 0; k < 8; ++k) {
        EXPECT_EQ(out.read(permute_basis(all, k)), 32u);
    }
    EXPECT_THROW(build_y_gate({1, 1.0, 0.3}, x, Register::range(3, 5), 32, g), ParameterError);
}

TEST(Merton, zero_default_probability_gives_zero_loss) {
    Portfolio p = small_portfolio();
    for (auto &o : p.obligors) {
        o.p = 0;
    }
    const MertonCircuit mc = build_merton_circuit(p);
    const auto marg = run(mc.circuit).marginal(mc.loss);
    EXPECT_NEAR(marg[0], 1.0, 1e-12);
    EXPECT_EQ(merton_classical(p).expected_loss, 0.0);
}

TEST(Merton, single_obligor_without_loading_counts_samples) {
    Portfolio p = small_portfolio();
    p.obligors = {{1, 0.4, 0.0}};
    p.n_loss = 1;
    p.n_samp = 3;
    const std::uint64_t k = y_threshold(p.obligors[0], 0.0, p.prng.m_prn());
    int below = 0;
    for (std::uint64_t i = 0; i < 8; ++i) {
        below += pcg_value(p.prng, i + 1) < k;
    }
    const MertonCircuit mc = build_merton_circuit(p);
    EXPECT_NEAR(run(mc.circuit).marginal(mc.loss)[1], below / 8.0, 1e-10);
}

TEST(Merton, loss_distribution_matches_enumeration) {
    const Portfolio p = small_portfolio();
    const MertonCircuit mc = build_merton_circuit(p);
    const auto marg = run(mc.circuit).marginal(mc.loss);
    const LossDistribution d = merton_classical(p);
    double el = 0;
    for (std::size_t v = 0; v < marg.size(); ++v) {
        const double want = d.probabilities.count(v) ? d.probabilities.at(v) : 0.0;
        EXPECT_NEAR(marg[v], want, 1e-10) << "loss " << v;
        el += marg[v] * static_cast<double>(v);
    }
    EXPECT_NEAR(el, d.expected_loss, 1e-10);
}

TEST(Merton, joint_distribution_over_samples_and_bins) {
    const Portfolio p = small_portfolio();
    const MertonCircuit mc = build_merton_circuit(p);
    const StateVector s = run(mc.circuit);
    const NormalGrid g = normal_grid(p.n_x, p.x_max);
    std::vector<Qubit> qubits(mc.layout.samp.qubits());
    qubits.insert(qubits.end(), mc.x.qubits().begin(), mc.x.qubits().end());
    qubits.insert(qubits.end(), mc.loss.qubits().begin(), mc.loss.qubits().end());
    const auto joint = s.marginal(qubits);
    for (std::uint64_t i = 0; i < 4; ++i) {
        for (std::uint64_t k = 0; k < 4; ++k) {
            std::uint64_t loss = 0;
            for (std::size_t j = 0; j < 2; ++j) {
                if (pcg_value(p.prng, i * 2 + j + 1) < y_threshold(p.obligors[j], g.midpoints[k], 32)) {
                    loss += p.obligors[j].exposure;
                }
            }
            EXPECT_NEAR(joint[i | (k << 2) | (loss << 4)], g.masses[k] / 4, 1e-10);
        }
    }
}

TEST(Merton, uncompute_hygiene_after_every_obligor) {
    const Portfolio p = small_portfolio();
    const MertonCircuit mc = build_merton_circuit(p);
    ASSERT_EQ(mc.stages.size(), p.obligors.size() + 1);
    StateVector s(mc.circuit.width());
    const NormalGrid g = normal_grid(p.n_x, p.x_max);
    for (const Circuit &stage : mc.stages) {
        s.apply(stage);
        EXPECT_LT(s.probability_one(mc.flag), 1e-14);
        for (Qubit q : mc.pool.qubits()) {
            EXPECT_LT(s.probability_one(q), 1e-14);
        }
        const auto xm = s.marginal(mc.x);
        for (std::size_t k = 0; k < xm.size(); ++k) {
            EXPECT_NEAR(xm[k], g.masses[k], 1e-10);
        }
    }
}

TEST(Merton, certain_defaults_and_validation) {
    Portfolio p = small_portfolio();
    for (auto &o : p.obligors) {
        o.p = 1;
    }
    EXPECT_NEAR(merton_classical(p).expected_loss, 3.0, 1e-12);

    Portfolio empty = small_portfolio();
    empty.obligors.clear();
    EXPECT_EQ(merton_classical(empty).expected_loss, 0.0);
    EXPECT_NEAR(run(build_merton_circuit(empty).circuit).probability_one(0), 0.5, 1e-12);

    Portfolio overflow = small_portfolio();
    overflow.obligors[1].exposure = 3;
    EXPECT_THROW(build_merton_circuit(overflow), ParameterError);
}

TEST(Merton, monotone_in_default_probability) {
    Portfolio p = small_portfolio();
    double prev_el = -1, prev_a = -1;
    for (double q : {0.05, 0.2, 0.4, 0.7}) {
        for (auto &o : p.obligors) {
            o.p = q;
        }
        const double el = merton_classical(p).expected_loss;
        const double a = exact_amplitude(merton_problem(p, default_loss_scale(p)));
        EXPECT_GE(el, prev_el);
        EXPECT_GE(a, prev_a);
        prev_el = el;
        prev_a = a;
    }
}

TEST(Encoder, examples) {
    const Register loss = Register::range(0, 3);
    const std::vector<std::uint64_t> values{0, 4, 7};
    const Circuit enc = build_loss_amplitude_encoder(loss, 3, 8, values);
    EXPECT_LT(run(enc).probability_one(3), 1e-15);
    StateVector half = StateVector::basis(4, 4);
    half.apply(enc);
    EXPECT_NEAR(half.probability_one(3), 0.5, 1e-15);
    const std::vector<std::uint64_t> too_big{8};
    EXPECT_THROW(build_loss_amplitude_encoder(loss, 3, 8, too_big), ParameterError);
}

TEST(Encoder, amplitude_is_scaled_expected_loss) {
    const Portfolio p = small_portfolio();
    const std::uint64_t l_max = default_loss_scale(p);
    EXPECT_NEAR(exact_amplitude(merton_problem(p, l_max)) * static_cast<double>(l_max),
                merton_classical(p).expected_loss, 1e-10);
    const auto r = estimate_expected_loss(p, MlqaeSchedule::powers_of_two(8, 100, 1), MlqaeMode::AnalyticBinomial,
                                          l_max);
    EXPECT_NEAR(r.a_hat * static_cast<double>(l_max), merton_classical(p).expected_loss, 5e-3 * l_max);
}
