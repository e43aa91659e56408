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

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>

#include "qrmc/errors.h"

namespace qrmc {
namespace {

std::size_t top_qubit(std::initializer_list<const Register *> regs) {
    std::size_t width = 0;
    for (const Register *r : regs) {
        for (Qubit q : r->qubits()) {
            width = std::max<std::size_t>(width, q + 1);
        }
    }
    return width;
}

void check_width(std::size_t width, std::size_t max_qubits) {
    if (width > max_qubits) {
        throw ResourceError("circuit needs " + std::to_string(width) + " qubits, cap is " +
                            std::to_string(max_qubits));
    }
}

}  // namespace

Register output_window(const PcgSpec &spec, const Register &prn) {
    return prn.slice(spec.window.offset, spec.window.bits);
}

Circuit build_sequential(const PcgSpec &spec, const SequentialLayout &layout, std::size_t n_steps,
                         const StepBuilder &step, std::size_t width, const Circuit &prologue,
                         std::vector<std::size_t> *boundaries) {
    Circuit c(width, "sequential");
    for (Qubit q : layout.samp.qubits()) {
        c.append(Gate::h(q));
    }
    c.append(build_j_prn(spec, layout.samp, layout.prn, std::max<std::size_t>(n_steps, 1), layout.scratch));
    c.append(prologue);
    if (boundaries) {
        boundaries->assign(1, c.size());
    }
    const Register window = output_window(spec, layout.prn);
    std::optional<Circuit> advance;
    for (std::size_t j = 0; j < n_steps; ++j) {
        c.append(step(j, window));
        if (j + 1 < n_steps) {
            if (!advance) {
                advance = build_p_prn(spec, layout.prn, layout.scratch);
            }
            c.append(*advance);
        }
        if (boundaries) {
            boundaries->push_back(c.size());
        }
    }
    c.mark_ancillas(layout.scratch);
    return c;
}

Sin2Config Sin2Config::demo() {
    Sin2Config c;
    c.theta = std::numbers::pi / 6;
    c.n_var = 2;
    c.n_samp = 3;
    c.prng = PcgSpec::make({11, 0, 31, 1});
    return c;
}

void Sin2Config::validate() const {
    if (!std::isfinite(theta) || theta < 0) {
        throw ParameterError("theta must be finite and non-negative");
    }
    if (n_var == 0) {
        throw ParameterError("at least one variable is required");
    }
    if (n_samp > 30) {
        throw ParameterError("sample-index register too wide");
    }
    prng.validate();
}

double sin2_exact(double theta, std::size_t n_var) {
    if (!(theta > 0)) {
        throw ParameterError("sin2_exact needs theta > 0");
    }
    // The mean of e^{2i x} over [0, theta] is (e^{2i theta} - 1) / (2i theta);
    // the variables are independent, so the N-fold mean is its N-th power.
    const std::complex<double> i(0, 1);
    const std::complex<double> mean = (std::exp(2.0 * i * theta) - 1.0) / (2.0 * i * theta);
    return 0.5 - 0.5 * std::pow(mean, static_cast<double>(n_var)).real();
}

double sin2_quadrature(double theta, std::size_t n_var) {
    using boost::math::quadrature::gauss_kronrod;
    if (!(theta > 0) || n_var == 0 || n_var > 2) {
        throw ParameterError("quadrature supports theta > 0 and one or two variables");
    }
    constexpr double tol = 1e-13;
    if (n_var == 1) {
        const auto f = [](double x) { return std::pow(std::sin(x), 2); };
        return gauss_kronrod<double, 61>::integrate(f, 0.0, theta, 15, tol) / theta;
    }
    const auto inner = [&](double y) {
        const auto f = [y](double x) { return std::pow(std::sin(x + y), 2); };
        return gauss_kronrod<double, 61>::integrate(f, 0.0, theta, 15, tol);
    };
    return gauss_kronrod<double, 61>::integrate(inner, 0.0, theta, 15, tol) / (theta * theta);
}

double sin2_grid_sum(double theta, std::size_t n_var, std::uint64_t n) {
    if (n == 0) {
        throw ParameterError("grid needs at least one point");
    }
    std::complex<double> mean = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * theta / static_cast<double>(n);
        mean += std::polar(1.0, 2 * x);
    }
    mean /= static_cast<double>(n);
    return 0.5 - 0.5 * std::pow(mean, static_cast<double>(n_var)).real();
}

double sin2_term(double theta, std::size_t window_bits, std::span<const std::uint64_t> xs) {
    const double scale = std::ldexp(theta, -static_cast<int>(window_bits));
    double angle = 0;
    for (std::uint64_t x : xs) {
        angle += (static_cast<double>(x) + 0.5) * scale;
    }
    const double s = std::sin(angle);
    return s * s;
}

double sin2_sample_average(const Sin2Config &config) {
    config.validate();
    const std::uint64_t n_samples = std::uint64_t{1} << config.n_samp;
    std::vector<std::uint64_t> xs(config.n_var);
    double total = 0;
    std::uint64_t state = pcg_state(config.prng, 1);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        for (std::size_t j = 0; j < config.n_var; ++j) {
            xs[j] = pcg_output(config.prng, state);
            state = lcg_next(config.prng.lcg, state);
        }
        total += sin2_term(config.theta, config.prng.window.bits, xs);
    }
    return total / static_cast<double>(n_samples);
}

Circuit build_sin2_step(double theta, const Register &window, Qubit objective) {
    const std::size_t r = window.width();
    Circuit c(std::max(top_qubit({&window}), static_cast<std::size_t>(objective) + 1), "sin2-step");
    c.append(Gate::rot(objective, std::ldexp(theta, -static_cast<int>(r + 1))));
    // Written digit k (k = 1 most significant) has weight 2^{r-k}.
    for (std::size_t k = 1; k <= r; ++k) {
        c.append(Gate::rot(objective, std::ldexp(theta, -static_cast<int>(k)), {window[r - k]}));
    }
    return c;
}

Sin2Circuit build_sin2_circuit(const Sin2Config &config, std::size_t max_qubits) {
    config.validate();
    const std::size_t n = config.prng.n_prn;
    SequentialLayout layout;
    layout.samp = Register::range(0, config.n_samp);
    layout.prn = Register::range(static_cast<Qubit>(config.n_samp), n);
    const Qubit objective = static_cast<Qubit>(config.n_samp + n);
    layout.scratch = Register::range(objective + 1, modmul_scratch_size(n));
    const std::size_t width = objective + 1 + modmul_scratch_size(n);
    check_width(width, max_qubits);

    const auto step = [&](std::size_t, const Register &window) {
        return build_sin2_step(config.theta, window, objective);
    };
    Sin2Circuit out;
    out.problem.a_circuit = build_sequential(config.prng, layout, config.n_var, step, width);
    out.problem.a_circuit.set_label("sin2");
    out.problem.objective = objective;
    out.layout = layout;
    return out;
}

MlqaeResult estimate_sin2(const Sin2Config &config, const MlqaeSchedule &schedule, MlqaeMode mode) {
    MlqaeRunner runner(build_sin2_circuit(config).problem, mode);
    return runner.run(schedule);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_cdf_inv(double p) {
    if (!(p > 0 && p < 1)) {
        throw ParameterError("normal_cdf_inv needs 0 < p < 1");
    }
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2 * p);
}

void Obligor::validate() const {
    if (!(p >= 0 && p <= 1)) {
        throw ParameterError("default probability must lie in [0, 1]");
    }
    if (!(alpha >= 0 && alpha < 1)) {
        throw ParameterError("factor loading must lie in [0, 1)");
    }
}

std::uint64_t Portfolio::total_exposure() const {
    std::uint64_t total = 0;
    for (const Obligor &o : obligors) {
        total += o.exposure;
    }
    return total;
}

void Portfolio::validate() const {
    for (const Obligor &o : obligors) {
        o.validate();
    }
    if (n_x == 0 || n_x > 4) {
        throw ParameterError("common-factor grid needs 1..4 qubits");
    }
    if (!(x_max > 0) || !std::isfinite(x_max)) {
        throw ParameterError("grid half-width must be positive");
    }
    if (n_loss == 0 || n_loss > 20) {
        throw ParameterError("loss register needs 1..20 qubits");
    }
    if (total_exposure() >= (std::uint64_t{1} << n_loss)) {
        throw ParameterError("total exposure overflows the loss register");
    }
    if (n_samp > 30) {
        throw ParameterError("sample-index register too wide");
    }
    prng.validate();
}

std::uint64_t y_threshold(const Obligor &obligor, double eps_com, std::uint64_t m_prn) {
    obligor.validate();
    if (obligor.p <= 0) {
        return 0;
    }
    if (obligor.p >= 1) {
        return m_prn;
    }
    const double z = normal_cdf_inv(obligor.p);
    const double conditional = normal_cdf((z - obligor.alpha * eps_com) / std::sqrt(1 - obligor.alpha * obligor.alpha));
    const double y = std::round(static_cast<double>(m_prn) * conditional);
    return static_cast<std::uint64_t>(std::clamp(y, 0.0, static_cast<double>(m_prn)));
}

NormalGrid normal_grid(std::size_t n_x, double x_max) {
    if (n_x == 0 || n_x > 20 || !(x_max > 0)) {
        throw ParameterError("bad common-factor grid");
    }
    const std::size_t bins = std::size_t{1} << n_x;
    const double width = 2 * x_max / static_cast<double>(bins);
    const double total = normal_cdf(x_max) - normal_cdf(-x_max);
    NormalGrid g;
    for (std::size_t k = 0; k < bins; ++k) {
        const double lo = -x_max + static_cast<double>(k) * width;
        g.midpoints.push_back(lo + width / 2);
        g.masses.push_back((normal_cdf(lo + width) - normal_cdf(lo)) / total);
    }
    return g;
}

Circuit build_sn_loader(const Register &x_reg, double x_max) {
    const std::size_t n = x_reg.width();
    if (n == 0 || n > 4) {
        throw ParameterError("the normal loader supports 1..4 qubits");
    }
    const NormalGrid grid = normal_grid(n, x_max);
    std::vector<double> prefix_mass(grid.masses);
    Circuit c(top_qubit({&x_reg}), "SN");
    // Level l fixes qubit n-1-l, conditioned on the l bits above it.
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t span = std::size_t{1} << (n - l);
        const Qubit target = x_reg[n - 1 - l];
        const Register controls = x_reg.slice(n - l, l);
        for (std::uint64_t q = 0; q < (std::uint64_t{1} << l); ++q) {
            double parent = 0, left = 0;
            for (std::size_t k = q * span; k < (q + 1) * span; ++k) {
                parent += grid.masses[k];
                if (k < q * span + span / 2) {
                    left += grid.masses[k];
                }
            }
            if (parent <= 0) {
                continue;
            }
            const double angle = std::acos(std::sqrt(std::clamp(left / parent, 0.0, 1.0)));
            if (angle == 0) {
                continue;
            }
            c.append(pattern_controlled(Gate::rot(target, angle), controls, q));
        }
    }
    return c;
}

Circuit build_y_gate(const Obligor &obligor, const Register &x_reg, const Register &out_reg, std::uint64_t m_prn,
                     const NormalGrid &grid) {
    if (grid.midpoints.size() != (std::size_t{1} << x_reg.width())) {
        throw ParameterError("grid size does not match the common-factor register");
    }
    Circuit c(top_qubit({&x_reg, &out_reg}), "Y");
    for (std::uint64_t k = 0; k < grid.midpoints.size(); ++k) {
        const std::uint64_t y = y_threshold(obligor, grid.midpoints[k], m_prn);
        if (out_reg.width() < 64 && y >> out_reg.width()) {
            throw ParameterError("threshold " + std::to_string(y) + " does not fit the Y register");
        }
        if (y == 0) {
            continue;
        }
        std::vector<Qubit> flipped;
        for (std::size_t j = 0; j < x_reg.width(); ++j) {
            if (((k >> j) & 1u) == 0) {
                flipped.push_back(x_reg[j]);
            }
        }
        for (Qubit q : flipped) {
            c.append(Gate::x(q));
        }
        for (std::size_t b = 0; b < out_reg.width(); ++b) {
            if ((y >> b) & 1u) {
                c.append(Gate::x(out_reg[b], x_reg.qubits()));
            }
        }
        for (Qubit q : flipped) {
            c.append(Gate::x(q));
        }
    }
    return c;
}

MertonCircuit build_merton_circuit(const Portfolio &portfolio, std::size_t max_qubits) {
    portfolio.validate();
    const PcgSpec &spec = portfolio.prng;
    const std::size_t n = spec.n_prn;
    const std::size_t b = spec.window.bits;
    MertonCircuit mc;
    Qubit next = 0;
    const auto take = [&](std::size_t w) {
        Register r = Register::range(next, w);
        next += static_cast<Qubit>(w);
        return r;
    };
    mc.layout.samp = take(portfolio.n_samp);
    mc.layout.prn = take(n);
    mc.x = take(portfolio.n_x);
    mc.loss = take(portfolio.n_loss);
    mc.flag = next++;
    // P_PRN needs n + 2 clean qubits, the comparison needs b + 2.
    mc.pool = take(std::max(modmul_scratch_size(n), b + 2));
    mc.layout.scratch = mc.pool.slice(0, modmul_scratch_size(n));
    mc.objective = next++;
    const std::size_t width = next;
    check_width(width, max_qubits);

    const NormalGrid grid = normal_grid(portfolio.n_x, portfolio.x_max);
    const Register y_reg = mc.pool.slice(0, b + 1);
    const Qubit ext = mc.pool[b + 1];
    const std::uint64_t m_prn = spec.m_prn();

    const auto step = [&](std::size_t i, const Register &window) {
        const Obligor &o = portfolio.obligors[i];
        const Circuit y = build_y_gate(o, mc.x, y_reg, m_prn, grid);
        const Circuit cmp = build_compare_less(window.extended(ext), y_reg, mc.flag);
        Circuit block(width, "obligor-" + std::to_string(i));
        block.append(y);
        block.append(cmp);
        block.append(build_ctrl_add_const(mc.loss, o.exposure, mc.flag));
        block.append(inverse(cmp));
        block.append(inverse(y));
        return block;
    };
    std::vector<std::size_t> bounds;
    mc.circuit = build_sequential(spec, mc.layout, portfolio.obligors.size(), step, width,
                                  build_sn_loader(mc.x, portfolio.x_max), &bounds);
    mc.circuit.set_label("merton");
    mc.circuit.mark_ancillas(mc.pool);
    const Qubit flag_only[] = {mc.flag};
    mc.circuit.mark_ancillas(flag_only);

    std::size_t from = 0;
    for (std::size_t to : bounds) {
        Circuit stage(width);
        for (std::size_t g = from; g < to; ++g) {
            stage.append(mc.circuit.gates()[g]);
        }
        mc.stages.push_back(std::move(stage));
        from = to;
    }
    return mc;
}

LossDistribution merton_classical(const Portfolio &portfolio) {
    portfolio.validate();
    const PcgSpec &spec = portfolio.prng;
    const NormalGrid grid = normal_grid(portfolio.n_x, portfolio.x_max);
    const std::size_t n_obl = portfolio.obligors.size();
    const std::uint64_t n_samples = std::uint64_t{1} << portfolio.n_samp;
    const std::uint64_t m_prn = spec.m_prn();

    std::vector<std::vector<std::uint64_t>> thresholds(n_obl);
    for (std::size_t j = 0; j < n_obl; ++j) {
        for (double eps : grid.midpoints) {
            thresholds[j].push_back(y_threshold(portfolio.obligors[j], eps, m_prn));
        }
    }
    LossDistribution d;
    const std::size_t stride = std::max<std::size_t>(n_obl, 1);
    std::uint64_t state = pcg_state(spec, 1);
    std::vector<std::uint64_t> xs(n_obl);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        for (std::size_t j = 0; j < stride; ++j) {
            if (j < n_obl) {
                xs[j] = pcg_output(spec, state);
            }
            state = lcg_next(spec.lcg, state);
        }
        for (std::size_t k = 0; k < grid.masses.size(); ++k) {
            std::uint64_t loss = 0;
            for (std::size_t j = 0; j < n_obl; ++j) {
                if (xs[j] < thresholds[j][k]) {
                    loss += portfolio.obligors[j].exposure;
                }
            }
            const double w = grid.masses[k] / static_cast<double>(n_samples);
            d.probabilities[loss] += w;
            d.expected_loss += w * static_cast<double>(loss);
        }
    }
    return d;
}

std::vector<std::uint64_t> realizable_losses(const Portfolio &portfolio) {
    std::set<std::uint64_t> sums{0};
    for (const Obligor &o : portfolio.obligors) {
        std::set<std::uint64_t> next = sums;
        for (std::uint64_t s : sums) {
            next.insert(s + o.exposure);
        }
        sums = std::move(next);
    }
    return {sums.begin(), sums.end()};
}

Circuit build_loss_amplitude_encoder(const Register &loss_reg, Qubit objective, std::uint64_t l_max,
                                     std::span<const std::uint64_t> values) {
    if (l_max == 0) {
        throw ParameterError("loss scale must be positive");
    }
    Circuit c(std::max(top_qubit({&loss_reg}), static_cast<std::size_t>(objective) + 1), "encoder");
    for (std::uint64_t v : values) {
        if (v >= l_max) {
            throw ParameterError("loss value " + std::to_string(v) + " is not below the scale " +
                                 std::to_string(l_max));
        }
        if (loss_reg.width() < 64 && v >> loss_reg.width()) {
            throw ParameterError("loss value does not fit the loss register");
        }
        if (v == 0) {
            continue;
        }
        const double angle = std::asin(std::sqrt(static_cast<double>(v) / static_cast<double>(l_max)));
        c.append(pattern_controlled(Gate::rot(objective, angle), loss_reg, v));
    }
    return c;
}

std::uint64_t default_loss_scale(const Portfolio &portfolio) { return std::uint64_t{1} << portfolio.n_loss; }

EstimationProblem merton_problem(const Portfolio &portfolio, std::uint64_t l_max, std::size_t max_qubits) {
    MertonCircuit mc = build_merton_circuit(portfolio, max_qubits);
    const auto values = realizable_losses(portfolio);
    EstimationProblem p;
    p.a_circuit = std::move(mc.circuit);
    p.a_circuit.append(build_loss_amplitude_encoder(mc.loss, mc.objective, l_max, values));
    p.objective = mc.objective;
    return p;
}

MlqaeResult estimate_expected_loss(const Portfolio &portfolio, const MlqaeSchedule &schedule, MlqaeMode mode,
                                   std::uint64_t l_max) {
    MlqaeRunner runner(merton_problem(portfolio, l_max), mode);
    return runner.run(schedule);
}

}  // namespace qrmc
