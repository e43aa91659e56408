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

#include "qrmc/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "qrmc/arith.h"
#include "qrmc/errors.h"
#include "qrmc/statevector.h"

namespace qrmc {
namespace {

using nlohmann::json;

// Published single-run values for the demo configuration.
constexpr double kPublishedExactIntegral = 0.074578;
constexpr double kPublishedSampleAverage = 0.078394;
constexpr double kPublishedMlqaeEstimate = 0.078391;

std::string fmt17(double v) {
    if (!std::isfinite(v)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // Keep integral-valued doubles recognizable as floats.
    if (s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

void dump_into(const json &j, int indent, int depth, std::string &out) {
    const auto newline = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ',';
                }
                first = false;
                newline(depth + 1);
                out += json(it.key()).dump();
                out += indent >= 0 ? ": " : ":";
                dump_into(it.value(), indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto &v : j) {
                if (!first) {
                    out += ',';
                }
                first = false;
                newline(depth + 1);
                dump_into(v, indent, depth + 1, out);
            }
            newline(depth);
            out += ']';
            return;
        }
        case json::value_t::number_float:
            out += fmt17(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

json resources_json(const ResourceReport &r) {
    json kinds = json::object();
    for (const auto &[k, v] : r.gates_by_kind) {
        kinds[k] = v;
    }
    return {{"total_qubits", r.total_qubits},
            {"ancilla_qubits", r.ancilla_qubits},
            {"gate_count", r.gate_count},
            {"depth", r.depth},
            {"gates_by_kind", kinds}};
}

json formula_json(const FormulaCheck &f) {
    return {{"name", f.name},
            {"measured", f.measured},
            {"expected", f.expected},
            {"generic_depth", f.generic_depth},
            {"pass", f.ok}};
}

json fit_json(const ScalingFit &f) {
    return {{"widths", f.widths},
            {"depths", f.depths},
            {"r2_linear", f.r2_linear},
            {"r2_quadratic", f.r2_quadratic},
            {"fitted_exponent", f.exponent},
            {"quadratic_better", f.quadratic_better}};
}

json mlqae_json(const MlqaeResult &r, const MlqaeSchedule &s, MlqaeMode mode) {
    return {{"theta_hat", r.theta_hat},
            {"a_hat", r.a_hat},
            {"h_list", r.h_list},
            {"schedule", s.to_string()},
            {"seed", s.seed},
            {"mode", mode == MlqaeMode::FullCircuit ? "full" : "binomial"}};
}

MlqaeMode parse_mode(const std::string &m) {
    if (m == "full") {
        return MlqaeMode::FullCircuit;
    }
    if (m == "binomial") {
        return MlqaeMode::AnalyticBinomial;
    }
    throw ParameterError("mode must be 'full' or 'binomial', got '" + m + "'");
}

PcgSpec make_spec(const LcgParams &lcg, const std::string &perm_text, std::optional<std::size_t> window_bits) {
    const PermutationSpec perm = parse_permutation(perm_text);
    std::optional<OutputWindow> window;
    if (window_bits) {
        const std::size_t n = bits_for_modulus(lcg.m);
        if (*window_bits == 0 || *window_bits > n) {
            throw ParameterError("output window must have 1..n_prn bits");
        }
        window = OutputWindow{perm.kind == PermutationSpec::Kind::RandomRotation
                                  ? n - perm.control_bits() - perm.rotation_bits
                                  : n - *window_bits,
                              *window_bits};
    }
    return PcgSpec::make(lcg, perm, window);
}

void require_keys(const json &j, const std::set<std::string> &allowed, const std::string &where) {
    if (!j.is_object()) {
        throw ParameterError(where + " must be a JSON object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ParameterError("unknown key '" + it.key() + "' in " + where);
        }
    }
}

std::uint64_t get_uint(const json &j, const char *key, std::uint64_t fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const json &v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ParameterError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

double get_double(const json &j, const char *key, double fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_number()) {
        throw ParameterError(std::string("'") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

std::string get_string(const json &j, const char *key, const std::string &fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_string()) {
        throw ParameterError(std::string("'") + key + "' must be a string");
    }
    return j.at(key).get<std::string>();
}

struct Mismatch {
    std::uint64_t index = 0;
    std::uint64_t input = 0;
    std::uint64_t expected = 0;
    std::uint64_t got = 0;
};

json check_json(std::uint64_t checked, std::uint64_t mismatches, const std::optional<Mismatch> &first,
                const char *index_name) {
    json j = {{"checked", checked}, {"mismatches", mismatches}, {"pass", mismatches == 0}};
    if (first) {
        j["first_mismatch"] = {{index_name, first->index},
                               {"input_basis", first->input},
                               {"expected_basis", first->expected},
                               {"got_basis", first->got}};
    }
    return j;
}

}  // namespace

std::string dump_json(const json &doc, int indent) {
    std::string out;
    dump_into(doc, indent, 0, out);
    out += '\n';
    return out;
}

PermutationSpec parse_permutation(const std::string &text) {
    if (text == "none") {
        return PermutationSpec::none();
    }
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
        std::size_t used = 0;
        std::size_t value = 0;
        try {
            value = std::stoul(arg, &used);
        } catch (const std::logic_error &) {
            used = 0;
        }
        if (used == arg.size() && !arg.empty() && arg[0] != '-') {
            if (kind == "rotation") {
                return PermutationSpec::random_rotation(value);
            }
            if (kind == "xorshift") {
                return PermutationSpec::xorshift(value);
            }
        }
    }
    throw ParameterError("permutation must be none, rotation:R or xorshift:S, got '" + text + "'");
}

json pcg_to_json(const PcgSpec &spec) {
    return {{"a", spec.lcg.a},
            {"c", spec.lcg.c},
            {"m", spec.lcg.m},
            {"seed", spec.lcg.seed},
            {"perm", spec.perm.describe()},
            {"n_prn", spec.n_prn},
            {"window_offset", spec.window.offset},
            {"window_bits", spec.window.bits}};
}

PcgSpec pcg_from_json(const json &j) {
    require_keys(j, {"a", "c", "m", "seed", "perm", "window_bits"}, "prng block");
    const LcgParams lcg{get_uint(j, "a", 11), get_uint(j, "c", 0), get_uint(j, "m", 31), get_uint(j, "seed", 1)};
    std::optional<std::size_t> bits;
    if (j.contains("window_bits")) {
        bits = get_uint(j, "window_bits", 0);
    }
    return make_spec(lcg, get_string(j, "perm", "none"), bits);
}

CommandOutput cmd_prng_verify(const PrngVerifyOptions &o) {
    const PcgSpec &spec = o.spec;
    spec.validate();
    if (spec.lcg.m > kMaxVerifyModulus) {
        throw ParameterError("exhaustive verification is limited to m <= " + std::to_string(kMaxVerifyModulus));
    }
    if (o.n_samp_bits > 10 || o.n_ran == 0) {
        throw ParameterError("need 0..10 sample-index bits and N_ran >= 1");
    }
    mod_inverse(spec.lcg.a % spec.lcg.m, spec.lcg.m);
    PcgSpec built = spec;
    if (o.corrupt_multiplier) {
        built.lcg.a = *o.corrupt_multiplier;
        mod_inverse(built.lcg.a % built.lcg.m, built.lcg.m);
    }

    const std::size_t n = spec.n_prn;
    const Register samp = Register::range(0, o.n_samp_bits);
    const Register prn = Register::range(static_cast<Qubit>(o.n_samp_bits), n);
    const Register scratch = Register::range(static_cast<Qubit>(o.n_samp_bits + n), modmul_scratch_size(n));
    const Circuit p = build_p_prn(built, prn, scratch);
    // LCGs with c != 0 and gcd(a - 1, m) != 1 have no closed-form jump; the
    // P_PRN check still applies to them.
    std::optional<Circuit> jmp;
    std::string jump_error;
    try {
        jmp = build_j_prn(built, samp, prn, o.n_ran, scratch);
    } catch (const ParameterError &e) {
        jump_error = e.what();
    }

    std::uint64_t p_bad = 0;
    std::optional<Mismatch> p_first;
    for (std::uint64_t x = 0; x < spec.lcg.m; ++x) {
        const std::uint64_t in = prn.write(0, perm_apply(spec.perm, n, x));
        const std::uint64_t want = prn.write(0, perm_apply(spec.perm, n, lcg_next(spec.lcg, x)));
        const std::uint64_t got = permute_basis(p, in);
        if (got != want) {
            if (!p_first) {
                p_first = Mismatch{x, in, want, got};
            }
            ++p_bad;
        }
    }

    std::uint64_t j_bad = 0;
    std::optional<Mismatch> j_first;
    const std::uint64_t samples = std::uint64_t{1} << o.n_samp_bits;
    for (std::uint64_t i = 0; jmp && i < samples; ++i) {
        const std::uint64_t in = samp.write(0, i);
        const std::uint64_t want = prn.write(in, perm_apply(spec.perm, n, pcg_state(spec, i * o.n_ran + 1)));
        const std::uint64_t got = permute_basis(*jmp, in);
        if (got != want) {
            if (!j_first) {
                j_first = Mismatch{i, in, want, got};
            }
            ++j_bad;
        }
    }

    const PrngResourceClaims claims = check_prng_resource_claims(spec);
    json rotation = json::array(), xorshift = json::array();
    for (const auto &f : claims.rotation) {
        rotation.push_back(formula_json(f));
    }
    for (const auto &f : claims.xorshift) {
        xorshift.push_back(formula_json(f));
    }
    const PeriodCheck pc = period_budget_check(spec, o.n_ran, samples);
    const bool pass = p_bad == 0 && j_bad == 0;
    json jump_json = check_json(jmp ? samples : 0, j_bad, j_first, "sample_index");
    jump_json["supported"] = jmp.has_value();
    if (!jmp) {
        jump_json["reason"] = jump_error;
    }

    CommandOutput out;
    out.doc = {
        {"command", "prng-verify"},
        {"prng", pcg_to_json(spec)},
        {"circuit_multiplier", built.lcg.a},
        {"period", pc.period ? json(*pc.period) : json(nullptr)},
        {"period_check", {{"ok", pc.ok}, {"needed", pc.needed}, {"message", pc.message}}},
        {"n_samp_bits", o.n_samp_bits},
        {"n_ran", o.n_ran},
        {"p_prn_equivalence", check_json(spec.lcg.m, p_bad, p_first, "state")},
        {"j_prn_jump_consistency", jump_json},
        {"resources",
         {{"perm", resources_json(claims.perm)},
          {"p_prn", resources_json(resources(p))},
          {"j_prn", jmp ? resources_json(resources(*jmp)) : json(nullptr)}}},
        {"formula_checks",
         {{"rotation_fredkin_depth", rotation},
          {"xorshift_cnot_count", xorshift},
          {"modadd_depth_scaling", fit_json(claims.modadd)},
          {"modmul_depth_scaling", fit_json(claims.modmul)},
          {"all_pass", claims.all_ok}}},
        {"pass", pass},
    };
    out.exit_code = pass ? kExitOk : kExitInvariant;
    return out;
}

CommandOutput cmd_integrate(const IntegrateOptions &o) {
    const Sin2Config &cfg = o.config;
    cfg.validate();
    o.schedule.validate();
    const std::size_t r = cfg.prng.window.bits;
    const Sin2Circuit sc = build_sin2_circuit(cfg);
    MlqaeRunner runner(sc.problem, o.mode);
    const double average = sin2_sample_average(cfg);
    const double circuit = runner.exact();
    const MlqaeResult est = runner.run(o.schedule);
    const PeriodCheck pc = period_budget_check(cfg.prng, cfg.n_var, std::uint64_t{1} << cfg.n_samp);

    json exact = nullptr, quad = nullptr;
    if (cfg.theta > 0) {
        exact = sin2_exact(cfg.theta, cfg.n_var);
        if (cfg.n_var <= 2) {
            quad = sin2_quadrature(cfg.theta, cfg.n_var);
        }
    }
    const double gap = std::abs(circuit - average);
    CommandOutput out;
    out.doc = {
        {"command", "integrate"},
        {"theta", cfg.theta},
        {"n_var", cfg.n_var},
        {"n_samp_bits", cfg.n_samp},
        {"prng", pcg_to_json(cfg.prng)},
        {"exact_integral", exact},
        {"exact_integral_quadrature", quad},
        {"grid_sum", sin2_grid_sum(cfg.theta, cfg.n_var, std::uint64_t{1} << r)},
        {"sample_average", average},
        {"circuit_probability", circuit},
        {"circuit_vs_average_abs_diff", gap},
        {"mlqae_estimate", est.a_hat},
        {"mlqae", mlqae_json(est, o.schedule, o.mode)},
        {"schedule", o.schedule.to_string()},
        {"mode", o.mode == MlqaeMode::FullCircuit ? "full" : "binomial"},
        {"seed", o.schedule.seed},
        {"qubits", sc.problem.a_circuit.width()},
        {"period_check", {{"ok", pc.ok}, {"needed", pc.needed}, {"message", pc.message}}},
        {"conventions",
         {{"prn_indexing", "seed is x~_0; sample i uses x_{i*N_var+1} .. x_{i*N_var+N_var}"},
          {"grid_point", "x -> (x + 1/2) * theta / 2^r"},
          {"exact_integral", "(1/theta^N_var) * integral of sin^2(sum x_j) over [0, theta]^N_var"}}},
        {"published_reference",
         {{"exact_integral", kPublishedExactIntegral},
          {"sample_average", kPublishedSampleAverage},
          {"mlqae_estimate", kPublishedMlqaeEstimate}}},
    };
    out.exit_code = gap < 1e-10 ? kExitOk : kExitInvariant;
    return out;
}

CreditOptions credit_from_json(const json &j) {
    require_keys(j,
                 {"obligors", "n_x", "x_max", "n_loss", "n_samp_bits", "prng", "l_max", "schedule", "mode", "seed"},
                 "portfolio config");
    CreditOptions o;
    Portfolio &p = o.portfolio;
    if (!j.contains("obligors") || !j.at("obligors").is_array()) {
        throw ParameterError("portfolio config needs an 'obligors' array");
    }
    for (const json &rec : j.at("obligors")) {
        require_keys(rec, {"exposure", "p", "alpha"}, "obligor record");
        if (!rec.contains("exposure") || !rec.contains("p")) {
            throw ParameterError("obligor records need 'exposure' and 'p'");
        }
        const double e = get_double(rec, "exposure", 0);
        if (!(e >= 0) || !std::isfinite(e)) {
            throw ParameterError("exposure must be finite and non-negative");
        }
        const double rounded = std::round(e);
        o.exposure_rounding += std::abs(e - rounded);
        Obligor ob{static_cast<std::uint64_t>(rounded), get_double(rec, "p", 0), get_double(rec, "alpha", 0)};
        ob.validate();
        p.obligors.push_back(ob);
    }
    p.n_x = get_uint(j, "n_x", 2);
    p.x_max = get_double(j, "x_max", 3);
    p.n_loss = get_uint(j, "n_loss", 3);
    p.n_samp = get_uint(j, "n_samp_bits", 3);
    p.prng = j.contains("prng") ? pcg_from_json(j.at("prng")) : PcgSpec::make({11, 0, 31, 1});
    p.validate();
    o.l_max = get_uint(j, "l_max", 0);
    o.schedule = MlqaeSchedule::parse(get_string(j, "schedule", "1:100,2:100,4:100,8:100,16:100,32:100,64:100,128:100,256:100"),
                                      get_uint(j, "seed", 0));
    o.mode = parse_mode(get_string(j, "mode", "binomial"));
    return o;
}

CommandOutput cmd_credit(const CreditOptions &o, std::string *histogram_csv) {
    const Portfolio &pf = o.portfolio;
    pf.validate();
    o.schedule.validate();
    const std::uint64_t l_max = o.l_max ? o.l_max : default_loss_scale(pf);
    const LossDistribution classical = merton_classical(pf);

    // Run the loss circuit stage by stage, checking ancilla hygiene between
    // obligors.
    const MertonCircuit mc = build_merton_circuit(pf);
    const NormalGrid grid = normal_grid(pf.n_x, pf.x_max);
    StateVector s(mc.circuit.width());
    double worst_flag = 0, worst_pool = 0, worst_x = 0;
    for (const Circuit &stage : mc.stages) {
        CompiledCircuit(stage).apply(s);
        worst_flag = std::max(worst_flag, s.probability_one(mc.flag));
        for (Qubit q : mc.pool.qubits()) {
            worst_pool = std::max(worst_pool, s.probability_one(q));
        }
        const auto xm = s.marginal(mc.x.qubits());
        for (std::size_t k = 0; k < xm.size(); ++k) {
            worst_x = std::max(worst_x, std::abs(xm[k] - grid.masses[k]));
        }
    }
    const bool hygiene = worst_flag < 1e-10 && worst_pool < 1e-10 && worst_x < 1e-10;

    const auto marginal = s.marginal(mc.loss.qubits());
    double max_err = 0, circuit_el = 0;
    json histogram = json::array();
    std::string csv = "loss,probability\n";
    for (std::size_t v = 0; v < marginal.size(); ++v) {
        const double c = classical.probabilities.count(v) ? classical.probabilities.at(v) : 0.0;
        max_err = std::max(max_err, std::abs(c - marginal[v]));
        circuit_el += marginal[v] * static_cast<double>(v);
        histogram.push_back({{"loss", v}, {"probability", marginal[v]}, {"classical_probability", c}});
        csv += std::to_string(v) + ',' + fmt17(marginal[v]) + '\n';
    }
    if (histogram_csv) {
        *histogram_csv = csv;
    }

    MlqaeRunner runner(merton_problem(pf, l_max), o.mode);
    const MlqaeResult est = runner.run(o.schedule);
    const double ld = static_cast<double>(l_max);

    json obligors = json::array();
    for (const Obligor &ob : pf.obligors) {
        obligors.push_back({{"exposure", ob.exposure}, {"p", ob.p}, {"alpha", ob.alpha}});
    }
    const bool ok = hygiene && max_err < 1e-10;
    CommandOutput out;
    out.doc = {
        {"command", "credit"},
        {"obligors", obligors},
        {"n_x", pf.n_x},
        {"x_max", pf.x_max},
        {"n_loss", pf.n_loss},
        {"n_samp_bits", pf.n_samp},
        {"prng", pcg_to_json(pf.prng)},
        {"exposure_rounding_error", o.exposure_rounding},
        {"qubits", mc.circuit.width()},
        {"l_max", l_max},
        {"classical_el", classical.expected_loss},
        {"circuit_el", circuit_el},
        {"encoded_el", runner.exact() * ld},
        {"quantum_el_estimate", est.a_hat * ld},
        {"mlqae", mlqae_json(est, o.schedule, o.mode)},
        {"distribution_max_abs_error", max_err},
        {"hygiene",
         {{"pass", hygiene},
          {"max_flag_probability", worst_flag},
          {"max_pool_probability", worst_pool},
          {"max_x_marginal_error", worst_x}}},
        {"histogram", histogram},
        {"pass", ok},
    };
    out.exit_code = ok ? kExitOk : kExitInvariant;
    return out;
}

std::string cmd_error_curves(const ErrorCurveOptions &o) {
    return error_curves(o.params, o.n_samp_list, o.lo_exp, o.hi_exp, o.points_per_decade).to_csv();
}

}  // namespace qrmc
