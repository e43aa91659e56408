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

#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qrmc/commands.h"
#include "qrmc/errors.h"

namespace qrmc {
namespace {

// Accepts a plain number, "pi", "pi/K" or "K*pi".
double parse_angle(const std::string &text) {
    const auto num = [&](const std::string &s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::logic_error &) {
            used = 0;
        }
        if (s.empty() || used != s.size()) {
            throw ParameterError("cannot parse angle '" + text + "'");
        }
        return v;
    };
    if (text == "pi") {
        return std::numbers::pi;
    }
    if (text.rfind("pi/", 0) == 0) {
        return std::numbers::pi / num(text.substr(3));
    }
    if (text.size() > 3 && text.compare(text.size() - 3, 3, "*pi") == 0) {
        return num(text.substr(0, text.size() - 3)) * std::numbers::pi;
    }
    return num(text);
}

struct PrngFlags {
    std::uint64_t a = 11, c = 0, m = 31, seed = 1;
    std::string perm = "none";
    std::optional<std::size_t> bits;

    void attach(CLI::App *app) {
        app->add_option("--prn-a", a, "LCG multiplier")->capture_default_str();
        app->add_option("--prn-c", c, "LCG increment")->capture_default_str();
        app->add_option("--prn-m", m, "LCG modulus")->capture_default_str();
        app->add_option("--prn-seed", seed, "LCG seed")->capture_default_str();
        app->add_option("--perm", perm, "none | rotation:R | xorshift:S")->capture_default_str();
        app->add_option("--prn-bits", bits, "output window width in bits");
    }

    PcgSpec spec() const {
        nlohmann::json j = {{"a", a}, {"c", c}, {"m", m}, {"seed", seed}, {"perm", perm}};
        if (bits) {
            j["window_bits"] = *bits;
        }
        return pcg_from_json(j);
    }
};

void emit(const std::string &text, const std::string &path, std::ostream &out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ParameterError("cannot write '" + path + "'");
    }
    f << text;
}

MlqaeMode mode_from(const std::string &m) {
    if (m == "full") {
        return MlqaeMode::FullCircuit;
    }
    if (m == "binomial") {
        return MlqaeMode::AnalyticBinomial;
    }
    throw ParameterError("--mode must be full or binomial");
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum Monte Carlo integration with quantum-generated pseudo-random numbers", "qrmc"};
    app.require_subcommand(1);
    std::string out_path;

    // prng-verify
    auto *verify = app.add_subcommand("prng-verify", "exhaustively check P_PRN and J_PRN against the classical PCG");
    PrngFlags vflags;
    vflags.attach(verify);
    std::size_t v_samp_bits = 3;
    std::uint64_t v_nran = 2;
    std::optional<std::uint64_t> corrupt;
    verify->add_option("--nsamp-bits", v_samp_bits, "sample-index register width")->capture_default_str();
    verify->add_option("--nran", v_nran, "numbers drawn per sample")->capture_default_str();
    verify->add_option("--corrupt-multiplier", corrupt, "build circuits with this multiplier (negative control)");
    verify->add_option("--out", out_path, "write JSON here instead of stdout");

    // integrate
    auto *integ = app.add_subcommand("integrate", "sin^2 integral by MLQAE");
    PrngFlags iflags;
    iflags.attach(integ);
    std::string theta_text = "pi/6", schedule_text, mode_text = "full";
    std::size_t n_var = 2, i_samp_bits = 3;
    std::uint64_t seed = 0;
    integ->add_option("--theta", theta_text, "upper limit, e.g. 0.5 or pi/6")->capture_default_str();
    integ->add_option("--nvar", n_var, "number of variables")->capture_default_str();
    integ->add_option("--nsamp-bits", i_samp_bits, "log2 of the number of samples")->capture_default_str();
    integ->add_option("--schedule", schedule_text, "MLQAE schedule m:N,... (default 2^k:100, k=0..8)");
    integ->add_option("--mode", mode_text, "full | binomial")->capture_default_str();
    integ->add_option("--seed", seed, "RNG seed for shot sampling")->capture_default_str();
    integ->add_option("--out", out_path, "write JSON here instead of stdout");

    // credit
    auto *credit = app.add_subcommand("credit", "expected loss of a Merton-model portfolio");
    std::string config_path, hist_path, c_schedule, c_mode;
    std::optional<std::uint64_t> c_seed;
    credit->add_option("--config", config_path, "portfolio JSON file")->required();
    credit->add_option("--schedule", c_schedule, "override the MLQAE schedule");
    credit->add_option("--mode", c_mode, "override the MLQAE mode (full | binomial)");
    credit->add_option("--seed", c_seed, "override the RNG seed");
    credit->add_option("--hist", hist_path, "write the loss histogram CSV here");
    credit->add_option("--out", out_path, "write JSON here instead of stdout");

    // error-curves
    auto *curves = app.add_subcommand("error-curves", "analytic error model table as CSV");
    ErrorCurveOptions eo;
    curves->add_option("--nsamp-list", eo.n_samp_list, "n_samp values")->delimiter(',')->capture_default_str();
    curves->add_option("--lo-exp", eo.lo_exp, "first decade exponent")->capture_default_str();
    curves->add_option("--hi-exp", eo.hi_exp, "last decade exponent")->capture_default_str();
    curves->add_option("--points-per-decade", eo.points_per_decade)->capture_default_str();
    curves->add_option("--c", eo.params.c, "sampling prefactor c");
    curves->add_option("--sigma", eo.params.sigma, "integrand standard deviation");
    curves->add_option("--d", eo.params.d, "estimation prefactor d");
    curves->add_option("--E", eo.params.E, "estimation constant E");
    curves->add_option("--out", out_path, "write CSV here instead of stdout");

    std::vector<const char *> argv{"qrmc"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*verify) {
            PrngVerifyOptions o;
            o.spec = vflags.spec();
            o.n_samp_bits = v_samp_bits;
            o.n_ran = v_nran;
            o.corrupt_multiplier = corrupt;
            const CommandOutput r = cmd_prng_verify(o);
            emit(dump_json(r.doc), out_path, out);
            return r.exit_code;
        }
        if (*integ) {
            IntegrateOptions o;
            o.config.theta = parse_angle(theta_text);
            o.config.n_var = n_var;
            o.config.n_samp = i_samp_bits;
            o.config.prng = iflags.spec();
            o.schedule = schedule_text.empty() ? MlqaeSchedule::powers_of_two(8, 100, seed)
                                               : MlqaeSchedule::parse(schedule_text, seed);
            o.mode = mode_from(mode_text);
            const CommandOutput r = cmd_integrate(o);
            emit(dump_json(r.doc), out_path, out);
            return r.exit_code;
        }
        if (*credit) {
            std::ifstream f(config_path);
            if (!f) {
                throw ParameterError("cannot read '" + config_path + "'");
            }
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception &e) {
                throw ParameterError(std::string("bad portfolio JSON: ") + e.what());
            }
            CreditOptions o = credit_from_json(j);
            if (c_seed) {
                o.schedule.seed = *c_seed;
            }
            if (!c_schedule.empty()) {
                o.schedule = MlqaeSchedule::parse(c_schedule, o.schedule.seed);
            }
            if (!c_mode.empty()) {
                o.mode = mode_from(c_mode);
            }
            std::string csv;
            const CommandOutput r = cmd_credit(o, &csv);
            if (!hist_path.empty()) {
                emit(csv, hist_path, out);
            }
            emit(dump_json(r.doc), out_path, out);
            return r.exit_code;
        }
        if (*curves) {
            emit(cmd_error_curves(eo), out_path, out);
            return kExitOk;
        }
    } catch (const ContractError &e) {
        err << "qrmc: invariant violated: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const ResourceError &e) {
        err << "qrmc: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ParameterError &e) {
        err << "qrmc: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace qrmc
