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

// Experiment drivers behind the qrmc command-line tool.
//
// Each command returns a JSON document (or CSV text) plus an exit status, so
// the drivers can be exercised without spawning a process.

#ifndef QRMC_COMMANDS_H
#define QRMC_COMMANDS_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrmc/analysis.h"
#include "qrmc/pipelines.h"
#include "qrmc/prng.h"
#include "qrmc/qae.h"

namespace qrmc {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitInvariant = 3 };

/// Serializes with every floating-point number printed as %.17g.
std::string dump_json(const nlohmann::json &doc, int indent = 2);

/// "none", "rotation:R" or "xorshift:S".
PermutationSpec parse_permutation(const std::string &text);

/// PcgSpec as a flat object: a, c, m, seed, perm, window_offset, window_bits.
nlohmann::json pcg_to_json(const PcgSpec &spec);
PcgSpec pcg_from_json(const nlohmann::json &j);

struct CommandOutput {
    nlohmann::json doc;
    int exit_code = kExitOk;
};

struct PrngVerifyOptions {
    PcgSpec spec = PcgSpec::make({11, 0, 31, 1});
    std::size_t n_samp_bits = 3;
    std::uint64_t n_ran = 2;
    /// Builds the circuits with this multiplier while checking against the
    /// true one; a negative control for the checker itself.
    std::optional<std::uint64_t> corrupt_multiplier;
};

/// Largest modulus the exhaustive checks accept.
inline constexpr std::uint64_t kMaxVerifyModulus = 1u << 12;

CommandOutput cmd_prng_verify(const PrngVerifyOptions &options);

struct IntegrateOptions {
    Sin2Config config = Sin2Config::demo();
    MlqaeSchedule schedule = MlqaeSchedule::powers_of_two(8, 100, 0);
    MlqaeMode mode = MlqaeMode::FullCircuit;
};

CommandOutput cmd_integrate(const IntegrateOptions &options);

struct CreditOptions {
    Portfolio portfolio;
    /// Encoder scale; 0 selects 2^n_loss.
    std::uint64_t l_max = 0;
    MlqaeSchedule schedule = MlqaeSchedule::powers_of_two(8, 100, 0);
    MlqaeMode mode = MlqaeMode::AnalyticBinomial;
    /// Sum over obligors of |exposure - round(exposure)| at load time.
    double exposure_rounding = 0;
};

/// Reads the flat portfolio document; exposures are rounded to integers.
CreditOptions credit_from_json(const nlohmann::json &j);

/// Also fills `histogram_csv` with "loss,probability" rows.
CommandOutput cmd_credit(const CreditOptions &options, std::string *histogram_csv = nullptr);

struct ErrorCurveOptions {
    ErrorModelParams params = ErrorModelParams::unit_prefactors();
    std::vector<std::uint64_t> n_samp_list{10, 20, 30};
    int lo_exp = 1;
    int hi_exp = 8;
    int points_per_decade = 10;
};

std::string cmd_error_curves(const ErrorCurveOptions &options);

/// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qrmc

#endif
