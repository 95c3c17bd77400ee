// Copyright 2026 The bchaos Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Run orchestration behind the command-line tool: parameter sets, run
 * directories (meta.json + CSV), theory tables and the identity checks.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bchaos/circuit.hpp"
#include "bchaos/ensembles.hpp"
#include "bchaos/semiclassics.hpp"
#include "bchaos/spectral_stats.hpp"

namespace bchaos::run {

inline constexpr int kSchemaVersion = 1;

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kUsage = 1, kCapacity = 2, kIdentityFailure = 3 };

/// Parameters shared by the ensemble commands (`sff`, `spacings`).
struct EnsembleParams {
    int q = 2;
    int L = 2;
    std::string ensemble = "haar"; ///< haar | tdual | factorized
    double coupling = 3.1;
    std::string phase_dist = "uniform:-1:1";
    std::size_t realizations = 100;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::size_t dense_cap = kDefaultDenseCap;
};

struct SffParams {
    EnsembleParams ensemble;
    std::vector<long> times;
    std::vector<int> moments{1};
};

struct SpacingParams {
    EnsembleParams ensemble;
    double bin_width = 0.1;
    double s_max = 4.0;
};

/// Builds and validates the impurity ensemble; throws DomainError on bad input.
[[nodiscard]] EnsembleSpec make_ensemble(const EnsembleParams &p);

/**
 * Time grid from the mutually exclusive flags: all of 1..t_max, an explicit
 * list (sorted, deduplicated), or the multiples of `multiples_of` up to t_max.
 */
[[nodiscard]] std::vector<long> make_time_grid(std::optional<long> t_max,
                                               const std::vector<long> &explicit_times,
                                               std::optional<long> multiples_of);

/// `%.17g`
[[nodiscard]] std::string format_double(double x);

/// sff.csv body: header `t,tau,m,K,stderr,kappa,delta_kappa,realizations`.
[[nodiscard]] std::string sff_csv(const SffSeries &series);

/// spacings.csv body: `s_mid,p_s,realizations,p_cue,p_poisson`.
[[nodiscard]] std::string spacings_csv(const SpacingHistogram &hist);

[[nodiscard]] nlohmann::json to_json(const EnsembleParams &p);
[[nodiscard]] EnsembleParams ensemble_params_from_json(const nlohmann::json &j);

/// Manifest and data files written into one run directory.
struct RunOutput {
    std::filesystem::path dir;
    nlohmann::json manifest;
};

/// Estimates the SFF series and writes meta.json and sff.csv into @p out_dir.
RunOutput run_sff(const SffParams &params, const std::filesystem::path &out_dir);

/// Writes meta.json and spacings.csv into @p out_dir.
RunOutput run_spacings(const SpacingParams &params, const std::filesystem::path &out_dir);

/// Recovers the parameters of an `sff` run from its meta.json.
[[nodiscard]] SffParams sff_params_from_manifest(const nlohmann::json &manifest);
[[nodiscard]] SpacingParams spacing_params_from_manifest(const nlohmann::json &manifest);

struct TheoryRequest {
    std::string model;              ///< cue | cue-moment | coe | toy | haar | tdual | bound
    std::vector<long> times;
    int m = 1;
    long L = 1;
    double dim = 0.0;               ///< N, for cue / cue-moment / coe
    double coupling = 3.1;
    std::string phase_dist = "uniform:-1:1";
    double t_h_scale = 1.0;
};

/// CSV `t,value,model`; throws DomainError for an unknown model.
[[nodiscard]] std::string theory_csv(const TheoryRequest &req);

struct OracleOptions {
    std::uint64_t trace_budget = kDefaultOracleBudget;
    std::uint64_t pair_budget = kDefaultPairBudget;
    bool tamper = false; ///< perturbs the gate fed to the two-body sum by 1e-3
    std::uint64_t seed = 2024;
};

struct IdentityCheck {
    std::string name;
    bool passed = true;
    bool skipped = false;
    bool blocking = true;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;
    std::string note;
};

struct OracleReport {
    std::vector<IdentityCheck> checks;
    [[nodiscard]] bool all_passed() const;
};

[[nodiscard]] OracleReport run_oracle(const OracleOptions &opt);
[[nodiscard]] nlohmann::json to_json(const OracleReport &report);

} // namespace bchaos::run
