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

// bchaos: spectral statistics of the boundary-chaos Floquet circuit.
//
//   bchaos sff       --q 3 --L 3 --ensemble haar --t-max 200 --realizations 500 --out run/
//   bchaos spacings  --q 3 --L 3 --ensemble tdual --J 3.1 --realizations 300 --out run/
//   bchaos theory    --model tdual --m 1 --L 4 --J 3.1 --t-max 50
//   bchaos oracle    [--json report.json]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bchaos/errors.hpp"
#include "bchaos/run.hpp"

namespace {

using namespace bchaos;
using namespace bchaos::run;

struct GridFlags {
    long t_max = 0;
    std::vector<long> times;
    long multiples_of = 0;

    [[nodiscard]] std::vector<long> grid(const CLI::Option *t_max_opt,
                                         const CLI::Option *mult_opt) const {
        return make_time_grid(t_max_opt->count() ? std::optional<long>(t_max) : std::nullopt, times,
                              mult_opt->count() ? std::optional<long>(multiples_of) : std::nullopt);
    }
};

void add_ensemble_flags(CLI::App *cmd, EnsembleParams &p) {
    cmd->add_option("--q", p.q, "Local Hilbert-space dimension")->capture_default_str();
    cmd->add_option("--L", p.L, "System size (the chain has L+1 sites)")->capture_default_str();
    cmd->add_option("--ensemble", p.ensemble, "Impurity ensemble: haar | tdual | factorized")
        ->capture_default_str();
    cmd->add_option("--J", p.coupling, "Interaction strength of T-dual gates")->capture_default_str();
    cmd->add_option("--phase-dist", p.phase_dist, "Phase distribution, uniform:a:b")
        ->capture_default_str();
    cmd->add_option("--realizations,-R", p.realizations, "Number of ensemble members")
        ->capture_default_str();
    cmd->add_option("--seed", p.seed, "Master seed")->capture_default_str();
    cmd->add_option("--workers", p.workers, "Worker threads (0: all cores)")->capture_default_str();
    cmd->add_option("--max-dim", p.dense_cap, "Largest dense dimension N")->capture_default_str();
}

void print_report(const OracleReport &report) {
    for (const auto &c : report.checks) {
        const char *status = c.skipped ? "SKIP" : (c.passed ? "PASS" : (c.blocking ? "FAIL" : "DIFF"));
        std::cout << '[' << status << "] " << c.name << "  cases=" << c.cases
                  << "  max_dev=" << format_double(c.max_deviation) << "  tol=" << c.tolerance;
        if (!c.note.empty()) {
            std::cout << "  (" << c.note << ')';
        }
        std::cout << '\n';
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Spectral statistics of the boundary-chaos Floquet circuit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(BCHAOS_VERSION));

    // sff
    SffParams sff;
    GridFlags sff_grid;
    std::string sff_out, sff_manifest;
    auto *sff_cmd = app.add_subcommand("sff", "Estimate the SFF and its moments");
    add_ensemble_flags(sff_cmd, sff.ensemble);
    auto *sff_tmax = sff_cmd->add_option("--t-max", sff_grid.t_max, "Times 1..t_max");
    sff_cmd->add_option("--times", sff_grid.times, "Explicit comma-separated times")->delimiter(',');
    auto *sff_mult = sff_cmd->add_option("--times-multiples-of", sff_grid.multiples_of,
                                         "Only multiples of this value up to t_max");
    sff_cmd->add_option("--moments", sff.moments, "Comma-separated moment orders")
        ->delimiter(',')
        ->capture_default_str();
    sff_cmd->add_option("--out", sff_out, "Run directory")->required();
    sff_cmd->add_option("--from-manifest", sff_manifest,
                        "Re-run with the parameters recorded in a meta.json");

    // spacings
    SpacingParams sp;
    std::string sp_out, sp_manifest;
    auto *sp_cmd = app.add_subcommand("spacings", "Ensemble-averaged level-spacing histogram");
    add_ensemble_flags(sp_cmd, sp.ensemble);
    sp_cmd->add_option("--bin-width", sp.bin_width, "Histogram bin width")->capture_default_str();
    sp_cmd->add_option("--s-max", sp.s_max, "Upper edge of the last bin")->capture_default_str();
    sp_cmd->add_option("--out", sp_out, "Run directory")->required();
    sp_cmd->add_option("--from-manifest", sp_manifest,
                       "Re-run with the parameters recorded in a meta.json");

    // theory
    TheoryRequest th;
    GridFlags th_grid;
    auto *th_cmd = app.add_subcommand("theory", "Print reference curves as CSV");
    th_cmd->add_option("--model", th.model, "cue | cue-moment | coe | toy | haar | tdual | bound")
        ->required();
    auto *th_tmax = th_cmd->add_option("--t-max", th_grid.t_max, "Times 1..t_max");
    th_cmd->add_option("--times", th_grid.times, "Explicit comma-separated times")->delimiter(',');
    auto *th_mult = th_cmd->add_option("--times-multiples-of", th_grid.multiples_of,
                                       "Only multiples of this value up to t_max");
    th_cmd->add_option("--m", th.m, "Moment order")->capture_default_str();
    th_cmd->add_option("--L", th.L, "System size")->capture_default_str();
    th_cmd->add_option("--N", th.dim, "Hilbert-space dimension (Heisenberg time)");
    th_cmd->add_option("--J", th.coupling, "Interaction strength")->capture_default_str();
    th_cmd->add_option("--phase-dist", th.phase_dist, "Phase distribution, uniform:a:b")
        ->capture_default_str();
    th_cmd->add_option("--t-h-scale", th.t_h_scale, "Heisenberg-time scale for the COE curve")
        ->capture_default_str();

    // oracle
    OracleOptions oracle;
    std::string oracle_json;
    auto *or_cmd = app.add_subcommand("oracle", "Run the exact identity checks");
    or_cmd->add_option("--budget", oracle.trace_budget, "Term budget of the two-body trace sum")
        ->capture_default_str();
    or_cmd->add_option("--pair-budget", oracle.pair_budget,
                       "Pair budget of the permutation double sums")
        ->capture_default_str();
    or_cmd->add_option("--seed", oracle.seed, "Seed for the sampled gates")->capture_default_str();
    or_cmd->add_option("--json", oracle_json, "Also write a JSON report to this file");
    or_cmd->add_flag("--tamper", oracle.tamper, "Perturb one gate entry (negative control)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*sff_cmd) {
            if (!sff_manifest.empty()) {
                std::ifstream in(sff_manifest);
                sff = sff_params_from_manifest(nlohmann::json::parse(in));
            } else {
                sff.times = sff_grid.grid(sff_tmax, sff_mult);
            }
            const auto out = run_sff(sff, sff_out);
            std::cout << "wrote " << (out.dir / "sff.csv").string() << '\n';
        } else if (*sp_cmd) {
            if (!sp_manifest.empty()) {
                std::ifstream in(sp_manifest);
                sp = spacing_params_from_manifest(nlohmann::json::parse(in));
            }
            const auto out = run_spacings(sp, sp_out);
            std::cout << "wrote " << (out.dir / "spacings.csv").string() << '\n';
        } else if (*th_cmd) {
            th.times = th_grid.grid(th_tmax, th_mult);
            std::cout << theory_csv(th);
        } else if (*or_cmd) {
            const auto report = run_oracle(oracle);
            print_report(report);
            if (!oracle_json.empty()) {
                std::ofstream(oracle_json) << to_json(report).dump(2) << '\n';
            }
            return report.all_passed() ? kOk : kIdentityFailure;
        }
    } catch (const CapacityError &e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kCapacity;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "bad manifest: " << e.what() << '\n';
        return kUsage;
    } catch (const std::logic_error &e) {
        // DomainError, DimensionError and other invalid input
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
