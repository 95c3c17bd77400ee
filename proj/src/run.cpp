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
#include "bchaos/run.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "bchaos/errors.hpp"
#include "bchaos/semiclassics.hpp"

namespace bchaos::run {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_file(const fs::path &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << body;
}

json ensemble_block(const EnsembleParams &p) {
    json j = to_json(p);
    j["N"] = CircuitSpec(p.q, p.L, make_ensemble(p)).dim();
    if (p.ensemble == "tdual") {
        const Complex c = chi(parse_phase_distribution(p.phase_dist), p.coupling);
        j["chi"] = c.real();
        j["abs_chi"] = std::abs(c);
    }
    return j;
}

json base_manifest(const std::string &command, const EnsembleParams &p) {
    json m;
    m["schema_version"] = kSchemaVersion;
    m["command"] = command;
    m["version"] = BCHAOS_VERSION;
    m["params"] = ensemble_block(p);
    m["heisenberg_time"] = m["params"]["N"];
    m["stderr"] = p.realizations < 2 ? "n/a" : "sample standard deviation / sqrt(R)";
    return m;
}

} // namespace

EnsembleSpec make_ensemble(const EnsembleParams &p) {
    if (p.q < 1) {
        throw DomainError("q must be >= 1");
    }
    EnsembleSpec spec;
    spec.q = p.q;
    if (p.ensemble == "haar") {
        spec.kind = ensemble::Haar{};
    } else if (p.ensemble == "tdual") {
        spec.kind = ensemble::TDual{p.coupling, parse_phase_distribution(p.phase_dist)};
    } else if (p.ensemble == "factorized") {
        spec.kind = ensemble::Factorized{};
    } else {
        throw DomainError("unknown ensemble '" + p.ensemble + "' (haar, tdual, factorized)");
    }
    validate(spec);
    return spec;
}

std::vector<long> make_time_grid(std::optional<long> t_max, const std::vector<long> &explicit_times,
                                 std::optional<long> multiples_of) {
    if (!explicit_times.empty()) {
        if (t_max || multiples_of) {
            throw DomainError("--times cannot be combined with --t-max or --times-multiples-of");
        }
        std::set<long> uniq(explicit_times.begin(), explicit_times.end());
        if (*uniq.begin() < 1) {
            throw DomainError("times must be >= 1");
        }
        return {uniq.begin(), uniq.end()};
    }
    if (!t_max) {
        throw DomainError("one of --t-max or --times is required");
    }
    if (*t_max < 1) {
        throw DomainError("--t-max must be >= 1");
    }
    const long step = multiples_of.value_or(1);
    if (step < 1) {
        throw DomainError("--times-multiples-of must be >= 1");
    }
    std::vector<long> out;
    for (long t = step; t <= *t_max; t += step) {
        out.push_back(t);
    }
    if (out.empty()) {
        throw DomainError("time grid is empty");
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string sff_csv(const SffSeries &series) {
    std::string out = "t,tau,m,K,stderr,kappa,delta_kappa,realizations\n";
    for (const auto &c : series.cells) {
        out += std::to_string(c.t);
        out += ',' + format_double(c.tau);
        out += ',' + std::to_string(c.m);
        out += ',' + format_double(c.K);
        out += ',' + (c.stderr_K ? format_double(*c.stderr_K) : std::string("n/a"));
        out += ',' + format_double(c.kappa);
        out += ',' + format_double(c.delta_kappa);
        out += ',' + std::to_string(c.realizations);
        out += '\n';
    }
    return out;
}

std::string spacings_csv(const SpacingHistogram &hist) {
    std::string out = "s_mid,p_s,realizations,p_cue,p_poisson\n";
    for (std::size_t b = 0; b < hist.bins(); ++b) {
        const double s = hist.bin_mid(b);
        out += format_double(s);
        out += ',' + format_double(hist.densities[b]);
        out += ',' + std::to_string(hist.realizations);
        out += ',' + format_double(wigner_cue_spacing(s));
        out += ',' + format_double(poisson_spacing(s));
        out += '\n';
    }
    return out;
}

json to_json(const EnsembleParams &p) {
    json j;
    j["q"] = p.q;
    j["L"] = p.L;
    j["ensemble"] = p.ensemble;
    if (p.ensemble == "tdual") {
        j["J"] = p.coupling;
        j["phase_dist"] = p.phase_dist;
    }
    j["realizations"] = p.realizations;
    j["master_seed"] = p.seed;
    j["workers"] = p.workers;
    j["dense_cap"] = p.dense_cap;
    return j;
}

EnsembleParams ensemble_params_from_json(const json &j) {
    EnsembleParams p;
    p.q = j.at("q").get<int>();
    p.L = j.at("L").get<int>();
    p.ensemble = j.at("ensemble").get<std::string>();
    if (p.ensemble == "tdual") {
        p.coupling = j.at("J").get<double>();
        p.phase_dist = j.at("phase_dist").get<std::string>();
    }
    p.realizations = j.at("realizations").get<std::size_t>();
    p.seed = j.at("master_seed").get<std::uint64_t>();
    p.workers = j.value("workers", 0U);
    p.dense_cap = j.value("dense_cap", kDefaultDenseCap);
    return p;
}

RunOutput run_sff(const SffParams &params, const fs::path &out_dir) {
    const auto &ep = params.ensemble;
    const CircuitSpec spec(ep.q, ep.L, make_ensemble(ep));
    SffConfig cfg;
    cfg.times = params.times;
    cfg.moments = params.moments;
    cfg.realizations = ep.realizations;
    cfg.master_seed = ep.seed;
    cfg.workers = ep.workers;
    cfg.dense_cap = ep.dense_cap;
    validate(cfg);
    if (spec.dim() > cfg.dense_cap) {
        throw CapacityError("N=" + std::to_string(spec.dim()) + " exceeds dense cap " +
                                std::to_string(cfg.dense_cap),
                            static_cast<long long>(spec.dim()), static_cast<long long>(cfg.dense_cap));
    }

    json manifest = base_manifest("sff", ep);
    manifest["params"]["times"] = params.times;
    manifest["params"]["moments"] = params.moments;
    manifest["started_at"] = utc_now();
    const SffSeries series = estimate_sff(spec, cfg);
    manifest["finished_at"] = utc_now();
    manifest["files"] = json::array({"sff.csv"});

    fs::create_directories(out_dir);
    write_file(out_dir / "sff.csv", sff_csv(series));
    write_file(out_dir / "meta.json", manifest.dump(2) + "\n");
    return {out_dir, manifest};
}

RunOutput run_spacings(const SpacingParams &params, const fs::path &out_dir) {
    const auto &ep = params.ensemble;
    const CircuitSpec spec(ep.q, ep.L, make_ensemble(ep));
    SpacingConfig cfg;
    cfg.realizations = ep.realizations;
    cfg.master_seed = ep.seed;
    cfg.workers = ep.workers;
    cfg.bin_width = params.bin_width;
    cfg.s_max = params.s_max;
    cfg.dense_cap = ep.dense_cap;
    if (cfg.realizations < 1) {
        throw DomainError("realizations must be >= 1");
    }
    (void)make_spacing_bins(cfg.bin_width, cfg.s_max);
    if (spec.dim() > cfg.dense_cap) {
        throw CapacityError("N=" + std::to_string(spec.dim()) + " exceeds dense cap " +
                                std::to_string(cfg.dense_cap),
                            static_cast<long long>(spec.dim()), static_cast<long long>(cfg.dense_cap));
    }
    if (spec.dim() < 2) {
        throw DomainError("level spacings need N >= 2");
    }

    json manifest = base_manifest("spacings", ep);
    manifest["params"]["bin_width"] = params.bin_width;
    manifest["params"]["s_max"] = params.s_max;
    manifest["started_at"] = utc_now();
    const SpacingHistogram hist = estimate_spacing_histogram(spec, cfg);
    manifest["finished_at"] = utc_now();
    manifest["overflow_mass"] = hist.overflow_mass;
    manifest["total_mass"] = hist.total_mass();
    manifest["sup_distance_cue"] = sup_distance(hist, wigner_cue_spacing);
    manifest["files"] = json::array({"spacings.csv"});

    fs::create_directories(out_dir);
    write_file(out_dir / "spacings.csv", spacings_csv(hist));
    write_file(out_dir / "meta.json", manifest.dump(2) + "\n");
    return {out_dir, manifest};
}

SffParams sff_params_from_manifest(const json &manifest) {
    if (manifest.at("command") != "sff") {
        throw DomainError("manifest is not from an sff run");
    }
    SffParams p;
    p.ensemble = ensemble_params_from_json(manifest.at("params"));
    p.times = manifest.at("params").at("times").get<std::vector<long>>();
    p.moments = manifest.at("params").at("moments").get<std::vector<int>>();
    return p;
}

SpacingParams spacing_params_from_manifest(const json &manifest) {
    if (manifest.at("command") != "spacings") {
        throw DomainError("manifest is not from a spacings run");
    }
    SpacingParams p;
    p.ensemble = ensemble_params_from_json(manifest.at("params"));
    p.bin_width = manifest.at("params").at("bin_width").get<double>();
    p.s_max = manifest.at("params").at("s_max").get<double>();
    return p;
}

std::string theory_csv(const TheoryRequest &req) {
    std::function<double(long)> value;
    const std::string &model = req.model;
    if (model == "cue") {
        if (!(req.dim > 0)) {
            throw DomainError("model cue needs --N");
        }
        value = [&](long t) { return cue_sff(static_cast<double>(t), req.dim); };
    } else if (model == "cue-moment") {
        if (!(req.dim > 0)) {
            throw DomainError("model cue-moment needs --N");
        }
        value = [&](long t) { return cue_moment(req.m, static_cast<double>(t), req.dim); };
    } else if (model == "coe") {
        if (!(req.dim > 0)) {
            throw DomainError("model coe needs --N");
        }
        value = [&](long t) { return coe_sff(static_cast<double>(t), req.dim, req.t_h_scale); };
    } else if (model == "toy") {
        value = [&](long t) { return toy_sff(t, req.L); };
    } else if (model == "haar") {
        value = [&](long t) { return haar_semiclassical_moment(req.m, t); };
    } else if (model == "tdual" || model == "bound") {
        const double abs_chi = std::abs(chi(parse_phase_distribution(req.phase_dist), req.coupling));
        if (model == "tdual") {
            value = [&req, abs_chi](long t) {
                return tdual_semiclassical_moment(req.m, t, req.L, abs_chi);
            };
        } else {
            value = [&req, abs_chi](long t) { return thouless_bound(t, req.L, abs_chi); };
        }
    } else {
        throw DomainError("unknown model '" + model +
                          "' (cue, cue-moment, coe, toy, haar, tdual, bound)");
    }
    if (req.times.empty()) {
        throw DomainError("theory: empty time grid");
    }
    std::string out = "t,value,model\n";
    for (long t : req.times) {
        out += std::to_string(t) + ',' + format_double(value(t)) + ',' + model + '\n';
    }
    return out;
}

bool OracleReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const IdentityCheck &c) { return c.passed || c.skipped || !c.blocking; });
}

namespace {

// Runs body(check); a BudgetExceeded marks the check as skipped.
template <class Body>
IdentityCheck guarded(std::string name, double tol, Body &&body) {
    IdentityCheck c;
    c.name = std::move(name);
    c.tolerance = tol;
    try {
        body(c);
        c.passed = c.max_deviation <= tol;
    } catch (const BudgetExceeded &e) {
        c.skipped = true;
        c.passed = false;
        c.note = std::string("skipped: ") + e.what();
    }
    return c;
}

} // namespace

OracleReport run_oracle(const OracleOptions &opt) {
    OracleReport report;
    const int q = 2;
    const std::vector<std::pair<std::string, EnsembleSpec>> kinds = {
        {"haar", {q, ensemble::Haar{}}},
        {"tdual", {q, ensemble::TDual{3.1, UniformPhases{}}}},
        {"factorized", {q, ensemble::Factorized{}}},
    };

    report.checks.push_back(guarded("two_body_trace", 1e-9, [&](IdentityCheck &c) {
        std::uint64_t idx = 0;
        for (const auto &[name, ens] : kinds) {
            for (int L = 1; L <= 4; ++L) {
                for (int t = 1; t <= 5; ++t) {
                    Matrix gate = sample_impurity(ens, {opt.seed, idx++});
                    const auto direct = circuit_trace_powers(CircuitSpec(q, L, ens), gate, t);
                    if (opt.tamper) {
                        gate(0, 0) += 1e-3;
                    }
                    const Complex sum = two_body_trace_oracle(gate, q, L, t, opt.trace_budget);
                    c.max_deviation = std::max(c.max_deviation, std::abs(sum - direct[t - 1]));
                    ++c.cases;
                }
            }
        }
        c.note = "q=2, L<=4, t<=5, haar/tdual/factorized";
    }));

    report.checks.push_back(guarded("toy_factorization", 1e-9, [&](IdentityCheck &c) {
        for (int qq : {2, 3}) {
            for (int L = 1; L <= 5; ++L) {
                const CircuitSpec spec(qq, L, {qq, ensemble::Factorized{}});
                const auto [u, v] = sample_factorized_pair(qq, {opt.seed + 1, static_cast<std::uint64_t>(L)});
                const auto traces = circuit_trace_powers(spec, kron(u, v), 12);
                const auto su = eigenphases(u);
                const auto sv = eigenphases(v);
                for (long t = 1; t <= 12; ++t) {
                    const auto [n, p] = resonance(t, L);
                    const Complex expected =
                        trace_power(su, t) * std::pow(trace_power(sv, p), static_cast<int>(n));
                    c.max_deviation = std::max(c.max_deviation,
                                               std::abs(traces[t - 1] - expected) /
                                                   static_cast<double>(spec.dim()));
                    ++c.cases;
                }
            }
        }
        c.note = "deviation / N, q in {2,3}, L<=5, t<=12";
    }));

    report.checks.push_back(guarded("l_periodicity", 1e-9, [&](IdentityCheck &c) {
        const std::vector<std::array<int, 3>> cases = {{2, 2, 3}, {2, 3, 2}, {2, 1, 4}};
        for (const auto &[qq, L, t] : cases) {
            const Matrix gate = sample_haar_unitary(qq * qq, {opt.seed + 2, static_cast<std::uint64_t>(L)}, 0);
            const CircuitSpec small(qq, L);
            const CircuitSpec large(qq, L + t);
            const Complex a = circuit_trace_powers(small, gate, t)[t - 1];
            const Complex b = circuit_trace_powers(large, gate, t)[t - 1];
            c.max_deviation = std::max(c.max_deviation, std::abs(a - b) / static_cast<double>(large.dim()));
            ++c.cases;
        }
        c.note = "deviation / N";
    }));

    report.checks.push_back(guarded("fixed_point_census", 0.0, [&](IdentityCheck &c) {
        for (int r = 1; r <= 8; ++r) {
            for (int p = 1; r * p <= 8; ++p) {
                const auto census = count_fixed_point_classes({r, p});
                for (const auto &[k, count] : census) {
                    const auto expected = a_poly_exact(r, k, p);
                    c.max_deviation = std::max(
                        c.max_deviation, std::abs(static_cast<double>(count) - static_cast<double>(expected)));
                    ++c.cases;
                }
            }
        }
        c.note = "all r*p <= 8";
    }));

    report.checks.push_back(guarded("a_k_normalization", 0.0, [&](IdentityCheck &c) {
        for (int r = 1; r <= 5; ++r) {
            for (std::int64_t x = 1; x <= 5; ++x) {
                std::int64_t sum = 0;
                for (int k = 0; k <= r; ++k) {
                    sum += a_poly_exact(r, k, x);
                }
                std::int64_t expected = 1;
                for (int i = 2; i <= r; ++i) {
                    expected *= i;
                }
                for (int i = 0; i < r; ++i) {
                    expected *= x;
                }
                c.max_deviation = std::max(c.max_deviation, std::abs(static_cast<double>(sum - expected)));
                ++c.cases;
            }
        }
    }));

    report.checks.push_back(guarded("subfactorial_recurrence", 0.0, [&](IdentityCheck &c) {
        for (int y = 2; y <= 20; ++y) {
            const auto lhs = subfactorial(y);
            const auto rhs = static_cast<std::uint64_t>(y - 1) * (subfactorial(y - 1) + subfactorial(y - 2));
            c.max_deviation = std::max(c.max_deviation, lhs == rhs ? 0.0 : 1.0);
            ++c.cases;
        }
    }));

    auto double_sum = [&](int m, long t_max, long l_max) {
        return [=, &opt](IdentityCheck &c) {
            for (long t = 1; t <= t_max; ++t) {
                for (long L = 1; L <= l_max; ++L) {
                    for (double a : {0.25, 0.5, 1.0}) {
                        const double brute = permutation_oracle_moment(m, t, L, a, opt.pair_budget);
                        const double closed = tdual_semiclassical_moment(m, t, L, a);
                        c.max_deviation = std::max(c.max_deviation, std::abs(brute - closed) / closed);
                        ++c.cases;
                    }
                }
            }
        };
    };
    report.checks.push_back(guarded("tdual_double_sum_m1", 1e-12, double_sum(1, 8, 8)));
    report.checks.back().note += "relative, t<=8, L<=8, |chi| in {1/4,1/2,1}";

    auto experiment = guarded("tdual_double_sum_m2_experiment", 1e-12, double_sum(2, 4, 6));
    experiment.blocking = false;
    experiment.note += (experiment.note.empty() ? "" : "; ") +
                       std::string("informational, m=2, t<=4, L<=6");
    report.checks.push_back(experiment);
    return report;
}

json to_json(const OracleReport &report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["all_passed"] = report.all_passed();
    j["checks"] = json::array();
    for (const auto &c : report.checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"skipped", c.skipped},
                               {"blocking", c.blocking},
                               {"max_deviation", c.max_deviation},
                               {"tolerance", c.tolerance},
                               {"cases", c.cases},
                               {"note", c.note}});
    }
    return j;
}

} // namespace bchaos::run
