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
#include "bchaos/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bchaos/errors.hpp"
#include "bchaos/parallel.hpp"
#include "bchaos/semiclassics.hpp"

namespace bchaos {

namespace {

// Realizations evaluated per parallel batch; bounds memory for large runs.
constexpr std::size_t kBatchPerWorker = 32;

double factorial(int n) {
    double out = 1.0;
    for (int i = 2; i <= n; ++i) {
        out *= i;
    }
    return out;
}

// Welford accumulator, folded strictly in realization order.
struct RunningMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
    [[nodiscard]] std::optional<double> stderr_of_mean() const {
        if (count < 2) {
            return std::nullopt;
        }
        const double var = m2 / static_cast<double>(count - 1);
        return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
    }
};

template <class Fn>
void for_each_batch(std::size_t total, unsigned workers, Fn &&fn) {
    const std::size_t batch = std::max<std::size_t>(1, kBatchPerWorker * resolve_workers(workers));
    for (std::size_t begin = 0; begin < total; begin += batch) {
        fn(begin, std::min(total, begin + batch));
    }
}

} // namespace

void validate(const SffConfig &cfg) {
    if (cfg.times.empty()) {
        throw DomainError("SffConfig: times must be nonempty");
    }
    for (std::size_t i = 0; i < cfg.times.size(); ++i) {
        if (cfg.times[i] < 1) {
            throw DomainError("SffConfig: times must be >= 1");
        }
        if (i > 0 && cfg.times[i] <= cfg.times[i - 1]) {
            throw DomainError("SffConfig: times must be strictly ascending");
        }
    }
    if (cfg.moments.empty()) {
        throw DomainError("SffConfig: moments must be nonempty");
    }
    for (int m : cfg.moments) {
        if (m < 1) {
            throw DomainError("SffConfig: moments must be >= 1");
        }
    }
    if (cfg.realizations < 1) {
        throw DomainError("SffConfig: realizations must be >= 1");
    }
}

const SffCell &SffSeries::at(long t, int m) const {
    for (const auto &c : cells) {
        if (c.t == t && c.m == m) {
            return c;
        }
    }
    throw std::out_of_range("SffSeries: no cell for t=" + std::to_string(t) +
                            ", m=" + std::to_string(m));
}

double rescale_moment(double K, int m, double dim) {
    return std::pow(K / factorial(m), 1.0 / m) / dim;
}

SffSeries estimate_sff(const CircuitSpec &spec, const SffConfig &cfg) {
    validate(cfg);
    validate(spec.impurity());
    if (spec.dim() > cfg.dense_cap) {
        throw CapacityError("estimate_sff: N=" + std::to_string(spec.dim()) +
                                " exceeds dense cap " + std::to_string(cfg.dense_cap),
                            static_cast<long long>(spec.dim()),
                            static_cast<long long>(cfg.dense_cap));
    }
    const std::size_t n_t = cfg.times.size();
    const std::size_t n_m = cfg.moments.size();
    std::vector<RunningMoments> acc(n_t * n_m);

    for_each_batch(cfg.realizations, cfg.workers, [&](std::size_t begin, std::size_t end) {
        auto rows = map_indices<std::vector<double>>(begin, end, cfg.workers, [&](std::size_t r) {
            const Matrix gate = sample_impurity(spec.impurity(), {cfg.master_seed, r});
            const auto spectrum = eigenphases(build_step_operator(spec, gate, cfg.dense_cap),
                                              cfg.dense_cap);
            std::vector<double> row(n_t * n_m);
            for (std::size_t it = 0; it < n_t; ++it) {
                const double sq = std::norm(trace_power(spectrum, cfg.times[it]));
                for (std::size_t im = 0; im < n_m; ++im) {
                    row[it * n_m + im] = std::pow(sq, cfg.moments[im]);
                }
            }
            return row;
        });
        for (const auto &row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                acc[c].push(row[c]);
            }
        }
    });

    SffSeries out;
    out.q = spec.q();
    out.L = spec.L();
    out.dim = spec.dim();
    const double dim = static_cast<double>(spec.dim());
    for (std::size_t it = 0; it < n_t; ++it) {
        for (std::size_t im = 0; im < n_m; ++im) {
            const auto &a = acc[it * n_m + im];
            SffCell cell;
            cell.t = cfg.times[it];
            cell.m = cfg.moments[im];
            cell.K = a.mean;
            cell.stderr_K = a.stderr_of_mean();
            cell.realizations = a.count;
            cell.tau = static_cast<double>(cell.t) / dim;
            cell.kappa = rescale_moment(cell.K, cell.m, dim);
            if (cell.stderr_K && cell.K > 0.0) {
                // d kappa / d K = kappa / (m K)
                cell.stderr_kappa = cell.kappa / (cell.m * cell.K) * *cell.stderr_K;
            }
            cell.delta_kappa = cell.kappa - std::min(static_cast<double>(cell.t), dim) / dim;
            out.cells.push_back(cell);
        }
    }
    return out;
}

std::vector<double> level_spacings(const EigenphaseSpectrum &spectrum) {
    const std::size_t n = spectrum.size();
    if (n < 2) {
        throw DomainError("level_spacings: need at least 2 levels");
    }
    const double scale = static_cast<double>(n) / (2.0 * std::numbers::pi);
    std::vector<double> out(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out[i] = (spectrum[i + 1] - spectrum[i]) * scale;
    }
    out[n - 1] = (spectrum[0] + 2.0 * std::numbers::pi - spectrum[n - 1]) * scale;
    return out;
}

double SpacingHistogram::total_mass() const {
    double mass = overflow_mass;
    for (std::size_t b = 0; b < densities.size(); ++b) {
        mass += densities[b] * (edges[b + 1] - edges[b]);
    }
    return mass;
}

SpacingHistogram make_spacing_bins(double bin_width, double s_max) {
    if (!(bin_width > 0.0) || !(s_max > 0.0)) {
        throw DomainError("spacing histogram: bin width and range must be positive");
    }
    const auto bins = static_cast<std::size_t>(std::llround(s_max / bin_width));
    if (bins < 1 || std::abs(static_cast<double>(bins) * bin_width - s_max) > 1e-9 * s_max) {
        throw DomainError("spacing histogram: range must be a whole number of bins");
    }
    SpacingHistogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = static_cast<double>(b) * bin_width;
    }
    h.densities.assign(bins, 0.0);
    return h;
}

SpacingHistogram spacing_histogram(std::span<const double> spacings, double bin_width,
                                   double s_max) {
    SpacingHistogram h = make_spacing_bins(bin_width, s_max);
    if (spacings.empty()) {
        throw DomainError("spacing_histogram: no spacings");
    }
    const double total = static_cast<double>(spacings.size());
    std::vector<std::size_t> counts(h.bins(), 0);
    std::size_t over = 0;
    for (double s : spacings) {
        const auto b = static_cast<std::size_t>(std::floor(std::max(s, 0.0) / bin_width));
        if (b < counts.size()) {
            ++counts[b];
        } else {
            ++over;
        }
    }
    for (std::size_t b = 0; b < counts.size(); ++b) {
        h.densities[b] = static_cast<double>(counts[b]) / (total * bin_width);
    }
    h.overflow_mass = static_cast<double>(over) / total;
    h.realizations = 1;
    return h;
}

SpacingHistogram estimate_spacing_histogram(const CircuitSpec &spec, const SpacingConfig &cfg) {
    if (cfg.realizations < 1) {
        throw DomainError("SpacingConfig: realizations must be >= 1");
    }
    validate(spec.impurity());
    SpacingHistogram out = make_spacing_bins(cfg.bin_width, cfg.s_max);
    std::vector<RunningMoments> acc(out.bins() + 1);

    for_each_batch(cfg.realizations, cfg.workers, [&](std::size_t begin, std::size_t end) {
        auto hists = map_indices<SpacingHistogram>(begin, end, cfg.workers, [&](std::size_t r) {
            const Matrix gate = sample_impurity(spec.impurity(), {cfg.master_seed, r});
            const auto spectrum = eigenphases(build_step_operator(spec, gate, cfg.dense_cap),
                                              cfg.dense_cap);
            const auto s = level_spacings(spectrum);
            return spacing_histogram(s, cfg.bin_width, cfg.s_max);
        });
        for (const auto &h : hists) {
            for (std::size_t b = 0; b < h.bins(); ++b) {
                acc[b].push(h.densities[b]);
            }
            acc.back().push(h.overflow_mass);
        }
    });

    for (std::size_t b = 0; b < out.bins(); ++b) {
        out.densities[b] = acc[b].mean;
    }
    out.overflow_mass = acc.back().mean;
    out.realizations = acc.back().count;
    if (out.realizations >= 2) {
        out.stderr_density.resize(out.bins());
        for (std::size_t b = 0; b < out.bins(); ++b) {
            out.stderr_density[b] = *acc[b].stderr_of_mean();
        }
    }
    return out;
}

double sup_distance(const SpacingHistogram &hist, const std::function<double(double)> &reference) {
    double worst = 0.0;
    for (std::size_t b = 0; b < hist.bins(); ++b) {
        worst = std::max(worst, std::abs(hist.densities[b] - reference(hist.bin_mid(b))));
    }
    return worst;
}

double cue_sff(double t, double dim) { return std::min(t, dim); }

double cue_moment(int m, double t, double dim) {
    if (m < 1) {
        throw DomainError("cue_moment: m must be >= 1");
    }
    return factorial(m) * std::pow(cue_sff(t, dim), m);
}

double poisson_spacing(double s) { return std::exp(-s); }

double wigner_cue_spacing(double s) {
    constexpr double pi = std::numbers::pi;
    return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
}

double coe_sff(double t, double heisenberg_time, double scale) {
    const double th = heisenberg_time * scale;
    if (!(th > 0.0)) {
        throw DomainError("coe_sff: Heisenberg time must be positive");
    }
    if (t <= th) {
        return 2.0 * t - t * std::log1p(2.0 * t / th);
    }
    return 2.0 * th - t * std::log((2.0 * t + th) / (2.0 * t - th));
}

std::function<double(double)> theory_curve(TheoryKind kind, const TheoryParams &params) {
    switch (kind) {
    case TheoryKind::CueSff:
        return [dim = params.dim](double t) { return cue_sff(t, dim); };
    case TheoryKind::CueMoment:
        if (params.m < 1) {
            throw DomainError("theory_curve: m must be >= 1");
        }
        return [dim = params.dim, m = params.m](double t) { return cue_moment(m, t, dim); };
    case TheoryKind::Toy:
        if (params.L < 1) {
            throw DomainError("theory_curve: L must be >= 1");
        }
        return [L = params.L](double t) { return toy_sff(std::lround(t), L); };
    case TheoryKind::PoissonSpacing:
        return poisson_spacing;
    case TheoryKind::WignerCueSpacing:
        return wigner_cue_spacing;
    case TheoryKind::CoeSff:
        return [th = params.dim, scale = params.t_h_scale](double t) { return coe_sff(t, th, scale); };
    }
    throw DomainError("theory_curve: unknown kind");
}

PowerLaw power_law_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw DimensionError("power_law_fit: xs and ys differ in length");
    }
    if (xs.size() < 3) {
        throw DomainError("power_law_fit: need at least 3 points");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
            throw DomainError("power_law_fit: data must be positive");
        }
        sx += std::log(xs[i]);
        sy += std::log(ys[i]);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(ys[i]) - my);
    }
    if (!(sxx > 0.0)) {
        throw DomainError("power_law_fit: x values must not all coincide");
    }
    const double slope = sxy / sxx;
    return {std::exp(my - slope * mx), -slope};
}

} // namespace bchaos
