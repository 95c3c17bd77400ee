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
 * Ensemble estimates of the spectral form factor and its moments, level
 * spacing histograms, reference curves and power-law fits.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bchaos/circuit.hpp"
#include "bchaos/linalg.hpp"

namespace bchaos {

struct SffConfig {
    std::vector<long> times;       ///< ascending, all >= 1
    std::vector<int> moments{1};   ///< each >= 1
    std::size_t realizations = 1;
    std::uint64_t master_seed = 0;
    unsigned workers = 0;          ///< 0: hardware concurrency
    std::size_t dense_cap = kDefaultDenseCap;
};

void validate(const SffConfig &cfg);

/// One (t, m) entry of an SFF series.
struct SffCell {
    long t = 0;
    int m = 1;
    double K = 0.0;                      ///< mean of |tr U^t|^(2m)
    std::optional<double> stderr_K;      ///< empty when fewer than 2 realizations
    std::size_t realizations = 0;
    double tau = 0.0;                    ///< t / N
    double kappa = 0.0;                  ///< (K / m!)^(1/m) / N
    std::optional<double> stderr_kappa;  ///< first-order propagation of stderr_K
    double delta_kappa = 0.0;            ///< kappa - min(t, N) / N
};

struct SffSeries {
    int q = 0;
    int L = 0;
    std::uint64_t dim = 0;
    std::vector<SffCell> cells; ///< ordered by t, then by the configured moment order

    /// Throws std::out_of_range if (t, m) was not estimated.
    [[nodiscard]] const SffCell &at(long t, int m) const;
};

/// Rescaled moment (K/m!)^(1/m) / N.
[[nodiscard]] double rescale_moment(double K, int m, double dim);

/**
 * @brief Monte Carlo estimate of K_m(t) = <|tr U^t|^(2m)>.
 *
 * Realization r draws its impurity from RealizationSeed{master_seed, r},
 * diagonalizes U once and evaluates every (t, m). Reductions run in
 * realization order, so the result is bitwise independent of cfg.workers.
 */
[[nodiscard]] SffSeries estimate_sff(const CircuitSpec &spec, const SffConfig &cfg);

/// N spacings of the eigenphases on the circle (including the wraparound gap),
/// scaled by N / 2pi so their mean is one.
[[nodiscard]] std::vector<double> level_spacings(const EigenphaseSpectrum &spectrum);

struct SpacingConfig {
    std::size_t realizations = 1;
    std::uint64_t master_seed = 0;
    unsigned workers = 0;
    double bin_width = 0.1;
    double s_max = 4.0;
    std::size_t dense_cap = kDefaultDenseCap;
};

struct SpacingHistogram {
    std::vector<double> edges;                 ///< bins + 1 entries
    std::vector<double> densities;             ///< realization-averaged p(s)
    std::vector<double> stderr_density;        ///< empty when fewer than 2 realizations
    double overflow_mass = 0.0;                ///< mean fraction of spacings >= s_max
    std::size_t realizations = 0;

    [[nodiscard]] std::size_t bins() const noexcept { return densities.size(); }
    [[nodiscard]] double bin_mid(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }
    /// sum density * width + overflow; 1 up to rounding.
    [[nodiscard]] double total_mass() const;
};

/// Empty histogram with bins [0, s_max) of the given width.
[[nodiscard]] SpacingHistogram make_spacing_bins(double bin_width, double s_max);

/// Normalized histogram of one spectrum's spacings on the given bins.
[[nodiscard]] SpacingHistogram spacing_histogram(std::span<const double> spacings,
                                                 double bin_width, double s_max);

[[nodiscard]] SpacingHistogram estimate_spacing_histogram(const CircuitSpec &spec,
                                                          const SpacingConfig &cfg);

/// Largest |p(s_mid) - reference(s_mid)| over the bins.
[[nodiscard]] double sup_distance(const SpacingHistogram &hist,
                                  const std::function<double(double)> &reference);

// Reference curves.
[[nodiscard]] double cue_sff(double t, double dim);
[[nodiscard]] double cue_moment(int m, double t, double dim);
[[nodiscard]] double poisson_spacing(double s);
/// (32/pi^2) s^2 exp(-4 s^2 / pi)
[[nodiscard]] double wigner_cue_spacing(double s);
/// COE form factor with Heisenberg time scale * heisenberg_time.
[[nodiscard]] double coe_sff(double t, double heisenberg_time, double scale = 1.0);

enum class TheoryKind { CueSff, CueMoment, Toy, PoissonSpacing, WignerCueSpacing, CoeSff };

struct TheoryParams {
    double dim = 1.0;     ///< N, cue_sff / cue_moment; Heisenberg time for coe_sff
    int m = 1;            ///< cue_moment
    long L = 1;           ///< toy
    double t_h_scale = 1.0;
};

/// The chosen reference as a function of t (or s for spacing curves).
[[nodiscard]] std::function<double(double)> theory_curve(TheoryKind kind, const TheoryParams &params);

struct PowerLaw {
    double amplitude = 0.0;
    double exponent = 0.0; ///< y = amplitude * x^(-exponent)
};

/// Least squares on (log x, log y). Needs >= 3 points, all positive.
[[nodiscard]] PowerLaw power_law_fit(std::span<const double> xs, std::span<const double> ys);

} // namespace bchaos
