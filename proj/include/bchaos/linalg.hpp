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
 * Dense complex matrix kernels: unitarity checks, partial transpose,
 * eigenphase extraction and power traces computed from spectra.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bchaos {

using Complex = std::complex<double>;
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// Default upper bound on the dimension of matrices that are diagonalized
/// or materialized densely.
inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Tolerance on the unitarity defect accepted by eigenphases().
inline constexpr double kUnitarityTolerance = 1e-8;

/**
 * @brief Sorted quasi-energies of a unitary matrix.
 *
 * Phases are principal values in [-pi, pi), ascending. Construct through
 * eigenphases() or from_phases(); both enforce the invariants.
 */
class EigenphaseSpectrum {
  public:
    EigenphaseSpectrum() = default;

    /// Normalizes every phase into [-pi, pi) and sorts (stable).
    static EigenphaseSpectrum from_phases(std::vector<double> phases);

    [[nodiscard]] std::size_t size() const noexcept { return phases_.size(); }
    [[nodiscard]] std::span<const double> phases() const noexcept {
        return phases_;
    }
    [[nodiscard]] double operator[](std::size_t i) const { return phases_[i]; }

  private:
    explicit EigenphaseSpectrum(std::vector<double> phases)
        : phases_(std::move(phases)) {}
    std::vector<double> phases_;
};

/// Maps an angle to the principal branch [-pi, pi). An argument of exactly
/// pi is reported as -pi.
[[nodiscard]] double principal_phase(double theta);

/// Largest absolute entry of M^dagger M - I.
[[nodiscard]] double unitarity_defect(const Matrix &m);

/// Throws DimensionError unless m is square.
void require_square(const Matrix &m, const char *what);

/// Kronecker product a (x) b; the first factor is the most significant index.
[[nodiscard]] Matrix kron(const Matrix &a, const Matrix &b);

/**
 * @brief Partial transpose on the second qudit of a q^2 x q^2 gate.
 *
 * Entry ((i,j),(k,l)) moves to ((i,l),(k,j)). Applying it twice returns the
 * input bit for bit.
 */
[[nodiscard]] Matrix partial_transpose(const Matrix &gate, int q);

/**
 * @brief All eigenvalue arguments of a unitary matrix.
 *
 * Throws ContractViolation if the unitarity defect exceeds 1e-8 or an
 * eigenvalue modulus deviates from one by more than that, and CapacityError
 * above @p dense_cap.
 */
[[nodiscard]] EigenphaseSpectrum
eigenphases(const Matrix &u, std::size_t dense_cap = kDefaultDenseCap);

/// tr(U^t) = sum_j exp(i theta_j t), for t >= 1.
[[nodiscard]] Complex trace_power(const EigenphaseSpectrum &spectrum, long t);

/// trace_power for t = 1..t_max in one pass; entry t-1 holds tr(U^t).
[[nodiscard]] std::vector<Complex>
trace_powers(const EigenphaseSpectrum &spectrum, long t_max);

} // namespace bchaos
