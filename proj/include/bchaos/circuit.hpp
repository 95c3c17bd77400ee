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
 * The boundary-chaos brickwork circuit on L+1 qudits.
 *
 * One Floquet step is U = U2 U1 where U1 swaps the pairs (1,2), (3,4), ...
 * and U2 applies the impurity gate on (0,1) together with swaps on (2,3),
 * (4,5), ... Basis states |i0 i1 ... iL> are indexed with site 0 as the most
 * significant base-q digit; a gate acting on sites (0,1) uses row index
 * i0*q + i1.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bchaos/ensembles.hpp"
#include "bchaos/linalg.hpp"

namespace bchaos {

/// Default number of terms the two-body trace oracle may enumerate.
inline constexpr std::uint64_t kDefaultOracleBudget = std::uint64_t{1} << 20;

class CircuitSpec {
  public:
    /// Throws DomainError for q < 1 or L < 1 and CapacityError if q^(L+1)
    /// overflows a 64-bit index.
    CircuitSpec(int q, int L, EnsembleSpec impurity);
    CircuitSpec(int q, int L);

    [[nodiscard]] int q() const noexcept { return q_; }
    [[nodiscard]] int L() const noexcept { return L_; }
    [[nodiscard]] int sites() const noexcept { return L_ + 1; }
    /// Hilbert-space dimension q^(L+1).
    [[nodiscard]] std::uint64_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::uint64_t heisenberg_time() const noexcept { return dim_; }
    [[nodiscard]] const EnsembleSpec &impurity() const noexcept { return impurity_; }

  private:
    int q_;
    int L_;
    std::uint64_t dim_;
    EnsembleSpec impurity_;
};

/// Bijection of sites: the content of site x moves to image[x].
struct SitePermutation {
    std::vector<int> image;

    [[nodiscard]] bool is_bijection() const;
    /// Cycle lengths of the permutation, in order of their smallest element.
    [[nodiscard]] std::vector<int> cycle_lengths() const;
};

/// Net site permutation of the two swap layers (U1 followed by the swaps of U2).
[[nodiscard]] SitePermutation swap_layers(int L);

/// 𝒰 applied to a state of length q^(L+1) without forming 𝒰.
[[nodiscard]] Vector apply_step(const CircuitSpec &spec, const Matrix &gate, const Vector &state);

/// Dense 𝒰, assembled column by column from the action on basis states.
[[nodiscard]] Matrix build_step_operator(const CircuitSpec &spec, const Matrix &gate,
                                         std::size_t dense_cap = kDefaultDenseCap);

/// tr(𝒰^t) for t = 1..t_max from one eigenphase decomposition.
[[nodiscard]] std::vector<Complex> circuit_trace_powers(const CircuitSpec &spec,
                                                        const Matrix &gate, long t_max,
                                                        std::size_t dense_cap = kDefaultDenseCap);

/**
 * @brief tr(𝒰^t) as a two-body sum over t-periodic index sequences.
 *
 * Evaluates sum over i, j in [q]^t of prod_s <i_s j_s|U|i_{s+1} j_{s+L}>
 * (indices mod t). Needs q^(2t) terms; throws BudgetExceeded above @p budget.
 */
[[nodiscard]] Complex two_body_trace_oracle(const Matrix &gate, int q, int L, int t,
                                            std::uint64_t budget = kDefaultOracleBudget);

namespace detail {
/// The two-body sum with the time-shift direction as a parameter: +1 pairs
/// step s with (s+1, s+L), -1 with (s-1, s-L).
[[nodiscard]] Complex two_body_sum(const Matrix &gate, int q, int L, int t, int direction,
                                   std::uint64_t budget);
} // namespace detail

} // namespace bchaos
