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
 * Large-q predictions for the spectral form factor and its moments, together
 * with the permutation-group enumeration that checks them.
 *
 * Notation: n = gcd(t, L) and p = t / n. The bulk qudit returns to the
 * impurity every L steps, so within t steps its world lines close into n
 * loops of p visits each.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace bchaos {

struct Resonance {
    long n; ///< gcd(t, L)
    long p; ///< t / n
};

[[nodiscard]] Resonance resonance(long t, long L);

/// Number of derangements of y items; exact up to y = 20.
[[nodiscard]] std::uint64_t subfactorial(int y);

/**
 * A_k(x) = sum_{l=k}^{r} C(r,l) C(l,k) [!(r-l)] x^(r-l) (x-1)^(l-k) with
 * r = mn. For integer x = p it counts the elements of the shift-invariant
 * group G_r^(p) with exactly k*p fixed points.
 */
[[nodiscard]] double a_poly(int mn, int k, double x);

/// Integer evaluation of a_poly; throws DomainError on 64-bit overflow.
[[nodiscard]] std::int64_t a_poly_exact(int mn, int k, std::int64_t x);

namespace perm {

/// Points grouped into equally long ordered blocks. A group element maps
/// block b to block pi(b) and shifts slots cyclically by an offset c_b.
using BlockLayout = std::vector<std::vector<int>>;

/// r blocks of p consecutive points.
[[nodiscard]] BlockLayout canonical_layout(int replicas, int period);

/// m replicas of t time slots, point index replica*t + slot.
[[nodiscard]] BlockLayout boundary_layout(int m, int t);

/// The same m*t points, each replica split into the n cycles of the shift by
/// L (mod t); block (replica, k) lists slots k, k+L, k+2L, ... in cycle order.
[[nodiscard]] BlockLayout bulk_layout(int m, int t, int L);

/// Visits every element of the group generated by the layout, as an image
/// vector over all points. Order: replica permutations in lexicographic
/// order, then shift vectors in odometer order.
void for_each_element(const BlockLayout &layout,
                      const std::function<void(std::span<const int>)> &visit);

/// Number of elements, r! p^r; throws BudgetExceeded past 2^62.
[[nodiscard]] std::uint64_t group_order(const BlockLayout &layout);

[[nodiscard]] int fixed_points(std::span<const int> image);

/// Histogram over f of #{(s, u) : s in G_a, u in G_b, fp(s^-1 u) = f}.
[[nodiscard]] std::map<int, std::uint64_t> pair_fixed_point_histogram(const BlockLayout &a,
                                                                      const BlockLayout &b,
                                                                      std::uint64_t budget);

} // namespace perm

struct ShiftInvariantGroupSpec {
    int replicas = 1;
    int period = 1;
};

inline constexpr std::uint64_t kDefaultCensusBudget = 50'000'000;
inline constexpr std::uint64_t kDefaultPairBudget = 200'000'000;

/**
 * Census of G_r^(p) by fixed points: key k counts elements with k*p fixed
 * points. Requires r*p <= 12.
 */
[[nodiscard]] std::map<int, std::uint64_t>
count_fixed_point_classes(const ShiftInvariantGroupSpec &group,
                          std::uint64_t budget = kDefaultCensusBudget);

/// (n!/n^n) t^(n+1), the SFF with a non-interacting impurity u (x) v.
[[nodiscard]] double toy_sff(long t, long L);

/// m! t^m
[[nodiscard]] double haar_semiclassical_moment(int m, long t);

/// m! t^m sum_k A_k(t/n) |chi|^(2mt(1 - k/(mn))).
[[nodiscard]] double tdual_semiclassical_moment(int m, long t, long L, double abs_chi);

/**
 * Brute-force double sum over s in G_m^(t) and u in G_mn^(p) of
 * |chi|^(2mt - 2 fp(s^-1 u)), with both groups acting on the same m*t
 * points (bulk blocks are the cycles of the shift by L). Requires m*t <= 10.
 */
[[nodiscard]] double permutation_oracle_moment(int m, long t, long L, double abs_chi,
                                               std::uint64_t budget = kDefaultPairBudget);

/// t + sqrt(2 pi L) e^(1-L) t^(L+1) |chi|^(2t/L)
[[nodiscard]] double thouless_bound(long t, long L, double abs_chi);

/// L^2 ln(L) / |ln |chi||; an upper-bound scale for the Thouless time.
[[nodiscard]] double thouless_estimate(double L, double abs_chi);

struct SemiclassicalPrediction {
    int m = 1;
    long L = 1;
    double abs_chi = 1.0;
    std::vector<long> times;
    std::vector<double> values;
};

[[nodiscard]] SemiclassicalPrediction predict_tdual(int m, long L, double abs_chi,
                                                    std::span<const long> times);

} // namespace bchaos
