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
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "doctest.h"

#include "bchaos/errors.hpp"
#include "bchaos/semiclassics.hpp"

using namespace bchaos;

namespace {

std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) {
        r *= b;
    }
    return r;
}

std::int64_t binom(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

// Census by fixed blocks: a replica permutation with f fixed replicas has
// exactly k of them unshifted in C(f,k) (p-1)^(f-k) p^(r-f) ways.
std::map<int, std::int64_t> census_by_formula(int r, int p) {
    std::map<int, std::int64_t> out;
    std::vector<int> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        int f = 0;
        for (int i = 0; i < r; ++i) {
            f += perm[i] == i;
        }
        for (int k = 0; k <= f; ++k) {
            out[k] += binom(f, k) * ipow(p - 1, f - k) * ipow(p, r - f);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

double oracle_sum(const perm::BlockLayout &a, const perm::BlockLayout &b, int points, double c) {
    double total = 0.0;
    for (const auto &[f, count] : perm::pair_fixed_point_histogram(a, b, kDefaultPairBudget)) {
        total += static_cast<double>(count) * std::pow(c * c, points - f);
    }
    return total;
}

bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace

TEST_CASE("resonance") {
    CHECK(resonance(6, 4).n == 2);
    CHECK(resonance(6, 4).p == 3);
    CHECK(resonance(5, 5).n == 5);
    CHECK(resonance(5, 5).p == 1);
    CHECK(resonance(7, 3).n == 1);
    CHECK(resonance(7, 3).p == 7);
    for (long t = 1; t <= 30; ++t) {
        for (long L = 1; L <= 12; ++L) {
            const auto r = resonance(t, L);
            CHECK(r.n * r.p == t);
            CHECK(L % r.n == 0);
        }
    }
    CHECK_THROWS_AS((void)resonance(0, 3), DomainError);
}

TEST_CASE("subfactorial") {
    CHECK(subfactorial(0) == 1);
    CHECK(subfactorial(1) == 0);
    CHECK(subfactorial(2) == 1);
    CHECK(subfactorial(3) == 2);
    CHECK(subfactorial(4) == 9);
    for (int y = 2; y <= 20; ++y) {
        CHECK(subfactorial(y) == (y - 1) * (subfactorial(y - 1) + subfactorial(y - 2)));
    }
    for (int y = 1; y <= 12; ++y) {
        CHECK(subfactorial(y) ==
              static_cast<std::uint64_t>(std::llround(std::tgamma(y + 1) / std::numbers::e)));
    }
    CHECK_THROWS_AS((void)subfactorial(-1), DomainError);
    CHECK_THROWS_AS((void)subfactorial(21), DomainError);
}

TEST_CASE("A_k polynomials") {
    for (int mn = 1; mn <= 6; ++mn) {
        for (double x : {0.5, 1.0, 2.0, 3.7}) {
            CHECK(a_poly(mn, mn, x) == doctest::Approx(1.0));
        }
    }
    for (double x : {0.0, 1.0, 2.5, 7.0}) {
        CHECK(a_poly(1, 0, x) == doctest::Approx(x - 1.0));
        CHECK(a_poly(1, 1, x) == 1.0);
    }
    CHECK(a_poly_exact(2, 0, 2) == 5);
    CHECK(a_poly_exact(2, 1, 2) == 2);
    CHECK(a_poly_exact(2, 2, 2) == 1);

    for (int mn = 1; mn <= 5; ++mn) {
        for (std::int64_t x = 1; x <= 5; ++x) {
            std::int64_t sum = 0;
            for (int k = 0; k <= mn; ++k) {
                sum += a_poly_exact(mn, k, x);
                CHECK(a_poly(mn, k, static_cast<double>(x)) ==
                      doctest::Approx(static_cast<double>(a_poly_exact(mn, k, x))));
            }
            CHECK(sum == factorial(mn) * ipow(x, mn));
        }
    }
    CHECK_THROWS_AS((void)a_poly(2, 3, 1.0), DomainError);
    CHECK_THROWS_AS((void)a_poly(2, -1, 1.0), DomainError);
    CHECK_THROWS_AS((void)a_poly_exact(2, 3, 1), DomainError);
    CHECK_THROWS_AS((void)a_poly_exact(12, 0, 1000000), DomainError);
}

TEST_CASE("fixed-point census") {
    for (int t = 1; t <= 8; ++t) {
        const auto c = count_fixed_point_classes({1, t});
        CHECK(c.at(1) == 1);
        CHECK(c.at(0) == static_cast<std::uint64_t>(t - 1));
    }
    const auto c22 = count_fixed_point_classes({2, 2});
    CHECK(c22.at(0) == 5);
    CHECK(c22.at(1) == 2);
    CHECK(c22.at(2) == 1);

    for (int r = 1; r <= 8; ++r) {
        for (int p = 1; r * p <= 8; ++p) {
            const auto census = count_fixed_point_classes({r, p});
            const auto formula = census_by_formula(r, p);
            std::uint64_t total = 0;
            for (int k = 0; k <= r; ++k) {
                const std::uint64_t count = census.count(k) ? census.at(k) : 0;
                total += count;
                CHECK(static_cast<std::int64_t>(count) == a_poly_exact(r, k, p));
                CHECK(static_cast<std::int64_t>(count) == (formula.count(k) ? formula.at(k) : 0));
            }
            CHECK(total == static_cast<std::uint64_t>(factorial(r) * ipow(p, r)));
        }
    }
    CHECK_THROWS_AS((void)count_fixed_point_classes({4, 4}), BudgetExceeded);
    CHECK_THROWS_AS((void)count_fixed_point_classes({3, 4}, 10), BudgetExceeded);
}

TEST_CASE("group layouts") {
    const auto bulk = perm::bulk_layout(1, 6, 4);
    REQUIRE(bulk.size() == 2);
    CHECK(bulk[0] == std::vector<int>{0, 4, 2});
    CHECK(bulk[1] == std::vector<int>{1, 5, 3});
    CHECK(perm::group_order(perm::canonical_layout(3, 2)) == 48);
    CHECK(perm::group_order(perm::boundary_layout(2, 3)) == 18);

    std::set<std::vector<int>> seen;
    perm::for_each_element(perm::canonical_layout(2, 3), [&](std::span<const int> img) {
        std::vector<int> v(img.begin(), img.end());
        std::vector<int> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});
        seen.insert(v);
    });
    CHECK(seen.size() == 18);
    CHECK(perm::fixed_points(std::vector<int>{0, 2, 1, 3}) == 2);
}

TEST_CASE("toy_sff") {
    CHECK(toy_sff(3, 2) == 9);
    CHECK(toy_sff(2, 2) == 4);
    CHECK(toy_sff(6, 4) == 108);
    for (long t = 1; t <= 20; ++t) {
        CHECK(toy_sff(t, 1) == doctest::Approx(static_cast<double>(t * t)));
    }
}

TEST_CASE("property: resonance enhancement of the bulk factor") {
    auto bulk = [](long t, long n) {
        return std::tgamma(static_cast<double>(n) + 1) * std::pow(static_cast<double>(t / n), n);
    };
    for (long t = 3; t <= 24; ++t) {
        std::vector<long> divisors;
        for (long n = 1; n <= t; ++n) {
            if (t % n == 0) {
                divisors.push_back(n);
            }
        }
        for (std::size_t i = 1; i < divisors.size(); ++i) {
            CHECK(bulk(t, divisors[i]) > bulk(t, divisors[i - 1]));
        }
        for (long n : divisors) {
            if (n >= 2 && t > 2 * n) {
                CHECK(bulk(t, n) > static_cast<double>(t));
            }
        }
    }
}

TEST_CASE("haar_semiclassical_moment") {
    for (long t = 1; t <= 10; ++t) {
        CHECK(haar_semiclassical_moment(1, t) == t);
    }
    CHECK(haar_semiclassical_moment(2, 3) == 18);
    CHECK(haar_semiclassical_moment(3, 2) == 48);
    CHECK_THROWS((void)haar_semiclassical_moment(0, 2));
}

TEST_CASE("tdual_semiclassical_moment") {
    for (long t = 1; t <= 12; ++t) {
        for (long L = 1; L <= 6; ++L) {
            CHECK(tdual_semiclassical_moment(1, t, L, 1.0) == doctest::Approx(toy_sff(t, L)));
            if (std::gcd(t, L) == 1) {
                for (double c : {0.25, 0.5, 0.9}) {
                    const double expected = t + t * (t - 1) * std::pow(c, 2 * t);
                    CHECK(tdual_semiclassical_moment(1, t, L, c) == doctest::Approx(expected));
                }
            }
            for (int m = 1; m <= 3; ++m) {
                const auto [n, p] = resonance(t, L);
                const double mt = haar_semiclassical_moment(m, t);
                const double full = mt * std::tgamma(m * n + 1.0) * std::pow(double(p), m * n);
                CHECK(tdual_semiclassical_moment(m, t, L, 1.0) == doctest::Approx(full));
                CHECK(tdual_semiclassical_moment(m, t, L, 0.3) >= mt * (1 - 1e-12));
            }
        }
    }
    CHECK(tdual_semiclassical_moment(1, 2, 1, 0.5) == doctest::Approx(2.125));
    CHECK(tdual_semiclassical_moment(1, 201, 4, 0.5) == doctest::Approx(201.0).epsilon(1e-12));
    CHECK(tdual_semiclassical_moment(2, 200, 3, 0.5) ==
          doctest::Approx(haar_semiclassical_moment(2, 200)).epsilon(1e-10));
    CHECK(tdual_semiclassical_moment(1, 5, 2, 0.0) == 5.0);
    CHECK_THROWS_AS((void)tdual_semiclassical_moment(1, 5, 2, 1.5), DomainError);
}

TEST_CASE("permutation oracle, m = 1") {
    CHECK(permutation_oracle_moment(1, 2, 1, 0.5) == doctest::Approx(2.0 + 2.0 * std::pow(0.5, 4)));
    for (long t = 1; t <= 6; ++t) {
        for (long L = 1; L <= 6; ++L) {
            CHECK(permutation_oracle_moment(1, t, L, 1.0) == doctest::Approx(toy_sff(t, L)));
        }
    }
    for (long t = 1; t <= 8; ++t) {
        for (long L = 1; L <= 8; ++L) {
            for (double c : {0.25, 0.5, 1.0}) {
                const double a = permutation_oracle_moment(1, t, L, c);
                const double b = tdual_semiclassical_moment(1, t, L, c);
                CHECK(close(a, b, 1e-12));
            }
        }
    }
    CHECK_THROWS_AS((void)permutation_oracle_moment(2, 6, 2, 0.5), BudgetExceeded);
}

TEST_CASE("bulk blocks must follow the cycles of the shift by L") {
    // Refining each time block into consecutive sub-blocks is not conjugate to
    // the bulk group: the boundary group does not commute with that refinement.
    const int t = 4;
    const int L = 2;
    const double c = 0.5;
    const auto [n, p] = resonance(t, L);
    const auto sigma = perm::boundary_layout(1, t);
    const double consecutive = oracle_sum(sigma, perm::canonical_layout(n, p), t, c);
    const double cycles = oracle_sum(sigma, perm::bulk_layout(1, t, L), t, c);
    const double closed = tdual_semiclassical_moment(1, t, L, c);
    CHECK(cycles == doctest::Approx(closed).epsilon(1e-14));
    CHECK(std::abs(consecutive - closed) > 1.0);
    CHECK(consecutive == doctest::Approx(2.6796875));
    CHECK(closed == doctest::Approx(4.578125));
}

TEST_CASE("experiment: m = 2 double sum against the closed form" * doctest::may_fail()) {
    for (long t = 1; t <= 4; ++t) {
        for (long L = 1; L <= 4; ++L) {
            const double a = permutation_oracle_moment(2, t, L, 0.5);
            const double b = tdual_semiclassical_moment(2, t, L, 0.5);
            INFO("t=", t, " L=", L, " double sum=", a, " closed form=", b);
            CHECK(close(a, b, 1e-12));
        }
    }
}

TEST_CASE("thouless_bound") {
    for (long t = 1; t <= 6; ++t) {
        for (long L = 1; L <= 4; ++L) {
            const double expected = t + std::sqrt(2 * std::numbers::pi * L) * std::exp(1.0 - L) *
                                            std::pow(double(t), L + 1);
            CHECK(thouless_bound(t, L, 1.0) == doctest::Approx(expected));
        }
    }
    CHECK(thouless_bound(4, 1, 0.5) ==
          doctest::Approx(4.0 + 16.0 * std::sqrt(2 * std::numbers::pi) / 256.0));
    for (long t = 1; t <= 8; ++t) {
        for (long L = 1; L <= 6; ++L) {
            for (double c : {0.25, 0.5}) {
                CHECK(thouless_bound(t, L, c) >= tdual_semiclassical_moment(1, t, L, c));
            }
        }
    }
    // the correction eventually decays
    CHECK(thouless_bound(60, 3, 0.5) - 60 < thouless_bound(30, 3, 0.5) - 30);
    CHECK_THROWS_AS((void)thouless_bound(3, 2, 0.0), DomainError);
    CHECK_THROWS_AS((void)thouless_bound(3, 2, 1.1), DomainError);
}

TEST_CASE("thouless_estimate") {
    CHECK(thouless_estimate(4, 0.5) == doctest::Approx(32.0));
    double prev = thouless_estimate(2, 0.5);
    for (double L = 2.5; L <= 20; L += 0.5) {
        const double next = thouless_estimate(L, 0.5);
        CHECK(next > prev);
        prev = next;
    }
    CHECK(thouless_estimate(4, 1.0 - 1e-12) > 1e12);
    CHECK_THROWS_AS((void)thouless_estimate(1, 0.5), DomainError);
    CHECK_THROWS_AS((void)thouless_estimate(4, 1.0), DomainError);
    CHECK_THROWS_AS((void)thouless_estimate(4, 0.0), DomainError);
}

TEST_CASE("predict_tdual") {
    const std::vector<long> times{1, 2, 3, 4};
    const auto p = predict_tdual(1, 2, 0.5, times);
    REQUIRE(p.values.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(p.values[i] == tdual_semiclassical_moment(1, times[i], 2, 0.5));
    }
}
