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
#include "bchaos/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "bchaos/errors.hpp"

namespace bchaos {

namespace {

using Wide = __int128;

Wide checked(Wide v) {
    constexpr Wide lim = std::numeric_limits<std::int64_t>::max();
    if (v > lim || v < -lim) {
        throw DomainError("integer overflow in exact polynomial evaluation");
    }
    return v;
}

Wide binomial(int n, int k) {
    Wide out = 1;
    for (int i = 1; i <= k; ++i) {
        out = checked(out * (n - k + i)) / i;
    }
    return out;
}

Wide ipow(Wide base, int e) {
    Wide out = 1;
    for (int i = 0; i < e; ++i) {
        out = checked(out * base);
    }
    return out;
}

double factorial(int n) {
    double out = 1.0;
    for (int i = 2; i <= n; ++i) {
        out *= i;
    }
    return out;
}

void require_abs_chi(double abs_chi) {
    if (!(abs_chi >= 0.0 && abs_chi <= 1.0)) {
        throw DomainError("|chi| must lie in [0, 1]");
    }
}

} // namespace

Resonance resonance(long t, long L) {
    if (t < 1 || L < 1) {
        throw DomainError("resonance: t and L must be >= 1");
    }
    const long n = std::gcd(t, L);
    return {n, t / n};
}

std::uint64_t subfactorial(int y) {
    if (y < 0) {
        throw DomainError("subfactorial: negative argument");
    }
    if (y > 20) {
        throw DomainError("subfactorial: argument above 20 overflows 64 bits");
    }
    std::uint64_t prev = 1; // !0
    if (y == 0) {
        return prev;
    }
    std::uint64_t cur = 0; // !1
    for (int k = 2; k <= y; ++k) {
        const std::uint64_t next = static_cast<std::uint64_t>(k - 1) * (cur + prev);
        prev = cur;
        cur = next;
    }
    return cur;
}

std::int64_t a_poly_exact(int mn, int k, std::int64_t x) {
    if (mn < 0 || k < 0 || k > mn) {
        throw DomainError("a_poly: k must lie in [0, mn]");
    }
    Wide sum = 0;
    for (int l = k; l <= mn; ++l) {
        Wide term = checked(binomial(mn, l) * binomial(l, k));
        term = checked(term * static_cast<Wide>(subfactorial(mn - l)));
        term = checked(term * ipow(x, mn - l));
        term = checked(term * ipow(x - 1, l - k));
        sum = checked(sum + term);
    }
    return static_cast<std::int64_t>(sum);
}

double a_poly(int mn, int k, double x) {
    if (mn < 0 || k < 0 || k > mn) {
        throw DomainError("a_poly: k must lie in [0, mn]");
    }
    double sum = 0.0;
    for (int l = k; l <= mn; ++l) {
        sum += static_cast<double>(binomial(mn, l)) * static_cast<double>(binomial(l, k)) *
               static_cast<double>(subfactorial(mn - l)) * std::pow(x, mn - l) *
               std::pow(x - 1.0, l - k);
    }
    return sum;
}

namespace perm {

BlockLayout canonical_layout(int replicas, int period) {
    if (replicas < 1 || period < 1) {
        throw DomainError("layout: replicas and period must be >= 1");
    }
    BlockLayout out(replicas);
    for (int b = 0; b < replicas; ++b) {
        for (int s = 0; s < period; ++s) {
            out[b].push_back(b * period + s);
        }
    }
    return out;
}

BlockLayout boundary_layout(int m, int t) { return canonical_layout(m, t); }

BlockLayout bulk_layout(int m, int t, int L) {
    if (m < 1) {
        throw DomainError("layout: m must be >= 1");
    }
    const auto [n, p] = resonance(t, L);
    BlockLayout out;
    for (int a = 0; a < m; ++a) {
        for (long k = 0; k < n; ++k) {
            std::vector<int> block;
            for (long j = 0; j < p; ++j) {
                block.push_back(a * t + static_cast<int>((k + j * L) % t));
            }
            out.push_back(std::move(block));
        }
    }
    return out;
}

std::uint64_t group_order(const BlockLayout &layout) {
    const auto r = layout.size();
    const auto p = layout.empty() ? 0 : layout.front().size();
    constexpr std::uint64_t lim = std::uint64_t{1} << 62;
    std::uint64_t out = 1;
    for (std::size_t i = 2; i <= r; ++i) {
        if (out > lim / i) {
            throw BudgetExceeded("group order overflow");
        }
        out *= i;
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (p != 0 && out > lim / p) {
            throw BudgetExceeded("group order overflow");
        }
        out *= p;
    }
    return out;
}

void for_each_element(const BlockLayout &layout,
                      const std::function<void(std::span<const int>)> &visit) {
    const int r = static_cast<int>(layout.size());
    if (r == 0) {
        return;
    }
    const int p = static_cast<int>(layout.front().size());
    int points = 0;
    for (const auto &block : layout) {
        if (static_cast<int>(block.size()) != p) {
            throw DimensionError("layout blocks must have equal length");
        }
        points += p;
    }
    std::vector<int> pi(r);
    std::iota(pi.begin(), pi.end(), 0);
    std::vector<int> shift(r, 0);
    std::vector<int> image(points, 0);
    do {
        std::fill(shift.begin(), shift.end(), 0);
        while (true) {
            for (int b = 0; b < r; ++b) {
                const auto &src = layout[b];
                const auto &dst = layout[pi[b]];
                for (int s = 0; s < p; ++s) {
                    image[src[s]] = dst[(s + shift[b]) % p];
                }
            }
            visit(image);
            int b = r - 1;
            for (; b >= 0; --b) {
                if (++shift[b] < p) {
                    break;
                }
                shift[b] = 0;
            }
            if (b < 0) {
                break;
            }
        }
    } while (std::next_permutation(pi.begin(), pi.end()));
}

int fixed_points(std::span<const int> image) {
    int count = 0;
    for (std::size_t x = 0; x < image.size(); ++x) {
        count += image[x] == static_cast<int>(x) ? 1 : 0;
    }
    return count;
}

std::map<int, std::uint64_t> pair_fixed_point_histogram(const BlockLayout &a,
                                                        const BlockLayout &b,
                                                        std::uint64_t budget) {
    const std::uint64_t na = group_order(a);
    const std::uint64_t nb = group_order(b);
    if (na != 0 && nb > budget / na) {
        throw BudgetExceeded("pair enumeration of " + std::to_string(na) + " x " +
                             std::to_string(nb) + " elements exceeds budget " +
                             std::to_string(budget));
    }
    std::vector<std::vector<int>> small;
    small.reserve(na);
    for_each_element(a, [&](std::span<const int> img) { small.emplace_back(img.begin(), img.end()); });
    const std::size_t points = small.empty() ? 0 : small.front().size();
    std::vector<std::uint64_t> counts(points + 1, 0);
    for_each_element(b, [&](std::span<const int> img) {
        if (img.size() != points) {
            throw DimensionError("pair enumeration: groups act on different point sets");
        }
        for (const auto &s : small) {
            // fp(s^-1 u) = #{x : u(x) = s(x)}
            int f = 0;
            for (std::size_t x = 0; x < points; ++x) {
                f += img[x] == s[x] ? 1 : 0;
            }
            ++counts[f];
        }
    });
    std::map<int, std::uint64_t> out;
    for (std::size_t f = 0; f < counts.size(); ++f) {
        if (counts[f] != 0) {
            out[static_cast<int>(f)] = counts[f];
        }
    }
    return out;
}

} // namespace perm

std::map<int, std::uint64_t> count_fixed_point_classes(const ShiftInvariantGroupSpec &group,
                                                       std::uint64_t budget) {
    if (group.replicas < 1 || group.period < 1) {
        throw DomainError("count_fixed_point_classes: replicas and period must be >= 1");
    }
    if (group.replicas * group.period > 12) {
        throw BudgetExceeded("count_fixed_point_classes: r*p must be <= 12");
    }
    const auto layout = perm::canonical_layout(group.replicas, group.period);
    if (perm::group_order(layout) > budget) {
        throw BudgetExceeded("count_fixed_point_classes: group order exceeds budget");
    }
    std::map<int, std::uint64_t> out;
    for (int k = 0; k <= group.replicas; ++k) {
        out[k] = 0;
    }
    perm::for_each_element(layout, [&](std::span<const int> img) {
        const int f = perm::fixed_points(img);
        if (f % group.period != 0) {
            throw ContractViolation("fixed-point count is not a multiple of the period");
        }
        ++out[f / group.period];
    });
    return out;
}

double toy_sff(long t, long L) {
    const auto [n, p] = resonance(t, L);
    // t * n! (t/n)^n, the boundary ramp times the bulk n-th moment at time p.
    return static_cast<double>(t) * factorial(static_cast<int>(n)) *
           std::pow(static_cast<double>(p), static_cast<double>(n));
}

double haar_semiclassical_moment(int m, long t) {
    if (m < 1 || t < 1) {
        throw DomainError("haar_semiclassical_moment: m and t must be >= 1");
    }
    return factorial(m) * std::pow(static_cast<double>(t), m);
}

double tdual_semiclassical_moment(int m, long t, long L, double abs_chi) {
    if (m < 1) {
        throw DomainError("tdual_semiclassical_moment: m must be >= 1");
    }
    require_abs_chi(abs_chi);
    const auto [n, p] = resonance(t, L);
    const int mn = static_cast<int>(m * n);
    const double x = static_cast<double>(p);
    const double c2 = abs_chi * abs_chi;
    double sum = 0.0;
    for (int k = 0; k <= mn; ++k) {
        // |chi|^(2mt(1 - k/(mn))) = (|chi|^2)^(p (mn - k)) since mt/(mn) = p.
        const double weight = std::pow(c2, static_cast<double>(p) * (mn - k));
        sum += a_poly(mn, k, x) * weight;
    }
    return haar_semiclassical_moment(m, t) * sum;
}

double permutation_oracle_moment(int m, long t, long L, double abs_chi, std::uint64_t budget) {
    if (m < 1 || t < 1 || L < 1) {
        throw DomainError("permutation_oracle_moment: m, t, L must be >= 1");
    }
    require_abs_chi(abs_chi);
    if (m * t > 10) {
        throw BudgetExceeded("permutation_oracle_moment: m*t must be <= 10");
    }
    const int ti = static_cast<int>(t);
    const auto hist = perm::pair_fixed_point_histogram(perm::boundary_layout(m, ti),
                                                       perm::bulk_layout(m, ti, static_cast<int>(L)),
                                                       budget);
    const double c2 = abs_chi * abs_chi;
    double sum = 0.0;
    for (const auto &[f, count] : hist) {
        sum += static_cast<double>(count) * std::pow(c2, static_cast<double>(m * t - f));
    }
    return sum;
}

double thouless_bound(long t, long L, double abs_chi) {
    if (t < 1 || L < 1) {
        throw DomainError("thouless_bound: t and L must be >= 1");
    }
    if (!(abs_chi > 0.0 && abs_chi <= 1.0)) {
        throw DomainError("thouless_bound: |chi| must lie in (0, 1]");
    }
    const double tl = static_cast<double>(t);
    const double ll = static_cast<double>(L);
    return tl + std::sqrt(2.0 * std::numbers::pi * ll) * std::exp(1.0 - ll) * std::pow(tl, ll + 1.0) *
                    std::pow(abs_chi, 2.0 * tl / ll);
}

double thouless_estimate(double L, double abs_chi) {
    if (!(L >= 2.0)) {
        throw DomainError("thouless_estimate: L must be >= 2");
    }
    if (!(abs_chi > 0.0 && abs_chi < 1.0)) {
        throw DomainError("thouless_estimate: |chi| must lie in (0, 1)");
    }
    return L * L * std::log(L) / std::abs(std::log(abs_chi));
}

SemiclassicalPrediction predict_tdual(int m, long L, double abs_chi, std::span<const long> times) {
    SemiclassicalPrediction out{m, L, abs_chi, {}, {}};
    out.times.assign(times.begin(), times.end());
    out.values.reserve(times.size());
    for (long t : times) {
        out.values.push_back(tdual_semiclassical_moment(m, t, L, abs_chi));
    }
    return out;
}

} // namespace bchaos
