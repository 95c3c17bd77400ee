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
// Reference implementations shared by the unit tests. Kept deliberately naive.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "bchaos/linalg.hpp"

namespace testing {

using bchaos::Complex;
using bchaos::Matrix;

/// tr(M^t) by repeated dense multiplication.
inline Complex trace_of_power(const Matrix &m, long t) {
    Matrix p = Matrix::Identity(m.rows(), m.cols());
    for (long s = 0; s < t; ++s) {
        p = p * m;
    }
    return p.trace();
}

inline Matrix swap_gate(int q) {
    Matrix s = Matrix::Zero(q * q, q * q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            s(j * q + i, i * q + j) = 1.0;
        }
    }
    return s;
}

/// Digits of a basis index, site 0 first (most significant).
inline std::vector<int> digits(std::uint64_t index, int q, int sites) {
    std::vector<int> d(sites);
    for (int s = sites - 1; s >= 0; --s) {
        d[s] = static_cast<int>(index % q);
        index /= q;
    }
    return d;
}

inline std::uint64_t index_of(const std::vector<int> &d, int q) {
    std::uint64_t x = 0;
    for (int v : d) {
        x = x * q + v;
    }
    return x;
}

/// Basis map of one step of the circuit with a SWAP (or identity) impurity,
/// written straight from the layer definitions: swap (1,2),(3,4),... then
/// (0,1),(2,3),(4,5),...
inline std::vector<std::uint64_t> swap_circuit_basis_map(int q, int L, bool impurity_swaps = true) {
    std::uint64_t dim = 1;
    for (int s = 0; s <= L; ++s) {
        dim *= q;
    }
    std::vector<std::uint64_t> out(dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
        auto d = digits(b, q, L + 1);
        for (int i = 1; 2 * i <= L; ++i) {
            std::swap(d[2 * i - 1], d[2 * i]);
        }
        for (int i = impurity_swaps ? 0 : 1; 2 * i + 1 <= L; ++i) {
            std::swap(d[2 * i], d[2 * i + 1]);
        }
        out[b] = index_of(d, q);
    }
    return out;
}

/// Adaptive Simpson quadrature.
template <class F>
double simpson(const F &f, double a, double b, double fa, double fm, double fb, double whole,
               double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double integrate(const F &f, double a, double b, double eps = 1e-13) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, eps, 50);
}

/// Mean and standard error of a sample.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double> &xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace testing
