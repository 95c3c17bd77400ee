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
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "support.hpp"

#include "bchaos/circuit.hpp"
#include "bchaos/errors.hpp"

using namespace bchaos;

namespace {

Matrix haar_gate(int q, std::uint64_t r) { return sample_haar_unitary(q * q, {77, r}, 0); }

Vector random_state(std::uint64_t dim, std::uint64_t r) {
    const Matrix m = sample_haar_unitary(static_cast<int>(dim), {78, r}, 0);
    return m.col(0);
}

std::vector<Matrix> one_gate_per_kind(int q, std::uint64_t r) {
    const auto [u, v] = sample_factorized_pair(q, {79, r});
    return {haar_gate(q, r), sample_tdual_gate(q, 3.1, UniformPhases{}, {79, r}), kron(u, v)};
}

} // namespace

TEST_CASE("CircuitSpec") {
    const CircuitSpec s(3, 3);
    CHECK(s.dim() == 81);
    CHECK(s.heisenberg_time() == 81);
    CHECK(s.sites() == 4);
    CHECK_THROWS_AS(CircuitSpec(0, 2), DomainError);
    CHECK_THROWS_AS(CircuitSpec(2, 0), DomainError);
    CHECK_THROWS_AS(CircuitSpec(2, 64), CapacityError);
    CHECK(CircuitSpec(2, 62).dim() == (std::uint64_t{1} << 63));
    CHECK_THROWS(CircuitSpec(2, 3, EnsembleSpec{3, ensemble::Haar{}}));
}

TEST_CASE("swap layers form one cycle through the bulk") {
    for (int L = 1; L <= 9; ++L) {
        const auto perm = swap_layers(L);
        REQUIRE(perm.image.size() == static_cast<std::size_t>(L + 1));
        CHECK(perm.is_bijection());
        CHECK(perm.image[0] == 0);
        // follow site 1 around: must visit every bulk site before returning
        int x = 1;
        int steps = 0;
        do {
            x = perm.image[x];
            ++steps;
        } while (x != 1 && steps <= L + 1);
        CHECK(steps == L);
        if (L > 1) {
            CHECK(perm.cycle_lengths() == std::vector<int>{1, L});
        }
    }
    CHECK_FALSE(SitePermutation{{0, 0, 1}}.is_bijection());
}

TEST_CASE("L = 1 step operator is the gate itself") {
    const Matrix g = haar_gate(3, 1);
    CHECK(build_step_operator(CircuitSpec(3, 1), g) == g);
}

TEST_CASE("SWAP impurity gives a permutation matrix") {
    const CircuitSpec spec(2, 3);
    const Matrix u = build_step_operator(spec, testing::swap_gate(2));
    const auto map = testing::swap_circuit_basis_map(2, 3);
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        int nonzero = 0;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            if (u(r, c) != Complex(0.0)) {
                ++nonzero;
                CHECK(u(r, c) == Complex(1.0));
                CHECK(static_cast<std::uint64_t>(r) == map[c]);
            }
        }
        CHECK(nonzero == 1);
    }
}

TEST_CASE("step operators are unitary") {
    for (const auto &g : one_gate_per_kind(2, 3)) {
        CHECK(unitarity_defect(build_step_operator(CircuitSpec(2, 4), g)) < 1e-12);
    }
    CHECK(unitarity_defect(build_step_operator(CircuitSpec(3, 3), haar_gate(3, 4))) < 1e-12);
}

TEST_CASE("column sparsity of the dense step operator") {
    for (int q : {2, 3}) {
        for (int L : {1, 2, 3, 4}) {
            if (q == 3 && L == 4) {
                continue;
            }
            const CircuitSpec spec(q, L);
            const Matrix u = build_step_operator(spec, haar_gate(q, L));
            const Matrix p = build_step_operator(spec, testing::swap_gate(q));
            for (Eigen::Index c = 0; c < u.cols(); ++c) {
                CHECK((u.col(c).array() != Complex(0.0)).count() == q * q);
                CHECK((p.col(c).array() != Complex(0.0)).count() == 1);
            }
        }
    }
}

TEST_CASE("apply_step") {
    const CircuitSpec spec(2, 3);
    // basis state through the all-swap circuit
    const auto map = testing::swap_circuit_basis_map(2, 3);
    for (std::uint64_t b = 0; b < spec.dim(); ++b) {
        Vector e = Vector::Zero(spec.dim());
        e(b) = 1.0;
        const Vector out = apply_step(spec, testing::swap_gate(2), e);
        Vector expected = Vector::Zero(spec.dim());
        expected(map[b]) = 1.0;
        CHECK(out == expected);
    }

    const Matrix g = haar_gate(2, 9);
    const Matrix u = build_step_operator(spec, g);
    const Vector psi = random_state(spec.dim(), 1);
    CHECK((apply_step(spec, g, psi) - u * psi).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(u.trace() - circuit_trace_powers(spec, g, 1)[0]) < 1e-12);

    CHECK_THROWS_AS((void)apply_step(spec, g, Vector::Zero(5)), DimensionError);
    CHECK_THROWS_AS((void)apply_step(spec, haar_gate(3, 1), psi), DimensionError);
}

TEST_CASE("property: apply_step preserves the norm") {
    for (int L : {1, 2, 3, 4, 5}) {
        const CircuitSpec spec(2, L);
        for (const auto &g : one_gate_per_kind(2, L)) {
            const Vector psi = random_state(spec.dim(), L);
            const double n = apply_step(spec, g, psi).norm();
            CHECK(std::abs(n - psi.norm()) < 1e-12 * psi.norm());
        }
    }
}

TEST_CASE("identity impurity: traces count periodic basis states") {
    const int q = 2;
    const int L = 2;
    const CircuitSpec spec(q, L);
    const auto traces = circuit_trace_powers(spec, Matrix::Identity(q * q, q * q), 12);
    const auto map = testing::swap_circuit_basis_map(q, L, false);
    for (long t = 1; t <= 12; ++t) {
        long fixed = 0;
        for (std::uint64_t b = 0; b < map.size(); ++b) {
            std::uint64_t x = b;
            for (long s = 0; s < t; ++s) {
                x = map[x];
            }
            fixed += (x == b);
        }
        CHECK(std::abs(traces[t - 1] - Complex(static_cast<double>(fixed))) < 1e-9);
    }
}

TEST_CASE("factorized impurity: trace factorizes by resonance") {
    for (int q : {2, 3}) {
        for (int L = 1; L <= 5; ++L) {
            if (q == 3 && L == 5) {
                continue;
            }
            const CircuitSpec spec(q, L);
            const auto [u, v] = sample_factorized_pair(q, {5, static_cast<std::uint64_t>(L)});
            const auto traces = circuit_trace_powers(spec, kron(u, v), 12);
            const double N = static_cast<double>(spec.dim());
            for (long t = 1; t <= 12; ++t) {
                const long n = std::gcd(t, static_cast<long>(L));
                const Complex expected =
                    testing::trace_of_power(u, t) * std::pow(testing::trace_of_power(v, t / n), n);
                CHECK(std::abs(traces[t - 1] - expected) < 1e-9 * N);
            }
        }
    }
}

TEST_CASE("trace is periodic in L with period t") {
    const int q = 2;
    const Matrix g = haar_gate(q, 31);
    for (auto [L, t] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{1, 4}}) {
        const auto a = circuit_trace_powers(CircuitSpec(q, L), g, t);
        const auto b = circuit_trace_powers(CircuitSpec(q, L + t), g, t);
        const double N = std::pow(2.0, L + t + 1);
        CHECK(std::abs(a[t - 1] - b[t - 1]) < 1e-9 * N);
    }
}

TEST_CASE("two-body trace oracle") {
    const Matrix g = haar_gate(2, 1);
    for (int L : {1, 2, 5}) {
        CHECK(std::abs(two_body_trace_oracle(g, 2, L, 1) - g.trace()) < 1e-12);
    }

    const Matrix h = haar_gate(2, 2);
    CHECK(std::abs(two_body_trace_oracle(h, 2, 2, 3) -
                   circuit_trace_powers(CircuitSpec(2, 2), h, 3)[2]) < 1e-9);
    const Matrix d = sample_tdual_gate(2, 3.1, UniformPhases{}, {3, 3});
    CHECK(std::abs(two_body_trace_oracle(d, 2, 3, 4) -
                   circuit_trace_powers(CircuitSpec(2, 3), d, 4)[3]) < 1e-9);

    CHECK_THROWS_AS((void)two_body_trace_oracle(g, 2, 2, 11), BudgetExceeded);
    CHECK_NOTHROW((void)two_body_trace_oracle(g, 2, 2, 11, std::uint64_t{1} << 22));
}

TEST_CASE("property: two-body oracle equals the direct trace") {
    for (int L = 1; L <= 4; ++L) {
        for (const auto &g : one_gate_per_kind(2, 40 + L)) {
            const auto direct = circuit_trace_powers(CircuitSpec(2, L), g, 5);
            for (int t = 1; t <= 5; ++t) {
                CHECK(std::abs(two_body_trace_oracle(g, 2, L, t) - direct[t - 1]) < 1e-9);
            }
        }
    }
}

TEST_CASE("shift-direction calibration") {
    // Both orientations of the time shift in the two-body sum are tested
    // against the direct trace. They agree because reversing the direction is
    // a transpose of the whole tensor network; +1 is the one used by the oracle.
    const Matrix g = haar_gate(2, 5);
    const Complex direct = circuit_trace_powers(CircuitSpec(2, 2), g, 3)[2];
    const Complex fwd = detail::two_body_sum(g, 2, 2, 3, +1, kDefaultOracleBudget);
    const Complex bwd = detail::two_body_sum(g, 2, 2, 3, -1, kDefaultOracleBudget);
    CHECK(std::abs(fwd - direct) < 1e-9);
    CHECK(std::abs(bwd - direct) < 1e-9);
    CHECK(two_body_trace_oracle(g, 2, 2, 3) == fwd);
    CHECK_THROWS((void)detail::two_body_sum(g, 2, 2, 3, 0, kDefaultOracleBudget));
}

TEST_CASE("dense cap") {
    CHECK_THROWS_AS((void)build_step_operator(CircuitSpec(2, 5), haar_gate(2, 1), 32),
                    CapacityError);
    CHECK_NOTHROW((void)build_step_operator(CircuitSpec(2, 4), haar_gate(2, 1), 32));
}
