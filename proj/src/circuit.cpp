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
#include "bchaos/circuit.hpp"

#include <limits>
#include <string>
#include <utility>

#include "bchaos/errors.hpp"

namespace bchaos {

namespace {

std::uint64_t checked_power(int base, int exponent) {
    std::uint64_t out = 1;
    for (int k = 0; k < exponent; ++k) {
        if (out > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base)) {
            throw CapacityError("q^(L+1) overflows a 64-bit index", -1,
                                std::numeric_limits<long long>::max());
        }
        out *= static_cast<std::uint64_t>(base);
    }
    return out;
}

void require_gate(const CircuitSpec &spec, const Matrix &gate) {
    const auto d = static_cast<Eigen::Index>(spec.q()) * spec.q();
    if (gate.rows() != d || gate.cols() != d) {
        throw DimensionError("impurity gate must be " + std::to_string(d) + "x" +
                             std::to_string(d) + ", got " + std::to_string(gate.rows()) + "x" +
                             std::to_string(gate.cols()));
    }
}

void require_dense(const CircuitSpec &spec, std::size_t dense_cap) {
    if (spec.dim() > dense_cap) {
        throw CapacityError("circuit dimension N=" + std::to_string(spec.dim()) +
                                " exceeds dense cap " + std::to_string(dense_cap),
                            static_cast<long long>(spec.dim()), static_cast<long long>(dense_cap));
    }
}

// Basis index reached from each basis index under the swap layers.
std::vector<std::uint64_t> permuted_indices(const CircuitSpec &spec) {
    const int sites = spec.sites();
    const auto q = static_cast<std::uint64_t>(spec.q());
    const SitePermutation perm = swap_layers(spec.L());
    // place[x]: base-q weight of the site that receives the content of x.
    std::vector<std::uint64_t> weight(sites);
    for (int x = sites - 1, w = 0; x >= 0; --x, ++w) {
        weight[x] = checked_power(spec.q(), w);
    }
    std::vector<std::uint64_t> out(spec.dim());
    std::vector<std::uint64_t> digits(sites, 0);
    for (std::uint64_t idx = 0; idx < spec.dim(); ++idx) {
        std::uint64_t target = 0;
        for (int x = 0; x < sites; ++x) {
            target += digits[x] * weight[perm.image[x]];
        }
        out[idx] = target;
        // Increment the digit counter; site L is least significant.
        for (int x = sites - 1; x >= 0; --x) {
            if (++digits[x] < q) {
                break;
            }
            digits[x] = 0;
        }
    }
    return out;
}

} // namespace

CircuitSpec::CircuitSpec(int q, int L, EnsembleSpec impurity)
    : q_(q), L_(L), dim_(0), impurity_(std::move(impurity)) {
    if (q < 1) {
        throw DomainError("CircuitSpec: q must be >= 1");
    }
    if (L < 1) {
        throw DomainError("CircuitSpec: L must be >= 1");
    }
    if (impurity_.q != q) {
        throw DimensionError("CircuitSpec: impurity ensemble has q=" + std::to_string(impurity_.q) +
                             ", circuit has q=" + std::to_string(q));
    }
    dim_ = checked_power(q, L + 1);
}

CircuitSpec::CircuitSpec(int q, int L) : CircuitSpec(q, L, EnsembleSpec{q, ensemble::Haar{}}) {}

bool SitePermutation::is_bijection() const {
    std::vector<char> seen(image.size(), 0);
    for (int x : image) {
        if (x < 0 || static_cast<std::size_t>(x) >= image.size() || seen[x]) {
            return false;
        }
        seen[x] = 1;
    }
    return true;
}

std::vector<int> SitePermutation::cycle_lengths() const {
    std::vector<int> out;
    std::vector<char> seen(image.size(), 0);
    for (std::size_t start = 0; start < image.size(); ++start) {
        if (seen[start]) {
            continue;
        }
        int len = 0;
        for (auto x = start; !seen[x]; x = static_cast<std::size_t>(image[x])) {
            seen[x] = 1;
            ++len;
        }
        out.push_back(len);
    }
    return out;
}

SitePermutation swap_layers(int L) {
    if (L < 1) {
        throw DomainError("swap_layers: L must be >= 1");
    }
    SitePermutation perm;
    perm.image.resize(static_cast<std::size_t>(L) + 1);
    for (int x = 0; x <= L; ++x) {
        int pos = x;
        // U1: P_{2i-1,2i}, i = 1..floor(L/2)
        if (pos >= 1 && pos <= 2 * (L / 2)) {
            pos = (pos % 2 == 1) ? pos + 1 : pos - 1;
        }
        // swaps of U2: P_{2i,2i+1}, i = 1..floor((L-1)/2)
        if (pos >= 2 && pos <= 2 * ((L - 1) / 2) + 1) {
            pos = (pos % 2 == 0) ? pos + 1 : pos - 1;
        }
        perm.image[x] = pos;
    }
    return perm;
}

Vector apply_step(const CircuitSpec &spec, const Matrix &gate, const Vector &state) {
    require_gate(spec, gate);
    if (static_cast<std::uint64_t>(state.size()) != spec.dim()) {
        throw DimensionError("apply_step: state has length " + std::to_string(state.size()) +
                             ", expected " + std::to_string(spec.dim()));
    }
    const auto table = permuted_indices(spec);
    Vector moved(state.size());
    for (Eigen::Index idx = 0; idx < state.size(); ++idx) {
        moved(static_cast<Eigen::Index>(table[idx])) = state(idx);
    }
    const auto q2 = static_cast<Eigen::Index>(spec.q()) * spec.q();
    const auto rest = static_cast<Eigen::Index>(spec.dim()) / q2;
    // Element (r, a) of the view is amplitude a*rest + r: a = (i0, i1), r = the other sites.
    Eigen::Map<const Matrix> in_view(moved.data(), rest, q2);
    Vector out(state.size());
    Eigen::Map<Matrix> out_view(out.data(), rest, q2);
    out_view.noalias() = in_view * gate.transpose();
    return out;
}

Matrix build_step_operator(const CircuitSpec &spec, const Matrix &gate, std::size_t dense_cap) {
    require_gate(spec, gate);
    require_dense(spec, dense_cap);
    const auto table = permuted_indices(spec);
    const auto n = static_cast<Eigen::Index>(spec.dim());
    const auto q2 = static_cast<Eigen::Index>(spec.q()) * spec.q();
    const auto rest = n / q2;
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const auto moved = static_cast<Eigen::Index>(table[col]);
        const Eigen::Index a = moved / rest;
        const Eigen::Index r = moved % rest;
        for (Eigen::Index b = 0; b < q2; ++b) {
            out(b * rest + r, col) = gate(b, a);
        }
    }
    return out;
}

std::vector<Complex> circuit_trace_powers(const CircuitSpec &spec, const Matrix &gate, long t_max,
                                          std::size_t dense_cap) {
    const Matrix u = build_step_operator(spec, gate, dense_cap);
    return trace_powers(eigenphases(u, dense_cap), t_max);
}

namespace detail {

Complex two_body_sum(const Matrix &gate, int q, int L, int t, int direction,
                     std::uint64_t budget) {
    if (q < 1 || gate.rows() != static_cast<Eigen::Index>(q) * q ||
        gate.cols() != static_cast<Eigen::Index>(q) * q) {
        throw DimensionError("two_body_trace_oracle: gate must be q^2 x q^2");
    }
    if (L < 1 || t < 1) {
        throw DomainError("two_body_trace_oracle: L and t must be >= 1");
    }
    if (direction != 1 && direction != -1) {
        throw DomainError("two_body_trace_oracle: direction must be +1 or -1");
    }
    // q^(2t) terms
    std::uint64_t terms = 1;
    for (int k = 0; k < 2 * t; ++k) {
        if (terms > budget / static_cast<std::uint64_t>(q)) {
            throw BudgetExceeded("two_body_trace_oracle: q^(2t) terms exceed budget " +
                                 std::to_string(budget));
        }
        terms *= static_cast<std::uint64_t>(q);
    }

    const auto wrap = [t](long s) { return static_cast<int>(((s % t) + t) % t); };
    std::vector<int> next_i(t), next_j(t);
    for (int s = 0; s < t; ++s) {
        next_i[s] = wrap(s + direction);
        next_j[s] = wrap(s + static_cast<long>(direction) * L);
    }

    // digits[0..t) are i_s, digits[t..2t) are j_s
    std::vector<int> digits(2 * static_cast<std::size_t>(t), 0);
    Complex total{0.0, 0.0};
    for (std::uint64_t term = 0; term < terms; ++term) {
        Complex prod{1.0, 0.0};
        for (int s = 0; s < t; ++s) {
            const int row = digits[s] * q + digits[t + s];
            const int col = digits[next_i[s]] * q + digits[t + next_j[s]];
            prod *= gate(row, col);
        }
        total += prod;
        for (int k = 2 * t - 1; k >= 0; --k) {
            if (++digits[k] < q) {
                break;
            }
            digits[k] = 0;
        }
    }
    return total;
}

} // namespace detail

Complex two_body_trace_oracle(const Matrix &gate, int q, int L, int t, std::uint64_t budget) {
    return detail::two_body_sum(gate, q, L, t, +1, budget);
}

} // namespace bchaos
