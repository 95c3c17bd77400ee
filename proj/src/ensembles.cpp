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
#include "bchaos/ensembles.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "bchaos/errors.hpp"

namespace bchaos {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::mt19937_64 make_stream(const RealizationSeed &seed, std::uint64_t slot) {
    std::uint64_t h = splitmix64(seed.master_seed);
    h = splitmix64(h ^ seed.realization_index);
    h = splitmix64(h ^ (slot + 0x632be59bd9b4e019ULL));
    // Seed the full Mersenne state from a derived sequence rather than one word.
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(splitmix64(h)),
                      static_cast<std::uint32_t>(splitmix64(h) >> 32)};
    return std::mt19937_64(seq);
}

void validate(const PhaseDistribution &dist) {
    std::visit(overloaded{[](const UniformPhases &u) {
                   if (!std::isfinite(u.a) || !std::isfinite(u.b) || !(u.a < u.b)) {
                       throw DomainError("uniform phase distribution requires a < b");
                   }
                   if (u.a != -u.b) {
                       throw DomainError("uniform phase distribution must have zero mean (a = -b)");
                   }
               }},
               dist);
}

PhaseDistribution parse_phase_distribution(const std::string &text) {
    std::istringstream in(text);
    std::string kind, a, b, extra;
    if (!std::getline(in, kind, ':') || kind != "uniform" || !std::getline(in, a, ':') ||
        !std::getline(in, b, ':') || std::getline(in, extra)) {
        throw DomainError("phase distribution must look like uniform:a:b, got '" + text + "'");
    }
    UniformPhases out;
    try {
        std::size_t used = 0;
        out.a = std::stod(a, &used);
        if (used != a.size()) {
            throw std::invalid_argument(a);
        }
        out.b = std::stod(b, &used);
        if (used != b.size()) {
            throw std::invalid_argument(b);
        }
    } catch (const std::logic_error &) {
        throw DomainError("phase distribution bounds are not numbers: '" + text + "'");
    }
    PhaseDistribution dist = out;
    validate(dist);
    return dist;
}

std::string to_string(const PhaseDistribution &dist) {
    return std::visit(overloaded{[](const UniformPhases &u) {
                          std::ostringstream os;
                          os.precision(17);
                          os << "uniform:" << u.a << ':' << u.b;
                          return os.str();
                      }},
                      dist);
}

Complex chi(const PhaseDistribution &dist, double coupling) {
    validate(dist);
    return std::visit(overloaded{[coupling](const UniformPhases &u) {
                          // Symmetric support: <exp(i J xi)> = sin(J b) / (J b).
                          const double x = coupling * u.b;
                          if (std::abs(x) < 1e-8) {
                              return Complex(1.0 - x * x / 6.0, 0.0);
                          }
                          return Complex(std::sin(x) / x, 0.0);
                      }},
                      dist);
}

void validate(const EnsembleSpec &spec) {
    if (spec.q < 1) {
        throw DomainError("local dimension q must be >= 1");
    }
    std::visit(overloaded{[](const ensemble::Haar &) {},
                          [](const ensemble::Factorized &) {},
                          [](const ensemble::TDual &t) {
                              if (!std::isfinite(t.coupling)) {
                                  throw DomainError("interaction strength J must be finite");
                              }
                              validate(t.phases);
                          },
                          [&spec](const ensemble::Fixed &f) {
                              const auto d = static_cast<Eigen::Index>(spec.q) * spec.q;
                              if (f.gate.rows() != d || f.gate.cols() != d) {
                                  throw DimensionError("fixed impurity must be q^2 x q^2");
                              }
                              if (!(unitarity_defect(f.gate) < 1e-10)) {
                                  throw ContractViolation("fixed impurity is not unitary");
                              }
                          }},
               spec.kind);
}

std::string kind_name(const EnsembleKind &kind) {
    return std::visit(overloaded{[](const ensemble::Haar &) { return std::string("haar"); },
                                 [](const ensemble::TDual &) { return std::string("tdual"); },
                                 [](const ensemble::Factorized &) {
                                     return std::string("factorized");
                                 },
                                 [](const ensemble::Fixed &) { return std::string("fixed"); }},
                      kind);
}

Matrix sample_haar_unitary(int dim, const RealizationSeed &seed, std::uint64_t slot) {
    if (dim < 1) {
        throw DomainError("sample_haar_unitary: dim must be >= 1");
    }
    auto rng = make_stream(seed, slot);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix &r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        // Q diag(r_jj/|r_jj|) is the Q factor with positive-diagonal R.
        q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    }
    return q;
}

Vector sample_interaction_phases(int q, double coupling, const PhaseDistribution &dist,
                                 const RealizationSeed &seed) {
    validate(dist);
    auto rng = make_stream(seed, kSlotPhases);
    Vector diag(static_cast<Eigen::Index>(q) * q);
    std::visit(overloaded{[&](const UniformPhases &u) {
                   std::uniform_real_distribution<double> xi(u.a, u.b);
                   for (Eigen::Index k = 0; k < diag.size(); ++k) {
                       diag(k) = std::polar(1.0, coupling * xi(rng));
                   }
               }},
               dist);
    return diag;
}

Matrix sample_tdual_gate(int q, double coupling, const PhaseDistribution &dist,
                         const RealizationSeed &seed) {
    if (q < 1) {
        throw DomainError("sample_tdual_gate: q must be >= 1");
    }
    const Matrix u0 = sample_haar_unitary(q, seed, kSlotFirst);
    const Matrix u1 = sample_haar_unitary(q, seed, kSlotSecond);
    Matrix gate = kron(u0, u1);
    if (coupling != 0.0) {
        const Vector v = sample_interaction_phases(q, coupling, dist, seed);
        gate = v.asDiagonal() * gate;
    } else {
        validate(dist);
    }
    return gate;
}

std::pair<Matrix, Matrix> sample_factorized_pair(int q, const RealizationSeed &seed) {
    return {sample_haar_unitary(q, seed, kSlotFirst), sample_haar_unitary(q, seed, kSlotSecond)};
}

Matrix sample_impurity(const EnsembleSpec &spec, const RealizationSeed &seed) {
    const int q = spec.q;
    return std::visit(
        overloaded{[&](const ensemble::Haar &) { return sample_haar_unitary(q * q, seed, kSlotFirst); },
                   [&](const ensemble::TDual &t) {
                       return sample_tdual_gate(q, t.coupling, t.phases, seed);
                   },
                   [&](const ensemble::Factorized &) {
                       auto [u, v] = sample_factorized_pair(q, seed);
                       return kron(u, v);
                   },
                   [&](const ensemble::Fixed &f) { return f.gate; }},
        spec.kind);
}

} // namespace bchaos
