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
 * Impurity-gate ensembles and their reproducible random streams.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>

#include "bchaos/linalg.hpp"

namespace bchaos {

/// Uniform distribution of the interaction phases on [a, b]. Must have zero
/// mean, i.e. a == -b.
struct UniformPhases {
    double a = -1.0;
    double b = 1.0;
};

/// Tagged so further distributions can be added without changing callers.
using PhaseDistribution = std::variant<UniformPhases>;

/// Throws DomainError unless the distribution is valid and has zero mean.
void validate(const PhaseDistribution &dist);

/// Parses "uniform:a:b".
[[nodiscard]] PhaseDistribution parse_phase_distribution(const std::string &text);
[[nodiscard]] std::string to_string(const PhaseDistribution &dist);

/// Characteristic function <exp(i J xi)> of the phase distribution.
[[nodiscard]] Complex chi(const PhaseDistribution &dist, double coupling);

namespace ensemble {
struct Haar {};
struct TDual {
    double coupling = 3.1;
    PhaseDistribution phases = UniformPhases{};
};
struct Factorized {};
struct Fixed {
    Matrix gate;
};
} // namespace ensemble

using EnsembleKind =
    std::variant<ensemble::Haar, ensemble::TDual, ensemble::Factorized, ensemble::Fixed>;

struct EnsembleSpec {
    int q = 2;
    EnsembleKind kind = ensemble::Haar{};
};

/// Checks q, phase distribution and the fixed gate (dimension q^2,
/// unitarity defect below 1e-10).
void validate(const EnsembleSpec &spec);

[[nodiscard]] std::string kind_name(const EnsembleKind &kind);

/// Identifies the random stream of one ensemble member.
struct RealizationSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t realization_index = 0;
};

/**
 * @brief Engine for an independent sub-stream of a realization.
 *
 * The state is a counter-based mix of (master_seed, realization_index, slot),
 * so streams never depend on call order or worker count.
 */
[[nodiscard]] std::mt19937_64 make_stream(const RealizationSeed &seed, std::uint64_t slot);

// Slot assignments inside one realization.
inline constexpr std::uint64_t kSlotFirst = 0;
inline constexpr std::uint64_t kSlotSecond = 1;
inline constexpr std::uint64_t kSlotPhases = 2;

/// Haar-distributed dim x dim unitary (Gaussian matrix, QR, diagonal rephasing).
[[nodiscard]] Matrix sample_haar_unitary(int dim, const RealizationSeed &seed,
                                         std::uint64_t slot);

/// U = V(J) (u0 (x) u1) with V diagonal, V_(ij),(ij) = exp(i J xi_ij).
[[nodiscard]] Matrix sample_tdual_gate(int q, double coupling,
                                       const PhaseDistribution &dist,
                                       const RealizationSeed &seed);

/// The diagonal of V(J) drawn from the same stream sample_tdual_gate uses.
[[nodiscard]] Vector sample_interaction_phases(int q, double coupling,
                                               const PhaseDistribution &dist,
                                               const RealizationSeed &seed);

/// Two independent q x q Haar unitaries; the toy impurity is u (x) v.
[[nodiscard]] std::pair<Matrix, Matrix> sample_factorized_pair(int q,
                                                              const RealizationSeed &seed);

/// Draws the q^2 x q^2 impurity for one realization of the ensemble.
[[nodiscard]] Matrix sample_impurity(const EnsembleSpec &spec, const RealizationSeed &seed);

} // namespace bchaos
