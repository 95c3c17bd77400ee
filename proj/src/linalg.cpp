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
#include "bchaos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#ifdef BCHAOS_HAVE_LAPACKE
#include <mutex>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

// Present only when the BLAS behind LAPACK is OpenBLAS.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));
#endif

#include "bchaos/errors.hpp"

namespace bchaos {

double principal_phase(double theta) {
    constexpr double pi = std::numbers::pi;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (theta >= -pi && theta < pi) {
        return theta;
    }
    double r = std::fmod(theta + pi, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    r -= pi;
    // fmod can land exactly on the excluded end after rounding.
    if (r >= pi) {
        r = -pi;
    }
    return r;
}

EigenphaseSpectrum EigenphaseSpectrum::from_phases(std::vector<double> phases) {
    for (auto &p : phases) {
        p = principal_phase(p);
    }
    std::stable_sort(phases.begin(), phases.end());
    return EigenphaseSpectrum(std::move(phases));
}

void require_square(const Matrix &m, const char *what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": matrix is " +
                             std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected square");
    }
}

double unitarity_defect(const Matrix &m) {
    require_square(m, "unitarity_defect");
    if (m.size() == 0) {
        return 0.0;
    }
    Matrix d = m.adjoint() * m;
    d.diagonal().array() -= Complex(1.0, 0.0);
    return d.cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

Matrix partial_transpose(const Matrix &gate, int q) {
    require_square(gate, "partial_transpose");
    if (q < 1 || gate.rows() != static_cast<Eigen::Index>(q) * q) {
        throw DimensionError("partial_transpose: gate dimension " +
                             std::to_string(gate.rows()) + " is not q^2 for q=" +
                             std::to_string(q));
    }
    Matrix out(gate.rows(), gate.cols());
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            for (int k = 0; k < q; ++k) {
                for (int l = 0; l < q; ++l) {
                    out(i * q + l, k * q + j) = gate(i * q + j, k * q + l);
                }
            }
        }
    }
    return out;
}

namespace {

#ifdef BCHAOS_HAVE_LAPACKE
// Callers parallelize over realizations; a threaded BLAS underneath would
// oversubscribe and make results depend on its scheduling.
void single_threaded_blas() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (openblas_set_num_threads != nullptr) {
            openblas_set_num_threads(1);
        }
    });
}

Vector eigenvalues(const Matrix &u) {
    single_threaded_blas();
    Matrix a = u;
    const auto n = static_cast<lapack_int>(a.rows());
    Vector w(a.rows());
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                                          nullptr, 1, nullptr, 1);
    if (info != 0) {
        throw ContractViolation("eigenphases: zgeev failed with info " + std::to_string(info));
    }
    return w;
}
#else
Vector eigenvalues(const Matrix &u) {
    Eigen::ComplexEigenSolver<Matrix> solver(u, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw ContractViolation("eigenphases: eigenvalue iteration did not converge");
    }
    return solver.eigenvalues();
}
#endif

} // namespace

EigenphaseSpectrum eigenphases(const Matrix &u, std::size_t dense_cap) {
    require_square(u, "eigenphases");
    const auto dim = static_cast<std::size_t>(u.rows());
    if (dim > dense_cap) {
        throw CapacityError("eigenphases: dimension " + std::to_string(dim) +
                                " exceeds dense cap " + std::to_string(dense_cap),
                            static_cast<long long>(dim),
                            static_cast<long long>(dense_cap));
    }
    if (dim == 0) {
        throw DimensionError("eigenphases: empty matrix");
    }
    const double defect = unitarity_defect(u);
    if (!(defect <= kUnitarityTolerance)) {
        throw ContractViolation("eigenphases: unitarity defect " +
                                std::to_string(defect) + " above tolerance");
    }

    const Vector values = eigenvalues(u);
    std::vector<double> phases(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const Complex z = values(static_cast<Eigen::Index>(i));
        if (std::abs(std::abs(z) - 1.0) > kUnitarityTolerance) {
            throw ContractViolation("eigenphases: eigenvalue modulus " +
                                    std::to_string(std::abs(z)) + " off the unit circle");
        }
        phases[i] = std::arg(z);
    }
    return EigenphaseSpectrum::from_phases(std::move(phases));
}

Complex trace_power(const EigenphaseSpectrum &spectrum, long t) {
    if (t < 1) {
        throw DomainError("trace_power: t must be >= 1, got " + std::to_string(t));
    }
    Complex sum{0.0, 0.0};
    const double tt = static_cast<double>(t);
    for (double theta : spectrum.phases()) {
        sum += std::polar(1.0, theta * tt);
    }
    return sum;
}

std::vector<Complex> trace_powers(const EigenphaseSpectrum &spectrum, long t_max) {
    if (t_max < 1) {
        throw DomainError("trace_powers: t_max must be >= 1");
    }
    std::vector<Complex> out(static_cast<std::size_t>(t_max), Complex{});
    for (double theta : spectrum.phases()) {
        for (long t = 1; t <= t_max; ++t) {
            out[static_cast<std::size_t>(t - 1)] +=
                std::polar(1.0, theta * static_cast<double>(t));
        }
    }
    return out;
}

} // namespace bchaos
