// Copyright 2026 The loopbs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "loopbs/error.hpp"

namespace loopbs {

using Complex = std::complex<double>;

/// Tolerance on max|U^dagger U - I| for freshly constructed unitaries.
inline constexpr double kUnitaryTol = 1e-10;
/// Tolerance after products of unitaries.
inline constexpr double kProductTol = 1e-9;
/// Tolerance accepted on user-supplied targets (compiler, sampler inputs).
inline constexpr double kInputUnitaryTol = 1e-8;

/// Dense complex matrix, row-major, zero-based (row, col) indexing.
///
/// All entries must be finite; this is checked by `validate()` and by every
/// constructor taking external data.
class ComplexMatrix {
   public:
    ComplexMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
        if (rows == 0 || cols == 0) {
            throw ValidationError("matrix dimensions must be at least 1x1");
        }
    }

    ComplexMatrix(size_t rows, size_t cols, std::vector<Complex> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0) {
            throw ValidationError("matrix dimensions must be at least 1x1");
        }
        if (data_.size() != rows * cols) {
            throw ValidationError("matrix entry count does not match rows x cols");
        }
        validate();
    }

    static ComplexMatrix identity(size_t n) {
        ComplexMatrix m(n, n);
        for (size_t k = 0; k < n; k++) {
            m(k, k) = 1.0;
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Complex> &data() const { return data_; }

    void validate() const {
        for (const auto &z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw ValidationError("matrix contains a non-finite entry");
            }
        }
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (size_t r = 0; r < rows_; r++) {
            for (size_t c = 0; c < cols_; c++) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    bool operator==(const ComplexMatrix &other) const = default;

   private:
    size_t rows_;
    size_t cols_;
    std::vector<Complex> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                              std::to_string(b.rows()) + ")");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (size_t r = 0; r < a.rows(); r++) {
        for (size_t k = 0; k < a.cols(); k++) {
            Complex ark = a(r, k);
            if (ark == Complex(0.0)) {
                continue;
            }
            for (size_t c = 0; c < b.cols(); c++) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

/// max_{r,c} |a(r,c) - b(r,c)|. Shapes must agree.
inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("max_abs_diff: shape mismatch");
    }
    double worst = 0;
    for (size_t k = 0; k < a.data().size(); k++) {
        worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    }
    return worst;
}

/// max-norm of (M^dagger M - I).
inline double unitarity_residual(const ComplexMatrix &m) {
    if (!m.square()) {
        throw ValidationError("unitarity check needs a square matrix");
    }
    size_t n = m.rows();
    double worst = 0;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            Complex acc = 0;
            for (size_t k = 0; k < n; k++) {
                acc += std::conj(m(k, i)) * m(k, j);
            }
            if (i == j) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

inline bool is_unitary(const ComplexMatrix &m, double tol) {
    return unitarity_residual(m) <= tol;
}

/// Square matrix carrying a checked unitarity invariant. Read-only after construction.
class UnitaryMatrix {
   public:
    explicit UnitaryMatrix(ComplexMatrix m, double tol = kUnitaryTol) : m_(std::move(m)) {
        double residual = unitarity_residual(m_);
        if (!(residual <= tol)) {
            throw NumericalError("matrix is not unitary: max|U^dagger U - I| = " + std::to_string(residual));
        }
    }

    static UnitaryMatrix identity(size_t n) { return UnitaryMatrix(ComplexMatrix::identity(n)); }

    size_t n() const { return m_.rows(); }
    const Complex &operator()(size_t r, size_t c) const { return m_(r, c); }
    const ComplexMatrix &matrix() const { return m_; }
    operator const ComplexMatrix &() const { return m_; }

    bool operator==(const UnitaryMatrix &other) const = default;

   private:
    ComplexMatrix m_;
};

/// Entry (j, k) = exp(2 pi i j k / n) / sqrt(n), zero-based.
inline UnitaryMatrix dft_matrix(size_t n) {
    if (n == 0) {
        throw ValidationError("dft_matrix: n must be at least 1");
    }
    ComplexMatrix m(n, n);
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (size_t j = 0; j < n; j++) {
        for (size_t k = 0; k < n; k++) {
            // Reduce j*k mod n first so the angle stays in [0, 2 pi).
            double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            m(j, k) = std::polar(scale, angle);
        }
    }
    return UnitaryMatrix(std::move(m));
}

/// Sylvester construction, scaled by 1/sqrt(n). n must be a power of two.
inline UnitaryMatrix hadamard_matrix(size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ValidationError("hadamard_matrix: n must be a power of 2, got " + std::to_string(n));
    }
    ComplexMatrix m(n, n);
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            // H[r][c] = (-1)^{popcount(r & c)}
            bool odd = std::popcount(r & c) & 1;
            m(r, c) = odd ? -scale : scale;
        }
    }
    return UnitaryMatrix(std::move(m));
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q. Deterministic for a given (n, seed).
inline UnitaryMatrix haar_random_unitary(size_t n, uint64_t seed) {
    if (n == 0) {
        throw ValidationError("haar_random_unitary: n must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd z(n, n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            double re = normal(rng);
            double im = normal(rng);
            z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd &r = qr.matrixQR();
    ComplexMatrix out(n, n);
    for (size_t c = 0; c < n; c++) {
        Complex d = r(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
        Complex phase = std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
        for (size_t row = 0; row < n; row++) {
            out(row, c) = q(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) * phase;
        }
    }
    return UnitaryMatrix(std::move(out));
}

/// Largest singular value (spectral norm).
inline double max_singular_value(const ComplexMatrix &m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
    return svd.singularValues()(0);
}

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double x) {
    double w = std::remainder(x, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi) {
        w += 2.0 * std::numbers::pi;
    }
    return w;
}

}  // namespace loopbs
