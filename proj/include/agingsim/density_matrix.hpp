// Copyright 2026 The agingsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <agingsim/params.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>

namespace agingsim {

/// Oscillator Hilbert space: Fock levels 0..4.
inline constexpr int kFockDim = 5;

/// Hermitian density matrix stored as its lower triangle (row-major packed)
/// with a real diagonal. The upper triangle is never stored, so every read
/// through operator() is Hermitian bit-exactly.
///
/// The same type carries time derivatives and RK4 stage increments; those
/// are Hermitian too but not unit-trace.
template <int Dim>
class DensityMatrix {
    static_assert(Dim >= 2);

public:
    static constexpr int dim = Dim;
    static constexpr std::size_t packed_size = static_cast<std::size_t>(Dim) * (Dim + 1) / 2;
    // Fixed-size Eigen storage only for small truncations.
    static constexpr int eigen_dim = Dim <= 16 ? Dim : Eigen::Dynamic;
    using Matrix = Eigen::Matrix<complex, eigen_dim, eigen_dim>;
    using RealVector = Eigen::Matrix<double, eigen_dim, 1>;

    DensityMatrix() { data_.fill(complex{}); }

    static DensityMatrix fock(int level) {
        DensityMatrix rho;
        rho.set(level, level, 1.0);
        return rho;
    }

    static constexpr std::size_t index(int row, int col) {
        return static_cast<std::size_t>(row) * (row + 1) / 2 + col;
    }

    complex operator()(int row, int col) const {
        return row >= col ? data_[index(row, col)] : std::conj(data_[index(col, row)]);
    }

    /// Writes element (row, col) and, implicitly, its mirror. Diagonal
    /// entries keep only their real part.
    void set(int row, int col, complex value) {
        if (row == col) {
            data_[index(row, row)] = complex(value.real(), 0.0);
        } else if (row > col) {
            data_[index(row, col)] = value;
        } else {
            data_[index(col, row)] = std::conj(value);
        }
    }

    double population(int level) const { return data_[index(level, level)].real(); }

    double trace() const {
        double sum = 0.0;
        for (int n = 0; n < Dim; ++n) sum += population(n);
        return sum;
    }

    /// Largest absolute entry; used for residual norms.
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    bool is_diagonal(double tol = 0.0) const {
        for (int r = 1; r < Dim; ++r)
            for (int c = 0; c < r; ++c)
                if (std::abs(data_[index(r, c)]) > tol) return false;
        return true;
    }

    Matrix full() const {
        Matrix m(Dim, Dim);
        for (int r = 0; r < Dim; ++r)
            for (int c = 0; c < Dim; ++c) m(r, c) = (*this)(r, c);
        return m;
    }

    RealVector eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(full(), Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

    double min_eigenvalue() const { return eigenvalues().minCoeff(); }
    double max_eigenvalue() const { return eigenvalues().maxCoeff(); }

    const std::array<complex, packed_size>& packed() const { return data_; }
    /// Raw lower triangle. Callers keep diagonal entries real.
    std::array<complex, packed_size>& packed() { return data_; }

    DensityMatrix& operator+=(const DensityMatrix& other) {
        for (std::size_t i = 0; i < packed_size; ++i) data_[i] += other.data_[i];
        return *this;
    }
    DensityMatrix& operator-=(const DensityMatrix& other) {
        for (std::size_t i = 0; i < packed_size; ++i) data_[i] -= other.data_[i];
        return *this;
    }
    DensityMatrix& operator*=(double s) {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend DensityMatrix operator+(DensityMatrix lhs, const DensityMatrix& rhs) { return lhs += rhs; }
    friend DensityMatrix operator-(DensityMatrix lhs, const DensityMatrix& rhs) { return lhs -= rhs; }
    friend DensityMatrix operator*(double s, DensityMatrix m) { return m *= s; }

    friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

private:
    // Row-major lower triangle: (0,0), (1,0), (1,1), (2,0), ...
    std::array<complex, packed_size> data_;
};

using AtomMatrix = DensityMatrix<2>;
using OscillatorMatrix = DensityMatrix<kFockDim>;

namespace atom {
inline constexpr int kGround = 0;
inline constexpr int kExcited = 1;

inline AtomMatrix ground() { return AtomMatrix::fock(kGround); }
inline AtomMatrix excited() { return AtomMatrix::fock(kExcited); }

/// <sigma_-> = rho_eg.
inline complex sigma_minus(const AtomMatrix& rho) { return rho(kExcited, kGround); }
inline double excited_population(const AtomMatrix& rho) { return rho.population(kExcited); }
}  // namespace atom

/// Truncated coherent state |alpha> on Fock levels 0..Dim-1, renormalized to
/// unit trace. Amplitudes are proportional to alpha^n / sqrt(n!).
template <int Dim = kFockDim>
DensityMatrix<Dim> coherent_amplitude_to_fock(complex alpha) {
    std::array<complex, Dim> amp{};
    amp[0] = 1.0;
    for (int n = 1; n < Dim; ++n) amp[n] = amp[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    double norm = 0.0;
    for (const auto& c : amp) norm += std::norm(c);
    DensityMatrix<Dim> rho;
    for (int r = 0; r < Dim; ++r)
        for (int c = 0; c <= r; ++c) rho.set(r, c, amp[r] * std::conj(amp[c]) / norm);
    return rho;
}

/// Tr(a rho) = sum_n sqrt(n+1) rho_{n+1,n}.
template <int Dim>
complex expect_lowering(const DensityMatrix<Dim>& rho) {
    complex sum{};
    for (int n = 0; n + 1 < Dim; ++n) sum += std::sqrt(static_cast<double>(n + 1)) * rho(n + 1, n);
    return sum;
}

/// Tr(a^dagger a rho).
template <int Dim>
double expect_number(const DensityMatrix<Dim>& rho) {
    double sum = 0.0;
    for (int n = 1; n < Dim; ++n) sum += n * rho.population(n);
    return sum;
}

}  // namespace agingsim
