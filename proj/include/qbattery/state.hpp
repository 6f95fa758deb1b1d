// Copyright 2026 The qbattery Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// Amplitude vectors and Hamiltonian matrices for up to three levels.
///
/// Amplitudes are indexed by level: entry n is the coefficient of |n⟩. Two-level
/// objects live in the same 3-dimensional storage with the |2⟩ row and column
/// identically zero.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "qbattery/errors.hpp"

namespace qbattery {

using Complex = std::complex<double>;
using Amplitudes = Eigen::Vector3cd;
using Matrix3 = Eigen::Matrix3cd;

enum class Frame { lab, rotating };

inline const char *to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

class StateVector {
  public:
    StateVector() : StateVector(Amplitudes(1.0, 0.0, 0.0)) {}

    explicit StateVector(const Amplitudes &amplitudes, int dim = 3, Frame frame = Frame::rotating)
        : amplitudes_(amplitudes), dim_(dim), frame_(frame)
    {
        if (dim != 2 && dim != 3) {
            throw ParameterError("state dimension must be 2 or 3");
        }
        if (dim == 2 && amplitudes_[2] != Complex{}) {
            throw ParameterError("a two-level state cannot populate |2>");
        }
    }

    static StateVector basis(int level, int dim = 3)
    {
        if (level < 0 || level >= dim) {
            throw ParameterError("basis level out of range");
        }
        Amplitudes a = Amplitudes::Zero();
        a[level] = 1.0;
        return StateVector(a, dim);
    }

    static StateVector ground(int dim = 3) { return basis(0, dim); }

    /// √a|0⟩ + √(1−a) e^{iφ}|1⟩.
    static StateVector qubit(double a, double phi, int dim = 2)
    {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ParameterError("initial-state weight a must lie in [0, 1]");
        }
        Amplitudes amp(std::sqrt(a), std::sqrt(1.0 - a) * std::polar(1.0, phi), 0.0);
        return StateVector(amp, dim);
    }

    [[nodiscard]] const Amplitudes &amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] Frame frame() const noexcept { return frame_; }

    [[nodiscard]] Complex operator[](int level) const { return amplitudes_[level]; }
    [[nodiscard]] Complex c0() const { return amplitudes_[0]; }
    [[nodiscard]] Complex c1() const { return amplitudes_[1]; }
    [[nodiscard]] Complex c2() const { return amplitudes_[2]; }

    /// (c₂, c₁, c₀): top level first.
    [[nodiscard]] std::array<Complex, 3> spinor() const
    {
        return {amplitudes_[2], amplitudes_[1], amplitudes_[0]};
    }

    /// (|c₀|², |c₁|², |c₂|²).
    [[nodiscard]] std::array<double, 3> populations() const
    {
        return {std::norm(amplitudes_[0]), std::norm(amplitudes_[1]), std::norm(amplitudes_[2])};
    }

    [[nodiscard]] double norm() const { return amplitudes_.norm(); }

    [[nodiscard]] StateVector with_frame(Frame f) const { return StateVector(amplitudes_, dim_, f); }

  private:
    Amplitudes amplitudes_;
    int dim_;
    Frame frame_;
};

/// Hermitian generator; `dim` == 2 means only the upper-left block is in use.
struct HermitianMatrix {
    Matrix3 matrix = Matrix3::Zero();
    int dim = 3;

    [[nodiscard]] Complex operator()(int row, int col) const { return matrix(row, col); }

    /// Largest |H_ij − conj(H_ji)|.
    [[nodiscard]] double hermiticity_error() const
    {
        return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    }
};

} // namespace qbattery
