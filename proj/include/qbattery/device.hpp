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

/// Level spectrum of the battery and the transmon model that produces it.

#include <array>
#include <cmath>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

/// Reduced Planck constant, μeV·ns (CODATA 2018: 6.582119569e-16 eV·s).
inline constexpr double kHbarMicroEvNs = 6.582119569e-1;

/// Minimum E_J/E_C accepted as the transmon regime.
inline constexpr double kTransmonRatioGuard = 20.0;

struct TransmonParams {
    double charging_energy = 0.0;  ///< E_C, rad/ns
    double josephson_energy = 0.0; ///< E_J, rad/ns

    /// ω_P = √(8 E_C E_J).
    [[nodiscard]] double plasma_frequency() const
    {
        return std::sqrt(8.0 * charging_energy * josephson_energy);
    }
};

/// Ordered level energies with ω₀ = 0 as the reference.
class LevelSpectrum {
  public:
    static LevelSpectrum two_level(double omega1)
    {
        if (!(omega1 > 0.0) || !std::isfinite(omega1)) {
            throw OrderingError("level spacing must be positive");
        }
        return LevelSpectrum(2, omega1, 0.0, 0.0);
    }

    /// Three levels; δ defaults to (Δ−Δ′)/2 when not supplied.
    static LevelSpectrum three_level(double omega1, double omega2)
    {
        check_order(omega1, omega2);
        const double d = omega1;
        const double dp = omega2 - omega1;
        return LevelSpectrum(3, omega1, omega2, 0.5 * (d - dp));
    }

    static LevelSpectrum three_level(double omega1, double omega2, double half_anharmonicity)
    {
        check_order(omega1, omega2);
        return LevelSpectrum(3, omega1, omega2, half_anharmonicity);
    }

    [[nodiscard]] int levels() const noexcept { return levels_; }
    [[nodiscard]] double omega(int n) const
    {
        if (n < 0 || n >= levels_) {
            throw ParameterError("level index " + std::to_string(n) + " out of range");
        }
        return omega_[static_cast<std::size_t>(n)];
    }

    /// Δ = ω₁ − ω₀.
    [[nodiscard]] double delta() const noexcept { return omega_[1]; }
    /// Δ′ = ω₂ − ω₁.
    [[nodiscard]] double delta_prime() const
    {
        require_three("delta_prime");
        return omega_[2] - omega_[1];
    }
    /// Δ_max = Δ + Δ′ = ω₂ − ω₀.
    [[nodiscard]] double delta_max() const
    {
        require_three("delta_max");
        return omega_[2];
    }
    /// δ = (Δ − Δ′)/2.
    [[nodiscard]] double half_anharmonicity() const
    {
        require_three("half_anharmonicity");
        return half_anharmonicity_;
    }
    /// Energy of the highest level: Δ for a qubit, Δ_max for a qutrit.
    [[nodiscard]] double full_scale() const noexcept { return omega_[static_cast<std::size_t>(levels_ - 1)]; }

  private:
    LevelSpectrum(int levels, double omega1, double omega2, double half_anharmonicity)
        : levels_(levels), omega_{0.0, omega1, omega2}, half_anharmonicity_(half_anharmonicity)
    {
    }

    static void check_order(double omega1, double omega2)
    {
        if (!(omega1 > 0.0) || !std::isfinite(omega1) || !std::isfinite(omega2)) {
            throw OrderingError("omega1 must be positive and finite");
        }
        if (!(omega2 > omega1)) {
            throw OrderingError("levels must be strictly ordered: omega2 <= omega1");
        }
    }

    void require_three(const char *what) const
    {
        if (levels_ < 3) {
            throw ParameterError(std::string(what) + " needs a three-level spectrum");
        }
    }

    int levels_;
    std::array<double, 3> omega_;
    double half_anharmonicity_;
};

/// First-order Duffing levels ω_n = (ω_P − E_C)n − E_C n(n−1)/2.
inline LevelSpectrum transmon_spectrum(const TransmonParams &params, int n_levels = 3)
{
    const double ec = params.charging_energy;
    const double ej = params.josephson_energy;
    if (!(ec > 0.0) || !(ej > 0.0) || !std::isfinite(ec) || !std::isfinite(ej)) {
        throw ParameterError("E_C and E_J must be positive");
    }
    if (ej / ec < kTransmonRatioGuard) {
        throw TransmonRegimeError("E_J/E_C = " + std::to_string(ej / ec) +
                                  " is below the transmon guard of 20");
    }
    if (n_levels != 2 && n_levels != 3) {
        throw ParameterError("n_levels must be 2 or 3");
    }
    const double wp = params.plasma_frequency();
    auto level = [&](int n) {
        const double nn = static_cast<double>(n);
        return (wp - ec) * nn - 0.5 * ec * nn * (nn - 1.0);
    };
    if (n_levels == 2) {
        return LevelSpectrum::two_level(level(1));
    }
    return LevelSpectrum::three_level(level(1), level(2), 0.5 * ec);
}

/// Measured transition frequencies entered directly; no transmon guard.
inline LevelSpectrum spectrum_from_frequencies(double omega1, double omega2)
{
    return LevelSpectrum::three_level(omega1, omega2);
}

/// ħω in μeV for ω in rad/ns.
[[nodiscard]] inline double energy_to_micro_ev(double value) { return value * kHbarMicroEvNs; }

[[nodiscard]] inline double micro_ev_to_energy(double micro_ev) { return micro_ev / kHbarMicroEvNs; }

} // namespace qbattery
