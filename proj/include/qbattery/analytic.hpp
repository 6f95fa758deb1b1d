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

/// Closed-form states and stored energies of the charging protocols.
///
/// These are the reference solutions the integrator is checked against. All
/// energies are measured from the ground level (ω₀ = 0).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "qbattery/device.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/hamiltonian.hpp"
#include "qbattery/state.hpp"

namespace qbattery {

// ---------------------------------------------------------------------------
// Two-level battery

/// State reached from √a|0⟩ + √(1−a)e^{iφ}|1⟩ after a resonant pulse of area θ.
inline StateVector qubit_state(double a, double phi, double theta, int dim = 2)
{
    const auto initial = StateVector::qubit(a, phi, dim);
    const double c = std::cos(0.5 * theta);
    const Complex mis(0.0, -std::sin(0.5 * theta));
    Amplitudes out = initial.amplitudes();
    out[0] = c * initial.c0() + mis * initial.c1();
    out[1] = c * initial.c1() + mis * initial.c0();
    return StateVector(out, dim);
}

/// E = Δ[a sin²(θ/2) − 2√(a(1−a)) sinφ sin(θ/2)cos(θ/2) + (1−a)cos²(θ/2)].
///
/// The cross term carries the sign produced by H = (g/2)f(t)σₓ acting on
/// √a|0⟩ + √(1−a)e^{iφ}|1⟩.
inline double qubit_energy(double a, double phi, double theta, const LevelSpectrum &spectrum)
{
    if (!(a >= 0.0 && a <= 1.0)) {
        throw ParameterError("initial-state weight a must lie in [0, 1]");
    }
    const double s = std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    return spectrum.delta() *
           (a * s * s - 2.0 * std::sqrt(a * (1.0 - a)) * std::sin(phi) * s * c + (1.0 - a) * c * c);
}

/// θ(t) of the single drive of a qubit protocol.
inline double qubit_phase(double t, const ProtocolSpec &spec)
{
    if (spec.kind != ProtocolKind::qubit_resonant) {
        throw ProtocolError("qubit_phase needs a qubit protocol");
    }
    const auto &d = spec.drives.front();
    return accumulated_phase(d.envelope, d.coupling, t);
}

inline StateVector qubit_state(double t, const ProtocolSpec &spec)
{
    return qubit_state(spec.a, spec.phi, qubit_phase(t, spec), spec.spectrum.levels());
}

inline double qubit_energy(double t, const ProtocolSpec &spec)
{
    return qubit_energy(spec.a, spec.phi, qubit_phase(t, spec), spec.spectrum);
}

// ---------------------------------------------------------------------------
// Sequential protocol

/// Stored energy at the end of the sequential protocol as a function of the
/// combined phase φ_m: Δ sin²(φ_m/2) on [0,π], Δ + Δ′ sin²((φ_m−π)/2) on [π,2π].
inline double sequential_energy_vs_phase(double phi_m, const LevelSpectrum &spectrum)
{
    constexpr double pi = std::numbers::pi;
    if (!(phi_m >= 0.0 && phi_m <= 2.0 * pi)) {
        throw ParameterError("phi_m must lie in [0, 2pi]");
    }
    if (phi_m <= pi) {
        const double s = std::sin(0.5 * phi_m);
        return spectrum.delta() * s * s;
    }
    const double s = std::sin(0.5 * (phi_m - pi));
    return spectrum.delta() + spectrum.delta_prime() * s * s;
}

/// (θ₁(t), θ₂(t)) for a sequential protocol.
inline std::pair<double, double> sequential_phases(double t, const ProtocolSpec &spec)
{
    if (spec.kind != ProtocolKind::sequential) {
        throw ProtocolError("closed-form sequential solution needs disjoint pulses; "
                            "integrate overlapping schedules numerically");
    }
    validate(spec);
    const auto &d1 = spec.drives[0];
    const auto &d2 = spec.drives[1];
    return {accumulated_phase(d1.envelope, d1.coupling, t), accumulated_phase(d2.envelope, d2.coupling, t)};
}

/// |0⟩ rotated by θ₁ on (0,1), then by θ₂ on (1,2). Exact for disjoint pulses.
inline StateVector sequential_state(double theta1, double theta2)
{
    const double s1 = std::sin(0.5 * theta1);
    const double c2 = std::cos(0.5 * theta2);
    const double s2 = std::sin(0.5 * theta2);
    return StateVector(Amplitudes(std::cos(0.5 * theta1), Complex(0.0, -s1 * c2), -s1 * s2));
}

inline StateVector sequential_state(double t, const ProtocolSpec &spec)
{
    const auto [t1, t2] = sequential_phases(t, spec);
    return sequential_state(t1, t2);
}

/// Two-step energy: Δ sin²(θ₁/2) until the second pulse starts, then
/// Δ + Δ′ sin²(θ₂/2), taking the first step as a perfect handoff to |1⟩.
inline double sequential_energy_vs_time(double t, const ProtocolSpec &spec)
{
    const auto [t1, t2] = sequential_phases(t, spec);
    const auto &s = spec.spectrum;
    if (t < envelope_support(spec.drives[1].envelope).start) {
        const double x = std::sin(0.5 * t1);
        return s.delta() * x * x;
    }
    const double x = std::sin(0.5 * t2);
    return s.delta() + s.delta_prime() * x * x;
}

// ---------------------------------------------------------------------------
// Simultaneous protocol

/// Θ(t) = (g/√2)∫₀ᵗ f, shared by the simultaneous and average-frequency drives.
inline double simultaneous_phase(double t, const ProtocolSpec &spec)
{
    if (spec.kind != ProtocolKind::simultaneous && spec.kind != ProtocolKind::adiabatic_average) {
        throw ProtocolError("simultaneous_phase needs a simultaneous or adiabatic protocol");
    }
    const auto &d = spec.drives.front();
    return accumulated_phase(d.envelope, d.coupling, t) / std::numbers::sqrt2;
}

/// (½(cosΘ−1), −(i/√2) sinΘ, ½(cosΘ+1)) for (c₂, c₁, c₀).
inline StateVector simultaneous_state(double big_theta)
{
    const double c = std::cos(big_theta);
    return StateVector(Amplitudes(0.5 * (c + 1.0), Complex(0.0, -std::sin(big_theta) / std::numbers::sqrt2),
                                  0.5 * (c - 1.0)));
}

/// E = (Δ/2) sin²Θ + (Δ_max/4)(1 − cosΘ)².
inline double simultaneous_energy(double big_theta, const LevelSpectrum &spectrum)
{
    const double s = std::sin(big_theta);
    const double one_minus_c = 1.0 - std::cos(big_theta);
    return 0.5 * spectrum.delta() * s * s + 0.25 * spectrum.delta_max() * one_minus_c * one_minus_c;
}

/// Dressed basis of the simultaneous drive.
struct EigenFrame {
    /// Rows are |−⟩, |+⟩, |B⟩ written on level-ordered amplitudes (c₀, c₁, c₂).
    Matrix3 unitary;
    /// Eigenvalues of the coupling pattern T for |−⟩, |+⟩, |B⟩.
    std::array<double, 3> eigenvalues;
};

inline EigenFrame simultaneous_eigenframe()
{
    const double r = 1.0 / std::numbers::sqrt2;
    EigenFrame f;
    f.unitary << 0.5, -r, 0.5,
                 0.5, r, 0.5,
                 r, 0.0, -r;
    f.eigenvalues = {-std::numbers::sqrt2, std::numbers::sqrt2, 0.0};
    return f;
}

// ---------------------------------------------------------------------------
// Average-frequency (adiabatic) drive

/// Instantaneous eigenbasis of the δ-phased Hamiltonian, level-ordered.
struct AdiabaticBasis {
    Amplitudes dark;  ///< |Ψ_B⟩, eigenvalue 0
    Amplitudes plus;  ///< |Ψ_+⟩, eigenvalue +(g/√2) f(t)
    Amplitudes minus; ///< |Ψ_−⟩, eigenvalue −(g/√2) f(t)
};

inline AdiabaticBasis adiabatic_basis(double delta, double t)
{
    const double r = 1.0 / std::numbers::sqrt2;
    const Complex mid = std::polar(r, delta * t);
    return {Amplitudes(r, 0.0, -r), Amplitudes(0.5, mid, 0.5), Amplitudes(0.5, -mid, 0.5)};
}

/// Berry phases (γ_B, γ_±) accumulated up to t.
inline std::pair<double, double> berry_phases(double delta, double t) { return {0.0, -0.5 * delta * t}; }

/// Adiabatic state from |0⟩: Σ_σ c_σ e^{−i∫E_σ} e^{iγ_σ} |Ψ_σ(t)⟩ with
/// c_B = 1/√2, c_± = 1/2 and ∫E_± = ±Θ.
inline StateVector adiabatic_state(double big_theta, double delta, double t)
{
    const auto basis = adiabatic_basis(delta, t);
    const auto [gamma_dark, gamma_pm] = berry_phases(delta, t);
    const Complex dark_coef = std::polar(1.0 / std::numbers::sqrt2, gamma_dark);
    const Complex plus_coef = std::polar(0.5, gamma_pm - big_theta);
    const Complex minus_coef = std::polar(0.5, gamma_pm + big_theta);
    return StateVector(dark_coef * basis.dark + plus_coef * basis.plus + minus_coef * basis.minus);
}

namespace detail {

inline void require_adiabatic_from_ground(const ProtocolSpec &spec)
{
    if (spec.kind != ProtocolKind::adiabatic_average) {
        throw ProtocolError("adiabatic solution needs the average-frequency protocol");
    }
    if (std::abs(spec.initial.c0()) < 1.0 - 1e-12) {
        throw ProtocolError("adiabatic closed form is only available from |0>");
    }
}

} // namespace detail

inline StateVector adiabatic_state(double t, const ProtocolSpec &spec)
{
    detail::require_adiabatic_from_ground(spec);
    return adiabatic_state(simultaneous_phase(t, spec), spec.spectrum.half_anharmonicity(), t);
}

/// E ≈ (Δ/2) sin²Θ + (Δ_max/4)[1 − 2cosΘ cos(δt/2) + cos²Θ].
inline double adiabatic_energy(double big_theta, double delta, double t, const LevelSpectrum &spectrum)
{
    const double s = std::sin(big_theta);
    const double c = std::cos(big_theta);
    return 0.5 * spectrum.delta() * s * s +
           0.25 * spectrum.delta_max() * (1.0 - 2.0 * c * std::cos(0.5 * delta * t) + c * c);
}

inline double adiabatic_energy(double t, const ProtocolSpec &spec)
{
    detail::require_adiabatic_from_ground(spec);
    return adiabatic_energy(simultaneous_phase(t, spec), spec.spectrum.half_anharmonicity(), t, spec.spectrum);
}

// ---------------------------------------------------------------------------
// Dispatch

/// True when `analytic_state` has a closed form for this protocol.
inline bool has_closed_form(const ProtocolSpec &spec)
{
    switch (spec.kind) {
    case ProtocolKind::qubit_resonant:
    case ProtocolKind::sequential:
        return true;
    case ProtocolKind::simultaneous:
    case ProtocolKind::adiabatic_average:
        return std::abs(spec.initial.c0()) >= 1.0 - 1e-12;
    case ProtocolKind::custom:
        return false;
    }
    return false;
}

inline StateVector analytic_state(double t, const ProtocolSpec &spec)
{
    switch (spec.kind) {
    case ProtocolKind::qubit_resonant:
        return qubit_state(t, spec);
    case ProtocolKind::sequential:
        return sequential_state(t, spec);
    case ProtocolKind::simultaneous:
        if (!has_closed_form(spec)) {
            break;
        }
        return simultaneous_state(simultaneous_phase(t, spec));
    case ProtocolKind::adiabatic_average:
        return adiabatic_state(t, spec);
    case ProtocolKind::custom:
        break;
    }
    throw ProtocolError(std::string(to_string(spec.kind)) + " protocol has no closed-form solution here");
}

} // namespace qbattery
