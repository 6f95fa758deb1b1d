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

/// Fixed-step propagation of i dψ/dt = H(t) ψ for up to three levels.
///
/// The default scheme is the fourth-order Magnus integrator: H is sampled at
/// the two Gauss–Legendre nodes of each step and the step propagator is the
/// exact exponential of the truncated Magnus series, so it is unitary up to
/// rounding. The classical Runge–Kutta scheme is kept for comparison; it is
/// not norm preserving and will trip the drift guard on carrier-resolved runs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qbattery/errors.hpp"
#include "qbattery/hamiltonian.hpp"
#include "qbattery/state.hpp"

namespace qbattery {

enum class Scheme { magnus4, rk4 };

inline constexpr double kFailureDrift = 1e-6;
inline constexpr std::size_t kRenormalizeEvery = 64;

/// Step bounds: σ_min/16 in the rotating frame; additionally a twentieth of
/// the fastest carrier period in the lab frame.
inline constexpr double kMinPointsPerSigma = 16.0;
inline constexpr double kMinPointsPerPeriod = 20.0;

struct PropagationOptions {
    Scheme scheme = Scheme::magnus4;
    std::size_t renormalize_every = kRenormalizeEvery;
    double failure_drift = kFailureDrift;
    /// Keep every n-th grid point (the final point is always kept).
    std::size_t store_stride = 1;
};

struct Trajectory {
    Frame frame = Frame::rotating;
    int dim = 3;
    double step = 0.0;
    std::vector<double> times;
    std::vector<Amplitudes> amplitudes;
    /// |‖ψ‖ − 1| at each stored point, measured before any renormalization.
    std::vector<double> norm_drift;
    /// Largest pre-renormalization drift seen on any step.
    double max_norm_drift = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] StateVector state(std::size_t i) const { return StateVector(amplitudes[i], dim, frame); }
    [[nodiscard]] StateVector final_state() const { return state(size() - 1); }
};

namespace detail {

/// exp(−i M) for Hermitian M.
inline Matrix3 unitary_exp(const Matrix3 &m)
{
    Eigen::SelfAdjointEigenSolver<Matrix3> solver(m);
    const auto &v = solver.eigenvectors();
    Eigen::Vector3cd phases;
    for (int k = 0; k < 3; ++k) {
        phases[k] = std::polar(1.0, -solver.eigenvalues()[k]);
    }
    return v * phases.asDiagonal() * v.adjoint();
}

inline const Matrix3 &as_matrix(const HermitianMatrix &h) { return h.matrix; }
inline const Matrix3 &as_matrix(const Matrix3 &m) { return m; }

template <class Generator>
Amplitudes magnus4_step(const Generator &hamiltonian, double t, double h, const Amplitudes &psi)
{
    constexpr double offset = 0.28867513459481288225; // √3/6
    const Matrix3 h1 = as_matrix(hamiltonian(t + (0.5 - offset) * h));
    const Matrix3 h2 = as_matrix(hamiltonian(t + (0.5 + offset) * h));
    // Ω = −i M with M = h/2 (H1+H2) − i (√3/12) h² [H2, H1].
    const Matrix3 m = (0.5 * h) * (h1 + h2) -
                      Complex(0.0, 0.14433756729740644113 * h * h) * (h2 * h1 - h1 * h2);
    if (m.isZero(0.0)) {
        return psi;
    }
    return unitary_exp(m) * psi;
}

template <class Generator>
Amplitudes rk4_step(const Generator &hamiltonian, double t, double h, const Amplitudes &psi)
{
    const Complex mi(0.0, -1.0);
    const Matrix3 ha = as_matrix(hamiltonian(t));
    const Matrix3 hb = as_matrix(hamiltonian(t + 0.5 * h));
    const Matrix3 hc = as_matrix(hamiltonian(t + h));
    const Amplitudes k1 = mi * (ha * psi);
    const Amplitudes k2 = mi * (hb * (psi + 0.5 * h * k1));
    const Amplitudes k3 = mi * (hb * (psi + 0.5 * h * k2));
    const Amplitudes k4 = mi * (hc * (psi + h * k3));
    return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline std::size_t step_count(double span, double h)
{
    return static_cast<std::size_t>(std::max(1.0, std::ceil(span / h - 1e-9)));
}

} // namespace detail

/// Integrate from t0 to t1 in `steps` equal steps. `hamiltonian(t)` returns a
/// HermitianMatrix or Matrix3.
template <class Generator>
Trajectory propagate(const Generator &hamiltonian, double t0, double t1, std::size_t steps,
                     const StateVector &initial, const PropagationOptions &options = {})
{
    if (steps == 0) {
        throw ParameterError("propagation needs at least one step");
    }
    const double h = (t1 - t0) / static_cast<double>(steps);
    const std::size_t stride = std::max<std::size_t>(1, options.store_stride);

    Trajectory traj;
    traj.frame = initial.frame();
    traj.dim = initial.dim();
    traj.step = h;
    const std::size_t stored = steps / stride + 2;
    traj.times.reserve(stored);
    traj.amplitudes.reserve(stored);
    traj.norm_drift.reserve(stored);

    Amplitudes psi = initial.amplitudes();
    const double initial_drift = std::abs(psi.norm() - 1.0);
    traj.times.push_back(t0);
    traj.amplitudes.push_back(psi);
    traj.norm_drift.push_back(initial_drift);
    traj.max_norm_drift = initial_drift;

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + h * static_cast<double>(k);
        psi = options.scheme == Scheme::magnus4 ? detail::magnus4_step(hamiltonian, t, h, psi)
                                                : detail::rk4_step(hamiltonian, t, h, psi);
        if (traj.dim == 2) {
            psi[2] = 0.0;
        }
        const double norm = psi.norm();
        const double drift = std::abs(norm - 1.0);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (!(drift <= options.failure_drift)) {
            throw IntegrationError("norm drift " + std::to_string(drift) + " at t = " + std::to_string(t + h) +
                                   " exceeds " + std::to_string(options.failure_drift));
        }
        const bool last = k + 1 == steps;
        if ((k + 1) % stride == 0 || last) {
            traj.times.push_back(last ? t1 : t + h);
            traj.amplitudes.push_back(psi);
            traj.norm_drift.push_back(drift);
        }
        if (options.renormalize_every != 0 && (k + 1) % options.renormalize_every == 0) {
            psi /= norm;
        }
    }
    return traj;
}

/// Step bound for the frame; throws ResolutionError when `h` exceeds it.
inline void check_step(const ProtocolSpec &spec, Frame frame, double h)
{
    if (!(h > 0.0)) {
        throw ResolutionError("time step must be positive");
    }
    const double slack = 1.0 + 1e-9;
    const double sigma_bound = shortest_pulse_scale(spec) / kMinPointsPerSigma;
    if (h > sigma_bound * slack) {
        throw ResolutionError("time step " + std::to_string(h) + " exceeds sigma_min/16 = " +
                              std::to_string(sigma_bound));
    }
    if (frame == Frame::lab) {
        const double period_bound = 2.0 * std::numbers::pi / fastest_frequency(spec) / kMinPointsPerPeriod;
        if (h > period_bound * slack) {
            throw ResolutionError("lab-frame step " + std::to_string(h) +
                                  " exceeds a twentieth of the fastest period (" +
                                  std::to_string(period_bound) + ")");
        }
    }
}

/// σ_min/32, and in the lab frame no more than a fortieth of the fastest period.
inline double default_step(const ProtocolSpec &spec, Frame frame)
{
    double h = shortest_pulse_scale(spec) / 32.0;
    if (frame == Frame::lab) {
        h = std::min(h, 2.0 * std::numbers::pi / fastest_frequency(spec) / 40.0);
    }
    return h;
}

/// Propagate `initial` over [0, t_m] of the protocol.
inline Trajectory evolve(const ProtocolSpec &spec, Frame frame, const StateVector &initial, double h,
                         const PropagationOptions &options = {})
{
    validate(spec);
    check_step(spec, frame, h);
    if (initial.dim() > spec.spectrum.levels()) {
        throw ParameterError("initial state has more levels than the spectrum");
    }
    if (std::abs(initial.norm() - 1.0) > 1e-9) {
        throw NormalizationError("initial state must be normalized");
    }
    const StateVector start = initial.with_frame(frame);
    const std::size_t steps = detail::step_count(spec.t_m, h);
    if (frame == Frame::rotating) {
        return propagate(RotatingFrameHamiltonian(spec), 0.0, spec.t_m, steps, start, options);
    }
    // The bare evolution e^{−iH₀t} is applied exactly; the full drive,
    // counter-rotating terms included, is integrated in the interaction picture.
    auto traj = propagate(InteractionHamiltonian(spec), 0.0, spec.t_m, steps, start, options);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        for (int n = 1; n < spec.spectrum.levels(); ++n) {
            traj.amplitudes[i][n] *= std::polar(1.0, -spec.spectrum.omega(n) * traj.times[i]);
        }
    }
    traj.frame = Frame::lab;
    return traj;
}

inline Trajectory evolve(const ProtocolSpec &spec, Frame frame = Frame::rotating,
                         std::optional<double> h = std::nullopt, const PropagationOptions &options = {})
{
    return evolve(spec, frame, spec.initial, h.value_or(default_step(spec, frame)), options);
}

/// Largest final-amplitude difference between steps h and h/2.
inline double self_convergence(const ProtocolSpec &spec, Frame frame, const StateVector &initial, double h,
                               const PropagationOptions &options = {})
{
    PropagationOptions final_only = options;
    final_only.store_stride = std::numeric_limits<std::size_t>::max();
    const auto coarse = evolve(spec, frame, initial, h, final_only);
    const auto fine = evolve(spec, frame, initial, 0.5 * h, final_only);
    return (coarse.amplitudes.back() - fine.amplitudes.back()).cwiseAbs().maxCoeff();
}

/// Lab-frame amplitudes seen from the frame rotating with the bare levels:
/// c′_n = e^{iω_n t} c_n.
inline StateVector to_rotating_frame(const StateVector &lab, const LevelSpectrum &spectrum, double t)
{
    Amplitudes a = lab.amplitudes();
    for (int n = 0; n < spectrum.levels(); ++n) {
        a[n] *= std::polar(1.0, spectrum.omega(n) * t);
    }
    return StateVector(a, lab.dim(), Frame::rotating);
}

} // namespace qbattery
