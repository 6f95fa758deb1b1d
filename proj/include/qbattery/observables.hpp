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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qbattery/analytic.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/hamiltonian.hpp"
#include "qbattery/integrator.hpp"
#include "qbattery/state.hpp"

namespace qbattery {

enum class Engine { analytic, numeric };

inline const char *to_string(Engine e) { return e == Engine::analytic ? "analytic" : "numeric"; }

inline Engine parse_engine(std::string_view name)
{
    if (name == "analytic") {
        return Engine::analytic;
    }
    if (name == "numeric") {
        return Engine::numeric;
    }
    throw ParameterError("unknown engine '" + std::string(name) + "' (expected analytic or numeric)");
}

/// E = Σ ω_n |c_n|² with ω₀ = 0.
inline double stored_energy(const StateVector &state, const LevelSpectrum &spectrum)
{
    if (std::abs(state.norm() - 1.0) > 1e-9) {
        throw NormalizationError("stored energy needs a unit-norm state (norm " + std::to_string(state.norm()) +
                                 ")");
    }
    const auto p = state.populations();
    if (spectrum.levels() == 2 && p[2] != 0.0) {
        throw ParameterError("state populates |2> but the spectrum has two levels");
    }
    double e = 0.0;
    for (int n = 1; n < spectrum.levels(); ++n) {
        e += spectrum.omega(n) * p[static_cast<std::size_t>(n)];
    }
    return e;
}

/// Reference energy for thresholds: Δ for the qubit protocol, Δ_max otherwise.
inline double full_scale(const ProtocolSpec &spec)
{
    return spec.kind == ProtocolKind::qubit_resonant ? spec.spectrum.delta() : spec.spectrum.full_scale();
}

struct EnergyCurve {
    double t_m = 1.0;
    double full_scale = 1.0;
    std::vector<double> times;
    std::vector<double> energy;
    std::vector<std::array<double, 3>> populations;
    std::vector<double> norm_drift;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] double fraction(std::size_t i) const { return energy[i] / full_scale; }
};

/// Closed-form E(t) of a protocol.
inline double analytic_energy(double t, const ProtocolSpec &spec)
{
    return stored_energy(analytic_state(t, spec), spec.spectrum);
}

/// Closed-form curve on `points` uniform samples of [0, t_m].
inline EnergyCurve analytic_curve(const ProtocolSpec &spec, std::size_t points = 513)
{
    if (points < 2) {
        throw ParameterError("an energy curve needs at least two points");
    }
    EnergyCurve curve;
    curve.t_m = spec.t_m;
    curve.full_scale = full_scale(spec);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = spec.t_m * static_cast<double>(i) / static_cast<double>(points - 1);
        const auto psi = analytic_state(t, spec);
        curve.times.push_back(t);
        curve.energy.push_back(stored_energy(psi, spec.spectrum));
        curve.populations.push_back(psi.populations());
        curve.norm_drift.push_back(std::abs(psi.norm() - 1.0));
    }
    return curve;
}

inline EnergyCurve energy_curve(const Trajectory &traj, const ProtocolSpec &spec)
{
    EnergyCurve curve;
    curve.t_m = spec.t_m;
    curve.full_scale = full_scale(spec);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        // Populations are frame independent; renormalize away the tracked drift.
        Amplitudes a = traj.amplitudes[i] / traj.amplitudes[i].norm();
        const StateVector psi(a, traj.dim, traj.frame);
        curve.times.push_back(traj.times[i]);
        curve.energy.push_back(stored_energy(psi, spec.spectrum));
        curve.populations.push_back(psi.populations());
        curve.norm_drift.push_back(traj.norm_drift[i]);
    }
    return curve;
}

/// Integrate the protocol, keeping at most about `max_points` grid points.
inline EnergyCurve numeric_curve(const ProtocolSpec &spec, Frame frame = Frame::rotating,
                                 std::optional<double> h = std::nullopt, std::size_t max_points = 2049,
                                 Scheme scheme = Scheme::magnus4)
{
    const double step = h.value_or(default_step(spec, frame));
    const std::size_t steps = detail::step_count(spec.t_m, step);
    PropagationOptions options;
    options.scheme = scheme;
    options.store_stride = std::max<std::size_t>(1, (steps + max_points - 2) / std::max<std::size_t>(1, max_points - 1));
    return energy_curve(evolve(spec, frame, spec.initial, step, options), spec);
}

// ---------------------------------------------------------------------------
// Charging time

struct ChargingTime {
    double t_c = 0.0;
    /// Last time the curve is still below threshold after first crossing it.
    std::optional<double> last_below;
    double max_fraction = 0.0;
};

namespace detail {

inline void check_threshold(double threshold_fraction, double full_scale)
{
    if (!(threshold_fraction > 0.0) || !std::isfinite(threshold_fraction)) {
        throw ParameterError("threshold fraction must be positive");
    }
    if (!(full_scale > 0.0)) {
        throw ParameterError("full scale must be positive");
    }
}

inline std::string not_charged_message(double threshold_fraction, double max_fraction)
{
    return "threshold " + std::to_string(threshold_fraction) + " of full scale never reached (max " +
           std::to_string(max_fraction) + ")";
}

} // namespace detail

/// First crossing on a sampled curve, linear interpolation between grid points.
inline ChargingTime charging_time(const EnergyCurve &curve, double threshold_fraction, double full_scale)
{
    detail::check_threshold(threshold_fraction, full_scale);
    if (curve.size() == 0) {
        throw ParameterError("empty energy curve");
    }
    const double thr = threshold_fraction * full_scale;
    const double emax = *std::max_element(curve.energy.begin(), curve.energy.end());
    ChargingTime out;
    out.max_fraction = emax / full_scale;
    auto first = std::find_if(curve.energy.begin(), curve.energy.end(), [&](double e) { return e >= thr; });
    if (first == curve.energy.end()) {
        throw NotChargedError(detail::not_charged_message(threshold_fraction, out.max_fraction), out.max_fraction);
    }
    const auto i = static_cast<std::size_t>(first - curve.energy.begin());
    if (i == 0) {
        out.t_c = curve.times[0];
    } else {
        const double e0 = curve.energy[i - 1];
        const double e1 = curve.energy[i];
        const double w = (thr - e0) / (e1 - e0);
        out.t_c = curve.times[i - 1] + w * (curve.times[i] - curve.times[i - 1]);
    }
    for (std::size_t k = curve.size(); k-- > i;) {
        if (curve.energy[k] < thr) {
            out.last_below = curve.times[k];
            break;
        }
    }
    return out;
}

/// First crossing of a continuous E(t) on [t0, t1]: scan `grid` cells, then
/// bisect the first bracketing cell to machine resolution.
inline ChargingTime charging_time(const std::function<double(double)> &energy, double t0, double t1,
                                  double threshold_fraction, double full_scale, std::size_t grid = 4096)
{
    detail::check_threshold(threshold_fraction, full_scale);
    const double thr = threshold_fraction * full_scale;
    const double h = (t1 - t0) / static_cast<double>(grid);
    ChargingTime out;
    std::optional<std::size_t> first;
    double emax = -1.0;
    for (std::size_t i = 0; i <= grid; ++i) {
        const double e = energy(t0 + h * static_cast<double>(i));
        emax = std::max(emax, e);
        if (!first && e >= thr) {
            first = i;
        } else if (first && e < thr) {
            out.last_below = t0 + h * static_cast<double>(i);
        }
    }
    out.max_fraction = emax / full_scale;
    if (!first) {
        throw NotChargedError(detail::not_charged_message(threshold_fraction, out.max_fraction), out.max_fraction);
    }
    if (*first == 0) {
        out.t_c = t0;
        return out;
    }
    double lo = t0 + h * static_cast<double>(*first - 1);
    double hi = t0 + h * static_cast<double>(*first);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (t1 - t0); ++it) {
        const double mid = 0.5 * (lo + hi);
        (energy(mid) >= thr ? hi : lo) = mid;
    }
    out.t_c = 0.5 * (lo + hi);
    return out;
}

/// Charging time of a protocol against its own full scale (Δ or Δ_max).
inline ChargingTime charging_time(const ProtocolSpec &spec, double threshold_fraction,
                                  Engine engine = Engine::analytic, Frame frame = Frame::rotating,
                                  std::optional<double> h = std::nullopt)
{
    if (engine == Engine::analytic && !has_closed_form(spec)) {
        throw ProtocolError(std::string(to_string(spec.kind)) + " protocol has no closed form; use the numeric engine");
    }
    if (engine == Engine::analytic) {
        return charging_time([&](double t) { return analytic_energy(t, spec); }, 0.0, spec.t_m,
                             threshold_fraction, full_scale(spec));
    }
    return charging_time(numeric_curve(spec, frame, h, std::numeric_limits<std::size_t>::max()), threshold_fraction,
                         full_scale(spec));
}

inline double average_power(double energy_at_tc, double t_c)
{
    if (!(t_c > 0.0)) {
        throw ParameterError("average power needs t_c > 0");
    }
    return energy_at_tc / t_c;
}

// ---------------------------------------------------------------------------
// Sweeps

/// Run body(i) for i in [0, n) on up to hardware_concurrency threads.
template <class Body>
void parallel_for(std::size_t n, Body &&body, unsigned threads = 0)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += threads) {
                        body(i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

enum class SweepVariable { theta_m, phi_m, big_theta_m };

inline const char *to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::theta_m:
        return "theta_m";
    case SweepVariable::phi_m:
        return "phi_m";
    case SweepVariable::big_theta_m:
        return "Theta_m";
    }
    return "?";
}

/// Everything but η. η is the delivered pulse area, so sweeps normalize the
/// envelope over its truncated support.
struct SweepSpec {
    ProtocolKind kind = ProtocolKind::qubit_resonant;
    LevelSpectrum spectrum = LevelSpectrum::two_level(1.0);
    PulseSchedule pulse;
    double a = 1.0;
    double phi = 0.0;
    /// Sequential only: start of the second pulse; unset means t_m/2.
    std::optional<double> delay;
    Frame frame = Frame::rotating;
    std::optional<double> step;
    Scheme scheme = Scheme::magnus4;

    [[nodiscard]] SweepVariable variable() const
    {
        switch (kind) {
        case ProtocolKind::qubit_resonant:
            return SweepVariable::theta_m;
        case ProtocolKind::sequential:
            return SweepVariable::phi_m;
        case ProtocolKind::simultaneous:
        case ProtocolKind::adiabatic_average:
            return SweepVariable::big_theta_m;
        case ProtocolKind::custom:
            break;
        }
        throw ProtocolError("custom protocols have no sweep variable");
    }

    [[nodiscard]] ProtocolSpec at(double eta) const
    {
        PulseSchedule p = pulse;
        p.normalization = AreaNormalization::support;
        switch (kind) {
        case ProtocolKind::qubit_resonant:
            return qubit_protocol(spectrum, p, eta, a, phi);
        case ProtocolKind::sequential: {
            const auto [t1, t2] = sequential_areas(eta);
            return staggered_protocol(spectrum, p, t1, t2, delay.value_or(0.5 * p.t_m));
        }
        case ProtocolKind::simultaneous:
            return simultaneous_protocol(spectrum, p, eta);
        case ProtocolKind::adiabatic_average:
            return adiabatic_protocol(spectrum, p, eta);
        case ProtocolKind::custom:
            break;
        }
        throw ProtocolError("custom protocols cannot be swept");
    }

    [[nodiscard]] double full_scale() const
    {
        return kind == ProtocolKind::qubit_resonant ? spectrum.delta() : spectrum.full_scale();
    }
};

struct SweepResult {
    SweepVariable variable = SweepVariable::theta_m;
    double full_scale = 1.0;
    std::vector<double> eta;
    std::vector<double> energy;
    std::vector<double> stderr_;

    [[nodiscard]] std::size_t size() const noexcept { return eta.size(); }
};

inline constexpr std::size_t kDefaultSweepPoints = 65;

/// Uniform grid over [0, π] (θ_m, Θ_m) or [0, 2π] (φ_m).
inline std::vector<double> default_eta_grid(SweepVariable v, std::size_t points = kDefaultSweepPoints)
{
    if (points < 2) {
        throw ParameterError("a sweep grid needs at least two points");
    }
    const double end = v == SweepVariable::phi_m ? 2.0 * std::numbers::pi : std::numbers::pi;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = end * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    grid.back() = end;
    return grid;
}

inline void check_eta_grid(const std::vector<double> &eta)
{
    if (eta.empty()) {
        throw ParameterError("empty sweep grid");
    }
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (!(eta[i] >= 0.0 && eta[i] <= 2.0 * std::numbers::pi)) {
            throw ParameterError("sweep value " + std::to_string(eta[i]) + " outside [0, 2pi]");
        }
        if (i > 0 && !(eta[i] > eta[i - 1])) {
            throw ParameterError("sweep grid must be strictly increasing");
        }
    }
}

/// Closed-form E(η; t_m) for the undelayed protocols.
inline double analytic_sweep_energy(const SweepSpec &sweep, double eta)
{
    switch (sweep.kind) {
    case ProtocolKind::qubit_resonant:
        return qubit_energy(sweep.a, sweep.phi, eta, sweep.spectrum);
    case ProtocolKind::sequential:
        if (sweep.delay && !detail::close(*sweep.delay, 0.5 * sweep.pulse.t_m)) {
            throw ProtocolError("overlapping sequential pulses have no closed form; use the numeric engine");
        }
        return sequential_energy_vs_phase(eta, sweep.spectrum);
    case ProtocolKind::simultaneous:
        return simultaneous_energy(eta, sweep.spectrum);
    case ProtocolKind::adiabatic_average:
        return adiabatic_energy(eta, sweep.spectrum.half_anharmonicity(), sweep.pulse.t_m, sweep.spectrum);
    case ProtocolKind::custom:
        break;
    }
    throw ProtocolError("custom protocols have no closed form");
}

/// Final state of the protocol at η, integrated numerically.
inline StateVector numeric_final_state(const SweepSpec &sweep, double eta)
{
    const auto spec = sweep.at(eta);
    PropagationOptions options;
    options.scheme = sweep.scheme;
    options.store_stride = std::numeric_limits<std::size_t>::max();
    const auto traj = evolve(spec, sweep.frame, spec.initial,
                             sweep.step.value_or(default_step(spec, sweep.frame)), options);
    Amplitudes a = traj.amplitudes.back();
    a /= a.norm();
    return StateVector(a, traj.dim, Frame::rotating);
}

inline SweepResult sweep_final_energy(const SweepSpec &sweep, const std::vector<double> &eta, Engine engine)
{
    check_eta_grid(eta);
    SweepResult out;
    out.variable = sweep.variable();
    out.full_scale = sweep.full_scale();
    out.eta = eta;
    out.energy.assign(eta.size(), 0.0);
    out.stderr_.assign(eta.size(), 0.0);
    if (engine == Engine::analytic) {
        for (std::size_t i = 0; i < eta.size(); ++i) {
            out.energy[i] = analytic_sweep_energy(sweep, eta[i]);
        }
        return out;
    }
    parallel_for(eta.size(), [&](std::size_t i) {
        out.energy[i] = stored_energy(numeric_final_state(sweep, eta[i]), sweep.spectrum);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Table of qubit charging times

struct Table1Row {
    double a;
    double phi;
    double threshold;
    double reference;
    double recomputed = 0.0;
};

inline std::vector<Table1Row> table1_rows()
{
    const double q = std::numbers::pi / 4.0;
    return {{1.0, 0.0, 0.92, 0.58},  {1.0, 0.0, 0.95, 0.59},  {1.0, 0.0, 0.99, 0.63},
            {0.98, 0.0, 0.95, 0.61}, {0.98, q, 0.95, 0.63},   {0.96, 0.0, 0.95, 0.63},
            {0.96, q, 0.95, 0.68}};
}

/// t_c/t_m per row from the closed-form qubit curve with θ_m = π.
inline std::vector<Table1Row> table1(double sigma_ratio = 0.125)
{
    auto rows = table1_rows();
    PulseSchedule pulse;
    pulse.sigma_ratio = sigma_ratio;
    const auto spectrum = LevelSpectrum::two_level(1.0);
    for (auto &row : rows) {
        const auto spec = qubit_protocol(spectrum, pulse, std::numbers::pi, row.a, row.phi);
        row.recomputed = charging_time(spec, row.threshold).t_c / spec.t_m;
    }
    return rows;
}

} // namespace qbattery
