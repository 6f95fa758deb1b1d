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

/// Charging protocols and their Hamiltonians in the lab and rotating frames.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qbattery/device.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/pulses.hpp"
#include "qbattery/state.hpp"

namespace qbattery {

/// Dipole-allowed transitions. |0⟩↔|2⟩ has the wrong parity and is not representable.
enum class Transition { ground_first, first_second };

inline Transition make_transition(int lower, int upper)
{
    if (lower == 0 && upper == 1) {
        return Transition::ground_first;
    }
    if (lower == 1 && upper == 2) {
        return Transition::first_second;
    }
    throw ProtocolError("transition (" + std::to_string(lower) + "," + std::to_string(upper) +
                        ") is not parity-allowed; only (0,1) and (1,2) can be driven");
}

[[nodiscard]] constexpr int lower_level(Transition t) noexcept { return t == Transition::ground_first ? 0 : 1; }
[[nodiscard]] constexpr int upper_level(Transition t) noexcept { return lower_level(t) + 1; }

/// g·f(t)·cos(Ω t) coupling one transition.
struct DriveTerm {
    double coupling = 1.0;
    Envelope envelope;
    double carrier = 0.0;
    Transition transition = Transition::ground_first;

    [[nodiscard]] double value(double t) const { return envelope_value(envelope, t); }
};

enum class ProtocolKind { qubit_resonant, sequential, simultaneous, adiabatic_average, custom };

inline std::string_view to_string(ProtocolKind k)
{
    switch (k) {
    case ProtocolKind::qubit_resonant:
        return "qubit";
    case ProtocolKind::sequential:
        return "sequential";
    case ProtocolKind::simultaneous:
        return "simultaneous";
    case ProtocolKind::adiabatic_average:
        return "adiabatic";
    case ProtocolKind::custom:
        return "custom";
    }
    return "unknown";
}

inline ProtocolKind parse_protocol_kind(std::string_view name)
{
    for (auto k : {ProtocolKind::qubit_resonant, ProtocolKind::sequential, ProtocolKind::simultaneous,
                   ProtocolKind::adiabatic_average, ProtocolKind::custom}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw ParameterError("unknown protocol kind '" + std::string(name) + "'");
}

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::custom;
    std::vector<DriveTerm> drives;
    LevelSpectrum spectrum = LevelSpectrum::two_level(1.0);
    double t_m = 1.0; ///< end of the protocol window (measurement time)
    StateVector initial;
    double a = 1.0;   ///< qubit initial-state weight
    double phi = 0.0; ///< qubit initial-state phase
};

/// Gaussian pulse shape shared by the protocol builders.
struct PulseSchedule {
    double t_m = 1.0;
    double sigma_ratio = 0.125;
    double coupling = 1.0;
    AreaNormalization normalization = AreaNormalization::full_line;
};

namespace detail {

inline bool close(double a, double b, double rel = 1e-12)
{
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool same_envelope(const Envelope &a, const Envelope &b)
{
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto *ga = std::get_if<PulseEnvelope>(&a)) {
        const auto &gb = std::get<PulseEnvelope>(b);
        return close(ga->amplitude(), gb.amplitude()) && close(ga->center(), gb.center()) &&
               close(ga->sigma(), gb.sigma()) && close(ga->support().start, gb.support().start) &&
               close(ga->support().end, gb.support().end);
    }
    const auto &sa = std::get<DiscretizedPulse>(a);
    const auto &sb = std::get<DiscretizedPulse>(b);
    return close(sa.start(), sb.start()) && close(sa.dt(), sb.dt()) && sa.samples() == sb.samples();
}

inline double spacing(const LevelSpectrum &s, Transition t)
{
    return s.omega(upper_level(t)) - s.omega(lower_level(t));
}

[[noreturn]] inline void fail(ProtocolKind kind, const std::string &why)
{
    throw ProtocolError(std::string(to_string(kind)) + " protocol: " + why);
}

inline void require_pair_on_both_transitions(const ProtocolSpec &spec)
{
    if (spec.drives.size() != 2 || spec.drives[0].transition != Transition::ground_first ||
        spec.drives[1].transition != Transition::first_second) {
        fail(spec.kind, "needs exactly two drives, on (0,1) then (1,2)");
    }
    if (spec.spectrum.levels() != 3) {
        fail(spec.kind, "needs a three-level spectrum");
    }
}

inline void require_identical_drives(const ProtocolSpec &spec)
{
    const auto &d0 = spec.drives[0];
    const auto &d1 = spec.drives[1];
    if (!close(d0.coupling, d1.coupling) || !same_envelope(d0.envelope, d1.envelope)) {
        fail(spec.kind, "both drives must share coupling and envelope");
    }
}

} // namespace detail

/// Throws ProtocolError unless the drives satisfy the invariants of `spec.kind`.
inline void validate(const ProtocolSpec &spec)
{
    if (!(spec.t_m > 0.0)) {
        throw ProtocolError("protocol window t_m must be positive");
    }
    if (spec.initial.dim() > spec.spectrum.levels()) {
        throw ProtocolError("initial state has more levels than the spectrum");
    }
    for (const auto &d : spec.drives) {
        if (!(d.coupling > 0.0)) {
            throw ProtocolError("drive coupling must be positive");
        }
        if (upper_level(d.transition) >= spec.spectrum.levels()) {
            throw ProtocolError("drive addresses a level the spectrum does not have");
        }
    }
    const auto &s = spec.spectrum;
    switch (spec.kind) {
    case ProtocolKind::qubit_resonant:
        if (spec.drives.size() != 1 || spec.drives[0].transition != Transition::ground_first) {
            detail::fail(spec.kind, "needs exactly one drive on (0,1)");
        }
        if (!detail::close(spec.drives[0].carrier, s.delta())) {
            detail::fail(spec.kind, "carrier must equal Delta");
        }
        break;
    case ProtocolKind::sequential: {
        detail::require_pair_on_both_transitions(spec);
        if (!detail::close(spec.drives[0].carrier, s.delta()) ||
            !detail::close(spec.drives[1].carrier, s.delta_prime())) {
            detail::fail(spec.kind, "carriers must equal Delta and Delta'");
        }
        const auto first = envelope_support(spec.drives[0].envelope);
        const auto second = envelope_support(spec.drives[1].envelope);
        if (first.overlaps(second) || second.start < first.start) {
            detail::fail(spec.kind, "pulse supports must be disjoint and ordered");
        }
        break;
    }
    case ProtocolKind::simultaneous:
        detail::require_pair_on_both_transitions(spec);
        if (!detail::close(spec.drives[0].carrier, s.delta()) ||
            !detail::close(spec.drives[1].carrier, s.delta_prime())) {
            detail::fail(spec.kind, "carriers must equal Delta and Delta'");
        }
        detail::require_identical_drives(spec);
        break;
    case ProtocolKind::adiabatic_average: {
        detail::require_pair_on_both_transitions(spec);
        const double mean = 0.5 * s.delta_max();
        if (!detail::close(spec.drives[0].carrier, mean) || !detail::close(spec.drives[1].carrier, mean)) {
            detail::fail(spec.kind, "both carriers must equal (Delta+Delta')/2");
        }
        detail::require_identical_drives(spec);
        break;
    }
    case ProtocolKind::custom:
        break;
    }
}

// ---------------------------------------------------------------------------
// Builders

inline ProtocolSpec qubit_protocol(const LevelSpectrum &spectrum, const PulseSchedule &pulse,
                                   double theta_m, double a = 1.0, double phi = 0.0)
{
    ProtocolSpec spec;
    spec.kind = ProtocolKind::qubit_resonant;
    spec.spectrum = spectrum;
    spec.t_m = pulse.t_m;
    spec.a = a;
    spec.phi = phi;
    spec.initial = StateVector::qubit(a, phi, spectrum.levels());
    spec.drives.push_back({pulse.coupling,
                           make_gaussian(theta_m, pulse.coupling, pulse.t_m, pulse.sigma_ratio,
                                         pulse.normalization),
                           spectrum.delta(), Transition::ground_first});
    validate(spec);
    return spec;
}

/// Two pulses, each occupying a t_m/2 window with σ = sigma_ratio·t_m/2; the
/// second starts `delay` after the first. delay = t_m/2 is the sequential
/// protocol, shorter delays overlap the pulses (custom kind).
inline ProtocolSpec staggered_protocol(const LevelSpectrum &spectrum, const PulseSchedule &pulse,
                                       double theta1_m, double theta2_m, double delay)
{
    if (!(delay >= 0.0)) {
        throw ParameterError("pulse delay must be >= 0");
    }
    const double half = 0.5 * pulse.t_m;
    ProtocolSpec spec;
    spec.spectrum = spectrum;
    spec.initial = StateVector::ground(3);
    spec.t_m = std::max(pulse.t_m, delay + half);
    spec.kind = detail::close(delay, half) ? ProtocolKind::sequential : ProtocolKind::custom;
    auto first = make_gaussian(theta1_m, pulse.coupling, half, pulse.sigma_ratio, pulse.normalization);
    auto second = make_gaussian(theta2_m, pulse.coupling, half, pulse.sigma_ratio, pulse.normalization)
                      .shifted(delay);
    spec.drives.push_back({pulse.coupling, first, spectrum.delta(), Transition::ground_first});
    spec.drives.push_back({pulse.coupling, second, spectrum.delta_prime(), Transition::first_second});
    validate(spec);
    return spec;
}

inline ProtocolSpec sequential_protocol(const LevelSpectrum &spectrum, const PulseSchedule &pulse,
                                        double theta1_m, double theta2_m)
{
    return staggered_protocol(spectrum, pulse, theta1_m, theta2_m, 0.5 * pulse.t_m);
}

/// Pulse areas (θ₁,θ₂) for the combined sequential phase φ_m ∈ [0, 2π].
inline std::pair<double, double> sequential_areas(double phi_m)
{
    if (!(phi_m >= 0.0 && phi_m <= 2.0 * std::numbers::pi)) {
        throw ParameterError("phi_m must lie in [0, 2pi]");
    }
    if (phi_m <= std::numbers::pi) {
        return {phi_m, 0.0};
    }
    return {std::numbers::pi, phi_m - std::numbers::pi};
}

inline ProtocolSpec sequential_protocol(const LevelSpectrum &spectrum, const PulseSchedule &pulse,
                                        double phi_m)
{
    const auto [t1, t2] = sequential_areas(phi_m);
    return sequential_protocol(spectrum, pulse, t1, t2);
}

namespace detail {

inline ProtocolSpec equal_envelope_pair(ProtocolKind kind, const LevelSpectrum &spectrum,
                                        const PulseSchedule &pulse, double big_theta_m,
                                        double carrier01, double carrier12)
{
    // Each drive carries θ_m = √2·Θ_m since Θ(t) = (g/√2)∫f.
    const auto env = make_gaussian(std::numbers::sqrt2 * big_theta_m, pulse.coupling, pulse.t_m,
                                   pulse.sigma_ratio, pulse.normalization);
    ProtocolSpec spec;
    spec.kind = kind;
    spec.spectrum = spectrum;
    spec.initial = StateVector::ground(3);
    spec.t_m = pulse.t_m;
    spec.drives.push_back({pulse.coupling, env, carrier01, Transition::ground_first});
    spec.drives.push_back({pulse.coupling, env, carrier12, Transition::first_second});
    validate(spec);
    return spec;
}

} // namespace detail

inline ProtocolSpec simultaneous_protocol(const LevelSpectrum &spectrum, const PulseSchedule &pulse,
                                          double big_theta_m)
{
    return detail::equal_envelope_pair(ProtocolKind::simultaneous, spectrum, pulse, big_theta_m,
                                       spectrum.delta(), spectrum.delta_prime());
}

inline ProtocolSpec adiabatic_protocol(const LevelSpectrum &spectrum, const PulseSchedule &pulse,
                                       double big_theta_m)
{
    const double mean = 0.5 * spectrum.delta_max();
    return detail::equal_envelope_pair(ProtocolKind::adiabatic_average, spectrum, pulse, big_theta_m,
                                       mean, mean);
}

inline ProtocolSpec custom_protocol(const LevelSpectrum &spectrum, std::vector<DriveTerm> drives,
                                    double t_m, const StateVector &initial)
{
    ProtocolSpec spec;
    spec.kind = ProtocolKind::custom;
    spec.spectrum = spectrum;
    spec.drives = std::move(drives);
    spec.t_m = t_m;
    spec.initial = initial;
    validate(spec);
    return spec;
}

// ---------------------------------------------------------------------------
// Hamiltonians

/// Lab-frame H(t) = Σ ω_n|n⟩⟨n| + Σ_k g f_k(t) cos(Ω_k t)(|a⟩⟨b| + h.c.).
/// Assumes a validated spec.
class LabFrameHamiltonian {
  public:
    explicit LabFrameHamiltonian(const ProtocolSpec &spec) : spec_(&spec) {}

    [[nodiscard]] HermitianMatrix operator()(double t) const
    {
        HermitianMatrix h;
        h.dim = spec_->spectrum.levels();
        for (int n = 0; n < h.dim; ++n) {
            h.matrix(n, n) = spec_->spectrum.omega(n);
        }
        for (const auto &d : spec_->drives) {
            const double v = d.coupling * d.value(t) * std::cos(d.carrier * t);
            const int lo = lower_level(d.transition);
            const int hi = upper_level(d.transition);
            h.matrix(lo, hi) += v;
            h.matrix(hi, lo) += v;
        }
        return h;
    }

  private:
    const ProtocolSpec *spec_;
};

/// Rotating-frame Hamiltonian after the RWA: element (b,a) of each drive is
/// (g/2) f(t) e^{i d t} with d = (ω_b − ω_a) − Ω. Resonant kinds use d = 0;
/// the average-frequency drive uses d = ±δ. Assumes a validated spec.
class RotatingFrameHamiltonian {
  public:
    explicit RotatingFrameHamiltonian(const ProtocolSpec &spec) : spec_(&spec)
    {
        detunings_.reserve(spec.drives.size());
        for (const auto &d : spec.drives) {
            switch (spec.kind) {
            case ProtocolKind::qubit_resonant:
            case ProtocolKind::sequential:
            case ProtocolKind::simultaneous:
                detunings_.push_back(0.0);
                break;
            case ProtocolKind::adiabatic_average: {
                const double delta = spec.spectrum.half_anharmonicity();
                detunings_.push_back(d.transition == Transition::ground_first ? delta : -delta);
                break;
            }
            case ProtocolKind::custom:
                detunings_.push_back(detail::spacing(spec.spectrum, d.transition) - d.carrier);
                break;
            }
        }
    }

    [[nodiscard]] HermitianMatrix operator()(double t) const
    {
        HermitianMatrix h;
        h.dim = spec_->spectrum.levels();
        for (std::size_t k = 0; k < spec_->drives.size(); ++k) {
            const auto &d = spec_->drives[k];
            const double f = d.value(t);
            if (f == 0.0) {
                continue;
            }
            const double mag = 0.5 * d.coupling * f;
            const Complex lower_to_upper =
                detunings_[k] == 0.0 ? Complex(mag, 0.0) : std::polar(mag, detunings_[k] * t);
            const int lo = lower_level(d.transition);
            const int hi = upper_level(d.transition);
            h.matrix(hi, lo) += lower_to_upper;
            h.matrix(lo, hi) += std::conj(lower_to_upper);
        }
        return h;
    }

  private:
    const ProtocolSpec *spec_;
    std::vector<double> detunings_;
};

/// Lab-frame drive seen from the bare-level frame, e^{iH₀t}(H(t) − H₀)e^{−iH₀t},
/// keeping the counter-rotating terms. Element (b,a) is V_ba(t) e^{i(ω_b−ω_a)t}.
/// Assumes a validated spec.
class InteractionHamiltonian {
  public:
    explicit InteractionHamiltonian(const ProtocolSpec &spec) : spec_(&spec) {}

    [[nodiscard]] HermitianMatrix operator()(double t) const
    {
        HermitianMatrix h;
        h.dim = spec_->spectrum.levels();
        for (const auto &d : spec_->drives) {
            const double v = d.coupling * d.value(t) * std::cos(d.carrier * t);
            if (v == 0.0) {
                continue;
            }
            const int lo = lower_level(d.transition);
            const int hi = upper_level(d.transition);
            const Complex up = v * std::polar(1.0, detail::spacing(spec_->spectrum, d.transition) * t);
            h.matrix(hi, lo) += up;
            h.matrix(lo, hi) += std::conj(up);
        }
        return h;
    }

  private:
    const ProtocolSpec *spec_;
};

inline HermitianMatrix lab_frame(const ProtocolSpec &spec, double t)
{
    validate(spec);
    return LabFrameHamiltonian(spec)(t);
}

inline HermitianMatrix rwa_frame(const ProtocolSpec &spec, double t)
{
    validate(spec);
    return RotatingFrameHamiltonian(spec)(t);
}

/// Smallest envelope time scale: σ for Gaussians, the step for sampled pulses.
inline double shortest_pulse_scale(const ProtocolSpec &spec)
{
    double scale = spec.t_m;
    for (const auto &d : spec.drives) {
        if (const auto *g = std::get_if<PulseEnvelope>(&d.envelope)) {
            scale = std::min(scale, g->sigma());
        } else {
            scale = std::min(scale, std::get<DiscretizedPulse>(d.envelope).dt());
        }
    }
    return scale;
}

/// Fastest angular frequency present in the lab-frame Hamiltonian.
inline double fastest_frequency(const ProtocolSpec &spec)
{
    double w = spec.spectrum.full_scale();
    for (const auto &d : spec.drives) {
        w = std::max(w, std::abs(d.carrier));
    }
    return w;
}

} // namespace qbattery
