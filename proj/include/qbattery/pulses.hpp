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

/// Gaussian drive envelopes, their accumulated phases, and sampled waveforms.
///
/// Time is in ns and couplings in rad/ns throughout. Gaussian envelopes are
/// truncated to center ± 4σ (intersected with the measurement window) so that
/// consecutive pulses have strictly disjoint supports.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "qbattery/errors.hpp"

namespace qbattery {

inline constexpr double kTruncationSigmas = 4.0;
inline constexpr double kMaxSigmaRatio = 0.25;

/// Closed interval [start, end].
struct TimeInterval {
    double start = 0.0;
    double end = 0.0;

    [[nodiscard]] double length() const noexcept { return end - start; }
    [[nodiscard]] bool contains(double t) const noexcept { return t >= start && t <= end; }
    [[nodiscard]] bool overlaps(const TimeInterval &other) const noexcept
    {
        return start < other.end && other.start < end;
    }
};

/// How the peak amplitude of a Gaussian is derived from the target phase.
enum class AreaNormalization {
    full_line, ///< ∫ over the whole real line equals θ_m (truncation loses ~6e-5)
    support,   ///< ∫ over the truncated support equals θ_m exactly
};

/// f(t) = amplitude · exp(-(t-center)²/(2σ²)) on `support`, zero elsewhere.
class PulseEnvelope {
  public:
    PulseEnvelope(double amplitude, double center, double sigma, TimeInterval support)
        : amplitude_(amplitude), center_(center), sigma_(sigma), support_(support)
    {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw ParameterError("pulse sigma must be positive, got " + std::to_string(sigma));
        }
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
            throw ParameterError("pulse amplitude must be finite and >= 0");
        }
        if (!(support.start < center && center < support.end)) {
            throw ParameterError("pulse center must lie strictly inside its support");
        }
    }

    [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
    [[nodiscard]] double center() const noexcept { return center_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }
    [[nodiscard]] TimeInterval support() const noexcept { return support_; }

    [[nodiscard]] double operator()(double t) const noexcept
    {
        if (!support_.contains(t)) {
            return 0.0;
        }
        const double x = (t - center_) / sigma_;
        return amplitude_ * std::exp(-0.5 * x * x);
    }

    /// ∫ f(τ) dτ from the support start to t (clamped to the support).
    [[nodiscard]] double area_until(double t) const noexcept
    {
        if (t <= support_.start || amplitude_ == 0.0) {
            return 0.0;
        }
        const double upper = std::min(t, support_.end);
        return half_width_factor() * (erf_arg(upper) - erf_arg(support_.start));
    }

    [[nodiscard]] double total_area() const noexcept { return area_until(support_.end); }

    /// ∫ f over the whole real line, ignoring truncation.
    [[nodiscard]] double full_line_area() const noexcept
    {
        return amplitude_ * sigma_ * std::sqrt(2.0 * std::numbers::pi);
    }

    [[nodiscard]] PulseEnvelope shifted(double dt) const
    {
        return {amplitude_, center_ + dt, sigma_, {support_.start + dt, support_.end + dt}};
    }

  private:
    [[nodiscard]] double erf_arg(double t) const noexcept
    {
        return std::erf((t - center_) / (std::numbers::sqrt2 * sigma_));
    }

    // amplitude · σ · √(π/2): the prefactor of the erf antiderivative.
    [[nodiscard]] double half_width_factor() const noexcept
    {
        return amplitude_ * sigma_ * std::sqrt(0.5 * std::numbers::pi);
    }

    double amplitude_;
    double center_;
    double sigma_;
    TimeInterval support_;
};

/// Intended total phase of a pulse and the coupling that realizes it.
struct PhaseTarget {
    double theta_m = 0.0;
    double coupling = 1.0;

    /// Peak amplitude 𝒩 = θ_m / (g σ √(2π)).
    [[nodiscard]] double amplitude(double sigma) const
    {
        return theta_m / (coupling * sigma * std::sqrt(2.0 * std::numbers::pi));
    }
};

/// Gaussian centered at t_m/2 with σ = sigma_ratio·t_m, support [0, t_m].
inline PulseEnvelope make_gaussian(double theta_m, double g, double t_m, double sigma_ratio,
                                   AreaNormalization normalization = AreaNormalization::full_line)
{
    if (!(theta_m >= 0.0) || !std::isfinite(theta_m)) {
        throw ParameterError("theta_m must be finite and >= 0");
    }
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw ParameterError("coupling g must be positive");
    }
    if (!(t_m > 0.0) || !std::isfinite(t_m)) {
        throw ParameterError("t_m must be positive");
    }
    if (!(sigma_ratio > 0.0) || sigma_ratio > kMaxSigmaRatio) {
        throw ParameterError("sigma_ratio must lie in (0, 1/4], got " + std::to_string(sigma_ratio));
    }
    const double sigma = sigma_ratio * t_m;
    const double center = 0.5 * t_m;
    const TimeInterval support{std::max(0.0, center - kTruncationSigmas * sigma),
                               std::min(t_m, center + kTruncationSigmas * sigma)};

    double amplitude = PhaseTarget{theta_m, g}.amplitude(sigma);
    if (normalization == AreaNormalization::support) {
        const double s = std::numbers::sqrt2 * sigma;
        const double kept =
            0.5 * (std::erf((support.end - center) / s) - std::erf((support.start - center) / s));
        amplitude /= kept;
    }
    return {amplitude, center, sigma, support};
}

/// θ(t) = g ∫₀ᵗ f(τ) dτ over the truncated support.
inline double accumulated_phase(const PulseEnvelope &envelope, double g, double t)
{
    return g * envelope.area_until(t);
}

/// Piecewise-constant waveform: sample k holds on [start + k·dt, start + (k+1)·dt).
class DiscretizedPulse {
  public:
    DiscretizedPulse(double start, double dt, std::vector<double> samples, bool undersampled = false)
        : start_(start), dt_(dt), samples_(std::move(samples)), undersampled_(undersampled)
    {
        if (!(dt > 0.0)) {
            throw ParameterError("sample step must be positive");
        }
        if (samples_.empty()) {
            throw ParameterError("a sampled pulse needs at least one sample");
        }
    }

    [[nodiscard]] double start() const noexcept { return start_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] const std::vector<double> &samples() const noexcept { return samples_; }
    /// Set when the step was not finer than σ.
    [[nodiscard]] bool undersampled() const noexcept { return undersampled_; }

    [[nodiscard]] TimeInterval support() const noexcept
    {
        return {start_, start_ + dt_ * static_cast<double>(samples_.size())};
    }

    [[nodiscard]] double operator()(double t) const noexcept
    {
        const auto s = support();
        if (!s.contains(t)) {
            return 0.0;
        }
        return samples_[cell_index(t)];
    }

    [[nodiscard]] double area_until(double t) const noexcept
    {
        const auto s = support();
        if (t <= s.start) {
            return 0.0;
        }
        if (t >= s.end) {
            return integral();
        }
        const std::size_t k = cell_index(t);
        double area = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            area += samples_[i];
        }
        area *= dt_;
        return area + samples_[k] * (t - (start_ + dt_ * static_cast<double>(k)));
    }

    /// Σ samples · dt.
    [[nodiscard]] double integral() const noexcept
    {
        double sum = 0.0;
        for (double v : samples_) {
            sum += v;
        }
        return sum * dt_;
    }

    [[nodiscard]] DiscretizedPulse shifted(double dt) const
    {
        return {start_ + dt, dt_, samples_, undersampled_};
    }

  private:
    [[nodiscard]] std::size_t cell_index(double t) const noexcept
    {
        const auto k = static_cast<std::size_t>(std::floor((t - start_) / dt_));
        return std::min(k, samples_.size() - 1);
    }

    double start_;
    double dt_;
    std::vector<double> samples_;
    bool undersampled_;
};

/// Default sampling step for a protocol of duration t_m.
[[nodiscard]] inline double default_sample_step(double t_m) noexcept { return t_m / 256.0; }

/// Midpoint samples over the support. The step is shrunk to span/⌈span/dt⌉ so
/// the cells tile the support exactly.
inline DiscretizedPulse discretize(const PulseEnvelope &envelope, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ParameterError("discretization step must be positive");
    }
    const auto support = envelope.support();
    const auto cells =
        static_cast<std::size_t>(std::max(1.0, std::ceil(support.length() / dt - 1e-9)));
    const double step = support.length() / static_cast<double>(cells);
    std::vector<double> samples(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        samples[k] = envelope(support.start + (static_cast<double>(k) + 0.5) * step);
    }
    return {support.start, step, std::move(samples), dt >= envelope.sigma()};
}

/// Either an analytic Gaussian or a tabulated waveform.
using Envelope = std::variant<PulseEnvelope, DiscretizedPulse>;

inline double envelope_value(const Envelope &e, double t)
{
    return std::visit([t](const auto &env) { return env(t); }, e);
}

inline double envelope_area(const Envelope &e, double t)
{
    return std::visit([t](const auto &env) { return env.area_until(t); }, e);
}

inline TimeInterval envelope_support(const Envelope &e)
{
    return std::visit([](const auto &env) { return env.support(); }, e);
}

inline Envelope shifted(const Envelope &e, double dt)
{
    return std::visit([dt](const auto &env) -> Envelope { return env.shifted(dt); }, e);
}

inline double accumulated_phase(const Envelope &e, double g, double t)
{
    return g * envelope_area(e, t);
}

} // namespace qbattery
