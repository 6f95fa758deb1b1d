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

#include <cmath>
#include <numbers>

#include <catch_amalgamated.hpp>

#include "qbattery/analytic.hpp"
#include "qbattery/integrator.hpp"

using namespace qbattery;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

LevelSpectrum transmon() { return LevelSpectrum::three_level(4.75, 9.25); }

double max_population_error(const Trajectory &traj, const ProtocolSpec &spec)
{
    double err = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto num = traj.state(i).populations();
        const auto ref = analytic_state(traj.times[i], spec).populations();
        for (std::size_t k = 0; k < 3; ++k) {
            err = std::max(err, std::abs(num[k] - ref[k]));
        }
    }
    return err;
}

double energy(const Amplitudes &a, const LevelSpectrum &s)
{
    return s.delta() * std::norm(a[1]) + s.delta_max() * std::norm(a[2]);
}

// Qubit with Δ = 2π·5 rad/ns and g = 0.02Δ, θ_m = π, σ = t_m/8 (𝒩 = 1).
ProtocolSpec weak_qubit()
{
    const double d = 2.0 * pi * 5.0;
    const double g = 0.02 * d;
    const double sigma = pi / (g * std::sqrt(2.0 * pi));
    return qubit_protocol(LevelSpectrum::two_level(d), PulseSchedule{8.0 * sigma, 0.125, g}, pi);
}

} // namespace

TEST_CASE("zero drive leaves the state unchanged", "[integrator]")
{
    const PulseSchedule pulse{1.0, 0.125, 1.0};
    const auto spec = simultaneous_protocol(transmon(), pulse, 0.0);
    const StateVector start(Amplitudes(0.6, Complex(0.0, 0.8), 0.0));
    const auto traj = evolve(spec, Frame::rotating, start, default_step(spec, Frame::rotating));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.amplitudes[i] == start.amplitudes());
    }
    CHECK(self_convergence(spec, Frame::rotating, start, 0.125 / 16.0) == 0.0);
}

TEST_CASE("rotating-frame integration reproduces the closed forms", "[integrator]")
{
    const PulseSchedule pulse{1.0, 0.125, 1.0};
    SECTION("qubit")
    {
        for (double a : {1.0, 0.96}) {
            const auto spec = qubit_protocol(LevelSpectrum::two_level(1.0), pulse, pi, a, pi / 4);
            const auto traj = evolve(spec, Frame::rotating, spec.initial, 0.125 / 32.0);
            CHECK(traj.dim == 2);
            CHECK(max_population_error(traj, spec) <= 1e-6);
            CHECK(traj.max_norm_drift <= 1e-9);
        }
    }
    SECTION("sequential")
    {
        const auto spec = sequential_protocol(transmon(), pulse, pi, pi);
        const auto traj = evolve(spec, Frame::rotating, spec.initial, 0.0625 / 32.0);
        CHECK(max_population_error(traj, spec) <= 1e-6);
        CHECK(traj.max_norm_drift <= 1e-9);
    }
    SECTION("simultaneous")
    {
        const auto spec = simultaneous_protocol(transmon(), pulse, pi);
        const auto traj = evolve(spec, Frame::rotating, spec.initial, 0.125 / 32.0);
        CHECK(max_population_error(traj, spec) <= 1e-6);
        const auto p = traj.final_state().populations();
        const auto ref = simultaneous_state(simultaneous_phase(1.0, spec)).populations();
        CHECK_THAT(p[2], WithinAbs(ref[2], 1e-6));
        CHECK_THAT(p[2], WithinAbs(1.0, 1e-6));
        CHECK(traj.max_norm_drift <= 1e-9);
    }
}

TEST_CASE("self convergence", "[integrator]")
{
    const PulseSchedule pulse{1.0, 0.125, 1.0};
    const auto sim = simultaneous_protocol(transmon(), pulse, pi);
    CHECK(self_convergence(sim, Frame::rotating, sim.initial, 0.125 / 16.0) <= 1e-8);

    const auto q = weak_qubit();
    const double period = 2.0 * pi / q.spectrum.delta();
    CHECK(self_convergence(q, Frame::lab, q.initial, period / 20.0) <= 1e-5);
}

TEST_CASE("step-size preconditions", "[integrator]")
{
    const PulseSchedule pulse{1.0, 0.125, 1.0};
    const auto sim = simultaneous_protocol(transmon(), pulse, pi);
    CHECK_NOTHROW(check_step(sim, Frame::rotating, 0.125 / 16.0));
    CHECK_THROWS_AS(check_step(sim, Frame::rotating, 0.125 / 15.0), ResolutionError);
    CHECK_THROWS_AS(check_step(sim, Frame::rotating, 0.0), ResolutionError);
    const double period = 2.0 * pi / 9.25;
    const auto slow = simultaneous_protocol(transmon(), PulseSchedule{10.0, 0.125, 1.0}, pi);
    CHECK_NOTHROW(check_step(slow, Frame::lab, period / 20.0));
    CHECK_THROWS_AS(check_step(slow, Frame::lab, period / 19.0), ResolutionError);
    CHECK_NOTHROW(check_step(slow, Frame::rotating, period / 19.0));
    CHECK_THROWS_AS(evolve(sim, Frame::rotating, sim.initial, 0.1), ResolutionError);
    CHECK(default_step(sim, Frame::lab) <= period / 40.0);
    CHECK_THROWS_AS(evolve(sim, Frame::rotating, StateVector(Amplitudes(1.0, 1.0, 0.0)), 0.001),
                    NormalizationError);
}

TEST_CASE("norm drift guard", "[integrator]")
{
    const auto q = weak_qubit();
    const double period = 2.0 * pi / q.spectrum.delta();
    const auto magnus = evolve(q, Frame::lab, q.initial, period / 20.0);
    CHECK(magnus.max_norm_drift <= 1e-9);
    PropagationOptions rk4;
    rk4.scheme = Scheme::rk4;
    // Classical RK4 is not norm preserving: on the carrier-resolved grid it
    // stays under the failure threshold but misses the 1e-9 drift target.
    const auto classic = evolve(q, Frame::lab, q.initial, period / 20.0, rk4);
    CHECK(classic.max_norm_drift > 1e-9);
    CHECK(classic.max_norm_drift <= kFailureDrift);
    PropagationOptions strict = rk4;
    strict.failure_drift = 1e-9;
    CHECK_THROWS_AS(evolve(q, Frame::lab, q.initial, period / 20.0, strict), IntegrationError);
    const auto slow = evolve(q, Frame::rotating, q.initial, q.t_m / 8.0 / 32.0, rk4);
    CHECK(slow.max_norm_drift <= 1e-6);
    CHECK(max_population_error(slow, q) <= 1e-5);
}

TEST_CASE("time reversal recovers the initial state", "[integrator]")
{
    const PulseSchedule pulse{1.0, 0.125, 1.0};
    for (const auto &spec : {simultaneous_protocol(transmon(), pulse, 0.8 * pi),
                             adiabatic_protocol(LevelSpectrum::three_level(4.75, 9.25), pulse, pi)}) {
        const RotatingFrameHamiltonian h(spec);
        const StateVector start(Amplitudes(0.6, 0.0, Complex(0.0, 0.8)));
        const std::size_t steps = 512;
        const auto fwd = propagate(h, 0.0, spec.t_m, steps, start);
        const auto back = propagate(
            [&](double s) {
                HermitianMatrix m = h(spec.t_m - s);
                m.matrix = -m.matrix;
                return m;
            },
            0.0, spec.t_m, steps, fwd.final_state());
        CHECK((back.amplitudes.back() - start.amplitudes()).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("overlapping pulses converge to the disjoint result", "[integrator]")
{
    const PulseSchedule pulse{1.0, 0.125, 1.0};
    const auto spectrum = transmon();
    const auto seq = sequential_protocol(spectrum, pulse, pi, pi);
    const double reference = energy(analytic_state(1.0, seq).amplitudes(), spectrum);
    double prev = std::numeric_limits<double>::infinity();
    for (double delay : {0.3, 0.4, 0.45, 0.5}) {
        const auto spec = staggered_protocol(spectrum, pulse, pi, pi, delay);
        const auto traj = evolve(spec, Frame::rotating, spec.initial, 0.0625 / 32.0);
        const double diff = std::abs(energy(traj.amplitudes.back(), spectrum) - reference);
        CHECK(diff <= prev);
        prev = diff;
    }
    CHECK(prev <= 1e-4);
    const auto apart = staggered_protocol(spectrum, pulse, pi, pi, 0.6);
    const auto traj = evolve(apart, Frame::rotating, apart.initial, 0.0625 / 32.0);
    CHECK_THAT(energy(traj.amplitudes.back(), spectrum), WithinAbs(reference, 1e-4));
}

TEST_CASE("average-frequency drive departs from the adiabatic formula", "[integrator]")
{
    // δ·t_m = 40 with Θ_m = π and g𝒩 = δ: adiabaticity fails.
    const auto spectrum = LevelSpectrum::three_level(1000.0, 1960.0);
    const double delta = spectrum.half_anharmonicity();
    REQUIRE(delta == 20.0);
    const double sigma = 0.125;
    const double g = std::sqrt(pi) / (sigma * delta); // 𝒩 = √π/σ for Θ_m = π (θ_m = √2π)
    const auto spec = adiabatic_protocol(spectrum, PulseSchedule{2.0, 0.0625, g}, pi);
    const auto traj = evolve(spec, Frame::rotating, spec.initial, 2.0 * 0.0625 / 32.0);
    const double numeric = traj.final_state().populations()[2];
    const double formula = adiabatic_state(2.0, spec).populations()[2];
    CHECK(std::abs(numeric - formula) > 1e-2);
    CHECK(traj.max_norm_drift <= 1e-9);
}

TEST_CASE("lab to rotating frame", "[integrator]")
{
    const auto s = transmon();
    const StateVector lab(Amplitudes(std::polar(0.6, 0.0), std::polar(0.8, -4.75 * 2.0), 0.0), 3, Frame::lab);
    const auto rot = to_rotating_frame(lab, s, 2.0);
    CHECK(rot.frame() == Frame::rotating);
    CHECK(std::abs(rot.c1() - Complex(0.8)) <= 1e-15);
}
