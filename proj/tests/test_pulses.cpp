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

#include "qbattery/pulses.hpp"

using namespace qbattery;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

// Composite Simpson rule, independent of the erf closed form.
template <class F>
double simpson(F f, double a, double b, int n = 20000)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

} // namespace

TEST_CASE("make_gaussian places and scales the pulse", "[pulses]")
{
    const double g = 0.7;
    const auto env = make_gaussian(pi, g, 1.0, 0.125);
    CHECK(env.sigma() == 0.125);
    CHECK(env.center() == 0.5);
    CHECK(env.support().start == 0.0);
    CHECK(env.support().end == 1.0);
    CHECK_THAT(env.amplitude(), WithinRel(pi / (g * 0.125 * std::sqrt(2.0 * pi)), 1e-15));
    CHECK_THAT(env(0.5), WithinRel(env.amplitude(), 1e-15));
    CHECK_THAT(g * env.full_line_area(), WithinRel(pi, 1e-12));
}

TEST_CASE("zero area gives a zero envelope", "[pulses]")
{
    const auto env = make_gaussian(0.0, 1.0, 1.0, 0.125);
    CHECK(env.amplitude() == 0.0);
    CHECK(env(0.5) == 0.0);
    CHECK(accumulated_phase(env, 1.0, 1.0) == 0.0);
    for (double v : discretize(env, 0.01).samples()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("make_gaussian rejects invalid inputs", "[pulses]")
{
    CHECK_THROWS_AS(make_gaussian(pi, 1.0, 0.0, 0.125), ParameterError);
    CHECK_THROWS_AS(make_gaussian(pi, 0.0, 1.0, 0.125), ParameterError);
    CHECK_THROWS_AS(make_gaussian(pi, -1.0, 1.0, 0.125), ParameterError);
    CHECK_THROWS_AS(make_gaussian(-1.0, 1.0, 1.0, 0.125), ParameterError);
    CHECK_THROWS_AS(make_gaussian(pi, 1.0, 1.0, 0.26), ParameterError);
    CHECK_THROWS_AS(make_gaussian(pi, 1.0, 1.0, 0.0), ParameterError);
    CHECK_NOTHROW(make_gaussian(pi, 1.0, 1.0, 0.25));
    CHECK_THROWS_AS(PulseEnvelope(1.0, 0.5, 0.0, {0.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(PulseEnvelope(1.0, 1.5, 0.1, {0.0, 1.0}), ParameterError);
}

TEST_CASE("envelope vanishes outside its support", "[pulses]")
{
    const auto env = make_gaussian(pi, 1.0, 2.0, 0.1);
    const auto s = env.support();
    CHECK_THAT(s.start, WithinAbs(1.0 - 0.8, 1e-15));
    CHECK_THAT(s.end, WithinAbs(1.0 + 0.8, 1e-15));
    CHECK(env(s.start - 1e-12) == 0.0);
    CHECK(env(s.end + 1e-12) == 0.0);
    CHECK(env(-5.0) == 0.0);
    CHECK(env(s.start) > 0.0);
}

TEST_CASE("accumulated phase matches quadrature", "[pulses]")
{
    const double g = 1.3;
    const auto env = make_gaussian(pi, g, 1.0, 0.125);
    const double t0 = env.center();
    // Half the truncated area; the dropped tail before the support is 3.2e-5 of θ_m.
    CHECK_THAT(accumulated_phase(env, g, t0), WithinRel(0.5 * pi * 0.99993665751633376, 1e-14));
    CHECK_THAT(accumulated_phase(env, g, t0), WithinRel(pi / 2.0, 1e-4));

    // Full truncated window: π·erf(2√2).
    const double quad = g * simpson([&](double t) { return env(t); }, 0.0, 1.0);
    CHECK_THAT(quad, WithinRel(pi * 0.99993665751633376, 1e-10));
    CHECK_THAT(accumulated_phase(env, g, 1.0), WithinRel(quad, 1e-10));
    CHECK_THAT(accumulated_phase(env, g, 5.0), WithinRel(quad, 1e-10));

    for (double t : {0.1, 0.3, 0.55, 0.8}) {
        CHECK_THAT(accumulated_phase(env, g, t), WithinRel(g * simpson([&](double x) { return env(x); }, 0.0, t), 1e-9));
    }
    CHECK(accumulated_phase(env, g, -1.0) == 0.0);
}

TEST_CASE("accumulated phase reaches sin^2 = 0.95 at erf argument 0.753", "[pulses]")
{
    const auto env = make_gaussian(pi, 1.0, 1.0, 0.125);
    // sin²(θ/2) = 0.95 ⇔ θ = 2 asin(√0.95); erf(x) = 2θ/π − 1 → x ≈ 0.7532.
    const double theta = 2.0 * std::asin(std::sqrt(0.95));
    CHECK_THAT(theta, WithinAbs(2.691, 5e-4));
    double lo = 0.0;
    double hi = 2.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::erf(mid) < 2.0 * theta / pi - 1.0 ? lo : hi) = mid;
    }
    CHECK_THAT(lo, WithinAbs(0.753, 1e-3));
    const double t = env.center() + std::numbers::sqrt2 * env.sigma() * lo;
    CHECK_THAT(accumulated_phase(env, 1.0, t), WithinAbs(theta, 2e-4));
}

TEST_CASE("accumulated phase is monotone, bounded, linear and shift invariant", "[pulses]")
{
    const double g = 0.9;
    const auto env = make_gaussian(2.0, g, 1.0, 0.125);
    const auto big = make_gaussian(6.0, g, 1.0, 0.125);
    const auto moved = env.shifted(0.37);
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = -0.1 + 1.2 * i / 400.0;
        const double th = accumulated_phase(env, g, t);
        CHECK(th >= prev);
        CHECK(th <= 2.0);
        CHECK_THAT(accumulated_phase(big, g, t), WithinAbs(3.0 * th, 1e-14));
        CHECK_THAT(accumulated_phase(moved, g, t + 0.37), WithinAbs(th, 1e-14));
        prev = th;
    }
}

TEST_CASE("support normalization delivers the exact area", "[pulses]")
{
    for (double ratio : {0.0625, 0.125, 0.25}) {
        const auto env = make_gaussian(pi, 2.0, 3.0, ratio, AreaNormalization::support);
        CHECK_THAT(accumulated_phase(env, 2.0, 3.0), WithinRel(pi, 1e-14));
    }
}

TEST_CASE("discretized pulse integrates like the envelope", "[pulses]")
{
    const auto env = make_gaussian(pi, 1.0, 1.0, 0.125);
    const double exact = env.total_area();
    const auto fine = discretize(env, env.sigma() / 16.0);
    CHECK_FALSE(fine.undersampled());
    CHECK_THAT(fine.integral(), WithinRel(exact, 1e-6));
    CHECK_THAT(fine.support().start, WithinAbs(env.support().start, 1e-15));
    CHECK_THAT(fine.support().end, WithinAbs(env.support().end, 1e-12));

    const auto coarse = discretize(env, env.sigma() / 2.0);
    CHECK_THAT(coarse.integral(), WithinRel(fine.integral(), 1e-3));

    const auto under = discretize(env, env.sigma());
    CHECK(under.undersampled());
    CHECK_THROWS_AS(discretize(env, 0.0), ParameterError);

    const auto d = discretize(env, default_sample_step(1.0));
    CHECK(d.samples().size() == 256);
    CHECK_THAT(d.area_until(0.5), WithinRel(0.5 * d.integral(), 1e-12));
    CHECK(d(-0.01) == 0.0);
    CHECK(d(1.01) == 0.0);
}

TEST_CASE("envelope variant dispatches to either representation", "[pulses]")
{
    const auto env = make_gaussian(pi, 1.0, 1.0, 0.125);
    const Envelope a = env;
    const Envelope b = discretize(env, env.sigma() / 64.0);
    CHECK(envelope_value(a, 0.5) == env(0.5));
    CHECK_THAT(accumulated_phase(b, 1.0, 1.0), WithinRel(accumulated_phase(a, 1.0, 1.0), 1e-5));
    const Envelope s = shifted(b, 1.0);
    CHECK_THAT(envelope_support(s).start, WithinAbs(1.0, 1e-15));
    CHECK_THAT(envelope_area(s, 2.0), WithinRel(envelope_area(b, 1.0), 1e-14));
}
