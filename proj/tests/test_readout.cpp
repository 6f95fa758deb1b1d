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

#include "qbattery/readout.hpp"

using namespace qbattery;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

LevelSpectrum transmon() { return LevelSpectrum::three_level(4.75, 9.25); }

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi); }
double cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// P(X < b, Y < b) for standard normals with correlation ρ = 1/2: the
// probability that a point stays inside its cell of an equilateral layout.
double cell_probability(double b)
{
    const double rho = 0.5, k = std::sqrt(1.0 - rho * rho);
    const int n = 20000;
    const double lo = -10.0, dx = (b - lo) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (i + 0.5) * dx;
        sum += phi(x) * cdf((b - rho * x) / k);
    }
    return sum * dx;
}

std::array<double, 3> accuracies(const ClusterModel &model, const Classifier &c, std::size_t per_label,
                                 std::uint64_t seed)
{
    std::array<double, 3> acc{};
    for (int l = 0; l < 3; ++l) {
        std::size_t hits = 0;
        for (std::size_t k = 0; k < per_label; ++k) {
            CounterRng rng(seed, 3 * k + static_cast<std::uint64_t>(l));
            hits += c.classify(synthesize_iq(l, model, rng)) == l;
        }
        acc[static_cast<std::size_t>(l)] = static_cast<double>(hits) / static_cast<double>(per_label);
    }
    return acc;
}

SweepSpec simultaneous_sweep()
{
    SweepSpec s;
    s.kind = ProtocolKind::simultaneous;
    s.spectrum = transmon();
    return s;
}

} // namespace

TEST_CASE("counter RNG", "[readout]")
{
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
    }
    CounterRng u(1, 0);
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double x = u.uniform();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        mean += x;
    }
    CHECK_THAT(mean / 100000.0, WithinAbs(0.5, 4.0 * std::sqrt(1.0 / 12.0 / 100000.0)));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("measure populations", "[readout]")
{
    const auto p0 = measure_populations(StateVector::basis(0));
    CHECK(p0 == Populations{1.0, 0.0, 0.0});
    const auto half = measure_populations(simultaneous_state(pi / 2));
    CHECK_THAT(half[0], WithinAbs(0.25, 1e-15));
    CHECK_THAT(half[1], WithinAbs(0.5, 1e-15));
    CHECK_THAT(half[2], WithinAbs(0.25, 1e-15));
    const auto full = measure_populations(simultaneous_state(pi));
    CHECK_THAT(full[2], WithinAbs(1.0, 1e-15));
    CHECK_THAT(full[0] + full[1] + full[2], WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(measure_populations(StateVector(Amplitudes(1.0, 1.0, 0.0))), NormalizationError);
}

TEST_CASE("sample shots", "[readout]")
{
    const auto all0 = sample_shots({1.0, 0.0, 0.0}, 777, 5);
    CHECK(all0.counts == Counts{777, 0, 0});
    CHECK(sample_shots({0.0, 0.0, 1.0}, 10, 5).counts == Counts{0, 0, 10});

    const Populations p{0.25, 0.5, 0.25};
    for (std::uint64_t seed : {1ULL, 2ULL, 12345ULL}) {
        const auto r = sample_shots(p, 1024, seed);
        CHECK(r.counts[0] + r.counts[1] + r.counts[2] == 1024);
        CHECK(std::abs(r.fractions()[1] - 0.5) <= 3.0 * std::sqrt(0.25 / 1024.0));
        CHECK(sample_shots(p, 1024, seed).counts == r.counts);
        CHECK(r.seed == seed);
    }
    CHECK(sample_shots(p, 1024, 1).counts != sample_shots(p, 1024, 2).counts);

    CHECK_THROWS_AS(sample_shots({0.5, 0.6, 0.0}, 10, 1), DistributionError);
    CHECK_THROWS_AS(sample_shots({1.2, -0.2, 0.0}, 10, 1), DistributionError);
    CHECK_THROWS_AS(sample_shots({NAN, 1.0, 0.0}, 10, 1), DistributionError);
    CHECK_THROWS_AS(sample_shots(p, 0, 1), ParameterError);
}

TEST_CASE("synthesized IQ clouds", "[readout]")
{
    const auto ideal = ideal_clusters();
    CounterRng rng(1, 0);
    for (int l = 0; l < 3; ++l) {
        const auto p = synthesize_iq(l, ideal, rng);
        CHECK(p.i == ideal.centers[static_cast<std::size_t>(l)].i);
        CHECK(p.q == ideal.centers[static_cast<std::size_t>(l)].q);
    }
    CHECK_THROWS_AS(synthesize_iq(3, ideal, rng), ParameterError);

    const auto model = noisy_clusters();
    const int n = 10000;
    for (int l = 0; l < 3; ++l) {
        const auto ul = static_cast<std::size_t>(l);
        const double s = model.spread[ul];
        double si = 0, sq = 0, ss = 0;
        std::vector<IQPoint> pts;
        for (int k = 0; k < n; ++k) {
            CounterRng r(99, static_cast<std::uint64_t>(k));
            pts.push_back(synthesize_iq(l, model, r));
            si += pts.back().i;
            sq += pts.back().q;
        }
        si /= n;
        sq /= n;
        CHECK(std::abs(si - model.centers[ul].i) <= 4.0 * s / std::sqrt(n));
        CHECK(std::abs(sq - model.centers[ul].q) <= 4.0 * s / std::sqrt(n));
        for (const auto &p : pts) {
            ss += (p.i - si) * (p.i - si) + (p.q - sq) * (p.q - sq);
        }
        CHECK_THAT(std::sqrt(ss / (2.0 * (n - 1))), WithinRel(s, 0.05));
    }
}

TEST_CASE("classifier", "[readout]")
{
    const IQPoint a{0, 0}, b{1, 2}, c{-3, 1};
    const auto single = train_classifier({{0, a}, {1, b}, {2, c}});
    CHECK(single.centroids()[1].i == 1.0);
    CHECK(single.centroids()[2].q == 1.0);
    CHECK(single.classify(a) == 0);
    CHECK(single.classify(b) == 1);
    CHECK(single.classify(c) == 2);

    // Midpoint of 0 and 1 is a tie.
    const Classifier line({IQPoint{0, 0}, IQPoint{2, 0}, IQPoint{0, 10}});
    CHECK(line.classify({1, 0}) == 0);
    const Classifier line2({IQPoint{0, 10}, IQPoint{0, 0}, IQPoint{2, 0}});
    CHECK(line2.classify({1, 0}) == 1);

    CHECK_THROWS_AS(train_classifier({{0, a}, {1, b}}), TrainingError);
    CHECK_THROWS_AS(train_classifier({{0, a}, {1, b}, {3, c}}), TrainingError);

    // Translating everything leaves every decision unchanged.
    const IQPoint shift{17.5, -4.25};
    auto moved = single.centroids();
    for (auto &m : moved) {
        m = {m.i + shift.i, m.q + shift.q};
    }
    const Classifier translated(moved);
    CounterRng rng(3, 0);
    for (int k = 0; k < 2000; ++k) {
        const IQPoint p{8.0 * rng.uniform() - 4.0, 8.0 * rng.uniform() - 4.0};
        REQUIRE(single.classify(p) == translated.classify({p.i + shift.i, p.q + shift.q}));
    }
}

TEST_CASE("classifier accuracy", "[readout]")
{
    const auto wide = equilateral_clusters(8.0, {1.0, 1.0, 1.0});
    const auto trained = calibrate(wide, 11);
    for (std::size_t l = 0; l < 3; ++l) {
        CHECK(trained.classify(wide.centers[l]) == static_cast<int>(l));
    }
    for (double acc : accuracies(wide, trained, 1024, 21)) {
        CHECK(acc >= 0.99);
    }

    const auto noisy = noisy_clusters();
    const auto clf = calibrate(noisy, 11);
    const auto acc = accuracies(noisy, clf, 100000, 22);
    const std::array<double, 3> fixture{0.955, 0.957, 0.900};
    for (std::size_t l = 0; l < 3; ++l) {
        const double oracle = cell_probability(3.0 / noisy.spread[l]);
        CHECK_THAT(oracle, WithinAbs(fixture[l], 1e-3));
        CHECK_THAT(acc[l], WithinAbs(oracle, 0.005));
    }
}

TEST_CASE("energy estimate", "[readout]")
{
    const auto s = transmon();
    ShotRecord r;
    r.shots = 1024;
    r.counts = {0, 0, 1024};
    CHECK(estimate_energy(r, s) == 9.25);
    CHECK(energy_stderr(r, s) == 0.0);
    r.counts = {1024, 0, 0};
    CHECK(estimate_energy(r, s) == 0.0);
    r.counts = {256, 512, 256};
    CHECK_THAT(estimate_energy(r, s), WithinRel(4.75 / 2 + 9.25 / 4, 1e-15));
    const double second = 4.75 * 4.75 / 2 + 9.25 * 9.25 / 4;
    const double mean = 4.75 / 2 + 9.25 / 4;
    CHECK_THAT(energy_stderr(r, s), WithinRel(std::sqrt((second - mean * mean) / 1024), 1e-12));

    // Linear in the counts.
    ShotRecord x, y, sum;
    x.shots = y.shots = 100;
    sum.shots = 200;
    x.counts = {10, 30, 60};
    y.counts = {70, 20, 10};
    sum.counts = {80, 50, 70};
    CHECK_THAT(estimate_energy(sum, s), WithinRel(0.5 * (estimate_energy(x, s) + estimate_energy(y, s)), 1e-15));
    ShotRecord empty;
    CHECK_THROWS_AS(estimate_energy(empty, s), ParameterError);
}

TEST_CASE("noise-free end to end sweep", "[readout]")
{
    const auto sweep = simultaneous_sweep();
    ReadoutSettings settings;
    settings.shots = 1024;
    settings.engine = Engine::analytic;
    const auto top = end_to_end_sweep(sweep, {pi}, settings);
    CHECK(top.energy[0] == 9.25);
    CHECK(top.stderr_[0] == 0.0);

    settings.shots = 100000;
    const auto grid = default_eta_grid(SweepVariable::big_theta_m, 9);
    const auto exact = sweep_final_energy(sweep, grid, Engine::analytic);
    const auto rec = end_to_end_sweep(sweep, grid, settings);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK_THAT(rec.energy[i], WithinAbs(exact.energy[i], 1e-2 * 9.25));
        CHECK(rec.energy[i] >= 0.0);
        CHECK(rec.energy[i] <= 9.25);
    }
}

TEST_CASE("noisy readout caps the recovered peak", "[readout]")
{
    const auto sweep = simultaneous_sweep();
    ReadoutSettings settings;
    settings.model = noisy_clusters();
    settings.engine = Engine::analytic;
    settings.shots = 20000;
    const auto rec = end_to_end_sweep(sweep, {pi}, settings);
    // |2⟩ misassigned evenly to 0 and 1 by symmetry.
    const double acc2 = cell_probability(3.0 / settings.model.spread[2]);
    const double expected = acc2 + 0.5 * (1.0 - acc2) * 4.75 / 9.25;
    CHECK_THAT(rec.energy[0] / 9.25, WithinAbs(expected, 4.0 * rec.stderr_[0] / 9.25 + 0.005));
    CHECK(rec.energy[0] / 9.25 >= 0.90);
    CHECK(rec.energy[0] / 9.25 <= 0.94);
}

TEST_CASE("readout is deterministic and order independent", "[readout]")
{
    const auto sweep = simultaneous_sweep();
    ReadoutSettings settings;
    settings.model = noisy_clusters();
    settings.seed = 42;
    settings.keep_points = true;
    const auto grid = default_eta_grid(SweepVariable::big_theta_m, 5);
    const auto a = readout_sweep(sweep, grid, settings);
    const auto b = readout_sweep(sweep, grid, settings);
    REQUIRE(a.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a[i].classified.counts == b[i].classified.counts);
        CHECK(a[i].energy == b[i].energy);
        CHECK(a[i].points.size() == settings.shots);
        CHECK(a[i].assigned == b[i].assigned);
    }
    // Point 3 evaluated alone reproduces its slot in the sweep.
    const auto clf = calibrate(settings.model, derive_seed(42, 0));
    const auto alone = read_out(a[3].populations, sweep.spectrum, clf, settings, derive_seed(42, 4));
    CHECK(alone.classified.counts == a[3].classified.counts);
    CHECK(alone.energy == a[3].energy);

    settings.seed = 43;
    const auto c = readout_sweep(sweep, grid, settings);
    CHECK(c[2].classified.counts != a[2].classified.counts);
}
