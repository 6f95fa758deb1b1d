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

/// Run configuration: a sectioned key = value file.
///
///     [device]       E_C, E_J | omega1, omega2; levels
///     [protocol]     kind, theta_m | phi_m | theta1_m, theta2_m | Theta_m,
///                    t_m, sigma_ratio, coupling, a, phi, delay
///     [integrator]   frame, step, scheme, engine
///     [sweep]        points, start, stop
///     [charging]     threshold, preset, time_unit
///     [readout]      enabled, shots, seed, calibration_shots, model,
///                    center0..2 ("I, Q"), spread, spread0..2, dump_points
///     [output]       dir, units, plot, prefix
///
/// Angles accept multiples of pi: `pi`, `2pi`, `0.5*pi`, `pi/2`. Unknown
/// sections or keys are errors; every error message starts with its field path.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qbattery/device.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/hamiltonian.hpp"
#include "qbattery/integrator.hpp"
#include "qbattery/observables.hpp"
#include "qbattery/readout.hpp"

namespace qbattery {

enum class Units { fraction, rad_per_ns, micro_ev };

inline const char *to_string(Units u)
{
    switch (u) {
    case Units::fraction:
        return "fraction";
    case Units::rad_per_ns:
        return "rad/ns";
    case Units::micro_ev:
        return "ueV";
    }
    return "?";
}

inline std::optional<Units> parse_units(std::string_view s)
{
    if (s == "fraction") {
        return Units::fraction;
    }
    if (s == "rad/ns") {
        return Units::rad_per_ns;
    }
    if (s == "ueV" || s == "μeV" || s == "micro_ev") {
        return Units::micro_ev;
    }
    return std::nullopt;
}

/// Energy in the requested output units.
inline double convert_energy(double e, double full_scale, Units u)
{
    switch (u) {
    case Units::fraction:
        return e / full_scale;
    case Units::rad_per_ns:
        return e;
    case Units::micro_ev:
        return energy_to_micro_ev(e);
    }
    return e;
}

struct DeviceConfig {
    std::optional<TransmonParams> transmon;
    std::optional<double> omega1;
    std::optional<double> omega2;
    std::optional<int> levels;
};

struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::qubit_resonant;
    std::optional<double> theta_m;
    std::optional<double> phi_m;
    std::optional<double> theta1_m;
    std::optional<double> theta2_m;
    std::optional<double> big_theta_m;
    double t_m = 1.0;
    double sigma_ratio = 0.125;
    double coupling = 1.0;
    double a = 1.0;
    double phi = 0.0;
    std::optional<double> delay;
};

struct IntegratorConfig {
    Frame frame = Frame::rotating;
    std::optional<double> step;
    Scheme scheme = Scheme::magnus4;
    std::optional<Engine> engine;
};

struct SweepConfig {
    std::size_t points = kDefaultSweepPoints;
    std::optional<double> start;
    std::optional<double> stop;
};

struct ChargingConfig {
    double threshold = 0.95;
    bool table1 = false;
    std::string time_unit = "ns";
};

struct ReadoutConfig {
    bool enabled = false;
    std::size_t shots = 1024;
    std::uint64_t seed = 1;
    std::size_t calibration_shots = kCalibrationShots;
    ClusterModel model = ideal_clusters();
    bool dump_points = true;
};

struct OutputConfig {
    std::string dir = ".";
    Units units = Units::fraction;
    bool plot = false;
    std::string prefix;
};

struct RunConfig {
    std::optional<DeviceConfig> device;
    std::optional<ProtocolConfig> protocol;
    IntegratorConfig integrator;
    SweepConfig sweep;
    ChargingConfig charging;
    ReadoutConfig readout;
    OutputConfig output;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_plain_number(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

/// A number, optionally times pi and optionally divided by a number.
inline std::optional<double> parse_number(std::string_view s)
{
    s = trim(s);
    const auto at = s.find("pi");
    if (at == std::string_view::npos) {
        return parse_plain_number(s);
    }
    std::string_view head = trim(s.substr(0, at));
    std::string_view tail = trim(s.substr(at + 2));
    double factor = 1.0;
    if (!head.empty() && head.back() == '*') {
        head = trim(head.substr(0, head.size() - 1));
        if (head.empty()) {
            return std::nullopt;
        }
    }
    if (head == "-") {
        factor = -1.0;
    } else if (!head.empty()) {
        auto f = parse_plain_number(head);
        if (!f) {
            return std::nullopt;
        }
        factor = *f;
    }
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            return std::nullopt;
        }
        auto d = parse_plain_number(tail.substr(1));
        if (!d || *d == 0.0) {
            return std::nullopt;
        }
        divisor = *d;
    }
    return factor * std::numbers::pi / divisor;
}

class Section {
  public:
    Section(std::string name, const boost::property_tree::ptree &tree, std::set<std::string> allowed)
        : name_(std::move(name)), tree_(tree)
    {
        for (const auto &[key, value] : tree_) {
            if (!value.empty()) {
                throw ConfigError(path(key) + ": nested keys are not supported");
            }
            if (!allowed.contains(key)) {
                throw ConfigError(path(key) + ": unknown key");
            }
        }
    }

    [[nodiscard]] std::string path(const std::string &key) const { return name_ + "." + key; }
    [[nodiscard]] bool has(const std::string &key) const { return tree_.find(key) != tree_.not_found(); }

    [[nodiscard]] std::optional<std::string> text(const std::string &key) const
    {
        auto it = tree_.find(key);
        if (it == tree_.not_found()) {
            return std::nullopt;
        }
        return std::string(trim(it->second.data()));
    }

    [[nodiscard]] std::optional<double> number(const std::string &key) const
    {
        auto t = text(key);
        if (!t) {
            return std::nullopt;
        }
        auto v = parse_number(*t);
        if (!v) {
            throw ConfigError(path(key) + ": expected a number, got '" + *t + "'");
        }
        return v;
    }

    [[nodiscard]] std::optional<double> positive(const std::string &key) const
    {
        auto v = number(key);
        if (v && !(*v > 0.0)) {
            throw ConfigError(path(key) + ": must be > 0");
        }
        return v;
    }

    [[nodiscard]] std::optional<double> non_negative(const std::string &key) const
    {
        auto v = number(key);
        if (v && !(*v >= 0.0)) {
            throw ConfigError(path(key) + ": must be >= 0");
        }
        return v;
    }

    [[nodiscard]] std::optional<std::uint64_t> unsigned_integer(const std::string &key) const
    {
        auto t = text(key);
        if (!t) {
            return std::nullopt;
        }
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t->data(), t->data() + t->size(), v);
        if (ec != std::errc{} || ptr != t->data() + t->size() || t->empty()) {
            throw ConfigError(path(key) + ": expected a non-negative integer, got '" + *t + "'");
        }
        return v;
    }

    [[nodiscard]] std::optional<bool> boolean(const std::string &key) const
    {
        auto t = text(key);
        if (!t) {
            return std::nullopt;
        }
        if (*t == "true" || *t == "yes" || *t == "on" || *t == "1") {
            return true;
        }
        if (*t == "false" || *t == "no" || *t == "off" || *t == "0") {
            return false;
        }
        throw ConfigError(path(key) + ": expected true or false, got '" + *t + "'");
    }

    [[nodiscard]] std::optional<IQPoint> point(const std::string &key) const
    {
        auto t = text(key);
        if (!t) {
            return std::nullopt;
        }
        const auto comma = t->find(',');
        std::optional<double> i;
        std::optional<double> q;
        if (comma != std::string::npos) {
            i = parse_plain_number(std::string_view(*t).substr(0, comma));
            q = parse_plain_number(std::string_view(*t).substr(comma + 1));
        }
        if (!i || !q) {
            throw ConfigError(path(key) + ": expected 'I, Q', got '" + *t + "'");
        }
        return IQPoint{*i, *q};
    }

  private:
    std::string name_;
    const boost::property_tree::ptree &tree_;
};

inline DeviceConfig parse_device(const Section &s)
{
    DeviceConfig d;
    const auto ec = s.positive("E_C");
    const auto ej = s.positive("E_J");
    d.omega1 = s.positive("omega1");
    d.omega2 = s.positive("omega2");
    const bool transmon = ec || ej;
    const bool freqs = d.omega1 || d.omega2;
    if (transmon && freqs) {
        throw ConfigError("device: ambiguous parametrization, give either E_C/E_J or omega1/omega2");
    }
    if (!transmon && !freqs) {
        throw ConfigError("device: needs E_C and E_J, or omega1 (and omega2)");
    }
    if (transmon) {
        if (!ec) {
            throw ConfigError(s.path("E_C") + ": missing (E_J is set)");
        }
        if (!ej) {
            throw ConfigError(s.path("E_J") + ": missing (E_C is set)");
        }
        d.transmon = TransmonParams{*ec, *ej};
    }
    if (freqs && !d.omega1) {
        throw ConfigError(s.path("omega1") + ": missing (omega2 is set)");
    }
    if (auto l = s.unsigned_integer("levels")) {
        if (*l != 2 && *l != 3) {
            throw ConfigError(s.path("levels") + ": must be 2 or 3");
        }
        d.levels = static_cast<int>(*l);
    }
    if (d.levels == 3 && freqs && !d.omega2) {
        throw ConfigError(s.path("omega2") + ": required for three levels");
    }
    return d;
}

inline ProtocolConfig parse_protocol(const Section &s)
{
    ProtocolConfig p;
    const auto kind = s.text("kind");
    if (!kind) {
        throw ConfigError(s.path("kind") + ": missing");
    }
    if (*kind == "custom") {
        throw ConfigError(s.path("kind") + ": custom schedules are built from a sequential protocol with a delay");
    }
    try {
        p.kind = parse_protocol_kind(*kind);
    } catch (const ParameterError &e) {
        throw ConfigError(s.path("kind") + ": " + e.what());
    }
    p.theta_m = s.non_negative("theta_m");
    p.phi_m = s.non_negative("phi_m");
    p.theta1_m = s.non_negative("theta1_m");
    p.theta2_m = s.non_negative("theta2_m");
    p.big_theta_m = s.non_negative("Theta_m");
    auto forbid = [&](const std::optional<double> &v, const char *key) {
        if (v) {
            throw ConfigError(s.path(key) + ": not used by the " + *kind + " protocol");
        }
    };
    switch (p.kind) {
    case ProtocolKind::qubit_resonant:
        forbid(p.phi_m, "phi_m"), forbid(p.theta1_m, "theta1_m"), forbid(p.theta2_m, "theta2_m");
        forbid(p.big_theta_m, "Theta_m");
        break;
    case ProtocolKind::sequential:
        forbid(p.theta_m, "theta_m"), forbid(p.big_theta_m, "Theta_m");
        if (p.phi_m && (p.theta1_m || p.theta2_m)) {
            throw ConfigError("protocol: ambiguous targets, give either phi_m or theta1_m/theta2_m");
        }
        if (p.phi_m && *p.phi_m > 2.0 * std::numbers::pi * (1.0 + 1e-12)) {
            throw ConfigError(s.path("phi_m") + ": must lie in [0, 2pi]");
        }
        break;
    default:
        forbid(p.theta_m, "theta_m"), forbid(p.phi_m, "phi_m"), forbid(p.theta1_m, "theta1_m");
        forbid(p.theta2_m, "theta2_m");
        break;
    }
    p.t_m = s.positive("t_m").value_or(p.t_m);
    p.sigma_ratio = s.positive("sigma_ratio").value_or(p.sigma_ratio);
    if (p.sigma_ratio > kMaxSigmaRatio) {
        throw ConfigError(s.path("sigma_ratio") + ": must be <= 0.25");
    }
    p.coupling = s.positive("coupling").value_or(p.coupling);
    p.a = s.non_negative("a").value_or(p.a);
    if (p.a > 1.0) {
        throw ConfigError(s.path("a") + ": must lie in [0, 1]");
    }
    p.phi = s.number("phi").value_or(p.phi);
    p.delay = s.non_negative("delay");
    if (p.delay && p.kind != ProtocolKind::sequential) {
        throw ConfigError(s.path("delay") + ": only the sequential protocol has a pulse delay");
    }
    if ((p.a != 1.0 || p.phi != 0.0) && p.kind != ProtocolKind::qubit_resonant) {
        throw ConfigError(std::string(s.has("a") ? s.path("a") : s.path("phi")) +
                          ": initial superpositions are only supported for the qubit protocol");
    }
    return p;
}

inline IntegratorConfig parse_integrator(const Section &s)
{
    IntegratorConfig c;
    if (auto f = s.text("frame")) {
        if (*f == "lab") {
            c.frame = Frame::lab;
        } else if (*f == "rotating" || *f == "rwa") {
            c.frame = Frame::rotating;
        } else {
            throw ConfigError(s.path("frame") + ": expected lab or rotating, got '" + *f + "'");
        }
    }
    c.step = s.positive("step");
    if (auto sc = s.text("scheme")) {
        if (*sc == "magnus4") {
            c.scheme = Scheme::magnus4;
        } else if (*sc == "rk4") {
            c.scheme = Scheme::rk4;
        } else {
            throw ConfigError(s.path("scheme") + ": expected magnus4 or rk4, got '" + *sc + "'");
        }
    }
    if (auto e = s.text("engine")) {
        try {
            c.engine = parse_engine(*e);
        } catch (const ParameterError &err) {
            throw ConfigError(s.path("engine") + ": " + err.what());
        }
    }
    return c;
}

inline SweepConfig parse_sweep(const Section &s)
{
    SweepConfig c;
    if (auto n = s.unsigned_integer("points")) {
        if (*n < 2) {
            throw ConfigError(s.path("points") + ": must be >= 2");
        }
        c.points = static_cast<std::size_t>(*n);
    }
    c.start = s.non_negative("start");
    c.stop = s.non_negative("stop");
    const double top = 2.0 * std::numbers::pi * (1.0 + 1e-12);
    if (c.stop && *c.stop > top) {
        throw ConfigError(s.path("stop") + ": must be <= 2pi");
    }
    if (c.start && *c.start > top) {
        throw ConfigError(s.path("start") + ": must be <= 2pi");
    }
    if (c.start && c.stop && !(*c.stop > *c.start)) {
        throw ConfigError(s.path("stop") + ": must exceed sweep.start");
    }
    return c;
}

inline ChargingConfig parse_charging(const Section &s)
{
    ChargingConfig c;
    c.threshold = s.positive("threshold").value_or(c.threshold);
    if (auto p = s.text("preset")) {
        if (*p == "table1") {
            c.table1 = true;
        } else if (*p != "none") {
            throw ConfigError(s.path("preset") + ": expected table1 or none, got '" + *p + "'");
        }
    }
    c.time_unit = s.text("time_unit").value_or(c.time_unit);
    return c;
}

inline ReadoutConfig parse_readout(const Section &s)
{
    ReadoutConfig c;
    c.enabled = s.boolean("enabled").value_or(c.enabled);
    if (auto n = s.unsigned_integer("shots")) {
        if (*n == 0) {
            throw ConfigError(s.path("shots") + ": must be >= 1");
        }
        c.shots = static_cast<std::size_t>(*n);
    }
    c.seed = s.unsigned_integer("seed").value_or(c.seed);
    if (auto n = s.unsigned_integer("calibration_shots")) {
        if (*n == 0) {
            throw ConfigError(s.path("calibration_shots") + ": must be >= 1");
        }
        c.calibration_shots = static_cast<std::size_t>(*n);
    }
    if (auto m = s.text("model")) {
        if (*m == "noisy") {
            c.model = noisy_clusters();
        } else if (*m != "ideal") {
            throw ConfigError(s.path("model") + ": expected ideal or noisy, got '" + *m + "'");
        }
    }
    for (std::size_t l = 0; l < 3; ++l) {
        if (auto p = s.point("center" + std::to_string(l))) {
            c.model.centers[l] = *p;
        }
    }
    if (auto v = s.non_negative("spread")) {
        c.model.spread = {*v, *v, *v};
    }
    for (std::size_t l = 0; l < 3; ++l) {
        const std::string key = "spread" + std::to_string(l);
        if (auto v = s.non_negative(key)) {
            if (s.has("spread")) {
                throw ConfigError(s.path(key) + ": conflicts with readout.spread");
            }
            c.model.spread[l] = *v;
        }
    }
    try {
        c.model.validate();
    } catch (const ParameterError &e) {
        throw ConfigError(std::string("readout: ") + e.what());
    }
    c.dump_points = s.boolean("dump_points").value_or(c.dump_points);
    return c;
}

inline OutputConfig parse_output(const Section &s)
{
    OutputConfig c;
    c.dir = s.text("dir").value_or(c.dir);
    if (auto u = s.text("units")) {
        auto parsed = parse_units(*u);
        if (!parsed) {
            throw ConfigError(s.path("units") + ": expected fraction, rad/ns or ueV, got '" + *u + "'");
        }
        c.units = *parsed;
    }
    c.plot = s.boolean("plot").value_or(c.plot);
    c.prefix = s.text("prefix").value_or(c.prefix);
    return c;
}

} // namespace detail

inline RunConfig parse_config(std::istream &in, const std::string &source = "<config>")
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    static const std::map<std::string, std::set<std::string>> schema = {
        {"device", {"E_C", "E_J", "omega1", "omega2", "levels"}},
        {"protocol",
         {"kind", "theta_m", "phi_m", "theta1_m", "theta2_m", "Theta_m", "t_m", "sigma_ratio", "coupling", "a", "phi",
          "delay"}},
        {"integrator", {"frame", "step", "scheme", "engine"}},
        {"sweep", {"points", "start", "stop"}},
        {"charging", {"threshold", "preset", "time_unit"}},
        {"readout",
         {"enabled", "shots", "seed", "calibration_shots", "model", "center0", "center1", "center2", "spread",
          "spread0", "spread1", "spread2", "dump_points"}},
        {"output", {"dir", "units", "plot", "prefix"}},
    };
    RunConfig cfg;
    for (const auto &[name, body] : tree) {
        auto it = schema.find(name);
        if (it == schema.end()) {
            if (!body.data().empty()) {
                throw ConfigError(name + ": key outside any section");
            }
            throw ConfigError(name + ": unknown section");
        }
        const detail::Section s(name, body, it->second);
        if (name == "device") {
            cfg.device = detail::parse_device(s);
        } else if (name == "protocol") {
            cfg.protocol = detail::parse_protocol(s);
        } else if (name == "integrator") {
            cfg.integrator = detail::parse_integrator(s);
        } else if (name == "sweep") {
            cfg.sweep = detail::parse_sweep(s);
        } else if (name == "charging") {
            cfg.charging = detail::parse_charging(s);
        } else if (name == "readout") {
            cfg.readout = detail::parse_readout(s);
        } else {
            cfg.output = detail::parse_output(s);
        }
    }
    return cfg;
}

inline RunConfig parse_config(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

inline RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError(path + ": cannot open config file");
    }
    return parse_config(in, path);
}

// ---------------------------------------------------------------------------
// Building library objects from a config

inline const DeviceConfig &require_device(const RunConfig &cfg)
{
    if (!cfg.device) {
        throw ConfigError("device: missing section");
    }
    return *cfg.device;
}

inline const ProtocolConfig &require_protocol(const RunConfig &cfg)
{
    if (!cfg.protocol) {
        throw ConfigError("protocol: missing section");
    }
    return *cfg.protocol;
}

/// Level count: explicit `levels`, else 2 for the qubit protocol and 3 otherwise.
inline int level_count(const RunConfig &cfg)
{
    const auto &d = require_device(cfg);
    if (d.levels) {
        return *d.levels;
    }
    if (cfg.protocol && cfg.protocol->kind == ProtocolKind::qubit_resonant) {
        return 2;
    }
    if (!cfg.protocol && d.omega1 && !d.omega2) {
        return 2;
    }
    return 3;
}

inline LevelSpectrum build_spectrum(const RunConfig &cfg)
{
    const auto &d = require_device(cfg);
    const int levels = level_count(cfg);
    try {
        if (d.transmon) {
            return transmon_spectrum(*d.transmon, levels);
        }
        if (levels == 2) {
            return LevelSpectrum::two_level(*d.omega1);
        }
        if (!d.omega2) {
            throw ConfigError("device.omega2: required for three levels");
        }
        return spectrum_from_frequencies(*d.omega1, *d.omega2);
    } catch (const ConfigError &) {
        throw;
    } catch (const ParameterError &e) {
        throw ConfigError(std::string("device: ") + e.what());
    }
}

inline PulseSchedule build_schedule(const ProtocolConfig &p)
{
    PulseSchedule s;
    s.t_m = p.t_m;
    s.sigma_ratio = p.sigma_ratio;
    s.coupling = p.coupling;
    return s;
}

inline ProtocolSpec build_protocol(const RunConfig &cfg)
{
    const auto &p = require_protocol(cfg);
    const auto spectrum = build_spectrum(cfg);
    const auto pulse = build_schedule(p);
    const double pi = std::numbers::pi;
    try {
        switch (p.kind) {
        case ProtocolKind::qubit_resonant:
            return qubit_protocol(spectrum, pulse, p.theta_m.value_or(pi), p.a, p.phi);
        case ProtocolKind::sequential: {
            double t1 = pi;
            double t2 = pi;
            if (p.phi_m) {
                std::tie(t1, t2) = sequential_areas(std::min(*p.phi_m, 2.0 * pi));
            } else {
                t1 = p.theta1_m.value_or(pi);
                t2 = p.theta2_m.value_or(pi);
            }
            return staggered_protocol(spectrum, pulse, t1, t2, p.delay.value_or(0.5 * p.t_m));
        }
        case ProtocolKind::simultaneous:
            return simultaneous_protocol(spectrum, pulse, p.big_theta_m.value_or(pi));
        case ProtocolKind::adiabatic_average:
            return adiabatic_protocol(spectrum, pulse, p.big_theta_m.value_or(pi));
        case ProtocolKind::custom:
            break;
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const ParameterError &e) {
        throw ConfigError(std::string("protocol: ") + e.what());
    }
    throw ConfigError("protocol.kind: unsupported");
}

inline SweepSpec build_sweep(const RunConfig &cfg)
{
    const auto &p = require_protocol(cfg);
    SweepSpec s;
    s.kind = p.kind;
    s.spectrum = build_spectrum(cfg);
    s.pulse = build_schedule(p);
    s.a = p.a;
    s.phi = p.phi;
    s.delay = p.delay;
    s.frame = cfg.integrator.frame;
    s.step = cfg.integrator.step;
    s.scheme = cfg.integrator.scheme;
    return s;
}

inline std::vector<double> build_eta_grid(const RunConfig &cfg, SweepVariable v)
{
    const auto defaults = default_eta_grid(v, 2);
    const double start = cfg.sweep.start.value_or(defaults.front());
    const double stop = std::min(cfg.sweep.stop.value_or(defaults.back()), 2.0 * std::numbers::pi);
    if (!(stop > start)) {
        throw ConfigError("sweep.stop: must exceed sweep.start");
    }
    std::vector<double> grid(cfg.sweep.points);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }
    grid.back() = stop;
    return grid;
}

inline ReadoutSettings build_readout(const RunConfig &cfg)
{
    ReadoutSettings r;
    r.shots = cfg.readout.shots;
    r.seed = cfg.readout.seed;
    r.model = cfg.readout.model;
    r.calibration_shots = cfg.readout.calibration_shots;
    r.engine = cfg.integrator.engine.value_or(Engine::numeric);
    return r;
}

} // namespace qbattery
