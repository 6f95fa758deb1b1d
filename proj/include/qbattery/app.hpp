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

/// Command implementations behind the qbattery tool. Each command reads a
/// RunConfig, writes its files under output.dir and prints a key = value
/// report. Errors propagate as exceptions.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "qbattery/config.hpp"
#include "qbattery/csv.hpp"
#include "qbattery/observables.hpp"
#include "qbattery/plot.hpp"
#include "qbattery/readout.hpp"

namespace qbattery::app {

struct Overrides {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<Units> units;
    std::optional<Engine> engine;
};

inline void apply(RunConfig &cfg, const Overrides &o)
{
    if (o.out) {
        cfg.output.dir = *o.out;
    }
    if (o.seed) {
        cfg.readout.seed = *o.seed;
    }
    if (o.units) {
        cfg.output.units = *o.units;
    }
    if (o.engine) {
        cfg.integrator.engine = *o.engine;
    }
}

inline std::filesystem::path output_path(const RunConfig &cfg, const std::string &name)
{
    const std::filesystem::path dir(cfg.output.dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError(dir.string() + ": " + ec.message());
    }
    return dir / (cfg.output.prefix + name);
}

inline std::filesystem::path write_file(const RunConfig &cfg, const std::string &name,
                                        const std::function<void(std::ostream &)> &body)
{
    const auto path = output_path(cfg, name);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(path.string() + ": cannot open for writing");
    }
    body(out);
    out.flush();
    if (!out) {
        throw IoError(path.string() + ": write failed");
    }
    return path;
}

namespace detail {

inline std::string fmt(double v) { return csv::format(v); }

inline void line(std::ostream &out, const std::string &key, const std::string &value)
{
    out << key << " = " << value << '\n';
}

inline void line(std::ostream &out, const std::string &key, double value) { line(out, key, fmt(value)); }

inline std::function<double(double)> energy_units(const RunConfig &cfg, double full_scale)
{
    const Units u = cfg.output.units;
    return [u, full_scale](double e) { return convert_energy(e, full_scale, u); };
}

inline std::string energy_axis(const RunConfig &cfg, bool qubit)
{
    switch (cfg.output.units) {
    case Units::fraction:
        return qubit ? "E / Delta" : "E / Delta_max";
    case Units::rad_per_ns:
        return "E (rad/ns)";
    case Units::micro_ev:
        return "E (ueV)";
    }
    return "E";
}

/// Closed forms are rotating-frame results, so a lab-frame or stepped
/// integrator section selects the numeric engine unless told otherwise.
inline Engine choose_engine(const RunConfig &cfg, bool closed_form)
{
    if (cfg.integrator.engine) {
        return *cfg.integrator.engine;
    }
    if (cfg.integrator.frame == Frame::lab || cfg.integrator.step) {
        return Engine::numeric;
    }
    return closed_form ? Engine::analytic : Engine::numeric;
}

} // namespace detail

// ---------------------------------------------------------------------------

inline void spectrum(const RunConfig &cfg, std::ostream &out)
{
    const auto s = build_spectrum(cfg);
    using detail::line;
    line(out, "levels", std::to_string(s.levels()));
    if (cfg.device->transmon) {
        line(out, "omega_P", cfg.device->transmon->plasma_frequency());
    }
    line(out, "Delta", s.delta());
    line(out, "Delta_ueV", energy_to_micro_ev(s.delta()));
    if (s.levels() == 3) {
        line(out, "Delta_prime", s.delta_prime());
        line(out, "Delta_prime_ueV", energy_to_micro_ev(s.delta_prime()));
        line(out, "Delta_max", s.delta_max());
        line(out, "Delta_max_ueV", energy_to_micro_ev(s.delta_max()));
        line(out, "delta", s.half_anharmonicity());
        line(out, "delta_ueV", energy_to_micro_ev(s.half_anharmonicity()));
    }
}

inline void simulate(const RunConfig &cfg, std::ostream &out)
{
    const auto spec = build_protocol(cfg);
    const Engine engine = detail::choose_engine(cfg, has_closed_form(spec));
    if (engine == Engine::analytic && !has_closed_form(spec)) {
        throw ProtocolError(std::string(to_string(spec.kind)) +
                            " protocol has no closed form here; use --engine numeric");
    }
    const EnergyCurve curve = engine == Engine::analytic
                                  ? analytic_curve(spec)
                                  : numeric_curve(spec, cfg.integrator.frame, cfg.integrator.step, 2049,
                                                  cfg.integrator.scheme);
    const double fs = curve.full_scale;
    const auto path =
        write_file(cfg, "curve.csv", [&](std::ostream &o) { csv::write_curve(o, curve, detail::energy_units(cfg, fs)); });

    double emax = 0.0;
    double drift = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        emax = std::max(emax, curve.fraction(i));
        drift = std::max(drift, curve.norm_drift[i]);
    }
    using detail::line;
    line(out, "protocol", std::string(to_string(spec.kind)));
    line(out, "engine", to_string(engine));
    if (engine == Engine::numeric) {
        line(out, "frame", to_string(cfg.integrator.frame));
    }
    line(out, "t_m", spec.t_m);
    line(out, "full_scale", fs);
    line(out, "final_E_over_full_scale", curve.fraction(curve.size() - 1));
    line(out, "max_E_over_full_scale", emax);
    line(out, "max_norm_drift", drift);
    try {
        const auto tc = charging_time(curve, cfg.charging.threshold, fs);
        line(out, "t_c_over_tm", tc.t_c / spec.t_m);
        if (tc.last_below) {
            line(out, "last_below_over_tm", *tc.last_below / spec.t_m);
        }
    } catch (const NotChargedError &e) {
        line(out, "t_c_over_tm", "not reached (max " + detail::fmt(e.max_fraction()) + ")");
    }
    line(out, "curve", path.string());
    if (cfg.output.plot) {
        plot::Figure fig;
        fig.title = std::string(to_string(spec.kind)) + " protocol";
        fig.x_label = "t / t_m";
        fig.y_label = detail::energy_axis(cfg, spec.kind == ProtocolKind::qubit_resonant);
        fig.reference = convert_energy(cfg.charging.threshold * fs, fs, cfg.output.units);
        plot::Series s;
        s.label = std::string(to_string(engine));
        const auto conv = detail::energy_units(cfg, fs);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            s.x.push_back(curve.times[i] / spec.t_m);
            s.y.push_back(conv(curve.energy[i]));
        }
        fig.series.push_back(std::move(s));
        line(out, "plot", write_file(cfg, "curve.svg", [&](std::ostream &o) { plot::write_svg(o, fig); }).string());
    }
}

inline void sweep(const RunConfig &cfg, std::ostream &out)
{
    const auto spec = build_sweep(cfg);
    const auto grid = build_eta_grid(cfg, spec.variable());
    const bool closed = spec.kind != ProtocolKind::sequential || !spec.delay ||
                        qbattery::detail::close(*spec.delay, 0.5 * spec.pulse.t_m);
    const Engine engine = detail::choose_engine(cfg, closed);
    SweepResult result;
    std::optional<SweepResult> reference;
    if (cfg.readout.enabled) {
        auto settings = build_readout(cfg);
        settings.engine = engine;
        result = end_to_end_sweep(spec, grid, settings);
        if (closed) {
            reference = sweep_final_energy(spec, grid, Engine::analytic);
        }
    } else {
        result = sweep_final_energy(spec, grid, engine);
    }
    const double fs = result.full_scale;
    const auto path =
        write_file(cfg, "sweep.csv", [&](std::ostream &o) { csv::write_sweep(o, result, detail::energy_units(cfg, fs)); });

    using detail::line;
    line(out, "protocol", std::string(to_string(spec.kind)));
    line(out, "variable", to_string(result.variable));
    line(out, "engine", to_string(engine));
    line(out, "readout", cfg.readout.enabled ? "on" : "off");
    if (cfg.readout.enabled) {
        line(out, "shots", std::to_string(cfg.readout.shots));
        line(out, "seed", std::to_string(cfg.readout.seed));
    }
    line(out, "points", std::to_string(result.size()));
    const auto peak = std::max_element(result.energy.begin(), result.energy.end());
    line(out, "max_E_over_full_scale", *peak / fs);
    line(out, "eta_at_max", result.eta[static_cast<std::size_t>(peak - result.energy.begin())]);
    line(out, "sweep", path.string());
    if (cfg.output.plot) {
        plot::Figure fig;
        fig.title = std::string(to_string(spec.kind)) + " sweep";
        fig.x_label = to_string(result.variable);
        fig.y_label = detail::energy_axis(cfg, spec.kind == ProtocolKind::qubit_resonant);
        const auto conv = detail::energy_units(cfg, fs);
        auto series_of = [&](const SweepResult &r, const std::string &label, bool markers, const std::string &color) {
            plot::Series s;
            s.label = label;
            s.markers = markers;
            s.color = color;
            s.x = r.eta;
            for (std::size_t i = 0; i < r.size(); ++i) {
                s.y.push_back(conv(r.energy[i]));
                s.error.push_back(conv(r.stderr_[i]) - conv(0.0));
            }
            return s;
        };
        if (reference) {
            fig.series.push_back(series_of(*reference, "analytic", false, "#000000"));
        }
        fig.series.push_back(series_of(result, cfg.readout.enabled ? "readout" : to_string(engine),
                                       cfg.readout.enabled, "#d62728"));
        line(out, "plot", write_file(cfg, "sweep.svg", [&](std::ostream &o) { plot::write_svg(o, fig); }).string());
    }
}

inline void table1(const RunConfig &cfg, std::ostream &out)
{
    const auto rows = qbattery::table1();
    const auto path = write_file(cfg, "table1.csv", [&](std::ostream &o) {
        o << "a,phi,threshold,reference_tc_over_tm,recomputed_tc_over_tm\n";
        for (const auto &r : rows) {
            csv::write_row(o, {r.a, r.phi, r.threshold, r.reference, r.recomputed});
        }
    });
    out << "a     phi    E_thr/Delta  ref    recomputed\n";
    for (const auto &r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-5.2f %-6.4f %-12.2f %-6.2f %.4f\n", r.a, r.phi, r.threshold, r.reference,
                      r.recomputed);
        out << buf;
    }
    detail::line(out, "table", path.string());
}

inline void charging_time(const RunConfig &cfg, std::ostream &out)
{
    if (cfg.charging.table1) {
        table1(cfg, out);
        return;
    }
    const auto spec = build_protocol(cfg);
    const Engine engine = detail::choose_engine(cfg, has_closed_form(spec));
    const auto tc = qbattery::charging_time(spec, cfg.charging.threshold, engine, cfg.integrator.frame,
                                            cfg.integrator.step);
    const double fs = full_scale(spec);
    const double e_tc = cfg.charging.threshold * fs;
    using detail::line;
    line(out, "protocol", std::string(to_string(spec.kind)));
    line(out, "engine", to_string(engine));
    line(out, "threshold", cfg.charging.threshold);
    line(out, "t_c_over_tm", tc.t_c / spec.t_m);
    line(out, "t_c_" + cfg.charging.time_unit, tc.t_c);
    line(out, "max_E_over_full_scale", tc.max_fraction);
    if (tc.last_below) {
        line(out, "last_below_over_tm", *tc.last_below / spec.t_m);
    }
    if (tc.t_c > 0.0) {
        line(out, "average_power", average_power(e_tc, tc.t_c));
    }
}

inline void readout(const RunConfig &cfg, std::ostream &out)
{
    const auto spec = build_sweep(cfg);
    const auto grid = build_eta_grid(cfg, spec.variable());
    const bool closed = spec.kind != ProtocolKind::sequential || !spec.delay ||
                        qbattery::detail::close(*spec.delay, 0.5 * spec.pulse.t_m);
    auto settings = build_readout(cfg);
    settings.engine = detail::choose_engine(cfg, closed);
    settings.keep_points = cfg.readout.dump_points;
    const auto points = readout_sweep(spec, grid, settings);
    const double fs = spec.full_scale();
    const auto conv = detail::energy_units(cfg, fs);
    const auto summary = write_file(cfg, "readout.csv", [&](std::ostream &o) {
        o << "eta,P0,P1,P2,n0,n1,n2,E,E_over_full_scale,stderr\n";
        for (const auto &p : points) {
            const auto &n = p.classified.counts;
            csv::write_row(o, {p.eta, p.populations[0], p.populations[1], p.populations[2], static_cast<double>(n[0]),
                               static_cast<double>(n[1]), static_cast<double>(n[2]), conv(p.energy), p.energy / fs,
                               conv(p.stderr_) - conv(0.0)});
        }
    });
    using detail::line;
    line(out, "protocol", std::string(to_string(spec.kind)));
    line(out, "shots", std::to_string(settings.shots));
    line(out, "seed", std::to_string(settings.seed));
    line(out, "points", std::to_string(points.size()));
    line(out, "summary", summary.string());
    if (cfg.readout.dump_points) {
        const auto dump = write_file(cfg, "readout_iq.csv", [&](std::ostream &o) {
            o << "eta,shot,assigned,I,Q\n";
            for (const auto &p : points) {
                for (std::size_t k = 0; k < p.points.size(); ++k) {
                    csv::write_row(o, {p.eta, static_cast<double>(k), static_cast<double>(p.assigned[k]),
                                       p.points[k].i, p.points[k].q});
                }
            }
        });
        line(out, "iq_points", dump.string());
    }
}

} // namespace qbattery::app
