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

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qbattery/errors.hpp"
#include "qbattery/observables.hpp"

namespace qbattery::csv {

inline constexpr const char *kCurveHeader = "t_over_tm,E,E_over_full_scale,P0,P1,P2,norm_drift";
inline constexpr const char *kSweepHeader = "eta,E,E_over_full_scale,stderr";

/// 17 significant digits, enough to round-trip any double.
inline std::string format(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_row(std::ostream &out, const std::vector<double> &values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out << ',';
        }
        out << format(values[i]);
    }
    out << '\n';
}

/// `energy_scale(e)` maps stored energies to the E column.
template <class Convert>
void write_curve(std::ostream &out, const EnergyCurve &curve, Convert &&energy_scale)
{
    out << kCurveHeader << '\n';
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto &p = curve.populations[i];
        write_row(out, {curve.times[i] / curve.t_m, energy_scale(curve.energy[i]), curve.fraction(i), p[0], p[1], p[2],
                        curve.norm_drift[i]});
    }
}

template <class Convert>
void write_sweep(std::ostream &out, const SweepResult &sweep, Convert &&energy_scale)
{
    out << kSweepHeader << '\n';
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        write_row(out, {sweep.eta[i], energy_scale(sweep.energy[i]), sweep.energy[i] / sweep.full_scale,
                        energy_scale(sweep.stderr_[i])});
    }
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t column(const std::string &name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw ParameterError("no column '" + name + "'");
    }
};

/// Numeric CSV with one header line.
inline Table read(std::istream &in)
{
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty CSV input");
    }
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) {
        t.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream rs(line);
        for (std::string cell; std::getline(rs, cell, ',');) {
            std::size_t used = 0;
            row.push_back(std::stod(cell, &used));
            if (used != cell.size()) {
                throw IoError("malformed CSV cell '" + cell + "'");
            }
        }
        if (row.size() != t.header.size()) {
            throw IoError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                          std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline Table read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError(path + ": cannot open");
    }
    return read(in);
}

} // namespace qbattery::csv
