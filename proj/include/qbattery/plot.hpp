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

/// Minimal self-contained SVG line and scatter charts.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace qbattery::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> error; ///< optional symmetric error bars
    bool markers = false;
    std::string color = "#1f77b4";
};

struct Figure {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    /// Optional horizontal reference line (e.g. a charging threshold).
    double reference = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string escape(const std::string &s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace detail

inline void write_svg(std::ostream &out, const Figure &fig)
{
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 55;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto &s : fig.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double e = i < s.error.size() ? s.error[i] : 0.0;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i] - e);
            ymax = std::max(ymax, s.y[i] + e);
        }
    }
    if (!std::isnan(fig.reference)) {
        ymin = std::min(ymin, fig.reference);
        ymax = std::max(ymax, fig.reference);
    }
    if (!(xmax > xmin)) {
        xmin -= 0.5, xmax += 0.5;
    }
    if (!(ymax > ymin)) {
        ymin -= 0.5, ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad, ymax += pad;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
    using detail::num;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << detail::escape(fig.title)
        << "</text>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        out << "<text x=\"" << num(px(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
            << detail::tick(xv) << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << detail::tick(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
        << detail::escape(fig.x_label) << "</text>\n";
    out << "<text transform=\"translate(16," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << detail::escape(fig.y_label) << "</text>\n";
    if (!std::isnan(fig.reference)) {
        out << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << num(py(fig.reference)) << "\" y2=\""
            << num(py(fig.reference)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (std::size_t k = 0; k < fig.series.size(); ++k) {
        const auto &s = fig.series[k];
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i < s.error.size() && s.error[i] > 0.0) {
                    out << "<line x1=\"" << num(px(s.x[i])) << "\" x2=\"" << num(px(s.x[i])) << "\" y1=\""
                        << num(py(s.y[i] - s.error[i])) << "\" y2=\"" << num(py(s.y[i] + s.error[i]))
                        << "\" stroke=\"" << s.color << "\"/>\n";
                }
                out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2.5\" fill=\""
                    << s.color << "\"/>\n";
            }
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
            }
            out << "\"/>\n";
        }
        const double ly = T + 16 + 16 * static_cast<double>(k);
        out << "<line x1=\"" << L + 10 << "\" x2=\"" << L + 30 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << L + 36 << "\" y=\"" << ly << "\">" << detail::escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace qbattery::plot
