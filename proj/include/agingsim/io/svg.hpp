// Copyright 2026 The agingsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <agingsim/io/csv.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace agingsim::io::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::vector<std::size_t> stars;  ///< indices drawn with a star marker
};

struct Labels {
    std::string title, x, y;
};

namespace detail {

inline constexpr int kWidth = 720, kHeight = 480;
inline constexpr int kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;

inline const std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0, hi = 1.0;

    void include(double v) {
        if (!std::isfinite(v)) return;
        if (!seen) lo = hi = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        seen = true;
    }
    void pad() {
        if (hi - lo < 1e-300) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }

    bool seen = false;
};

/// Roughly `count` round tick positions spanning the range.
inline std::vector<double> ticks(const Range& r, int count = 5) {
    const double raw = (r.hi - r.lo) / count;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-9 * step; t += step)
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return out;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

class Canvas {
public:
    Canvas(int width = kWidth, int height = kHeight) : width_(width), height_(height) {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
             << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
             << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    int width() const { return width_; }
    int height() const { return height_; }
    double plot_w() const { return width_ - kLeft - kRight; }
    double plot_h() const { return height_ - kTop - kBottom; }
    double px(const Range& r, double v) const { return kLeft + r.frac(v) * plot_w(); }
    double py(const Range& r, double v) const { return kTop + (1.0 - r.frac(v)) * plot_h(); }

    std::ostringstream& raw() { return out_; }

    void text(double x, double y, const std::string& s, const char* anchor = "middle", int rotate = 0) {
        out_ << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor << '"';
        if (rotate) out_ << " transform=\"rotate(" << rotate << ' ' << x << ' ' << y << ")\"";
        out_ << '>' << escape(s) << "</text>\n";
    }

    void line(double x1, double y1, double x2, double y2, const char* stroke = "black", double width = 1.0) {
        out_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
             << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill, const char* stroke = "none") {
        out_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h << "\" fill=\""
             << fill << "\" stroke=\"" << stroke << "\"/>\n";
    }

    void axes(const Range& xr, const Range& yr, const Labels& labels) {
        rect(kLeft, kTop, plot_w(), plot_h(), "none", "black");
        for (double t : ticks(xr)) {
            const double x = px(xr, t);
            line(x, kTop + plot_h(), x, kTop + plot_h() + 5);
            text(x, kTop + plot_h() + 18, tick_label(t));
        }
        for (double t : ticks(yr)) {
            const double y = py(yr, t);
            line(kLeft - 5, y, kLeft, y);
            text(kLeft - 8, y + 4, tick_label(t), "end");
        }
        text(kLeft + plot_w() / 2, 24, labels.title);
        text(kLeft + plot_w() / 2, height_ - 15, labels.x);
        text(20, kTop + plot_h() / 2, labels.y, "middle", -90);
    }

    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

private:
    int width_, height_;
    std::ostringstream out_;
};

inline std::string star_path(double cx, double cy, double r) {
    std::ostringstream s;
    for (int k = 0; k < 10; ++k) {
        const double angle = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
        const double rad = k % 2 ? r * 0.45 : r;
        s << (k ? 'L' : 'M') << cx + rad * std::cos(angle) << ',' << cy + rad * std::sin(angle);
    }
    return s.str() + "Z";
}

/// Blue-white-red ramp for t in [0, 1].
inline std::string color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto channel = [](double a, double b, double s) { return static_cast<int>(std::lround(a + (b - a) * s)); };
    int r, g, b;
    if (t < 0.5) {
        const double s = t / 0.5;
        r = channel(49, 247, s), g = channel(54, 247, s), b = channel(149, 247, s);
    } else {
        const double s = (t - 0.5) / 0.5;
        r = channel(247, 165, s), g = channel(247, 0, s), b = channel(247, 38, s);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace detail

/// Polyline chart of several series with a legend; `equal_aspect` forces
/// one scale on both axes (phase portraits).
inline std::string line_chart(const std::vector<Series>& series, const Labels& labels, bool equal_aspect = false) {
    detail::Range xr, yr;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            xr.include(s.x[i]);
            yr.include(s.y[i]);
        }
    xr.pad();
    yr.pad();
    detail::Canvas c = equal_aspect ? detail::Canvas(detail::kLeft + detail::kRight + 400, detail::kTop + detail::kBottom + 400)
                                    : detail::Canvas();
    if (equal_aspect) {
        const double half = std::max(xr.hi - xr.lo, yr.hi - yr.lo) / 2 * 1.05;
        const double cx = (xr.hi + xr.lo) / 2, cy = (yr.hi + yr.lo) / 2;
        xr.lo = cx - half, xr.hi = cx + half;
        yr.lo = cy - half, yr.hi = cy + half;
    }
    c.axes(xr, yr, labels);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* stroke = detail::kPalette[k % detail::kPalette.size()];
        std::ostringstream pts;
        bool open = false;
        auto flush = [&] {
            if (open) c.raw() << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\""
                              << pts.str() << "\"/>\n";
            pts.str("");
            open = false;
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            pts << c.px(xr, s.x[i]) << ',' << c.py(yr, s.y[i]) << ' ';
            open = true;
        }
        flush();
        for (std::size_t i : s.stars)
            if (i < s.x.size() && std::isfinite(s.y[i]))
                c.raw() << "<path d=\"" << detail::star_path(c.px(xr, s.x[i]), c.py(yr, s.y[i]), 8) << "\" fill=\""
                        << stroke << "\"/>\n";
        const double ly = detail::kTop + 10 + 18.0 * static_cast<double>(k);
        const double lx = c.width() - detail::kRight + 12;
        c.line(lx, ly, lx + 20, ly, stroke, 2);
        c.text(lx + 26, ly + 4, s.label, "start");
    }
    return c.finish();
}

/// Heat map of z over a rectangular grid; z is row-major with x varying fastest.
/// Non-finite cells are drawn grey.
inline std::string heat_map(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z,
                            const Labels& labels, const std::string& z_label) {
    if (z.size() != x.size() * y.size() || x.empty() || y.empty())
        throw Error(ErrorKind::InvalidArgument, "heat map grid size mismatch");
    detail::Range xr, yr, zr;
    auto edges = [](const std::vector<double>& v, detail::Range& r) {
        if (v.size() == 1) {
            r.include(v[0] - 0.5);
            r.include(v[0] + 0.5);
            return;
        }
        r.include(v.front() - (v[1] - v[0]) / 2);
        r.include(v.back() + (v.back() - v[v.size() - 2]) / 2);
    };
    edges(x, xr);
    edges(y, yr);
    for (double v : z) zr.include(v);
    zr.pad();
    detail::Canvas c;
    auto cell = [](const std::vector<double>& v, std::size_t i) {
        const double lo = i == 0 ? (v.size() > 1 ? v[0] - (v[1] - v[0]) / 2 : v[0] - 0.5) : (v[i - 1] + v[i]) / 2;
        const double hi = i + 1 == v.size() ? (v.size() > 1 ? v[i] + (v[i] - v[i - 1]) / 2 : v[i] + 0.5)
                                            : (v[i] + v[i + 1]) / 2;
        return std::pair{lo, hi};
    };
    for (std::size_t j = 0; j < y.size(); ++j)
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double v = z[j * x.size() + i];
            const auto [x0, x1] = cell(x, i);
            const auto [y0, y1] = cell(y, j);
            const double left = c.px(xr, x0), top = c.py(yr, y1);
            c.rect(left, top, c.px(xr, x1) - left + 0.5, c.py(yr, y0) - top + 0.5,
                   std::isfinite(v) ? detail::color(zr.frac(v)) : std::string("#bbbbbb"));
        }
    c.axes(xr, yr, labels);
    const double bx = c.width() - detail::kRight + 30, bh = c.plot_h();
    for (int k = 0; k < 100; ++k)
        c.rect(bx, detail::kTop + bh * (1.0 - (k + 1) / 100.0), 18, bh / 100.0 + 0.5, detail::color((k + 0.5) / 100.0));
    c.rect(bx, detail::kTop, 18, bh, "none", "black");
    for (double t : detail::ticks(zr)) {
        const double yy = detail::kTop + (1.0 - zr.frac(t)) * bh;
        c.line(bx + 18, yy, bx + 23, yy);
        c.text(bx + 26, yy + 4, detail::tick_label(t), "start");
    }
    c.text(bx + 9, detail::kTop - 8, z_label);
    return c.finish();
}

struct BarGroup {
    std::string label;
    std::vector<double> values;  ///< one per category
};

/// Grouped bars: one cluster per category, one bar per group inside it.
inline std::string grouped_bars(const std::vector<std::string>& categories, const std::vector<BarGroup>& groups,
                                const Labels& labels) {
    detail::Range yr;
    yr.include(0.0);
    for (const auto& g : groups)
        for (double v : g.values) yr.include(v);
    yr.pad();
    yr.hi *= 1.05;
    detail::Canvas c;
    c.rect(detail::kLeft, detail::kTop, c.plot_w(), c.plot_h(), "none", "black");
    for (double t : detail::ticks(yr)) {
        const double yy = c.py(yr, t);
        c.line(detail::kLeft - 5, yy, detail::kLeft, yy);
        c.text(detail::kLeft - 8, yy + 4, detail::tick_label(t), "end");
    }
    const double slot = c.plot_w() / static_cast<double>(categories.size());
    const double bar = slot * 0.8 / static_cast<double>(std::max<std::size_t>(1, groups.size()));
    for (std::size_t k = 0; k < categories.size(); ++k) {
        const double x0 = detail::kLeft + slot * static_cast<double>(k) + slot * 0.1;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (k >= groups[gi].values.size() || !std::isfinite(groups[gi].values[k])) continue;
            const double top = c.py(yr, groups[gi].values[k]);
            c.rect(x0 + bar * static_cast<double>(gi), top, bar, c.py(yr, 0.0) - top,
                   detail::kPalette[gi % detail::kPalette.size()]);
        }
        c.text(x0 + slot * 0.4, detail::kTop + c.plot_h() + 18, categories[k]);
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const double ly = detail::kTop + 10 + 18.0 * static_cast<double>(gi);
        const double lx = c.width() - detail::kRight + 12;
        c.rect(lx, ly - 6, 12, 12, detail::kPalette[gi % detail::kPalette.size()]);
        c.text(lx + 18, ly + 4, groups[gi].label, "start");
    }
    c.text(detail::kLeft + c.plot_w() / 2, 24, labels.title);
    c.text(detail::kLeft + c.plot_w() / 2, c.height() - 15, labels.x);
    c.text(20, detail::kTop + c.plot_h() / 2, labels.y, "middle", -90);
    return c.finish();
}

inline void save(const std::string& path, const std::string& document) {
    std::ofstream out(path, std::ios::binary);
    out << document;
    if (!out) throw Error(ErrorKind::InvalidArgument, "failed to write '" + path + "'");
}

}  // namespace agingsim::io::svg
