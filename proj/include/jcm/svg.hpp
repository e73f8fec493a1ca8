// svg.hpp — Minimal deterministic SVG line charts and orthographic Bloch-sphere views

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

namespace jcm::svg {

struct Style {
    std::string color = "#000000";
    double width = 1.2;
    std::string dash;  // stroke-dasharray, empty for solid
};

struct Series {
    std::string label;
    std::vector<double> x, y;
    Style style;
};

struct Series3 {
    std::string label;
    std::vector<std::array<double, 3>> points;
    Style style;
};

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Colour i of n along a blue→red ramp, for families of curves.
inline std::string ramp_color(std::size_t i, std::size_t n)
{
    const double f = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    const int r = static_cast<int>(std::lround(30 + 200 * f));
    const int g = static_cast<int>(std::lround(80 + 40 * (1.0 - std::abs(2.0 * f - 1.0))));
    const int b = static_cast<int>(std::lround(220 - 190 * f));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

inline std::string stroke_attrs(const Style& s)
{
    std::string a = "fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"" + num(s.width) + "\"";
    if (!s.dash.empty()) a += " stroke-dasharray=\"" + s.dash + "\"";
    return a;
}

// Polyline points split at non-finite samples.
template <class Map>
inline void write_polylines(std::ostream& os, std::size_t n, Map&& at, const Style& style)
{
    std::string pts;
    auto flush = [&] {
        if (!pts.empty()) os << "<polyline " << stroke_attrs(style) << " points=\"" << pts << "\"/>\n";
        pts.clear();
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto [px, py, ok] = at(i);
        if (!ok) {
            flush();
            continue;
        }
        if (!pts.empty()) pts += ' ';
        pts += num(px) + "," + num(py);
    }
    flush();
}

struct LineChart {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    double width = 720, height = 440;

    void render(std::ostream& os) const
    {
        constexpr double ml = 70, mr = 170, mt = 40, mb = 55;
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const auto& s : series)
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
        if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
        if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;

        const double pw = width - ml - mr, ph = height - mt - mb;
        auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
        auto sy = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
           << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
           << "</text>\n";
        os << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
           << "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int k = 0; k <= 5; ++k) {
            const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
            os << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(sx(xv)) << "\" y2=\""
               << num(mt + ph + 5) << "\" stroke=\"#444\"/>\n";
            os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(mt + ph + 18) << "\" text-anchor=\"middle\">"
               << tick_label(xv) << "</text>\n";
            os << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(sy(yv)) << "\" x2=\"" << num(ml) << "\" y2=\""
               << num(sy(yv)) << "\" stroke=\"#444\"/>\n";
            os << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">"
               << tick_label(yv) << "</text>\n";
        }
        if (y0 < 0 && y1 > 0) {
            os << "<line x1=\"" << num(ml) << "\" y1=\"" << num(sy(0)) << "\" x2=\"" << num(ml + pw) << "\" y2=\""
               << num(sy(0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>\n";
        }
        os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 12) << "\" text-anchor=\"middle\">"
           << escape(x_label) << "</text>\n";
        os << "<text transform=\"translate(18," << num(mt + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
           << escape(y_label) << "</text>\n";

        for (const auto& s : series) {
            const std::size_t n = std::min(s.x.size(), s.y.size());
            write_polylines(
                os, n,
                [&](std::size_t i) {
                    const bool ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]);
                    return std::tuple{ok ? sx(s.x[i]) : 0.0, ok ? sy(s.y[i]) : 0.0, ok};
                },
                s.style);
        }

        // Legend; long families are summarised by their end members.
        std::vector<std::size_t> shown;
        if (series.size() <= 12) {
            for (std::size_t i = 0; i < series.size(); ++i) shown.push_back(i);
        } else {
            shown = {0, series.size() / 2, series.size() - 1};
        }
        double ly = mt + 10;
        for (std::size_t i : shown) {
            const auto& s = series[i];
            os << "<line x1=\"" << num(ml + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(ml + pw + 36)
               << "\" y2=\"" << num(ly) << "\" " << stroke_attrs(s.style) << "/>\n";
            os << "<text x=\"" << num(ml + pw + 42) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
            ly += 18;
        }
        if (series.size() > shown.size()) {
            os << "<text x=\"" << num(ml + pw + 12) << "\" y=\"" << num(ly + 4) << "\">(" << series.size()
               << " curves)</text>\n";
        }
        os << "</svg>\n";
    }
};

struct Arrow {
    std::array<double, 3> tip{};
    Style style;
    std::string label;
};

/// Orthographic view of the unit Bloch sphere with 3-D polylines.
struct BlochView {
    std::string title;
    std::vector<Series3> series;
    std::vector<Arrow> arrows;
    double azimuth = 0.6, elevation = 0.35;  // radians
    double size = 520;

    void render(std::ostream& os) const
    {
        const double ca = std::cos(azimuth), sa = std::sin(azimuth);
        const double ce = std::cos(elevation), se = std::sin(elevation);
        const std::array<double, 3> u{-sa, ca, 0.0};
        const std::array<double, 3> v{-se * ca, -se * sa, ce};
        const std::array<double, 3> d{ce * ca, ce * sa, se};  // towards the viewer
        const double radius = 0.38 * size, cx = 0.5 * size - 60, cy = 0.5 * size + 10;
        auto dot3 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
            return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        };
        auto px = [&](const std::array<double, 3>& p) { return cx + radius * dot3(p, u); };
        auto py = [&](const std::array<double, 3>& p) { return cy - radius * dot3(p, v); };

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size + 120) << "\" height=\"" << num(size)
           << "\" viewBox=\"0 0 " << num(size + 120) << ' ' << num(size) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << num(cx) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
           << "</text>\n";
        os << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(radius)
           << "\" fill=\"none\" stroke=\"#999\"/>\n";

        // Equator and the two vertical great circles; back halves dotted.
        auto circle = [&](auto param) {
            std::vector<std::array<double, 3>> pts;
            for (int k = 0; k <= 120; ++k) pts.push_back(param(2.0 * std::numbers::pi * k / 120.0));
            for (int pass = 0; pass < 2; ++pass) {
                const Style st{"#bbbbbb", 0.8, pass == 0 ? "2,3" : ""};
                write_polylines(
                    os, pts.size(),
                    [&](std::size_t i) {
                        const bool front = dot3(pts[i], d) >= 0.0;
                        return std::tuple{px(pts[i]), py(pts[i]), front == (pass == 1)};
                    },
                    st);
            }
        };
        circle([](double t) { return std::array<double, 3>{std::cos(t), std::sin(t), 0.0}; });
        circle([](double t) { return std::array<double, 3>{std::cos(t), 0.0, std::sin(t)}; });
        circle([](double t) { return std::array<double, 3>{0.0, std::cos(t), std::sin(t)}; });

        const char* names[] = {"x", "y", "z"};
        for (int a = 0; a < 3; ++a) {
            std::array<double, 3> e{};
            e[a] = 1.15;
            os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\"" << num(px(e)) << "\" y2=\""
               << num(py(e)) << "\" stroke=\"#888\" stroke-width=\"0.8\"/>\n";
            os << "<text x=\"" << num(px(e) + 4) << "\" y=\"" << num(py(e) - 4) << "\" fill=\"#555\">" << names[a]
               << "</text>\n";
        }
        os << "<text x=\"" << num(px({0, 0, 1}) + 6) << "\" y=\"" << num(py({0, 0, 1}) + 14)
           << "\" fill=\"#555\">|0⟩</text>\n";
        os << "<text x=\"" << num(px({0, 0, -1}) + 6) << "\" y=\"" << num(py({0, 0, -1}) + 14)
           << "\" fill=\"#555\">|1⟩</text>\n";

        for (const auto& s : series) {
            write_polylines(
                os, s.points.size(),
                [&](std::size_t i) {
                    const auto& p = s.points[i];
                    const bool ok = std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]);
                    return std::tuple{ok ? px(p) : 0.0, ok ? py(p) : 0.0, ok};
                },
                s.style);
        }
        for (const auto& a : arrows) {
            os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\"" << num(px(a.tip)) << "\" y2=\""
               << num(py(a.tip)) << "\" " << stroke_attrs(a.style) << "/>\n";
            os << "<circle cx=\"" << num(px(a.tip)) << "\" cy=\"" << num(py(a.tip)) << "\" r=\"3\" fill=\""
               << a.style.color << "\"/>\n";
        }

        double ly = 50;
        auto legend = [&](const std::string& label, const Style& st) {
            os << "<line x1=\"" << num(size - 40) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(size - 16) << "\" y2=\""
               << num(ly) << "\" " << stroke_attrs(st) << "/>\n";
            os << "<text x=\"" << num(size - 10) << "\" y=\"" << num(ly + 4) << "\">" << escape(label) << "</text>\n";
            ly += 18;
        };
        for (const auto& s : series) legend(s.label, s.style);
        for (const auto& a : arrows) legend(a.label, a.style);
        os << "</svg>\n";
    }
};

} // namespace jcm::svg
