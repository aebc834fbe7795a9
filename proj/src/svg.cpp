#include "wecsat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "wecsat/csv.hpp"

namespace wecsat {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSize = 600.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) { return format_number(std::round(v * 100.0) / 100.0); }

void open_svg(std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
        << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void close_svg(std::ostream& out) { out << "</svg>\n"; }

// Gamma plane to pixels: unit disk centered with a margin.
struct DiskMap {
    double cx = kSize / 2.0;
    double cy = kSize / 2.0;
    double scale = 0.45 * kSize;
    double x(double re) const { return cx + scale * re; }
    double y(double im) const { return cy - scale * im; }
};

void annular_sector(std::ostream& out, const DiskMap& m, double r0, double r1, double t0, double t1,
                    const char* fill) {
    const bool large = t1 - t0 > kPi;
    auto px = [&](double r, double t) { return fmt(m.x(r * std::cos(t))) + ',' + fmt(m.y(r * std::sin(t))); };
    out << "<path d=\"M" << px(r1, t0) << " A" << fmt(m.scale * r1) << ',' << fmt(m.scale * r1) << " 0 "
        << (large ? 1 : 0) << " 0 " << px(r1, t1);
    if (r0 > 0.0) {
        out << " L" << px(r0, t1) << " A" << fmt(m.scale * r0) << ',' << fmt(m.scale * r0) << " 0 " << (large ? 1 : 0)
            << " 1 " << px(r0, t0);
    } else {
        out << " L" << px(0.0, 0.0);
    }
    out << " Z\" fill=\"" << fill << "\" fill-opacity=\"0.35\" stroke=\"none\"/>\n";
}

struct Axes {
    double x0, x1, y0, y1;
    double left = 60.0, right = kSize - 20.0, top = 20.0, bottom = kSize - 50.0;
    double px(double v) const { return left + (v - x0) / (x1 - x0) * (right - left); }
    double py(double v) const { return bottom - (v - y0) / (y1 - y0) * (bottom - top); }
};

void draw_axes(std::ostream& out, const Axes& ax, const std::string& xlabel, const std::string& ylabel) {
    out << "<rect x=\"" << fmt(ax.left) << "\" y=\"" << fmt(ax.top) << "\" width=\"" << fmt(ax.right - ax.left)
        << "\" height=\"" << fmt(ax.bottom - ax.top) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = ax.x0 + (ax.x1 - ax.x0) * k / 4.0;
        const double vy = ax.y0 + (ax.y1 - ax.y0) * k / 4.0;
        out << "<text x=\"" << fmt(ax.px(vx)) << "\" y=\"" << fmt(ax.bottom + 16) << "\" font-size=\"11\""
            << " text-anchor=\"middle\">" << format_number(vx) << "</text>\n";
        out << "<text x=\"" << fmt(ax.left - 6) << "\" y=\"" << fmt(ax.py(vy) + 4) << "\" font-size=\"11\""
            << " text-anchor=\"end\">" << format_number(vy) << "</text>\n";
    }
    out << "<text x=\"" << fmt((ax.left + ax.right) / 2) << "\" y=\"" << fmt(kSize - 12)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"14\" y=\"" << fmt((ax.top + ax.bottom) / 2) << "\" font-size=\"13\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 14 " << fmt((ax.top + ax.bottom) / 2) << ")\">" << ylabel << "</text>\n";
}

template <typename Points>
void polyline(std::ostream& out, const Points& pts, const char* stroke, bool dashed = false) {
    if (pts.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"";
    if (dashed) out << " stroke-dasharray=\"5,3\"";
    out << " points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) out << (k ? " " : "") << fmt(pts[k].first) << ',' << fmt(pts[k].second);
    out << "\"/>\n";
}

}  // namespace

void write_smith_svg(std::ostream& out, const SmithGrid& grid) {
    const DiskMap m;
    open_svg(out);

    if (grid.radial >= 2 && grid.angular >= 1) {
        const double dr = 1.0 / static_cast<double>(grid.radial - 1);
        const double dt = 2.0 * kPi / static_cast<double>(grid.angular);
        // Merge runs of equal flags along each ring into one sector.
        for (std::size_t r = 0; r < grid.radial; ++r) {
            const double r0 = std::max(0.0, (static_cast<double>(r) - 0.5) * dr);
            const double r1 = std::min(1.0, (static_cast<double>(r) + 0.5) * dr);
            for (int which = 0; which < 2; ++which) {
                const char* fill = which == 0 ? "#d62728" : "#1f77b4";
                auto flagged = [&](std::size_t a) {
                    const SmithCell& c = grid.at(r, a);
                    return which == 0 ? c.v_exceeds_one : c.i_exceeds_one;
                };
                std::size_t a = 0;
                while (a < grid.angular) {
                    if (!flagged(a)) {
                        ++a;
                        continue;
                    }
                    std::size_t b = a;
                    while (b < grid.angular && flagged(b)) ++b;
                    const double t0 = -kPi + (static_cast<double>(a) - 0.5) * dt;
                    const double t1 = -kPi + (static_cast<double>(b) - 0.5) * dt;
                    if (b - a == grid.angular) {
                        annular_sector(out, m, r0, r1, t0, t0 + kPi, fill);
                        annular_sector(out, m, r0, r1, t0 + kPi, t1, fill);
                    } else {
                        annular_sector(out, m, r0, r1, t0, t1, fill);
                    }
                    a = b;
                }
            }
        }
    }

    out << "<circle cx=\"" << fmt(m.cx) << "\" cy=\"" << fmt(m.cy) << "\" r=\"" << fmt(m.scale)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << fmt(m.x(-1)) << "\" y1=\"" << fmt(m.cy) << "\" x2=\"" << fmt(m.x(1)) << "\" y2=\""
        << fmt(m.cy) << "\" stroke=\"gray\"/>\n";
    out << "<line x1=\"" << fmt(m.cx) << "\" y1=\"" << fmt(m.y(-1)) << "\" x2=\"" << fmt(m.cx) << "\" y2=\""
        << fmt(m.y(1)) << "\" stroke=\"gray\"/>\n";

    for (Amplitude which : {Amplitude::voltage, Amplitude::current}) {
        std::vector<std::pair<double, double>> pts;
        for (int k = 0; k < 200; ++k) {
            const double g = k / 200.0;
            const double t = optimal_angle(g, grid.alpha, which);
            pts.emplace_back(m.x(g * std::cos(t)), m.y(g * std::sin(t)));
        }
        polyline(out, pts, which == Amplitude::voltage ? "#7f0000" : "#00007f");
    }
    out << "<text x=\"10\" y=\"20\" font-size=\"14\">alpha = " << format_number(grid.alpha) << "</text>\n";
    close_svg(out);
}

void write_pareto_svg(std::ostream& out, const std::map<double, std::vector<ParetoPoint>>& fronts) {
    open_svg(out);
    const Axes ax{0.0, 1.0, 0.0, 1.0};
    draw_axes(out, ax, "power ratio", "amplitude ratio");
    std::size_t color = 0;
    for (const auto& [alpha, front] : fronts) {
        std::vector<std::pair<double, double>> v, i;
        for (const auto& p : front) {
            v.emplace_back(ax.px(p.power_ratio), ax.py(std::min(p.v_ratio, 1.0)));
            i.emplace_back(ax.px(p.power_ratio), ax.py(std::min(p.i_ratio, 1.0)));
        }
        const char* stroke = kPalette[color++ % std::size(kPalette)];
        polyline(out, v, stroke);
        polyline(out, i, stroke, true);
        out << "<text x=\"" << fmt(ax.left + 10) << "\" y=\"" << fmt(ax.top + 16 * static_cast<double>(color))
            << "\" font-size=\"12\" fill=\"" << stroke << "\">alpha = " << format_number(alpha) << "</text>\n";
    }
    close_svg(out);
}

void write_fsat_svg(std::ostream& out, const std::vector<double>& inv_i_script,
                    const std::map<int, std::vector<double>>& curves) {
    open_svg(out);
    if (inv_i_script.empty()) {
        close_svg(out);
        return;
    }
    double lo = 0.0;
    for (const auto& [n, values] : curves) {
        for (double v : values) lo = std::min(lo, v);
    }
    const Axes ax{inv_i_script.front(), inv_i_script.back(), std::floor(lo * 10.0) / 10.0, 1.0};
    draw_axes(out, ax, "1 / I", "f_sat,n");
    std::size_t color = 0;
    for (const auto& [n, values] : curves) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < values.size() && k < inv_i_script.size(); ++k) {
            pts.emplace_back(ax.px(inv_i_script[k]), ax.py(values[k]));
        }
        const char* stroke = kPalette[color++ % std::size(kPalette)];
        polyline(out, pts, stroke);
        out << "<text x=\"" << fmt(ax.right - 50) << "\" y=\"" << fmt(ax.top + 16 * static_cast<double>(color))
            << "\" font-size=\"12\" fill=\"" << stroke << "\">n = " << n << "</text>\n";
    }
    close_svg(out);
}

}  // namespace wecsat
