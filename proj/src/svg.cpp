#include <lwi/svg.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lwi {

namespace {

constexpr double width = 800.0;
constexpr double panel_height = 260.0;
constexpr double margin_left = 90.0;
constexpr double margin_right = 150.0;
constexpr double margin_top = 50.0;
constexpr double margin_bottom = 60.0;
constexpr double panel_gap = 40.0;
constexpr int ticks = 5;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Range
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v)
    {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }

    void settle()
    {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        } else if (lo == hi) {
            const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
};

std::string with_unit(const std::string& label, const std::string& unit)
{
    return unit.empty() ? label : label + " (" + unit + ")";
}

} // namespace

std::string render_svg(const PlotSpec& plot)
{
    if (plot.x.empty() || plot.panels.empty())
        throw std::invalid_argument("nothing to plot");
    for (const auto& panel : plot.panels) {
        for (const auto& s : panel.series) {
            if (s.y.size() != plot.x.size())
                throw std::invalid_argument("series '" + s.label + "' does not match the x axis");
        }
    }

    Range xr;
    for (double v : plot.x)
        xr.include(v);
    xr.settle();

    const double inner_w = width - margin_left - margin_right;
    const double height = margin_top + margin_bottom
                          + plot.panels.size() * panel_height
                          + (plot.panels.size() - 1) * panel_gap;
    auto px = [&](double v) { return margin_left + (v - xr.lo) / (xr.hi - xr.lo) * inner_w; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width)
           + "\" height=\"" + fixed(height) + "\" viewBox=\"0 0 " + fixed(width) + " "
           + fixed(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(width) + "\" height=\"" + fixed(height)
           + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fixed(width / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
           + escape(plot.title) + "</text>\n";

    std::size_t colour = 0;
    for (std::size_t p = 0; p < plot.panels.size(); ++p) {
        const auto& panel = plot.panels[p];
        const double top = margin_top + p * (panel_height + panel_gap);
        const double bottom = top + panel_height;

        Range yr;
        for (const auto& s : panel.series) {
            for (double v : s.y)
                yr.include(v);
        }
        yr.settle();
        auto py = [&](double v) { return bottom - (v - yr.lo) / (yr.hi - yr.lo) * panel_height; };

        svg += "<g class=\"panel\">\n";
        svg += "<rect x=\"" + fixed(margin_left) + "\" y=\"" + fixed(top) + "\" width=\""
               + fixed(inner_w) + "\" height=\"" + fixed(panel_height)
               + "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int k = 0; k <= ticks; ++k) {
            const double yv = yr.lo + (yr.hi - yr.lo) * k / ticks;
            const double xv = xr.lo + (xr.hi - xr.lo) * k / ticks;
            svg += "<line x1=\"" + fixed(margin_left - 5) + "\" y1=\"" + fixed(py(yv))
                   + "\" x2=\"" + fixed(margin_left) + "\" y2=\"" + fixed(py(yv))
                   + "\" stroke=\"black\"/>\n";
            svg += "<text x=\"" + fixed(margin_left - 8) + "\" y=\"" + fixed(py(yv) + 4)
                   + "\" text-anchor=\"end\">" + label_number(yv) + "</text>\n";
            svg += "<line x1=\"" + fixed(px(xv)) + "\" y1=\"" + fixed(bottom) + "\" x2=\""
                   + fixed(px(xv)) + "\" y2=\"" + fixed(bottom + 5) + "\" stroke=\"black\"/>\n";
            svg += "<text x=\"" + fixed(px(xv)) + "\" y=\"" + fixed(bottom + 18)
                   + "\" text-anchor=\"middle\">" + label_number(xv) + "</text>\n";
        }
        const double mid = 0.5 * (top + bottom);
        svg += "<text x=\"20\" y=\"" + fixed(mid) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
               + fixed(mid) + ")\">" + escape(with_unit(panel.y_label, panel.y_unit)) + "</text>\n";
        svg += "<text x=\"" + fixed(margin_left + inner_w / 2) + "\" y=\"" + fixed(bottom + 36)
               + "\" text-anchor=\"middle\">" + escape(with_unit(plot.x_label, plot.x_unit))
               + "</text>\n";

        for (std::size_t s = 0; s < panel.series.size(); ++s, ++colour) {
            const auto& series = panel.series[s];
            const char* stroke = palette[colour % std::size(palette)];
            std::string points;
            auto flush = [&] {
                if (!points.empty())
                    svg += "<polyline fill=\"none\" stroke=\"" + std::string(stroke)
                           + "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
                points.clear();
            };
            for (std::size_t k = 0; k < plot.x.size(); ++k) {
                if (!std::isfinite(plot.x[k]) || !std::isfinite(series.y[k])) {
                    flush();
                    continue;
                }
                if (!points.empty())
                    points += ' ';
                points += fixed(px(plot.x[k])) + "," + fixed(py(series.y[k]));
            }
            flush();
            const double ly = top + 16 + 18 * s;
            svg += "<line x1=\"" + fixed(width - margin_right + 10) + "\" y1=\"" + fixed(ly - 4)
                   + "\" x2=\"" + fixed(width - margin_right + 30) + "\" y2=\"" + fixed(ly - 4)
                   + "\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
            svg += "<text x=\"" + fixed(width - margin_right + 35) + "\" y=\"" + fixed(ly) + "\">"
                   + escape(series.label) + "</text>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

PlotSpec sweep_plot(const SweepResult& sweep, const std::string& title,
                    const std::string& x_label, const std::string& x_unit)
{
    PlotSpec plot;
    plot.title = title;
    plot.x_label = x_label;
    plot.x_unit = x_unit;
    PlotSeries intensity{"intensity", {}};
    PlotSeries gain{"linear gain", {}};
    for (const auto& r : sweep.rows) {
        plot.x.push_back(r.sweep_value);
        intensity.y.push_back(r.intensity);
        gain.y.push_back(r.linear_gain);
    }
    plot.panels.push_back({"steady intensity a^2", "", {intensity}});
    plot.panels.push_back({"small-signal gain", "MHz", {gain}});
    return plot;
}

PlotSpec trajectory_plot(const Trajectory& trajectory, const std::string& title)
{
    PlotSpec plot;
    plot.title = title;
    plot.x_label = "time";
    plot.x_unit = "us";
    PlotSeries aa{"rho_aa", {}}, bb{"rho_bb", {}}, cc{"rho_cc", {}};
    PlotSeries ab{"i rho_ab", {}}, cb{"rho_cb", {}}, ca{"i rho_ca", {}};
    for (const auto& p : trajectory.points) {
        plot.x.push_back(p.t);
        aa.y.push_back(p.state.rho_aa);
        bb.y.push_back(p.state.rho_bb);
        cc.y.push_back(rho_cc(p.state));
        ab.y.push_back(p.state.i_rho_ab);
        cb.y.push_back(p.state.rho_cb);
        ca.y.push_back(p.state.i_rho_ca);
    }
    plot.panels.push_back({"population", "", {aa, bb, cc}});
    plot.panels.push_back({"coherence", "", {ab, cb, ca}});
    return plot;
}

} // namespace lwi
