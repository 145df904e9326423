#ifndef LWI_SVG_HPP
#define LWI_SVG_HPP

#include <lwi/cavity.hpp>
#include <lwi/steady_state.hpp>

#include <string>
#include <vector>

namespace lwi {

struct PlotSeries
{
    std::string label;
    std::vector<double> y;
};

/// One stacked panel sharing the x axis of the plot.
struct PlotPanel
{
    std::string y_label;
    std::string y_unit;
    std::vector<PlotSeries> series;
};

struct PlotSpec
{
    std::string title;
    std::string x_label;
    std::string x_unit;
    std::vector<double> x;
    std::vector<PlotPanel> panels;
};

/// Standalone SVG document, one polyline per series. Output depends only on
/// the input values. Throws std::invalid_argument for an empty plot or
/// mismatched series lengths.
std::string render_svg(const PlotSpec& plot);

/// Intensity and small-signal gain panels for a sweep.
PlotSpec sweep_plot(const SweepResult& sweep, const std::string& title,
                    const std::string& x_label, const std::string& x_unit);

/// Population and coherence panels for a trajectory.
PlotSpec trajectory_plot(const Trajectory& trajectory, const std::string& title);

} // namespace lwi

#endif
