#pragma once

#include "prosokit/annotation.hpp"
#include "prosokit/metrics.hpp"
#include "prosokit/signal.hpp"
#include "prosokit/stylize.hpp"

#include <map>
#include <string>
#include <vector>

namespace prosokit {

// Fixed plot-area margins, part of the documented pixel mapping.
inline constexpr int kPlotMarginLeft = 56;
inline constexpr int kPlotMarginRight = 12;
inline constexpr int kPlotMarginTop = 12;
inline constexpr int kPlotMarginBottom = 28;
inline constexpr int kAnnotationBandHeight = 48;
inline constexpr int kWaveformBandHeight = 60;

// Fraction of the value span added above and below the data range.
inline constexpr double kAxisPadding = 0.05;

/// What to draw for one track plot. Pointer members are optional and not
/// owned; they must outlive the call.
struct PlotSpec {
    int width = 1000;
    int height = 400;
    F0Track track;
    const PolyModel* global = nullptr;
    std::vector<PolyModel> locals;
    const F0Track* residual = nullptr;     // drawn around its own zero line
    const Tier* annotation = nullptr;      // label band with per-interval ms
    const SampledSignal* waveform = nullptr; // min/max thumbnail, <= 2000 segments
    bool stat_lines = true;                // min/max solid, mean dashed, median dotted
};

/// F0 trace plot following fixed conventions: solid polyline broken at
/// unvoiced gaps, x axis in frame numbers, y axis linear Hz with 5%
/// padding. Output is stable: the same spec always yields the same bytes.
std::string plot_track(const PlotSpec& spec);

/// Box-and-whisker plot, one box per category on a shared value axis.
/// When raw per-category values are supplied they are drawn as a dot
/// column beside each box.
std::string plot_boxes(const std::map<std::string, BoxStat>& stats,
                       int width = 1000, int height = 400,
                       const std::map<std::string, std::vector<double>>* raw = nullptr);

/// Moving-window profile: the per-window values in order, the same values
/// sorted ascending in grey, and horizontal lines at mean and mean +- sd.
std::string plot_window_series(const WindowSeries& series,
                               int width = 1000, int height = 400);

} // namespace prosokit
