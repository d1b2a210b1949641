#include "prosokit/render.hpp"
#include "prosokit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace prosokit {

namespace {

std::string px(double v) {
    if (v < 0.0 && v > -0.005) v = 0.0; // avoid "-0.00"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

struct Canvas {
    std::string body;

    void line(double x1, double y1, double x2, double y2, const char* style) {
        body += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) +
                "\" y2=\"" + px(y2) + "\" " + style + "/>\n";
    }
    void rect(double x, double y, double w, double h, const char* style) {
        body += "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) +
                "\" height=\"" + px(h) + "\" " + style + "/>\n";
    }
    void circle(double cx, double cy, double r, const char* style) {
        body += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"" + px(r) +
                "\" " + style + "/>\n";
    }
    void text(double x, double y, const std::string& content, const char* style) {
        body += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" " + style + ">" +
                escape_xml(content) + "</text>\n";
    }
    void path(const std::string& d, const char* style) {
        if (d.empty()) return;
        body += "<path d=\"" + d + "\" " + style + "/>\n";
    }

    std::string finish(int width, int height, const std::string& desc) const {
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
               "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
               std::to_string(width) + " " + std::to_string(height) + "\">\n";
        out += "<desc>" + escape_xml(desc) + "</desc>\n";
        out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
               std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
        out += body;
        out += "</svg>\n";
        return out;
    }
};

// Linear value->pixel mapping with padded range, y growing downwards.
struct YScale {
    double lo = 0.0, hi = 1.0;
    double top = 0.0, bottom = 1.0;

    static YScale padded(double value_min, double value_max, double top, double bottom) {
        double pad = kAxisPadding * (value_max - value_min);
        if (pad <= 0.0) pad = 1.0;
        return {value_min - pad, value_max + pad, top, bottom};
    }
    double operator()(double v) const {
        return top + (hi - v) / (hi - lo) * (bottom - top);
    }
};

// Tick spacing from the 1/2/5 ladder so that at most `target` ticks fit.
std::size_t tick_step(std::size_t n, std::size_t target) {
    static constexpr std::size_t ladder[] = {1,   2,   5,    10,   20,   50,
                                             100, 200, 500,  1000, 2000, 5000};
    for (std::size_t step : ladder)
        if ((n - 1) / step + 1 <= target) return step;
    return 10000;
}

constexpr const char* kAxisStyle = "stroke=\"#000000\" stroke-width=\"1\"";
constexpr const char* kTextStyle =
    "font-family=\"monospace\" font-size=\"11\" fill=\"#000000\"";
constexpr const char* kTextStyleMid = "font-family=\"monospace\" font-size=\"11\" "
                                      "fill=\"#000000\" text-anchor=\"middle\"";

} // namespace

std::string plot_track(const PlotSpec& spec) {
    const F0Track& track = spec.track;
    std::vector<double> voiced;
    for (const auto& f : track.frames)
        if (f) voiced.push_back(*f);
    if (voiced.empty())
        raise(Errc::NoVoicedFrames, "cannot plot a track with no voiced frames");

    const std::size_t n = track.frames.size();
    const double left = kPlotMarginLeft;
    const double right = spec.width - kPlotMarginRight;
    const double top = kPlotMarginTop;
    double bottom = spec.height - kPlotMarginBottom;
    double wave_top = bottom, ann_top = bottom;
    if (spec.waveform) {
        wave_top = bottom - kWaveformBandHeight;
        bottom = wave_top;
    }
    if (spec.annotation) {
        ann_top = bottom - kAnnotationBandHeight;
        bottom = ann_top;
    }

    const double vmin = *std::min_element(voiced.begin(), voiced.end());
    const double vmax = *std::max_element(voiced.begin(), voiced.end());
    const YScale y = YScale::padded(vmin, vmax, top, bottom);
    const double denom = static_cast<double>(n > 1 ? n - 1 : 1);
    auto x_of_frame = [&](double i) { return left + i / denom * (right - left); };
    auto x_of_time = [&](double t) { return x_of_frame((t - track.start) / track.frame_step); };
    const double hz_per_px = (y.hi - y.lo) / (bottom - top);

    Canvas canvas;
    canvas.rect(left, top, right - left, bottom - top,
                "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"");

    // x axis: frame numbers
    const std::size_t step = tick_step(n, 12);
    for (std::size_t i = 0; i < n; i += step) {
        const double x = x_of_frame(static_cast<double>(i));
        canvas.line(x, bottom, x, bottom + 4, kAxisStyle);
        canvas.text(x, bottom + 16, std::to_string(i), kTextStyleMid);
    }

    if (spec.stat_lines) {
        const TrackStats stats = track_stats(track);
        const struct {
            double value;
            const char* style;
            const char* name;
        } lines[] = {
            {stats.max, "stroke=\"#000000\" stroke-width=\"0.75\"", "max"},
            {stats.min, "stroke=\"#000000\" stroke-width=\"0.75\"", "min"},
            {stats.mean, "stroke=\"#000000\" stroke-width=\"0.75\" stroke-dasharray=\"8 4\"",
             "mean"},
            {stats.median, "stroke=\"#000000\" stroke-width=\"0.75\" stroke-dasharray=\"2 3\"",
             "median"},
        };
        for (const auto& l : lines) {
            canvas.line(left, y(l.value), right, y(l.value), l.style);
            canvas.text(left + 4, y(l.value) - 3,
                        std::string(l.name) + " " + px(l.value), kTextStyle);
        }
    }

    // F0 trace, broken at unvoiced gaps
    {
        std::string d;
        bool in_run = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (track.frames[i]) {
                d += in_run ? "L " : "M ";
                d += px(x_of_frame(static_cast<double>(i))) + " " + px(y(*track.frames[i])) + " ";
                in_run = true;
            } else {
                in_run = false;
            }
        }
        canvas.path(d, "fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"");
    }

    auto model_path = [&](const PolyModel& model) {
        std::string d;
        bool in_run = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = track.time_at(i);
            if (t < model.t0 || t > model.t1) {
                in_run = false;
                continue;
            }
            const double value = std::clamp(model(t), y.lo, y.hi);
            d += in_run ? "L " : "M ";
            d += px(x_of_frame(static_cast<double>(i))) + " " + px(y(value)) + " ";
            in_run = true;
        }
        return d;
    };

    for (const PolyModel& local : spec.locals)
        canvas.path(model_path(local),
                    "fill=\"none\" stroke=\"#666666\" stroke-width=\"1\" "
                    "stroke-dasharray=\"1 3\"");
    if (spec.global)
        canvas.path(model_path(*spec.global),
                    "fill=\"none\" stroke=\"#444444\" stroke-width=\"2.5\" "
                    "stroke-dasharray=\"10 6\"");

    if (spec.residual) {
        const double zero_y = top + 0.85 * (bottom - top);
        canvas.line(left, zero_y, right, zero_y, "stroke=\"#bbbbbb\" stroke-width=\"0.75\"");
        std::string d;
        bool in_run = false;
        const std::size_t m = spec.residual->frames.size();
        for (std::size_t i = 0; i < m; ++i) {
            if (!spec.residual->frames[i]) {
                in_run = false;
                continue;
            }
            double ry = zero_y - *spec.residual->frames[i] / hz_per_px;
            ry = std::clamp(ry, top, bottom);
            d += in_run ? "L " : "M ";
            d += px(x_of_time(spec.residual->time_at(i))) + " " + px(ry) + " ";
            in_run = true;
        }
        canvas.path(d, "fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" "
                       "stroke-dasharray=\"4 3\"");
    }

    if (spec.annotation) {
        const double band_bottom = ann_top + kAnnotationBandHeight;
        canvas.rect(left, ann_top, right - left, kAnnotationBandHeight,
                    "fill=\"none\" stroke=\"#000000\" stroke-width=\"0.75\"");
        for (const LabelledInterval& item : spec.annotation->items) {
            const double x1 = std::clamp(x_of_time(item.tmin), left, right);
            if (spec.annotation->kind == TierKind::Interval) {
                const double x2 = std::clamp(x_of_time(item.tmax), left, right);
                canvas.line(x1, ann_top, x1, band_bottom,
                            "stroke=\"#000000\" stroke-width=\"0.75\"");
                canvas.line(x2, ann_top, x2, band_bottom,
                            "stroke=\"#000000\" stroke-width=\"0.75\"");
                const double xm = 0.5 * (x1 + x2);
                canvas.text(xm, ann_top + 19, item.label, kTextStyleMid);
                const auto ms = static_cast<long long>(std::llround(item.duration() * 1000.0));
                canvas.text(xm, ann_top + 37, std::to_string(ms), kTextStyleMid);
            } else {
                canvas.line(x1, ann_top, x1, band_bottom,
                            "stroke=\"#000000\" stroke-width=\"0.75\"");
                canvas.text(x1 + 3, ann_top + 19, item.label, kTextStyle);
            }
        }
    }

    if (spec.waveform && !spec.waveform->samples.empty()) {
        const double band_bottom = wave_top + kWaveformBandHeight;
        const double band_mid = 0.5 * (wave_top + band_bottom);
        const double half = 0.5 * kWaveformBandHeight - 2.0;
        const std::vector<double>& s = spec.waveform->samples;
        const std::size_t buckets = std::min<std::size_t>(2000, s.size());
        canvas.line(left, band_mid, right, band_mid, "stroke=\"#bbbbbb\" stroke-width=\"0.5\"");
        std::string d;
        for (std::size_t b = 0; b < buckets; ++b) {
            const std::size_t from = b * s.size() / buckets;
            const std::size_t to = std::max(from + 1, (b + 1) * s.size() / buckets);
            double lo = s[from], hi = s[from];
            for (std::size_t i = from; i < to; ++i) {
                lo = std::min(lo, s[i]);
                hi = std::max(hi, s[i]);
            }
            const double t = static_cast<double>(from) / spec.waveform->sample_rate;
            const double x = std::clamp(x_of_time(t), left, right);
            d += "M " + px(x) + " " + px(band_mid - hi * half) + " L " + px(x) + " " +
                 px(band_mid - lo * half) + " ";
        }
        canvas.path(d, "fill=\"none\" stroke=\"#555555\" stroke-width=\"0.5\"");
    }

    return canvas.finish(spec.width, spec.height,
                         "F0 track; y: Hz, linear, range " + px(y.lo) + ".." + px(y.hi) +
                             " (5% padding); x: frame index, step " + px(track.frame_step) +
                             " s");
}

std::string plot_boxes(const std::map<std::string, BoxStat>& stats, int width, int height,
                       const std::map<std::string, std::vector<double>>* raw) {
    if (stats.empty())
        raise(Errc::EmptyStats, "no categories to plot");

    double vmin = stats.begin()->second.min;
    double vmax = stats.begin()->second.max;
    for (const auto& [name, s] : stats) {
        vmin = std::min(vmin, s.min);
        vmax = std::max(vmax, s.max);
    }
    if (raw)
        for (const auto& [name, values] : *raw)
            for (double v : values) {
                vmin = std::min(vmin, v);
                vmax = std::max(vmax, v);
            }

    const double left = kPlotMarginLeft;
    const double right = width - kPlotMarginRight;
    const double top = kPlotMarginTop;
    const double bottom = height - kPlotMarginBottom - 14; // room for category labels
    const YScale y = YScale::padded(vmin, vmax, top, bottom);

    Canvas canvas;
    canvas.rect(left, top, right - left, bottom - top,
                "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"");
    for (double v : {vmin, 0.5 * (vmin + vmax), vmax}) {
        canvas.line(left - 4, y(v), left, y(v), kAxisStyle);
        canvas.text(4, y(v) + 4, px(v), kTextStyle);
    }

    const double slot = (right - left) / static_cast<double>(stats.size());
    std::size_t index = 0;
    for (const auto& [name, s] : stats) {
        const double cx = left + (static_cast<double>(index) + 0.5) * slot;
        const double box_half = 0.18 * slot;
        const double cap_half = 0.5 * box_half;

        canvas.line(cx, y(s.min), cx, y(s.q1), kAxisStyle);
        canvas.line(cx, y(s.q3), cx, y(s.max), kAxisStyle);
        canvas.line(cx - cap_half, y(s.min), cx + cap_half, y(s.min), kAxisStyle);
        canvas.line(cx - cap_half, y(s.max), cx + cap_half, y(s.max), kAxisStyle);
        canvas.rect(cx - box_half, y(s.q3), 2.0 * box_half, y(s.q1) - y(s.q3),
                    "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"");
        canvas.line(cx - box_half, y(s.median), cx + box_half, y(s.median),
                    "stroke=\"#000000\" stroke-width=\"1.5\"");
        canvas.circle(cx, y(s.mean), 3.0, "fill=\"#000000\"");

        if (raw) {
            auto it = raw->find(name);
            if (it != raw->end()) {
                std::vector<double> sorted(it->second);
                std::sort(sorted.begin(), sorted.end());
                for (double v : sorted)
                    canvas.circle(cx - 0.3 * slot, y(v), 1.5, "fill=\"#000000\"");
            }
        }

        canvas.text(cx, bottom + 16, name, kTextStyleMid);
        ++index;
    }

    return canvas.finish(width, height,
                         "duration boxes; y: ms, linear, range " + px(y.lo) + ".." +
                             px(y.hi) + " (5% padding); one box per category");
}

std::string plot_window_series(const WindowSeries& series, int width, int height) {
    if (series.values.empty())
        raise(Errc::EmptySeries, "no window values to plot");

    const double sd_lo = series.summary.mean - series.summary.sd;
    const double sd_hi = series.summary.mean + series.summary.sd;
    double vmin = std::min(sd_lo, *std::min_element(series.values.begin(), series.values.end()));
    double vmax = std::max(sd_hi, *std::max_element(series.values.begin(), series.values.end()));

    const double left = kPlotMarginLeft;
    const double right = width - kPlotMarginRight;
    const double top = kPlotMarginTop;
    const double bottom = height - kPlotMarginBottom;
    const YScale y = YScale::padded(vmin, vmax, top, bottom);
    const std::size_t n = series.values.size();
    const double denom = static_cast<double>(n > 1 ? n - 1 : 1);
    auto x_of = [&](std::size_t i) {
        return left + static_cast<double>(i) / denom * (right - left);
    };

    Canvas canvas;
    canvas.rect(left, top, right - left, bottom - top,
                "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"");

    const std::size_t step = tick_step(n, 12);
    for (std::size_t i = 0; i < n; i += step) {
        canvas.line(x_of(i), bottom, x_of(i), bottom + 4, kAxisStyle);
        canvas.text(x_of(i), bottom + 16, std::to_string(i), kTextStyleMid);
    }

    canvas.line(left, y(series.summary.mean), right, y(series.summary.mean),
                "stroke=\"#555555\" stroke-width=\"1\"");
    canvas.text(left + 4, y(series.summary.mean) - 3,
                "mean " + px(series.summary.mean), kTextStyle);
    for (double v : {sd_lo, sd_hi})
        canvas.line(left, y(v), right, y(v),
                    "stroke=\"#555555\" stroke-width=\"0.75\" stroke-dasharray=\"4 3\"");

    auto polyline = [&](const std::vector<double>& values, const char* style) {
        std::string d;
        for (std::size_t i = 0; i < values.size(); ++i) {
            d += (i == 0) ? "M " : "L ";
            d += px(x_of(i)) + " " + px(y(values[i])) + " ";
        }
        canvas.path(d, style);
    };
    polyline(series.sorted_values, "fill=\"none\" stroke=\"#999999\" stroke-width=\"1.5\"");
    polyline(series.values, "fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"");

    return canvas.finish(width, height,
                         "moving-window profile, window " + std::to_string(series.window) +
                             " step " + std::to_string(series.step) + "; y: linear, range " +
                             px(y.lo) + ".." + px(y.hi) + " (5% padding); x: window position");
}

} // namespace prosokit
