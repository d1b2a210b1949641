#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace prosokit {

/// Standard-deviation denominator. Sample (N-1) is the default; it is the
/// convention that reproduces the reference worked values.
enum class SdMode { Sample, Population };

enum class QuartileMethod { Inclusive, Exclusive };

/// Standard deviation of durations (ms). Needs n >= 2.
double sd(std::span<const double> durations, SdMode mode = SdMode::Sample);

/// 100 * sd / mean, dimensionless. Needs n >= 2 and mean > 0.
double coeff_var(std::span<const double> durations, SdMode mode = SdMode::Sample);

/// Raw pairwise variability: mean absolute difference between adjacent
/// durations, in ms.
double rpvi(std::span<const double> durations);

/// Normalized pairwise variability: each adjacent absolute difference is
/// divided by the pair mean, averaged, times 100. Scale-free; the value
/// lives in [0, 200). All durations must be positive.
double npvi(std::span<const double> durations);

/// Variability index with Deterding's normalization: adjacent absolute
/// differences divided by the overall mean duration, averaged, times 100.
double vi_deterding(std::span<const double> durations);

/// The whole irregularity-metric family over one duration sequence.
struct MetricsReport {
    std::size_t n = 0;
    double mean = 0.0;   // ms
    double median = 0.0; // ms
    double min = 0.0;    // ms
    double max = 0.0;    // ms
    double sd = 0.0;     // ms
    double coeff_var = 0.0;
    double rpvi = 0.0; // ms
    double npvi = 0.0;
    double vi_det = 0.0;
};

MetricsReport compute_metrics(std::span<const double> durations,
                              SdMode mode = SdMode::Sample);

struct WindowSummary {
    double mean = 0.0;
    double sd = 0.0; // N-1 over the window values; 0 when only one window
    double coeff_var = 0.0;
};

/// Per-window nPVI profile plus the same values sorted ascending.
struct WindowSeries {
    std::size_t window = 0;
    std::size_t step = 0;
    std::vector<double> values;
    std::vector<double> sorted_values;
    WindowSummary summary;
};

/// Slide a window of `window` durations through the sequence in steps of
/// `step`, computing nPVI per position.
WindowSeries moving_npvi(std::span<const double> durations, std::size_t window = 5,
                         std::size_t step = 1);

struct BoxStat {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

/// Quartile box statistics per category. Quartiles use linear interpolation
/// at position q*(n-1) (inclusive method) by default.
std::map<std::string, BoxStat>
box_stats(const std::map<std::string, std::vector<double>>& groups,
          QuartileMethod method = QuartileMethod::Inclusive);

struct SpeechRate {
    double median_rate = 0.0;    // units per second
    double median_duration = 0.0; // ms
    double mean_duration = 0.0;   // ms
    double min = 0.0;             // ms
    double max = 0.0;             // ms
};

/// Rate from the median duration (robust against outlier syllables):
/// median_rate = 1000 / median_duration_ms.
SpeechRate speech_rate(std::span<const double> durations);

} // namespace prosokit
