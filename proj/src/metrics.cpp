#include "prosokit/metrics.hpp"
#include "prosokit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace prosokit {

namespace {

void require_pairs(std::span<const double> durations) {
    if (durations.size() < 2)
        raise(Errc::InsufficientData,
              "insufficient data: n=" + std::to_string(durations.size()) + " < 2");
}

double mean_of(std::span<const double> values) {
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

double median_of_sorted(const std::vector<double>& sorted) {
    const std::size_t mid = sorted.size() / 2;
    return (sorted.size() % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

// Linear-interpolation quantile of a sorted sample.
double quantile(const std::vector<double>& sorted, double q, QuartileMethod method) {
    const auto n = static_cast<double>(sorted.size());
    double pos = (method == QuartileMethod::Inclusive) ? q * (n - 1.0)
                                                       : q * (n + 1.0) - 1.0;
    pos = std::clamp(pos, 0.0, n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

double sd(std::span<const double> durations, SdMode mode) {
    require_pairs(durations);
    const double mu = mean_of(durations);
    double ss = 0.0;
    for (double d : durations) ss += (d - mu) * (d - mu);
    const double denom = (mode == SdMode::Sample)
                             ? static_cast<double>(durations.size() - 1)
                             : static_cast<double>(durations.size());
    return std::sqrt(ss / denom);
}

double coeff_var(std::span<const double> durations, SdMode mode) {
    require_pairs(durations);
    const double mu = mean_of(durations);
    if (mu <= 0.0)
        raise(Errc::ZeroMean, "mean duration must be positive");
    return 100.0 * sd(durations, mode) / mu;
}

double rpvi(std::span<const double> durations) {
    require_pairs(durations);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < durations.size(); ++i)
        sum += std::abs(durations[i] - durations[i + 1]);
    return sum / static_cast<double>(durations.size() - 1);
}

double npvi(std::span<const double> durations) {
    require_pairs(durations);
    for (double d : durations)
        if (d <= 0.0)
            raise(Errc::NonPositiveDuration, "all durations must be positive");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < durations.size(); ++i) {
        const double pair_mean = 0.5 * (durations[i] + durations[i + 1]);
        sum += std::abs(durations[i] - durations[i + 1]) / pair_mean;
    }
    return 100.0 * sum / static_cast<double>(durations.size() - 1);
}

double vi_deterding(std::span<const double> durations) {
    require_pairs(durations);
    const double mu = mean_of(durations);
    if (mu <= 0.0)
        raise(Errc::ZeroMean, "mean duration must be positive");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < durations.size(); ++i)
        sum += std::abs(durations[i] - durations[i + 1]) / mu;
    return 100.0 * sum / static_cast<double>(durations.size() - 1);
}

MetricsReport compute_metrics(std::span<const double> durations, SdMode mode) {
    require_pairs(durations);
    std::vector<double> sorted(durations.begin(), durations.end());
    std::sort(sorted.begin(), sorted.end());

    MetricsReport report;
    report.n = durations.size();
    report.mean = mean_of(durations);
    report.median = median_of_sorted(sorted);
    report.min = sorted.front();
    report.max = sorted.back();
    report.sd = sd(durations, mode);
    report.coeff_var = coeff_var(durations, mode);
    report.rpvi = rpvi(durations);
    report.npvi = npvi(durations);
    report.vi_det = vi_deterding(durations);
    return report;
}

WindowSeries moving_npvi(std::span<const double> durations, std::size_t window,
                         std::size_t step) {
    if (window < 2)
        raise(Errc::InsufficientData, "window must cover at least 2 durations");
    if (step == 0)
        raise(Errc::InsufficientData, "step must be positive");
    if (durations.size() < window)
        raise(Errc::SequenceShorterThanWindow,
              "sequence of " + std::to_string(durations.size()) +
                  " is shorter than window " + std::to_string(window));

    WindowSeries series;
    series.window = window;
    series.step = step;
    for (std::size_t pos = 0; pos + window <= durations.size(); pos += step)
        series.values.push_back(npvi(durations.subspan(pos, window)));

    series.sorted_values = series.values;
    std::sort(series.sorted_values.begin(), series.sorted_values.end());

    series.summary.mean = mean_of(series.values);
    series.summary.sd = (series.values.size() >= 2) ? sd(series.values, SdMode::Sample) : 0.0;
    series.summary.coeff_var = (series.summary.mean > 0.0)
                                   ? 100.0 * series.summary.sd / series.summary.mean
                                   : 0.0;
    return series;
}

std::map<std::string, BoxStat>
box_stats(const std::map<std::string, std::vector<double>>& groups, QuartileMethod method) {
    std::map<std::string, BoxStat> out;
    for (const auto& [category, values] : groups) {
        if (values.empty())
            raise(Errc::EmptyGroup, "category \"" + category + "\" has no durations");
        std::vector<double> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        BoxStat stat;
        stat.n = sorted.size();
        stat.min = sorted.front();
        stat.max = sorted.back();
        stat.mean = mean_of(values);
        stat.q1 = quantile(sorted, 0.25, method);
        stat.median = quantile(sorted, 0.5, method);
        stat.q3 = quantile(sorted, 0.75, method);
        out.emplace(category, stat);
    }
    return out;
}

SpeechRate speech_rate(std::span<const double> durations) {
    if (durations.empty())
        raise(Errc::EmptyInput, "no durations");
    std::vector<double> sorted(durations.begin(), durations.end());
    std::sort(sorted.begin(), sorted.end());

    SpeechRate rate;
    rate.median_duration = median_of_sorted(sorted);
    rate.mean_duration = mean_of(durations);
    rate.min = sorted.front();
    rate.max = sorted.back();
    rate.median_rate = 1000.0 / rate.median_duration;
    return rate;
}

} // namespace prosokit
