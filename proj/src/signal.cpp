#include "prosokit/signal.hpp"
#include "prosokit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>

namespace prosokit {

namespace {

std::uint32_t read_u32(std::string_view bytes, std::size_t offset) {
    return static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[offset])) |
           static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[offset + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[offset + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[offset + 3])) << 24;
}

std::uint16_t read_u16(std::string_view bytes, std::size_t offset) {
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(bytes[offset]) |
                                      static_cast<std::uint8_t>(bytes[offset + 1]) << 8);
}

// Result of analysing one frame: voicing decision plus frequency.
struct FrameResult {
    bool voiced = false;
    double f0 = 0.0;
};

// Normalized cross-correlation of the window starting at `base` against
// itself shifted by each lag in [lag_lo, lag_hi]; both segments are
// mean-removed, so the measure is invariant to amplitude and DC offset.
FrameResult analyze_frame(const std::vector<double>& x, std::size_t base,
                          std::size_t window, std::size_t lag_lo, std::size_t lag_hi,
                          double threshold, double f_min, double f_max,
                          double sample_rate) {
    const std::size_t n = x.size();
    std::size_t max_lag = lag_hi;
    if (base + window > n) return {};
    if (base + window + max_lag > n)
        max_lag = n - base - window;
    if (max_lag < lag_lo) return {};

    double sum1 = 0.0;
    for (std::size_t i = 0; i < window; ++i) sum1 += x[base + i];
    const double mean1 = sum1 / static_cast<double>(window);
    double energy1 = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        double d = x[base + i] - mean1;
        energy1 += d * d;
    }
    if (energy1 <= 1e-12) return {}; // silent or constant window

    const std::size_t count = max_lag - lag_lo + 1;
    std::vector<double> corr(count, -1.0);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t lag = lag_lo + k;
        double sum2 = 0.0;
        for (std::size_t i = 0; i < window; ++i) sum2 += x[base + lag + i];
        const double mean2 = sum2 / static_cast<double>(window);
        double num = 0.0, energy2 = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            const double d1 = x[base + i] - mean1;
            const double d2 = x[base + lag + i] - mean2;
            num += d1 * d2;
            energy2 += d2 * d2;
        }
        if (energy2 <= 1e-12) continue;
        corr[k] = num / std::sqrt(energy1 * energy2);
    }

    // Local maxima are the lag candidates; among those within a small
    // margin of the best one, the shortest lag wins (otherwise a perfectly
    // periodic signal can lock onto twice its period).
    constexpr double kOctaveMargin = 0.02;
    double best = -2.0;
    for (std::size_t k = 0; k < count; ++k) {
        const bool left_ok = (k == 0) || corr[k] >= corr[k - 1];
        const bool right_ok = (k + 1 == count) || corr[k] >= corr[k + 1];
        if (left_ok && right_ok) best = std::max(best, corr[k]);
    }
    if (best < threshold) return {};

    std::size_t pick = count;
    for (std::size_t k = 0; k < count; ++k) {
        const bool left_ok = (k == 0) || corr[k] >= corr[k - 1];
        const bool right_ok = (k + 1 == count) || corr[k] >= corr[k + 1];
        if (left_ok && right_ok && corr[k] >= best - kOctaveMargin) {
            pick = k;
            break;
        }
    }
    if (pick == count) return {};

    double lag = static_cast<double>(lag_lo + pick);
    if (pick > 0 && pick + 1 < count) {
        const double r0 = corr[pick - 1], r1 = corr[pick], r2 = corr[pick + 1];
        const double denom = r0 - 2.0 * r1 + r2;
        if (std::abs(denom) > 1e-12) {
            double delta = 0.5 * (r0 - r2) / denom;
            delta = std::clamp(delta, -0.5, 0.5);
            lag += delta;
        }
    }
    double f0 = sample_rate / lag;
    f0 = std::clamp(f0, f_min, f_max);
    return {true, f0};
}

} // namespace

std::size_t F0Track::voiced_count() const {
    std::size_t n = 0;
    for (const auto& f : frames)
        if (f) ++n;
    return n;
}

bool window_fits_min_period(const F0Params& params) {
    return params.window >= 1.0 / params.f_min;
}

SampledSignal read_wav(std::string_view bytes) {
    if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
        raise(Errc::CorruptHeader, "not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::string_view data;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        std::string_view id = bytes.substr(pos, 4);
        std::uint32_t size = read_u32(bytes, pos + 4);
        pos += 8;
        if (size > bytes.size() - pos)
            raise(Errc::CorruptHeader, "truncated chunk \"" + std::string(id) + "\"");
        if (id == "fmt ") {
            if (size < 16) raise(Errc::CorruptHeader, "fmt chunk too small");
            format = read_u16(bytes, pos);
            channels = read_u16(bytes, pos + 2);
            rate = read_u32(bytes, pos + 4);
            bits = read_u16(bytes, pos + 14);
            have_fmt = true;
        } else if (id == "data") {
            if (!have_fmt) raise(Errc::CorruptHeader, "data chunk before fmt chunk");
            data = bytes.substr(pos, size);
            break;
        }
        pos += size + (size % 2); // chunks are word-aligned
    }

    if (!have_fmt) raise(Errc::CorruptHeader, "missing fmt chunk");
    if (data.data() == nullptr) raise(Errc::CorruptHeader, "missing data chunk");
    if (format != 1) raise(Errc::UnsupportedFormat, "only PCM format supported");
    if (channels != 1)
        raise(Errc::UnsupportedFormat,
              "only mono supported (got " + std::to_string(channels) + " channels)");
    if (bits != 16)
        raise(Errc::UnsupportedFormat,
              "only 16-bit samples supported (got " + std::to_string(bits) + ")");
    if (rate == 0) raise(Errc::CorruptHeader, "zero sample rate");

    SampledSignal signal;
    signal.sample_rate = static_cast<int>(rate);
    signal.samples.reserve(data.size() / 2);
    for (std::size_t i = 0; i + 1 < data.size(); i += 2) {
        auto lo = static_cast<std::uint8_t>(data[i]);
        auto hi = static_cast<std::int8_t>(data[i + 1]);
        auto value = static_cast<std::int16_t>((static_cast<std::int16_t>(hi) << 8) | lo);
        signal.samples.push_back(static_cast<double>(value) / 32768.0);
    }
    return signal;
}

bool validate_nyquist(double sample_rate, double f_signal_max) {
    return sample_rate > 2.0 * f_signal_max;
}

F0Track estimate_f0(const SampledSignal& signal, const F0Params& params, Exec exec) {
    if (!(params.f_min > 0.0) || !(params.f_max > params.f_min))
        raise(Errc::InvalidParameter, "need 0 < f_min < f_max");
    if (!(params.frame_step > 0.0) || !(params.window > 0.0))
        raise(Errc::InvalidParameter, "frame_step and window must be positive");
    if (!validate_nyquist(signal.sample_rate, params.f_max))
        raise(Errc::NyquistViolation,
              "sample rate " + std::to_string(signal.sample_rate) +
                  " Hz cannot resolve f_max " + std::to_string(params.f_max) + " Hz");

    const double sr = signal.sample_rate;
    const auto window = static_cast<std::size_t>(std::lround(params.window * sr));
    const auto step = static_cast<std::size_t>(std::lround(params.frame_step * sr));
    if (window == 0 || step == 0)
        raise(Errc::SignalTooShort, "frame step or window rounds to zero samples");
    if (signal.samples.size() < window)
        raise(Errc::SignalTooShort,
              "signal shorter than one analysis window (" + std::to_string(window) + " samples)");

    const auto lag_lo = static_cast<std::size_t>(std::floor(sr / params.f_max));
    const auto lag_hi = static_cast<std::size_t>(std::ceil(sr / params.f_min));
    const std::size_t n_frames = (signal.samples.size() - window) / step + 1;

    F0Track track;
    track.start = 0.0;
    track.frame_step = params.frame_step;
    track.f_min = params.f_min;
    track.f_max = params.f_max;
    track.frames.assign(n_frames, std::nullopt);

    auto run_frame = [&](std::size_t k) {
        FrameResult r = analyze_frame(signal.samples, k * step, window, lag_lo, lag_hi,
                                      params.voicing_threshold, params.f_min, params.f_max, sr);
        if (r.voiced) track.frames[k] = r.f0;
    };

    if (exec == Exec::Parallel) {
        const auto count = static_cast<std::ptrdiff_t>(n_frames);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < count; ++k)
            run_frame(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 0; k < n_frames; ++k) run_frame(k);
    }
    return track;
}

F0Track ingest_f0_csv(std::string_view content, std::optional<double> step_override) {
    // BOM tolerated on the header line.
    if (content.size() >= 3 && static_cast<unsigned char>(content[0]) == 0xEF &&
        static_cast<unsigned char>(content[1]) == 0xBB &&
        static_cast<unsigned char>(content[2]) == 0xBF)
        content.remove_prefix(3);

    std::size_t line_no = 0;
    bool saw_header = false;
    std::vector<double> times;
    std::vector<std::optional<double>> values;

    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string_view line = content.substr(pos, eol == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : eol - pos);
        pos = (eol == std::string_view::npos) ? content.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        if (!saw_header) {
            if (line != "time_s,f0_hz")
                raise(Errc::MalformedRow, "line " + std::to_string(line_no) +
                                              ": expected header \"time_s,f0_hz\"");
            saw_header = true;
            continue;
        }

        std::size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": missing comma");
        std::string_view time_field = line.substr(0, comma);
        std::string_view f0_field = line.substr(comma + 1);

        double t = 0.0;
        auto tres = std::from_chars(time_field.data(), time_field.data() + time_field.size(), t);
        if (tres.ec != std::errc() || tres.ptr != time_field.data() + time_field.size())
            raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": unreadable time");

        std::optional<double> f0;
        if (!f0_field.empty()) {
            double v = 0.0;
            auto fres = std::from_chars(f0_field.data(), f0_field.data() + f0_field.size(), v);
            if (fres.ec != std::errc() || fres.ptr != f0_field.data() + f0_field.size())
                raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": unreadable f0");
            if (v < 0.0)
                raise(Errc::NegativeF0, "line " + std::to_string(line_no) + ": negative f0");
            if (v > 0.0) f0 = v;
        }
        times.push_back(t);
        values.push_back(f0);
    }

    if (!saw_header)
        raise(Errc::MalformedRow, "missing header \"time_s,f0_hz\"");

    F0Track track;
    if (times.size() < 2) {
        if (!step_override) {
            raise(Errc::UnknownFrameStep,
                  "cannot infer frame step from " + std::to_string(times.size()) +
                      " row(s); supply a step override");
        }
        if (*step_override <= 0.0)
            raise(Errc::UnknownFrameStep, "step override must be positive");
        track.frame_step = *step_override;
        track.start = times.empty() ? 0.0 : times[0];
        track.frames = std::move(values);
        return track;
    }

    const double step = times[1] - times[0];
    if (step <= 0.0)
        raise(Errc::NonUniformSpacing, "times are not strictly ascending");
    constexpr double kTolerance = 1e-6;
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        const double gap = times[i + 1] - times[i];
        if (std::abs(gap - step) > kTolerance)
            raise(Errc::NonUniformSpacing,
                  "row spacing " + std::to_string(gap) + " s at row " + std::to_string(i + 2) +
                      " differs from " + std::to_string(step) + " s");
    }
    track.start = times[0];
    track.frame_step = step;
    track.frames = std::move(values);
    return track;
}

std::string f0_track_to_csv(const F0Track& track) {
    std::string out = "time_s,f0_hz\n";
    char buf[40];
    for (std::size_t i = 0; i < track.frames.size(); ++i) {
        auto r1 = std::to_chars(buf, buf + sizeof buf, track.time_at(i));
        out.append(buf, r1.ptr);
        out.push_back(',');
        const double value = track.frames[i].value_or(0.0);
        auto r2 = std::to_chars(buf, buf + sizeof buf, value);
        out.append(buf, r2.ptr);
        out.push_back('\n');
    }
    return out;
}

TrackStats track_stats(const F0Track& track) {
    std::vector<double> voiced;
    voiced.reserve(track.frames.size());
    for (const auto& f : track.frames)
        if (f) voiced.push_back(*f);
    if (voiced.empty())
        raise(Errc::NoVoicedFrames, "track has no voiced frames");

    TrackStats stats;
    stats.total_count = track.frames.size();
    stats.voiced_count = voiced.size();
    stats.min = *std::min_element(voiced.begin(), voiced.end());
    stats.max = *std::max_element(voiced.begin(), voiced.end());
    stats.mean = std::accumulate(voiced.begin(), voiced.end(), 0.0) /
                 static_cast<double>(voiced.size());
    std::sort(voiced.begin(), voiced.end());
    const std::size_t mid = voiced.size() / 2;
    stats.median = (voiced.size() % 2 == 1) ? voiced[mid]
                                            : 0.5 * (voiced[mid - 1] + voiced[mid]);
    return stats;
}

} // namespace prosokit
