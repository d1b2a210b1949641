#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prosokit {

/// Execution policy for kernels that have both a plain serial reference
/// path and an OpenMP path. Both produce bit-identical results.
enum class Exec { Serial, Parallel };

/// Half-open time span [t0, t1).
struct TimeSpan {
    double t0 = 0.0;
    double t1 = 0.0;
};

/// Mono PCM audio, samples normalized to [-1, 1].
struct SampledSignal {
    int sample_rate = 0;
    std::vector<double> samples;

    double duration() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

/// Framewise fundamental-frequency series. A frame without a value is
/// unvoiced. Frame i sits at time start + i * frame_step.
struct F0Track {
    double start = 0.0;
    double frame_step = 0.01;
    std::vector<std::optional<double>> frames;

    // Search range of the producing analysis, when known.
    std::optional<double> f_min;
    std::optional<double> f_max;

    double time_at(std::size_t i) const { return start + static_cast<double>(i) * frame_step; }

    std::size_t voiced_count() const;

    bool operator==(const F0Track&) const = default;
};

struct F0Params {
    double f_min = 70.0;             // Hz, lower bound of the search range
    double f_max = 400.0;            // Hz, upper bound of the search range
    double frame_step = 0.01;        // s
    double window = 0.02;            // s, correlation window length
    double voicing_threshold = 0.3;  // peak normalized correlation needed for voicing
};

/// True when at least one full period of the lowest search frequency fits
/// in the analysis window. The CLI warns when this fails.
bool window_fits_min_period(const F0Params& params);

/// Read a RIFF/WAVE container holding 16-bit mono PCM. Samples are scaled
/// by 1/32768.
SampledSignal read_wav(std::string_view bytes);

/// Strict sampling condition: sample_rate > 2 * f_signal_max.
bool validate_nyquist(double sample_rate, double f_signal_max);

/// Estimate F0 by normalized autocorrelation over 10 ms frames (by default).
///
/// Per frame, the correlation of the analysis window with itself shifted by
/// every candidate lag in [1/f_max, 1/f_min] is evaluated; the frame is
/// voiced when the best peak exceeds params.voicing_threshold, and the lag
/// of the peak (refined by parabolic interpolation, with a preference for
/// the shortest lag among near-equal peaks to avoid octave errors) gives
/// the frequency. Frames are independent, so the parallel path partitions
/// them across threads and is bit-identical to the serial reference.
F0Track estimate_f0(const SampledSignal& signal, const F0Params& params = {},
                    Exec exec = Exec::Parallel);

/// Read the `time_s,f0_hz` CSV format. Empty or zero f0 marks an unvoiced
/// frame. Row spacing must be uniform to 1e-6 s; the spacing becomes the
/// frame step. With fewer than two rows the step cannot be inferred and
/// step_override is required.
F0Track ingest_f0_csv(std::string_view content,
                      std::optional<double> step_override = std::nullopt);

/// Inverse of ingest_f0_csv: unvoiced frames are written as 0.
std::string f0_track_to_csv(const F0Track& track);

struct TrackStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
    std::size_t voiced_count = 0;
    std::size_t total_count = 0;
};

/// Statistics over voiced frames only.
TrackStats track_stats(const F0Track& track);

} // namespace prosokit
