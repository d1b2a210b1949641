#include "prosokit/scales.hpp"
#include "prosokit/errors.hpp"

#include <cmath>

namespace prosokit {

IntervalTable IntervalTable::standard() {
    return {{
        {"unison", 0.0},
        {"minor_third", 3.0},
        {"fourth", 5.0},
        {"fifth", 7.0},
        {"sixth", 9.0},
        {"octave", 12.0},
    }};
}

const NamedInterval& IntervalTable::nearest(double semitones) const {
    const NamedInterval* best = &entries.front();
    double best_diff = std::abs(semitones - best->semitones);
    for (const NamedInterval& entry : entries) {
        const double diff = std::abs(semitones - entry.semitones);
        if (diff < best_diff) { // strict: on a tie the earlier, smaller interval stays
            best = &entry;
            best_diff = diff;
        }
    }
    return *best;
}

double hz_to_semitones(double f, double base) {
    if (f <= 0.0 || base <= 0.0)
        raise(Errc::NonPositiveFrequency, "frequencies must be positive");
    return 12.0 * std::log2(f / base);
}

double semitones_to_ratio(double st) {
    return std::exp2(st / 12.0);
}

namespace {

double span_mean(const F0Track& track, TimeSpan span, const char* which) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < track.frames.size(); ++i) {
        if (!track.frames[i]) continue;
        const double t = track.time_at(i);
        if (t >= span.t0 && t < span.t1) {
            sum += *track.frames[i];
            ++count;
        }
    }
    if (count == 0)
        raise(Errc::NoVoicedFrames, std::string(which) + " has no voiced frames");
    return sum / static_cast<double>(count);
}

} // namespace

ChromaReport chroma_analyze(const F0Track& track, TimeSpan span1, TimeSpan span2,
                            const IntervalTable& table) {
    ChromaReport report;
    report.f0_1_mean = span_mean(track, span1, "span 1");
    report.f0_2_mean = span_mean(track, span2, "span 2");
    report.ratio = report.f0_1_mean / report.f0_2_mean;
    report.semitone_distance = 12.0 * std::log2(report.ratio);
    const NamedInterval& interval = table.nearest(report.semitone_distance);
    report.nearest_interval = interval.name;
    report.deviation_cents = (report.semitone_distance - interval.semitones) * 100.0;
    return report;
}

} // namespace prosokit
