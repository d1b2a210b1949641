#pragma once

#include "prosokit/signal.hpp"

#include <string>
#include <vector>

namespace prosokit {

/// Just-intonation minor third, kept as a reference constant only; all
/// conversions here use the tempered scale.
inline constexpr double kJustMinorThirdRatio = 1.2;

struct NamedInterval {
    std::string name;
    double semitones = 0.0;
};

/// Tempered intervals used to classify frequency ratios. ratio = 2^(st/12)
/// for every entry.
struct IntervalTable {
    std::vector<NamedInterval> entries; // ascending by semitones

    static IntervalTable standard();

    /// Entry minimizing |semitones - entry.semitones|; ties go to the
    /// smaller interval.
    const NamedInterval& nearest(double semitones) const;
};

/// 12 * log2(f / base). Both frequencies must be positive.
double hz_to_semitones(double f, double base);

/// 2^(st/12).
double semitones_to_ratio(double st);

/// Musical-interval reading of a two-level chanted contour.
struct ChromaReport {
    double f0_1_mean = 0.0;        // Hz, first (higher) span
    double f0_2_mean = 0.0;        // Hz, second span
    double ratio = 0.0;            // f0_1_mean / f0_2_mean
    double semitone_distance = 0.0;
    std::string nearest_interval;
    double deviation_cents = 0.0;  // distance minus the named interval, in cents
};

/// Mean F0 over the voiced frames of each half-open span, then the
/// interval between the two means. Classification against the table is a
/// reporting convention; in the gaps between named intervals the deviation
/// can exceed half a semitone.
ChromaReport chroma_analyze(const F0Track& track, TimeSpan span1, TimeSpan span2,
                            const IntervalTable& table = IntervalTable::standard());

} // namespace prosokit
