#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace prosokit {

/// One labelled stretch of time. Point marks are stored with tmin == tmax.
struct LabelledInterval {
    double tmin = 0.0;
    double tmax = 0.0;
    std::string label;

    double duration() const { return tmax - tmin; }

    bool operator==(const LabelledInterval&) const = default;
};

enum class TierKind { Interval, Point };

struct Tier {
    std::string name;
    TierKind kind = TierKind::Interval;
    std::vector<LabelledInterval> items; // sorted by tmin, non-overlapping for interval tiers

    bool operator==(const Tier&) const = default;
};

/// Parsed content of a Praat TextGrid: parallel tiers of labelled intervals
/// or points over one time range.
struct Annotation {
    double xmin = 0.0;
    double xmax = 0.0;
    std::vector<Tier> tiers; // names unique, original order preserved

    /// nullptr when no tier has that name.
    const Tier* find_tier(std::string_view name) const;

    bool operator==(const Annotation&) const = default;
};

struct DurationEntry {
    std::string label;
    double duration_ms = 0.0;

    bool operator==(const DurationEntry&) const = default;
};

/// Interval durations in temporal order, in milliseconds, all > 0.
struct DurationSeries {
    std::vector<DurationEntry> entries;

    std::vector<double> values() const;

    bool operator==(const DurationSeries&) const = default;
};

/// Parse a TextGrid in Praat's long or short text format.
///
/// Accepts UTF-8 (with or without BOM) and UTF-16 LE/BE (BOM required).
/// Tier order and exact time values are preserved. Duplicate tier names,
/// intervals outside [xmin, xmax] and overlapping intervals are rejected.
Annotation parse_textgrid(std::string_view content);

/// Emit long-format TextGrid text (UTF-8, no BOM). Times are printed with
/// the shortest representation that parses back to the identical double,
/// so parse(serialize(a)) == a holds exactly.
std::string serialize_textgrid(const Annotation& annotation);

/// Mine interval durations from one tier, in milliseconds, temporal order.
/// Intervals whose label is in exclude_labels and zero-length intervals are
/// dropped.
DurationSeries extract_durations(const Annotation& annotation,
                                 std::string_view tier_name,
                                 const std::set<std::string>& exclude_labels = {});

/// Bucket durations by category_of[label]; labels without a mapping fall
/// into "other".
std::map<std::string, std::vector<double>>
group_by_label(const DurationSeries& series,
               const std::map<std::string, std::string>& category_of);

/// CSV with header `label,duration_ms`. Labels containing separators or
/// quotes are quoted with doubled inner quotes.
std::string duration_series_to_csv(const DurationSeries& series);

} // namespace prosokit
