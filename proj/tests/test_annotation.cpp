#include "prosokit/annotation.hpp"
#include "prosokit/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

using namespace prosokit;

namespace {

const char* kLongSample =
    "File type = \"ooTextFile\"\n"
    "Object class = \"TextGrid\"\n"
    "\n"
    "xmin = 0\n"
    "xmax = 0.8\n"
    "tiers? <exists>\n"
    "size = 1\n"
    "item []:\n"
    "    item [1]:\n"
    "        class = \"IntervalTier\"\n"
    "        name = \"syll\"\n"
    "        xmin = 0\n"
    "        xmax = 0.8\n"
    "        intervals: size = 2\n"
    "        intervals [1]:\n"
    "            xmin = 0\n"
    "            xmax = 0.35\n"
    "            text = \"ba\"\n"
    "        intervals [2]:\n"
    "            xmin = 0.35\n"
    "            xmax = 0.8\n"
    "            text = \"du\"\n";

const char* kShortSample =
    "File type = \"ooTextFile\"\n"
    "Object class = \"TextGrid\"\n"
    "\n"
    "0\n"
    "0.8\n"
    "<exists>\n"
    "1\n"
    "\"IntervalTier\"\n"
    "\"syll\"\n"
    "0\n"
    "0.8\n"
    "2\n"
    "0\n"
    "0.35\n"
    "\"ba\"\n"
    "0.35\n"
    "0.8\n"
    "\"du\"\n";

std::string to_utf16(const std::string& utf8, bool big_endian) {
    std::string out;
    out.push_back(big_endian ? '\xFE' : '\xFF');
    out.push_back(big_endian ? '\xFF' : '\xFE');
    auto put = [&](unsigned cp) {
        auto unit = [&](unsigned u) {
            if (big_endian) {
                out.push_back(static_cast<char>(u >> 8));
                out.push_back(static_cast<char>(u & 0xFF));
            } else {
                out.push_back(static_cast<char>(u & 0xFF));
                out.push_back(static_cast<char>(u >> 8));
            }
        };
        if (cp < 0x10000) {
            unit(cp);
        } else {
            cp -= 0x10000;
            unit(0xD800 + (cp >> 10));
            unit(0xDC00 + (cp & 0x3FF));
        }
    };
    for (std::size_t i = 0; i < utf8.size();) {
        const auto b = static_cast<unsigned char>(utf8[i]);
        unsigned cp = 0;
        std::size_t len = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b & 0xE0) == 0xC0) {
            cp = b & 0x1F;
            len = 2;
        } else if ((b & 0xF0) == 0xE0) {
            cp = b & 0x0F;
            len = 3;
        } else {
            cp = b & 0x07;
            len = 4;
        }
        for (std::size_t k = 1; k < len; ++k)
            cp = (cp << 6) | (static_cast<unsigned char>(utf8[i + k]) & 0x3F);
        put(cp);
        i += len;
    }
    return out;
}

Annotation sample_annotation() {
    Annotation a;
    a.xmin = 0.0;
    a.xmax = 0.8;
    Tier tier;
    tier.name = "syll";
    tier.kind = TierKind::Interval;
    tier.items = {{0.0, 0.35, "ba"}, {0.35, 0.8, "du"}};
    a.tiers.push_back(tier);
    return a;
}

Annotation random_annotation(std::mt19937& rng) {
    std::uniform_int_distribution<int> tier_count(0, 3);
    std::uniform_int_distribution<int> item_count(0, 6);
    std::uniform_real_distribution<double> duration(0.5, 20.0);
    const char* labels[] = {"", "a", "ma1", "label with space", "quote\"inside",
                            "comma,semi", "två ögon", "line\nbreak"};

    Annotation a;
    std::uniform_real_distribution<double> offset(0.0, 3.0);
    a.xmin = offset(rng);
    a.xmax = a.xmin + duration(rng);
    const int tiers = tier_count(rng);
    for (int t = 0; t < tiers; ++t) {
        Tier tier;
        tier.name = "tier" + std::to_string(t);
        tier.kind = (rng() % 3 == 0) ? TierKind::Point : TierKind::Interval;
        const int items = item_count(rng);
        std::vector<double> cuts;
        std::uniform_real_distribution<double> inside(a.xmin, a.xmax);
        for (int i = 0; i < items + 1; ++i) cuts.push_back(inside(rng));
        std::sort(cuts.begin(), cuts.end());
        for (int i = 0; i < items; ++i) {
            LabelledInterval item;
            if (tier.kind == TierKind::Interval) {
                item.tmin = cuts[i];
                item.tmax = cuts[i + 1];
            } else {
                item.tmin = item.tmax = cuts[i];
            }
            item.label = labels[rng() % (sizeof labels / sizeof labels[0])];
            tier.items.push_back(item);
        }
        a.tiers.push_back(tier);
    }
    return a;
}

} // namespace

TEST_CASE("long format parses field by field") {
    Annotation a = parse_textgrid(kLongSample);
    REQUIRE(a.tiers.size() == 1);
    CHECK(a.xmin == 0.0);
    CHECK(a.xmax == 0.8);
    const Tier& tier = a.tiers[0];
    CHECK(tier.name == "syll");
    CHECK(tier.kind == TierKind::Interval);
    REQUIRE(tier.items.size() == 2);
    CHECK(tier.items[0].tmin == 0.0);
    CHECK(tier.items[0].tmax == 0.35);
    CHECK(tier.items[0].label == "ba");
    CHECK(tier.items[1].tmin == 0.35);
    CHECK(tier.items[1].tmax == 0.8);
    CHECK(tier.items[1].label == "du");
}

TEST_CASE("short format gives the same structure") {
    CHECK(parse_textgrid(kShortSample) == parse_textgrid(kLongSample));
}

TEST_CASE("utf-16 inputs decode to the same structure") {
    const Annotation expected = parse_textgrid(kLongSample);
    CHECK(parse_textgrid(to_utf16(kLongSample, false)) == expected);
    CHECK(parse_textgrid(to_utf16(kLongSample, true)) == expected);
    CHECK(parse_textgrid(std::string("\xEF\xBB\xBF") + kLongSample) == expected);
}

TEST_CASE("parsing is deterministic") {
    CHECK(parse_textgrid(kLongSample) == parse_textgrid(kLongSample));
}

TEST_CASE("empty tier parses") {
    Annotation a;
    a.xmax = 1.0;
    a.tiers.push_back({"empty", TierKind::Interval, {}});
    Annotation parsed = parse_textgrid(serialize_textgrid(a));
    REQUIRE(parsed.tiers.size() == 1);
    CHECK(parsed.tiers[0].items.empty());
}

TEST_CASE("zero tiers serialize to a minimal file that parses back") {
    Annotation a;
    a.xmax = 2.5;
    Annotation parsed = parse_textgrid(serialize_textgrid(a));
    CHECK(parsed == a);
}

TEST_CASE("truncated file names the offending line") {
    std::string cut(kLongSample);
    cut.resize(cut.find("intervals [2]"));
    try {
        parse_textgrid(cut);
        FAIL("expected MalformedTextGrid");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedTextGrid);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("overlapping intervals are rejected") {
    std::string bad(kLongSample);
    const std::string from = "xmin = 0.35";
    bad.replace(bad.find(from), from.size(), "xmin = 0.30");
    CHECK_THROWS_WITH_AS(parse_textgrid(bad), doctest::Contains("overlap"), Error);
    try {
        parse_textgrid(bad);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OverlappingIntervals);
    }
}

TEST_CASE("duplicate tier names are rejected") {
    Annotation a = sample_annotation();
    a.tiers.push_back(a.tiers[0]);
    CHECK_THROWS_AS(parse_textgrid(serialize_textgrid(a)), Error);
}

TEST_CASE("interval outside the time range is rejected") {
    std::string bad(kLongSample);
    const std::string from = "xmax = 0.8\n"
                             "            text = \"du\"";
    REQUIRE(bad.find(from) != std::string::npos);
    bad.replace(bad.find(from), from.size(),
                "xmax = 0.9\n"
                "            text = \"du\"");
    CHECK_THROWS_AS(parse_textgrid(bad), Error);
}

TEST_CASE("labels with quotes, newlines and non-ascii round-trip") {
    Annotation a;
    a.xmax = 3.0;
    Tier tier;
    tier.name = "mixed \"names\"";
    tier.items = {{0.0, 1.0, "a \"quoted\" label"},
                  {1.0, 2.0, "två\nlines"},
                  {2.0, 3.0, "日本語 \xF0\x9D\x84\x9E"}}; // includes a non-BMP char
    a.tiers.push_back(tier);
    CHECK(parse_textgrid(serialize_textgrid(a)) == a);
    // and through UTF-16, which needs a surrogate pair for the last label
    CHECK(parse_textgrid(to_utf16(serialize_textgrid(a), false)) == a);
    CHECK(parse_textgrid(to_utf16(serialize_textgrid(a), true)) == a);
}

TEST_CASE("crlf line endings parse like lf") {
    std::string crlf(kLongSample);
    std::size_t pos = 0;
    while ((pos = crlf.find('\n', pos)) != std::string::npos) {
        crlf.replace(pos, 1, "\r\n");
        pos += 2;
    }
    CHECK(parse_textgrid(crlf) == parse_textgrid(kLongSample));
}

TEST_CASE("point tiers are preserved") {
    Annotation a;
    a.xmax = 2.0;
    a.tiers.push_back({"events", TierKind::Point, {{0.5, 0.5, "ding"}, {1.5, 1.5, "dong"}}});
    Annotation parsed = parse_textgrid(serialize_textgrid(a));
    CHECK(parsed == a);
    CHECK(parsed.tiers[0].kind == TierKind::Point);
}

TEST_CASE("round-trip property on random annotations") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 50; ++i) {
        Annotation a = random_annotation(rng);
        const std::string text = serialize_textgrid(a);
        Annotation parsed = parse_textgrid(text);
        REQUIRE(parsed == a);
        // parse . serialize . parse is parse
        CHECK(parse_textgrid(serialize_textgrid(parsed)) == parsed);
    }
}

TEST_CASE("mutated inputs either parse or raise a typed error") {
    std::mt19937 rng(613);
    const std::string base = kLongSample;
    std::uniform_int_distribution<std::size_t> pos(0, base.size() - 1);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int rep = 0; rep < 400; ++rep) {
        std::string mutated = base;
        const int edits = 1 + rep % 3;
        for (int e = 0; e < edits; ++e) {
            switch (rng() % 3) {
            case 0: mutated[pos(rng) % mutated.size()] = static_cast<char>(byte(rng)); break;
            case 1: mutated.erase(pos(rng) % mutated.size(), 1 + rng() % 20); break;
            default:
                mutated.insert(pos(rng) % mutated.size(), 1, static_cast<char>(byte(rng)));
            }
            if (mutated.empty()) mutated = "x";
        }
        try {
            Annotation a = parse_textgrid(mutated);
            // whatever parsed must serialize and re-parse to itself
            CHECK(parse_textgrid(serialize_textgrid(a)) == a);
        } catch (const Error&) {
            // rejected with a typed error: fine
        }
    }
}

TEST_CASE("extract_durations mines a how-are-you style tier") {
    Annotation a;
    a.xmax = 0.732;
    a.tiers.push_back({"word",
                       TierKind::Interval,
                       {{0.0, 0.2, "how"}, {0.2, 0.449, "are"}, {0.449, 0.732, "you"}}});
    DurationSeries series = extract_durations(a, "word");
    REQUIRE(series.entries.size() == 3);
    CHECK(series.entries[0].duration_ms == doctest::Approx(200.0));
    CHECK(series.entries[1].duration_ms == doctest::Approx(249.0));
    CHECK(series.entries[2].duration_ms == doctest::Approx(283.0));
    CHECK(series.entries[0].label == "how");
}

TEST_CASE("extract_durations edge cases") {
    Annotation a;
    a.xmax = 1.0;
    a.tiers.push_back({"empty", TierKind::Interval, {}});
    a.tiers.push_back({"syll", TierKind::Interval, {{0.0, 0.4, ""}, {0.4, 0.4, "zero"}, {0.4, 1.0, "ba"}}});
    a.tiers.push_back({"events", TierKind::Point, {{0.5, 0.5, "x"}}});

    CHECK(extract_durations(a, "empty").entries.empty());

    DurationSeries series = extract_durations(a, "syll", {""});
    REQUIRE(series.entries.size() == 1); // pause excluded, zero-length dropped
    CHECK(series.entries[0].label == "ba");

    CHECK(extract_durations(a, "syll", {"", "ba"}).entries.empty());

    CHECK_THROWS_AS(extract_durations(a, "nope"), Error);
    try {
        extract_durations(a, "nope");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownTier);
    }
    try {
        extract_durations(a, "events");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotIntervalTier);
    }
}

TEST_CASE("durations never exceed the annotated range") {
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        Annotation a = random_annotation(rng);
        for (const Tier& tier : a.tiers) {
            if (tier.kind != TierKind::Interval) continue;
            DurationSeries series = extract_durations(a, tier.name);
            CHECK(series.entries.size() <= tier.items.size());
            double total = 0.0;
            for (const auto& e : series.entries) total += e.duration_ms;
            CHECK(total <= (a.xmax - a.xmin) * 1000.0 + 1e-6);
        }
    }
}

TEST_CASE("group_by_label") {
    DurationSeries series;
    series.entries = {{"ma1", 10.0}, {"ma1", 20.0}, {"ma3", 30.0}};

    SUBCASE("identity mapping") {
        auto groups = group_by_label(series, {{"ma1", "ma1"}, {"ma3", "ma3"}});
        REQUIRE(groups.size() == 2);
        CHECK(groups["ma1"] == std::vector<double>{10.0, 20.0});
        CHECK(groups["ma3"] == std::vector<double>{30.0});
    }
    SUBCASE("empty series") {
        CHECK(group_by_label({}, {}).empty());
    }
    SUBCASE("stress classes with an unmapped label") {
        DurationSeries stress;
        stress.entries = {{"pri", 1.0}, {"sec", 2.0}, {"uns", 3.0}, {"uns", 4.0}, {"???", 5.0}};
        auto groups = group_by_label(stress, {{"pri", "primary"},
                                              {"sec", "secondary"},
                                              {"uns", "unstressed"}});
        REQUIRE(groups.size() == 4);
        CHECK(groups["primary"] == std::vector<double>{1.0});
        CHECK(groups["secondary"] == std::vector<double>{2.0});
        CHECK(groups["unstressed"] == std::vector<double>{3.0, 4.0});
        CHECK(groups["other"] == std::vector<double>{5.0});
    }
}

TEST_CASE("duration series csv") {
    DurationSeries series;
    series.entries = {{"plain", 200.0}, {"with,comma", 249.5}, {"with\"quote", 283.0}};
    const std::string csv = duration_series_to_csv(series);
    CHECK(csv == "label,duration_ms\n"
                 "plain,200\n"
                 "\"with,comma\",249.5\n"
                 "\"with\"\"quote\",283\n");
}
