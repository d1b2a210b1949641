#include "prosokit/annotation.hpp"
#include "prosokit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>

namespace prosokit {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string decode_utf16(std::string_view bytes, bool big_endian) {
    if (bytes.size() % 2 != 0)
        raise(Errc::EncodingError, "UTF-16 content has an odd byte count");
    std::string out;
    out.reserve(bytes.size() / 2);
    auto unit = [&](std::size_t i) -> std::uint32_t {
        auto lo = static_cast<std::uint8_t>(bytes[i]);
        auto hi = static_cast<std::uint8_t>(bytes[i + 1]);
        return big_endian ? (static_cast<std::uint32_t>(lo) << 8 | hi)
                          : (static_cast<std::uint32_t>(hi) << 8 | lo);
    };
    for (std::size_t i = 0; i < bytes.size(); i += 2) {
        std::uint32_t u = unit(i);
        if (u >= 0xD800 && u <= 0xDBFF) {
            if (i + 3 >= bytes.size())
                raise(Errc::EncodingError, "truncated UTF-16 surrogate pair");
            std::uint32_t low = unit(i + 2);
            if (low < 0xDC00 || low > 0xDFFF)
                raise(Errc::EncodingError, "unpaired UTF-16 high surrogate");
            append_utf8(out, 0x10000 + ((u - 0xD800) << 10) + (low - 0xDC00));
            i += 2;
        } else if (u >= 0xDC00 && u <= 0xDFFF) {
            raise(Errc::EncodingError, "unpaired UTF-16 low surrogate");
        } else {
            append_utf8(out, u);
        }
    }
    return out;
}

// BOM-detected UTF-16 is converted; everything else is taken as UTF-8.
std::string decode_to_utf8(std::string_view bytes) {
    if (bytes.size() >= 2) {
        auto b0 = static_cast<std::uint8_t>(bytes[0]);
        auto b1 = static_cast<std::uint8_t>(bytes[1]);
        if (b0 == 0xFF && b1 == 0xFE) return decode_utf16(bytes.substr(2), false);
        if (b0 == 0xFE && b1 == 0xFF) return decode_utf16(bytes.substr(2), true);
    }
    if (bytes.size() >= 3 && static_cast<std::uint8_t>(bytes[0]) == 0xEF &&
        static_cast<std::uint8_t>(bytes[1]) == 0xBB &&
        static_cast<std::uint8_t>(bytes[2]) == 0xBF)
        bytes.remove_prefix(3);
    return std::string(bytes);
}

// Token scanner over decoded TextGrid text. Both the long and the short
// format carry the same value sequence; long-format key names never contain
// digits and indices appear in brackets, so skipping keys and bracketed
// runs leaves exactly the value tokens.
class TextGridLexer {
public:
    explicit TextGridLexer(std::string text) : text_(std::move(text)) {}

    std::size_t line() const { return line_; }

    double next_number(const char* what) {
        seek_token(what);
        char c = text_[pos_];
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.'))
            fail(std::string("expected a number for ") + what);
        std::size_t end = pos_;
        while (end < text_.size()) {
            char e = text_[end];
            if (std::isdigit(static_cast<unsigned char>(e)) || e == '.' || e == '-' ||
                e == '+' || e == 'e' || e == 'E')
                ++end;
            else
                break;
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + pos_, text_.data() + end, value);
        if (res.ec != std::errc())
            fail(std::string("unreadable number for ") + what);
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        return value;
    }

    std::string next_string(const char* what) {
        seek_token(what);
        if (text_[pos_] != '"')
            fail(std::string("expected a quoted string for ") + what);
        ++pos_;
        std::string out;
        while (true) {
            if (pos_ >= text_.size())
                fail(std::string("unterminated string for ") + what);
            char c = text_[pos_];
            if (c == '"') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                    out.push_back('"');
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                return out;
            }
            if (c == '\n') ++line_;
            out.push_back(c);
            ++pos_;
        }
    }

    bool next_exists_flag(const char* what) {
        seek_token(what);
        if (text_[pos_] != '<')
            fail(std::string("expected <exists> or <absent> for ") + what);
        std::size_t close = text_.find('>', pos_);
        if (close == std::string::npos)
            fail("unterminated flag");
        std::string_view flag(text_.data() + pos_ + 1, close - pos_ - 1);
        pos_ = close + 1;
        if (flag == "exists") return true;
        if (flag == "absent") return false;
        fail("unknown flag <" + std::string(flag) + ">");
    }

private:
    // Advance to the start of the next value token: a quoted string, a
    // number, or an <exists>/<absent> flag. Bracketed indices are skipped.
    void seek_token(const char* what) {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == '[') {
                std::size_t close = text_.find(']', pos_);
                if (close == std::string::npos) fail("unterminated index bracket");
                pos_ = close + 1;
            } else if (c == '"' || c == '<' ||
                       std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
                       (c == '.' && pos_ + 1 < text_.size() &&
                        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                return;
            } else {
                ++pos_;
            }
        }
        fail(std::string("unexpected end of file while reading ") + what);
    }

    [[noreturn]] void fail(const std::string& message) const {
        raise(Errc::MalformedTextGrid,
              "line " + std::to_string(line_) + ": " + message);
    }

    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

void validate(const Annotation& a) {
    if (a.xmin > a.xmax)
        raise(Errc::MalformedTextGrid, "time range has xmin > xmax");
    std::set<std::string> seen;
    for (const Tier& tier : a.tiers) {
        if (!seen.insert(tier.name).second)
            raise(Errc::MalformedTextGrid, "duplicate tier name \"" + tier.name + "\"");
        const LabelledInterval* prev = nullptr;
        for (const LabelledInterval& item : tier.items) {
            if (item.tmin > item.tmax)
                raise(Errc::MalformedTextGrid,
                      "tier \"" + tier.name + "\": interval with tmin > tmax");
            if (item.tmin < a.xmin || item.tmax > a.xmax)
                raise(Errc::MalformedTextGrid,
                      "tier \"" + tier.name + "\": interval outside [xmin, xmax]");
            if (prev) {
                if (tier.kind == TierKind::Interval && prev->tmax > item.tmin)
                    raise(Errc::OverlappingIntervals,
                          "tier \"" + tier.name + "\": intervals overlap near t=" +
                              std::to_string(item.tmin));
                if (tier.kind == TierKind::Point && prev->tmin > item.tmin)
                    raise(Errc::MalformedTextGrid,
                          "tier \"" + tier.name + "\": points out of order");
            }
            prev = &item;
        }
    }
}

// Shortest decimal form that parses back to the same double.
std::string format_time(double value) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        out.push_back(c);
        if (c == '"') out.push_back('"');
    }
    out.push_back('"');
    return out;
}

} // namespace

const Tier* Annotation::find_tier(std::string_view name) const {
    for (const Tier& tier : tiers)
        if (tier.name == name) return &tier;
    return nullptr;
}

std::vector<double> DurationSeries::values() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const DurationEntry& e : entries) out.push_back(e.duration_ms);
    return out;
}

Annotation parse_textgrid(std::string_view content) {
    TextGridLexer lex(decode_to_utf8(content));

    if (lex.next_string("file type") != "ooTextFile")
        raise(Errc::MalformedTextGrid, "not an ooTextFile");
    if (lex.next_string("object class") != "TextGrid")
        raise(Errc::MalformedTextGrid, "object class is not TextGrid");

    Annotation a;
    a.xmin = lex.next_number("xmin");
    a.xmax = lex.next_number("xmax");
    if (lex.next_exists_flag("tiers?")) {
        double size = lex.next_number("tier count");
        if (size < 0) raise(Errc::MalformedTextGrid, "negative tier count");
        a.tiers.reserve(static_cast<std::size_t>(size));
        for (std::size_t t = 0; t < static_cast<std::size_t>(size); ++t) {
            Tier tier;
            std::string cls = lex.next_string("tier class");
            if (cls == "IntervalTier")
                tier.kind = TierKind::Interval;
            else if (cls == "TextTier")
                tier.kind = TierKind::Point;
            else
                raise(Errc::MalformedTextGrid,
                      "line " + std::to_string(lex.line()) + ": unknown tier class \"" + cls + "\"");
            tier.name = lex.next_string("tier name");
            lex.next_number("tier xmin");
            lex.next_number("tier xmax");
            double count = lex.next_number("item count");
            if (count < 0) raise(Errc::MalformedTextGrid, "negative item count");
            tier.items.reserve(static_cast<std::size_t>(count));
            for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
                LabelledInterval item;
                if (tier.kind == TierKind::Interval) {
                    item.tmin = lex.next_number("interval xmin");
                    item.tmax = lex.next_number("interval xmax");
                    item.label = lex.next_string("interval text");
                } else {
                    item.tmin = item.tmax = lex.next_number("point time");
                    item.label = lex.next_string("point mark");
                }
                tier.items.push_back(std::move(item));
            }
            a.tiers.push_back(std::move(tier));
        }
    }

    validate(a);
    return a;
}

std::string serialize_textgrid(const Annotation& a) {
    std::string out;
    out += "File type = \"ooTextFile\"\n";
    out += "Object class = \"TextGrid\"\n\n";
    out += "xmin = " + format_time(a.xmin) + "\n";
    out += "xmax = " + format_time(a.xmax) + "\n";
    out += "tiers? <exists>\n";
    out += "size = " + std::to_string(a.tiers.size()) + "\n";
    out += "item []:\n";
    for (std::size_t t = 0; t < a.tiers.size(); ++t) {
        const Tier& tier = a.tiers[t];
        out += "    item [" + std::to_string(t + 1) + "]:\n";
        out += "        class = ";
        out += (tier.kind == TierKind::Interval) ? "\"IntervalTier\"\n" : "\"TextTier\"\n";
        out += "        name = " + quote(tier.name) + "\n";
        out += "        xmin = " + format_time(a.xmin) + "\n";
        out += "        xmax = " + format_time(a.xmax) + "\n";
        if (tier.kind == TierKind::Interval) {
            out += "        intervals: size = " + std::to_string(tier.items.size()) + "\n";
            for (std::size_t i = 0; i < tier.items.size(); ++i) {
                const LabelledInterval& item = tier.items[i];
                out += "        intervals [" + std::to_string(i + 1) + "]:\n";
                out += "            xmin = " + format_time(item.tmin) + "\n";
                out += "            xmax = " + format_time(item.tmax) + "\n";
                out += "            text = " + quote(item.label) + "\n";
            }
        } else {
            out += "        points: size = " + std::to_string(tier.items.size()) + "\n";
            for (std::size_t i = 0; i < tier.items.size(); ++i) {
                const LabelledInterval& item = tier.items[i];
                out += "        points [" + std::to_string(i + 1) + "]:\n";
                out += "            number = " + format_time(item.tmin) + "\n";
                out += "            mark = " + quote(item.label) + "\n";
            }
        }
    }
    return out;
}

DurationSeries extract_durations(const Annotation& annotation,
                                 std::string_view tier_name,
                                 const std::set<std::string>& exclude_labels) {
    const Tier* tier = annotation.find_tier(tier_name);
    if (!tier)
        raise(Errc::UnknownTier, "no tier named \"" + std::string(tier_name) + "\"");
    if (tier->kind != TierKind::Interval)
        raise(Errc::NotIntervalTier,
              "tier \"" + std::string(tier_name) + "\" is a point tier");
    DurationSeries series;
    for (const LabelledInterval& item : tier->items) {
        if (item.tmax <= item.tmin) continue;
        if (exclude_labels.count(item.label)) continue;
        series.entries.push_back({item.label, (item.tmax - item.tmin) * 1000.0});
    }
    return series;
}

std::map<std::string, std::vector<double>>
group_by_label(const DurationSeries& series,
               const std::map<std::string, std::string>& category_of) {
    std::map<std::string, std::vector<double>> groups;
    for (const DurationEntry& e : series.entries) {
        auto it = category_of.find(e.label);
        const std::string& category = (it == category_of.end()) ? std::string("other") : it->second;
        groups[category].push_back(e.duration_ms);
    }
    return groups;
}

std::string duration_series_to_csv(const DurationSeries& series) {
    std::string out = "label,duration_ms\n";
    for (const DurationEntry& e : series.entries) {
        bool needs_quote = e.label.find_first_of(",\"\n") != std::string::npos;
        out += needs_quote ? quote(e.label) : e.label;
        out += ',';
        char buf[40];
        auto res = std::to_chars(buf, buf + sizeof buf, e.duration_ms);
        out.append(buf, res.ptr);
        out += '\n';
    }
    return out;
}

} // namespace prosokit
