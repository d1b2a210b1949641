#include "prosokit/cli.hpp"

#include "prosokit/annotation.hpp"
#include "prosokit/errors.hpp"
#include "prosokit/metrics.hpp"
#include "prosokit/render.hpp"
#include "prosokit/scales.hpp"
#include "prosokit/signal.hpp"
#include "prosokit/stylize.hpp"
#include "prosokit/tonefst.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace prosokit::cli {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kSchemaVersion = "1";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write \"" + path + "\"");
    out << content;
}

// Defaults shared by all subcommands; a config file overrides these and
// command-line flags override the config file.
struct ToolConfig {
    F0Params f0;
    SdMode sd_mode = SdMode::Sample;
    QuartileMethod quartiles = QuartileMethod::Inclusive;
    std::string tier;
    std::vector<std::string> exclude_labels{""};
    int plot_width = 1000;
    int plot_height = 400;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(text.substr(pos));
            return out;
        }
        out.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config key \"" + key + "\": not a number: \"" + value + "\"");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config key \"" + key + "\": not an integer: \"" + value + "\"");
    }
}

// Plain key=value lines; '#' starts a comment; unknown keys are an error.
ToolConfig load_config(const std::string& path) {
    ToolConfig config;
    std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t");
        line = line.substr(begin, end - begin + 1);

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
            value.erase(value.begin());

        if (key == "f0.f_min") config.f0.f_min = parse_double(key, value);
        else if (key == "f0.f_max") config.f0.f_max = parse_double(key, value);
        else if (key == "f0.frame_step") config.f0.frame_step = parse_double(key, value);
        else if (key == "f0.window") config.f0.window = parse_double(key, value);
        else if (key == "f0.voicing_threshold") config.f0.voicing_threshold = parse_double(key, value);
        else if (key == "metrics.sd_denominator") {
            if (value == "sample") config.sd_mode = SdMode::Sample;
            else if (value == "population") config.sd_mode = SdMode::Population;
            else throw UsageError("config key \"" + key + "\": expected sample or population");
        } else if (key == "metrics.quartile_method") {
            if (value == "inclusive") config.quartiles = QuartileMethod::Inclusive;
            else if (value == "exclusive") config.quartiles = QuartileMethod::Exclusive;
            else throw UsageError("config key \"" + key + "\": expected inclusive or exclusive");
        } else if (key == "tier") config.tier = value;
        else if (key == "exclude_labels") config.exclude_labels = split(value, ',');
        else if (key == "plot.width") config.plot_width = parse_int(key, value);
        else if (key == "plot.height") config.plot_height = parse_int(key, value);
        else throw UsageError("unknown config key \"" + key + "\"");
    }
    return config;
}

void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        out << content;
    else
        write_file(out_path, content);
}

std::string json_text(const ordered_json& doc) { return doc.dump(2) + "\n"; }

long long display_round(double v) { return std::llround(v); }

// Process inputs independently; a failure in one does not abort the rest.
// Returns the number of failures after printing one diagnostic per failure.
std::size_t for_each_input(const std::vector<std::string>& inputs, std::ostream& err,
                           const std::function<void(const std::string&)>& fn) {
    std::size_t failures = 0;
    for (const std::string& input : inputs) {
        try {
            fn(input);
        } catch (const UsageError&) {
            throw; // invocation problem, not a per-file data problem
        } catch (const Error& e) {
            err << input << ": error: " << e.what() << "\n";
            ++failures;
        } catch (const std::runtime_error& e) {
            err << input << ": error: " << e.what() << "\n";
            ++failures;
        }
    }
    if (failures > 0 && inputs.size() > 1)
        err << failures << " of " << inputs.size() << " inputs failed\n";
    return failures;
}

void require_single_input_for(const std::vector<std::string>& inputs,
                              const std::string& value, const char* flag) {
    if (inputs.size() > 1 && !value.empty())
        throw UsageError(std::string(flag) +
                         " applies to a single input; use --out-dir for batches");
}

std::string derived_output_path(const std::string& input, const std::string& out_dir,
                                const std::string& new_extension) {
    fs::path p(input);
    p.replace_extension(new_extension);
    if (!out_dir.empty()) p = fs::path(out_dir) / p.filename();
    return p.string();
}

std::set<std::string> label_set(const std::vector<std::string>& labels) {
    return {labels.begin(), labels.end()};
}

DurationSeries durations_for(const std::string& path, const std::string& tier,
                             const std::vector<std::string>& exclude) {
    if (tier.empty())
        throw UsageError("--tier is required (or set tier= in the config file)");
    Annotation a = parse_textgrid(read_file(path));
    return extract_durations(a, tier, label_set(exclude));
}

ordered_json metrics_json(const MetricsReport& report, SdMode mode) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["n"] = report.n;
    doc["mean_ms"] = report.mean;
    doc["median_ms"] = report.median;
    doc["min_ms"] = report.min;
    doc["max_ms"] = report.max;
    doc["sd"] = display_round(report.sd);
    doc["sd_exact"] = report.sd;
    doc["coeff_var"] = display_round(report.coeff_var);
    doc["coeff_var_exact"] = report.coeff_var;
    doc["rpvi"] = display_round(report.rpvi);
    doc["rpvi_exact"] = report.rpvi;
    doc["npvi"] = display_round(report.npvi);
    doc["npvi_exact"] = report.npvi;
    doc["vi_det"] = display_round(report.vi_det);
    doc["vi_det_exact"] = report.vi_det;
    doc["sd_denominator"] = (mode == SdMode::Sample) ? "sample" : "population";
    return doc;
}

std::string number_csv(double v) {
    ordered_json j = v; // shortest round-trip formatting
    return j.dump();
}

std::string metrics_csv_row(const MetricsReport& r) {
    return std::to_string(r.n) + "," + number_csv(r.mean) + "," + number_csv(r.median) + "," +
           number_csv(r.min) + "," + number_csv(r.max) + "," + number_csv(r.sd) + "," +
           number_csv(r.coeff_var) + "," + number_csv(r.rpvi) + "," + number_csv(r.npvi) +
           "," + number_csv(r.vi_det);
}

ordered_json window_json(const WindowSeries& ws) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["window"] = ws.window;
    doc["step"] = ws.step;
    doc["values"] = ws.values;
    doc["sorted_values"] = ws.sorted_values;
    doc["summary"] = {{"mean", ws.summary.mean},
                      {"sd", ws.summary.sd},
                      {"coeff_var", ws.summary.coeff_var}};
    return doc;
}

std::string window_csv(const WindowSeries& ws, const std::string& file_prefix) {
    std::string out;
    for (std::size_t i = 0; i < ws.values.size(); ++i)
        out += file_prefix + std::to_string(i) + "," + number_csv(ws.values[i]) + "," +
               number_csv(ws.sorted_values[i]) + "\n";
    return out;
}

std::string box_csv_rows(const std::map<std::string, BoxStat>& stats,
                         const std::string& file_prefix) {
    std::string out;
    for (const auto& [category, s] : stats)
        out += file_prefix + category + "," + std::to_string(s.n) + "," + number_csv(s.min) +
               "," + number_csv(s.q1) + "," + number_csv(s.median) + "," + number_csv(s.q3) +
               "," + number_csv(s.max) + "," + number_csv(s.mean) + "\n";
    return out;
}

ordered_json rate_json(const SpeechRate& rate, std::size_t n) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["n"] = n;
    doc["median_rate_per_s"] = rate.median_rate;
    doc["median_duration_ms"] = rate.median_duration;
    doc["mean_duration_ms"] = rate.mean_duration;
    doc["min_ms"] = rate.min;
    doc["max_ms"] = rate.max;
    return doc;
}

ordered_json poly_json(const PolyModel& model) {
    ordered_json doc;
    doc["domain_s"] = {model.t0, model.t1};
    doc["degree"] = model.degree();
    doc["coeffs"] = model.coeffs;
    doc["rmse_hz"] = model.rmse;
    return doc;
}

ordered_json stylize_json(const StylizationResult& result, const LinearModel& linear) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["normalization"] = "per-domain time x = (t - t0) / (t1 - t0)";
    doc["global"] = poly_json(result.global);
    doc["locals"] = ordered_json::array();
    for (const PolyModel& local : result.locals) doc["locals"].push_back(poly_json(local));
    doc["skipped"] = ordered_json::array();
    for (const SkippedDomain& s : result.skipped)
        doc["skipped"].push_back({{"index", s.index},
                                  {"domain_s", {s.span.t0, s.span.t1}},
                                  {"reason", s.reason}});
    doc["linear"] = {{"intercept_hz", linear.intercept},
                     {"slope_hz_per_frame", linear.slope},
                     {"sd_residual_hz", linear.sd_residual}};
    return doc;
}

ordered_json chroma_json(const ChromaReport& report) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["f0_1_mean_hz"] = report.f0_1_mean;
    doc["f0_2_mean_hz"] = report.f0_2_mean;
    doc["ratio"] = report.ratio;
    doc["semitone_distance"] = report.semitone_distance;
    doc["nearest_interval"] = report.nearest_interval;
    doc["deviation_cents"] = report.deviation_cents;
    return doc;
}

TimeSpan parse_span(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("span must be t0:t1, got \"" + text + "\"");
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw UsageError("span must be t0:t1, got \"" + text + "\"");
    }
}

// Tone tier labels name the syllable with the lexical tone as last char.
std::vector<std::pair<std::string, char>> tones_from_tier(const Annotation& a,
                                                          const std::string& tier_name) {
    const Tier* tier = a.find_tier(tier_name);
    if (!tier)
        raise(Errc::UnknownTier, "no tier named \"" + tier_name + "\"");
    std::vector<std::pair<std::string, char>> out;
    for (const LabelledInterval& item : tier->items) {
        if (item.label.empty()) continue;
        char tone = item.label.back();
        if (tone != 'H' && tone != 'L')
            raise(Errc::InvalidToneSymbol,
                  "label \"" + item.label + "\" does not end in H or L");
        out.emplace_back(item.label, tone);
    }
    return out;
}

struct F0Input {
    std::optional<double> step_override;

    F0Track load(const std::string& path) const {
        return ingest_f0_csv(read_file(path), step_override);
    }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    // The config file provides defaults, so it is loaded before the
    // option definitions below bake in their default values.
    ToolConfig config;
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
                config = load_config(args[i + 1]);
            } else if (args[i].rfind("--config=", 0) == 0) {
                config = load_config(args[i].substr(9));
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"prosokit: annotation mining, F0 analysis, timing metrics and plots"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "key=value config file with tool defaults (flags take precedence)");

    std::size_t batch_failures = 0;

    // ---- track ----------------------------------------------------------
    auto* track_cmd = app.add_subcommand("track", "estimate an F0 track from WAV input");
    std::vector<std::string> track_inputs;
    F0Params track_params = config.f0;
    bool track_serial = false;
    std::string track_out, track_out_dir;
    track_cmd->add_option("wav", track_inputs, "input WAV files (PCM16 mono)")->required();
    track_cmd->add_option("--fmin", track_params.f_min, "lowest F0 searched, Hz");
    track_cmd->add_option("--fmax", track_params.f_max, "highest F0 searched, Hz");
    track_cmd->add_option("--step", track_params.frame_step, "frame step, s");
    track_cmd->add_option("--window", track_params.window, "analysis window, s");
    track_cmd->add_option("--threshold", track_params.voicing_threshold,
                          "voicing threshold on normalized correlation");
    track_cmd->add_flag("--serial", track_serial, "use the serial reference path");
    track_cmd->add_option("--out", track_out, "output CSV path (single input; default stdout)");
    track_cmd->add_option("--out-dir", track_out_dir,
                          "output directory for multiple inputs (default: beside input)");
    track_cmd->callback([&] {
        require_single_input_for(track_inputs, track_out, "--out");
        if (!(track_params.f_min > 0.0) || !(track_params.f_max > track_params.f_min))
            throw UsageError("need 0 < --fmin < --fmax");
        if (!window_fits_min_period(track_params))
            err << "warning: window " << track_params.window
                << " s is shorter than one period of f_min\n";
        batch_failures = for_each_input(track_inputs, err, [&](const std::string& input) {
            SampledSignal signal = read_wav(read_file(input));
            F0Track track = estimate_f0(signal, track_params,
                                        track_serial ? Exec::Serial : Exec::Parallel);
            std::string csv = f0_track_to_csv(track);
            if (track_inputs.size() == 1)
                emit(csv, track_out, out);
            else
                write_file(derived_output_path(input, track_out_dir, ".f0.csv"), csv);
        });
    });

    // ---- stylize --------------------------------------------------------
    auto* stylize_cmd =
        app.add_subcommand("stylize", "fit polynomial models to an F0 track");
    std::vector<std::string> stylize_inputs;
    std::string stylize_textgrid, stylize_tier = config.tier;
    std::vector<std::string> stylize_exclude = config.exclude_labels;
    int stylize_global_degree = -1;
    int stylize_local_degree = 2;
    int stylize_median = 0;
    double stylize_step = 0.0;
    bool stylize_serial = false, stylize_residual = false;
    std::string stylize_out, stylize_out_dir, stylize_residual_out;
    stylize_cmd->add_option("f0csv", stylize_inputs, "input F0 CSV files (time_s,f0_hz)")
        ->required();
    stylize_cmd->add_option("--step", stylize_step,
                            "frame step override when the CSV has fewer than 2 rows, s");
    stylize_cmd->add_option("--textgrid", stylize_textgrid,
                            "TextGrid supplying the local fit domains");
    stylize_cmd->add_option("--tier", stylize_tier, "tier holding the local domains");
    stylize_cmd->add_option("--exclude", stylize_exclude,
                            "labels to exclude from domains (repeatable)");
    stylize_cmd->add_option("--global-degree", stylize_global_degree,
                            "degree of the global model (default: one per domain, floor 2)");
    stylize_cmd->add_option("--local-degree", stylize_local_degree,
                            "degree of each local model");
    stylize_cmd->add_option("--median", stylize_median,
                            "median-filter width applied before fitting (odd, 0 = off)");
    stylize_cmd->add_flag("--serial", stylize_serial, "use the serial reference path");
    stylize_cmd->add_flag("--residual", stylize_residual,
                          "with multiple inputs, also write <base>.residual.csv");
    stylize_cmd->add_option("--out", stylize_out,
                            "model JSON path (single input; default stdout)");
    stylize_cmd->add_option("--out-dir", stylize_out_dir,
                            "output directory for multiple inputs");
    stylize_cmd->add_option("--residual-out", stylize_residual_out,
                            "residual CSV path (single input)");
    stylize_cmd->callback([&] {
        require_single_input_for(stylize_inputs, stylize_out, "--out");
        require_single_input_for(stylize_inputs, stylize_residual_out, "--residual-out");
        batch_failures = for_each_input(stylize_inputs, err, [&](const std::string& input) {
            F0Input loader{stylize_step > 0.0 ? std::optional<double>(stylize_step)
                                              : std::nullopt};
            F0Track track = loader.load(input);
            if (stylize_median > 0)
                track = median_filter(track, static_cast<std::size_t>(stylize_median));

            std::vector<TimeSpan> domains;
            if (!stylize_textgrid.empty()) {
                if (stylize_tier.empty())
                    throw UsageError("--tier is required with --textgrid");
                Annotation a = parse_textgrid(read_file(stylize_textgrid));
                const Tier* tier = a.find_tier(stylize_tier);
                if (!tier)
                    raise(Errc::UnknownTier, "no tier named \"" + stylize_tier + "\"");
                auto excluded = label_set(stylize_exclude);
                for (const LabelledInterval& item : tier->items)
                    if (item.tmax > item.tmin && !excluded.count(item.label))
                        domains.push_back({item.tmin, item.tmax});
            }

            const std::size_t global_degree =
                (stylize_global_degree >= 0) ? static_cast<std::size_t>(stylize_global_degree)
                                             : default_degree(domains.size());
            StylizationResult result =
                stylize(track, domains, global_degree,
                        static_cast<std::size_t>(stylize_local_degree),
                        stylize_serial ? Exec::Serial : Exec::Parallel);

            // Linear summary over (frame index, f0): slope is Hz per frame.
            std::vector<F0Point> frame_points;
            for (std::size_t i = 0; i < track.frames.size(); ++i)
                if (track.frames[i])
                    frame_points.push_back({static_cast<double>(i), *track.frames[i]});
            LinearModel linear = linear_fit(frame_points);

            std::string doc = json_text(stylize_json(result, linear));
            if (stylize_inputs.size() == 1) {
                emit(doc, stylize_out, out);
                if (!stylize_residual_out.empty())
                    write_file(stylize_residual_out, f0_track_to_csv(result.residual));
            } else {
                write_file(derived_output_path(input, stylize_out_dir, ".model.json"), doc);
                if (stylize_residual)
                    write_file(derived_output_path(input, stylize_out_dir, ".residual.csv"),
                               f0_track_to_csv(result.residual));
            }
        });
    });

    // ---- metrics --------------------------------------------------------
    auto* metrics_cmd =
        app.add_subcommand("metrics", "timing irregularity metrics for one tier");
    std::vector<std::string> metrics_inputs;
    std::string metrics_tier = config.tier;
    std::vector<std::string> metrics_exclude = config.exclude_labels;
    std::string metrics_sd =
        (config.sd_mode == SdMode::Population) ? "population" : "sample";
    std::string metrics_format = "json", metrics_out;
    metrics_cmd->add_option("textgrid", metrics_inputs, "input TextGrid files")->required();
    metrics_cmd->add_option("--tier", metrics_tier, "interval tier to mine");
    metrics_cmd->add_option("--exclude", metrics_exclude,
                            "labels to exclude, e.g. pause labels (repeatable)");
    metrics_cmd->add_option("--sd-denominator", metrics_sd,
                            "standard-deviation denominator: sample (N-1) or population (N)")
        ->check(CLI::IsMember({"sample", "population"}));
    metrics_cmd->add_option("--format", metrics_format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    metrics_cmd->add_option("--out", metrics_out, "output path (default stdout)");
    metrics_cmd->callback([&] {
        const SdMode mode =
            (metrics_sd == "population") ? SdMode::Population : SdMode::Sample;
        ordered_json array = ordered_json::array();
        std::string csv = metrics_inputs.size() > 1
                              ? "file,n,mean_ms,median_ms,min_ms,max_ms,sd,coeff_var,rpvi,npvi,vi_det\n"
                              : "n,mean_ms,median_ms,min_ms,max_ms,sd,coeff_var,rpvi,npvi,vi_det\n";
        batch_failures = for_each_input(metrics_inputs, err, [&](const std::string& input) {
            DurationSeries series = durations_for(input, metrics_tier, metrics_exclude);
            MetricsReport report = compute_metrics(series.values(), mode);
            if (metrics_inputs.size() > 1) {
                ordered_json entry = metrics_json(report, mode);
                entry.erase("schema_version");
                array.push_back({{"file", input}, {"report", entry}});
                csv += input + "," + metrics_csv_row(report) + "\n";
            } else {
                array.push_back(metrics_json(report, mode));
                csv += metrics_csv_row(report) + "\n";
            }
        });
        if (batch_failures == metrics_inputs.size()) return; // nothing to report
        std::string output;
        if (metrics_format == "csv")
            output = csv;
        else if (metrics_inputs.size() == 1)
            output = json_text(array.front());
        else
            output = json_text(
                ordered_json{{"schema_version", kSchemaVersion}, {"reports", array}});
        emit(output, metrics_out, out);
    });

    // ---- window-npvi ----------------------------------------------------
    auto* window_cmd =
        app.add_subcommand("window-npvi", "moving-window nPVI profile for one tier");
    std::vector<std::string> window_inputs;
    std::string window_tier = config.tier;
    std::vector<std::string> window_exclude = config.exclude_labels;
    std::size_t window_width = 5, window_step = 1;
    std::string window_format = "json", window_out;
    window_cmd->add_option("textgrid", window_inputs, "input TextGrid files")->required();
    window_cmd->add_option("--tier", window_tier, "interval tier to mine");
    window_cmd->add_option("--exclude", window_exclude, "labels to exclude (repeatable)");
    window_cmd->add_option("--window", window_width, "window length in durations");
    window_cmd->add_option("--step", window_step, "window step in durations");
    window_cmd->add_option("--format", window_format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    window_cmd->add_option("--out", window_out, "output path (default stdout)");
    window_cmd->callback([&] {
        ordered_json array = ordered_json::array();
        std::string csv = window_inputs.size() > 1 ? "file,position,npvi,sorted_npvi\n"
                                                   : "position,npvi,sorted_npvi\n";
        batch_failures = for_each_input(window_inputs, err, [&](const std::string& input) {
            DurationSeries series = durations_for(input, window_tier, window_exclude);
            WindowSeries ws = moving_npvi(series.values(), window_width, window_step);
            if (window_inputs.size() > 1) {
                ordered_json entry = window_json(ws);
                entry.erase("schema_version");
                array.push_back({{"file", input}, {"report", entry}});
                csv += window_csv(ws, input + ",");
            } else {
                array.push_back(window_json(ws));
                csv += window_csv(ws, "");
            }
        });
        if (batch_failures == window_inputs.size()) return;
        std::string output;
        if (window_format == "csv")
            output = csv;
        else if (window_inputs.size() == 1)
            output = json_text(array.front());
        else
            output = json_text(
                ordered_json{{"schema_version", kSchemaVersion}, {"reports", array}});
        emit(output, window_out, out);
    });

    // ---- durations ------------------------------------------------------
    auto* durations_cmd = app.add_subcommand(
        "durations", "duration series and per-category box statistics for one tier");
    std::vector<std::string> durations_inputs;
    std::string durations_tier = config.tier;
    std::vector<std::string> durations_exclude = config.exclude_labels;
    std::vector<std::string> durations_map;
    std::string durations_map_file;
    bool durations_series = false;
    bool durations_exclusive = (config.quartiles == QuartileMethod::Exclusive);
    std::string durations_format = "csv", durations_out;
    durations_cmd->add_option("textgrid", durations_inputs, "input TextGrid files")->required();
    durations_cmd->add_option("--tier", durations_tier, "interval tier to mine");
    durations_cmd->add_option("--exclude", durations_exclude, "labels to exclude (repeatable)");
    durations_cmd->add_option("--map", durations_map,
                              "label=category mapping (repeatable; unmapped go to \"other\")");
    durations_cmd->add_option("--map-file", durations_map_file,
                              "CSV file of label,category rows");
    durations_cmd->add_flag("--series", durations_series,
                            "emit the raw label,duration_ms series instead of box stats");
    durations_cmd->add_flag("--exclusive-quartiles", durations_exclusive,
                            "use the exclusive quartile convention");
    durations_cmd->add_option("--format", durations_format, "output format: csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
    durations_cmd->add_option("--out", durations_out, "output path (default stdout)");
    durations_cmd->callback([&] {
        std::map<std::string, std::string> mapping;
        for (const std::string& pair : durations_map) {
            std::size_t eq = pair.find('=');
            if (eq == std::string::npos)
                throw UsageError("--map needs label=category, got \"" + pair + "\"");
            mapping[pair.substr(0, eq)] = pair.substr(eq + 1);
        }
        if (!durations_map_file.empty()) {
            std::istringstream in(read_file(durations_map_file));
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                std::size_t comma = line.find(',');
                if (comma == std::string::npos)
                    throw UsageError("map file rows must be label,category");
                mapping[line.substr(0, comma)] = line.substr(comma + 1);
            }
        }
        const QuartileMethod method = durations_exclusive ? QuartileMethod::Exclusive
                                                          : QuartileMethod::Inclusive;
        ordered_json array = ordered_json::array();
        const bool multi = durations_inputs.size() > 1;
        std::string csv;
        if (durations_series)
            csv = multi ? "file,label,duration_ms\n" : "label,duration_ms\n";
        else
            csv = multi ? "file,category,n,min,q1,median,q3,max,mean\n"
                        : "category,n,min,q1,median,q3,max,mean\n";
        batch_failures = for_each_input(durations_inputs, err, [&](const std::string& input) {
            DurationSeries series = durations_for(input, durations_tier, durations_exclude);
            if (durations_series) {
                std::string rows = duration_series_to_csv(series);
                rows.erase(0, rows.find('\n') + 1); // drop the per-file header
                if (multi) {
                    std::istringstream in(rows);
                    std::string line;
                    while (std::getline(in, line)) csv += input + "," + line + "\n";
                } else {
                    csv += rows;
                }
                ordered_json entries = ordered_json::array();
                for (const DurationEntry& e : series.entries)
                    entries.push_back({{"label", e.label}, {"duration_ms", e.duration_ms}});
                array.push_back(multi ? ordered_json{{"file", input}, {"entries", entries}}
                                      : ordered_json{{"schema_version", kSchemaVersion},
                                                     {"entries", entries}});
                return;
            }
            std::map<std::string, std::string> effective = mapping;
            if (effective.empty()) // identity: every label is its own category
                for (const DurationEntry& e : series.entries) effective[e.label] = e.label;
            auto groups = group_by_label(series, effective);
            auto stats = box_stats(groups, method);
            csv += box_csv_rows(stats, multi ? input + "," : "");
            ordered_json categories;
            for (const auto& [category, s] : stats)
                categories[category] = {{"n", s.n},     {"min", s.min},   {"q1", s.q1},
                                        {"median", s.median}, {"q3", s.q3},
                                        {"max", s.max}, {"mean", s.mean}};
            array.push_back(multi ? ordered_json{{"file", input}, {"categories", categories}}
                                  : ordered_json{{"schema_version", kSchemaVersion},
                                                 {"categories", categories}});
        });
        if (batch_failures == durations_inputs.size()) return;
        std::string output;
        if (durations_format == "csv")
            output = csv;
        else if (!multi)
            output = json_text(array.front());
        else
            output = json_text(
                ordered_json{{"schema_version", kSchemaVersion}, {"reports", array}});
        emit(output, durations_out, out);
    });

    // ---- rate -----------------------------------------------------------
    auto* rate_cmd = app.add_subcommand("rate", "speech rate from median duration");
    std::vector<std::string> rate_inputs;
    std::string rate_tier = config.tier;
    std::vector<std::string> rate_exclude = config.exclude_labels;
    std::string rate_out;
    rate_cmd->add_option("textgrid", rate_inputs, "input TextGrid files")->required();
    rate_cmd->add_option("--tier", rate_tier, "interval tier to mine");
    rate_cmd->add_option("--exclude", rate_exclude, "labels to exclude (repeatable)");
    rate_cmd->add_option("--out", rate_out, "output path (default stdout)");
    rate_cmd->callback([&] {
        ordered_json array = ordered_json::array();
        batch_failures = for_each_input(rate_inputs, err, [&](const std::string& input) {
            DurationSeries series = durations_for(input, rate_tier, rate_exclude);
            std::vector<double> values = series.values();
            SpeechRate rate = speech_rate(values);
            if (rate_inputs.size() > 1) {
                ordered_json entry = rate_json(rate, values.size());
                entry.erase("schema_version");
                array.push_back({{"file", input}, {"report", entry}});
            } else {
                array.push_back(rate_json(rate, values.size()));
            }
        });
        if (batch_failures == rate_inputs.size()) return;
        std::string output = (rate_inputs.size() == 1)
                                 ? json_text(array.front())
                                 : json_text(ordered_json{{"schema_version", kSchemaVersion},
                                                          {"reports", array}});
        emit(output, rate_out, out);
    });

    // ---- chroma ---------------------------------------------------------
    auto* chroma_cmd = app.add_subcommand(
        "chroma", "musical-interval analysis of a two-level chanted contour");
    std::vector<std::string> chroma_inputs;
    std::string chroma_span1, chroma_span2;
    std::string chroma_textgrid, chroma_tier = config.tier;
    std::string chroma_label1 = "F01", chroma_label2 = "F02";
    double chroma_step = 0.0;
    std::string chroma_out;
    chroma_cmd->add_option("f0csv", chroma_inputs, "input F0 CSV files")->required();
    chroma_cmd->add_option("--step", chroma_step, "frame step override, s");
    chroma_cmd->add_option("--span1", chroma_span1, "first (higher) span as t0:t1, s");
    chroma_cmd->add_option("--span2", chroma_span2, "second span as t0:t1, s");
    chroma_cmd->add_option("--textgrid", chroma_textgrid,
                           "TextGrid naming the spans on a tier instead of explicit times");
    chroma_cmd->add_option("--tier", chroma_tier, "tier holding the span labels");
    chroma_cmd->add_option("--label1", chroma_label1, "label of the first span");
    chroma_cmd->add_option("--label2", chroma_label2, "label of the second span");
    chroma_cmd->add_option("--out", chroma_out, "output path (default stdout)");
    chroma_cmd->callback([&] {
        TimeSpan span1{}, span2{};
        bool have_spans = false;
        if (!chroma_span1.empty() || !chroma_span2.empty()) {
            if (chroma_span1.empty() || chroma_span2.empty())
                throw UsageError("--span1 and --span2 must be given together");
            span1 = parse_span(chroma_span1);
            span2 = parse_span(chroma_span2);
            have_spans = true;
        } else if (!chroma_textgrid.empty()) {
            if (chroma_tier.empty())
                throw UsageError("--tier is required with --textgrid");
            Annotation a = parse_textgrid(read_file(chroma_textgrid));
            const Tier* tier = a.find_tier(chroma_tier);
            if (!tier) raise(Errc::UnknownTier, "no tier named \"" + chroma_tier + "\"");
            for (const LabelledInterval& item : tier->items) {
                if (item.label == chroma_label1) {
                    span1 = {item.tmin, item.tmax};
                    have_spans = true;
                }
                if (item.label == chroma_label2) span2 = {item.tmin, item.tmax};
            }
            if (!have_spans || span2.t1 <= span2.t0)
                raise(Errc::UnknownTier, "labels \"" + chroma_label1 + "\"/\"" +
                                             chroma_label2 + "\" not found on tier \"" +
                                             chroma_tier + "\"");
        } else {
            throw UsageError("give --span1/--span2 or --textgrid with span labels");
        }
        ordered_json array = ordered_json::array();
        batch_failures = for_each_input(chroma_inputs, err, [&](const std::string& input) {
            F0Input loader{chroma_step > 0.0 ? std::optional<double>(chroma_step)
                                             : std::nullopt};
            ChromaReport report = chroma_analyze(loader.load(input), span1, span2);
            if (chroma_inputs.size() > 1) {
                ordered_json entry = chroma_json(report);
                entry.erase("schema_version");
                array.push_back({{"file", input}, {"report", entry}});
            } else {
                array.push_back(chroma_json(report));
            }
        });
        if (batch_failures == chroma_inputs.size()) return;
        std::string output = (chroma_inputs.size() == 1)
                                 ? json_text(array.front())
                                 : json_text(ordered_json{{"schema_version", kSchemaVersion},
                                                          {"reports", array}});
        emit(output, chroma_out, out);
    });

    // ---- tonemap --------------------------------------------------------
    auto* tonemap_cmd = app.add_subcommand(
        "tonemap", "map lexical tone strings to terraced phonetic tones");
    std::vector<std::string> tonemap_inputs;
    std::string tonemap_tier;
    bool tonemap_raw_final = false, tonemap_csv = false, tonemap_steps = false;
    std::string tonemap_engine = "fst", tonemap_out;
    tonemap_cmd
        ->add_option("input", tonemap_inputs,
                     "lexical tone strings over H/L, or TextGrid files when --tier is given")
        ->required();
    tonemap_cmd->add_option("--tier", tonemap_tier,
                            "read tones from this tier (labels must end in H or L)");
    tonemap_cmd->add_flag("--no-final-faithful", tonemap_raw_final,
                          "do not realise the final syllable faithfully");
    tonemap_cmd->add_option("--engine", tonemap_engine,
                            "transduction engine: fst or rules (equivalent)")
        ->check(CLI::IsMember({"fst", "rules"}));
    tonemap_cmd->add_flag("--csv", tonemap_csv, "emit syllable,lexical,phonetic rows");
    tonemap_cmd->add_flag("--steps", tonemap_steps, "add a downstep/upstep column to --csv");
    tonemap_cmd->add_option("--out", tonemap_out, "output path (default stdout)");
    tonemap_cmd->callback([&] {
        const bool final_faithful = !tonemap_raw_final;
        auto run_tones = [&](const std::string& lexical,
                             const std::vector<std::string>& syllables,
                             const std::string& file_prefix, std::string& text) {
            std::string phonetic = (tonemap_engine == "fst")
                                       ? transduce(lexical, final_faithful)
                                       : apply_rules(lexical, final_faithful);
            if (!tonemap_csv) {
                text += file_prefix.empty() ? phonetic + "\n"
                                            : file_prefix + phonetic + "\n";
                return;
            }
            std::vector<ToneStep> steps;
            if (tonemap_steps) steps = annotate_steps(lexical);
            for (std::size_t i = 0; i < lexical.size(); ++i) {
                text += file_prefix + syllables[i] + "," + lexical[i] + "," + phonetic[i];
                if (tonemap_steps) {
                    const char* name = steps[i] == ToneStep::Downstep ? "downstep"
                                       : steps[i] == ToneStep::Upstep ? "upstep"
                                                                      : "plain";
                    text += std::string(",") + name;
                }
                text += "\n";
            }
        };
        const bool tonemap_multi = tonemap_inputs.size() > 1;
        std::string text;
        if (tonemap_csv) {
            text = tonemap_multi ? "input," : "";
            text += "syllable,lexical,phonetic";
            if (tonemap_steps) text += ",step";
            text += "\n";
        }
        batch_failures = for_each_input(tonemap_inputs, err, [&](const std::string& input) {
            if (tonemap_tier.empty()) {
                std::vector<std::string> syllables;
                for (std::size_t i = 0; i < input.size(); ++i)
                    syllables.push_back(std::to_string(i + 1));
                run_tones(input, syllables,
                          tonemap_csv && tonemap_multi ? input + "," : "", text);
            } else {
                Annotation a = parse_textgrid(read_file(input));
                auto tones = tones_from_tier(a, tonemap_tier);
                if (tones.empty())
                    raise(Errc::EmptyInput,
                          "tier \"" + tonemap_tier + "\" has no tone labels");
                std::string lexical;
                std::vector<std::string> syllables;
                for (const auto& [label, tone] : tones) {
                    lexical.push_back(tone);
                    syllables.push_back(label);
                }
                run_tones(lexical, syllables,
                          tonemap_csv && tonemap_multi ? input + "," : "", text);
            }
        });
        if (batch_failures == tonemap_inputs.size()) return;
        emit(text, tonemap_out, out);
    });

    // ---- plot -----------------------------------------------------------
    auto* plot_cmd = app.add_subcommand("plot", "deterministic SVG plots");
    plot_cmd->require_subcommand(1);

    auto* plot_track_cmd = plot_cmd->add_subcommand("track", "F0 trace with overlays");
    std::vector<std::string> pt_inputs;
    std::string pt_wav, pt_textgrid, pt_tier = config.tier, pt_out, pt_out_dir;
    std::vector<std::string> pt_exclude = config.exclude_labels;
    bool pt_stylize = false, pt_no_stats = false;
    int pt_global_degree = -1, pt_local_degree = 2, pt_median = 0;
    double pt_step = 0.0;
    int pt_width = config.plot_width, pt_height = config.plot_height;
    plot_track_cmd->add_option("f0csv", pt_inputs, "input F0 CSV files")->required();
    plot_track_cmd->add_option("--step", pt_step, "frame step override, s");
    plot_track_cmd->add_option("--wav", pt_wav, "draw this WAV as a waveform thumbnail");
    plot_track_cmd->add_option("--textgrid", pt_textgrid, "draw this TextGrid's tier as labels");
    plot_track_cmd->add_option("--tier", pt_tier, "tier to draw / to take fit domains from");
    plot_track_cmd->add_option("--exclude", pt_exclude, "domain labels to exclude (repeatable)");
    plot_track_cmd->add_flag("--stylize", pt_stylize, "overlay fitted models and the residual");
    plot_track_cmd->add_option("--global-degree", pt_global_degree,
                               "degree of the global model (default: one per domain, floor 2)");
    plot_track_cmd->add_option("--local-degree", pt_local_degree, "degree of local models");
    plot_track_cmd->add_option("--median", pt_median,
                               "median-filter width applied before fitting (odd, 0 = off)");
    plot_track_cmd->add_flag("--no-stat-lines", pt_no_stats,
                             "suppress the min/max/mean/median lines");
    plot_track_cmd->add_option("--width", pt_width, "canvas width, px");
    plot_track_cmd->add_option("--height", pt_height, "canvas height, px");
    plot_track_cmd->add_option("--out", pt_out, "output SVG path (single input)");
    plot_track_cmd->add_option("--out-dir", pt_out_dir, "output directory for multiple inputs");
    plot_track_cmd->callback([&] {
        require_single_input_for(pt_inputs, pt_out, "--out");
        batch_failures = for_each_input(pt_inputs, err, [&](const std::string& input) {
            F0Input loader{pt_step > 0.0 ? std::optional<double>(pt_step) : std::nullopt};
            F0Track track = loader.load(input);
            if (pt_median > 0) track = median_filter(track, static_cast<std::size_t>(pt_median));

            PlotSpec spec;
            spec.width = pt_width;
            spec.height = pt_height;
            spec.track = track;
            spec.stat_lines = !pt_no_stats;

            Annotation a;
            SampledSignal wav;
            if (!pt_textgrid.empty()) {
                a = parse_textgrid(read_file(pt_textgrid));
                if (pt_tier.empty())
                    throw UsageError("--tier is required with --textgrid");
                const Tier* tier = a.find_tier(pt_tier);
                if (!tier) raise(Errc::UnknownTier, "no tier named \"" + pt_tier + "\"");
                spec.annotation = tier;
            }
            if (!pt_wav.empty()) {
                wav = read_wav(read_file(pt_wav));
                spec.waveform = &wav;
            }

            StylizationResult result;
            if (pt_stylize) {
                std::vector<TimeSpan> domains;
                if (spec.annotation) {
                    auto excluded = label_set(pt_exclude);
                    for (const LabelledInterval& item : spec.annotation->items)
                        if (item.tmax > item.tmin && !excluded.count(item.label))
                            domains.push_back({item.tmin, item.tmax});
                }
                const std::size_t global_degree =
                    (pt_global_degree >= 0) ? static_cast<std::size_t>(pt_global_degree)
                                            : default_degree(domains.size());
                result = stylize(track, domains, global_degree,
                                 static_cast<std::size_t>(pt_local_degree));
                spec.global = &result.global;
                spec.locals = result.locals;
                spec.residual = &result.residual;
            }

            std::string svg = plot_track(spec);
            if (pt_inputs.size() == 1)
                emit(svg, pt_out, out);
            else
                write_file(derived_output_path(input, pt_out_dir, ".svg"), svg);
        });
    });

    auto* plot_boxes_cmd =
        plot_cmd->add_subcommand("boxes", "duration box-and-whisker plot by category");
    std::vector<std::string> pb_inputs;
    std::string pb_tier = config.tier, pb_out, pb_out_dir, pb_map_file;
    std::vector<std::string> pb_exclude = config.exclude_labels, pb_map;
    bool pb_points = false;
    bool pb_exclusive = (config.quartiles == QuartileMethod::Exclusive);
    int pb_width = config.plot_width, pb_height = config.plot_height;
    plot_boxes_cmd->add_option("textgrid", pb_inputs, "input TextGrid files")->required();
    plot_boxes_cmd->add_option("--tier", pb_tier, "interval tier to mine");
    plot_boxes_cmd->add_option("--exclude", pb_exclude, "labels to exclude (repeatable)");
    plot_boxes_cmd->add_option("--map", pb_map, "label=category mapping (repeatable)");
    plot_boxes_cmd->add_option("--map-file", pb_map_file, "CSV file of label,category rows");
    plot_boxes_cmd->add_flag("--points", pb_points, "draw individual durations beside each box");
    plot_boxes_cmd->add_flag("--exclusive-quartiles", pb_exclusive,
                             "use the exclusive quartile convention");
    plot_boxes_cmd->add_option("--width", pb_width, "canvas width, px");
    plot_boxes_cmd->add_option("--height", pb_height, "canvas height, px");
    plot_boxes_cmd->add_option("--out", pb_out, "output SVG path (single input)");
    plot_boxes_cmd->add_option("--out-dir", pb_out_dir, "output directory for multiple inputs");
    plot_boxes_cmd->callback([&] {
        require_single_input_for(pb_inputs, pb_out, "--out");
        std::map<std::string, std::string> mapping;
        for (const std::string& pair : pb_map) {
            std::size_t eq = pair.find('=');
            if (eq == std::string::npos)
                throw UsageError("--map needs label=category, got \"" + pair + "\"");
            mapping[pair.substr(0, eq)] = pair.substr(eq + 1);
        }
        if (!pb_map_file.empty()) {
            std::istringstream in(read_file(pb_map_file));
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                std::size_t comma = line.find(',');
                if (comma == std::string::npos)
                    throw UsageError("map file rows must be label,category");
                mapping[line.substr(0, comma)] = line.substr(comma + 1);
            }
        }
        batch_failures = for_each_input(pb_inputs, err, [&](const std::string& input) {
            DurationSeries series = durations_for(input, pb_tier, pb_exclude);
            std::map<std::string, std::string> effective = mapping;
            if (effective.empty())
                for (const DurationEntry& e : series.entries) effective[e.label] = e.label;
            auto groups = group_by_label(series, effective);
            auto stats = box_stats(groups, pb_exclusive ? QuartileMethod::Exclusive
                                                        : QuartileMethod::Inclusive);
            std::string svg =
                plot_boxes(stats, pb_width, pb_height, pb_points ? &groups : nullptr);
            if (pb_inputs.size() == 1)
                emit(svg, pb_out, out);
            else
                write_file(derived_output_path(input, pb_out_dir, ".svg"), svg);
        });
    });

    auto* plot_window_cmd =
        plot_cmd->add_subcommand("window", "moving-window nPVI profile plot");
    std::vector<std::string> pw_inputs;
    std::string pw_tier = config.tier, pw_out, pw_out_dir;
    std::vector<std::string> pw_exclude = config.exclude_labels;
    std::size_t pw_window = 5, pw_step = 1;
    int pw_width = config.plot_width, pw_height = config.plot_height;
    plot_window_cmd->add_option("textgrid", pw_inputs, "input TextGrid files")->required();
    plot_window_cmd->add_option("--tier", pw_tier, "interval tier to mine");
    plot_window_cmd->add_option("--exclude", pw_exclude, "labels to exclude (repeatable)");
    plot_window_cmd->add_option("--window", pw_window, "window length in durations");
    plot_window_cmd->add_option("--step", pw_step, "window step in durations");
    plot_window_cmd->add_option("--width", pw_width, "canvas width, px");
    plot_window_cmd->add_option("--height", pw_height, "canvas height, px");
    plot_window_cmd->add_option("--out", pw_out, "output SVG path (single input)");
    plot_window_cmd->add_option("--out-dir", pw_out_dir, "output directory for multiple inputs");
    plot_window_cmd->callback([&] {
        require_single_input_for(pw_inputs, pw_out, "--out");
        batch_failures = for_each_input(pw_inputs, err, [&](const std::string& input) {
            DurationSeries series = durations_for(input, pw_tier, pw_exclude);
            WindowSeries ws = moving_npvi(series.values(), pw_window, pw_step);
            std::string svg = plot_window_series(ws, pw_width, pw_height);
            if (pw_inputs.size() == 1)
                emit(svg, pw_out, out);
            else
                write_file(derived_output_path(input, pw_out_dir, ".svg"), svg);
        });
    });

    // ---- validate -------------------------------------------------------
    auto* validate_cmd =
        app.add_subcommand("validate", "lint TextGrid files and check the sampling condition");
    std::vector<std::string> validate_inputs;
    std::string validate_wav;
    double validate_fmax = config.f0.f_max;
    validate_cmd->add_option("textgrid", validate_inputs, "input TextGrid files")->required();
    validate_cmd->add_option("--wav", validate_wav,
                             "check this WAV's sample rate against --fmax");
    validate_cmd->add_option("--fmax", validate_fmax,
                             "highest frequency that must be resolvable, Hz");
    validate_cmd->callback([&] {
        batch_failures = for_each_input(validate_inputs, err, [&](const std::string& input) {
            Annotation a = parse_textgrid(read_file(input));
            std::size_t n_items = 0;
            for (const Tier& tier : a.tiers) n_items += tier.items.size();
            out << "ok " << input << ": " << a.tiers.size() << " tier(s), " << n_items
                << " item(s), " << (a.xmax - a.xmin) << " s\n";
        });
        if (!validate_wav.empty()) {
            SampledSignal signal = read_wav(read_file(validate_wav));
            if (validate_nyquist(signal.sample_rate, validate_fmax)) {
                out << "nyquist ok: " << signal.sample_rate << " Hz > 2 x " << validate_fmax
                    << " Hz\n";
            } else {
                err << validate_wav << ": error: sampling condition violated: "
                    << signal.sample_rate << " Hz <= 2 x " << validate_fmax << " Hz\n";
                ++batch_failures;
            }
        }
    });

    // ---- parse and dispatch ---------------------------------------------
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream buffer;
        const int code = app.exit(e, out, buffer);
        err << buffer.str();
        return (code == 0) ? 0 : 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    return (batch_failures > 0) ? 2 : 0;
}

} // namespace prosokit::cli
