/*
 * Copyright 2026 The cuefuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cuefuse/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cuefuse/error.hpp"

namespace cuefuse {

using nlohmann::json;

std::int64_t to_millis(double seconds) noexcept { return static_cast<std::int64_t>(std::llround(seconds * 1000.0)); }

std::string format_srt_time(std::int64_t ms) {
    if (ms < 0) ms = 0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(ms / 3600000),
                  static_cast<long long>(ms / 60000 % 60), static_cast<long long>(ms / 1000 % 60),
                  static_cast<long long>(ms % 1000));
    return buf;
}

std::string render_srt(const Summary& summary) {
    if (summary.segments.empty()) return "\n";
    std::ostringstream out;
    std::int64_t cursor = 0;
    for (std::size_t i = 0; i < summary.segments.size(); ++i) {
        const auto& iv = summary.segments[i].interval;
        const std::int64_t len = to_millis(iv.end()) - to_millis(iv.start());
        if (i) out << '\n';
        out << i + 1 << '\n'
            << format_srt_time(cursor) << " --> " << format_srt_time(cursor + len) << '\n'
            << summary.segments[i].text << '\n';
        cursor += len;
    }
    return out.str();
}

namespace {

std::int64_t parse_srt_time(const std::string& s) {
    int h = 0, m = 0, sec = 0, ms = 0;
    char comma = 0;
    if (std::sscanf(s.c_str(), "%d:%d:%d%c%d", &h, &m, &sec, &comma, &ms) != 5 || (comma != ',' && comma != '.'))
        throw Error(Errc::SchemaError, "bad SRT timestamp '" + s + "'");
    return ((static_cast<std::int64_t>(h) * 60 + m) * 60 + sec) * 1000 + ms;
}

std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

} // namespace

std::vector<SrtBlock> parse_srt(const std::string& text) {
    std::vector<SrtBlock> blocks;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = rstrip(line);
        if (line.empty()) continue;
        SrtBlock b;
        try {
            b.index = std::stoul(line);
        } catch (const std::exception&) {
            throw Error(Errc::SchemaError, "expected SRT block number, got '" + line + "'");
        }
        if (!std::getline(in, line)) throw Error(Errc::SchemaError, "truncated SRT block");
        line = rstrip(line);
        const auto arrow = line.find(" --> ");
        if (arrow == std::string::npos) throw Error(Errc::SchemaError, "missing SRT arrow in '" + line + "'");
        b.start_ms = parse_srt_time(line.substr(0, arrow));
        b.end_ms = parse_srt_time(line.substr(arrow + 5));
        while (std::getline(in, line)) {
            line = rstrip(line);
            if (line.empty()) break;
            if (!b.text.empty()) b.text.push_back('\n');
            b.text += line;
        }
        blocks.push_back(std::move(b));
    }
    return blocks;
}

CutList make_cutlist(const Summary& summary, const VideoMeta& meta, const std::string& source_path) {
    CutList list;
    list.video_id = summary.video_id;
    list.source_path = source_path;
    list.fps = meta.fps;
    for (const auto& seg : compile_segments(summary, meta, 0.0))
        list.cuts.push_back(Cut{seg.interval.start(), seg.interval.end(), seg.frames.first, seg.frames.last, seg.text});
    return list;
}

std::string cutlist_to_json(const CutList& list) {
    json cuts = json::array();
    for (const auto& c : list.cuts)
        cuts.push_back({{"start", c.start},
                        {"end", c.end},
                        {"first_frame", c.first_frame},
                        {"last_frame", c.last_frame},
                        {"text", c.text}});
    const json doc = {{"schema", "cuefuse-cuts/1"},
                      {"video_id", list.video_id},
                      {"source_path", list.source_path},
                      {"fps", list.fps},
                      {"cuts", cuts}};
    return doc.dump(2) + "\n";
}

namespace {

json parse_doc(const std::string& text, const char* schema, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::SchemaError, origin + ": malformed JSON: " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::SchemaError, origin + ": expected an object");
    if (const auto it = doc.find("schema"); it != doc.end() && *it != schema)
        throw Error(Errc::SchemaError, origin + ": schema must be '" + schema + "'");
    return doc;
}

template <typename T>
T get(const json& obj, const char* key, const std::string& origin) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, origin + ": field '" + key + "': " + e.what());
    }
}

} // namespace

CutList parse_cutlist(const std::string& text, const std::string& origin) {
    const json doc = parse_doc(text, "cuefuse-cuts/1", origin);
    CutList list;
    list.video_id = get<std::string>(doc, "video_id", origin);
    list.source_path = get<std::string>(doc, "source_path", origin);
    list.fps = get<double>(doc, "fps", origin);
    for (const auto& c : get<json>(doc, "cuts", origin)) {
        Cut cut{get<double>(c, "start", origin), get<double>(c, "end", origin),
                get<std::int64_t>(c, "first_frame", origin), get<std::int64_t>(c, "last_frame", origin),
                get<std::string>(c, "text", origin)};
        if (!list.cuts.empty() && cut.start < list.cuts.back().end)
            throw Error(Errc::UnorderedEntries, origin + ": cuts overlap or are out of order");
        list.cuts.push_back(std::move(cut));
    }
    return list;
}

std::string shell_quote(const std::string& word) {
    std::string out = "'";
    for (char c : word) {
        if (c == '\'')
            out += "'\\''";
        else
            out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

namespace {

std::string seconds_arg(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

} // namespace

std::string render_cut_script(const CutList& list, const std::string& srt_path, const std::string& output_path) {
    std::ostringstream sh;
    sh << "#!/bin/sh\n"
       << "# cut script for " << list.video_id << " (" << list.cuts.size() << " segments)\n"
       << "set -eu\n"
       << "cd \"$(dirname \"$0\")\"\n"
       << "FFMPEG=\"${FFMPEG:-ffmpeg}\"\n"
       << "SRC=" << shell_quote(list.source_path) << '\n'
       << "OUT=" << shell_quote(output_path) << '\n'
       << "SUBS=" << shell_quote(srt_path) << '\n';
    if (list.cuts.empty()) {
        sh << "echo \"warning: empty summary for " << list.video_id << ", nothing to cut\" >&2\n"
           << "exit 0\n";
        return sh.str();
    }
    sh << "WORK=$(mktemp -d)\n"
       << "trap 'rm -rf \"$WORK\"' EXIT\n"
       << ": > \"$WORK/parts.txt\"\n";
    for (std::size_t i = 0; i < list.cuts.size(); ++i) {
        const auto& c = list.cuts[i];
        char part[32];
        std::snprintf(part, sizeof part, "part%03zu.mp4", i + 1);
        sh << "\"$FFMPEG\" -nostdin -y -loglevel error -ss " << seconds_arg(c.start) << " -i \"$SRC\" -t "
           << seconds_arg(c.end - c.start) << " -c copy \"$WORK/" << part << "\"\n"
           << "echo \"file '" << part << "'\" >> \"$WORK/parts.txt\"\n";
    }
    sh << "\"$FFMPEG\" -nostdin -y -loglevel error -f concat -safe 0 -i \"$WORK/parts.txt\" -c copy "
          "\"$WORK/joined.mp4\"\n"
       << "\"$FFMPEG\" -nostdin -y -loglevel error -i \"$WORK/joined.mp4\" -i \"$SUBS\" -c copy -c:s mov_text "
          "\"$OUT\"\n";
    return sh.str();
}

namespace {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    // Avoid "-0.0000".
    return std::string(buf) == "-0.0000" ? "0.0000" : buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

std::vector<std::pair<std::string, std::string>> report_metadata(const std::vector<MetricsReport>& reports) {
    return {
        {"method", reports.empty() ? std::string("none") : reports.front().method},
        {"bleu_smoothing", kBleuSmoothing},
        {"segment_matching", "greedy one-to-one, IoU > 0.5"},
        {"rank_correlation", "kendall tau-b and spearman rho over matched pairs, candidate order vs reference order"},
        {"precision_recall", "frame-level at 1 fps; f1 is the segment-level IoU F1"},
        {"bertscore", "greedy cosine, no idf; empty when unavailable"},
        {"mean", "unweighted over videos"},
    };
}

std::vector<std::string> csv_row(const MetricsReport& r) {
    return {csv_field(r.video_id),
            fixed4(r.text.rouge1),
            fixed4(r.text.rouge2),
            fixed4(r.text.rougeL),
            fixed4(r.text.bleu),
            r.text.bertscore_f1 ? fixed4(*r.text.bertscore_f1) : std::string(),
            fixed4(r.text.length_ratio),
            fixed4(r.temporal.f1),
            fixed4(r.temporal.precision),
            fixed4(r.temporal.recall),
            fixed4(r.temporal.kendall_tau),
            fixed4(r.temporal.spearman_rho)};
}

json json_row(const MetricsReport& r) {
    return {{"video_id", r.video_id},
            {"method", r.method},
            {"rouge1", round4(r.text.rouge1)},
            {"rouge2", round4(r.text.rouge2)},
            {"rougeL", round4(r.text.rougeL)},
            {"bleu", round4(r.text.bleu)},
            {"bertscore", r.text.bertscore_f1 ? json(round4(*r.text.bertscore_f1)) : json(nullptr)},
            {"length_ratio", round4(r.text.length_ratio)},
            {"f1", round4(r.temporal.f1)},
            {"precision", round4(r.temporal.precision)},
            {"recall", round4(r.temporal.recall)},
            {"kendall_tau", round4(r.temporal.kendall_tau)},
            {"spearman_rho", round4(r.temporal.spearman_rho)}};
}

} // namespace

std::string render_report(const std::vector<MetricsReport>& reports, ReportFormat format) {
    const auto meta = report_metadata(reports);
    if (format == ReportFormat::Json) {
        json md = json::object();
        for (const auto& [k, v] : meta) md[k] = v;
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(json_row(r));
        const json doc = {{"schema", "cuefuse-report/1"},
                          {"metadata", md},
                          {"rows", rows},
                          {"mean", reports.empty() ? json(nullptr) : json_row(mean_report(reports))}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    for (const auto& [k, v] : meta) out << "# " << k << ": " << v << '\n';
    out << kReportColumns << '\n';
    if (reports.empty()) return out.str();
    const auto emit = [&](const MetricsReport& r) {
        const auto cells = csv_row(r);
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    for (const auto& r : reports) emit(r);
    emit(mean_report(reports));
    return out.str();
}

SummaryRecord to_record(const Summary& summary, const std::string& method) {
    SummaryRecord rec;
    rec.video_id = summary.video_id;
    rec.method = method;
    for (const auto& s : summary.selected)
        rec.sentences.push_back({s.index, s.interval.start(), s.interval.end(), s.text()});
    rec.segments = summary.segments;
    rec.weights = summary.weights.w;
    rec.mu = summary.weights.mu;
    rec.sigma = summary.weights.sigma;
    rec.theta = summary.weights.theta;
    rec.candidates = summary.candidates;
    rec.degenerate = summary.weights.degenerate();
    return rec;
}

std::string summary_to_json(const SummaryRecord& rec) {
    json sentences = json::array();
    for (const auto& s : rec.sentences)
        sentences.push_back({{"index", s.index}, {"start", s.start}, {"end", s.end}, {"text", s.text}});
    json segments = json::array();
    for (const auto& s : rec.segments)
        segments.push_back({{"start", s.interval.start()},
                            {"end", s.interval.end()},
                            {"first_frame", s.frames.first},
                            {"last_frame", s.frames.last},
                            {"sentences", s.sentence_indices},
                            {"text", s.text}});
    const json doc = {{"schema", "cuefuse-summary/1"},
                      {"video_id", rec.video_id},
                      {"method", rec.method},
                      {"sentences", sentences},
                      {"segments", segments},
                      {"weights", rec.weights},
                      {"mu", rec.mu},
                      {"sigma", rec.sigma},
                      {"theta", rec.theta},
                      {"candidates", rec.candidates},
                      {"degenerate", rec.degenerate}};
    return doc.dump(2) + "\n";
}

SummaryRecord parse_summary(const std::string& text, const std::string& origin) {
    const json doc = parse_doc(text, "cuefuse-summary/1", origin);
    SummaryRecord rec;
    rec.video_id = get<std::string>(doc, "video_id", origin);
    rec.method = get<std::string>(doc, "method", origin);
    for (const auto& s : get<json>(doc, "sentences", origin))
        rec.sentences.push_back({get<std::size_t>(s, "index", origin), get<double>(s, "start", origin),
                                 get<double>(s, "end", origin), get<std::string>(s, "text", origin)});
    for (const auto& s : get<json>(doc, "segments", origin)) {
        Segment seg;
        seg.interval = TimeInterval(get<double>(s, "start", origin), get<double>(s, "end", origin));
        seg.frames = {get<std::int64_t>(s, "first_frame", origin), get<std::int64_t>(s, "last_frame", origin)};
        seg.sentence_indices = get<std::vector<std::size_t>>(s, "sentences", origin);
        seg.text = get<std::string>(s, "text", origin);
        rec.segments.push_back(std::move(seg));
    }
    rec.weights = get<std::vector<double>>(doc, "weights", origin);
    rec.mu = get<double>(doc, "mu", origin);
    rec.sigma = get<double>(doc, "sigma", origin);
    rec.theta = get<double>(doc, "theta", origin);
    rec.candidates = get<std::vector<std::size_t>>(doc, "candidates", origin);
    rec.degenerate = get<bool>(doc, "degenerate", origin);
    return rec;
}

} // namespace cuefuse
