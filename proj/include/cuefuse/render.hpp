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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cuefuse/metrics.hpp"
#include "cuefuse/summarizer.hpp"
#include "cuefuse/timeline.hpp"

namespace cuefuse {

/// HH:MM:SS,mmm
std::string format_srt_time(std::int64_t milliseconds);

/// Seconds to whole milliseconds, rounded half away from zero.
std::int64_t to_millis(double seconds) noexcept;

struct SrtBlock {
    std::size_t index = 0;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string text;

    friend bool operator==(const SrtBlock&, const SrtBlock&) = default;
};

/// One block per summary segment, re-based onto the concatenated summary
/// timeline. Durations are taken in integer milliseconds so blocks tile
/// without drift.
std::string render_srt(const Summary& summary);
std::vector<SrtBlock> parse_srt(const std::string& text);

struct Cut {
    double start = 0.0;
    double end = 0.0;
    std::int64_t first_frame = 0;
    std::int64_t last_frame = 0;
    std::string text;

    friend bool operator==(const Cut&, const Cut&) = default;
};

struct CutList {
    std::string video_id;
    std::string source_path;
    double fps = 0.0;
    std::vector<Cut> cuts; // ordered, non-overlapping

    friend bool operator==(const CutList&, const CutList&) = default;
};

/// Contiguous sentences share one cut; gaps are never bridged, so the cut
/// durations add up to the summary duration.
CutList make_cutlist(const Summary& summary, const VideoMeta& meta, const std::string& source_path);
std::string cutlist_to_json(const CutList& cuts);
CutList parse_cutlist(const std::string& json_text, const std::string& origin = "<memory>");

/// POSIX sh quoting: the whole word in single quotes, embedded ' as '\''.
std::string shell_quote(const std::string& word);

/// sh script driving an external cutter: one stream-copy extract per cut, a
/// concat, then a subtitle mux. `${FFMPEG:-ffmpeg}` selects the binary.
std::string render_cut_script(const CutList& cuts, const std::string& srt_path, const std::string& output_path);

enum class ReportFormat { Json, Csv };

/// Per-video rows, a corpus-mean row and a metadata block.
std::string render_report(const std::vector<MetricsReport>& reports, ReportFormat format);
inline constexpr const char* kReportColumns =
    "video_id,rouge1,rouge2,rougeL,bleu,bertscore,length_ratio,f1,precision,recall,kendall_tau,spearman_rho";

struct SummaryRecord {
    struct Sentence {
        std::size_t index = 0;
        double start = 0.0;
        double end = 0.0;
        std::string text;

        friend bool operator==(const Sentence&, const Sentence&) = default;
    };
    std::string video_id;
    std::string method;
    std::vector<Sentence> sentences;
    std::vector<Segment> segments;
    std::vector<double> weights;
    double mu = 0.0;
    double sigma = 0.0;
    double theta = 0.0;
    std::vector<std::size_t> candidates;
    bool degenerate = false;

    friend bool operator==(const SummaryRecord&, const SummaryRecord&) = default;
};

SummaryRecord to_record(const Summary& summary, const std::string& method);
std::string summary_to_json(const SummaryRecord& record);
SummaryRecord parse_summary(const std::string& json_text, const std::string& origin = "<memory>");

} // namespace cuefuse
