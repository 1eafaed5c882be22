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

#include <optional>
#include <string>
#include <vector>

#include "cuefuse/ingest.hpp"
#include "cuefuse/summarizer.hpp"
#include "cuefuse/timeline.hpp"

namespace cuefuse {

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    friend bool operator==(const PRF&, const PRF&) = default;
};

/// Harmonic mean; 0 when both inputs are 0.
double harmonic_mean(double p, double r) noexcept;

using Tokens = std::vector<std::string>;

/// Clipped n-gram overlap.
PRF rouge_n(const Tokens& candidate, const Tokens& reference, std::size_t n);
/// Longest-common-subsequence based ROUGE.
PRF rouge_l(const Tokens& candidate, const Tokens& reference);
std::size_t lcs_length(const Tokens& a, const Tokens& b);

/// Geometric mean of clipped 1..max_n-gram precisions times the brevity
/// penalty. Orders n >= 2 with zero matches use (0+1)/(total+1).
double bleu(const Tokens& candidate, const Tokens& reference, std::size_t max_n = 4);
inline constexpr const char* kBleuSmoothing = "add-one on zero-match orders n>=2";

/// Greedy cosine matching over token embeddings, no IDF weighting.
PRF bertscore(const TokenEmbeddings& candidate, const TokenEmbeddings& reference);

/// |summary tokens| / |source tokens|.
double length_ratio(std::size_t summary_tokens, std::size_t source_tokens);

/// |A n B| / |A u B| over token sets; 1 when both are empty.
double jaccard(const Tokens& a, const Tokens& b);

/// Intersection over union of two intervals; identical zero-length intervals give 1.
double iou(const TimeInterval& a, const TimeInterval& b) noexcept;

/// One-to-one match pairs (candidate index, reference index) with their IoU.
struct SegmentMatch {
    std::size_t candidate = 0;
    std::size_t reference = 0;
    double iou = 0.0;
};

/// Greedy matching in descending IoU order (ties: lower candidate, then
/// lower reference index); only pairs with IoU > threshold are kept.
std::vector<SegmentMatch> match_segments(const std::vector<TimeInterval>& candidate,
                                         const std::vector<TimeInterval>& reference, double iou_threshold = 0.5);

PRF temporal_f1(const std::vector<TimeInterval>& candidate, const std::vector<TimeInterval>& reference,
                double iou_threshold = 0.5);

/// Rasterize onto a sample_fps grid over [0, duration); cell k is covered
/// when a segment overlaps [k/fps, (k+1)/fps) with positive length, or a
/// zero-length segment falls inside it.
PRF frame_prf(const std::vector<TimeInterval>& candidate, const std::vector<TimeInterval>& reference, double duration,
              double sample_fps = 1.0);

/// Kendall tau-b with tie correction, O(n log n).
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);
/// Pearson correlation of mid-ranks.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);
/// 1-based ranks; ties share their mean rank.
std::vector<double> average_ranks(const std::vector<double>& v);

struct TextMetrics {
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
    double bleu = 0.0;
    std::optional<double> bertscore_f1;
    double length_ratio = 0.0;

    friend bool operator==(const TextMetrics&, const TextMetrics&) = default;
};

struct TemporalMetrics {
    double f1 = 0.0;        // IoU-matched segments
    double precision = 0.0; // frame-level
    double recall = 0.0;    // frame-level
    double kendall_tau = 0.0;
    double spearman_rho = 0.0;
    double segment_precision = 0.0;
    double segment_recall = 0.0;
    double frame_f1 = 0.0;
    std::size_t matched = 0;

    friend bool operator==(const TemporalMetrics&, const TemporalMetrics&) = default;
};

struct MetricsReport {
    std::string video_id;
    std::string method;
    TextMetrics text;
    TemporalMetrics temporal;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Candidate side of an evaluation: sentence texts and their source intervals.
struct CandidateSummary {
    std::string video_id;
    std::vector<TimeInterval> intervals;
    std::vector<std::string> sentences;
};

CandidateSummary candidate_from(const Summary& summary);

struct EvaluationInputs {
    const Transcript* transcript = nullptr;
    VideoMeta meta;
    /// Contextual embeddings of every transcript token, in transcript order.
    const TokenEmbeddings* transcript_embeddings = nullptr;
    double iou_threshold = 0.5;
    double sample_fps = 1.0;
    std::string method = "multimodal";
};

/// Text and temporal metrics for one candidate against its reference. BERTScore
/// is left empty without embeddings or when a reference sentence cannot be
/// located in the transcript. Rank correlations run over IoU-matched pairs:
/// candidate order versus partner reference order; fewer than two pairs give 0.
MetricsReport evaluate_pair(const CandidateSummary& candidate, const PgtSummary& reference,
                            const EvaluationInputs& inputs);

/// Unweighted mean of each column, folded in input order. BERTScore is
/// averaged over the reports that have it.
MetricsReport mean_report(const std::vector<MetricsReport>& reports);

} // namespace cuefuse
