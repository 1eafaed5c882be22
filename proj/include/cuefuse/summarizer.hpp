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

#include "cuefuse/fusion.hpp"
#include "cuefuse/timeline.hpp"

namespace cuefuse {

enum class DiversityMode { Literal, Strict };
enum class WeightsMode { Uniform, Weighted };

struct SummaryConfig {
    double lambda = 0.3;                 // threshold factor
    double delta = 0.2;                  // diversity factor
    DiversityMode diversity_mode = DiversityMode::Literal;
    double strict_sim_threshold = 0.5;
    WeightsMode weights_mode = WeightsMode::Uniform;
};

void validate(const SummaryConfig& config);

struct SentenceWeights {
    std::vector<double> w; // one per transcript sentence
    double mu = 0.0;
    double sigma = 0.0;    // population
    double theta = 0.0;    // mu + lambda*sigma

    bool degenerate() const noexcept;
};

struct Summary {
    std::string video_id;
    std::vector<TimedSentence> selected;
    std::string text;
    std::vector<Segment> segments;         // one per selected sentence
    SentenceWeights weights;
    std::vector<std::size_t> candidates;   // sentence indices passing theta
};

/// w_s = sum over bonus tokens of count(token in sentence) * (weight or 1).
SentenceWeights sentence_weights(const Transcript& transcript, const std::vector<BonusWord>& bonus,
                                 const SummaryConfig& config);

/// Indices with w >= theta, in transcript order.
std::vector<std::size_t> select_candidates(const SentenceWeights& weights);

/// Cosine similarity of TF-IDF vectors built over the given sentences only
/// (stopwords excluded, smoothed IDF). Zero vectors have similarity 0.
std::vector<std::vector<double>> tfidf_similarity(const std::vector<std::vector<std::string>>& sentences);

/// Greedy scan in order; the first candidate is always kept.
std::vector<std::size_t> diversity_filter(const Transcript& transcript, const std::vector<std::size_t>& candidates,
                                          const SummaryConfig& config);

/// Per-sentence segments; frames follow to_frame_range when `meta` is given.
std::vector<Segment> sentence_segments(const std::vector<TimedSentence>& sentences, const std::optional<VideoMeta>& meta);

Summary summarize(const Transcript& transcript, const std::vector<BonusWord>& bonus, const SummaryConfig& config,
                  const std::optional<VideoMeta>& meta = std::nullopt);

struct CuePhrases {
    std::vector<std::string> bonus;
    std::vector<std::string> stigma;
};

const CuePhrases& default_cue_phrases();

struct EdmundsonWeights {
    double key = 1.0;
    double position = 1.0;
    double cue = 1.0;
    std::size_t key_terms = 5; // number of top-frequency terms treated as key words
};

/// Per-sentence Edmundson scores (key + position + cue), exposed for inspection.
std::vector<double> edmundson_scores(const Transcript& transcript, const CuePhrases& cue_words,
                                     const EdmundsonWeights& weights = {});

/// Top ceil(ratio*n) sentences by score, earlier sentence on ties, emitted in transcript order.
Summary edmundson_summarize(const Transcript& transcript, const CuePhrases& cue_words, double target_ratio,
                            const std::optional<VideoMeta>& meta = std::nullopt, const EdmundsonWeights& weights = {});

/// Segments of the summary merged across gaps <= gap_tolerance, chronological.
std::vector<Segment> compile_segments(const Summary& summary, const VideoMeta& meta,
                                      double gap_tolerance = kDefaultGapTolerance);

} // namespace cuefuse
