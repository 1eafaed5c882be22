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

#include "cuefuse/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cuefuse/error.hpp"
#include "cuefuse/simd.hpp"
#include "cuefuse/text.hpp"

namespace cuefuse {

void validate(const SummaryConfig& config) {
    if (!(config.lambda >= 0.0)) throw Error(Errc::InvalidArgument, "lambda must be >= 0");
    if (!(config.delta >= 0.0)) throw Error(Errc::InvalidArgument, "delta must be >= 0");
    if (!(config.strict_sim_threshold > 0.0 && config.strict_sim_threshold <= 1.0))
        throw Error(Errc::InvalidArgument, "strict similarity threshold must lie in (0,1]");
}

bool SentenceWeights::degenerate() const noexcept {
    return std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; });
}

SentenceWeights sentence_weights(const Transcript& transcript, const std::vector<BonusWord>& bonus,
                                 const SummaryConfig& config) {
    validate(config);
    if (transcript.sentences.empty()) throw Error(Errc::EmptyTranscript, "cannot weight an empty transcript");
    SentenceWeights sw;
    sw.w.reserve(transcript.sentences.size());
    for (const auto& s : transcript.sentences) {
        const auto tokens = s.tokens();
        double w = 0.0;
        for (const auto& b : bonus) {
            const auto count = std::count(tokens.begin(), tokens.end(), b.token);
            w += static_cast<double>(count) * (config.weights_mode == WeightsMode::Weighted ? b.weight : 1.0);
        }
        sw.w.push_back(w);
    }
    const double n = static_cast<double>(sw.w.size());
    sw.mu = std::accumulate(sw.w.begin(), sw.w.end(), 0.0) / n;
    double var = 0.0;
    for (double x : sw.w) var += (x - sw.mu) * (x - sw.mu);
    sw.sigma = std::sqrt(var / n);
    sw.theta = sw.mu + config.lambda * sw.sigma;
    return sw;
}

std::vector<std::size_t> select_candidates(const SentenceWeights& weights) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < weights.w.size(); ++i)
        if (weights.w[i] >= weights.theta) out.push_back(i);
    return out;
}

std::vector<std::vector<double>> tfidf_similarity(const std::vector<std::vector<std::string>>& sentences) {
    const std::size_t n = sentences.size();
    std::map<std::string, std::size_t> vocab;
    std::vector<std::map<std::size_t, double>> counts(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& tok : sentences[i]) {
            if (is_stopword(tok)) continue;
            const auto [it, _] = vocab.emplace(tok, vocab.size());
            counts[i][it->second] += 1.0;
        }
    std::vector<std::size_t> df(vocab.size(), 0);
    for (const auto& c : counts)
        for (const auto& [term, _] : c) ++df[term];

    std::vector<std::vector<double>> vectors(n, std::vector<double>(vocab.size(), 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [term, c] : counts[i]) vectors[i][term] = c * smoothed_idf(n, df[term]);

    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = std::sqrt(simd::sum_squares(vectors[i]));

    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            if (norms[i] > 0.0 && norms[j] > 0.0)
                s = std::clamp(simd::dot(vectors[i], vectors[j]) / (norms[i] * norms[j]), 0.0, 1.0);
            sim[i][j] = sim[j][i] = s;
        }
    return sim;
}

std::vector<std::size_t> diversity_filter(const Transcript& transcript, const std::vector<std::size_t>& candidates,
                                          const SummaryConfig& config) {
    validate(config);
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(candidates.size());
    for (auto idx : candidates) tokens.push_back(transcript.sentences.at(idx).tokens());
    const auto sim = tfidf_similarity(tokens);

    std::vector<std::size_t> kept_pos;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (kept_pos.empty()) {
            kept_pos.push_back(c);
            continue;
        }
        double max_sim = 0.0;
        for (auto k : kept_pos) max_sim = std::max(max_sim, sim[c][k]);
        const bool keep = config.diversity_mode == DiversityMode::Literal ? max_sim * config.delta < 0.5
                                                                          : max_sim < config.strict_sim_threshold;
        if (keep) kept_pos.push_back(c);
    }
    std::vector<std::size_t> out;
    out.reserve(kept_pos.size());
    for (auto p : kept_pos) out.push_back(candidates[p]);
    return out;
}

std::vector<Segment> sentence_segments(const std::vector<TimedSentence>& sentences, const std::optional<VideoMeta>& meta) {
    std::vector<Segment> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) {
        Segment seg;
        seg.interval = s.interval;
        if (meta) seg.frames = to_frame_range(s.interval, *meta);
        seg.sentence_indices = {s.index};
        seg.text = s.text();
        out.push_back(std::move(seg));
    }
    return out;
}

namespace {

Summary assemble(const Transcript& transcript, const std::vector<std::size_t>& chosen, const std::optional<VideoMeta>& meta) {
    Summary summary;
    summary.video_id = transcript.video_id;
    std::vector<std::string> texts;
    for (auto idx : chosen) {
        summary.selected.push_back(transcript.sentences.at(idx));
        texts.push_back(summary.selected.back().text());
    }
    summary.text = join(texts, " ");
    summary.segments = sentence_segments(summary.selected, meta);
    return summary;
}

} // namespace

Summary summarize(const Transcript& transcript, const std::vector<BonusWord>& bonus, const SummaryConfig& config,
                  const std::optional<VideoMeta>& meta) {
    SentenceWeights weights = sentence_weights(transcript, bonus, config);
    std::vector<std::size_t> candidates = select_candidates(weights);
    const auto kept = diversity_filter(transcript, candidates, config);
    Summary summary = assemble(transcript, kept, meta);
    summary.weights = std::move(weights);
    summary.candidates = std::move(candidates);
    return summary;
}

const CuePhrases& default_cue_phrases() {
    static const CuePhrases phrases{
        {"important", "significant", "key", "main", "essential", "crucial", "especially", "particularly",
         "above all", "most of all", "in conclusion", "in summary", "the point is", "definitely", "really"},
        {"hardly", "impossible", "perhaps", "maybe", "probably", "might", "unclear", "whatever", "kind of",
         "sort of", "i guess"},
    };
    return phrases;
}

namespace {

std::size_t count_phrase(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > tokens.size()) return 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i)
        if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) ++hits;
    return hits;
}

void normalize_by_max_abs(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m > 0.0)
        for (double& x : v) x /= m;
}

} // namespace

std::vector<double> edmundson_scores(const Transcript& transcript, const CuePhrases& cue_words,
                                     const EdmundsonWeights& weights) {
    const std::size_t n = transcript.sentences.size();
    const TokenLists tokens = sentence_tokens(transcript);

    std::map<std::string, std::size_t> tf;
    for (const auto& s : tokens)
        for (const auto& t : s)
            if (!is_stopword(t)) ++tf[t];
    std::vector<std::pair<std::string, std::size_t>> ranked(tf.begin(), tf.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::map<std::string, double> key;
    for (std::size_t i = 0; i < ranked.size() && i < weights.key_terms; ++i)
        key[ranked[i].first] = static_cast<double>(ranked[i].second);

    std::vector<std::vector<std::string>> bonus_phrases, stigma_phrases;
    for (const auto& p : cue_words.bonus) bonus_phrases.push_back(tokenize(p));
    for (const auto& p : cue_words.stigma) stigma_phrases.push_back(tokenize(p));

    std::vector<double> key_score(n, 0.0), cue_score(n, 0.0), pos_score(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& t : tokens[i])
            if (const auto it = key.find(t); it != key.end()) key_score[i] += it->second;
        double cue = 0.0;
        for (const auto& p : bonus_phrases) cue += static_cast<double>(count_phrase(tokens[i], p));
        for (const auto& p : stigma_phrases) cue -= static_cast<double>(count_phrase(tokens[i], p));
        cue_score[i] = cue;
        // 1 at both ends, falling linearly to 0 at the middle.
        if (n > 1) pos_score[i] = std::abs(2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0);
    }
    normalize_by_max_abs(key_score);
    normalize_by_max_abs(cue_score);

    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i)
        score[i] = weights.key * key_score[i] + weights.position * pos_score[i] + weights.cue * cue_score[i];
    return score;
}

Summary edmundson_summarize(const Transcript& transcript, const CuePhrases& cue_words, double target_ratio,
                            const std::optional<VideoMeta>& meta, const EdmundsonWeights& weights) {
    if (!(target_ratio > 0.0 && target_ratio <= 1.0))
        throw Error(Errc::InvalidArgument, "target ratio must lie in (0,1]");
    if (transcript.sentences.empty()) throw Error(Errc::EmptyTranscript, "cannot summarize an empty transcript");
    const std::size_t n = transcript.sentences.size();
    const auto score = edmundson_scores(transcript, cue_words, weights);
    // Guard ceil against 0.3*10 = 3.0000000000000004.
    const auto take = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(target_ratio * static_cast<double>(n) - 1e-9)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    order.resize(std::max<std::size_t>(1, take));
    std::sort(order.begin(), order.end());

    Summary summary = assemble(transcript, order, meta);
    summary.weights.w = score;
    summary.candidates = order;
    return summary;
}

std::vector<Segment> compile_segments(const Summary& summary, const VideoMeta& meta, double gap_tolerance) {
    auto segments = sentence_segments(summary.selected, meta);
    std::stable_sort(segments.begin(), segments.end(),
                     [](const Segment& a, const Segment& b) { return a.interval.start() < b.interval.start(); });
    return merge_adjacent(segments, gap_tolerance);
}

} // namespace cuefuse
