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

#include "cuefuse/text_cues.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bundled_data.hpp"
#include "cuefuse/error.hpp"
#include "cuefuse/text.hpp"

namespace cuefuse {

namespace {

// Splits "a<TAB>b" lines, skipping blanks and '#' comments.
template <typename Fn>
void for_each_tsv_row(const std::string& text, const std::string& origin, Fn&& fn) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw Error(Errc::SchemaError, origin + ":" + std::to_string(lineno) + ": expected token<TAB>value");
        fn(line.substr(0, tab), line.substr(tab + 1), lineno);
    }
}

std::string lower_key(const std::string& token) {
    const auto toks = tokenize(token);
    return join(toks, " ");
}

} // namespace

std::optional<double> Lexicon::valence(const std::string& token) const {
    const auto it = entries.find(token);
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

Lexicon parse_lexicon(const std::string& text, const std::string& origin) {
    Lexicon lex;
    for_each_tsv_row(text, origin, [&](const std::string& token, const std::string& value, std::size_t lineno) {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw Error(Errc::SchemaError, origin + ":" + std::to_string(lineno) + ": bad valence '" + value + "'");
        }
        if (!std::isfinite(v) || v < -1.0 || v > 1.0)
            throw Error(Errc::SchemaError, origin + ":" + std::to_string(lineno) + ": valence outside [-1,1]");
        const std::string key = lower_key(token);
        if (!key.empty()) lex.entries[key] = v;
    });
    return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) { return parse_lexicon(read_text_file(path), path.string()); }

const Lexicon& default_lexicon() {
    static const Lexicon lex = parse_lexicon(std::string(bundled::kSentimentLexicon), "bundled:sentiment_en.tsv");
    return lex;
}

Gazetteer parse_gazetteer(const std::string& text, const std::string& origin) {
    Gazetteer g;
    for_each_tsv_row(text, origin, [&](const std::string& token, const std::string& kind, std::size_t lineno) {
        const auto parsed = parse_entity_kind(kind);
        if (!parsed)
            throw Error(Errc::SchemaError, origin + ":" + std::to_string(lineno) + ": unsupported entity kind '" + kind + "'");
        const std::string key = lower_key(token);
        if (!key.empty()) g.entries[key] = *parsed;
    });
    return g;
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
    return parse_gazetteer(read_text_file(path), path.string());
}

const Gazetteer& default_gazetteer() {
    static const Gazetteer g = parse_gazetteer(std::string(bundled::kGazetteer), "bundled:gazetteer_en.tsv");
    return g;
}

double smoothed_idf(std::size_t documents, std::size_t document_frequency) noexcept {
    return std::log((1.0 + static_cast<double>(documents)) / (1.0 + static_cast<double>(document_frequency))) + 1.0;
}

std::map<std::string, double> tfidf_scores(const TokenLists& sentences) {
    if (sentences.empty()) throw Error(Errc::EmptyCorpus, "TF-IDF needs at least one sentence");
    std::vector<std::map<std::string, std::size_t>> counts(sentences.size());
    std::map<std::string, std::size_t> df;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        for (const auto& tok : sentences[i])
            if (!is_stopword(tok)) ++counts[i][tok];
        for (const auto& [tok, _] : counts[i]) ++df[tok];
    }
    std::map<std::string, double> scores;
    for (const auto& sentence_counts : counts) {
        for (const auto& [tok, c] : sentence_counts) {
            const double s = static_cast<double>(c) * smoothed_idf(sentences.size(), df[tok]);
            auto [it, inserted] = scores.emplace(tok, s);
            if (!inserted) it->second = std::max(it->second, s);
        }
    }
    return scores;
}

std::map<std::string, double> sentiment_terms(const TokenLists& sentences, const Lexicon& lexicon,
                                              double intensity_threshold) {
    if (lexicon.empty()) throw Error(Errc::InvalidArgument, "sentiment lexicon is empty");
    std::map<std::string, double> out;
    for (const auto& sentence : sentences) {
        double total = 0.0;
        std::size_t hits = 0;
        for (const auto& tok : sentence)
            if (const auto v = lexicon.valence(tok)) {
                total += std::abs(*v);
                ++hits;
            }
        if (hits == 0 || total / static_cast<double>(hits) < intensity_threshold) continue;
        for (const auto& tok : sentence)
            if (const auto v = lexicon.valence(tok); v && std::abs(*v) >= 0.3) out[tok] = std::abs(*v);
    }
    return out;
}

std::set<std::string> entity_terms(const std::vector<EntityAnnotation>& annotations, const Gazetteer* gazetteer,
                                   const TokenLists& sentences) {
    std::set<std::string> out;
    for (const auto& a : annotations)
        for (auto& tok : tokenize(a.token))
            if (!is_stopword(tok)) out.insert(std::move(tok));
    if (gazetteer) {
        for (const auto& sentence : sentences)
            for (const auto& tok : sentence)
                if (gazetteer->entries.count(tok)) out.insert(tok);
    }
    return out;
}

KeywordResult build_keywords(const Transcript& transcript, const std::map<std::string, double>& tfidf,
                             const std::map<std::string, double>& sentiment, const std::set<std::string>& entities,
                             std::size_t top_k) {
    if (top_k < 1) throw Error(Errc::InvalidArgument, "top_k must be at least 1");
    std::vector<std::pair<std::string, double>> ranked(tfidf.begin(), tfidf.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    KeywordResult result;
    auto& kw = result.set.keywords;
    const auto score_of = [&](const std::string& tok) {
        const auto it = tfidf.find(tok);
        return it == tfidf.end() ? 0.0 : it->second;
    };
    for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) {
        if (is_stopword(ranked[i].first)) continue;
        kw[ranked[i].first] = Keyword{kFromTfIdf, ranked[i].second};
    }
    for (const auto& [tok, _] : sentiment) {
        if (is_stopword(tok)) continue;
        auto& k = kw[tok];
        k.sources |= kFromSentiment;
        k.score = score_of(tok);
    }
    for (const auto& tok : entities) {
        if (is_stopword(tok)) continue;
        auto& k = kw[tok];
        k.sources |= kFromEntity;
        k.score = score_of(tok);
    }

    for (const auto& sentence : transcript.sentences) {
        for (const auto& word : sentence.words) {
            unsigned emitted = 0;
            for (const auto& tok : word.tokens) {
                const auto it = kw.find(tok);
                if (it == kw.end()) continue;
                const unsigned fresh = it->second.sources & ~emitted;
                if (fresh & kFromTfIdf) result.cues.push_back(make_cue(CueKind::TfIdf, word.interval, it->second.score));
                if (fresh & kFromSentiment)
                    result.cues.push_back(make_cue(CueKind::Sentiment, word.interval, sentiment.at(tok)));
                if (fresh & kFromEntity) result.cues.push_back(make_cue(CueKind::Entity, word.interval, 1.0));
                emitted |= fresh;
            }
        }
    }
    return result;
}

TokenLists sentence_tokens(const Transcript& transcript) {
    TokenLists out;
    out.reserve(transcript.sentences.size());
    for (const auto& s : transcript.sentences) out.push_back(s.tokens());
    return out;
}

KeywordResult analyze_text(const Transcript& transcript, const std::vector<EntityAnnotation>& annotations,
                           const Lexicon& lexicon, const Gazetteer& gazetteer, const TextCueConfig& config) {
    const TokenLists tokens = sentence_tokens(transcript);
    const auto tfidf = tfidf_scores(tokens);
    const auto sentiment = sentiment_terms(tokens, lexicon, config.intensity_threshold);
    const auto entities = entity_terms(annotations, config.use_gazetteer ? &gazetteer : nullptr, tokens);
    return build_keywords(transcript, tfidf, sentiment, entities, config.top_k);
}

} // namespace cuefuse
