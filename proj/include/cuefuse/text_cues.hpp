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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cuefuse/ingest.hpp"
#include "cuefuse/timeline.hpp"

namespace cuefuse {

using TokenLists = std::vector<std::vector<std::string>>;

/// token -> valence in [-1, 1]
struct Lexicon {
    std::map<std::string, double> entries;

    bool empty() const noexcept { return entries.empty(); }
    std::optional<double> valence(const std::string& token) const;
};

/// "token<TAB>valence" lines; '#' starts a comment line.
Lexicon parse_lexicon(const std::string& text, const std::string& origin = "<memory>");
Lexicon load_lexicon(const std::filesystem::path& path);
/// The bundled English lexicon.
const Lexicon& default_lexicon();

struct Gazetteer {
    std::map<std::string, EntityKind> entries;
};

Gazetteer parse_gazetteer(const std::string& text, const std::string& origin = "<memory>");
Gazetteer load_gazetteer(const std::filesystem::path& path);
const Gazetteer& default_gazetteer();

enum KeywordSource : unsigned { kFromTfIdf = 1u, kFromSentiment = 2u, kFromEntity = 4u };

struct Keyword {
    unsigned sources = 0; // KeywordSource bits
    double score = 0.0;

    friend bool operator==(const Keyword&, const Keyword&) = default;
};

struct KeywordSet {
    std::map<std::string, Keyword> keywords;

    bool contains(const std::string& token) const { return keywords.count(token) != 0; }
    std::size_t size() const noexcept { return keywords.size(); }
};

/// ln((1+N)/(1+df)) + 1
double smoothed_idf(std::size_t documents, std::size_t document_frequency) noexcept;

/// Sentences are the documents. score(token) = max over sentences of count * idf.
std::map<std::string, double> tfidf_scores(const TokenLists& sentences);

/// Tokens of high-intensity sentences, mapped to |valence|. A sentence's
/// intensity is the mean |valence| of its in-lexicon tokens.
std::map<std::string, double> sentiment_terms(const TokenLists& sentences, const Lexicon& lexicon,
                                              double intensity_threshold = 0.4);

/// Annotated entity tokens, plus gazetteer hits in the text when `gazetteer` is given.
std::set<std::string> entity_terms(const std::vector<EntityAnnotation>& annotations, const Gazetteer* gazetteer,
                                   const TokenLists& sentences);

struct KeywordResult {
    KeywordSet set;
    std::vector<CueEvent> cues; // one per keyword occurrence per source
};

/// Top-k TF-IDF tokens (ties lexicographic) united with sentiment and entity tokens.
KeywordResult build_keywords(const Transcript& transcript, const std::map<std::string, double>& tfidf,
                             const std::map<std::string, double>& sentiment, const std::set<std::string>& entities,
                             std::size_t top_k);

struct TextCueConfig {
    std::size_t top_k = 5;
    double intensity_threshold = 0.4;
    bool use_gazetteer = true;
};

KeywordResult analyze_text(const Transcript& transcript, const std::vector<EntityAnnotation>& annotations,
                           const Lexicon& lexicon, const Gazetteer& gazetteer, const TextCueConfig& config = {});

TokenLists sentence_tokens(const Transcript& transcript);

} // namespace cuefuse
