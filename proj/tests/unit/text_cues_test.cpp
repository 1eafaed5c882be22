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

#include <gtest/gtest.h>

#include <cmath>

#include "cuefuse/error.hpp"
#include "cuefuse/text.hpp"
#include "cuefuse/text_cues.hpp"
#include "synthetic.hpp"

namespace cuefuse {
namespace {

using testing::make_transcript;

TEST(Idf, SmoothedFormula) {
    EXPECT_DOUBLE_EQ(smoothed_idf(2, 2), 1.0);
    EXPECT_DOUBLE_EQ(smoothed_idf(2, 1), std::log(1.5) + 1.0);
    EXPECT_DOUBLE_EQ(smoothed_idf(9, 0), std::log(10.0) + 1.0);
}

TEST(TfIdf, MaxOverSentencesAndStopwordsSkipped) {
    const auto s = tfidf_scores({{"the", "cat", "sat", "sat"}, {"the", "cat", "ran"}});
    EXPECT_EQ(s.count("the"), 0u);
    EXPECT_DOUBLE_EQ(s.at("cat"), 1.0);
    EXPECT_DOUBLE_EQ(s.at("sat"), 2.0 * (std::log(1.5) + 1.0));
    EXPECT_DOUBLE_EQ(s.at("ran"), std::log(1.5) + 1.0);
    EXPECT_THROW(tfidf_scores({}), Error);
}

TEST(Lexicon, ParsesAndValidates) {
    const auto lex = parse_lexicon("# comment\nGreat\t0.8\nawful\t-0.9\n");
    EXPECT_EQ(lex.valence("great"), 0.8);
    EXPECT_EQ(lex.valence("awful"), -0.9);
    EXPECT_EQ(lex.valence("table"), std::nullopt);
    EXPECT_THROW(parse_lexicon("bad\t1.5\n"), Error);
    EXPECT_THROW(parse_lexicon("bad 0.5\n"), Error);
    EXPECT_THROW(parse_lexicon("bad\tx\n"), Error);
}

TEST(Lexicon, BundledDataLoads) {
    EXPECT_GT(default_lexicon().entries.size(), 500u);
    for (const auto& [tok, v] : default_lexicon().entries) {
        ASSERT_GE(v, -1.0);
        ASSERT_LE(v, 1.0);
    }
    EXPECT_GT(default_gazetteer().entries.size(), 20u);
    EXPECT_EQ(default_gazetteer().entries.at("amsterdam"), EntityKind::Location);
}

TEST(Sentiment, IntenseSentencesOnly) {
    const auto lex = parse_lexicon("love\t0.8\nok\t0.1\nhate\t-0.9\n");
    const auto terms = sentiment_terms({{"i", "love", "boats"}, {"ok", "boats"}, {"hate", "ok"}}, lex, 0.4);
    // second sentence: mean 0.1 -> skipped; third: mean 0.5 -> hate only (ok below 0.3)
    EXPECT_EQ(terms.size(), 2u);
    EXPECT_DOUBLE_EQ(terms.at("love"), 0.8);
    EXPECT_DOUBLE_EQ(terms.at("hate"), 0.9);
    EXPECT_THROW(sentiment_terms({{"a"}}, Lexicon{}, 0.4), Error);
}

TEST(Entities, AnnotationsAndGazetteer) {
    const auto gaz = parse_gazetteer("paris\tLOC\n");
    const std::vector<EntityAnnotation> ann{{"Acme Corp", EntityKind::Organization, 0}};
    const TokenLists toks{{"we", "flew", "to", "paris"}};
    EXPECT_EQ(entity_terms(ann, &gaz, toks), (std::set<std::string>{"acme", "corp", "paris"}));
    EXPECT_EQ(entity_terms(ann, nullptr, toks), (std::set<std::string>{"acme", "corp"}));
    EXPECT_THROW(parse_gazetteer("x\tDATE\n"), Error);
}

TEST(Keywords, TopKTiesAreLexicographic) {
    const auto t = make_transcript("v", {{{"zeta", {0.0, 0.3}}, {"alpha", {0.4, 0.7}}, {"mid", {0.8, 1.1}}}});
    const std::map<std::string, double> tfidf{{"zeta", 1.0}, {"alpha", 1.0}, {"mid", 0.5}};
    const auto r = build_keywords(t, tfidf, {}, {}, 1);
    ASSERT_EQ(r.set.size(), 1u);
    EXPECT_TRUE(r.set.contains("alpha"));
    ASSERT_EQ(r.cues.size(), 1u);
    EXPECT_EQ(r.cues[0].kind, CueKind::TfIdf);
    EXPECT_EQ(r.cues[0].time, TimeInterval(0.4, 0.7));
    EXPECT_THROW(build_keywords(t, tfidf, {}, {}, 0), Error);
}

TEST(Keywords, OneCuePerSourcePerOccurrence) {
    const auto t = make_transcript("v", {{{"Paris", {0.0, 0.3}}, {"is", {0.4, 0.7}}, {"lovely.", {0.8, 1.1}}},
                                         {{"Paris!", {1.5, 1.8}}}});
    const std::map<std::string, double> tfidf{{"paris", 2.0}, {"lovely", 1.5}};
    const auto r = build_keywords(t, tfidf, {{"lovely", 0.7}}, {"paris"}, 5);
    EXPECT_EQ(r.set.keywords.at("paris").sources, unsigned(kFromTfIdf | kFromEntity));
    EXPECT_EQ(r.set.keywords.at("lovely").sources, unsigned(kFromTfIdf | kFromSentiment));
    std::size_t tfidf_cues = 0, entity_cues = 0, sentiment_cues = 0;
    for (const auto& c : r.cues) {
        EXPECT_EQ(c.modality, Modality::Textual);
        tfidf_cues += c.kind == CueKind::TfIdf;
        entity_cues += c.kind == CueKind::Entity;
        sentiment_cues += c.kind == CueKind::Sentiment;
    }
    EXPECT_EQ(tfidf_cues, 3u);
    EXPECT_EQ(entity_cues, 2u);
    EXPECT_EQ(sentiment_cues, 1u);
}

TEST(TfIdf, SmallCorpora) {
    const auto every = tfidf_scores({{"boat"}, {"boat", "sea"}, {"boat"}});
    EXPECT_DOUBLE_EQ(every.at("boat"), 1.0);
    EXPECT_EQ(every.count("wind"), 0u);
    EXPECT_DOUBLE_EQ(tfidf_scores({{"boat"}}).at("boat"), 1.0);
}

TEST(Sentiment, NeutralSentenceGivesNothing) {
    const auto lex = parse_lexicon("good\t0.7\n");
    EXPECT_TRUE(sentiment_terms({{"the", "table", "stands"}}, lex, 0.4).empty());
    EXPECT_EQ(sentiment_terms({{"good", "table"}}, lex, 0.4).count("good"), 1u);
}

TEST(Entities, AnnotationOnlyAndDuplicates) {
    const std::vector<EntityAnnotation> ann{{"oulu", EntityKind::Location, 0}, {"Oulu", EntityKind::Location, 1}};
    EXPECT_EQ(entity_terms(ann, nullptr, {}), (std::set<std::string>{"oulu"}));
    EXPECT_TRUE(entity_terms({}, nullptr, {{"nothing", "here"}}).empty());
}

TEST(Keywords, DisjointSourcesUnion) {
    const auto t = make_transcript("v", {{{"a1", {0, 0.1}}}});
    const std::map<std::string, double> tfidf{{"k1", 3.0}, {"k2", 2.0}, {"k3", 1.0}, {"k4", 0.5}};
    const auto r = build_keywords(t, tfidf, {{"s1", 0.5}, {"s2", 0.6}}, {"e1"}, 3);
    EXPECT_EQ(r.set.size(), 6u);
    EXPECT_FALSE(r.set.contains("k4"));
    EXPECT_TRUE(r.cues.empty()); // none of them occur in the transcript
}

TEST(Keywords, CueIntervalsAreWordIntervals) {
    const auto t = load_transcript(testing::fixture("six_sentence_transcript.json"));
    const auto r = analyze_text(t, {}, default_lexicon(), default_gazetteer());
    ASSERT_FALSE(r.cues.empty());
    for (const auto& c : r.cues) {
        bool found = false;
        for (const auto& s : t.sentences)
            for (const auto& w : s.words) found = found || w.interval == c.time;
        EXPECT_TRUE(found);
    }
}

TEST(AnalyzeText, EndToEndOnFixture) {
    const auto t = load_transcript(testing::fixture("six_sentence_transcript.json"));
    const auto r = analyze_text(t, {}, default_lexicon(), default_gazetteer());
    EXPECT_GE(r.set.size(), 5u);
    // "rocket" appears twice in one sentence and nowhere else: the top TF-IDF term.
    EXPECT_TRUE(r.set.contains("rocket"));
    for (const auto& [tok, kw] : r.set.keywords) EXPECT_FALSE(is_stopword(tok)) << tok;
}

} // namespace
} // namespace cuefuse
