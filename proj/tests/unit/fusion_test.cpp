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

#include <random>
#include <stdexcept>

#include "cuefuse/error.hpp"
#include "cuefuse/fusion.hpp"
#include "synthetic.hpp"

namespace cuefuse {
namespace {

using testing::make_transcript;

// "Launch the red rocket now" with words 0.3 s long, 0.5 s apart.
Transcript launch() {
    return make_transcript("v", {{{"Launch", {0.0, 0.3}},
                                  {"the", {0.5, 0.8}},
                                  {"red", {1.0, 1.3}},
                                  {"rocket", {1.5, 1.8}},
                                  {"now.", {2.0, 2.3}}}});
}

KeywordSet keywords_of(std::initializer_list<const char*> toks) {
    KeywordSet k;
    for (const char* t : toks) k.keywords[t] = Keyword{kFromTfIdf, 1.0};
    return k;
}

TEST(Align, ToleranceWidensWords) {
    const auto t = launch();
    const std::vector<CueEvent> cues{make_cue(CueKind::Pitch, TimeInterval(1.85, 1.9), 2.0)};
    EXPECT_EQ(align_words_to_cues(t, cues, 0.0).size(), 0u);
    const auto hits = align_words_to_cues(t, cues, 0.15);
    ASSERT_EQ(hits.size(), 2u); // rocket ends 0.05 before, "now." starts 0.1 after
    EXPECT_TRUE(hits.count(WordRef{0, 3}));
    EXPECT_TRUE(hits.count(WordRef{0, 4}));
    EXPECT_EQ(*hits.at(WordRef{0, 3}).strength[0], 2.0);
    EXPECT_THROW(align_words_to_cues(t, cues, -1.0), Error);
}

TEST(Align, ZeroLengthCueAndStrongestWins) {
    const auto t = launch();
    const std::vector<CueEvent> cues{make_cue(CueKind::EmotionShift, TimeInterval(1.8, 1.8), 0.7),
                                     make_cue(CueKind::HeadMove, TimeInterval(1.6, 1.7), 1.2),
                                     make_cue(CueKind::Loudness, TimeInterval(1.6, 1.7), 1.0),
                                     make_cue(CueKind::Pitch, TimeInterval(1.5, 1.6), 3.0)};
    const auto hits = align_words_to_cues(t, cues, 0.0);
    ASSERT_EQ(hits.size(), 1u);
    const auto& h = hits.begin()->second;
    EXPECT_EQ(*h.strength[static_cast<std::size_t>(Modality::Visual)], 1.2);
    EXPECT_EQ(*h.strength[static_cast<std::size_t>(Modality::Audio)], 3.0);
    EXPECT_EQ(h.modalities(), (std::set<Modality>{Modality::Audio, Modality::Visual}));
}

TEST(BonusWeight, Increments) {
    EXPECT_EQ(bonus_weight(1), 1.0);
    EXPECT_EQ(bonus_weight(2), 1.5);
    EXPECT_EQ(bonus_weight(3), 2.0);
}

TEST(Select, KeywordNeedsNontextualCue) {
    const auto t = launch();
    const auto kw = keywords_of({"rocket", "launch"});
    const std::vector<CueEvent> cues{make_cue(CueKind::Pitch, TimeInterval(1.5, 1.8), 1.6)};
    const auto bonus = select_bonus_words(t, align_words_to_cues(t, cues, 0.0), kw);
    ASSERT_EQ(bonus.size(), 1u);
    EXPECT_EQ(bonus[0].token, "rocket");
    EXPECT_EQ(bonus[0].modalities, (std::set<Modality>{Modality::Audio, Modality::Textual}));
    EXPECT_EQ(bonus[0].weight, 1.5);
}

TEST(Select, StopwordsNeverQualify) {
    const auto t = launch();
    const auto kw = keywords_of({"the"});
    const std::vector<CueEvent> cues{make_cue(CueKind::Pitch, TimeInterval(0.5, 0.8), 9.0),
                                     make_cue(CueKind::HeadMove, TimeInterval(0.5, 0.8), 9.0)};
    EXPECT_TRUE(select_bonus_words(t, align_words_to_cues(t, cues, 0.0), kw).empty());
}

TEST(Select, PromotionPaths) {
    const auto t = launch();
    const KeywordSet none;
    const std::vector<CueEvent> multi{make_cue(CueKind::Pitch, TimeInterval(1.0, 1.3), 1.0),
                                      make_cue(CueKind::HeadMove, TimeInterval(1.0, 1.3), 1.0)};
    const auto al = align_words_to_cues(t, multi, 0.0);
    ASSERT_EQ(select_bonus_words(t, al, none).size(), 1u);
    FusionOptions off;
    off.promote_multi_nontextual = false;
    EXPECT_TRUE(select_bonus_words(t, al, none, off).empty());

    const std::vector<CueEvent> strong{make_cue(CueKind::Loudness, TimeInterval(1.0, 1.3), 2.5)};
    const auto al2 = align_words_to_cues(t, strong, 0.0);
    ASSERT_EQ(select_bonus_words(t, al2, none).size(), 1u);
    off = FusionOptions{};
    off.promote_strong_single = false;
    EXPECT_TRUE(select_bonus_words(t, al2, none, off).empty());

    const std::vector<CueEvent> weak{make_cue(CueKind::Loudness, TimeInterval(1.0, 1.3), 2.4)};
    EXPECT_TRUE(select_bonus_words(t, align_words_to_cues(t, weak, 0.0), none).empty());
}

TEST(Select, InactiveModalitiesAreIgnored) {
    const auto t = launch();
    const auto kw = keywords_of({"rocket"});
    const std::vector<CueEvent> cues{make_cue(CueKind::HeadMove, TimeInterval(1.5, 1.8), 1.0)};
    FusionOptions audio_text;
    audio_text.active = {Modality::Audio, Modality::Textual};
    EXPECT_TRUE(select_bonus_words(t, align_words_to_cues(t, cues, 0.0), kw, audio_text).empty());
}

TEST(Select, SingleModalityUsesItsWordsDirectly) {
    const auto t = launch();
    const auto kw = keywords_of({"rocket", "launch"});
    FusionOptions text_only;
    text_only.active = {Modality::Textual};
    const auto b = select_bonus_words(t, {}, kw, text_only);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0].token, "launch"); // first occurrence order
    EXPECT_EQ(b[1].token, "rocket");

    FusionOptions audio_only;
    audio_only.active = {Modality::Audio};
    const std::vector<CueEvent> cues{make_cue(CueKind::Pitch, TimeInterval(1.0, 1.3), 1.0)};
    const auto a = select_bonus_words(t, align_words_to_cues(t, cues, 0.0), kw, audio_only);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].token, "red");

    FusionOptions empty;
    empty.active.clear();
    EXPECT_THROW(select_bonus_words(t, {}, kw, empty), Error);
}

TEST(Select, OccurrencesAndJson) {
    const auto t = make_transcript("v", {{{"Rocket", {0.0, 0.3}}}, {{"rocket", {1.0, 1.3}}, {"up", {1.4, 1.6}}}});
    const auto kw = keywords_of({"rocket"});
    const std::vector<CueEvent> cues{make_cue(CueKind::Pitch, TimeInterval(0.0, 0.3), 1.0),
                                     make_cue(CueKind::HeadMove, TimeInterval(1.0, 1.3), 1.0)};
    const auto b = select_bonus_words(t, align_words_to_cues(t, cues, 0.0), kw);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].occurrences, (std::vector<WordRef>{{0, 0}, {1, 0}}));
    EXPECT_EQ(b[0].weight, 2.0);
    const auto json = bonus_words_to_json(t, b);
    EXPECT_NE(json.find("\"rocket\""), std::string::npos);
    EXPECT_NE(json.find("\"visual\""), std::string::npos);
}

// The talk-show sentence about comics: "good" is a text keyword, "pictures"
// and "words" carry head movement, "comics" and "pictures" carry pitch.
TEST(Select, ComicsSentence) {
    const std::string text =
        "I'm doing better than I was before, but I thought that comics are good because you get the words in the "
        "pictures,";
    std::vector<testing::WordSpec> words;
    double t = 0.0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find(' ', start);
        if (end == std::string::npos) end = text.size();
        words.push_back({text.substr(start, end - start), {t, t + 0.25}});
        t += 0.3;
        start = end + 1;
    }
    const auto tr = make_transcript("comics", {words});
    const auto at = [&](const std::string& w) {
        for (const auto& tw : tr.sentences[0].words)
            if (tw.tokens.size() == 1 && tw.tokens[0] == w) return tw.interval;
        throw std::runtime_error(w);
    };
    const std::vector<CueEvent> cues{
        make_cue(CueKind::Pitch, at("comics"), 2.8),
        make_cue(CueKind::Loudness, at("good"), 1.6),
        make_cue(CueKind::HeadMove, at("words"), 3.0),
        make_cue(CueKind::Pitch, at("pictures"), 1.8),
        make_cue(CueKind::HeadMove, at("pictures"), 1.6),
    };
    const auto bonus = select_bonus_words(tr, align_words_to_cues(tr, cues, 0.0), keywords_of({"good"}));
    std::set<std::string> tokens;
    for (const auto& b : bonus) tokens.insert(b.token);
    EXPECT_EQ(tokens, (std::set<std::string>{"comics", "good", "pictures", "words"}));
}

TEST(Select, KeywordWithPitchCue) {
    const auto t = make_transcript("v", {{{"A", {0.0, 0.3}}, {"great", {0.5, 0.8}}, {"day.", {1.0, 1.3}}}});
    const std::vector<CueEvent> cues{make_cue(CueKind::Pitch, TimeInterval(0.55, 0.75), 1.7)};
    const auto b = select_bonus_words(t, align_words_to_cues(t, cues, 0.25), keywords_of({"great"}));
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].modalities, (std::set<Modality>{Modality::Audio, Modality::Textual}));
    EXPECT_EQ(b[0].weight, 1.5);
    EXPECT_TRUE(select_bonus_words(t, align_words_to_cues(t, {}, 0.25), keywords_of({"great"})).empty());
}

TEST(Select, MonotoneInCues) {
    const auto t = launch();
    const auto kw = keywords_of({"rocket", "launch", "red"});
    std::vector<CueEvent> cues;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 2.2);
    std::size_t prev = 0;
    for (int i = 0; i < 20; ++i) {
        const double s = u(rng);
        cues.push_back(make_cue(i % 2 ? CueKind::Pitch : CueKind::HeadMove, TimeInterval(s, s + 0.1), 1.0 + i % 3));
        const auto b = select_bonus_words(t, align_words_to_cues(t, cues, 0.1), kw);
        EXPECT_GE(b.size(), prev);
        prev = b.size();
        for (const auto& w : b) EXPECT_TRUE(t.sentences[0].text().find(w.token) != std::string::npos ||
                                            w.token == "launch" || w.token == "now");
    }
}

} // namespace
} // namespace cuefuse
