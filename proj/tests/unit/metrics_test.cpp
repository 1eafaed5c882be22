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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "cuefuse/error.hpp"
#include "cuefuse/metrics.hpp"
#include "cuefuse/text.hpp"
#include "synthetic.hpp"

namespace cuefuse {
namespace {

using nlohmann::json;
using testing::fixture;

Tokens T(const std::string& s) { return tokenize(s); }

template <typename F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no cuefuse::Error thrown";
    return Errc::InvalidArgument;
}

json read_json(const std::string& name) {
    std::ifstream in(fixture(name));
    return json::parse(in);
}

// Pair counting straight from the tau-b definition.
double brute_tau(const std::vector<double>& a, const std::vector<double>& b) {
    long c = 0, d = 0, ta = 0, tb = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double x = a[i] - a[j], y = b[i] - b[j];
            if (x == 0 && y == 0) continue;
            if (x == 0) {
                ++ta;
            } else if (y == 0) {
                ++tb;
            } else if ((x > 0) == (y > 0)) {
                ++c;
            } else {
                ++d;
            }
        }
    return static_cast<double>(c - d) / std::sqrt(static_cast<double>(c + d + ta) * static_cast<double>(c + d + tb));
}

// Longest common subsequence by enumerating subsequences of the shorter list.
std::size_t brute_lcs(const Tokens& a, const Tokens& b) {
    const Tokens& s = a.size() <= b.size() ? a : b;
    const Tokens& l = a.size() <= b.size() ? b : a;
    std::size_t best = 0;
    for (unsigned mask = 0; mask < (1u << s.size()); ++mask) {
        const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
        if (bits <= best) continue;
        std::size_t j = 0;
        bool ok = true;
        for (std::size_t i = 0; i < s.size() && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            while (j < l.size() && l[j] != s[i]) ++j;
            if (j == l.size()) ok = false;
            else ++j;
        }
        if (ok) best = bits;
    }
    return best;
}

TEST(Rouge, Examples) {
    const auto same = rouge_n(T("a b c d"), T("a b c d"), 2);
    EXPECT_EQ(same, (PRF{1, 1, 1}));
    EXPECT_EQ(rouge_n(T("a b"), T("c d"), 1), (PRF{0, 0, 0}));
    const auto p = rouge_n(T("the cat"), T("the cat sat"), 1);
    EXPECT_DOUBLE_EQ(p.precision, 1.0);
    EXPECT_DOUBLE_EQ(p.recall, 2.0 / 3.0);
    EXPECT_NEAR(p.f1, 0.8, 1e-12);
    EXPECT_EQ(rouge_n(T("a"), T("a b"), 2), (PRF{0, 0, 0})); // no candidate bigrams
    // clipping: repeated candidate tokens match at most the reference count
    EXPECT_DOUBLE_EQ(rouge_n(T("the the the"), T("the cat"), 1).precision, 1.0 / 3.0);
}

TEST(Rouge, PrecisionRecallSwapUnderArgumentSwap) {
    const auto ab = rouge_n(T("a b c a"), T("a c d"), 1);
    const auto ba = rouge_n(T("a c d"), T("a b c a"), 1);
    EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
    EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
}

TEST(RougeL, Examples) {
    EXPECT_DOUBLE_EQ(rouge_l(T("a b c"), T("a b c")).f1, 1.0);
    const auto r = rouge_l(T("a b c"), T("a x c"));
    EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.recall, 2.0 / 3.0);
    EXPECT_NEAR(r.f1, 2.0 / 3.0, 1e-12);
    EXPECT_EQ(rouge_l({}, T("a")).f1, 0.0);
}

TEST(RougeL, LcsMatchesEnumeration) {
    std::mt19937_64 rng(31);
    const Tokens vocab{"a", "b", "c", "d"};
    for (int trial = 0; trial < 300; ++trial) {
        Tokens x(rng() % 13), y(rng() % 13);
        for (auto& t : x) t = vocab[rng() % vocab.size()];
        for (auto& t : y) t = vocab[rng() % vocab.size()];
        ASSERT_EQ(lcs_length(x, y), brute_lcs(x, y));
    }
}

TEST(Bleu, Examples) {
    EXPECT_NEAR(bleu(T("the cat sat on the mat"), T("the cat sat on the mat")), 1.0, 1e-12);
    EXPECT_EQ(bleu(T("dog runs"), T("the cat sat")), 0.0);
    EXPECT_EQ(bleu({}, T("a")), 0.0);
    // First half of an 8-token reference: all precisions 1, BP = e^-1.
    EXPECT_NEAR(bleu(T("a b c d"), T("a b c d e f g h")), std::exp(-1.0), 1e-12);
    EXPECT_STREQ(kBleuSmoothing, "add-one on zero-match orders n>=2");
}

TEST(Bleu, MatchesIndependentFixtures) {
    const auto doc = read_json("bleu_fixtures.json");
    ASSERT_EQ(doc["cases"].size(), 20u);
    for (const auto& c : doc["cases"]) {
        const auto cand = c["candidate"].get<Tokens>();
        const auto ref = c["reference"].get<Tokens>();
        EXPECT_NEAR(bleu(cand, ref), c["bleu"].get<double>(), 1e-9);
    }
}

TokenEmbeddings emb(std::vector<std::vector<double>> v) {
    TokenEmbeddings e;
    e.dim = v.empty() ? 0 : v[0].size();
    for (std::size_t i = 0; i < v.size(); ++i) e.tokens.push_back("t" + std::to_string(i));
    e.vectors = std::move(v);
    return e;
}

TEST(BertScore, Examples) {
    const auto a = emb({{1, 0}, {0.6, 0.8}});
    EXPECT_NEAR(bertscore(a, a).f1, 1.0, 1e-12);
    EXPECT_EQ(bertscore(emb({{1, 0}}), emb({{0, 1}})).f1, 0.0);
    // cand rows {[1,0],[0,1]} vs ref {[0.6,0.8]}: cosines 0.6 and 0.8
    const auto s = bertscore(emb({{1, 0}, {0, 1}}), emb({{0.6, 0.8}}));
    EXPECT_NEAR(s.precision, 0.7, 1e-12);
    EXPECT_NEAR(s.recall, 0.8, 1e-12);
    EXPECT_EQ(code_of([] { bertscore(emb({{1, 0}}), emb({{1, 0, 0}})); }), Errc::DimensionMismatch);
    EXPECT_EQ(code_of([] { bertscore(emb({}), emb({{1, 0}})); }), Errc::EmptyInput);
}

TEST(LengthRatioAndJaccard, Examples) {
    EXPECT_EQ(length_ratio(32, 32), 1.0);
    EXPECT_EQ(length_ratio(10, 32), 0.3125);
    EXPECT_EQ(length_ratio(0, 32), 0.0);
    EXPECT_EQ(code_of([] { length_ratio(1, 0); }), Errc::EmptySource);
    EXPECT_EQ(jaccard(T("a b c"), T("c b a")), 1.0);
    EXPECT_EQ(jaccard(T("a"), T("b")), 0.0);
    EXPECT_EQ(jaccard(T("a b c"), T("b c d")), 0.5);
    EXPECT_EQ(jaccard({}, {}), 1.0);
    EXPECT_EQ(jaccard(T("a b"), T("b c d")), jaccard(T("b c d"), T("a b")));
}

TEST(Temporal, IoUAndF1Examples) {
    EXPECT_NEAR(iou(TimeInterval(0, 10), TimeInterval(5, 15)), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(iou(TimeInterval(0, 10), TimeInterval(1, 10)), 0.9, 1e-12);
    EXPECT_EQ(iou(TimeInterval(2, 2), TimeInterval(2, 2)), 1.0);
    EXPECT_EQ(iou(TimeInterval(0, 1), TimeInterval(2, 3)), 0.0);

    const std::vector<TimeInterval> segs{TimeInterval(0, 2), TimeInterval(5, 8)};
    EXPECT_EQ(temporal_f1(segs, segs).f1, 1.0);
    EXPECT_EQ(temporal_f1({TimeInterval(0, 10)}, {TimeInterval(5, 15)}).f1, 0.0);
    EXPECT_EQ(temporal_f1({TimeInterval(0, 10)}, {TimeInterval(1, 10)}).f1, 1.0);
    EXPECT_EQ(temporal_f1({}, segs), (PRF{0, 0, 0}));
}

TEST(Temporal, GreedyMatchingIsOneToOne) {
    // Both candidates overlap the one reference; the higher IoU pair wins first.
    const auto m = match_segments({TimeInterval(0, 10), TimeInterval(0, 9.6)}, {TimeInterval(0, 9.5)});
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].candidate, 1u);
    EXPECT_EQ(m[0].reference, 0u);
}

TEST(Temporal, F1InvariantToOrdering) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<TimeInterval> c, r;
        for (int i = 0; i < 5; ++i) {
            const double s = u(rng);
            c.emplace_back(s, s + 1 + u(rng) / 10);
            const double t = u(rng);
            r.emplace_back(t, t + 1 + u(rng) / 10);
        }
        const auto base = temporal_f1(c, r);
        std::shuffle(c.begin(), c.end(), rng);
        std::shuffle(r.begin(), r.end(), rng);
        EXPECT_NEAR(temporal_f1(c, r).f1, base.f1, 1e-12);
    }
}

TEST(Frames, Examples) {
    const auto p = frame_prf({TimeInterval(0, 5)}, {TimeInterval(0, 10)}, 20.0);
    EXPECT_EQ(p.precision, 1.0);
    EXPECT_EQ(p.recall, 0.5);
    EXPECT_EQ(frame_prf({}, {TimeInterval(0, 10)}, 20.0), (PRF{0, 0, 0}));
    const std::vector<TimeInterval> c{TimeInterval(1.5, 3.2), TimeInterval(7, 7)};
    EXPECT_EQ(frame_prf(c, c, 10.0), (PRF{1, 1, 1}));
    EXPECT_THROW(frame_prf(c, c, 10.0, 0.0), Error);
}

TEST(Kendall, Examples) {
    EXPECT_EQ(kendall_tau({1, 2, 3}, {1, 2, 3}), 1.0);
    EXPECT_EQ(kendall_tau({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
    EXPECT_NEAR(kendall_tau({1, 2, 3}, {1, 3, 2}), 1.0 / 3.0, 1e-12);
    EXPECT_EQ(code_of([] { kendall_tau({1, 2}, {1}); }), Errc::LengthMismatch);
    EXPECT_EQ(code_of([] { kendall_tau({1}, {1}); }), Errc::TooShort);
    EXPECT_EQ(code_of([] { kendall_tau({1, 1}, {1, 2}); }), Errc::ConstantInput);
}

TEST(Kendall, MatchesPairCountingOnAllSmallInputs) {
    // Every pair of sequences over {0,1,2} of length up to 6, ties included.
    for (std::size_t n = 2; n <= 6; ++n) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 3;
        std::vector<std::vector<double>> seqs;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<double> v(n);
            std::size_t c = code;
            for (auto& x : v) {
                x = static_cast<double>(c % 3);
                c /= 3;
            }
            seqs.push_back(v);
        }
        std::mt19937_64 rng(n);
        for (int trial = 0; trial < 2000; ++trial) {
            const auto& a = seqs[rng() % seqs.size()];
            const auto& b = seqs[rng() % seqs.size()];
            const bool flat = std::adjacent_find(a.begin(), a.end(), std::not_equal_to<>()) == a.end() ||
                              std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) == b.end();
            if (flat) continue;
            ASSERT_EQ(kendall_tau(a, b), brute_tau(a, b));
        }
    }
}

TEST(Spearman, Examples) {
    EXPECT_NEAR(spearman_rho({1, 2, 3}, {10, 20, 30}), 1.0, 1e-12);
    EXPECT_NEAR(spearman_rho({1, 2, 3}, {3, 2, 1}), -1.0, 1e-12);
    EXPECT_NEAR(spearman_rho({1, 2, 3, 4}, {1, 3, 2, 4}), 0.8, 1e-12);
    EXPECT_EQ(code_of([] { spearman_rho({1, 1}, {1, 2}); }), Errc::ConstantInput);
    EXPECT_EQ(code_of([] { spearman_rho({1, 2}, {1, 2, 3}); }), Errc::LengthMismatch);
    EXPECT_EQ(average_ranks({10, 20, 20, 5}), (std::vector<double>{2, 3.5, 3.5, 1}));
}

struct EvalFixture {
    json doc;
    Transcript transcript;
    TokenEmbeddings embeddings;
    PgtSummary pgt;
    CandidateSummary candidate;
    EvaluationInputs inputs;
};

EvalFixture load_eval_fixture() {
    EvalFixture f;
    f.doc = read_json("eval_fixture.json");
    f.transcript = parse_transcript(f.doc["transcript"].dump());
    f.embeddings.dim = f.doc["embeddings"]["dim"].get<std::size_t>();
    for (const auto& item : f.doc["embeddings"]["items"]) {
        f.embeddings.tokens.push_back(item["token"].get<std::string>());
        f.embeddings.vectors.push_back(item["vec"].get<std::vector<double>>());
    }
    f.pgt = parse_pgt(f.doc["pgt"].dump());
    f.candidate.video_id = "evalfix";
    for (const auto& c : f.doc["candidate"]) {
        f.candidate.intervals.emplace_back(c["start"].get<double>(), c["end"].get<double>());
        f.candidate.sentences.push_back(c["text"].get<std::string>());
    }
    f.inputs.meta = make_video_meta(f.doc["fps"].get<double>(), f.doc["duration"].get<double>());
    return f;
}

TEST(EvaluatePair, MatchesIndependentOracle) {
    auto f = load_eval_fixture();
    f.inputs.transcript = &f.transcript;
    f.inputs.transcript_embeddings = &f.embeddings;
    const auto r = evaluate_pair(f.candidate, f.pgt, f.inputs);
    const auto& e = f.doc["expected"];
    EXPECT_NEAR(r.text.rouge1, e["rouge1"].get<double>(), 1e-12);
    EXPECT_NEAR(r.text.rouge2, e["rouge2"].get<double>(), 1e-12);
    EXPECT_NEAR(r.text.rougeL, e["rougeL"].get<double>(), 1e-12);
    EXPECT_NEAR(r.text.bleu, e["bleu"].get<double>(), 1e-12);
    ASSERT_TRUE(r.text.bertscore_f1.has_value());
    EXPECT_NEAR(*r.text.bertscore_f1, e["bertscore"].get<double>(), 1e-9);
    EXPECT_NEAR(r.text.length_ratio, e["length_ratio"].get<double>(), 1e-12);
    EXPECT_NEAR(r.temporal.f1, e["f1"].get<double>(), 1e-12);
    EXPECT_NEAR(r.temporal.precision, e["precision"].get<double>(), 1e-12);
    EXPECT_NEAR(r.temporal.recall, e["recall"].get<double>(), 1e-12);
    EXPECT_NEAR(r.temporal.kendall_tau, e["kendall_tau"].get<double>(), 1e-12);
    EXPECT_NEAR(r.temporal.spearman_rho, e["spearman_rho"].get<double>(), 1e-12);
    EXPECT_EQ(r.temporal.matched, 2u);
}

TEST(EvaluatePair, SelfComparisonAndEmptyCandidate) {
    auto f = load_eval_fixture();
    f.inputs.transcript = &f.transcript;
    CandidateSummary self;
    for (const auto& e : f.pgt.entries) {
        self.intervals.push_back(e.interval);
        self.sentences.push_back(e.sentence);
    }
    const auto r = evaluate_pair(self, f.pgt, f.inputs);
    EXPECT_NEAR(r.text.rouge1, 1.0, 1e-12);
    EXPECT_NEAR(r.text.rougeL, 1.0, 1e-12);
    EXPECT_NEAR(r.text.bleu, 1.0, 1e-12);
    EXPECT_EQ(r.temporal.f1, 1.0);
    EXPECT_EQ(r.temporal.precision, 1.0);
    EXPECT_EQ(r.temporal.kendall_tau, 1.0);
    EXPECT_FALSE(r.text.bertscore_f1.has_value()); // no embeddings given

    const auto z = evaluate_pair(CandidateSummary{}, f.pgt, f.inputs);
    EXPECT_EQ(z.text.rouge1, 0.0);
    EXPECT_EQ(z.text.bleu, 0.0);
    EXPECT_EQ(z.text.length_ratio, 0.0);
    EXPECT_EQ(z.temporal.f1, 0.0);
    EXPECT_EQ(z.temporal.recall, 0.0);

    f.inputs.transcript = nullptr;
    EXPECT_EQ(code_of([&] { evaluate_pair(self, f.pgt, f.inputs); }), Errc::InvalidArgument);
}

TEST(MeanReport, AveragesColumns) {
    MetricsReport a, b;
    a.method = "m";
    a.text.rouge1 = 0.2;
    a.text.bertscore_f1 = 0.9;
    a.temporal.f1 = 1.0;
    b.text.rouge1 = 0.4;
    b.temporal.f1 = 0.0;
    const auto m = mean_report({a, b});
    EXPECT_EQ(m.video_id, "mean");
    EXPECT_EQ(m.method, "m");
    EXPECT_NEAR(m.text.rouge1, 0.3, 1e-12);
    EXPECT_EQ(m.text.bertscore_f1, 0.9);
    EXPECT_EQ(m.temporal.f1, 0.5);
}

} // namespace
} // namespace cuefuse
