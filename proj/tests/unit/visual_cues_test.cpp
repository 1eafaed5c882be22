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
#include <limits>
#include <random>

#include "cuefuse/error.hpp"
#include "cuefuse/visual_cues.hpp"
#include "synthetic.hpp"

namespace cuefuse {
namespace {

std::vector<PoseFrame> poses_from_x(const std::vector<double>& xs) {
    std::vector<PoseFrame> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        PoseFrame p;
        p.frame_index = static_cast<std::int64_t>(i) * 25;
        p.time = static_cast<double>(i);
        p.nose_x = xs[i];
        p.nose_y = 0.5;
        out.push_back(p);
    }
    return out;
}

DisplacementSeries series_of(const std::vector<double>& values) {
    DisplacementSeries s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        s.values.push_back(values[i]);
        s.prev_times.push_back(static_cast<double>(i));
        s.frame_times.push_back(static_cast<double>(i + 1));
    }
    return s;
}

TEST(Displacement, EuclideanBetweenNeighbours) {
    auto poses = poses_from_x({0.5, 0.53, 0.53});
    poses[2].nose_y = 0.54;
    const auto d = nose_displacement(poses);
    ASSERT_EQ(d.values.size(), 2u);
    EXPECT_NEAR(d.values[0], 0.03, 1e-12);
    EXPECT_NEAR(d.values[1], 0.04, 1e-12);
    EXPECT_EQ(d.prev_times[1], 1.0);
    EXPECT_EQ(d.frame_times[1], 2.0);
    EXPECT_THROW(nose_displacement(poses_from_x({0.5})), Error);
}

TEST(DynamicThreshold, MatchesDirectFormula) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 0.05);
    std::vector<double> v(40);
    for (auto& x : v) x = u(rng);
    const auto thr = dynamic_threshold(series_of(v), 9, 1.5);
    EXPECT_TRUE(std::isinf(thr[0]));
    for (std::size_t i = 1; i < v.size(); ++i) {
        const std::size_t lo = i >= 8 ? i - 8 : 0;
        std::vector<double> w(v.begin() + static_cast<std::ptrdiff_t>(lo), v.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        double m = 0;
        for (double x : w) m += x;
        m /= static_cast<double>(w.size());
        double var = 0;
        for (double x : w) var += (x - m) * (x - m);
        EXPECT_NEAR(thr[i], m + 1.5 * std::sqrt(var / static_cast<double>(w.size())), 1e-15) << i;
    }
}

TEST(DynamicThreshold, SpikeNeedsFourValuesOfHistory) {
    // One spike among zeros clears mean + 1.5 std only once the window holds at least four values.
    EXPECT_TRUE(detect_head_cues(series_of({0, 0, 0.1}), dynamic_threshold(series_of({0, 0, 0.1}), 9, 1.5)).empty());
    const auto s = series_of({0, 0, 0, 0.1});
    const auto cues = detect_head_cues(s, dynamic_threshold(s, 9, 1.5));
    ASSERT_EQ(cues.size(), 1u);
    EXPECT_EQ(cues[0].time, TimeInterval(3.0, 4.0));
    EXPECT_EQ(cues[0].modality, Modality::Visual);
}

TEST(DynamicThreshold, RejectsBadParameters) {
    EXPECT_THROW(dynamic_threshold(series_of({0, 1}), 1, 1.5), Error);
    EXPECT_THROW(dynamic_threshold(series_of({0, 1}), 9, 0.0), Error);
    EXPECT_THROW(fixed_threshold(series_of({0, 1}), 0.0), Error);
    EXPECT_THROW(detect_head_cues(series_of({0, 1}), {1.0}), Error);
}

TEST(FixedThreshold, StrengthIsRatio) {
    const auto s = series_of({0.01, 0.1, 0.02});
    const auto cues = detect_head_cues(s, fixed_threshold(s, 0.05));
    ASSERT_EQ(cues.size(), 1u);
    EXPECT_DOUBLE_EQ(cues[0].strength, 2.0);
}

TEST(Emotion, TransitionsFromFixture) {
    const auto emo = load_emotions(testing::fixture("emotion_15.json"), make_video_meta(25.0, 15.0, 375));
    const auto cues = detect_emotion_transitions(emo, 0.5);
    ASSERT_EQ(cues.size(), 2u);
    EXPECT_EQ(cues[0].time, TimeInterval(4.0, 5.0));
    EXPECT_EQ(cues[1].time, TimeInterval(9.0, 10.0));
    EXPECT_DOUBLE_EQ(cues[0].strength, 0.8);
    EXPECT_TRUE(detect_emotion_transitions(emo, 0.9).empty());
}

TEST(Displacement, ThreeFourFiveAndTranslationInvariance) {
    auto poses = poses_from_x({0.0, 0.3});
    poses[0].nose_y = 0.0;
    poses[1].nose_y = 0.4;
    EXPECT_NEAR(nose_displacement(poses).values[0], 0.5, 1e-12);

    auto moved = poses_from_x({0.1, 0.2, 0.15, 0.4});
    auto shifted = moved;
    for (auto& p : shifted) {
        p.nose_x += 0.25;
        p.nose_y -= 0.125;
    }
    const auto a = nose_displacement(moved).values;
    const auto b = nose_displacement(shifted).values;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(DynamicThreshold, ConstantSeriesAndLongWindow) {
    const auto thr = dynamic_threshold(series_of({0.02, 0.02, 0.02, 0.02}), 9, 1.5);
    for (std::size_t i = 1; i < thr.size(); ++i) EXPECT_NEAR(thr[i], 0.02, 1e-15);
    const auto s = series_of({0.02, 0.02, 0.02, 0.02});
    EXPECT_TRUE(detect_head_cues(s, thr).empty());
    EXPECT_TRUE(detect_head_cues(series_of({}), {}).empty());
    // Window longer than the series uses the whole prefix.
    EXPECT_EQ(dynamic_threshold(series_of({0.1, 0.3, 0.2}), 50, 1.5), dynamic_threshold(series_of({0.1, 0.3, 0.2}), 3, 1.5));
}

TEST(DynamicThreshold, ImpulseFlagged) {
    std::vector<double> v(20, 0.01);
    v[12] = 0.1;
    const auto s = series_of(v);
    const auto cues = detect_head_cues(s, dynamic_threshold(s, 9, 1.5));
    ASSERT_EQ(cues.size(), 1u);
    EXPECT_EQ(cues[0].time, TimeInterval(12.0, 13.0));
}

TEST(DynamicThreshold, CueCountMonotoneInK) {
    std::mt19937_64 rng(21);
    std::exponential_distribution<double> e(50.0);
    std::vector<double> v(300);
    for (auto& x : v) x = e(rng);
    const auto s = series_of(v);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double k = 0.5; k <= 6.0; k += 0.5) {
        const auto n = detect_head_cues(s, dynamic_threshold(s, 9, k)).size();
        EXPECT_LE(n, prev);
        prev = n;
    }
    EXPECT_TRUE(detect_head_cues(s, dynamic_threshold(s, 9, 1e9)).empty());
}

EmotionFrame emo(double t, Emotion label, double conf) {
    EmotionFrame f;
    f.time = t;
    f.frame_index = static_cast<std::int64_t>(t * 25);
    f.label = label;
    f.confidence = conf;
    return f;
}

TEST(Emotion, SmallStreams) {
    const auto one = detect_emotion_transitions(
        {emo(0, Emotion::Happy, 0.9), emo(1, Emotion::Happy, 0.9), emo(2, Emotion::Sad, 0.7)}, 0.5);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].time, TimeInterval(1.0, 2.0));
    EXPECT_DOUBLE_EQ(one[0].strength, 0.8);
    EXPECT_TRUE(detect_emotion_transitions({emo(0, Emotion::Neutral, 1), emo(1, Emotion::Neutral, 1)}, 0.5).empty());
    EXPECT_TRUE(detect_emotion_transitions({emo(0, Emotion::Happy, 0.9), emo(1, Emotion::Sad, 0.3)}, 0.5).empty());
}

TEST(AnalyzeVisual, MergesAndOrdersCues) {
    std::vector<double> xs(15, 0.5);
    for (std::size_t i = 8; i < xs.size(); ++i) xs[i] = 0.58;
    const auto poses = poses_from_x(xs);
    const auto emo = load_emotions(testing::fixture("emotion_15.json"), make_video_meta(25.0, 15.0, 375));
    const auto a = analyze_visual(poses, emo);
    ASSERT_EQ(a.cues.size(), 3u);
    EXPECT_EQ(a.cues[0].kind, CueKind::EmotionShift);
    EXPECT_EQ(a.cues[1].kind, CueKind::HeadMove);
    EXPECT_EQ(a.cues[1].time, TimeInterval(7.0, 8.0));
    for (std::size_t i = 1; i < a.cues.size(); ++i) EXPECT_LE(a.cues[i - 1].time.start(), a.cues[i].time.start());

    // Emotion alone still yields cues.
    EXPECT_EQ(analyze_visual({}, emo).cues.size(), 2u);

    const auto csv = displacement_csv(a.displacement, a.thresholds);
    EXPECT_EQ(csv.rfind("frame_time,displacement,threshold,flagged\n", 0), 0u);
}

} // namespace
} // namespace cuefuse
