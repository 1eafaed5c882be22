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

#include "cuefuse/visual_cues.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cuefuse/error.hpp"

namespace cuefuse {

DisplacementSeries nose_displacement(const std::vector<PoseFrame>& poses) {
    if (poses.size() < 2)
        throw Error(Errc::TooFewFrames, std::to_string(poses.size()) + " pose frames, need 2");
    DisplacementSeries s;
    s.values.reserve(poses.size() - 1);
    for (std::size_t i = 1; i < poses.size(); ++i) {
        s.values.push_back(std::hypot(poses[i].nose_x - poses[i - 1].nose_x, poses[i].nose_y - poses[i - 1].nose_y));
        s.frame_times.push_back(poses[i].time);
        s.prev_times.push_back(poses[i - 1].time);
    }
    return s;
}

std::vector<double> dynamic_threshold(const DisplacementSeries& series, std::size_t window, double k) {
    if (window < 2) throw Error(Errc::InvalidArgument, "threshold window must be at least 2 frames");
    if (!(k > 0.0)) throw Error(Errc::InvalidArgument, "threshold multiplier must be positive");
    const auto& v = series.values;
    std::vector<double> out(v.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 1; i < v.size(); ++i) {
        const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
        const double n = static_cast<double>(i + 1 - lo);
        double mean = 0.0;
        for (std::size_t j = lo; j <= i; ++j) mean += v[j];
        mean /= n;
        double var = 0.0;
        for (std::size_t j = lo; j <= i; ++j) var += (v[j] - mean) * (v[j] - mean);
        out[i] = mean + k * std::sqrt(var / n);
    }
    return out;
}

std::vector<double> fixed_threshold(const DisplacementSeries& series, double lambda) {
    if (!(lambda > 0.0)) throw Error(Errc::InvalidArgument, "fixed threshold must be positive");
    return std::vector<double>(series.values.size(), lambda);
}

std::vector<CueEvent> detect_head_cues(const DisplacementSeries& series, const std::vector<double>& thresholds) {
    if (thresholds.size() != series.values.size())
        throw Error(Errc::LengthMismatch, "displacement and threshold series differ in length");
    std::vector<CueEvent> cues;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double v = series.values[i];
        const double t = thresholds[i];
        if (!(v > t)) continue;
        // A zero threshold is only crossed by a strictly positive move.
        const double strength = t > 0.0 ? v / t : v;
        cues.push_back(make_cue(CueKind::HeadMove, TimeInterval(series.prev_times[i], series.frame_times[i]), strength));
    }
    return cues;
}

std::vector<CueEvent> detect_emotion_transitions(const std::vector<EmotionFrame>& emotions, double min_conf) {
    std::vector<CueEvent> cues;
    for (std::size_t i = 1; i < emotions.size(); ++i) {
        const auto& a = emotions[i - 1];
        const auto& b = emotions[i];
        if (a.label == b.label) continue;
        if (a.confidence < min_conf || b.confidence < min_conf) continue;
        cues.push_back(make_cue(CueKind::EmotionShift, TimeInterval(a.time, b.time), 0.5 * (a.confidence + b.confidence)));
    }
    return cues;
}

VisualAnalysis analyze_visual(const std::vector<PoseFrame>& poses, const std::vector<EmotionFrame>& emotions,
                              const VisualCueConfig& config) {
    VisualAnalysis a;
    if (poses.size() >= 2) {
        a.displacement = nose_displacement(poses);
        a.thresholds = config.mode == ThresholdMode::Dynamic
                           ? dynamic_threshold(a.displacement, config.window, config.k)
                           : fixed_threshold(a.displacement, config.fixed_lambda);
        a.cues = detect_head_cues(a.displacement, a.thresholds);
    }
    auto shifts = detect_emotion_transitions(emotions, config.min_conf);
    a.cues.insert(a.cues.end(), shifts.begin(), shifts.end());
    std::stable_sort(a.cues.begin(), a.cues.end(), [](const CueEvent& x, const CueEvent& y) {
        return x.time.start() < y.time.start();
    });
    return a;
}

std::string displacement_csv(const DisplacementSeries& series, const std::vector<double>& thresholds) {
    std::string out = "frame_time,displacement,threshold,flagged\n";
    char line[128];
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double t = i < thresholds.size() ? thresholds[i] : std::numeric_limits<double>::infinity();
        std::snprintf(line, sizeof line, "%.4f,%.6f,%.6f,%d\n", series.frame_times[i], series.values[i], t,
                      series.values[i] > t ? 1 : 0);
        out += line;
    }
    return out;
}

} // namespace cuefuse
