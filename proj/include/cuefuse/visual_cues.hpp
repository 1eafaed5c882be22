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

#include <string>
#include <vector>

#include "cuefuse/ingest.hpp"
#include "cuefuse/timeline.hpp"

namespace cuefuse {

/// Frame-to-frame nose displacement in normalized image units. Entry i is the
/// move from pose frame i to frame i+1 and is stamped with frame i+1's time.
struct DisplacementSeries {
    std::vector<double> values;
    std::vector<double> frame_times;
    std::vector<double> prev_times;
};

DisplacementSeries nose_displacement(const std::vector<PoseFrame>& poses);

enum class ThresholdMode { Dynamic, Fixed };

struct VisualCueConfig {
    ThresholdMode mode = ThresholdMode::Dynamic;
    std::size_t window = 9;   // trailing window, frames
    double k = 1.5;           // std-dev multiplier
    double fixed_lambda = 0.05; // used in Fixed mode
    double min_conf = 0.5;    // emotion transition gate
};

/// mean + k*std (population) over the trailing window ending at each index,
/// current value included. Prefixes shorter than the window use what exists;
/// index 0 is +inf.
std::vector<double> dynamic_threshold(const DisplacementSeries& series, std::size_t window, double k);
std::vector<double> fixed_threshold(const DisplacementSeries& series, double lambda);

std::vector<CueEvent> detect_head_cues(const DisplacementSeries& series, const std::vector<double>& thresholds);

std::vector<CueEvent> detect_emotion_transitions(const std::vector<EmotionFrame>& emotions, double min_conf);

struct VisualAnalysis {
    DisplacementSeries displacement;
    std::vector<double> thresholds;
    std::vector<CueEvent> cues; // head moves then emotion shifts, time-ordered
};

VisualAnalysis analyze_visual(const std::vector<PoseFrame>& poses, const std::vector<EmotionFrame>& emotions,
                              const VisualCueConfig& config = {});

/// frame_time,displacement,threshold,flagged rows.
std::string displacement_csv(const DisplacementSeries& series, const std::vector<double>& thresholds);

} // namespace cuefuse
