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

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "cuefuse/ingest.hpp"
#include "cuefuse/timeline.hpp"

namespace cuefuse {

enum class FeatureKind { Pitch, Loudness, Tonality };

CueKind cue_kind_of(FeatureKind kind) noexcept;
const char* to_string(FeatureKind kind) noexcept;

/// One value per analysis frame; NaN marks an undefined frame (unvoiced pitch).
struct FeatureSeries {
    FeatureKind kind = FeatureKind::Loudness;
    std::vector<double> values;
    std::vector<double> frame_times; // window centers
    double hop = 0.01;
};

struct ZScoreSeries {
    FeatureKind kind = FeatureKind::Loudness;
    std::vector<double> z; // NaN where the raw value was undefined
    std::vector<double> frame_times;
    double hop = 0.01;
    double mu = 0.0;
    double sigma = 0.0;
    bool degenerate_flat = false; // sigma below 1e-12; every z forced to 0

    /// z*sigma + mu
    std::vector<double> invert() const;
};

/// Short-time frames stored row-major in one buffer.
class AnalysisFrames {
public:
    AnalysisFrames(std::size_t frame_length, double hop, int sample_rate)
        : frame_length_(frame_length), hop_(hop), sample_rate_(sample_rate) {}

    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }
    std::size_t frame_length() const noexcept { return frame_length_; }
    double hop() const noexcept { return hop_; }
    int sample_rate() const noexcept { return sample_rate_; }
    const std::vector<double>& times() const noexcept { return times_; }

    const double* frame(std::size_t i) const noexcept { return data_.data() + i * frame_length_; }
    void push(const double* samples, std::size_t count, double center_time);

private:
    std::size_t frame_length_;
    double hop_;
    int sample_rate_;
    std::vector<double> data_;
    std::vector<double> times_;
};

inline constexpr double kDefaultWindow = 0.025;
inline constexpr double kDefaultHop = 0.010;

/// Frames start every hop while the start lies inside the signal; frames that
/// run past the end are zero-padded. Requires at least one full window of audio.
AnalysisFrames frame_signal(const AudioBuffer& audio, double win = kDefaultWindow,
                            double hop = kDefaultHop);

FeatureSeries rms_energy(const AnalysisFrames& frames);

struct PitchOptions {
    double f_min = 60.0;
    double f_max = 400.0;
    double voicing_threshold = 0.45;
    double silence_rms = 1e-3;
};

/// Normalized autocorrelation over lags [sr/f_max, sr/f_min] with parabolic
/// peak refinement. Unvoiced or silent frames come back NaN.
FeatureSeries estimate_pitch(const AnalysisFrames& frames, int sample_rate, const PitchOptions& opts = {});

/// Interior NaN runs are bridged linearly; leading and trailing runs copy the nearest value.
FeatureSeries interpolate_contour(const FeatureSeries& series);

/// 20*log10(peak magnitude in 0-2 kHz / peak magnitude in 2-5 kHz) of the
/// Hann-windowed frame spectrum.
FeatureSeries hammarberg_index(const AnalysisFrames& frames, int sample_rate);

ZScoreSeries zscore(const FeatureSeries& series);

/// Indexed by FeatureKind; nullopt falls back to the shared threshold.
struct AudioThresholds {
    double shared = 1.5;
    std::array<std::optional<double>, 3> per_kind{};

    double for_kind(FeatureKind kind) const noexcept;
};

/// Maximal runs of frames with z > threshold become one event per run. The
/// event spans the frames' hop cells; strength is the run's peak z.
std::vector<CueEvent> detect_audio_cues(const std::vector<ZScoreSeries>& series,
                                        const AudioThresholds& thresholds);
std::vector<CueEvent> detect_audio_cues(const std::vector<ZScoreSeries>& series, double z_threshold);

struct AudioAnalysis {
    FeatureSeries pitch_raw;
    FeatureSeries pitch; // interpolated
    FeatureSeries loudness;
    FeatureSeries tonality;
    std::vector<ZScoreSeries> z; // pitch, loudness, tonality
    std::vector<CueEvent> cues;
};

struct AudioCueConfig {
    double window = kDefaultWindow;
    double hop = kDefaultHop;
    PitchOptions pitch;
    AudioThresholds thresholds;
};

/// Full audio path from samples: features, normalization, events.
AudioAnalysis analyze_audio(const AudioBuffer& audio, const AudioCueConfig& config = {});
/// Same path when features were computed by an external tool.
AudioAnalysis analyze_features(const PrecomputedFeatures& features, const AudioCueConfig& config = {});

/// frame_time,raw,z rows for one series.
std::string series_csv(const FeatureSeries& raw, const ZScoreSeries& z);

} // namespace cuefuse
