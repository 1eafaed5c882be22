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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cuefuse {

/// Closed time interval in seconds. Construction validates; a live
/// TimeInterval is always finite, non-negative and ordered.
class TimeInterval {
public:
    TimeInterval() = default;
    TimeInterval(double start, double end);

    double start() const noexcept { return start_; }
    double end() const noexcept { return end_; }
    double length() const noexcept { return end_ - start_; }

    /// Widened by `pad` on both sides; the start is clamped at zero.
    TimeInterval expanded(double pad) const;
    bool contains(const TimeInterval& other) const noexcept {
        return start_ <= other.start_ && other.end_ <= end_;
    }

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;

private:
    double start_ = 0.0;
    double end_ = 0.0;
};

struct TimedWord {
    std::string text;                // as emitted by the aligner
    std::vector<std::string> tokens; // normalized matching keys (may be empty for pure punctuation)
    TimeInterval interval;

    friend bool operator==(const TimedWord&, const TimedWord&) = default;
};

TimedWord make_word(std::string text, TimeInterval interval);

struct TimedSentence {
    std::vector<TimedWord> words;
    TimeInterval interval;
    std::size_t index = 0;

    std::string text() const;
    std::vector<std::string> tokens() const;

    friend bool operator==(const TimedSentence&, const TimedSentence&) = default;
};

/// Builds a sentence whose interval spans its words. Throws TimingError when
/// the words are empty or go backwards in time.
TimedSentence make_sentence(std::vector<TimedWord> words, std::size_t index);

struct Transcript {
    std::string video_id;
    std::vector<TimedSentence> sentences;

    std::size_t token_count() const;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Checks the ordering invariants; throws on violation.
void validate(const Transcript& transcript);

enum class Modality { Audio, Visual, Textual };
enum class CueKind { Pitch, Loudness, Tonality, HeadMove, EmotionShift, TfIdf, Sentiment, Entity };

Modality modality_of(CueKind kind) noexcept;
const char* to_string(Modality m) noexcept;
const char* to_string(CueKind k) noexcept;
Modality parse_modality(const std::string& name);
CueKind parse_cue_kind(const std::string& name);

struct CueEvent {
    Modality modality = Modality::Textual;
    CueKind kind = CueKind::TfIdf;
    TimeInterval time;
    double strength = 0.0;

    friend bool operator==(const CueEvent&, const CueEvent&) = default;
};

/// Checked factory: modality is derived from the kind, strength must be finite and >= 0.
CueEvent make_cue(CueKind kind, TimeInterval time, double strength);

struct FrameRange {
    std::int64_t first = 0;
    std::int64_t last = 0;

    friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

struct VideoMeta {
    double fps = 24.0;
    double duration = 0.0;
    std::int64_t frame_count = 0;

    friend bool operator==(const VideoMeta&, const VideoMeta&) = default;
};

/// frame_count is derived from fps and duration when negative.
VideoMeta make_video_meta(double fps, double duration, std::int64_t frame_count = -1);

struct Segment {
    TimeInterval interval;
    FrameRange frames;
    std::vector<std::size_t> sentence_indices;
    std::string text;

    friend bool operator==(const Segment&, const Segment&) = default;
};

inline constexpr double kDefaultGapTolerance = 0.25;

double overlap(const TimeInterval& a, const TimeInterval& b) noexcept;

/// floor(start*fps) .. min(ceil(end*fps), frame_count-1).
FrameRange to_frame_range(const TimeInterval& interval, const VideoMeta& meta);

/// Merges neighbours whose gap is at most `gap_tolerance`. Input must be sorted by start.
std::vector<Segment> merge_adjacent(const std::vector<Segment>& segments,
                                    double gap_tolerance = kDefaultGapTolerance);

} // namespace cuefuse
