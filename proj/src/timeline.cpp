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

#include "cuefuse/timeline.hpp"

#include <algorithm>
#include <cmath>

#include "cuefuse/error.hpp"
#include "cuefuse/text.hpp"

namespace cuefuse {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidInterval: return "InvalidInterval";
    case Errc::IntervalOutOfVideo: return "IntervalOutOfVideo";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SchemaError: return "SchemaError";
    case Errc::TimingError: return "TimingError";
    case Errc::EmptyTranscript: return "EmptyTranscript";
    case Errc::NonMonotoneFrames: return "NonMonotoneFrames";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptHeader: return "CorruptHeader";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NaNEntry: return "NaNEntry";
    case Errc::UnorderedEntries: return "UnorderedEntries";
    case Errc::IoError: return "IoError";
    case Errc::AudioTooShort: return "AudioTooShort";
    case Errc::AllUndefined: return "AllUndefined";
    case Errc::TooFewValues: return "TooFewValues";
    case Errc::TooFewFrames: return "TooFewFrames";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptySource: return "EmptySource";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TooShort: return "TooShort";
    case Errc::ConstantInput: return "ConstantInput";
    case Errc::ManifestError: return "ManifestError";
    case Errc::TooFewVersions: return "TooFewVersions";
    }
    return "Unknown";
}

TimeInterval::TimeInterval(double start, double end) : start_(start), end_(end) {
    if (!std::isfinite(start) || !std::isfinite(end) || start < 0.0 || end < start)
        throw Error(Errc::InvalidInterval,
                    "[" + std::to_string(start) + ", " + std::to_string(end) + "]");
}

TimeInterval TimeInterval::expanded(double pad) const {
    return TimeInterval(std::max(0.0, start_ - pad), end_ + pad);
}

TimedWord make_word(std::string text, TimeInterval interval) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw Error(Errc::SchemaError, "word text is empty");
    TimedWord w;
    w.tokens = tokenize(text);
    w.text = std::move(text);
    w.interval = interval;
    return w;
}

std::string TimedSentence::text() const {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back(' ');
        out += words[i].text;
    }
    return out;
}

std::vector<std::string> TimedSentence::tokens() const {
    std::vector<std::string> out;
    for (const auto& w : words) out.insert(out.end(), w.tokens.begin(), w.tokens.end());
    return out;
}

TimedSentence make_sentence(std::vector<TimedWord> words, std::size_t index) {
    if (words.empty())
        throw Error(Errc::TimingError, "sentence " + std::to_string(index) + " has no words");
    for (std::size_t i = 1; i < words.size(); ++i) {
        if (words[i].interval.start() < words[i - 1].interval.start() ||
            words[i].interval.end() < words[i - 1].interval.end())
            throw Error(Errc::TimingError, "sentence " + std::to_string(index) +
                                               ": word '" + words[i].text +
                                               "' goes back in time");
    }
    TimedSentence s;
    s.interval = TimeInterval(words.front().interval.start(), words.back().interval.end());
    s.index = index;
    s.words = std::move(words);
    return s;
}

std::size_t Transcript::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences)
        for (const auto& w : s.words) n += w.tokens.size();
    return n;
}

void validate(const Transcript& transcript) {
    if (transcript.sentences.empty())
        throw Error(Errc::EmptyTranscript, "transcript '" + transcript.video_id + "' has no sentences");
    for (std::size_t i = 0; i < transcript.sentences.size(); ++i) {
        const auto& s = transcript.sentences[i];
        if (s.index != i)
            throw Error(Errc::SchemaError, "sentence indices must be 0..n-1 in order");
        if (s.words.empty())
            throw Error(Errc::TimingError, "sentence " + std::to_string(i) + " has no words");
        if (s.interval.start() != s.words.front().interval.start() ||
            s.interval.end() != s.words.back().interval.end())
            throw Error(Errc::TimingError,
                        "sentence " + std::to_string(i) + " interval does not span its words");
        if (i > 0 && s.interval.start() < transcript.sentences[i - 1].interval.end())
            throw Error(Errc::TimingError,
                        "sentence " + std::to_string(i) + " overlaps its predecessor");
    }
}

Modality modality_of(CueKind kind) noexcept {
    switch (kind) {
    case CueKind::Pitch:
    case CueKind::Loudness:
    case CueKind::Tonality: return Modality::Audio;
    case CueKind::HeadMove:
    case CueKind::EmotionShift: return Modality::Visual;
    case CueKind::TfIdf:
    case CueKind::Sentiment:
    case CueKind::Entity: return Modality::Textual;
    }
    return Modality::Textual;
}

const char* to_string(Modality m) noexcept {
    switch (m) {
    case Modality::Audio: return "audio";
    case Modality::Visual: return "visual";
    case Modality::Textual: return "text";
    }
    return "?";
}

const char* to_string(CueKind k) noexcept {
    switch (k) {
    case CueKind::Pitch: return "pitch";
    case CueKind::Loudness: return "loudness";
    case CueKind::Tonality: return "tonality";
    case CueKind::HeadMove: return "head_move";
    case CueKind::EmotionShift: return "emotion_shift";
    case CueKind::TfIdf: return "tfidf";
    case CueKind::Sentiment: return "sentiment";
    case CueKind::Entity: return "entity";
    }
    return "?";
}

Modality parse_modality(const std::string& name) {
    for (auto m : {Modality::Audio, Modality::Visual, Modality::Textual})
        if (name == to_string(m)) return m;
    throw Error(Errc::SchemaError, "unknown modality '" + name + "'");
}

CueKind parse_cue_kind(const std::string& name) {
    for (auto k : {CueKind::Pitch, CueKind::Loudness, CueKind::Tonality, CueKind::HeadMove,
                   CueKind::EmotionShift, CueKind::TfIdf, CueKind::Sentiment, CueKind::Entity})
        if (name == to_string(k)) return k;
    throw Error(Errc::SchemaError, "unknown cue kind '" + name + "'");
}

CueEvent make_cue(CueKind kind, TimeInterval time, double strength) {
    if (!std::isfinite(strength) || strength < 0.0)
        throw Error(Errc::InvalidArgument, "cue strength must be finite and non-negative");
    return CueEvent{modality_of(kind), kind, time, strength};
}

VideoMeta make_video_meta(double fps, double duration, std::int64_t frame_count) {
    if (!std::isfinite(fps) || fps <= 0.0)
        throw Error(Errc::InvalidArgument, "fps must be positive");
    if (!std::isfinite(duration) || duration < 0.0)
        throw Error(Errc::InvalidArgument, "duration must be non-negative");
    const auto expected = static_cast<std::int64_t>(std::llround(fps * duration));
    if (frame_count < 0) frame_count = expected;
    if (std::llabs(frame_count - expected) > 1)
        throw Error(Errc::InvalidArgument, "frame_count " + std::to_string(frame_count) +
                                               " inconsistent with fps*duration");
    return VideoMeta{fps, duration, frame_count};
}

double overlap(const TimeInterval& a, const TimeInterval& b) noexcept {
    return std::max(0.0, std::min(a.end(), b.end()) - std::max(a.start(), b.start()));
}

namespace {
// Absorbs representation error such as 0.1*30 = 3.0000000000000004.
constexpr double kFrameEps = 1e-9;
} // namespace

FrameRange to_frame_range(const TimeInterval& interval, const VideoMeta& meta) {
    if (interval.end() > meta.duration + 0.5)
        throw Error(Errc::IntervalOutOfVideo,
                    "interval ends at " + std::to_string(interval.end()) + " s, video is " +
                        std::to_string(meta.duration) + " s");
    const double first = std::floor(interval.start() * meta.fps + kFrameEps);
    if (first >= static_cast<double>(meta.frame_count))
        throw Error(Errc::IntervalOutOfVideo,
                    "interval starts at frame " + std::to_string(static_cast<long long>(first)) +
                        " of " + std::to_string(meta.frame_count));
    const double last = std::ceil(interval.end() * meta.fps - kFrameEps);
    FrameRange r;
    r.first = static_cast<std::int64_t>(first);
    r.last = std::min(static_cast<std::int64_t>(last), meta.frame_count - 1);
    r.last = std::max(r.last, r.first);
    return r;
}

std::vector<Segment> merge_adjacent(const std::vector<Segment>& segments, double gap_tolerance) {
    std::vector<Segment> out;
    for (const auto& seg : segments) {
        if (!out.empty() && seg.interval.start() - out.back().interval.end() <= gap_tolerance) {
            auto& prev = out.back();
            prev.interval = TimeInterval(prev.interval.start(),
                                         std::max(prev.interval.end(), seg.interval.end()));
            prev.frames.first = std::min(prev.frames.first, seg.frames.first);
            prev.frames.last = std::max(prev.frames.last, seg.frames.last);
            prev.sentence_indices.insert(prev.sentence_indices.end(), seg.sentence_indices.begin(),
                                         seg.sentence_indices.end());
            if (!seg.text.empty()) {
                if (!prev.text.empty()) prev.text.push_back(' ');
                prev.text += seg.text;
            }
        } else {
            out.push_back(seg);
        }
    }
    return out;
}

} // namespace cuefuse
