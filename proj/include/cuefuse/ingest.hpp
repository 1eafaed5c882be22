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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuefuse/timeline.hpp"

namespace cuefuse {

inline constexpr const char* kTranscriptSchema = "cuefuse-transcript/1";
inline constexpr const char* kPoseSchema = "cuefuse-pose/1";
inline constexpr const char* kEmotionSchema = "cuefuse-emotion/1";
inline constexpr const char* kEmbeddingsSchema = "cuefuse-embeddings/1";
inline constexpr const char* kPgtSchema = "cuefuse-pgt/1";
inline constexpr const char* kFeaturesSchema = "cuefuse-features/1";
inline constexpr const char* kCuesSchema = "cuefuse-cues/1";
inline constexpr const char* kEntitiesSchema = "cuefuse-entities/1";

/// Frames below this confidence are flagged, never dropped.
inline constexpr double kLowConfidence = 0.5;

struct PoseFrame {
    std::int64_t frame_index = 0;
    double time = 0.0;
    double nose_x = 0.0;
    double nose_y = 0.0;
    double confidence = 1.0;
    bool low_confidence = false;

    friend bool operator==(const PoseFrame&, const PoseFrame&) = default;
};

enum class Emotion { Happy, Sad, Angry, Fear, Surprise, Disgust, Neutral };

const char* to_string(Emotion e) noexcept;
Emotion parse_emotion(const std::string& label);

struct EmotionFrame {
    std::int64_t frame_index = 0;
    double time = 0.0;
    Emotion label = Emotion::Neutral;
    double confidence = 1.0;
    bool low_confidence = false;

    friend bool operator==(const EmotionFrame&, const EmotionFrame&) = default;
};

struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 16000;

    double duration() const noexcept {
        return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
    }
    friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;
};

inline constexpr int kNativeSampleRate = 16000;

struct TokenEmbeddings {
    std::vector<std::string> tokens;
    std::vector<std::vector<double>> vectors;
    std::size_t dim = 0;

    bool empty() const noexcept { return tokens.empty(); }
    friend bool operator==(const TokenEmbeddings&, const TokenEmbeddings&) = default;
};

struct PgtEntry {
    TimeInterval interval;
    std::string sentence;

    friend bool operator==(const PgtEntry&, const PgtEntry&) = default;
};

struct PgtSummary {
    std::vector<PgtEntry> entries;

    friend bool operator==(const PgtSummary&, const PgtSummary&) = default;
};

/// Externally computed prosody frames (one row per hop). Pitch is NaN when unvoiced.
struct PrecomputedFeatures {
    double hop = 0.01;
    std::vector<double> times;
    std::vector<double> pitch;
    std::vector<double> loudness;
    std::vector<double> tonality;

    friend bool operator==(const PrecomputedFeatures& a, const PrecomputedFeatures& b);
};

enum class EntityKind { Person, Organization, Location, Event };

const char* to_string(EntityKind k) noexcept;
/// Accepts common NER label spellings; nullopt for categories outside the four kept kinds.
std::optional<EntityKind> parse_entity_kind(const std::string& label);

struct EntityAnnotation {
    std::string token;
    EntityKind kind = EntityKind::Person;
    std::size_t sentence_index = 0;

    friend bool operator==(const EntityAnnotation&, const EntityAnnotation&) = default;
};

// Loaders. Every violation throws cuefuse::Error; no partially filled object escapes.
Transcript load_transcript(const std::filesystem::path& path);
std::vector<PoseFrame> load_pose(const std::filesystem::path& path, const VideoMeta& meta);
std::vector<EmotionFrame> load_emotions(const std::filesystem::path& path, const VideoMeta& meta);
std::pair<std::vector<PoseFrame>, std::vector<EmotionFrame>>
load_visual_streams(const std::filesystem::path& pose_path,
                    const std::filesystem::path& emotion_path, const VideoMeta& meta);
AudioBuffer load_wav(const std::filesystem::path& path);
TokenEmbeddings load_embeddings(const std::filesystem::path& path);
PgtSummary load_pgt(const std::filesystem::path& path);
PrecomputedFeatures load_features(const std::filesystem::path& path);
std::vector<EntityAnnotation> load_entities(const std::filesystem::path& path);
std::vector<CueEvent> load_cues(const std::filesystem::path& path);

// In-memory parsers used by the loaders; `origin` names the source in messages.
Transcript parse_transcript(const std::string& json_text, const std::string& origin = "<memory>");
PgtSummary parse_pgt(const std::string& json_text, const std::string& origin = "<memory>");
AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

// Writers, inverse of the loaders.
std::string transcript_to_json(const Transcript& t);
std::string pose_to_json(const std::vector<PoseFrame>& frames, double fps_sampled);
std::string emotions_to_json(const std::vector<EmotionFrame>& frames);
std::string embeddings_to_json(const TokenEmbeddings& e);
std::string pgt_to_json(const PgtSummary& p);
std::string features_to_json(const PrecomputedFeatures& f);
std::string entities_to_json(const std::vector<EntityAnnotation>& entities);
std::string cues_to_json(const std::vector<CueEvent>& cues);
/// PCM16 mono; samples are clamped to [-1, 1) and scaled by 32768.
std::vector<std::uint8_t> wav_bytes(const AudioBuffer& audio);

void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::string read_text_file(const std::filesystem::path& path);

} // namespace cuefuse
