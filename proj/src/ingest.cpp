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

#include "cuefuse/ingest.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cuefuse/error.hpp"

namespace cuefuse {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void schema_fail(const std::string& origin, const std::string& what) {
    throw Error(Errc::SchemaError, origin + ": " + what);
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        schema_fail(origin, std::string("malformed JSON: ") + e.what());
    }
}

const json& field(const json& obj, const char* key, const std::string& origin) {
    if (!obj.is_object()) schema_fail(origin, std::string("expected an object holding '") + key + "'");
    const auto it = obj.find(key);
    if (it == obj.end()) schema_fail(origin, std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& v, const char* what, const std::string& origin) {
    if (!v.is_number()) schema_fail(origin, std::string("'") + what + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema_fail(origin, std::string("'") + what + "' must be finite");
    return d;
}

std::int64_t integer(const json& v, const char* what, const std::string& origin) {
    if (!v.is_number_integer()) schema_fail(origin, std::string("'") + what + "' must be an integer");
    return v.get<std::int64_t>();
}

std::string string_field(const json& v, const char* what, const std::string& origin) {
    if (!v.is_string()) schema_fail(origin, std::string("'") + what + "' must be a string");
    return v.get<std::string>();
}

const json& array_field(const json& obj, const char* key, const std::string& origin) {
    const json& v = field(obj, key, origin);
    if (!v.is_array()) schema_fail(origin, std::string("'") + key + "' must be an array");
    return v;
}

void check_schema(const json& doc, const char* expected, const std::string& origin) {
    if (!doc.is_object()) return;
    const auto it = doc.find("schema");
    if (it == doc.end()) return;
    if (!it->is_string() || it->get<std::string>() != expected)
        schema_fail(origin, std::string("schema must be '") + expected + "'");
}

double unit_interval(const json& v, const char* what, const std::string& origin) {
    const double d = number(v, what, origin);
    if (d < 0.0 || d > 1.0) schema_fail(origin, std::string("'") + what + "' outside [0,1]");
    return d;
}

// Frame indices are video frames sampled from a known fps; the stamped time
// must agree with index/fps to within one video frame.
void check_frame_time(std::int64_t index, double time, const VideoMeta& meta,
                      const std::string& origin) {
    if (index < 0) schema_fail(origin, "negative frame index");
    if (std::abs(static_cast<double>(index) / meta.fps - time) > 1.0 / meta.fps + 1e-9)
        schema_fail(origin, "frame " + std::to_string(index) + " time " + std::to_string(time) +
                                " disagrees with fps " + std::to_string(meta.fps));
}

std::uint32_t read_u32(const std::uint8_t* p) noexcept {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t read_u16(const std::uint8_t* p) noexcept {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

json nan_as_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

} // namespace

// ---------------------------------------------------------------------------
// file helpers

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

void write_binary_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// transcript

Transcript parse_transcript(const std::string& json_text, const std::string& origin) {
    const json doc = parse_json(json_text, origin);
    check_schema(doc, kTranscriptSchema, origin);
    Transcript t;
    t.video_id = string_field(field(doc, "video_id", origin), "video_id", origin);
    const json& sentences = array_field(doc, "sentences", origin);
    if (sentences.empty()) throw Error(Errc::EmptyTranscript, origin + ": no sentences");

    for (std::size_t si = 0; si < sentences.size(); ++si) {
        const json& s = sentences[si];
        const auto index = integer(field(s, "index", origin), "index", origin);
        if (index != static_cast<std::int64_t>(si))
            schema_fail(origin, "sentence indices must run 0..n-1, got " + std::to_string(index) +
                                    " at position " + std::to_string(si));
        const double s_start = number(field(s, "start", origin), "start", origin);
        const double s_end = number(field(s, "end", origin), "end", origin);
        const json& words = array_field(s, "words", origin);
        if (words.empty()) schema_fail(origin, "sentence " + std::to_string(si) + " has no words");

        std::vector<TimedWord> timed;
        timed.reserve(words.size());
        for (const json& w : words) {
            const std::string text = string_field(field(w, "w", origin), "w", origin);
            const double ws = number(field(w, "start", origin), "start", origin);
            const double we = number(field(w, "end", origin), "end", origin);
            if (ws < 0.0 || we < ws)
                throw Error(Errc::TimingError, origin + ": word '" + text + "' has [" +
                                                   std::to_string(ws) + ", " + std::to_string(we) + "]");
            if (text.find_first_not_of(" \t\r\n") == std::string::npos)
                schema_fail(origin, "empty word text in sentence " + std::to_string(si));
            timed.push_back(make_word(text, TimeInterval(ws, we)));
        }
        TimedSentence sentence = make_sentence(std::move(timed), si);
        // The stated span must agree with the words it holds.
        if (std::abs(sentence.interval.start() - s_start) > 1e-6 ||
            std::abs(sentence.interval.end() - s_end) > 1e-6)
            throw Error(Errc::TimingError,
                        origin + ": sentence " + std::to_string(si) + " span disagrees with its words");
        t.sentences.push_back(std::move(sentence));
    }
    validate(t);
    return t;
}

Transcript load_transcript(const fs::path& path) {
    return parse_transcript(read_text_file(path), path.string());
}

std::string transcript_to_json(const Transcript& t) {
    json sentences = json::array();
    for (const auto& s : t.sentences) {
        json words = json::array();
        for (const auto& w : s.words)
            words.push_back({{"w", w.text}, {"start", w.interval.start()}, {"end", w.interval.end()}});
        sentences.push_back({{"index", s.index},
                             {"start", s.interval.start()},
                             {"end", s.interval.end()},
                             {"words", std::move(words)}});
    }
    json doc = {{"schema", kTranscriptSchema}, {"video_id", t.video_id}, {"sentences", sentences}};
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// visual streams

const char* to_string(Emotion e) noexcept {
    switch (e) {
    case Emotion::Happy: return "happy";
    case Emotion::Sad: return "sad";
    case Emotion::Angry: return "angry";
    case Emotion::Fear: return "fear";
    case Emotion::Surprise: return "surprise";
    case Emotion::Disgust: return "disgust";
    case Emotion::Neutral: return "neutral";
    }
    return "?";
}

Emotion parse_emotion(const std::string& label) {
    for (auto e : {Emotion::Happy, Emotion::Sad, Emotion::Angry, Emotion::Fear, Emotion::Surprise,
                   Emotion::Disgust, Emotion::Neutral})
        if (label == to_string(e)) return e;
    throw Error(Errc::SchemaError, "emotion label '" + label + "' is not one of the seven classes");
}

std::vector<PoseFrame> load_pose(const fs::path& path, const VideoMeta& meta) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_schema(doc, kPoseSchema, origin);
    const double sampled = number(field(doc, "fps_sampled", origin), "fps_sampled", origin);
    if (sampled <= 0.0) schema_fail(origin, "fps_sampled must be positive");
    std::vector<PoseFrame> frames;
    for (const json& f : array_field(doc, "frames", origin)) {
        PoseFrame p;
        p.frame_index = integer(field(f, "i", origin), "i", origin);
        p.time = number(field(f, "t", origin), "t", origin);
        const json& nose = field(f, "nose", origin);
        p.nose_x = unit_interval(field(nose, "x", origin), "nose.x", origin);
        p.nose_y = unit_interval(field(nose, "y", origin), "nose.y", origin);
        p.confidence = unit_interval(field(f, "conf", origin), "conf", origin);
        p.low_confidence = p.confidence < kLowConfidence;
        check_frame_time(p.frame_index, p.time, meta, origin);
        if (!frames.empty() && p.time <= frames.back().time)
            throw Error(Errc::NonMonotoneFrames, origin + ": frame " + std::to_string(p.frame_index) +
                                                     " is not after its predecessor");
        frames.push_back(p);
    }
    return frames;
}

std::vector<EmotionFrame> load_emotions(const fs::path& path, const VideoMeta& meta) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_schema(doc, kEmotionSchema, origin);
    std::vector<EmotionFrame> frames;
    for (const json& f : array_field(doc, "frames", origin)) {
        EmotionFrame e;
        e.frame_index = integer(field(f, "i", origin), "i", origin);
        e.time = number(field(f, "t", origin), "t", origin);
        const std::string label = string_field(field(f, "label", origin), "label", origin);
        try {
            e.label = parse_emotion(label);
        } catch (const Error& err) {
            schema_fail(origin, err.what());
        }
        e.confidence = unit_interval(field(f, "conf", origin), "conf", origin);
        e.low_confidence = e.confidence < kLowConfidence;
        check_frame_time(e.frame_index, e.time, meta, origin);
        if (!frames.empty() && e.time <= frames.back().time)
            throw Error(Errc::NonMonotoneFrames, origin + ": frame " + std::to_string(e.frame_index) +
                                                     " is not after its predecessor");
        frames.push_back(e);
    }
    return frames;
}

std::pair<std::vector<PoseFrame>, std::vector<EmotionFrame>>
load_visual_streams(const fs::path& pose_path, const fs::path& emotion_path, const VideoMeta& meta) {
    auto poses = load_pose(pose_path, meta);
    auto emotions = load_emotions(emotion_path, meta);
    return {std::move(poses), std::move(emotions)};
}

std::string pose_to_json(const std::vector<PoseFrame>& frames, double fps_sampled) {
    json arr = json::array();
    for (const auto& p : frames)
        arr.push_back({{"i", p.frame_index},
                       {"t", p.time},
                       {"nose", {{"x", p.nose_x}, {"y", p.nose_y}}},
                       {"conf", p.confidence}});
    json doc = {{"schema", kPoseSchema}, {"fps_sampled", fps_sampled}, {"frames", arr}};
    return doc.dump(2) + "\n";
}

std::string emotions_to_json(const std::vector<EmotionFrame>& frames) {
    json arr = json::array();
    for (const auto& e : frames)
        arr.push_back({{"i", e.frame_index}, {"t", e.time}, {"label", to_string(e.label)}, {"conf", e.confidence}});
    json doc = {{"schema", kEmotionSchema}, {"frames", arr}};
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// WAV

AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(Errc::CorruptHeader, origin + ": not a RIFF/WAVE file");
    const std::uint32_t riff_size = read_u32(bytes.data() + 4);
    if (static_cast<std::uint64_t>(riff_size) + 8 > bytes.size())
        throw Error(Errc::CorruptHeader, origin + ": RIFF size exceeds file length");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
    std::uint32_t rate = 0;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    const std::size_t end = static_cast<std::size_t>(riff_size) + 8;
    while (pos + 8 <= end) {
        const std::uint8_t* hdr = bytes.data() + pos;
        const std::uint32_t size = read_u32(hdr + 4);
        const std::size_t body = pos + 8;
        if (body + size > end) throw Error(Errc::CorruptHeader, origin + ": chunk overruns file");
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (size < 16) throw Error(Errc::CorruptHeader, origin + ": fmt chunk too short");
            const std::uint8_t* f = bytes.data() + body;
            format = read_u16(f);
            channels = read_u16(f + 2);
            rate = read_u32(f + 4);
            block_align = read_u16(f + 12);
            bits = read_u16(f + 14);
            // WAVE_FORMAT_EXTENSIBLE carries the real format in the subformat GUID.
            if (format == 0xFFFE) {
                if (size < 40) throw Error(Errc::CorruptHeader, origin + ": extensible fmt too short");
                format = read_u16(f + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = size;
        }
        pos = body + size + (size & 1u);
    }
    if (!have_fmt) throw Error(Errc::CorruptHeader, origin + ": missing fmt chunk");
    if (!data) throw Error(Errc::CorruptHeader, origin + ": missing data chunk");
    if (format != 1) throw Error(Errc::UnsupportedFormat, origin + ": only PCM is supported");
    if (channels != 1)
        throw Error(Errc::UnsupportedFormat, origin + ": " + std::to_string(channels) + " channels, need mono");
    if (bits != 16)
        throw Error(Errc::UnsupportedFormat, origin + ": " + std::to_string(bits) + "-bit, need 16-bit");
    if (rate != kNativeSampleRate)
        throw Error(Errc::UnsupportedFormat, origin + ": " + std::to_string(rate) + " Hz, need 16000 Hz");
    if (block_align != 2) throw Error(Errc::CorruptHeader, origin + ": block align must be 2");
    if (data_size % 2 != 0) throw Error(Errc::CorruptHeader, origin + ": odd data length");

    AudioBuffer audio;
    audio.sample_rate = static_cast<int>(rate);
    audio.samples.resize(data_size / 2);
    for (std::size_t i = 0; i < audio.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(read_u16(data + 2 * i));
        audio.samples[i] = static_cast<double>(raw) / 32768.0;
    }
    return audio;
}

AudioBuffer load_wav(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_wav(bytes, path.string());
}

std::vector<std::uint8_t> wav_bytes(const AudioBuffer& audio) {
    const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, 1);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(audio.sample_rate) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_size);
    for (double s : audio.samples) {
        const double scaled = std::round(s * 32768.0);
        const double clamped = std::min(32767.0, std::max(-32768.0, scaled));
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(clamped)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// embeddings, pGT, features, entities, cues

TokenEmbeddings load_embeddings(const fs::path& path) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_schema(doc, kEmbeddingsSchema, origin);
    const auto dim = integer(field(doc, "dim", origin), "dim", origin);
    if (dim <= 0) schema_fail(origin, "dim must be positive");
    TokenEmbeddings e;
    e.dim = static_cast<std::size_t>(dim);
    for (const json& item : array_field(doc, "items", origin)) {
        std::string token = string_field(field(item, "token", origin), "token", origin);
        const json& vec = array_field(item, "vec", origin);
        if (vec.size() != e.dim)
            throw Error(Errc::DimensionMismatch, origin + ": token '" + token + "' has " +
                                                     std::to_string(vec.size()) + " entries, dim is " +
                                                     std::to_string(e.dim));
        std::vector<double> v;
        v.reserve(vec.size());
        for (const json& x : vec) {
            // JSON has no NaN literal; null and "NaN" strings are how exporters spell it.
            if (x.is_null() || (x.is_string() && (x == "NaN" || x == "nan")))
                throw Error(Errc::NaNEntry, origin + ": NaN in vector for '" + token + "'");
            if (!x.is_number()) schema_fail(origin, "vector entries must be numbers");
            const double d = x.get<double>();
            if (std::isnan(d)) throw Error(Errc::NaNEntry, origin + ": NaN in vector for '" + token + "'");
            v.push_back(d);
        }
        e.tokens.push_back(std::move(token));
        e.vectors.push_back(std::move(v));
    }
    return e;
}

std::string embeddings_to_json(const TokenEmbeddings& e) {
    json items = json::array();
    for (std::size_t i = 0; i < e.tokens.size(); ++i)
        items.push_back({{"token", e.tokens[i]}, {"vec", e.vectors[i]}});
    json doc = {{"schema", kEmbeddingsSchema}, {"dim", e.dim}, {"items", items}};
    return doc.dump() + "\n";
}

PgtSummary parse_pgt(const std::string& json_text, const std::string& origin) {
    const json doc = parse_json(json_text, origin);
    check_schema(doc, kPgtSchema, origin);
    const json& entries = doc.is_array() ? doc : array_field(doc, "entries", origin);
    PgtSummary p;
    for (const json& e : entries) {
        if (!e.is_array() || e.size() != 3) schema_fail(origin, "entries must be [start, end, sentence]");
        const double start = number(e[0], "start", origin);
        const double end = number(e[1], "end", origin);
        std::string sentence = string_field(e[2], "sentence", origin);
        if (start < 0.0 || end < start)
            throw Error(Errc::TimingError, origin + ": entry '" + sentence + "' has a bad interval");
        if (sentence.find_first_not_of(" \t\r\n") == std::string::npos)
            schema_fail(origin, "empty pGT sentence");
        if (!p.entries.empty() && start < p.entries.back().interval.start())
            throw Error(Errc::UnorderedEntries, origin + ": entry starting at " + std::to_string(start) +
                                                    " precedes its predecessor");
        p.entries.push_back(PgtEntry{TimeInterval(start, end), std::move(sentence)});
    }
    return p;
}

PgtSummary load_pgt(const fs::path& path) { return parse_pgt(read_text_file(path), path.string()); }

std::string pgt_to_json(const PgtSummary& p) {
    json entries = json::array();
    for (const auto& e : p.entries)
        entries.push_back(json::array({e.interval.start(), e.interval.end(), e.sentence}));
    json doc = {{"schema", kPgtSchema}, {"entries", entries}};
    return doc.dump(2) + "\n";
}

bool operator==(const PrecomputedFeatures& a, const PrecomputedFeatures& b) {
    const auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!(x[i] == y[i] || (std::isnan(x[i]) && std::isnan(y[i])))) return false;
        return true;
    };
    return a.hop == b.hop && same(a.times, b.times) && same(a.pitch, b.pitch) &&
           same(a.loudness, b.loudness) && same(a.tonality, b.tonality);
}

PrecomputedFeatures load_features(const fs::path& path) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_schema(doc, kFeaturesSchema, origin);
    PrecomputedFeatures f;
    f.hop = number(field(doc, "hop", origin), "hop", origin);
    if (f.hop <= 0.0) schema_fail(origin, "hop must be positive");
    for (const json& row : array_field(doc, "frames", origin)) {
        const double t = number(field(row, "t", origin), "t", origin);
        if (!f.times.empty() && t <= f.times.back())
            throw Error(Errc::NonMonotoneFrames, origin + ": feature frame times must increase");
        f.times.push_back(t);
        const json& pitch = field(row, "pitch", origin);
        f.pitch.push_back(pitch.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : number(pitch, "pitch", origin));
        f.loudness.push_back(number(field(row, "loudness", origin), "loudness", origin));
        f.tonality.push_back(number(field(row, "tonality", origin), "tonality", origin));
    }
    if (f.times.empty()) schema_fail(origin, "no feature frames");
    return f;
}

std::string features_to_json(const PrecomputedFeatures& f) {
    json frames = json::array();
    for (std::size_t i = 0; i < f.times.size(); ++i)
        frames.push_back({{"t", f.times[i]},
                          {"pitch", nan_as_null(f.pitch[i])},
                          {"loudness", f.loudness[i]},
                          {"tonality", f.tonality[i]}});
    json doc = {{"schema", kFeaturesSchema}, {"hop", f.hop}, {"frames", frames}};
    return doc.dump() + "\n";
}

const char* to_string(EntityKind k) noexcept {
    switch (k) {
    case EntityKind::Person: return "PERSON";
    case EntityKind::Organization: return "ORG";
    case EntityKind::Location: return "LOC";
    case EntityKind::Event: return "EVENT";
    }
    return "?";
}

std::optional<EntityKind> parse_entity_kind(const std::string& label) {
    if (label == "PERSON" || label == "PER") return EntityKind::Person;
    if (label == "ORG") return EntityKind::Organization;
    if (label == "LOC" || label == "GPE" || label == "FAC") return EntityKind::Location;
    if (label == "EVENT") return EntityKind::Event;
    return std::nullopt;
}

std::vector<EntityAnnotation> load_entities(const fs::path& path) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_schema(doc, kEntitiesSchema, origin);
    std::vector<EntityAnnotation> out;
    for (const json& e : array_field(doc, "entities", origin)) {
        const std::string token = string_field(field(e, "token", origin), "token", origin);
        const std::string kind = string_field(field(e, "kind", origin), "kind", origin);
        const auto index = integer(field(e, "sentence_index", origin), "sentence_index", origin);
        if (index < 0) schema_fail(origin, "negative sentence_index");
        const auto parsed = parse_entity_kind(kind);
        if (!parsed) continue; // categories outside persons/orgs/locations/events are ignored
        out.push_back(EntityAnnotation{token, *parsed, static_cast<std::size_t>(index)});
    }
    return out;
}

std::string entities_to_json(const std::vector<EntityAnnotation>& entities) {
    json arr = json::array();
    for (const auto& e : entities)
        arr.push_back({{"token", e.token}, {"kind", to_string(e.kind)}, {"sentence_index", e.sentence_index}});
    json doc = {{"schema", kEntitiesSchema}, {"entities", arr}};
    return doc.dump(2) + "\n";
}

std::vector<CueEvent> load_cues(const fs::path& path) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_schema(doc, kCuesSchema, origin);
    std::vector<CueEvent> cues;
    for (const json& c : array_field(doc, "cues", origin)) {
        CueKind kind;
        try {
            kind = parse_cue_kind(string_field(field(c, "kind", origin), "kind", origin));
        } catch (const Error& err) {
            schema_fail(origin, err.what());
        }
        const double start = number(field(c, "start", origin), "start", origin);
        const double end = number(field(c, "end", origin), "end", origin);
        const double strength = number(field(c, "strength", origin), "strength", origin);
        if (start < 0.0 || end < start) throw Error(Errc::TimingError, origin + ": bad cue interval");
        if (strength < 0.0) schema_fail(origin, "negative cue strength");
        if (c.contains("modality") &&
            string_field(c["modality"], "modality", origin) != to_string(modality_of(kind)))
            schema_fail(origin, "cue modality disagrees with its kind");
        cues.push_back(make_cue(kind, TimeInterval(start, end), strength));
    }
    return cues;
}

std::string cues_to_json(const std::vector<CueEvent>& cues) {
    json arr = json::array();
    for (const auto& c : cues)
        arr.push_back({{"modality", to_string(c.modality)},
                       {"kind", to_string(c.kind)},
                       {"start", c.time.start()},
                       {"end", c.time.end()},
                       {"strength", c.strength}});
    json doc = {{"schema", kCuesSchema}, {"cues", arr}};
    return doc.dump(2) + "\n";
}

} // namespace cuefuse
