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

#include "cuefuse/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cuefuse/error.hpp"
#include "cuefuse/ingest.hpp"
#include "cuefuse/render.hpp"
#include "cuefuse/text.hpp"

namespace cuefuse {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void manifest_fail(const std::string& origin, const std::string& what) {
    throw Error(Errc::ManifestError, origin + ": " + what);
}

std::optional<fs::path> optional_path(const json& rec, const char* key, const fs::path& base, const std::string& where) {
    const auto it = rec.find(key);
    if (it == rec.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) manifest_fail(where, std::string("'") + key + "' must be a path string");
    const fs::path p = it->get<std::string>();
    return p.is_absolute() ? p : base / p;
}

} // namespace

std::vector<ManifestEntry> parse_manifest(const std::string& text, const fs::path& base_dir, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        manifest_fail(origin, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_array()) manifest_fail(origin, "manifest must be a JSON array of records");
    std::vector<ManifestEntry> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& rec = doc[i];
        const std::string where = origin + "[" + std::to_string(i) + "]";
        if (!rec.is_object()) manifest_fail(where, "record must be an object");
        ManifestEntry e;
        const auto id = rec.find("video_id");
        if (id == rec.end() || !id->is_string() || id->get<std::string>().empty())
            manifest_fail(where, "missing 'video_id'");
        e.video_id = id->get<std::string>();
        if (e.video_id.find_first_of("/\\") != std::string::npos || e.video_id == "." || e.video_id == "..")
            manifest_fail(where, "video_id '" + e.video_id + "' cannot be used as a file name");
        if (!seen.insert(e.video_id).second) manifest_fail(where, "duplicate video_id '" + e.video_id + "'");
        const auto transcript = optional_path(rec, "transcript", base_dir, where);
        if (!transcript) manifest_fail(where, "missing 'transcript'");
        e.transcript = *transcript;
        e.audio = optional_path(rec, "audio", base_dir, where);
        e.features = optional_path(rec, "features", base_dir, where);
        e.pose = optional_path(rec, "pose", base_dir, where);
        e.emotion = optional_path(rec, "emotion", base_dir, where);
        e.entities = optional_path(rec, "entities", base_dir, where);
        e.pgt = optional_path(rec, "pgt", base_dir, where);
        e.embeddings = optional_path(rec, "embeddings", base_dir, where);
        if (const auto it = rec.find("pgt_versions"); it != rec.end()) {
            if (!it->is_array()) manifest_fail(where, "'pgt_versions' must be an array");
            for (const auto& p : *it) {
                if (!p.is_string()) manifest_fail(where, "'pgt_versions' entries must be paths");
                const fs::path path = p.get<std::string>();
                e.pgt_versions.push_back(path.is_absolute() ? path : base_dir / path);
            }
        }
        const auto fps = rec.find("fps");
        const auto dur = rec.find("duration");
        if (fps == rec.end() || !fps->is_number() || dur == rec.end() || !dur->is_number())
            manifest_fail(where, "'fps' and 'duration' are required numbers");
        e.fps = fps->get<double>();
        e.duration = dur->get<double>();
        if (const auto it = rec.find("frame_count"); it != rec.end() && !it->is_null()) {
            if (!it->is_number_integer()) manifest_fail(where, "'frame_count' must be an integer");
            e.frame_count = it->get<std::int64_t>();
        }
        if (const auto it = rec.find("source"); it != rec.end() && !it->is_null()) {
            if (!it->is_string()) manifest_fail(where, "'source' must be a path string");
            const fs::path p = it->get<std::string>();
            e.source = (p.is_absolute() ? p : base_dir / p).string();
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw Error(Errc::ManifestError, e.what());
    }
    return parse_manifest(text, path.parent_path(), path.string());
}

std::string manifest_to_json(const std::vector<ManifestEntry>& entries) {
    json arr = json::array();
    for (const auto& e : entries) {
        json rec = {{"video_id", e.video_id}, {"transcript", e.transcript.string()}, {"fps", e.fps},
                    {"duration", e.duration}};
        const auto put = [&](const char* key, const std::optional<fs::path>& p) {
            if (p) rec[key] = p->string();
        };
        put("audio", e.audio);
        put("features", e.features);
        put("pose", e.pose);
        put("emotion", e.emotion);
        put("entities", e.entities);
        put("pgt", e.pgt);
        put("embeddings", e.embeddings);
        if (!e.pgt_versions.empty()) {
            json v = json::array();
            for (const auto& p : e.pgt_versions) v.push_back(p.string());
            rec["pgt_versions"] = v;
        }
        if (e.frame_count) rec["frame_count"] = *e.frame_count;
        if (e.source) rec["source"] = *e.source;
        arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
}

void validate(const PipelineConfig& config) {
    if (config.modalities.empty()) throw Error(Errc::InvalidArgument, "modality mask must not be empty");
    if (config.workers < 1) throw Error(Errc::InvalidArgument, "worker count must be >= 1");
    if (!(config.baseline_ratio > 0.0 && config.baseline_ratio <= 1.0))
        throw Error(Errc::InvalidArgument, "baseline ratio must lie in (0,1]");
    if (!(config.fusion_tolerance >= 0.0)) throw Error(Errc::InvalidArgument, "fusion tolerance must be >= 0");
    if (config.visual.window < 1) throw Error(Errc::InvalidArgument, "visual window must be >= 1");
    validate(config.summary);
}

namespace {

DiversityMode parse_diversity(const std::string& s) {
    if (s == "literal") return DiversityMode::Literal;
    if (s == "strict") return DiversityMode::Strict;
    throw Error(Errc::InvalidArgument, "diversity_mode must be 'literal' or 'strict', got '" + s + "'");
}

WeightsMode parse_weights(const std::string& s) {
    if (s == "uniform") return WeightsMode::Uniform;
    if (s == "weighted") return WeightsMode::Weighted;
    throw Error(Errc::InvalidArgument, "weights_mode must be 'uniform' or 'weighted', got '" + s + "'");
}

ThresholdMode parse_threshold_mode(const std::string& s) {
    if (s == "dynamic") return ThresholdMode::Dynamic;
    if (s == "fixed") return ThresholdMode::Fixed;
    throw Error(Errc::InvalidArgument, "visual_mode must be 'dynamic' or 'fixed', got '" + s + "'");
}

FeatureKind parse_feature_kind(const std::string& s) {
    for (auto k : {FeatureKind::Pitch, FeatureKind::Loudness, FeatureKind::Tonality})
        if (s == to_string(k)) return k;
    throw Error(Errc::InvalidArgument, "unknown audio feature '" + s + "'");
}

} // namespace

void apply_config_json(PipelineConfig& c, const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::InvalidArgument, origin + ": malformed JSON: " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::InvalidArgument, origin + ": config must be a JSON object");
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "modalities") {
                c.modalities.clear();
                for (const auto& m : v) c.modalities.insert(parse_modality(m.get<std::string>()));
            } else if (key == "output_dir") {
                c.output_dir = v.get<std::string>();
            } else if (key == "lambda") {
                c.summary.lambda = v.get<double>();
            } else if (key == "delta") {
                c.summary.delta = v.get<double>();
            } else if (key == "diversity_mode") {
                c.summary.diversity_mode = parse_diversity(v.get<std::string>());
            } else if (key == "strict_sim_threshold") {
                c.summary.strict_sim_threshold = v.get<double>();
            } else if (key == "weights_mode") {
                c.summary.weights_mode = parse_weights(v.get<std::string>());
            } else if (key == "z_threshold") {
                c.audio.thresholds.shared = v.get<double>();
            } else if (key == "z_thresholds") {
                for (const auto& [name, z] : v.items())
                    c.audio.thresholds.per_kind[static_cast<std::size_t>(parse_feature_kind(name))] = z.get<double>();
            } else if (key == "visual_mode") {
                c.visual.mode = parse_threshold_mode(v.get<std::string>());
            } else if (key == "visual_window") {
                c.visual.window = v.get<std::size_t>();
            } else if (key == "visual_k") {
                c.visual.k = v.get<double>();
            } else if (key == "visual_lambda") {
                c.visual.fixed_lambda = v.get<double>();
            } else if (key == "min_conf") {
                c.visual.min_conf = v.get<double>();
            } else if (key == "top_k") {
                c.text.top_k = v.get<std::size_t>();
            } else if (key == "intensity_threshold") {
                c.text.intensity_threshold = v.get<double>();
            } else if (key == "use_gazetteer") {
                c.text.use_gazetteer = v.get<bool>();
            } else if (key == "lexicon") {
                c.lexicon = fs::path(v.get<std::string>());
            } else if (key == "gazetteer") {
                c.gazetteer = fs::path(v.get<std::string>());
            } else if (key == "tolerance") {
                c.fusion_tolerance = v.get<double>();
            } else if (key == "promote_multi_nontextual") {
                c.fusion.promote_multi_nontextual = v.get<bool>();
            } else if (key == "promote_strong_single") {
                c.fusion.promote_strong_single = v.get<bool>();
            } else if (key == "strong_strength") {
                c.fusion.strong_strength = v.get<double>();
            } else if (key == "baseline_ratio") {
                c.baseline_ratio = v.get<double>();
            } else if (key == "workers") {
                c.workers = v.get<std::size_t>();
            } else {
                throw Error(Errc::InvalidArgument, origin + ": unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, origin + ": " + e.what());
    }
}

std::optional<std::size_t> workers_from_env() {
    const char* v = std::getenv("CUEFUSE_WORKERS");
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw Error(Errc::InvalidArgument, std::string("CUEFUSE_WORKERS must be >= 1, got '") + v + "'");
    return static_cast<std::size_t>(n);
}

const char* to_string(Method m) noexcept { return m == Method::Multimodal ? "multimodal" : "edmundson"; }

TextResources load_text_resources(const PipelineConfig& config) {
    TextResources r;
    r.lexicon = config.lexicon ? load_lexicon(*config.lexicon) : default_lexicon();
    r.gazetteer = config.gazetteer ? load_gazetteer(*config.gazetteer) : default_gazetteer();
    return r;
}

namespace {

VideoMeta meta_of(const ManifestEntry& e) { return make_video_meta(e.fps, e.duration, e.frame_count.value_or(-1)); }

void append(std::vector<CueEvent>& to, const std::vector<CueEvent>& from) { to.insert(to.end(), from.begin(), from.end()); }

} // namespace

VideoCues extract_cues(const ManifestEntry& entry, const PipelineConfig& config, const TextResources& resources) {
    VideoCues vc;
    vc.transcript = load_transcript(entry.transcript);
    validate(vc.transcript);
    vc.meta = meta_of(entry);
    const auto& mask = config.modalities;

    if (mask.count(Modality::Audio)) {
        AudioAnalysis audio;
        if (entry.audio)
            audio = analyze_audio(load_wav(*entry.audio), config.audio);
        else if (entry.features)
            audio = analyze_features(load_features(*entry.features), config.audio);
        else
            throw Error(Errc::ManifestError, entry.video_id + ": audio modality needs 'audio' or 'features'");
        append(vc.cues, audio.cues);
    }
    if (mask.count(Modality::Visual)) {
        if (!entry.pose) throw Error(Errc::ManifestError, entry.video_id + ": visual modality needs 'pose'");
        std::vector<PoseFrame> poses;
        std::vector<EmotionFrame> emotions;
        if (entry.emotion)
            std::tie(poses, emotions) = load_visual_streams(*entry.pose, *entry.emotion, vc.meta);
        else
            poses = load_pose(*entry.pose, vc.meta);
        append(vc.cues, analyze_visual(poses, emotions, config.visual).cues);
    }
    if (mask.count(Modality::Textual)) {
        std::vector<EntityAnnotation> entities;
        if (entry.entities) entities = load_entities(*entry.entities);
        auto text = analyze_text(vc.transcript, entities, resources.lexicon, resources.gazetteer, config.text);
        vc.keywords = std::move(text.set);
        append(vc.cues, text.cues);
    }
    std::stable_sort(vc.cues.begin(), vc.cues.end(), [](const CueEvent& a, const CueEvent& b) {
        return a.time.start() < b.time.start();
    });

    FusionOptions fusion = config.fusion;
    fusion.active = mask;
    const auto alignment = align_words_to_cues(vc.transcript, vc.cues, config.fusion_tolerance);
    vc.bonus = select_bonus_words(vc.transcript, alignment, vc.keywords, fusion);
    return vc;
}

namespace {

std::string source_of(const ManifestEntry& e) {
    if (e.source) return fs::absolute(*e.source).lexically_normal().string();
    return fs::absolute(e.transcript.parent_path() / (e.video_id + ".mp4")).lexically_normal().string();
}

EvaluationInputs evaluation_inputs(const Transcript& t, const VideoMeta& meta, const TokenEmbeddings* emb,
                                   const std::string& method) {
    EvaluationInputs in;
    in.transcript = &t;
    in.meta = meta;
    in.transcript_embeddings = emb;
    in.method = method;
    return in;
}

} // namespace

VideoResult process_video(const ManifestEntry& entry, const PipelineConfig& config, const TextResources& resources,
                          Method method) {
    VideoResult r;
    r.video_id = entry.video_id;
    try {
        Transcript transcript;
        VideoMeta meta;
        Summary summary;
        if (method == Method::Multimodal) {
            VideoCues vc = extract_cues(entry, config, resources);
            summary = summarize(vc.transcript, vc.bonus, config.summary, vc.meta);
            transcript = std::move(vc.transcript);
            meta = vc.meta;
        } else {
            transcript = load_transcript(entry.transcript);
            validate(transcript);
            meta = meta_of(entry);
            summary = edmundson_summarize(transcript, default_cue_phrases(), config.baseline_ratio, meta);
        }
        summary.video_id = entry.video_id;
        const auto record = to_record(summary, to_string(method));
        r.degenerate = method == Method::Multimodal && record.degenerate;
        r.summary_json = summary_to_json(record);
        r.srt = render_srt(summary);
        const CutList cuts = make_cutlist(summary, meta, source_of(entry));
        r.cutlist_json = cutlist_to_json(cuts);
        r.cut_script = render_cut_script(cuts, entry.video_id + ".srt", entry.video_id + ".summary.mp4");

        if (entry.pgt) {
            const PgtSummary pgt = load_pgt(*entry.pgt);
            std::optional<TokenEmbeddings> emb;
            if (entry.embeddings) emb = load_embeddings(*entry.embeddings);
            r.report = evaluate_pair(candidate_from(summary), pgt,
                                     evaluation_inputs(transcript, meta, emb ? &*emb : nullptr, to_string(method)));
        }
        r.ok = true;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = std::min(std::max<std::size_t>(1, workers), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

namespace {

void write_report_files(const fs::path& dir, const std::vector<MetricsReport>& reports) {
    write_text_file(dir / "report.csv", render_report(reports, ReportFormat::Csv));
    write_text_file(dir / "report.json", render_report(reports, ReportFormat::Json));
}

void log_failures(const BatchResult& batch) {
    for (const auto& v : batch.videos)
        if (!v.ok) std::cerr << "cuefuse: " << v.video_id << ": " << v.error << '\n';
}

BatchResult finish(std::vector<VideoResult> results) {
    BatchResult batch;
    batch.videos = std::move(results);
    for (const auto& v : batch.videos) {
        if (!v.ok) ++batch.failures;
        if (v.report) batch.reports.push_back(*v.report);
    }
    log_failures(batch);
    return batch;
}

std::size_t effective_workers(const PipelineConfig& config) { return std::max<std::size_t>(1, config.workers); }

} // namespace

BatchResult run_pipeline(const PipelineConfig& config, Method method) {
    validate(config);
    const auto entries = load_manifest(config.manifest);
    const TextResources resources = load_text_resources(config);
    std::vector<VideoResult> results(entries.size());
    parallel_for(entries.size(), effective_workers(config),
                 [&](std::size_t i) { results[i] = process_video(entries[i], config, resources, method); });

    const fs::path dir = config.output_dir / to_string(method);
    fs::create_directories(dir);
    for (const auto& v : results) {
        if (!v.ok) continue;
        if (v.degenerate)
            std::cerr << "cuefuse: warning: " << v.video_id << ": no bonus words, every sentence passes the threshold\n";
        write_text_file(dir / (v.video_id + ".summary.json"), v.summary_json);
        write_text_file(dir / (v.video_id + ".srt"), v.srt);
        write_text_file(dir / (v.video_id + ".cuts.json"), v.cutlist_json);
        write_text_file(dir / (v.video_id + ".cut.sh"), v.cut_script);
    }
    BatchResult batch = finish(std::move(results));
    write_report_files(dir, batch.reports);
    return batch;
}

BatchResult run_baseline(const PipelineConfig& config) { return run_pipeline(config, Method::Edmundson); }

BatchResult run_evaluate(const PipelineConfig& config, const fs::path& summaries_dir, const std::string& method) {
    validate(config);
    const auto entries = load_manifest(config.manifest);
    std::vector<VideoResult> results(entries.size());
    parallel_for(entries.size(), effective_workers(config), [&](std::size_t i) {
        const auto& e = entries[i];
        VideoResult& r = results[i];
        r.video_id = e.video_id;
        try {
            if (!e.pgt) throw Error(Errc::ManifestError, e.video_id + ": no 'pgt' to evaluate against");
            const fs::path path = summaries_dir / (e.video_id + ".summary.json");
            const SummaryRecord rec = parse_summary(read_text_file(path), path.string());
            CandidateSummary cand;
            cand.video_id = e.video_id;
            for (const auto& s : rec.sentences) {
                cand.intervals.emplace_back(s.start, s.end);
                cand.sentences.push_back(s.text);
            }
            Transcript t = load_transcript(e.transcript);
            validate(t);
            std::optional<TokenEmbeddings> emb;
            if (e.embeddings) emb = load_embeddings(*e.embeddings);
            r.report = evaluate_pair(cand, load_pgt(*e.pgt),
                                     evaluation_inputs(t, meta_of(e), emb ? &*emb : nullptr,
                                                       method.empty() ? rec.method : method));
            r.ok = true;
        } catch (const std::exception& ex) {
            r.error = ex.what();
        }
    });
    BatchResult batch = finish(std::move(results));
    fs::create_directories(config.output_dir);
    write_report_files(config.output_dir, batch.reports);
    return batch;
}

ConsistencyResult consistency_of(const std::vector<std::pair<std::string, std::vector<PgtSummary>>>& versions) {
    ConsistencyResult out;
    if (versions.empty()) return out;
    for (const auto& [id, list] : versions) {
        if (list.size() < 2)
            throw Error(Errc::TooFewVersions, id + ": consistency needs at least two pGT versions, got " +
                                                  std::to_string(list.size()));
        std::vector<std::vector<std::string>> tokens;
        for (const auto& p : list) {
            std::vector<std::string> sentences;
            for (const auto& e : p.entries) sentences.push_back(e.sentence);
            tokens.push_back(tokenize(join(sentences, " ")));
        }
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < tokens.size(); ++a)
            for (std::size_t b = a + 1; b < tokens.size(); ++b) {
                sum += jaccard(tokens[a], tokens[b]);
                ++pairs;
            }
        out.per_video.emplace_back(id, sum / static_cast<double>(pairs));
    }
    double total = 0.0;
    for (const auto& [_, v] : out.per_video) total += v;
    out.mean = total / static_cast<double>(out.per_video.size());
    return out;
}

ConsistencyResult run_consistency(const std::vector<ManifestEntry>& entries) {
    std::vector<std::pair<std::string, std::vector<PgtSummary>>> versions;
    for (const auto& e : entries) {
        std::vector<PgtSummary> list;
        for (const auto& p : e.pgt_versions) list.push_back(load_pgt(p));
        versions.emplace_back(e.video_id, std::move(list));
    }
    return consistency_of(versions);
}

std::string consistency_csv(const ConsistencyResult& result) {
    std::ostringstream out;
    out << "video_id,jaccard\n";
    char buf[32];
    for (const auto& [id, v] : result.per_video) {
        std::snprintf(buf, sizeof buf, "%.4f", v);
        out << id << ',' << buf << '\n';
    }
    if (!result.per_video.empty()) {
        std::snprintf(buf, sizeof buf, "%.4f", result.mean);
        out << "mean," << buf << '\n';
    }
    return out.str();
}

BatchResult dump_cues(const PipelineConfig& config) {
    validate(config);
    const auto entries = load_manifest(config.manifest);
    const TextResources resources = load_text_resources(config);
    std::vector<VideoResult> results(entries.size());
    std::vector<std::pair<std::string, std::string>> payload(entries.size());
    parallel_for(entries.size(), effective_workers(config), [&](std::size_t i) {
        VideoResult& r = results[i];
        r.video_id = entries[i].video_id;
        try {
            const VideoCues vc = extract_cues(entries[i], config, resources);
            payload[i] = {cues_to_json(vc.cues), bonus_words_to_json(vc.transcript, vc.bonus)};
            r.ok = true;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });
    const fs::path dir = config.output_dir / "cues";
    fs::create_directories(dir);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!results[i].ok) continue;
        write_text_file(dir / (entries[i].video_id + ".cues.json"), payload[i].first);
        write_text_file(dir / (entries[i].video_id + ".bonus.json"), payload[i].second);
    }
    return finish(std::move(results));
}

} // namespace cuefuse
