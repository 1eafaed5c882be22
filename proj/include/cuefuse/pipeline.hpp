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

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cuefuse/audio_cues.hpp"
#include "cuefuse/fusion.hpp"
#include "cuefuse/metrics.hpp"
#include "cuefuse/summarizer.hpp"
#include "cuefuse/text_cues.hpp"
#include "cuefuse/visual_cues.hpp"

namespace cuefuse {

/// One manifest record. Relative paths are resolved against the manifest's directory.
struct ManifestEntry {
    std::string video_id;
    std::filesystem::path transcript;
    std::optional<std::filesystem::path> audio;
    std::optional<std::filesystem::path> features;
    std::optional<std::filesystem::path> pose;
    std::optional<std::filesystem::path> emotion;
    std::optional<std::filesystem::path> entities;
    std::optional<std::filesystem::path> pgt;
    std::vector<std::filesystem::path> pgt_versions;
    std::optional<std::filesystem::path> embeddings;
    double fps = 0.0;
    double duration = 0.0;
    std::optional<std::int64_t> frame_count;
    std::optional<std::string> source; // original video, for the cut script
};

std::vector<ManifestEntry> parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir,
                                          const std::string& origin = "<memory>");
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const std::vector<ManifestEntry>& entries);

struct PipelineConfig {
    std::filesystem::path manifest;
    std::filesystem::path output_dir = "out";
    std::set<Modality> modalities{Modality::Audio, Modality::Visual, Modality::Textual};
    SummaryConfig summary;
    AudioCueConfig audio;
    VisualCueConfig visual;
    TextCueConfig text;
    double fusion_tolerance = 0.25;
    FusionOptions fusion; // `active` is overwritten from `modalities`
    double baseline_ratio = 0.3;
    std::size_t workers = 1;
    std::optional<std::filesystem::path> lexicon;
    std::optional<std::filesystem::path> gazetteer;
};

void validate(const PipelineConfig& config);

/// Overlay keys of a JSON object onto `config`. Unknown keys are rejected.
void apply_config_json(PipelineConfig& config, const std::string& json_text, const std::string& origin = "<memory>");

/// Worker count from CUEFUSE_WORKERS, if set and valid.
std::optional<std::size_t> workers_from_env();

enum class Method { Multimodal, Edmundson };
const char* to_string(Method m) noexcept;

/// Cues and bonus words of one video, before summarization.
struct VideoCues {
    Transcript transcript;
    VideoMeta meta;
    std::vector<CueEvent> cues;
    KeywordSet keywords;
    std::vector<BonusWord> bonus;
};

/// Lexicon and gazetteer shared by every video of a batch.
struct TextResources {
    Lexicon lexicon;
    Gazetteer gazetteer;
};

TextResources load_text_resources(const PipelineConfig& config);

VideoCues extract_cues(const ManifestEntry& entry, const PipelineConfig& config, const TextResources& resources);

struct VideoResult {
    std::string video_id;
    bool ok = false;
    std::string error;
    std::string summary_json;
    std::string srt;
    std::string cutlist_json;
    std::string cut_script;
    std::optional<MetricsReport> report;
    bool degenerate = false;
};

VideoResult process_video(const ManifestEntry& entry, const PipelineConfig& config, const TextResources& resources,
                          Method method);

struct BatchResult {
    std::vector<VideoResult> videos; // manifest order
    std::vector<MetricsReport> reports;
    std::size_t failures = 0;

    int exit_code() const noexcept { return failures ? 1 : 0; }
};

/// Runs `fn(i)` for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Summarize every manifest entry and write artifacts under output_dir/<method>/.
BatchResult run_pipeline(const PipelineConfig& config, Method method = Method::Multimodal);
BatchResult run_baseline(const PipelineConfig& config);

/// Score previously written summary JSONs (summaries_dir/<video_id>.summary.json).
BatchResult run_evaluate(const PipelineConfig& config, const std::filesystem::path& summaries_dir,
                         const std::string& method);

struct ConsistencyResult {
    std::vector<std::pair<std::string, double>> per_video;
    double mean = 0.0;
};

/// Mean pairwise token-set Jaccard across pGT versions, per video and corpus.
ConsistencyResult run_consistency(const std::vector<ManifestEntry>& entries);
ConsistencyResult consistency_of(const std::vector<std::pair<std::string, std::vector<PgtSummary>>>& versions);
std::string consistency_csv(const ConsistencyResult& result);

/// Write cues and bonus words per video under output_dir/cues/.
BatchResult dump_cues(const PipelineConfig& config);

} // namespace cuefuse
