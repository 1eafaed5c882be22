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

// Command-line front end for the cuefuse batch pipeline.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuefuse/error.hpp"
#include "cuefuse/ingest.hpp"
#include "cuefuse/pipeline.hpp"
#include "cuefuse/simd.hpp"

namespace {

using namespace cuefuse;

struct Flags {
    std::string manifest;
    std::string output = "out";
    std::string config_file;
    std::vector<std::string> modalities;
    std::optional<double> lambda, delta, z_threshold, visual_k, min_conf, tolerance, ratio;
    std::optional<std::size_t> visual_window, workers;
    std::string diversity_mode, weights_mode;
    bool no_promote_multi = false;
    bool no_promote_strong = false;
    std::string summaries_dir;
    std::string method;
    std::string simd;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("-m,--manifest", f.manifest, "manifest JSON (array of per-video records)")->required();
    cmd->add_option("-o,--output", f.output, "output directory");
    cmd->add_option("--config", f.config_file, "JSON file overriding defaults");
    cmd->add_option("--workers", f.workers, "parallel videos (also CUEFUSE_WORKERS)");
    cmd->add_option("--simd", f.simd, "kernel set: scalar, avx2, neon");
}

void add_pipeline(CLI::App* cmd, Flags& f) {
    cmd->add_option("--modalities", f.modalities, "subset of text,audio,visual")->delimiter(',');
    cmd->add_option("--lambda", f.lambda, "threshold factor");
    cmd->add_option("--delta", f.delta, "diversity factor");
    cmd->add_option("--diversity-mode", f.diversity_mode, "literal or strict");
    cmd->add_option("--weights-mode", f.weights_mode, "uniform or weighted");
    cmd->add_option("--z-threshold", f.z_threshold, "audio z-score threshold");
    cmd->add_option("--visual-window", f.visual_window, "head-movement trailing window (frames)");
    cmd->add_option("--visual-k", f.visual_k, "head-movement std multiplier");
    cmd->add_option("--min-conf", f.min_conf, "emotion confidence gate");
    cmd->add_option("--tolerance", f.tolerance, "cue/word coincidence tolerance (s)");
    cmd->add_flag("--no-promote-multi", f.no_promote_multi, "disable the two-nontextual-modality promotion");
    cmd->add_flag("--no-promote-strong", f.no_promote_strong, "disable the strong single-cue promotion");
}

PipelineConfig build_config(const Flags& f) {
    PipelineConfig c;
    if (!f.config_file.empty()) apply_config_json(c, read_text_file(f.config_file), f.config_file);
    c.manifest = f.manifest;
    c.output_dir = f.output;
    if (const auto env = workers_from_env()) c.workers = *env;
    if (f.workers) c.workers = *f.workers;
    if (!f.modalities.empty()) {
        c.modalities.clear();
        for (const auto& m : f.modalities) c.modalities.insert(parse_modality(m));
    }
    if (f.lambda) c.summary.lambda = *f.lambda;
    if (f.delta) c.summary.delta = *f.delta;
    if (!f.diversity_mode.empty() || !f.weights_mode.empty()) {
        std::string overlay = "{";
        if (!f.diversity_mode.empty()) overlay += "\"diversity_mode\":\"" + f.diversity_mode + "\"";
        if (!f.weights_mode.empty())
            overlay += std::string(f.diversity_mode.empty() ? "" : ",") + "\"weights_mode\":\"" + f.weights_mode + "\"";
        apply_config_json(c, overlay + "}", "command line");
    }
    if (f.z_threshold) c.audio.thresholds.shared = *f.z_threshold;
    if (f.visual_window) c.visual.window = *f.visual_window;
    if (f.visual_k) c.visual.k = *f.visual_k;
    if (f.min_conf) c.visual.min_conf = *f.min_conf;
    if (f.tolerance) c.fusion_tolerance = *f.tolerance;
    if (f.ratio) c.baseline_ratio = *f.ratio;
    if (f.no_promote_multi) c.fusion.promote_multi_nontextual = false;
    if (f.no_promote_strong) c.fusion.promote_strong_single = false;
    if (!f.simd.empty() && !simd::select(f.simd))
        throw Error(Errc::InvalidArgument, "kernel set '" + f.simd + "' is unknown or unsupported on this CPU");
    validate(c);
    return c;
}

void print_batch(const BatchResult& batch, const std::string& where) {
    std::cout << batch.videos.size() - batch.failures << "/" << batch.videos.size() << " videos ok, "
              << batch.reports.size() << " evaluated; output in " << where << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cuefuse: multimodal cue fusion for extractive video summarization"};
    app.require_subcommand(1);
    Flags f;

    auto* summarize = app.add_subcommand("summarize", "summarize every video with fused cues");
    add_common(summarize, f);
    add_pipeline(summarize, f);

    auto* baseline = app.add_subcommand("baseline", "Edmundson baseline summaries");
    add_common(baseline, f);
    baseline->add_option("--ratio", f.ratio, "fraction of sentences to keep");

    auto* evaluate = app.add_subcommand("evaluate", "score existing summary JSONs against pGT");
    add_common(evaluate, f);
    evaluate->add_option("--summaries", f.summaries_dir, "directory holding <video_id>.summary.json")->required();
    evaluate->add_option("--method", f.method, "method tag for report rows (default: from the summaries)");

    auto* consistency = app.add_subcommand("consistency", "pairwise Jaccard across pGT versions");
    consistency->add_option("-m,--manifest", f.manifest, "manifest JSON with pgt_versions")->required();
    consistency->add_option("-o,--output", f.output, "output directory");

    auto* dump = app.add_subcommand("dump-cues", "write detected cues and bonus words");
    add_common(dump, f);
    add_pipeline(dump, f);

    CLI11_PARSE(app, argc, argv);

    try {
        if (consistency->parsed()) {
            const auto result = run_consistency(load_manifest(f.manifest));
            const std::string csv = consistency_csv(result);
            std::filesystem::create_directories(f.output);
            write_text_file(std::filesystem::path(f.output) / "consistency.csv", csv);
            std::cout << csv;
            return 0;
        }
        const PipelineConfig config = build_config(f);
        BatchResult batch;
        std::filesystem::path where = config.output_dir;
        if (summarize->parsed()) {
            batch = run_pipeline(config, Method::Multimodal);
            where /= to_string(Method::Multimodal);
        } else if (baseline->parsed()) {
            batch = run_baseline(config);
            where /= to_string(Method::Edmundson);
        } else if (evaluate->parsed()) {
            batch = run_evaluate(config, f.summaries_dir, f.method);
        } else {
            batch = dump_cues(config);
            where /= "cues";
        }
        print_batch(batch, where.string());
        return batch.exit_code();
    } catch (const Error& e) {
        std::cerr << "cuefuse: " << to_string(e.code()) << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cuefuse: " << e.what() << '\n';
        return 2;
    }
}
