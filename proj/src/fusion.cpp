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

#include "cuefuse/fusion.hpp"

#include <algorithm>

#include <json.hpp>

#include "cuefuse/error.hpp"
#include "cuefuse/text.hpp"

namespace cuefuse {

std::set<Modality> WordHits::modalities() const {
    std::set<Modality> out;
    for (auto m : {Modality::Audio, Modality::Visual, Modality::Textual})
        if (hit(m)) out.insert(m);
    return out;
}

namespace {

bool coincides(const TimeInterval& widened, const TimeInterval& cue) noexcept {
    if (cue.length() == 0.0) return widened.start() <= cue.start() && cue.start() <= widened.end();
    return overlap(widened, cue) > 0.0;
}

} // namespace

WordAlignment align_words_to_cues(const Transcript& transcript, const std::vector<CueEvent>& cues, double tolerance) {
    if (!(tolerance >= 0.0)) throw Error(Errc::InvalidArgument, "coincidence tolerance must be >= 0");
    WordAlignment out;
    for (std::size_t si = 0; si < transcript.sentences.size(); ++si) {
        const auto& words = transcript.sentences[si].words;
        for (std::size_t wi = 0; wi < words.size(); ++wi) {
            const TimeInterval widened = words[wi].interval.expanded(tolerance);
            WordHits hits;
            bool any = false;
            for (const auto& cue : cues) {
                if (!coincides(widened, cue.time)) continue;
                auto& slot = hits.strength[static_cast<std::size_t>(cue.modality)];
                slot = slot ? std::max(*slot, cue.strength) : cue.strength;
                any = true;
            }
            if (any) out.emplace(WordRef{si, wi}, hits);
        }
    }
    return out;
}

double bonus_weight(std::size_t modality_count) noexcept {
    return 1.0 + 0.5 * static_cast<double>(modality_count > 0 ? modality_count - 1 : 0);
}

std::vector<BonusWord> select_bonus_words(const Transcript& transcript, const WordAlignment& alignment,
                                          const KeywordSet& keywords, const FusionOptions& options) {
    if (options.active.empty()) throw Error(Errc::InvalidArgument, "no active modality");
    const bool single = options.active.size() == 1;
    const Modality only = *options.active.begin();

    struct Candidate {
        std::set<Modality> modalities;
        std::vector<WordRef> occurrences;
        WordRef first;
    };
    std::map<std::string, Candidate> found;

    const auto consider = [&](const std::string& tok, const WordRef& ref, const std::set<Modality>& mods) {
        auto [it, inserted] = found.try_emplace(tok);
        if (inserted) it->second.first = ref;
        it->second.modalities.insert(mods.begin(), mods.end());
        if (it->second.occurrences.empty() || it->second.occurrences.back() != ref) it->second.occurrences.push_back(ref);
    };

    if (single && only == Modality::Textual) {
        // Text-only: every keyword occurrence counts.
        for (std::size_t si = 0; si < transcript.sentences.size(); ++si) {
            const auto& words = transcript.sentences[si].words;
            for (std::size_t wi = 0; wi < words.size(); ++wi)
                for (const auto& tok : words[wi].tokens)
                    if (keywords.contains(tok) && !is_stopword(tok)) consider(tok, {si, wi}, {Modality::Textual});
        }
    } else {
        for (const auto& [ref, hits] : alignment) {
            const auto& word = transcript.sentences.at(ref.sentence).words.at(ref.word);
            std::set<Modality> nontextual;
            std::size_t strong = 0;
            for (auto m : {Modality::Audio, Modality::Visual}) {
                if (!hits.hit(m) || !options.active.count(m)) continue;
                nontextual.insert(m);
                if (*hits.strength[static_cast<std::size_t>(m)] >= options.strong_strength) ++strong;
            }
            if (nontextual.empty()) continue;
            for (const auto& tok : word.tokens) {
                if (is_stopword(tok)) continue;
                if (single) {
                    consider(tok, ref, nontextual);
                } else if (keywords.contains(tok) && options.active.count(Modality::Textual)) {
                    std::set<Modality> mods = nontextual;
                    mods.insert(Modality::Textual);
                    consider(tok, ref, mods);
                } else if ((options.promote_multi_nontextual && nontextual.size() >= 2) ||
                           (options.promote_strong_single && strong >= 1)) {
                    consider(tok, ref, nontextual);
                }
            }
        }
    }

    std::vector<std::pair<WordRef, BonusWord>> ordered;
    for (auto& [tok, c] : found) {
        BonusWord b;
        b.token = tok;
        b.weight = bonus_weight(c.modalities.size());
        b.modalities = std::move(c.modalities);
        b.occurrences = std::move(c.occurrences);
        std::sort(b.occurrences.begin(), b.occurrences.end());
        ordered.emplace_back(b.occurrences.front(), std::move(b));
    }
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<BonusWord> out;
    out.reserve(ordered.size());
    for (auto& [_, b] : ordered) out.push_back(std::move(b));
    return out;
}

std::string bonus_words_to_json(const Transcript& transcript, const std::vector<BonusWord>& bonus) {
    using nlohmann::json;
    json arr = json::array();
    for (const auto& b : bonus) {
        json mods = json::array();
        for (auto m : b.modalities) mods.push_back(to_string(m));
        json occ = json::array();
        for (const auto& ref : b.occurrences) {
            const auto& w = transcript.sentences.at(ref.sentence).words.at(ref.word);
            occ.push_back({{"sentence", ref.sentence}, {"start", w.interval.start()}, {"end", w.interval.end()}});
        }
        arr.push_back({{"token", b.token}, {"modalities", mods}, {"weight", b.weight}, {"occurrences", occ}});
    }
    return arr.dump(2) + "\n";
}

} // namespace cuefuse
