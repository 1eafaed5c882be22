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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cuefuse/text_cues.hpp"
#include "cuefuse/timeline.hpp"

namespace cuefuse {

/// Position of a word in a transcript.
struct WordRef {
    std::size_t sentence = 0;
    std::size_t word = 0;

    friend auto operator<=>(const WordRef&, const WordRef&) = default;
};

/// Strongest cue strength per modality that touched a word (indexed by Modality).
struct WordHits {
    std::array<std::optional<double>, 3> strength{};

    bool hit(Modality m) const noexcept { return strength[static_cast<std::size_t>(m)].has_value(); }
    std::set<Modality> modalities() const;
};

using WordAlignment = std::map<WordRef, WordHits>;

inline constexpr double kDefaultCoincidenceTolerance = 0.25;

/// A word is hit by modality M when its interval, widened by `tolerance`,
/// overlaps some cue of M with positive length. Zero-length cues count when
/// they fall inside the widened word.
WordAlignment align_words_to_cues(const Transcript& transcript, const std::vector<CueEvent>& cues,
                                  double tolerance = kDefaultCoincidenceTolerance);

struct BonusWord {
    std::string token;
    std::set<Modality> modalities;
    double weight = 1.0;
    std::vector<WordRef> occurrences; // occurrences that drew a cue

    friend bool operator==(const BonusWord&, const BonusWord&) = default;
};

/// 1 + 0.5 per modality beyond the first.
double bonus_weight(std::size_t modality_count) noexcept;

struct FusionOptions {
    /// Non-keyword tokens hit by two or more distinct non-textual modalities.
    bool promote_multi_nontextual = true;
    /// Non-keyword tokens hit by a single non-textual modality at or above strong_strength.
    bool promote_strong_single = true;
    double strong_strength = 2.5;
    /// Modalities whose cues were extracted. With a single active modality the
    /// coincidence test is impossible and that modality's significant words
    /// are used directly.
    std::set<Modality> active{Modality::Audio, Modality::Visual, Modality::Textual};
};

/// Keyword tokens that coincide with at least one audio or visual cue, plus
/// the optional non-keyword paths above. Stopwords never qualify. Output is
/// ordered by first occurrence.
std::vector<BonusWord> select_bonus_words(const Transcript& transcript, const WordAlignment& alignment,
                                          const KeywordSet& keywords, const FusionOptions& options = {});

/// JSON list of bonus words with modalities, weights and occurrence times.
std::string bonus_words_to_json(const Transcript& transcript, const std::vector<BonusWord>& bonus);

} // namespace cuefuse
