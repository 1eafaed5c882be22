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

#include "cuefuse/text.hpp"

#include <algorithm>
#include <array>

namespace cuefuse {

namespace {

// The classic 179-entry English function-word list.
constexpr std::array<std::string_view, 179> kStopwords = {
    "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an", "and", "any",
    "are", "aren", "aren't", "as", "at", "be", "because", "been", "before", "being", "below",
    "between", "both", "but", "by", "can", "couldn", "couldn't", "d", "did", "didn", "didn't",
    "do", "does", "doesn", "doesn't", "doing", "don", "don't", "down", "during", "each", "few",
    "for", "from", "further", "had", "hadn", "hadn't", "has", "hasn", "hasn't", "have", "haven",
    "haven't", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
    "i", "if", "in", "into", "is", "isn", "isn't", "it", "it's", "its", "itself", "just", "ll",
    "m", "ma", "me", "mightn", "mightn't", "more", "most", "mustn", "mustn't", "my", "myself",
    "needn", "needn't", "no", "nor", "not", "now", "o", "of", "off", "on", "once", "only", "or",
    "other", "our", "ours", "ourselves", "out", "over", "own", "re", "s", "same", "shan",
    "shan't", "she", "she's", "should", "should've", "shouldn", "shouldn't", "so", "some",
    "such", "t", "than", "that", "that'll", "the", "their", "theirs", "them", "themselves",
    "then", "there", "these", "they", "this", "those", "through", "to", "too", "under", "until",
    "up", "ve", "very", "was", "wasn", "wasn't", "we", "were", "weren", "weren't", "what",
    "when", "where", "which", "while", "who", "whom", "why", "will", "with", "won", "won't",
    "wouldn", "wouldn't", "y", "you", "you'd", "you'll", "you're", "you've", "your", "yours",
    "yourself", "yourselves",
};

const std::vector<std::string>& sorted_stopwords() {
    static const std::vector<std::string> words = [] {
        std::vector<std::string> v(kStopwords.begin(), kStopwords.end());
        std::sort(v.begin(), v.end());
        return v;
    }();
    return words;
}

bool is_ascii_alnum(unsigned char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Length of the UTF-8 sequence starting with `lead`, 0 for a stray continuation byte.
std::size_t utf8_length(unsigned char lead) noexcept {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 0;
}

// U+2018/U+2019/U+02BC are folded to an ASCII apostrophe.
bool is_apostrophe_at(std::string_view text, std::size_t i, std::size_t& width) noexcept {
    if (text[i] == '\'') {
        width = 1;
        return true;
    }
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(text[i + 2]) == 0x98 ||
         static_cast<unsigned char>(text[i + 2]) == 0x99)) {
        width = 3;
        return true;
    }
    if (i + 1 < text.size() && static_cast<unsigned char>(text[i]) == 0xCA &&
        static_cast<unsigned char>(text[i + 1]) == 0xBC) {
        width = 2;
        return true;
    }
    return false;
}

// Non-ASCII code points count as word characters except general punctuation
// (U+2000..U+206F), which covers dashes, quotes and ellipses.
bool is_word_sequence(std::string_view seq) noexcept {
    const auto lead = static_cast<unsigned char>(seq[0]);
    if (seq.size() == 1) return is_ascii_alnum(lead);
    if (seq.size() == 3 && lead == 0xE2) {
        const auto b1 = static_cast<unsigned char>(seq[1]);
        if (b1 == 0x80 || b1 == 0x81) return false;
    }
    // U+00A0..U+00BF: Latin-1 symbols and punctuation.
    if (seq.size() == 2 && lead == 0xC2) return false;
    return true;
}

void append_lower(std::string& out, std::string_view seq) {
    if (seq.size() == 1) {
        const char c = seq[0];
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
        return;
    }
    // Latin-1 capitals U+00C0..U+00DE (except U+00D7) map to +0x20.
    if (seq.size() == 2 && static_cast<unsigned char>(seq[0]) == 0xC3) {
        const auto b1 = static_cast<unsigned char>(seq[1]);
        if (b1 >= 0x80 && b1 <= 0x9E && b1 != 0x97) {
            out.push_back(seq[0]);
            out.push_back(static_cast<char>(b1 + 0x20));
            return;
        }
    }
    out.append(seq);
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t width = 0;
        if (is_apostrophe_at(text, i, width)) {
            // Keep only when flanked by word characters on both sides.
            const std::size_t next = i + width;
            bool next_is_word = false;
            if (next < text.size()) {
                const std::size_t len = utf8_length(static_cast<unsigned char>(text[next]));
                if (len != 0 && next + len <= text.size())
                    next_is_word = is_word_sequence(text.substr(next, len));
            }
            if (!current.empty() && next_is_word) {
                current.push_back('\'');
            } else if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            i = next;
            continue;
        }
        std::size_t len = utf8_length(static_cast<unsigned char>(text[i]));
        if (len == 0 || i + len > text.size()) {
            // Malformed byte: treat as a separator.
            len = 1;
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            i += len;
            continue;
        }
        const std::string_view seq = text.substr(i, len);
        if (is_word_sequence(seq)) {
            append_lower(current, seq);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
        i += len;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

bool is_stopword(std::string_view token) noexcept {
    const auto& words = sorted_stopwords();
    return std::binary_search(words.begin(), words.end(), token,
                              [](std::string_view a, std::string_view b) { return a < b; });
}

const std::vector<std::string>& stopword_list() { return sorted_stopwords(); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

} // namespace cuefuse
