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

#include <string>
#include <string_view>
#include <vector>

namespace cuefuse {

/// Lowercased word tokens. Punctuation is dropped, an apostrophe between two
/// letters is kept ("i'm"), and non-ASCII UTF-8 letters pass through.
std::vector<std::string> tokenize(std::string_view text);

/// Identifier of the bundled stopword list; bump when the list changes.
inline constexpr std::string_view kStopwordsVersion = "stopwords-en/1";

bool is_stopword(std::string_view token) noexcept;
const std::vector<std::string>& stopword_list();

std::string join(const std::vector<std::string>& parts, std::string_view sep);

} // namespace cuefuse
