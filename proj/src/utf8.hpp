/*
 * Copyright 2026 the xlwn authors
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

// Minimal UTF-8 utilities: decoding, encoding and a lowercase map wide
// enough for the European scripts this toolkit targets (Latin incl.
// Latin-1/Extended-A, Greek, Cyrillic). Invalid bytes decode to U+FFFD.

namespace xlwn::utf8 {

std::vector<char32_t> decode(std::string_view text);
std::string encode(const std::vector<char32_t>& codepoints);
void append(std::string& out, char32_t cp);

char32_t to_lower(char32_t cp);
bool is_space(char32_t cp);
bool is_punct(char32_t cp);

// Lowercases a whole UTF-8 string.
std::string lower(std::string_view text);

}  // namespace xlwn::utf8
