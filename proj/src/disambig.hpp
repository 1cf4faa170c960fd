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

#include <cstdint>
#include <vector>

#include "corpus.hpp"
#include "lexicon.hpp"

namespace xlwn {

struct TokenSpan {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;  // exclusive

    auto operator<=>(const TokenSpan&) const = default;
};

// An English sentence evidencing one sense: the focus occurrence of the
// lemma plus every non-English corpus language whose side contains a known
// translation of the same synset. Score = number of witness languages.
struct DisambiguatedContext {
    std::uint32_t tuple_id = 0;
    TokenSpan focus;
    std::vector<LanguageCode> witnesses;  // sorted, never contains "en"

    int score() const { return static_cast<int>(witnesses.size()); }

    auto operator<=>(const DisambiguatedContext&) const = default;
};

struct DisambigConfig {
    std::uint32_t n_min = 2;  // required witness languages
    std::uint32_t m = 5;      // contexts used downstream
    std::uint64_t seed = 0;   // tie-breaking
};

// All contexts for an English sense with at least n_min witnesses, one per
// focus occurrence, ordered by (tuple id, focus begin).
std::vector<DisambiguatedContext> disambiguated_contexts(const MultilingualWordnet& wn,
                                                         const ParallelCorpus& corpus,
                                                         const PhraseIndex& index,
                                                         const Sense& sense,
                                                         std::uint32_t n_min);

// Top m by score; equal scores are permuted by a seeded RNG (deterministic
// for a fixed seed) before truncation.
std::vector<DisambiguatedContext> select_top_m(std::vector<DisambiguatedContext> contexts,
                                               const DisambigConfig& cfg);

}  // namespace xlwn
