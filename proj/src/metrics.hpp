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
#include <string>
#include <string_view>
#include <vector>

#include "lexicon.hpp"

namespace xlwn {

using TokenList = std::vector<std::string>;

// Unigram BLEU on 0..100: clipped unigram precision against union-max
// reference counts, times the brevity penalty exp(1 - r/c) when c < r,
// where r is the reference length closest to c (ties -> shorter).
double bleu1(const TokenList& candidate, const std::vector<TokenList>& references,
             bool brevity_penalty = true);

// Exact-match METEOR (no stemming/paraphrase/synonymy modules), universal
// parameters alpha=0.9, beta=3, gamma=0.5. Alignment matches candidate
// tokens in order to the lowest unmatched reference occurrence.
double meteor_lite(const TokenList& candidate, const TokenList& reference);

// Character n-gram F-score. Whitespace is removed before counting; per
// order n the F_beta of n-gram precision/recall is computed and orders
// where neither side has any n-gram are excluded from the arithmetic mean.
double chrf(std::string_view candidate, std::string_view reference, std::uint32_t max_n = 6,
            double beta = 3.0);

struct EvalRow {
    LanguageCode language;
    double bleu1 = 0.0;
    double meteor = 0.0;
    double chrf = 0.0;
    std::uint64_t senses_evaluated = 0;

    // "lang<TAB>bleu1<TAB>meteor<TAB>chrf<TAB>senses", scores to 1 decimal.
    std::string to_tsv() const;
    std::string to_json() const;
};

struct EvaluateOptions {
    bool brevity_penalty = true;
};

// Corpus-level evaluation of a translated lexicon against a gold lexicon of
// the same language. Every hypothesis sense whose synset has gold lemmas is
// scored: BLEU-1 against all gold lemmas as references, METEOR/chrF against
// the first-listed gold lemma. Scores are per-sense means in synset order.
// Throws InvalidArgument when no sense overlaps.
EvalRow evaluate_lexicon(const MultilingualWordnet& hypothesis, const MultilingualWordnet& gold,
                         const LanguageCode& language, const EvaluateOptions& options = {});

}  // namespace xlwn
