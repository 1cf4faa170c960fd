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

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "disambig.hpp"

namespace xlwn {

struct TranslationCandidate {
    std::string target_phrase;      // aligned to the focus span
    std::string full_translation;   // optional, may be empty
    double model_score = 0.0;

    auto operator<=>(const TranslationCandidate&) const = default;
};

// A translation engine that can return a t-best list for a focus phrase
// inside a sentence, with the output aligned to the focus. Implementations
// must be deterministic for fixed inputs and safe for concurrent calls.
class TranslationBackend {
public:
    virtual ~TranslationBackend() = default;

    virtual LanguageCode target_language() const = 0;

    // At most t candidates, sorted by model_score descending. An empty list
    // means "untranslatable here".
    virtual std::vector<TranslationCandidate> translate(const TokenizedSentence& sentence,
                                                        TokenSpan focus, std::uint32_t t) const = 0;
};

// Deterministic reference backend over a Moses-style text phrase table
// (`source ||| target ||| probability` lines). Rows are selected by the
// longest table source phrase that occurs in the sentence and covers the
// focus span (ties: leftmost), mimicking a phrase-based decoder's
// preference for longer matching phrase pairs; a bare focus with no wider
// sentence context degenerates to a direct row lookup.
class PhraseTableBackend : public TranslationBackend {
public:
    struct Entry {
        std::string target;  // normalized (tokenized and re-joined)
        double probability = 0.0;
    };

    PhraseTableBackend(LanguageCode target_language,
                       std::map<std::string, std::vector<Entry>> table);

    static PhraseTableBackend parse(std::istream& in, const std::string& name,
                                    LanguageCode target_language);
    static PhraseTableBackend load(const std::string& path, LanguageCode target_language);

    LanguageCode target_language() const override { return target_language_; }
    std::vector<TranslationCandidate> translate(const TokenizedSentence& sentence, TokenSpan focus,
                                                std::uint32_t t) const override;

    const std::map<std::string, std::vector<Entry>>& table() const { return table_; }

private:
    LanguageCode target_language_;
    std::map<std::string, std::vector<Entry>> table_;  // source key -> entries sorted by prob desc
    std::size_t max_source_tokens_ = 0;
};

// t-best list for the focus span. Validates the span and t >= 1.
std::vector<TranslationCandidate> translate_with_focus(const TranslationBackend& backend,
                                                       const TokenizedSentence& sentence,
                                                       TokenSpan focus, std::uint32_t t);

// Pools every candidate from every context and picks the most frequent
// target phrase. Ties: greatest summed model score, then lexicographically
// smallest phrase. Empty pool -> nullopt.
std::optional<std::string> vote(const std::vector<std::vector<TranslationCandidate>>& per_context);

struct TranslatedSense {
    SynsetId synset;
    std::string source_lemma;
    std::string target_lemma;
    struct {
        std::uint32_t contexts_used = 0;
        std::uint32_t candidates_seen = 0;
        bool fallback = false;
    } provenance;
};

struct TranslateOptions {
    DisambigConfig disambig;
    std::uint32_t t = 5;
    bool direct_only = false;  // skip disambiguation, always bare-lemma translate
};

// Full per-sense pipeline: top-m disambiguated contexts -> per-context
// t-best -> vote; bare-lemma translation as fallback when no context (or no
// candidate) exists. nullopt = untranslated.
std::optional<TranslatedSense> translate_sense(const MultilingualWordnet& wn,
                                               const ParallelCorpus& corpus, const PhraseIndex& index,
                                               const TranslationBackend& backend, const Sense& sense,
                                               const TranslateOptions& options);

struct TranslateReport {
    std::uint64_t translated = 0;
    std::uint64_t fallback = 0;
    std::uint64_t untranslated = 0;
    std::vector<std::string> untranslated_ids;  // "synsetid:lemma", sorted

    std::string to_json() const;
};

struct TranslateResult {
    MultilingualWordnet lexicon;  // target-language rows only
    TranslateReport report;
};

// Translates every English sense; deterministic for fixed inputs and seed,
// for any job count.
TranslateResult translate_wordnet(const MultilingualWordnet& wn, const ParallelCorpus& corpus,
                                  const PhraseIndex& index, const TranslationBackend& backend,
                                  const TranslateOptions& options, unsigned jobs = 1);

}  // namespace xlwn
