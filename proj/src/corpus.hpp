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
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexicon.hpp"

namespace xlwn {

struct TokenizedSentence {
    std::vector<std::string> tokens;
    std::string raw;
};

// Lowercases (Unicode-aware), splits on whitespace, strips leading/trailing
// punctuation per token, drops empty tokens. Deterministic.
TokenizedSentence tokenize(std::string_view text);

// Joins tokens with single spaces; the key form used by the phrase index.
std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end);

struct ParallelTuple {
    std::uint32_t id = 0;
    std::vector<TokenizedSentence> sentences;  // parallel to corpus language order
};

// Line-aligned multilingual corpus. The first language is the pivot
// (English). Immutable after load.
class ParallelCorpus {
public:
    // One stream per language; every stream must have the same line count.
    // Requires >= 2 languages including "en".
    static ParallelCorpus load(const std::vector<std::pair<LanguageCode, std::istream*>>& files);

    // Convenience: file naming corpus.<lang>.txt or explicit paths.
    static ParallelCorpus load_files(const std::vector<std::pair<LanguageCode, std::string>>& paths);

    const std::vector<LanguageCode>& languages() const { return languages_; }
    const std::vector<ParallelTuple>& tuples() const { return tuples_; }
    std::size_t size() const { return tuples_.size(); }

    int language_index(const LanguageCode& lang) const;  // -1 when absent
    const TokenizedSentence* sentence(std::uint32_t tuple_id, const LanguageCode& lang) const;

private:
    std::vector<LanguageCode> languages_;  // "en" first, then the rest sorted
    std::vector<ParallelTuple> tuples_;
};

// Inverted index over contiguous token n-grams (n <= max_n), per language.
// Posting lists are sorted, duplicate-free tuple ids.
class PhraseIndex {
public:
    static PhraseIndex build(const ParallelCorpus& corpus, std::uint32_t max_n);

    std::uint32_t max_n() const { return max_n_; }

    // Tokenizes the phrase with the corpus tokenizer and returns the ids of
    // tuples containing it contiguously. Phrases longer than max_n throw
    // InvalidArgument (the index cannot answer them; rebuild with larger
    // max_n). Empty phrases return {}.
    std::vector<std::uint32_t> find(const LanguageCode& lang, std::string_view phrase) const;

    // Pre-tokenized variant used by the disambiguation loop.
    const std::vector<std::uint32_t>* find_tokens(const LanguageCode& lang,
                                                  const std::vector<std::string>& tokens) const;

    // Versioned little-endian binary format; byte-identical for equal input.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static PhraseIndex load(std::istream& in, const std::string& name);
    static PhraseIndex load_file(const std::string& path);

    const std::map<LanguageCode, std::map<std::string, std::vector<std::uint32_t>>>& postings() const {
        return postings_;
    }

private:
    std::uint32_t max_n_ = 0;
    std::map<LanguageCode, std::map<std::string, std::vector<std::uint32_t>>> postings_;
};

}  // namespace xlwn
