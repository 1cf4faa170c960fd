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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace xlwn {

// Lowercase ISO-639 code ("en", "es", ...). Validated on construction.
class LanguageCode {
public:
    LanguageCode() = default;
    explicit LanguageCode(std::string code);

    const std::string& str() const { return code_; }
    bool empty() const { return code_.empty(); }
    auto operator<=>(const LanguageCode&) const = default;

private:
    std::string code_;
};

// Synset identifier, canonical text form "NNNNNNNN-p" with p in {n,v,a,r}.
struct SynsetId {
    std::uint32_t offset = 0;
    char pos = 'n';

    static SynsetId parse(std::string_view text);
    static std::optional<SynsetId> try_parse(std::string_view text);
    std::string str() const;

    auto operator<=>(const SynsetId&) const = default;
};

struct Sense {
    SynsetId synset;
    LanguageCode language;
    std::string lemma;

    auto operator<=>(const Sense&) const = default;
};

struct Relation {
    std::string kind;  // "hypernym", "hyponym", or any other tag
    SynsetId target;

    auto operator<=>(const Relation&) const = default;
};

inline constexpr const char* kHypernym = "hypernym";
inline constexpr const char* kHyponym = "hyponym";

struct Synset {
    SynsetId id;
    std::map<LanguageCode, std::string> definitions;
    std::vector<Relation> relations;
    // Lemma lists keep first-occurrence order and contain no duplicates.
    std::map<LanguageCode, std::vector<std::string>> lemmas;
};

struct WordnetStats {
    std::uint64_t synsets = 0;  // synsets with at least one lemma in the language
    std::uint64_t words = 0;    // distinct lemma strings
    std::uint64_t senses = 0;   // (synset, lemma) pairs
};

// Immutable after construction; all queries are pure and thread-safe.
class MultilingualWordnet {
public:
    MultilingualWordnet() = default;

    // Lemma rows are required; definitions/relations streams are optional.
    // Stream names are used in parse errors. Duplicate (synset, lang, lemma)
    // rows collapse silently; malformed rows throw ParseError.
    static MultilingualWordnet parse(std::istream& lemmas, const std::string& lemmas_name,
                                     std::istream* definitions, const std::string& definitions_name,
                                     std::istream* relations, const std::string& relations_name);

    static MultilingualWordnet load(const std::string& lemmas_path,
                                    const std::string& definitions_path = "",
                                    const std::string& relations_path = "");

    void add_lemma(SynsetId id, const LanguageCode& lang, const std::string& lemma);
    void add_definition(SynsetId id, const LanguageCode& lang, const std::string& text);
    void add_relation(SynsetId id, const std::string& kind, SynsetId target);

    const Synset* find(SynsetId id) const;
    const std::map<SynsetId, Synset>& synsets() const { return synsets_; }

    // Ingestion-ordered lemma list; empty for unknown synset or language.
    std::vector<std::string> lemmas_of(SynsetId id, const LanguageCode& lang) const;

    // Transitive closure over hypernym edges, excluding id itself.
    // Cycle-safe (visited set). Unknown relation targets are kept in the
    // closure but not expanded further.
    std::set<SynsetId> hypernym_closure(SynsetId id) const;

    WordnetStats stats(const LanguageCode& lang) const;

    // Relation targets that are not synsets of this wordnet. Strict
    // consumers reject wordnets where this is non-empty; queries here
    // tolerate them (closure keeps but does not expand them).
    std::vector<SynsetId> unresolved_relation_targets() const;

    std::vector<LanguageCode> languages() const;

    // All (synset, lemma) pairs of a language, sorted by (synset id, lemma).
    std::vector<Sense> senses(const LanguageCode& lang) const;

    // Writes the three-file TSV form. Re-parsing the output reproduces this
    // wordnet exactly.
    void serialize(std::ostream& lemmas, std::ostream* definitions, std::ostream* relations) const;
    void save(const std::string& lemmas_path,
              const std::string& definitions_path = "",
              const std::string& relations_path = "") const;

    bool empty() const { return synsets_.empty(); }
    std::size_t size() const { return synsets_.size(); }

private:
    std::map<SynsetId, Synset> synsets_;
};

}  // namespace xlwn
