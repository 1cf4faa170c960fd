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

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "disambig.hpp"
#include "lexicon.hpp"
#include "rng.hpp"

namespace testutil {

using namespace xlwn;

inline MultilingualWordnet wordnet_from_tsv(const std::string& lemmas,
                                            const std::string& definitions = "",
                                            const std::string& relations = "") {
    std::istringstream lemma_stream(lemmas);
    std::istringstream def_stream(definitions);
    std::istringstream rel_stream(relations);
    return MultilingualWordnet::parse(lemma_stream, "lemmas", //
                                      definitions.empty() ? nullptr : &def_stream, "definitions",
                                      relations.empty() ? nullptr : &rel_stream, "relations");
}

inline ParallelCorpus corpus_from_lines(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& files) {
    std::vector<std::istringstream> streams;
    streams.reserve(files.size());
    for (const auto& [lang, lines] : files) {
        std::string text;
        for (const auto& line : lines) {
            text += line;
            text.push_back('\n');
        }
        streams.emplace_back(text);
    }
    std::vector<std::pair<LanguageCode, std::istream*>> inputs;
    for (std::size_t i = 0; i < files.size(); ++i) {
        inputs.emplace_back(LanguageCode(files[i].first), &streams[i]);
    }
    return ParallelCorpus::load(inputs);
}

// --- seeded random fixtures -------------------------------------------------

struct RandomCorpusSpec {
    std::size_t tuples = 200;
    std::size_t languages = 3;  // including en
    std::size_t vocab = 30;
    std::size_t min_len = 3;
    std::size_t max_len = 10;
};

inline std::string vocab_word(const std::string& lang, std::size_t i) {
    return lang + "w" + std::to_string(i);
}

// Each language has its own vocabulary so cross-language token collisions
// cannot blur witness checks.
inline ParallelCorpus random_corpus(Rng& rng, const RandomCorpusSpec& spec) {
    std::vector<std::string> langs{"en"};
    for (std::size_t l = 1; l < spec.languages; ++l) langs.push_back("x" + std::string(1, char('a' + l)));
    std::vector<std::pair<std::string, std::vector<std::string>>> files;
    for (const auto& lang : langs) files.emplace_back(lang, std::vector<std::string>{});
    for (std::size_t t = 0; t < spec.tuples; ++t) {
        for (auto& [lang, lines] : files) {
            const auto len = spec.min_len + rng.bounded(spec.max_len - spec.min_len + 1);
            std::string line;
            for (std::size_t k = 0; k < len; ++k) {
                if (k) line.push_back(' ');
                line += vocab_word(lang, rng.bounded(spec.vocab));
            }
            lines.push_back(line);
        }
    }
    return corpus_from_lines(files);
}

// Synthetic wordnet over the corpus vocabularies: every synset gets one or
// two lemmas per language, sometimes multi-token expressions (occasionally
// longer than a typical index max_n).
inline MultilingualWordnet random_wordnet(Rng& rng, const ParallelCorpus& corpus,
                                          std::size_t synsets, std::size_t vocab) {
    MultilingualWordnet wn;
    for (std::size_t s = 0; s < synsets; ++s) {
        const SynsetId id{static_cast<std::uint32_t>(s + 1), 'n'};
        for (const auto& lang : corpus.languages()) {
            const auto n_lemmas = 1 + rng.bounded(2);
            for (std::size_t k = 0; k < n_lemmas; ++k) {
                std::size_t extra = 0;
                if (rng.bounded(10) == 0) {
                    extra = 4;  // exceeds the usual max_n of 4
                } else if (rng.bounded(4) == 0) {
                    extra = 1;
                }
                std::string lemma = vocab_word(lang.str(), rng.bounded(vocab));
                for (std::size_t e = 0; e < extra; ++e) {
                    lemma += " " + vocab_word(lang.str(), rng.bounded(vocab));
                }
                wn.add_lemma(id, lang, lemma);
            }
        }
    }
    return wn;
}

// --- brute-force oracles ----------------------------------------------------

inline bool contains_contiguous(const std::vector<std::string>& tokens,
                                const std::vector<std::string>& phrase) {
    if (phrase.empty() || tokens.size() < phrase.size()) return false;
    for (std::size_t s = 0; s + phrase.size() <= tokens.size(); ++s) {
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (tokens[s + k] != phrase[k]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

// Linear scan over every tuple; the independent ground truth for find_phrase.
inline std::vector<std::uint32_t> scan_phrase(const ParallelCorpus& corpus,
                                              const LanguageCode& lang, const std::string& phrase) {
    std::vector<std::uint32_t> out;
    const auto needle = tokenize(phrase).tokens;
    const int li = corpus.language_index(lang);
    if (li < 0 || needle.empty()) return out;
    for (const auto& tuple : corpus.tuples()) {
        if (contains_contiguous(tuple.sentences[static_cast<std::size_t>(li)].tokens, needle)) {
            out.push_back(tuple.id);
        }
    }
    return out;
}

// Nested scan over tuples x synset lemmas x languages; the independent
// ground truth for disambiguated_contexts.
inline std::vector<DisambiguatedContext> scan_contexts(const MultilingualWordnet& wn,
                                                       const ParallelCorpus& corpus,
                                                       const Sense& sense, std::uint32_t n_min) {
    std::vector<DisambiguatedContext> out;
    const auto focus = tokenize(sense.lemma).tokens;
    if (focus.empty()) return out;
    const LanguageCode english("en");
    for (const auto& tuple : corpus.tuples()) {
        const auto& en_tokens = tuple.sentences[0].tokens;
        std::vector<TokenSpan> spans;
        for (std::size_t s = 0; s + focus.size() <= en_tokens.size(); ++s) {
            bool match = true;
            for (std::size_t k = 0; k < focus.size(); ++k) {
                if (en_tokens[s + k] != focus[k]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                spans.push_back(TokenSpan{static_cast<std::uint32_t>(s),
                                          static_cast<std::uint32_t>(s + focus.size())});
            }
        }
        if (spans.empty()) continue;

        std::vector<LanguageCode> witnesses;
        for (std::size_t li = 0; li < corpus.languages().size(); ++li) {
            const auto& lang = corpus.languages()[li];
            if (lang == english) continue;
            bool witnessed = false;
            for (const auto& lemma : wn.lemmas_of(sense.synset, lang)) {
                if (contains_contiguous(tuple.sentences[li].tokens, tokenize(lemma).tokens)) {
                    witnessed = true;
                    break;
                }
            }
            if (witnessed) witnesses.push_back(lang);
        }
        if (witnesses.size() < n_min) continue;
        for (const auto& span : spans) {
            out.push_back(DisambiguatedContext{tuple.id, span, witnesses});
        }
    }
    return out;
}

}  // namespace testutil
