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

#include "disambig.hpp"

#include <algorithm>

#include "rng.hpp"

namespace xlwn {

namespace {

bool contains_contiguous(const std::vector<std::string>& tokens,
                         const std::vector<std::string>& phrase) {
    if (phrase.empty() || tokens.size() < phrase.size()) return false;
    for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (tokens[start + k] != phrase[k]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

// Ids of tuples whose sentence in `lang` contains the token phrase. Served
// by the index when the phrase fits its n-gram bound, by a direct scan
// otherwise, so results never depend on max_n.
std::vector<std::uint32_t> tuples_containing(const ParallelCorpus& corpus, const PhraseIndex& index,
                                             const LanguageCode& lang,
                                             const std::vector<std::string>& tokens) {
    if (tokens.size() <= index.max_n()) {
        const auto* list = index.find_tokens(lang, tokens);
        return list ? *list : std::vector<std::uint32_t>{};
    }
    std::vector<std::uint32_t> ids;
    const int li = corpus.language_index(lang);
    if (li < 0) return ids;
    for (const auto& tuple : corpus.tuples()) {
        if (contains_contiguous(tuple.sentences[static_cast<std::size_t>(li)].tokens, tokens)) {
            ids.push_back(tuple.id);
        }
    }
    return ids;
}

// Sorted union of the occurrence lists of every lemma the synset has in one
// language. A tuple id in the result means "this language witnesses the
// synset in that tuple".
std::vector<std::uint32_t> witness_tuples(const MultilingualWordnet& wn,
                                          const ParallelCorpus& corpus, const PhraseIndex& index,
                                          SynsetId synset, const LanguageCode& lang) {
    std::vector<std::uint32_t> ids;
    for (const auto& lemma : wn.lemmas_of(synset, lang)) {
        const auto tokens = tokenize(lemma).tokens;
        if (tokens.empty()) continue;
        const auto list = tuples_containing(corpus, index, lang, tokens);
        ids.insert(ids.end(), list.begin(), list.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<TokenSpan> occurrences(const std::vector<std::string>& tokens,
                                   const std::vector<std::string>& phrase) {
    std::vector<TokenSpan> spans;
    if (phrase.empty() || tokens.size() < phrase.size()) return spans;
    for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (tokens[start + k] != phrase[k]) {
                match = false;
                break;
            }
        }
        if (match) {
            spans.push_back(TokenSpan{static_cast<std::uint32_t>(start),
                                      static_cast<std::uint32_t>(start + phrase.size())});
        }
    }
    return spans;
}

}  // namespace

std::vector<DisambiguatedContext> disambiguated_contexts(const MultilingualWordnet& wn,
                                                         const ParallelCorpus& corpus,
                                                         const PhraseIndex& index,
                                                         const Sense& sense,
                                                         std::uint32_t n_min) {
    if (sense.language.str() != "en") {
        throw InvalidArgument("disambiguation runs over English senses, got language '" +
                              sense.language.str() + "'");
    }
    if (n_min < 1) throw InvalidArgument("n_min must be >= 1");

    std::vector<DisambiguatedContext> out;
    const auto focus_tokens = tokenize(sense.lemma).tokens;
    if (focus_tokens.empty()) return out;

    const LanguageCode english("en");
    const auto candidates = tuples_containing(corpus, index, english, focus_tokens);
    if (candidates.empty()) return out;

    // Per non-English language, the tuples where some lemma of the synset occurs.
    std::vector<std::pair<LanguageCode, std::vector<std::uint32_t>>> witness_sets;
    for (const auto& lang : corpus.languages()) {
        if (lang == english) continue;
        witness_sets.emplace_back(lang, witness_tuples(wn, corpus, index, sense.synset, lang));
    }

    for (const auto tuple_id : candidates) {
        std::vector<LanguageCode> witnesses;
        for (const auto& [lang, ids] : witness_sets) {
            if (std::binary_search(ids.begin(), ids.end(), tuple_id)) witnesses.push_back(lang);
        }
        if (witnesses.size() < n_min) continue;
        const auto* sent = corpus.sentence(tuple_id, english);
        for (const auto& span : occurrences(sent->tokens, focus_tokens)) {
            out.push_back(DisambiguatedContext{tuple_id, span, witnesses});
        }
    }
    return out;
}

std::vector<DisambiguatedContext> select_top_m(std::vector<DisambiguatedContext> contexts,
                                               const DisambigConfig& cfg) {
    if (cfg.m < 1) throw InvalidArgument("m must be >= 1");

    // One random key per context, drawn in input order so the permutation
    // depends only on (input, seed).
    Rng rng(cfg.seed);
    std::vector<std::pair<std::uint64_t, std::size_t>> keys(contexts.size());
    for (std::size_t i = 0; i < contexts.size(); ++i) keys[i] = {rng.next(), i};

    std::vector<std::size_t> order(contexts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const int sa = contexts[a].score(), sb = contexts[b].score();
        if (sa != sb) return sa > sb;
        if (keys[a].first != keys[b].first) return keys[a].first < keys[b].first;
        return contexts[a] < contexts[b];
    });

    std::vector<DisambiguatedContext> out;
    const std::size_t take = std::min<std::size_t>(cfg.m, contexts.size());
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(std::move(contexts[order[i]]));
    return out;
}

}  // namespace xlwn
