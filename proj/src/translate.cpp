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

#include "translate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "parallel.hpp"
#include "rng.hpp"

#include <json.hpp>

namespace xlwn {

namespace {

const std::string kSeparator = " ||| ";

std::vector<std::string> split_moses(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto sep = line.find(kSeparator, start);
        if (sep == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, sep - start));
        start = sep + kSeparator.size();
    }
    return fields;
}

}  // namespace

PhraseTableBackend::PhraseTableBackend(LanguageCode target_language,
                                       std::map<std::string, std::vector<Entry>> table)
    : target_language_(std::move(target_language)), table_(std::move(table)) {
    for (auto& [source, entries] : table_) {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.probability != b.probability) return a.probability > b.probability;
            return a.target < b.target;
        });
        const auto tokens = static_cast<std::size_t>(std::count(source.begin(), source.end(), ' ')) + 1;
        max_source_tokens_ = std::max(max_source_tokens_, tokens);
    }
}

PhraseTableBackend PhraseTableBackend::parse(std::istream& in, const std::string& name,
                                             LanguageCode target_language) {
    std::map<std::string, std::vector<Entry>> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_moses(line);
        if (fields.size() != 3) {
            throw ParseError(name, lineno, "expected `source ||| target ||| probability`");
        }
        // Both sides are normalized with the corpus tokenizer so lookups and
        // votes operate on one surface form.
        const auto source_tokens = tokenize(fields[0]).tokens;
        const auto target_tokens = tokenize(fields[1]).tokens;
        if (source_tokens.empty()) throw ParseError(name, lineno, "empty source phrase");
        if (target_tokens.empty()) throw ParseError(name, lineno, "empty target phrase");
        std::string prob_field = fields[2];
        prob_field.erase(0, prob_field.find_first_not_of(" \t"));
        prob_field.erase(prob_field.find_last_not_of(" \t") + 1);
        char* end = nullptr;
        const double prob = std::strtod(prob_field.c_str(), &end);
        if (end != prob_field.c_str() + prob_field.size() || prob_field.empty() ||
            !std::isfinite(prob) || prob <= 0.0 || prob > 1.0) {
            throw ParseError(name, lineno, "probability must be in (0,1], got '" + fields[2] + "'");
        }
        const auto source = join_tokens(source_tokens, 0, source_tokens.size());
        const auto target = join_tokens(target_tokens, 0, target_tokens.size());
        auto& entries = table[source];
        bool merged = false;
        for (auto& e : entries) {
            if (e.target == target) {  // duplicate pair: keep the best score
                e.probability = std::max(e.probability, prob);
                merged = true;
                break;
            }
        }
        if (!merged) entries.push_back(Entry{target, prob});
    }
    return PhraseTableBackend(std::move(target_language), std::move(table));
}

PhraseTableBackend PhraseTableBackend::load(const std::string& path, LanguageCode target_language) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open phrase table: " + path);
    return parse(in, path, std::move(target_language));
}

std::vector<TranslationCandidate> PhraseTableBackend::translate(const TokenizedSentence& sentence,
                                                                TokenSpan focus,
                                                                std::uint32_t t) const {
    const auto& tokens = sentence.tokens;

    // Longest table row that occurs in the sentence and contains the focus;
    // ties are broken leftmost. The bare focus phrase is the shortest
    // admissible window, so a table without wider rows behaves as a plain
    // lookup.
    const std::vector<Entry>* row = nullptr;
    std::size_t window_begin = focus.begin, window_end = focus.end;
    const std::size_t max_len = std::min(max_source_tokens_, tokens.size());
    for (std::size_t len = max_len; len >= focus.end - focus.begin && row == nullptr; --len) {
        const std::size_t lo = focus.end >= len ? focus.end - len : 0;
        const std::size_t hi = std::min<std::size_t>(focus.begin, tokens.size() - len);
        for (std::size_t start = lo; start <= hi; ++start) {
            auto it = table_.find(join_tokens(tokens, start, start + len));
            if (it != table_.end()) {
                row = &it->second;
                window_begin = start;
                window_end = start + len;
                break;
            }
        }
        if (len == 0) break;
    }
    if (!row) return {};

    std::vector<TranslationCandidate> out;
    out.reserve(std::min<std::size_t>(t, row->size()));
    for (const auto& entry : *row) {
        if (out.size() == t) break;
        TranslationCandidate c;
        c.target_phrase = entry.target;
        c.model_score = entry.probability;
        // The sentence with the matched window replaced; enough for inspection.
        c.full_translation = join_tokens(tokens, 0, window_begin);
        if (!c.full_translation.empty()) c.full_translation.push_back(' ');
        c.full_translation += entry.target;
        const auto tail = join_tokens(tokens, window_end, tokens.size());
        if (!tail.empty()) {
            c.full_translation.push_back(' ');
            c.full_translation += tail;
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<TranslationCandidate> translate_with_focus(const TranslationBackend& backend,
                                                       const TokenizedSentence& sentence,
                                                       TokenSpan focus, std::uint32_t t) {
    if (t < 1) throw InvalidArgument("t must be >= 1");
    if (focus.begin >= focus.end || focus.end > sentence.tokens.size()) {
        throw InvalidArgument("focus span [" + std::to_string(focus.begin) + "," +
                              std::to_string(focus.end) + ") is invalid for a sentence of " +
                              std::to_string(sentence.tokens.size()) + " tokens");
    }
    auto candidates = backend.translate(sentence, focus, t);
    if (candidates.size() > t) candidates.resize(t);
    return candidates;
}

std::optional<std::string> vote(const std::vector<std::vector<TranslationCandidate>>& per_context) {
    // Scores per phrase are sorted before summing so the result is exactly
    // permutation-invariant (over contexts and within a context).
    std::map<std::string, std::vector<double>> pool;
    for (const auto& context : per_context) {
        for (const auto& candidate : context) {
            pool[candidate.target_phrase].push_back(candidate.model_score);
        }
    }
    if (pool.empty()) return std::nullopt;

    const std::string* best = nullptr;
    std::size_t best_count = 0;
    double best_sum = 0.0;
    for (auto& [phrase, scores] : pool) {
        std::sort(scores.begin(), scores.end(), std::greater<double>());
        double sum = 0.0;
        for (double s : scores) sum += s;
        if (!best || scores.size() > best_count ||
            (scores.size() == best_count && sum > best_sum)) {
            best = &phrase;
            best_count = scores.size();
            best_sum = sum;
        }
        // Lexicographic tie-break is implicit: map iteration is ascending and
        // later equal (count, sum) entries do not replace the incumbent.
    }
    return *best;
}

std::optional<TranslatedSense> translate_sense(const MultilingualWordnet& wn,
                                               const ParallelCorpus& corpus, const PhraseIndex& index,
                                               const TranslationBackend& backend, const Sense& sense,
                                               const TranslateOptions& options) {
    TranslatedSense result;
    result.synset = sense.synset;
    result.source_lemma = sense.lemma;

    std::vector<DisambiguatedContext> contexts;
    if (!options.direct_only) {
        DisambigConfig cfg = options.disambig;
        // Stable per-sense seed: independent of sense iteration order.
        cfg.seed = derive_seed(options.disambig.seed, sense.synset.str() + "\x1f" + sense.lemma);
        contexts = select_top_m(
            disambiguated_contexts(wn, corpus, index, sense, cfg.n_min), cfg);
    }

    std::optional<std::string> winner;
    if (!contexts.empty()) {
        std::vector<std::vector<TranslationCandidate>> per_context;
        per_context.reserve(contexts.size());
        std::uint32_t seen = 0;
        for (const auto& context : contexts) {
            const auto* sent = corpus.sentence(context.tuple_id, LanguageCode("en"));
            auto candidates = translate_with_focus(backend, *sent, context.focus, options.t);
            seen += static_cast<std::uint32_t>(candidates.size());
            per_context.push_back(std::move(candidates));
        }
        result.provenance.contexts_used = static_cast<std::uint32_t>(contexts.size());
        result.provenance.candidates_seen = seen;
        winner = vote(per_context);
    }

    if (!winner) {
        // Bare-lemma fallback: the lemma as its own sentence, whole-span focus.
        const auto bare = tokenize(sense.lemma);
        if (bare.tokens.empty()) return std::nullopt;
        const auto candidates = translate_with_focus(
            backend, bare, TokenSpan{0, static_cast<std::uint32_t>(bare.tokens.size())}, 1);
        if (candidates.empty()) return std::nullopt;
        winner = candidates.front().target_phrase;
        result.provenance.candidates_seen += 1;
        result.provenance.fallback = true;
    }

    result.target_lemma = *winner;
    return result;
}

std::string TranslateReport::to_json() const {
    nlohmann::json j;
    j["translated"] = translated;
    j["fallback"] = fallback;
    j["untranslated"] = untranslated;
    j["untranslated_ids"] = untranslated_ids;
    return j.dump(2) + "\n";
}

TranslateResult translate_wordnet(const MultilingualWordnet& wn, const ParallelCorpus& corpus,
                                  const PhraseIndex& index, const TranslationBackend& backend,
                                  const TranslateOptions& options, unsigned jobs) {
    const auto senses = wn.senses(LanguageCode("en"));
    std::vector<std::optional<TranslatedSense>> results(senses.size());
    parallel_for(senses.size(), jobs, [&](std::size_t i) {
        results[i] = translate_sense(wn, corpus, index, backend, senses[i], options);
    });

    TranslateResult out;
    const auto target = backend.target_language();
    for (std::size_t i = 0; i < senses.size(); ++i) {  // senses are (synset, lemma)-sorted
        if (results[i]) {
            out.lexicon.add_lemma(results[i]->synset, target, results[i]->target_lemma);
            out.report.translated += 1;
            if (results[i]->provenance.fallback) out.report.fallback += 1;
        } else {
            out.report.untranslated += 1;
            out.report.untranslated_ids.push_back(senses[i].synset.str() + ":" + senses[i].lemma);
        }
    }
    return out;
}

}  // namespace xlwn
