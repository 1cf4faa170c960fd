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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "corpus.hpp"
#include "utf8.hpp"

#include <json.hpp>

namespace xlwn {

double bleu1(const TokenList& candidate, const std::vector<TokenList>& references,
             bool brevity_penalty) {
    if (references.empty()) throw InvalidArgument("bleu1 needs at least one reference");
    const std::size_t c = candidate.size();
    if (c == 0) return 0.0;

    std::map<std::string, std::size_t> cand_counts;
    for (const auto& token : candidate) cand_counts[token] += 1;

    std::map<std::string, std::size_t> max_ref_counts;
    for (const auto& ref : references) {
        std::map<std::string, std::size_t> counts;
        for (const auto& token : ref) counts[token] += 1;
        for (const auto& [token, count] : counts) {
            auto& best = max_ref_counts[token];
            best = std::max(best, count);
        }
    }

    std::size_t clipped = 0;
    for (const auto& [token, count] : cand_counts) {
        auto it = max_ref_counts.find(token);
        if (it != max_ref_counts.end()) clipped += std::min(count, it->second);
    }
    const double precision = static_cast<double>(clipped) / static_cast<double>(c);

    double bp = 1.0;
    if (brevity_penalty) {
        std::size_t r = references.front().size();
        for (const auto& ref : references) {
            const auto len = ref.size();
            const auto d_new = len > c ? len - c : c - len;
            const auto d_cur = r > c ? r - c : c - r;
            if (d_new < d_cur || (d_new == d_cur && len < r)) r = len;
        }
        if (c < r) bp = std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
    }
    return 100.0 * precision * bp;
}

double meteor_lite(const TokenList& candidate, const TokenList& reference) {
    constexpr double kAlpha = 0.9;
    constexpr double kBeta = 3.0;
    constexpr double kGamma = 0.5;

    // In-order greedy alignment: candidate token i -> lowest unmatched
    // reference position holding the same token.
    std::vector<bool> ref_used(reference.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (cand pos, ref pos)
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        for (std::size_t j = 0; j < reference.size(); ++j) {
            if (!ref_used[j] && reference[j] == candidate[i]) {
                ref_used[j] = true;
                matches.emplace_back(i, j);
                break;
            }
        }
    }

    const std::size_t m = matches.size();
    if (m == 0) return 0.0;

    const double precision = static_cast<double>(m) / static_cast<double>(candidate.size());
    const double recall = static_cast<double>(m) / static_cast<double>(reference.size());
    const double fmean = precision * recall / (kAlpha * precision + (1.0 - kAlpha) * recall);

    std::size_t chunks = 0;
    for (std::size_t k = 0; k < matches.size(); ++k) {
        if (k == 0 || matches[k].first != matches[k - 1].first + 1 ||
            matches[k].second != matches[k - 1].second + 1) {
            ++chunks;
        }
    }
    const double penalty =
        kGamma * std::pow(static_cast<double>(chunks) / static_cast<double>(m), kBeta);
    return 100.0 * fmean * (1.0 - penalty);
}

namespace {

// Character sequence with whitespace removed, as codepoints.
std::vector<char32_t> chrf_chars(std::string_view text) {
    std::vector<char32_t> out;
    for (char32_t cp : utf8::decode(text)) {
        if (!utf8::is_space(cp)) out.push_back(cp);
    }
    return out;
}

std::map<std::u32string, std::size_t> ngram_counts(const std::vector<char32_t>& chars,
                                                   std::size_t n) {
    std::map<std::u32string, std::size_t> counts;
    if (chars.size() < n) return counts;
    for (std::size_t i = 0; i + n <= chars.size(); ++i) {
        counts[std::u32string(chars.begin() + i, chars.begin() + i + n)] += 1;
    }
    return counts;
}

}  // namespace

double chrf(std::string_view candidate, std::string_view reference, std::uint32_t max_n,
            double beta) {
    if (max_n < 1) throw InvalidArgument("chrf max_n must be >= 1");
    if (beta <= 0.0) throw InvalidArgument("chrf beta must be > 0");

    const auto cand = chrf_chars(candidate);
    const auto ref = chrf_chars(reference);
    const double b2 = beta * beta;

    double total = 0.0;
    std::size_t effective_orders = 0;
    for (std::uint32_t n = 1; n <= max_n; ++n) {
        const std::size_t cand_total = cand.size() >= n ? cand.size() - n + 1 : 0;
        const std::size_t ref_total = ref.size() >= n ? ref.size() - n + 1 : 0;
        if (cand_total == 0 && ref_total == 0) continue;  // nothing to score at this order
        ++effective_orders;
        if (cand_total == 0 || ref_total == 0) continue;  // F undefined -> 0

        const auto cand_counts = ngram_counts(cand, n);
        const auto ref_counts = ngram_counts(ref, n);
        std::size_t overlap = 0;
        for (const auto& [gram, count] : cand_counts) {
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) overlap += std::min(count, it->second);
        }
        if (overlap == 0) continue;
        const double p = static_cast<double>(overlap) / static_cast<double>(cand_total);
        const double r = static_cast<double>(overlap) / static_cast<double>(ref_total);
        total += (1.0 + b2) * p * r / (b2 * p + r);
    }
    if (effective_orders == 0) return 0.0;
    return 100.0 * total / static_cast<double>(effective_orders);
}

namespace {

double round1(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

std::string EvalRow::to_tsv() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s\t%.1f\t%.1f\t%.1f\t%llu", language.str().c_str(), bleu1,
                  meteor, chrf, static_cast<unsigned long long>(senses_evaluated));
    return buf;
}

std::string EvalRow::to_json() const {
    nlohmann::json j;
    j["language"] = language.str();
    j["bleu1"] = round1(bleu1);
    j["meteor"] = round1(meteor);
    j["chrf"] = round1(chrf);
    j["senses"] = senses_evaluated;
    return j.dump();
}

EvalRow evaluate_lexicon(const MultilingualWordnet& hypothesis, const MultilingualWordnet& gold,
                         const LanguageCode& language, const EvaluateOptions& options) {
    EvalRow row;
    row.language = language;

    double bleu_sum = 0.0, meteor_sum = 0.0, chrf_sum = 0.0;
    // Synset-id order keeps the summation (and therefore the bytes of the
    // report) stable.
    for (const auto& [id, synset] : hypothesis.synsets()) {
        auto hit = synset.lemmas.find(language);
        if (hit == synset.lemmas.end() || hit->second.empty()) continue;
        const auto gold_lemmas = gold.lemmas_of(id, language);
        if (gold_lemmas.empty()) continue;

        std::vector<TokenList> refs;
        refs.reserve(gold_lemmas.size());
        for (const auto& lemma : gold_lemmas) refs.push_back(tokenize(lemma).tokens);
        const auto& primary_ref = gold_lemmas.front();  // most-frequent-member proxy
        const auto primary_tokens = refs.front();

        for (const auto& hyp_lemma : hit->second) {
            const auto hyp_tokens = tokenize(hyp_lemma).tokens;
            bleu_sum += bleu1(hyp_tokens, refs, options.brevity_penalty);
            meteor_sum += meteor_lite(hyp_tokens, primary_tokens);
            chrf_sum += chrf(hyp_lemma, primary_ref);
            row.senses_evaluated += 1;
        }
    }

    if (row.senses_evaluated == 0) {
        throw InvalidArgument("no overlapping senses between hypothesis and gold for language '" +
                              language.str() + "'");
    }
    const double n = static_cast<double>(row.senses_evaluated);
    row.bleu1 = bleu_sum / n;
    row.meteor = meteor_sum / n;
    row.chrf = chrf_sum / n;
    return row;
}

}  // namespace xlwn
