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

#include "xlwn/xlwn.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "align.hpp"
#include "corpus.hpp"
#include "disambig.hpp"
#include "lexicon.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "translate.hpp"

using namespace xlwn;

namespace {

thread_local std::string g_last_error;

xlwn_status fail(xlwn_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
xlwn_status guarded(Fn&& fn) {
    try {
        fn();
        return XLWN_OK;
    } catch (const ParseError& e) {
        return fail(XLWN_EPARSE, e.what());
    } catch (const IoError& e) {
        return fail(XLWN_EIO, e.what());
    } catch (const InvalidArgument& e) {
        return fail(XLWN_EINVAL, e.what());
    } catch (const std::exception& e) {
        return fail(XLWN_ERUNTIME, e.what());
    } catch (...) {
        return fail(XLWN_ERUNTIME, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

xlwn_status require(bool ok, const char* what) {
    return ok ? XLWN_OK : fail(XLWN_EINVAL, std::string("null argument: ") + what);
}

const MultilingualWordnet& unwrap(const xlwn_wordnet* wn) {
    return *reinterpret_cast<const MultilingualWordnet*>(wn);
}
const ParallelCorpus& unwrap(const xlwn_corpus* corpus) {
    return *reinterpret_cast<const ParallelCorpus*>(corpus);
}
const PhraseIndex& unwrap(const xlwn_index* index) {
    return *reinterpret_cast<const PhraseIndex*>(index);
}
const PhraseTableBackend& unwrap(const xlwn_phrase_table* table) {
    return *reinterpret_cast<const PhraseTableBackend*>(table);
}
const align::Dataset& unwrap(const xlwn_dataset* dataset) {
    return *reinterpret_cast<const align::Dataset*>(dataset);
}
const align::EmbeddingTable& unwrap(const xlwn_embeddings* embeddings) {
    return *reinterpret_cast<const align::EmbeddingTable*>(embeddings);
}

std::vector<std::string> load_negation_words(const char* path) {
    if (!path) return align::kDefaultNegationWords;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open negation word list: ") + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] != '#') words.push_back(line);
    }
    return words;
}

std::string context_rows(const Sense& sense, const std::vector<DisambiguatedContext>& contexts) {
    std::string out;
    for (const auto& c : contexts) {
        out += sense.synset.str();
        out.push_back('\t');
        out += sense.lemma;
        out.push_back('\t');
        out += std::to_string(c.tuple_id);
        out.push_back('\t');
        out += std::to_string(c.focus.begin);
        out.push_back('\t');
        out += std::to_string(c.focus.end);
        out.push_back('\t');
        for (std::size_t i = 0; i < c.witnesses.size(); ++i) {
            if (i) out.push_back(',');
            out += c.witnesses[i].str();
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace

extern "C" {

const char* xlwn_version(void) { return XLWN_VERSION; }

const char* xlwn_last_error(void) { return g_last_error.c_str(); }

void xlwn_string_free(char* s) { std::free(s); }
void xlwn_ids_free(uint32_t* ids) { std::free(ids); }

/* ------------------------------------------------------------------ */

xlwn_status xlwn_wordnet_open(const char* lemmas_path, const char* definitions_path,
                              const char* relations_path, xlwn_wordnet** out) {
    if (auto s = require(lemmas_path && out, "lemmas_path/out")) return s;
    return guarded([&] {
        auto wn = std::make_unique<MultilingualWordnet>(MultilingualWordnet::load(
            lemmas_path, definitions_path ? definitions_path : "",
            relations_path ? relations_path : ""));
        *out = reinterpret_cast<xlwn_wordnet*>(wn.release());
    });
}

void xlwn_wordnet_close(xlwn_wordnet* wn) {
    delete reinterpret_cast<MultilingualWordnet*>(wn);
}

xlwn_status xlwn_wordnet_save(const xlwn_wordnet* wn, const char* lemmas_path,
                              const char* definitions_path, const char* relations_path) {
    if (auto s = require(wn && lemmas_path, "wn/lemmas_path")) return s;
    return guarded([&] {
        unwrap(wn).save(lemmas_path, definitions_path ? definitions_path : "",
                        relations_path ? relations_path : "");
    });
}

xlwn_status xlwn_wordnet_stats(const xlwn_wordnet* wn, const char* lang, uint64_t* synsets,
                               uint64_t* words, uint64_t* senses) {
    if (auto s = require(wn && lang && synsets && words && senses, "wn/lang/outputs")) return s;
    return guarded([&] {
        const auto stats = unwrap(wn).stats(LanguageCode(lang));
        *synsets = stats.synsets;
        *words = stats.words;
        *senses = stats.senses;
    });
}

xlwn_status xlwn_wordnet_languages(const xlwn_wordnet* wn, char** out) {
    if (auto s = require(wn && out, "wn/out")) return s;
    return guarded([&] {
        std::string joined;
        for (const auto& lang : unwrap(wn).languages()) {
            if (!joined.empty()) joined.push_back('\n');
            joined += lang.str();
        }
        *out = dup_string(joined);
    });
}

xlwn_status xlwn_wordnet_lemmas(const xlwn_wordnet* wn, const char* synset_id, const char* lang,
                                char** out) {
    if (auto s = require(wn && synset_id && lang && out, "wn/synset_id/lang/out")) return s;
    return guarded([&] {
        const auto lemmas = unwrap(wn).lemmas_of(SynsetId::parse(synset_id), LanguageCode(lang));
        std::string joined;
        for (const auto& lemma : lemmas) {
            if (!joined.empty()) joined.push_back('\n');
            joined += lemma;
        }
        *out = dup_string(joined);
    });
}

xlwn_status xlwn_wordnet_hypernym_closure(const xlwn_wordnet* wn, const char* synset_id,
                                          char** out) {
    if (auto s = require(wn && synset_id && out, "wn/synset_id/out")) return s;
    return guarded([&] {
        const auto closure = unwrap(wn).hypernym_closure(SynsetId::parse(synset_id));
        std::string joined;
        for (const auto& id : closure) {
            if (!joined.empty()) joined.push_back('\n');
            joined += id.str();
        }
        *out = dup_string(joined);
    });
}

/* ------------------------------------------------------------------ */

xlwn_status xlwn_corpus_open(const char* const* langs, const char* const* paths, size_t n_langs,
                             xlwn_corpus** out) {
    if (auto s = require(langs && paths && out, "langs/paths/out")) return s;
    return guarded([&] {
        std::vector<std::pair<LanguageCode, std::string>> files;
        files.reserve(n_langs);
        for (size_t i = 0; i < n_langs; ++i) {
            if (!langs[i] || !paths[i]) throw InvalidArgument("null language or path entry");
            files.emplace_back(LanguageCode(langs[i]), paths[i]);
        }
        auto corpus = std::make_unique<ParallelCorpus>(ParallelCorpus::load_files(files));
        *out = reinterpret_cast<xlwn_corpus*>(corpus.release());
    });
}

void xlwn_corpus_close(xlwn_corpus* corpus) {
    delete reinterpret_cast<ParallelCorpus*>(corpus);
}

uint64_t xlwn_corpus_size(const xlwn_corpus* corpus) {
    return corpus ? unwrap(corpus).size() : 0;
}

xlwn_status xlwn_tokenize(const char* text, char** out) {
    if (auto s = require(text && out, "text/out")) return s;
    return guarded([&] {
        std::string joined;
        for (const auto& token : tokenize(text).tokens) {
            if (!joined.empty()) joined.push_back('\n');
            joined += token;
        }
        *out = dup_string(joined);
    });
}

xlwn_status xlwn_index_build(const xlwn_corpus* corpus, uint32_t max_n, xlwn_index** out) {
    if (auto s = require(corpus && out, "corpus/out")) return s;
    return guarded([&] {
        auto index = std::make_unique<PhraseIndex>(PhraseIndex::build(unwrap(corpus), max_n));
        *out = reinterpret_cast<xlwn_index*>(index.release());
    });
}

xlwn_status xlwn_index_save(const xlwn_index* index, const char* path) {
    if (auto s = require(index && path, "index/path")) return s;
    return guarded([&] { unwrap(index).save_file(path); });
}

xlwn_status xlwn_index_load(const char* path, xlwn_index** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] {
        auto index = std::make_unique<PhraseIndex>(PhraseIndex::load_file(path));
        *out = reinterpret_cast<xlwn_index*>(index.release());
    });
}

void xlwn_index_close(xlwn_index* index) {
    delete reinterpret_cast<PhraseIndex*>(index);
}

xlwn_status xlwn_index_find(const xlwn_index* index, const char* lang, const char* phrase,
                            uint32_t** out_ids, size_t* out_n) {
    if (auto s = require(index && lang && phrase && out_ids && out_n, "index/lang/phrase/outputs"))
        return s;
    return guarded([&] {
        const auto ids = unwrap(index).find(LanguageCode(lang), phrase);
        *out_n = ids.size();
        if (ids.empty()) {
            *out_ids = nullptr;
            return;
        }
        *out_ids = static_cast<uint32_t*>(std::malloc(ids.size() * sizeof(uint32_t)));
        std::memcpy(*out_ids, ids.data(), ids.size() * sizeof(uint32_t));
    });
}

/* ------------------------------------------------------------------ */

xlwn_status xlwn_disambiguate_sense(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                    const xlwn_index* index, const char* synset_id,
                                    const char* lemma, uint32_t n_min, char** out_tsv) {
    if (auto s = require(wn && corpus && index && synset_id && lemma && out_tsv, "handles/args"))
        return s;
    return guarded([&] {
        const Sense sense{SynsetId::parse(synset_id), LanguageCode("en"), lemma};
        const auto contexts =
            disambiguated_contexts(unwrap(wn), unwrap(corpus), unwrap(index), sense, n_min);
        *out_tsv = dup_string(context_rows(sense, contexts));
    });
}

xlwn_status xlwn_disambiguate_all(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                  const xlwn_index* index, uint32_t n_min, uint32_t m,
                                  uint64_t seed, uint32_t jobs, char** out_tsv) {
    if (auto s = require(wn && corpus && index && out_tsv, "handles/out_tsv")) return s;
    return guarded([&] {
        const auto senses = unwrap(wn).senses(LanguageCode("en"));
        std::vector<std::string> rows(senses.size());
        parallel_for(senses.size(), jobs, [&](std::size_t i) {
            DisambigConfig cfg{n_min, m,
                               derive_seed(seed, senses[i].synset.str() + "\x1f" + senses[i].lemma)};
            auto contexts = select_top_m(
                disambiguated_contexts(unwrap(wn), unwrap(corpus), unwrap(index), senses[i], n_min),
                cfg);
            rows[i] = context_rows(senses[i], contexts);
        });
        std::string out;
        for (const auto& row : rows) out += row;
        *out_tsv = dup_string(out);
    });
}

/* ------------------------------------------------------------------ */

xlwn_status xlwn_phrase_table_open(const char* path, const char* target_lang,
                                   xlwn_phrase_table** out) {
    if (auto s = require(path && target_lang && out, "path/target_lang/out")) return s;
    return guarded([&] {
        auto table = std::make_unique<PhraseTableBackend>(
            PhraseTableBackend::load(path, LanguageCode(target_lang)));
        *out = reinterpret_cast<xlwn_phrase_table*>(table.release());
    });
}

void xlwn_phrase_table_close(xlwn_phrase_table* table) {
    delete reinterpret_cast<PhraseTableBackend*>(table);
}

xlwn_status xlwn_translate_sense(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                 const xlwn_index* index, const xlwn_phrase_table* table,
                                 const char* synset_id, const char* lemma, uint32_t n_min,
                                 uint32_t m, uint32_t t, uint64_t seed, int direct_only,
                                 char** out_target, int* out_fallback) {
    if (auto s = require(wn && corpus && index && table && synset_id && lemma && out_target,
                         "handles/args"))
        return s;
    return guarded([&] {
        TranslateOptions options;
        options.disambig = DisambigConfig{n_min, m, seed};
        options.t = t;
        options.direct_only = direct_only != 0;
        const Sense sense{SynsetId::parse(synset_id), LanguageCode("en"), lemma};
        const auto result =
            translate_sense(unwrap(wn), unwrap(corpus), unwrap(index), unwrap(table), sense, options);
        if (result) {
            *out_target = dup_string(result->target_lemma);
            if (out_fallback) *out_fallback = result->provenance.fallback ? 1 : 0;
        } else {
            *out_target = nullptr;
            if (out_fallback) *out_fallback = 0;
        }
    });
}

xlwn_status xlwn_translate_wordnet(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                   const xlwn_index* index, const xlwn_phrase_table* table,
                                   uint32_t n_min, uint32_t m, uint32_t t, uint64_t seed,
                                   int direct_only, uint32_t jobs, char** out_lexicon_tsv,
                                   char** out_report_json) {
    if (auto s = require(wn && corpus && index && table && out_lexicon_tsv && out_report_json,
                         "handles/outputs"))
        return s;
    return guarded([&] {
        TranslateOptions options;
        options.disambig = DisambigConfig{n_min, m, seed};
        options.t = t;
        options.direct_only = direct_only != 0;
        const auto result = translate_wordnet(unwrap(wn), unwrap(corpus), unwrap(index),
                                              unwrap(table), options, jobs);
        std::ostringstream lexicon;
        result.lexicon.serialize(lexicon, nullptr, nullptr);
        *out_lexicon_tsv = dup_string(lexicon.str());
        *out_report_json = dup_string(result.report.to_json());
    });
}

/* ------------------------------------------------------------------ */

xlwn_status xlwn_bleu1(const char* candidate, const char* const* references, size_t n_refs,
                       int brevity_penalty, double* out) {
    if (auto s = require(candidate && references && out, "candidate/references/out")) return s;
    return guarded([&] {
        std::vector<TokenList> refs;
        refs.reserve(n_refs);
        for (size_t i = 0; i < n_refs; ++i) {
            if (!references[i]) throw InvalidArgument("null reference entry");
            refs.push_back(tokenize(references[i]).tokens);
        }
        *out = bleu1(tokenize(candidate).tokens, refs, brevity_penalty != 0);
    });
}

xlwn_status xlwn_meteor(const char* candidate, const char* reference, double* out) {
    if (auto s = require(candidate && reference && out, "candidate/reference/out")) return s;
    return guarded(
        [&] { *out = meteor_lite(tokenize(candidate).tokens, tokenize(reference).tokens); });
}

xlwn_status xlwn_chrf(const char* candidate, const char* reference, uint32_t max_n, double beta,
                      double* out) {
    if (auto s = require(candidate && reference && out, "candidate/reference/out")) return s;
    return guarded([&] { *out = chrf(candidate, reference, max_n, beta); });
}

xlwn_status xlwn_evaluate_lexicon(const xlwn_wordnet* hypothesis, const xlwn_wordnet* gold,
                                  const char* lang, int brevity_penalty, double* out_bleu1,
                                  double* out_meteor, double* out_chrf, uint64_t* out_senses) {
    if (auto s = require(hypothesis && gold && lang && out_bleu1 && out_meteor && out_chrf &&
                             out_senses,
                         "handles/outputs"))
        return s;
    return guarded([&] {
        EvaluateOptions options;
        options.brevity_penalty = brevity_penalty != 0;
        const auto row =
            evaluate_lexicon(unwrap(hypothesis), unwrap(gold), LanguageCode(lang), options);
        *out_bleu1 = row.bleu1;
        *out_meteor = row.meteor;
        *out_chrf = row.chrf;
        *out_senses = row.senses_evaluated;
    });
}

/* ------------------------------------------------------------------ */

xlwn_status xlwn_dataset_open(const char* jsonl_path, xlwn_dataset** out) {
    if (auto s = require(jsonl_path && out, "jsonl_path/out")) return s;
    return guarded([&] {
        auto dataset = std::make_unique<align::Dataset>(align::Dataset::load_jsonl(jsonl_path));
        *out = reinterpret_cast<xlwn_dataset*>(dataset.release());
    });
}

void xlwn_dataset_close(xlwn_dataset* dataset) {
    delete reinterpret_cast<align::Dataset*>(dataset);
}

uint64_t xlwn_dataset_size(const xlwn_dataset* dataset) {
    return dataset ? unwrap(dataset).size() : 0;
}

xlwn_status xlwn_embeddings_open(const char* path, xlwn_embeddings** out) {
    if (auto s = require(path && out, "path/out")) return s;
    return guarded([&] {
        auto table = std::make_unique<align::EmbeddingTable>(align::EmbeddingTable::load(path));
        *out = reinterpret_cast<xlwn_embeddings*>(table.release());
    });
}

void xlwn_embeddings_close(xlwn_embeddings* embeddings) {
    delete reinterpret_cast<align::EmbeddingTable*>(embeddings);
}

xlwn_status xlwn_levenshtein(const char* a, const char* b, uint64_t* out) {
    if (auto s = require(a && b && out, "a/b/out")) return s;
    return guarded([&] { *out = align::levenshtein(a, b); });
}

xlwn_status xlwn_smoothed_jaccard(const char* left_text, const char* right_text, double alpha,
                                  double* out) {
    if (auto s = require(left_text && right_text && out, "left/right/out")) return s;
    return guarded([&] { *out = align::smoothed_jaccard(left_text, right_text, alpha); });
}

namespace {

align::FeatureConfig make_feature_config(int setting, double alpha, const char* lang,
                                         const xlwn_embeddings* embeddings,
                                         const char* negation_words_path) {
    align::FeatureConfig config;
    config.setting = setting;
    config.alpha = alpha;
    config.language = lang ? lang : "en";
    config.basic.negation_words = load_negation_words(negation_words_path);
    if (embeddings) config.embeddings = &unwrap(embeddings);
    return config;
}

std::vector<std::pair<std::vector<double>, int>> labeled_pairs(
    const align::Dataset& left, const align::Dataset& right, const align::GoldLinks& gold,
    const align::FeatureConfig& config) {
    std::vector<std::pair<std::vector<double>, int>> pairs;
    pairs.reserve(left.size() * right.size());
    for (const auto& l : left.entities()) {
        for (const auto& r : right.entities()) {
            const int label = gold.count({l.id, r.id}) ? 1 : 0;
            pairs.emplace_back(align::extract_features(l, r, config, &left, &right), label);
        }
    }
    return pairs;
}

}  // namespace

xlwn_status xlwn_train_alignment(const xlwn_dataset* left, const xlwn_dataset* right,
                                 const char* gold_tsv_path, int setting, double alpha,
                                 const char* lang, const xlwn_embeddings* embeddings,
                                 const char* negation_words_path, const char* model_out_path,
                                 char** out_report_json) {
    if (auto s = require(left && right && gold_tsv_path && model_out_path, "handles/paths")) return s;
    return guarded([&] {
        const auto gold = align::load_gold_links_file(gold_tsv_path);
        const auto config =
            make_feature_config(setting, alpha, lang, embeddings, negation_words_path);
        const auto schema = align::feature_schema(setting);
        align::TrainReport report;
        auto model = align::train_similarity_model(
            labeled_pairs(unwrap(left), unwrap(right), gold, config), schema, &report);
        model.setting = setting;
        model.alpha = alpha;
        model.language = config.language;
        model.save_file(model_out_path);
        if (out_report_json) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "{\"training_accuracy\": %.6f, \"iterations\": %u, \"degenerate\": %s}\n",
                          report.training_accuracy, report.iterations,
                          report.degenerate ? "true" : "false");
            *out_report_json = dup_string(buf);
        }
    });
}

xlwn_status xlwn_align(const xlwn_dataset* left, const xlwn_dataset* right, const char* model_path,
                       const xlwn_embeddings* embeddings, double threshold,
                       const char* negation_words_path, uint32_t jobs, char** out_tsv,
                       double* out_total_score) {
    if (auto s = require(left && right && model_path && out_tsv, "handles/model_path/out_tsv"))
        return s;
    return guarded([&] {
        const auto model = align::SimilarityModel::load_file(model_path);
        auto config = make_feature_config(model.setting, model.alpha, model.language.c_str(),
                                          embeddings, negation_words_path);
        const auto& ld = unwrap(left);
        const auto& rd = unwrap(right);
        if (config.setting >= 5 && !config.embeddings) {
            throw InvalidArgument("model setting " + std::to_string(config.setting) +
                                  " needs an embedding table");
        }

        std::vector<std::string> left_ids, right_ids;
        for (const auto& e : ld.entities()) left_ids.push_back(e.id);
        for (const auto& e : rd.entities()) right_ids.push_back(e.id);

        std::vector<double> sims(left_ids.size() * right_ids.size());
        parallel_for(left_ids.size(), jobs, [&](std::size_t i) {
            for (std::size_t j = 0; j < right_ids.size(); ++j) {
                sims[i * right_ids.size() + j] = align::predict_similarity(
                    model, align::extract_features(ld.entities()[i], rd.entities()[j], config, &ld,
                                                   &rd));
            }
        });
        const auto matching = align::greedy_match(
            left_ids, right_ids,
            [&](std::size_t i, std::size_t j) { return sims[i * right_ids.size() + j]; }, threshold,
            1);

        std::string out;
        char buf[64];
        for (const auto& link : matching.links) {
            out += link.left;
            out.push_back('\t');
            out += link.right;
            std::snprintf(buf, sizeof(buf), "\t%.6f\n", link.similarity);
            out += buf;
        }
        *out_tsv = dup_string(out);
        if (out_total_score) *out_total_score = matching.total_score;
    });
}

xlwn_status xlwn_kfold(const xlwn_dataset* left, const xlwn_dataset* right,
                       const char* gold_tsv_path, uint32_t k, uint64_t seed, int setting,
                       double threshold, double alpha, const char* lang,
                       const xlwn_embeddings* embeddings, const char* negation_words_path,
                       uint32_t jobs, char** out_report_json) {
    if (auto s = require(left && right && gold_tsv_path && out_report_json, "handles/paths/out"))
        return s;
    return guarded([&] {
        align::KFoldConfig config;
        config.k = k;
        config.seed = seed;
        config.threshold = threshold;
        config.jobs = jobs;
        config.features = make_feature_config(setting, alpha, lang, embeddings, negation_words_path);
        const auto gold = align::load_gold_links_file(gold_tsv_path);
        const auto report = align::kfold_evaluate(unwrap(left), unwrap(right), gold, config);
        *out_report_json = dup_string(report.to_json(config));
    });
}

}  // extern "C"
