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

/*
 * xlwn - cross-lingual wordnet toolkit, C API.
 *
 * Builds translated wordnets from line-aligned parallel corpora with
 * witness-language sense disambiguation and t-best translation voting,
 * evaluates them (BLEU-1 / METEOR / chrF3), and links lexicon entries to
 * encyclopedic records with a lens/feature/greedy-constrained matcher.
 *
 * Conventions:
 *   - Every fallible function returns an xlwn_status; XLWN_OK is 0.
 *     On failure, xlwn_last_error() describes the problem (thread-local).
 *   - Objects are opaque handles, released with their xlwn_*_close().
 *   - Returned strings/arrays are heap-allocated; release them with
 *     xlwn_string_free() / xlwn_ids_free().
 *   - All text is UTF-8.
 */

#ifndef XLWN_XLWN_H
#define XLWN_XLWN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define XLWN_API __declspec(dllexport)
#else
#define XLWN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int xlwn_status;

enum {
    XLWN_OK = 0,
    XLWN_EINVAL = 1,  /* invalid argument / configuration */
    XLWN_EPARSE = 2,  /* malformed input data */
    XLWN_EIO = 3,     /* file not readable/writable */
    XLWN_ERUNTIME = 4 /* other runtime failure */
};

typedef struct xlwn_wordnet xlwn_wordnet;
typedef struct xlwn_corpus xlwn_corpus;
typedef struct xlwn_index xlwn_index;
typedef struct xlwn_phrase_table xlwn_phrase_table;
typedef struct xlwn_dataset xlwn_dataset;
typedef struct xlwn_embeddings xlwn_embeddings;

XLWN_API const char* xlwn_version(void);

/* Message for the most recent failure on this thread; never NULL. */
XLWN_API const char* xlwn_last_error(void);

XLWN_API void xlwn_string_free(char* s);
XLWN_API void xlwn_ids_free(uint32_t* ids);

/* ------------------------------------------------------------------ */
/* Wordnet (3-column TSV: synset_id<TAB>lang<TAB>lemma; optional
 * definitions and relations files in the same shape).                 */

XLWN_API xlwn_status xlwn_wordnet_open(const char* lemmas_path,
                                       const char* definitions_path, /* nullable */
                                       const char* relations_path,   /* nullable */
                                       xlwn_wordnet** out);
XLWN_API void xlwn_wordnet_close(xlwn_wordnet* wn);

XLWN_API xlwn_status xlwn_wordnet_save(const xlwn_wordnet* wn, const char* lemmas_path,
                                       const char* definitions_path, /* nullable */
                                       const char* relations_path /* nullable */);

XLWN_API xlwn_status xlwn_wordnet_stats(const xlwn_wordnet* wn, const char* lang,
                                        uint64_t* synsets, uint64_t* words, uint64_t* senses);

/* Newline-joined language codes with at least one lemma. */
XLWN_API xlwn_status xlwn_wordnet_languages(const xlwn_wordnet* wn, char** out);

/* Newline-joined lemmas in ingestion order (empty string when none). */
XLWN_API xlwn_status xlwn_wordnet_lemmas(const xlwn_wordnet* wn, const char* synset_id,
                                         const char* lang, char** out);

/* Newline-joined synset ids transitively reachable over hypernym edges. */
XLWN_API xlwn_status xlwn_wordnet_hypernym_closure(const xlwn_wordnet* wn, const char* synset_id,
                                                   char** out);

/* ------------------------------------------------------------------ */
/* Parallel corpus + phrase index                                      */

/* One line-aligned UTF-8 file per language; langs[i] names paths[i].
 * Requires >= 2 languages including "en". */
XLWN_API xlwn_status xlwn_corpus_open(const char* const* langs, const char* const* paths,
                                      size_t n_langs, xlwn_corpus** out);
XLWN_API void xlwn_corpus_close(xlwn_corpus* corpus);
XLWN_API uint64_t xlwn_corpus_size(const xlwn_corpus* corpus);

/* Newline-joined tokens of one normalized sentence. */
XLWN_API xlwn_status xlwn_tokenize(const char* text, char** out);

XLWN_API xlwn_status xlwn_index_build(const xlwn_corpus* corpus, uint32_t max_n, xlwn_index** out);
XLWN_API xlwn_status xlwn_index_save(const xlwn_index* index, const char* path);
XLWN_API xlwn_status xlwn_index_load(const char* path, xlwn_index** out);
XLWN_API void xlwn_index_close(xlwn_index* index);

/* Sorted ids of tuples containing the phrase contiguously. The phrase is
 * tokenized with the corpus tokenizer; phrases longer than the indexed
 * max_n fail with XLWN_EINVAL. *out_ids may be NULL when *out_n == 0. */
XLWN_API xlwn_status xlwn_index_find(const xlwn_index* index, const char* lang, const char* phrase,
                                     uint32_t** out_ids, size_t* out_n);

/* ------------------------------------------------------------------ */
/* Disambiguation                                                      */

/* TSV rows (no header):
 * synset_id<TAB>lemma<TAB>tuple_id<TAB>span_start<TAB>span_end<TAB>witness_langs
 * with witness languages comma-separated and spans end-exclusive.
 *
 * xlwn_disambiguate_sense lists every context of one English sense with at
 * least n_min witness languages. xlwn_disambiguate_all emits the top-m
 * contexts of every English sense (seeded random tie-breaking). */
XLWN_API xlwn_status xlwn_disambiguate_sense(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                             const xlwn_index* index, const char* synset_id,
                                             const char* lemma, uint32_t n_min, char** out_tsv);
XLWN_API xlwn_status xlwn_disambiguate_all(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                           const xlwn_index* index, uint32_t n_min, uint32_t m,
                                           uint64_t seed, uint32_t jobs, char** out_tsv);

/* ------------------------------------------------------------------ */
/* Translation                                                         */

/* Moses-style text phrase table: `source ||| target ||| probability`,
 * probabilities in (0,1]. */
XLWN_API xlwn_status xlwn_phrase_table_open(const char* path, const char* target_lang,
                                            xlwn_phrase_table** out);
XLWN_API void xlwn_phrase_table_close(xlwn_phrase_table* table);

/* Translates one English sense. *out_target is NULL when untranslatable;
 * *out_fallback is 1 when the bare-lemma fallback produced the result. */
XLWN_API xlwn_status xlwn_translate_sense(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                          const xlwn_index* index, const xlwn_phrase_table* table,
                                          const char* synset_id, const char* lemma, uint32_t n_min,
                                          uint32_t m, uint32_t t, uint64_t seed, int direct_only,
                                          char** out_target, int* out_fallback);

/* Translates every English sense. out_lexicon_tsv is a lemmas-file TSV of
 * the target language; out_report_json counts
 * {translated, fallback, untranslated, untranslated_ids}. */
XLWN_API xlwn_status xlwn_translate_wordnet(const xlwn_wordnet* wn, const xlwn_corpus* corpus,
                                            const xlwn_index* index, const xlwn_phrase_table* table,
                                            uint32_t n_min, uint32_t m, uint32_t t, uint64_t seed,
                                            int direct_only, uint32_t jobs, char** out_lexicon_tsv,
                                            char** out_report_json);

/* ------------------------------------------------------------------ */
/* Evaluation metrics (whitespace-tokenized inputs; scores 0..100)     */

XLWN_API xlwn_status xlwn_bleu1(const char* candidate, const char* const* references, size_t n_refs,
                                int brevity_penalty, double* out);
XLWN_API xlwn_status xlwn_meteor(const char* candidate, const char* reference, double* out);
XLWN_API xlwn_status xlwn_chrf(const char* candidate, const char* reference, uint32_t max_n,
                               double beta, double* out);

/* Corpus-level scores of a hypothesis lexicon against a gold lexicon. */
XLWN_API xlwn_status xlwn_evaluate_lexicon(const xlwn_wordnet* hypothesis, const xlwn_wordnet* gold,
                                           const char* lang, int brevity_penalty, double* bleu1,
                                           double* meteor, double* chrf, uint64_t* senses);

/* ------------------------------------------------------------------ */
/* Alignment                                                           */

/* JSON-lines entity file; one object per line:
 * {"id": ..., "labels": {lang: [...]}, "descriptions": {lang: [...]},
 *  "relations": [[kind, id], ...], "type": ...}. */
XLWN_API xlwn_status xlwn_dataset_open(const char* jsonl_path, xlwn_dataset** out);
XLWN_API void xlwn_dataset_close(xlwn_dataset* dataset);
XLWN_API uint64_t xlwn_dataset_size(const xlwn_dataset* dataset);

/* Text embedding table, `word v1 .. vd` per line, uniform dimension. */
XLWN_API xlwn_status xlwn_embeddings_open(const char* path, xlwn_embeddings** out);
XLWN_API void xlwn_embeddings_close(xlwn_embeddings* embeddings);

XLWN_API xlwn_status xlwn_levenshtein(const char* a, const char* b, uint64_t* out);
XLWN_API xlwn_status xlwn_smoothed_jaccard(const char* left_text, const char* right_text,
                                           double alpha, double* out);

/* Trains the similarity classifier on gold links (TSV left<TAB>right) and
 * writes a versioned model file. Settings 1..8 select the feature ladder;
 * embeddings are required for settings 5..8. out_report_json carries
 * training accuracy and a degenerate flag (may be NULL). */
XLWN_API xlwn_status xlwn_train_alignment(const xlwn_dataset* left, const xlwn_dataset* right,
                                          const char* gold_tsv_path, int setting, double alpha,
                                          const char* lang,
                                          const xlwn_embeddings* embeddings,     /* nullable */
                                          const char* negation_words_path,       /* nullable */
                                          const char* model_out_path,
                                          char** out_report_json /* nullable */);

/* Greedy constrained matching with a trained model. out_tsv rows are
 * `left_id<TAB>right_id<TAB>similarity` (6 decimals); *out_total_score may
 * be NULL. */
XLWN_API xlwn_status xlwn_align(const xlwn_dataset* left, const xlwn_dataset* right,
                                const char* model_path,
                                const xlwn_embeddings* embeddings, /* nullable */
                                double threshold,
                                const char* negation_words_path, /* nullable */
                                uint32_t jobs, char** out_tsv, double* out_total_score);

/* Seeded k-fold cross-validation; JSON report with per-fold and mean
 * precision/recall/F1. */
XLWN_API xlwn_status xlwn_kfold(const xlwn_dataset* left, const xlwn_dataset* right,
                                const char* gold_tsv_path, uint32_t k, uint64_t seed, int setting,
                                double threshold, double alpha, const char* lang,
                                const xlwn_embeddings* embeddings, /* nullable */
                                const char* negation_words_path,   /* nullable */
                                uint32_t jobs, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* XLWN_XLWN_H */
