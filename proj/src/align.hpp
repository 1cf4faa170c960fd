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
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "lexicon.hpp"

namespace xlwn::align {

// One record of a dataset to be linked: a synset, an encyclopedia article,
// a catalogue row. Ids are unique within their dataset.
struct Entity {
    std::string id;
    std::map<std::string, std::vector<std::string>> labels;        // language -> labels
    std::map<std::string, std::vector<std::string>> descriptions;  // language -> descriptions
    std::vector<std::pair<std::string, std::string>> relations;    // (kind, target id)
    std::string type;  // optional tag, e.g. part-of-speech
};

// Indexed entity list with id lookup and a hypernym graph.
class Dataset {
public:
    static Dataset parse_jsonl(std::istream& in, const std::string& name);
    static Dataset load_jsonl(const std::string& path);

    void add(Entity entity);  // throws on duplicate id

    const std::vector<Entity>& entities() const { return entities_; }
    const Entity* find(const std::string& id) const;
    std::size_t size() const { return entities_.size(); }

    // Ids reachable over hypernym edges, excluding the start id; cycle-safe.
    std::vector<std::string> hypernym_closure(const std::string& id) const;

private:
    std::vector<Entity> entities_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

unsigned levenshtein(std::string_view a, std::string_view b);

enum class LensKind {
    MostSimilarLabels,
    ConcatenatedLabels,
    Description,
    Superterms,
};

struct Facet {
    std::string left_text;
    std::string right_text;
    LensKind lens = LensKind::MostSimilarLabels;
};

// Extracts a comparable text pair from an entity pair; nullopt when either
// side lacks the needed material.
//
//   MostSimilarLabels  the label pair with the lowest Levenshtein distance
//   ConcatenatedLabels all labels space-joined, ingestion order
//   Description        first description of each entity
//   Superterms         min-Levenshtein pair between the left entity's
//                      transitive hypernym labels and the right entity's
//                      direct hypernym (category) labels
//
// Superterms needs the datasets for graph traversal.
std::optional<Facet> apply_lens(LensKind kind, const Entity& left, const Entity& right,
                                const std::string& language, const Dataset* left_dataset = nullptr,
                                const Dataset* right_dataset = nullptr);

inline const std::vector<std::string> kDefaultNegationWords = {"not", "never", "no",
                                                               "none", "nor", "n't"};

struct BasicFeatureOptions {
    std::vector<std::string> negation_words = kDefaultNegationWords;
};

// The ten string features of a facet, in schema order:
// jaccard/dice/containment over word sets and over character sets, token
// length ratio, average word length ratio, negation agreement, number
// agreement. An absent facet reads as all zeros.
std::vector<double> extract_basic_features(const std::optional<Facet>& facet,
                                           const BasicFeatureOptions& options = {});

// J_sigma(A,B) = s(|A&B|) / (s(|A|) + s(|B|) - s(|A&B|)), s(x) = 1 - exp(-alpha*x),
// over the word sets of the two texts. Tends to plain Jaccard as alpha -> 0.
double smoothed_jaccard(std::string_view left_text, std::string_view right_text, double alpha);

class EmbeddingTable {
public:
    static EmbeddingTable parse(std::istream& in, const std::string& name);
    static EmbeddingTable load(const std::string& path);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return vectors_.size(); }
    const std::vector<double>* find(const std::string& word) const;

private:
    std::size_t dimension_ = 0;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

// mean_i max_j cosine(left word i, right word j); words missing from the
// table contribute 0. Empty left text -> 0.
double embedding_similarity(const std::optional<Facet>& facet, const EmbeddingTable& table);

// Which feature vector a setting produces. Settings follow the evaluation
// ladder: 1 = concatenated-label Jaccard only, 2 = smoothed Jaccard only,
// 3 = +label string features, 4 = +description string features,
// 5 = +description embedding similarity, 7 = +superterm string features;
// 6 and 8 append a reserved always-zero slot (an external neural similarity
// this build does not ship).
std::vector<std::string> feature_schema(int setting);

struct FeatureConfig {
    int setting = 4;
    double alpha = 1.0;  // smoothed Jaccard alpha
    std::string language = "en";
    BasicFeatureOptions basic;
    const EmbeddingTable* embeddings = nullptr;  // needed for settings 5..8
};

std::vector<double> extract_features(const Entity& left, const Entity& right,
                                     const FeatureConfig& config, const Dataset* left_dataset,
                                     const Dataset* right_dataset);

// Logistic scorer over a fixed feature schema, trained by full-batch
// gradient descent with a fixed schedule; deterministic.
struct SimilarityModel {
    std::vector<std::string> feature_names;
    std::vector<double> means;    // standardization
    std::vector<double> scales;
    std::vector<double> weights;
    double bias = 0.0;
    int setting = 0;
    double alpha = 1.0;
    std::string language = "en";

    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static SimilarityModel load(std::istream& in, const std::string& name);
    static SimilarityModel load_file(const std::string& path);
};

struct TrainReport {
    double training_accuracy = 0.0;
    std::uint32_t iterations = 0;
    bool degenerate = false;  // learned nothing (all weights ~ 0)
};

// Requires both classes present. Class weights balance label frequencies so
// duplicated data trains to the identical model.
SimilarityModel train_similarity_model(const std::vector<std::pair<std::vector<double>, int>>& pairs,
                                       const std::vector<std::string>& feature_names,
                                       TrainReport* report = nullptr);

// Squashed linear score in [0,1]. Throws on schema size mismatch.
double predict_similarity(const SimilarityModel& model, const std::vector<double>& features);

struct Link {
    std::string left;
    std::string right;
    double similarity = 0.0;
};

struct Matching {
    std::vector<Link> links;
    double total_score = 0.0;
};

// Greedy constrained matching: pairs with sim >= threshold are visited in
// descending similarity (ties: lexicographic ids) and added when neither
// endpoint is linked yet. The score is the sum of accepted similarities.
Matching greedy_match(const std::vector<std::string>& left_ids,
                      const std::vector<std::string>& right_ids,
                      const std::function<double(std::size_t, std::size_t)>& sim, double threshold,
                      unsigned jobs = 1);

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

using GoldLinks = std::set<std::pair<std::string, std::string>>;

GoldLinks load_gold_links(std::istream& in, const std::string& name);
GoldLinks load_gold_links_file(const std::string& path);

PrfScores evaluate_matching(const Matching& predicted, const GoldLinks& gold);

struct KFoldConfig {
    std::uint32_t k = 10;
    std::uint64_t seed = 0;
    double threshold = 0.5;
    FeatureConfig features;
    unsigned jobs = 1;
};

struct KFoldReport {
    std::vector<PrfScores> folds;
    PrfScores mean;
    std::uint32_t refolds = 0;  // fold reassignments due to single-class folds
    std::string to_json(const KFoldConfig& config) const;
};

// Seeded k-fold over the left entities: train on the complement, match the
// held-out entities against all right entities, score against gold.
KFoldReport kfold_evaluate(const Dataset& left, const Dataset& right, const GoldLinks& gold,
                           const KFoldConfig& config);

}  // namespace xlwn::align
