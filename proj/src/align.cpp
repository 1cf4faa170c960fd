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

#include "align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "corpus.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "utf8.hpp"

#include <json.hpp>

namespace xlwn::align {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Dataset ingestion

Dataset Dataset::parse_jsonl(std::istream& in, const std::string& name) {
    Dataset dataset;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(name, lineno, std::string("bad JSON: ") + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
            throw ParseError(name, lineno, "entity object needs a string \"id\"");
        }
        Entity e;
        e.id = j["id"].get<std::string>();
        auto read_lang_lists = [&](const char* key,
                                   std::map<std::string, std::vector<std::string>>& out) {
            if (!j.contains(key)) return;
            if (!j[key].is_object()) throw ParseError(name, lineno, std::string(key) + " must be an object");
            for (const auto& [lang, values] : j[key].items()) {
                if (!values.is_array()) throw ParseError(name, lineno, std::string(key) + " values must be arrays");
                for (const auto& v : values) {
                    if (!v.is_string()) throw ParseError(name, lineno, std::string(key) + " entries must be strings");
                    out[lang].push_back(v.get<std::string>());
                }
            }
        };
        read_lang_lists("labels", e.labels);
        read_lang_lists("descriptions", e.descriptions);
        if (j.contains("relations")) {
            if (!j["relations"].is_array()) throw ParseError(name, lineno, "relations must be an array");
            for (const auto& rel : j["relations"]) {
                if (!rel.is_array() || rel.size() != 2 || !rel[0].is_string() || !rel[1].is_string()) {
                    throw ParseError(name, lineno, "each relation must be [kind, target id]");
                }
                e.relations.emplace_back(rel[0].get<std::string>(), rel[1].get<std::string>());
            }
        }
        if (j.contains("type") && j["type"].is_string()) e.type = j["type"].get<std::string>();
        try {
            dataset.add(std::move(e));
        } catch (const InvalidArgument& err) {
            throw ParseError(name, lineno, err.what());
        }
    }
    return dataset;
}

Dataset Dataset::load_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open entity file: " + path);
    return parse_jsonl(in, path);
}

void Dataset::add(Entity entity) {
    if (entity.id.empty()) throw InvalidArgument("entity id must not be empty");
    if (by_id_.count(entity.id)) throw InvalidArgument("duplicate entity id '" + entity.id + "'");
    by_id_.emplace(entity.id, entities_.size());
    entities_.push_back(std::move(entity));
}

const Entity* Dataset::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &entities_[it->second];
}

std::vector<std::string> Dataset::hypernym_closure(const std::string& id) const {
    std::vector<std::string> out;
    std::unordered_set<std::string> visited{id};
    std::vector<std::string> stack{id};
    while (!stack.empty()) {
        const auto current = stack.back();
        stack.pop_back();
        const Entity* e = find(current);
        if (!e) continue;
        for (const auto& [kind, target] : e->relations) {
            if (kind != kHypernym) continue;
            if (visited.insert(target).second) {
                out.push_back(target);
                stack.push_back(target);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// String machinery

unsigned levenshtein(std::string_view a, std::string_view b) {
    const auto ca = utf8::decode(a);
    const auto cb = utf8::decode(b);
    if (ca.empty()) return static_cast<unsigned>(cb.size());
    if (cb.empty()) return static_cast<unsigned>(ca.size());

    std::vector<unsigned> prev(cb.size() + 1), curr(cb.size() + 1);
    for (std::size_t j = 0; j <= cb.size(); ++j) prev[j] = static_cast<unsigned>(j);
    for (std::size_t i = 1; i <= ca.size(); ++i) {
        curr[0] = static_cast<unsigned>(i);
        for (std::size_t j = 1; j <= cb.size(); ++j) {
            const unsigned sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
        }
        std::swap(prev, curr);
    }
    return prev[cb.size()];
}

namespace {

const std::vector<std::string>* labels_of(const Entity& e, const std::string& language) {
    auto it = e.labels.find(language);
    if (it == e.labels.end() || it->second.empty()) return nullptr;
    return &it->second;
}

// Min-Levenshtein pair between two label lists; ties resolve to the
// lexicographically smallest (left, right) pair.
std::optional<std::pair<std::string, std::string>> closest_pair(
    const std::vector<std::string>& left, const std::vector<std::string>& right) {
    if (left.empty() || right.empty()) return std::nullopt;
    std::optional<std::pair<std::string, std::string>> best;
    unsigned best_distance = 0;
    for (const auto& l : left) {
        for (const auto& r : right) {
            const unsigned d = levenshtein(l, r);
            if (!best || d < best_distance ||
                (d == best_distance && std::pair(l, r) < *best)) {
                best = std::pair(l, r);
                best_distance = d;
            }
        }
    }
    return best;
}

std::string join_labels(const std::vector<std::string>& labels) {
    std::string out;
    for (const auto& label : labels) {
        if (!out.empty()) out.push_back(' ');
        out += label;
    }
    return out;
}

// Labels of the entities reachable over hypernym edges (transitively).
std::vector<std::string> superterm_labels(const Entity& e, const Dataset& dataset,
                                          const std::string& language) {
    std::vector<std::string> out;
    for (const auto& id : dataset.hypernym_closure(e.id)) {
        const Entity* target = dataset.find(id);
        if (!target) continue;
        if (const auto* labels = labels_of(*target, language)) {
            out.insert(out.end(), labels->begin(), labels->end());
        }
    }
    return out;
}

// Labels of the directly assigned categories (direct hypernym edges).
std::vector<std::string> category_labels(const Entity& e, const Dataset& dataset,
                                         const std::string& language) {
    std::vector<std::string> out;
    for (const auto& [kind, target_id] : e.relations) {
        if (kind != kHypernym) continue;
        const Entity* target = dataset.find(target_id);
        if (!target) continue;
        if (const auto* labels = labels_of(*target, language)) {
            out.insert(out.end(), labels->begin(), labels->end());
        }
    }
    return out;
}

}  // namespace

std::optional<Facet> apply_lens(LensKind kind, const Entity& left, const Entity& right,
                                const std::string& language, const Dataset* left_dataset,
                                const Dataset* right_dataset) {
    switch (kind) {
        case LensKind::MostSimilarLabels: {
            const auto* ll = labels_of(left, language);
            const auto* rl = labels_of(right, language);
            if (!ll || !rl) return std::nullopt;
            const auto pair = closest_pair(*ll, *rl);
            if (!pair) return std::nullopt;
            return Facet{pair->first, pair->second, kind};
        }
        case LensKind::ConcatenatedLabels: {
            const auto* ll = labels_of(left, language);
            const auto* rl = labels_of(right, language);
            if (!ll || !rl) return std::nullopt;
            return Facet{join_labels(*ll), join_labels(*rl), kind};
        }
        case LensKind::Description: {
            auto lit = left.descriptions.find(language);
            auto rit = right.descriptions.find(language);
            if (lit == left.descriptions.end() || lit->second.empty() ||
                rit == right.descriptions.end() || rit->second.empty()) {
                return std::nullopt;
            }
            return Facet{lit->second.front(), rit->second.front(), kind};
        }
        case LensKind::Superterms: {
            if (!left_dataset || !right_dataset) {
                throw InvalidArgument("the superterms lens needs both relation graphs");
            }
            const auto lsup = superterm_labels(left, *left_dataset, language);
            const auto rcat = category_labels(right, *right_dataset, language);
            const auto pair = closest_pair(lsup, rcat);
            if (!pair) return std::nullopt;
            return Facet{pair->first, pair->second, kind};
        }
    }
    return std::nullopt;
}

namespace {

std::set<std::string> word_set(const std::vector<std::string>& tokens) {
    return {tokens.begin(), tokens.end()};
}

std::set<char32_t> char_set(std::string_view text) {
    std::set<char32_t> out;
    for (char32_t cp : utf8::decode(utf8::lower(text))) {
        if (!utf8::is_space(cp)) out.insert(cp);
    }
    return out;
}

template <typename T>
std::size_t intersection_size(const std::set<T>& a, const std::set<T>& b) {
    std::size_t n = 0;
    for (const auto& x : a) n += b.count(x);
    return n;
}

struct SetScores {
    double jaccard = 0.0;
    double dice = 0.0;
    double containment = 0.0;
};

template <typename T>
SetScores set_scores(const std::set<T>& a, const std::set<T>& b) {
    SetScores s;
    if (a.empty() && b.empty()) return s;  // 0 by convention
    const double i = static_cast<double>(intersection_size(a, b));
    const double u = static_cast<double>(a.size() + b.size()) - i;
    s.jaccard = u > 0.0 ? i / u : 0.0;
    s.dice = 2.0 * i / static_cast<double>(a.size() + b.size());
    const auto lo = std::min(a.size(), b.size());
    s.containment = lo > 0 ? i / static_cast<double>(lo) : 0.0;
    return s;
}

double min_max_ratio(double x, double y) {
    const double hi = std::max(x, y);
    if (hi <= 0.0) return 0.0;
    return std::min(x, y) / hi;
}

bool has_negation(const std::vector<std::string>& tokens,
                  const std::vector<std::string>& negation_words) {
    for (const auto& token : tokens) {
        for (const auto& neg : negation_words) {
            if (token == neg) return true;
        }
        if (token.size() >= 3 && token.compare(token.size() - 3, 3, "n't") == 0) return true;
    }
    return false;
}

// Maximal ASCII digit substrings, as strings ("6.5" -> {"6","5"}).
std::vector<std::string> numbers_of(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            current.push_back(c);
        } else if (!current.empty()) {
            out.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(current);
    std::sort(out.begin(), out.end());
    return out;
}

double avg_word_length(const std::vector<std::string>& tokens) {
    if (tokens.empty()) return 0.0;
    std::size_t chars = 0;
    for (const auto& t : tokens) chars += utf8::decode(t).size();
    return static_cast<double>(chars) / static_cast<double>(tokens.size());
}

}  // namespace

std::vector<double> extract_basic_features(const std::optional<Facet>& facet,
                                           const BasicFeatureOptions& options) {
    std::vector<double> out(10, 0.0);
    if (!facet) return out;

    const auto left_tokens = tokenize(facet->left_text).tokens;
    const auto right_tokens = tokenize(facet->right_text).tokens;
    const auto lw = word_set(left_tokens);
    const auto rw = word_set(right_tokens);
    const auto lc = char_set(facet->left_text);
    const auto rc = char_set(facet->right_text);

    const auto words = set_scores(lw, rw);
    const auto chars = set_scores(lc, rc);
    out[0] = words.jaccard;
    out[1] = words.dice;
    out[2] = words.containment;
    out[3] = chars.jaccard;
    out[4] = chars.dice;
    out[5] = chars.containment;
    out[6] = min_max_ratio(static_cast<double>(left_tokens.size()),
                           static_cast<double>(right_tokens.size()));
    out[7] = min_max_ratio(avg_word_length(left_tokens), avg_word_length(right_tokens));
    out[8] = has_negation(left_tokens, options.negation_words) ==
                     has_negation(right_tokens, options.negation_words)
                 ? 1.0
                 : 0.0;
    out[9] = numbers_of(facet->left_text) == numbers_of(facet->right_text) ? 1.0 : 0.0;
    return out;
}

double smoothed_jaccard(std::string_view left_text, std::string_view right_text, double alpha) {
    if (!(alpha > 0.0)) throw InvalidArgument("smoothed Jaccard alpha must be > 0");
    const auto a = word_set(tokenize(left_text).tokens);
    const auto b = word_set(tokenize(right_text).tokens);
    if (a.empty() && b.empty()) return 0.0;
    const auto sigma = [alpha](double x) { return 1.0 - std::exp(-alpha * x); };
    const double i = sigma(static_cast<double>(intersection_size(a, b)));
    const double denom =
        sigma(static_cast<double>(a.size())) + sigma(static_cast<double>(b.size())) - i;
    return denom > 0.0 ? i / denom : 0.0;
}

// ---------------------------------------------------------------------------
// Embeddings

EmbeddingTable EmbeddingTable::parse(std::istream& in, const std::string& name) {
    EmbeddingTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        std::vector<double> vec;
        double v = 0.0;
        while (fields >> v) vec.push_back(v);
        if (word.empty() || vec.empty()) throw ParseError(name, lineno, "expected `word v1 .. vd`");
        if (table.dimension_ == 0) {
            table.dimension_ = vec.size();
        } else if (vec.size() != table.dimension_) {
            throw ParseError(name, lineno,
                             "dimension mismatch: expected " + std::to_string(table.dimension_) +
                                 ", got " + std::to_string(vec.size()));
        }
        table.vectors_.emplace(std::move(word), std::move(vec));  // first occurrence wins
    }
    return table;
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path);
    return parse(in, path);
}

const std::vector<double>* EmbeddingTable::find(const std::string& word) const {
    auto it = vectors_.find(word);
    return it == vectors_.end() ? nullptr : &it->second;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double embedding_similarity(const std::optional<Facet>& facet, const EmbeddingTable& table) {
    if (!facet) return 0.0;
    const auto left = tokenize(facet->left_text).tokens;
    const auto right = tokenize(facet->right_text).tokens;
    if (left.empty()) return 0.0;

    double total = 0.0;
    for (const auto& lw : left) {
        const auto* lv = table.find(lw);
        double best = 0.0;
        if (lv) {
            for (const auto& rw : right) {
                const auto* rv = table.find(rw);
                const double sim = rv ? cosine(*lv, *rv) : 0.0;
                best = std::max(best, sim);
            }
        }
        total += best;
    }
    return total / static_cast<double>(left.size());
}

// ---------------------------------------------------------------------------
// Feature schema / extraction

namespace {

const char* kBasicNames[10] = {"jaccard_words",   "dice_words",   "containment_words",
                               "jaccard_chars",   "dice_chars",   "containment_chars",
                               "length_ratio",    "avg_word_len_ratio",
                               "negation",        "number"};

void append_basic(std::vector<std::string>& out, const std::string& prefix) {
    for (const auto* name : kBasicNames) out.push_back(prefix + "." + name);
}

}  // namespace

std::vector<std::string> feature_schema(int setting) {
    if (setting < 1 || setting > 8) throw InvalidArgument("setting must be in 1..8");
    std::vector<std::string> out;
    if (setting == 1) {
        out.push_back("concat.jaccard_words");
        return out;
    }
    out.push_back("concat.smoothed_jaccard");
    if (setting >= 3) append_basic(out, "msl");
    if (setting >= 4) append_basic(out, "desc");
    if (setting >= 5) out.push_back("desc.embedding");
    if (setting >= 7) append_basic(out, "super");
    if (setting == 6 || setting == 8) out.push_back("reserved.neural");
    return out;
}

std::vector<double> extract_features(const Entity& left, const Entity& right,
                                     const FeatureConfig& config, const Dataset* left_dataset,
                                     const Dataset* right_dataset) {
    const int setting = config.setting;
    if (setting < 1 || setting > 8) throw InvalidArgument("setting must be in 1..8");
    std::vector<double> out;

    const auto concat = apply_lens(LensKind::ConcatenatedLabels, left, right, config.language);
    if (setting == 1) {
        out.push_back(extract_basic_features(concat, config.basic)[0]);  // word jaccard
        return out;
    }
    out.push_back(concat ? smoothed_jaccard(concat->left_text, concat->right_text, config.alpha)
                         : 0.0);
    if (setting >= 3) {
        const auto msl = apply_lens(LensKind::MostSimilarLabels, left, right, config.language);
        const auto f = extract_basic_features(msl, config.basic);
        out.insert(out.end(), f.begin(), f.end());
    }
    if (setting >= 4) {
        const auto desc = apply_lens(LensKind::Description, left, right, config.language);
        const auto f = extract_basic_features(desc, config.basic);
        out.insert(out.end(), f.begin(), f.end());
    }
    if (setting >= 5) {
        if (!config.embeddings) {
            throw InvalidArgument("settings 5..8 need an embedding table");
        }
        const auto desc = apply_lens(LensKind::Description, left, right, config.language);
        out.push_back(embedding_similarity(desc, *config.embeddings));
    }
    if (setting >= 7) {
        const auto super = apply_lens(LensKind::Superterms, left, right, config.language,
                                      left_dataset, right_dataset);
        const auto f = extract_basic_features(super, config.basic);
        out.insert(out.end(), f.begin(), f.end());
    }
    if (setting == 6 || setting == 8) out.push_back(0.0);
    return out;
}

// ---------------------------------------------------------------------------
// Similarity model

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

constexpr std::uint32_t kTrainIterations = 2000;
constexpr double kLearningRate = 0.5;
constexpr double kL2 = 1e-4;

}  // namespace

SimilarityModel train_similarity_model(const std::vector<std::pair<std::vector<double>, int>>& pairs,
                                       const std::vector<std::string>& feature_names,
                                       TrainReport* report) {
    if (pairs.empty()) throw InvalidArgument("empty training set");
    const std::size_t dim = feature_names.size();

    // Aggregate identical samples with counts. Scaling every count by the
    // same factor then cancels exactly, so a duplicated training set
    // produces the bit-identical model (and repeated vectors train faster).
    std::map<std::pair<std::vector<double>, int>, double> aggregated;
    std::size_t positives = 0;
    for (const auto& sample : pairs) {
        if (sample.first.size() != dim) {
            throw InvalidArgument("feature vector size " + std::to_string(sample.first.size()) +
                                  " does not match schema size " + std::to_string(dim));
        }
        if (sample.second != 0 && sample.second != 1) {
            throw InvalidArgument("labels must be 0 or 1");
        }
        positives += static_cast<std::size_t>(sample.second);
        aggregated[sample] += 1.0;
    }
    if (positives == 0 || positives == pairs.size()) {
        throw InvalidArgument("training set must contain both classes");
    }

    std::vector<std::vector<double>> x;
    std::vector<int> label;
    std::vector<double> count;
    for (const auto& [sample, c] : aggregated) {
        x.push_back(sample.first);
        label.push_back(sample.second);
        count.push_back(c);
    }
    const std::size_t m = x.size();
    const double n = static_cast<double>(pairs.size());

    SimilarityModel model;
    model.feature_names = feature_names;
    model.means.assign(dim, 0.0);
    model.scales.assign(dim, 1.0);
    model.weights.assign(dim, 0.0);

    for (std::size_t d = 0; d < dim; ++d) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += count[i] * x[i][d];
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) var += count[i] * (x[i][d] - mean) * (x[i][d] - mean);
        var /= n;
        model.means[d] = mean;
        model.scales[d] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }

    std::vector<std::vector<double>> z(m, std::vector<double>(dim));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            z[i][d] = (x[i][d] - model.means[d]) / model.scales[d];
        }
    }

    // Inverse-frequency class weights: both classes contribute equally
    // regardless of imbalance.
    const double w_pos = n / (2.0 * static_cast<double>(positives));
    const double w_neg = n / (2.0 * static_cast<double>(pairs.size() - positives));

    std::vector<double> grad(dim);
    for (std::uint32_t iter = 0; iter < kTrainIterations; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double logit = model.bias;
            for (std::size_t d = 0; d < dim; ++d) logit += model.weights[d] * z[i][d];
            const double y = static_cast<double>(label[i]);
            const double err = count[i] * (sigmoid(logit) - y) * (label[i] ? w_pos : w_neg);
            for (std::size_t d = 0; d < dim; ++d) grad[d] += err * z[i][d];
            grad_bias += err;
        }
        for (std::size_t d = 0; d < dim; ++d) {
            model.weights[d] -= kLearningRate * (grad[d] / n + kL2 * model.weights[d]);
        }
        model.bias -= kLearningRate * grad_bias / n;
    }

    double correct = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double logit = model.bias;
        for (std::size_t d = 0; d < dim; ++d) logit += model.weights[d] * z[i][d];
        const int predicted = sigmoid(logit) > 0.5 ? 1 : 0;
        if (predicted == label[i]) correct += count[i];
    }
    if (report) {
        report->training_accuracy = correct / n;
        report->iterations = kTrainIterations;
        report->degenerate = true;
        for (double w : model.weights) {
            if (std::abs(w) > 1e-9) {
                report->degenerate = false;
                break;
            }
        }
    }
    return model;
}

double predict_similarity(const SimilarityModel& model, const std::vector<double>& features) {
    if (features.size() != model.weights.size()) {
        throw InvalidArgument("feature vector size " + std::to_string(features.size()) +
                              " does not match model schema size " +
                              std::to_string(model.weights.size()));
    }
    double logit = model.bias;
    for (std::size_t d = 0; d < features.size(); ++d) {
        logit += model.weights[d] * (features[d] - model.means[d]) / model.scales[d];
    }
    return sigmoid(logit);
}

namespace {
constexpr const char* kModelMagic = "xlwn-similarity-model v1";
}

void SimilarityModel::save(std::ostream& out) const {
    out << kModelMagic << "\n";
    out << "setting " << setting << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", alpha);
    out << "alpha " << buf << "\n";
    out << "language " << language << "\n";
    out << "features " << feature_names.size() << "\n";
    for (std::size_t d = 0; d < feature_names.size(); ++d) {
        char m[64], s[64], w[64];
        std::snprintf(m, sizeof(m), "%.17g", means[d]);
        std::snprintf(s, sizeof(s), "%.17g", scales[d]);
        std::snprintf(w, sizeof(w), "%.17g", weights[d]);
        out << feature_names[d] << " " << m << " " << s << " " << w << "\n";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", bias);
    out << "bias " << buf << "\n";
}

void SimilarityModel::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file: " + path);
    save(out);
    if (!out) throw IoError("write failed: " + path);
}

SimilarityModel SimilarityModel::load(std::istream& in, const std::string& name) {
    SimilarityModel model;
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line)) throw ParseError(name, lineno, "truncated model file");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    if (next_line() != kModelMagic) throw ParseError(name, 1, "not a similarity model file");

    std::size_t n_features = 0;
    while (true) {
        std::istringstream fields(next_line());
        std::string key;
        fields >> key;
        if (key == "setting") {
            fields >> model.setting;
        } else if (key == "alpha") {
            fields >> model.alpha;
        } else if (key == "language") {
            fields >> model.language;
        } else if (key == "features") {
            fields >> n_features;
            break;
        } else {
            throw ParseError(name, lineno, "unexpected key '" + key + "'");
        }
        if (!fields) throw ParseError(name, lineno, "bad value for '" + key + "'");
    }
    for (std::size_t d = 0; d < n_features; ++d) {
        std::istringstream fields(next_line());
        std::string feature_name;
        double mean = 0.0, scale = 1.0, weight = 0.0;
        if (!(fields >> feature_name >> mean >> scale >> weight)) {
            throw ParseError(name, lineno, "expected `name mean scale weight`");
        }
        model.feature_names.push_back(feature_name);
        model.means.push_back(mean);
        model.scales.push_back(scale);
        model.weights.push_back(weight);
    }
    {
        std::istringstream fields(next_line());
        std::string key;
        if (!(fields >> key >> model.bias) || key != "bias") {
            throw ParseError(name, lineno, "expected `bias <value>`");
        }
    }
    return model;
}

SimilarityModel SimilarityModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    return load(in, path);
}

// ---------------------------------------------------------------------------
// Matching

Matching greedy_match(const std::vector<std::string>& left_ids,
                      const std::vector<std::string>& right_ids,
                      const std::function<double(std::size_t, std::size_t)>& sim, double threshold,
                      unsigned jobs) {
    if (threshold < 0.0 || threshold > 1.0) throw InvalidArgument("threshold must be in [0,1]");

    struct Cell {
        double sim;
        std::size_t i, j;
    };
    std::vector<Cell> cells(left_ids.size() * right_ids.size());
    parallel_for(left_ids.size(), jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < right_ids.size(); ++j) {
            cells[i * right_ids.size() + j] = Cell{sim(i, j), i, j};
        }
    });

    std::vector<const Cell*> admissible;
    admissible.reserve(cells.size());
    for (const auto& cell : cells) {
        if (cell.sim >= threshold) admissible.push_back(&cell);
    }
    std::sort(admissible.begin(), admissible.end(), [&](const Cell* a, const Cell* b) {
        if (a->sim != b->sim) return a->sim > b->sim;
        if (left_ids[a->i] != left_ids[b->i]) return left_ids[a->i] < left_ids[b->i];
        return right_ids[a->j] < right_ids[b->j];
    });

    Matching matching;
    std::vector<bool> left_used(left_ids.size(), false), right_used(right_ids.size(), false);
    for (const auto* cell : admissible) {
        if (left_used[cell->i] || right_used[cell->j]) continue;
        left_used[cell->i] = true;
        right_used[cell->j] = true;
        matching.links.push_back(Link{left_ids[cell->i], right_ids[cell->j], cell->sim});
        matching.total_score += cell->sim;
    }
    return matching;
}

GoldLinks load_gold_links(std::istream& in, const std::string& name) {
    GoldLinks gold;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
            throw ParseError(name, lineno, "expected `left_id<TAB>right_id`");
        }
        gold.emplace(line.substr(0, tab), line.substr(tab + 1));
    }
    return gold;
}

GoldLinks load_gold_links_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open gold links file: " + path);
    return load_gold_links(in, path);
}

PrfScores evaluate_matching(const Matching& predicted, const GoldLinks& gold) {
    std::size_t overlap = 0;
    for (const auto& link : predicted.links) {
        if (gold.count({link.left, link.right})) ++overlap;
    }
    PrfScores s;
    if (!predicted.links.empty()) {
        s.precision = static_cast<double>(overlap) / static_cast<double>(predicted.links.size());
    } else {
        s.precision = gold.empty() ? 1.0 : 0.0;
    }
    if (!gold.empty()) {
        s.recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
    } else {
        s.recall = predicted.links.empty() ? 1.0 : 0.0;
    }
    if (s.precision + s.recall > 0.0) {
        s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    }
    return s;
}

// ---------------------------------------------------------------------------
// k-fold evaluation

namespace {

// Fold of each left entity, seeded shuffle + round robin.
std::vector<std::uint32_t> fold_assignment(std::size_t n, std::uint32_t k, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = rng.bounded(i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<std::uint32_t> fold(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = static_cast<std::uint32_t>(pos % k);
    return fold;
}

}  // namespace

std::string KFoldReport::to_json(const KFoldConfig& config) const {
    json j;
    j["k"] = config.k;
    j["seed"] = config.seed;
    j["setting"] = config.features.setting;
    j["threshold"] = config.threshold;
    j["refolds"] = refolds;
    j["folds"] = json::array();
    for (const auto& f : folds) {
        j["folds"].push_back({{"precision", f.precision}, {"recall", f.recall}, {"f1", f.f1}});
    }
    j["mean"] = {{"precision", mean.precision}, {"recall", mean.recall}, {"f1", mean.f1}};
    return j.dump(2) + "\n";
}

KFoldReport kfold_evaluate(const Dataset& left, const Dataset& right, const GoldLinks& gold,
                           const KFoldConfig& config) {
    if (config.k < 2) throw InvalidArgument("k must be >= 2");
    if (left.size() < config.k) {
        throw InvalidArgument("cannot split " + std::to_string(left.size()) + " entities into " +
                              std::to_string(config.k) + " folds");
    }
    for (const auto& [l, r] : gold) {
        if (!left.find(l)) throw InvalidArgument("gold link references unknown left id '" + l + "'");
        if (!right.find(r)) throw InvalidArgument("gold link references unknown right id '" + r + "'");
    }

    const auto schema = feature_schema(config.features.setting);
    const std::size_t nl = left.size(), nr = right.size();

    // Feature grid once; folds reuse it.
    std::vector<std::vector<double>> features(nl * nr);
    parallel_for(nl, config.jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < nr; ++j) {
            features[i * nr + j] = extract_features(left.entities()[i], right.entities()[j],
                                                    config.features, &left, &right);
        }
    });
    std::vector<char> is_gold(nl * nr, 0);
    for (std::size_t i = 0; i < nl; ++i) {
        for (std::size_t j = 0; j < nr; ++j) {
            if (gold.count({left.entities()[i].id, right.entities()[j].id})) is_gold[i * nr + j] = 1;
        }
    }

    // A usable assignment gives every fold a two-class training set.
    std::vector<std::uint32_t> folds_of;
    KFoldReport report;
    constexpr std::uint32_t kMaxRefolds = 32;
    for (std::uint32_t attempt = 0;; ++attempt) {
        if (attempt == kMaxRefolds) {
            throw Error("could not build " + std::to_string(config.k) +
                        " folds with two-class training sets (" + std::to_string(kMaxRefolds) +
                        " attempts)");
        }
        folds_of = fold_assignment(nl, config.k, config.seed + attempt);
        bool ok = true;
        for (std::uint32_t f = 0; f < config.k && ok; ++f) {
            std::size_t pos = 0, neg = 0;
            for (std::size_t i = 0; i < nl; ++i) {
                if (folds_of[i] == f) continue;
                for (std::size_t j = 0; j < nr; ++j) {
                    if (is_gold[i * nr + j]) ++pos; else ++neg;
                }
            }
            if (pos == 0 || neg == 0) ok = false;
        }
        if (ok) {
            report.refolds = attempt;
            break;
        }
    }

    for (std::uint32_t f = 0; f < config.k; ++f) {
        std::vector<std::pair<std::vector<double>, int>> training;
        for (std::size_t i = 0; i < nl; ++i) {
            if (folds_of[i] == f) continue;
            for (std::size_t j = 0; j < nr; ++j) {
                training.emplace_back(features[i * nr + j], is_gold[i * nr + j] ? 1 : 0);
            }
        }
        const auto model = train_similarity_model(training, schema);

        std::vector<std::string> test_ids;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < nl; ++i) {
            if (folds_of[i] == f) {
                test_ids.push_back(left.entities()[i].id);
                test_rows.push_back(i);
            }
        }
        std::vector<std::string> right_ids;
        right_ids.reserve(nr);
        for (const auto& e : right.entities()) right_ids.push_back(e.id);

        const auto matching = greedy_match(
            test_ids, right_ids,
            [&](std::size_t ti, std::size_t j) {
                return predict_similarity(model, features[test_rows[ti] * nr + j]);
            },
            config.threshold, config.jobs);

        const std::set<std::string> held_out(test_ids.begin(), test_ids.end());
        GoldLinks fold_gold;
        for (const auto& [l, r] : gold) {
            if (held_out.count(l)) fold_gold.emplace(l, r);
        }
        report.folds.push_back(evaluate_matching(matching, fold_gold));
    }

    for (const auto& f : report.folds) {
        report.mean.precision += f.precision;
        report.mean.recall += f.recall;
        report.mean.f1 += f.f1;
    }
    const double k = static_cast<double>(report.folds.size());
    report.mean.precision /= k;
    report.mean.recall /= k;
    report.mean.f1 /= k;
    return report;
}

}  // namespace xlwn::align
