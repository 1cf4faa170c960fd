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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "align.hpp"
#include "helpers.hpp"

using namespace xlwn;
using namespace xlwn::align;

namespace {

Entity entity(const std::string& id, std::vector<std::string> labels,
              std::vector<std::string> descriptions = {},
              std::vector<std::pair<std::string, std::string>> relations = {}) {
    Entity e;
    e.id = id;
    if (!labels.empty()) e.labels["en"] = std::move(labels);
    if (!descriptions.empty()) e.descriptions["en"] = std::move(descriptions);
    e.relations = std::move(relations);
    return e;
}

}  // namespace

TEST_CASE("levenshtein") {
    CHECK(levenshtein("abc", "abc") == 0);
    CHECK(levenshtein("", "abc") == 3);
    CHECK(levenshtein("abc", "") == 3);
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("flaw", "lawn") == 2);
    // Codepoints, not bytes.
    CHECK(levenshtein("niño", "nino") == 1);
}

TEST_CASE("lenses") {
    const auto e1 = entity("a", {"bank", "banking company"}, {"a financial institution"});
    const auto e2 = entity("b", {"bank"}, {});

    SUBCASE("most similar labels picks the zero-distance pair") {
        const auto facet = apply_lens(LensKind::MostSimilarLabels, e1, e2, "en");
        REQUIRE(facet.has_value());
        CHECK(facet->left_text == "bank");
        CHECK(facet->right_text == "bank");
    }

    SUBCASE("concatenated labels join in ingestion order") {
        const auto facet = apply_lens(LensKind::ConcatenatedLabels, e1, e2, "en");
        REQUIRE(facet.has_value());
        CHECK(facet->left_text == "bank banking company");
        CHECK(facet->right_text == "bank");
    }

    SUBCASE("missing descriptions make the facet absent") {
        CHECK(!apply_lens(LensKind::Description, e1, e2, "en").has_value());
    }

    SUBCASE("missing labels make label facets absent") {
        const auto bare = entity("c", {});
        CHECK(!apply_lens(LensKind::MostSimilarLabels, e1, bare, "en").has_value());
        CHECK(!apply_lens(LensKind::ConcatenatedLabels, bare, e2, "en").has_value());
    }

    SUBCASE("superterms compare transitive hypernyms with direct categories") {
        Dataset left;
        left.add(entity("l1", {"poodle"}, {}, {{"hypernym", "l2"}}));
        left.add(entity("l2", {"dog"}, {}, {{"hypernym", "l3"}}));
        left.add(entity("l3", {"animal"}));
        Dataset right;
        right.add(entity("r1", {"Poodle"}, {}, {{"hypernym", "r2"}, {"hypernym", "r3"}}));
        right.add(entity("r2", {"dog breeds"}));
        right.add(entity("r3", {"companion animals"}, {}, {{"hypernym", "r4"}}));
        right.add(entity("r4", {"zoology"}));

        const auto facet = apply_lens(LensKind::Superterms, *left.find("l1"), *right.find("r1"),
                                      "en", &left, &right);
        REQUIRE(facet.has_value());
        // Left closure labels: dog, animal (transitive). Right categories:
        // dog breeds, companion animals (direct only; zoology excluded).
        CHECK(facet->left_text == "dog");
        CHECK(facet->right_text == "dog breeds");

        CHECK_THROWS_AS(
            apply_lens(LensKind::Superterms, *left.find("l1"), *right.find("r1"), "en"),
            InvalidArgument);
    }
}

TEST_CASE("basic features") {
    auto facet = [](const char* l, const char* r) {
        return std::optional<Facet>(Facet{l, r, LensKind::MostSimilarLabels});
    };

    SUBCASE("word-level set scores on (big cat, big dog)") {
        const auto f = extract_basic_features(facet("big cat", "big dog"));
        CHECK(f[0] == doctest::Approx(1.0 / 3.0));  // jaccard words
        CHECK(f[1] == doctest::Approx(0.5));        // dice words
        CHECK(f[2] == doctest::Approx(0.5));        // containment words
        CHECK(f[6] == doctest::Approx(1.0));        // length ratio
        CHECK(f[7] == doctest::Approx(1.0));        // avg word length ratio
    }

    SUBCASE("negation agreement") {
        CHECK(extract_basic_features(facet("not good", "good"))[8] == 0.0);
        CHECK(extract_basic_features(facet("good", "nice"))[8] == 1.0);
        CHECK(extract_basic_features(facet("never here", "not there"))[8] == 1.0);
        CHECK(extract_basic_features(facet("don't stop", "go on"))[8] == 0.0);
    }

    SUBCASE("number agreement") {
        CHECK(extract_basic_features(facet("6 cats", "6 dogs"))[9] == 1.0);
        CHECK(extract_basic_features(facet("6 cats", "7 cats"))[9] == 0.0);
        CHECK(extract_basic_features(facet("no digits", "none here"))[9] == 1.0);
        CHECK(extract_basic_features(facet("catalog 6", "6 items"))[9] == 1.0);
    }

    SUBCASE("absent facet reads as zeros") {
        const auto f = extract_basic_features(std::nullopt);
        for (double v : f) CHECK(v == 0.0);
        CHECK(f.size() == 10);
    }

    SUBCASE("set-identity inequalities: J <= D <= 1 and J <= C") {
        Rng rng(5);
        const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
        for (int round = 0; round < 200; ++round) {
            auto text = [&]() {
                std::string s;
                const auto len = rng.bounded(5);
                for (std::size_t i = 0; i < len; ++i) {
                    if (i) s.push_back(' ');
                    s += vocab[rng.bounded(vocab.size())];
                }
                return s;
            };
            const auto f = extract_basic_features(facet(text().c_str(), text().c_str()));
            CHECK(f[0] <= f[1] + 1e-12);
            CHECK(f[1] <= 1.0 + 1e-12);
            CHECK(f[0] <= f[2] + 1e-12);
            CHECK(f[3] <= f[4] + 1e-12);
            CHECK(f[3] <= f[5] + 1e-12);
            for (double v : f) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }

    SUBCASE("every basic feature is symmetric") {
        Rng rng(6);
        const std::vector<std::string> vocab{"not", "6", "cat", "dog", "big"};
        for (int round = 0; round < 100; ++round) {
            auto text = [&]() {
                std::string s;
                const auto len = rng.bounded(4);
                for (std::size_t i = 0; i < len; ++i) {
                    if (i) s.push_back(' ');
                    s += vocab[rng.bounded(vocab.size())];
                }
                return s;
            };
            const auto a = text(), b = text();
            CHECK(extract_basic_features(facet(a.c_str(), b.c_str())) ==
                  extract_basic_features(facet(b.c_str(), a.c_str())));
        }
    }
}

TEST_CASE("smoothed jaccard") {
    SUBCASE("identical non-empty sets score 1 for any alpha") {
        for (double alpha : {0.01, 0.5, 1.0, 10.0}) {
            CHECK(smoothed_jaccard("big cat", "cat big", alpha) == doctest::Approx(1.0));
        }
    }

    SUBCASE("worked example at alpha=1") {
        const double s1 = 1.0 - std::exp(-1.0);
        const double s2 = 1.0 - std::exp(-2.0);
        const double expected = s1 / (2.0 * s2 - s1);
        CHECK(smoothed_jaccard("big cat", "big dog", 1.0) == doctest::Approx(expected));
        CHECK(std::round(smoothed_jaccard("big cat", "big dog", 1.0) * 1e4) / 1e4 ==
              doctest::Approx(0.5761));
    }

    SUBCASE("tends to plain Jaccard as alpha -> 0") {
        Rng rng(8);
        const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h"};
        for (int round = 0; round < 100; ++round) {
            auto text = [&]() {
                std::string s;
                const auto len = 1 + rng.bounded(6);
                for (std::size_t i = 0; i < len; ++i) {
                    if (i) s.push_back(' ');
                    s += vocab[rng.bounded(vocab.size())];
                }
                return s;
            };
            const auto a = text(), b = text();
            const auto fa = extract_basic_features(
                std::optional<Facet>(Facet{a, b, LensKind::ConcatenatedLabels}));
            CHECK(smoothed_jaccard(a, b, 1e-6) == doctest::Approx(fa[0]).epsilon(1e-4));
        }
    }

    SUBCASE("bounds, empty sets and bad alpha") {
        CHECK(smoothed_jaccard("", "", 1.0) == 0.0);
        CHECK(smoothed_jaccard("a", "b", 1.0) == 0.0);
        CHECK(smoothed_jaccard("a b", "b c", 1.0) > 0.0);
        CHECK(smoothed_jaccard("a b", "b c", 1.0) < 1.0);
        CHECK_THROWS_AS(smoothed_jaccard("a", "a", 0.0), InvalidArgument);
        CHECK_THROWS_AS(smoothed_jaccard("a", "a", -1.0), InvalidArgument);
    }
}

TEST_CASE("embeddings") {
    std::istringstream table_text(
        "cat 1.0 0.0\n"
        "dog 0.6 0.8\n"
        "sun 0.0 1.0\n");
    const auto table = EmbeddingTable::parse(table_text, "mem");
    auto facet = [](const char* l, const char* r) {
        return std::optional<Facet>(Facet{l, r, LensKind::Description});
    };

    SUBCASE("self similarity is 1") {
        CHECK(embedding_similarity(facet("cat", "cat"), table) == doctest::Approx(1.0));
    }

    SUBCASE("mean over left words of the best right match") {
        const double c = 0.6;  // cosine(dog, cat)
        CHECK(embedding_similarity(facet("cat dog", "cat"), table) ==
              doctest::Approx((1.0 + c) / 2.0));
    }

    SUBCASE("missing words contribute zero") {
        CHECK(embedding_similarity(facet("unicorn", "cat"), table) == 0.0);
        CHECK(embedding_similarity(facet("unicorn cat", "cat"), table) == doctest::Approx(0.5));
        CHECK(embedding_similarity(facet("cat", "unicorn"), table) == 0.0);
    }

    SUBCASE("empty sides") {
        CHECK(embedding_similarity(facet("", "cat"), table) == 0.0);
        CHECK(embedding_similarity(facet("cat", ""), table) == 0.0);
        CHECK(embedding_similarity(std::nullopt, table) == 0.0);
    }

    SUBCASE("dimension mismatch is a load error") {
        std::istringstream bad(
            "cat 1.0 0.0\n"
            "dog 0.5\n");
        CHECK_THROWS_AS(EmbeddingTable::parse(bad, "mem"), ParseError);
    }
}

TEST_CASE("feature schema sizes per setting") {
    CHECK(feature_schema(1).size() == 1);
    CHECK(feature_schema(2).size() == 1);
    CHECK(feature_schema(3).size() == 11);
    CHECK(feature_schema(4).size() == 21);
    CHECK(feature_schema(5).size() == 22);
    CHECK(feature_schema(6).size() == 23);
    CHECK(feature_schema(7).size() == 32);
    CHECK(feature_schema(8).size() == 33);
    CHECK_THROWS_AS(feature_schema(0), InvalidArgument);
    CHECK_THROWS_AS(feature_schema(9), InvalidArgument);
}

TEST_CASE("similarity model") {
    // Separable fixture: label 1 iff the first feature is 1.
    std::vector<std::pair<std::vector<double>, int>> pairs;
    Rng rng(99);
    for (int i = 0; i < 10; ++i) {
        pairs.push_back({{1.0, rng.real()}, 1});
        pairs.push_back({{0.0, rng.real()}, 0});
    }
    const std::vector<std::string> schema{"jaccard", "noise"};

    SUBCASE("separable data trains to high accuracy") {
        TrainReport report;
        const auto model = train_similarity_model(pairs, schema, &report);
        CHECK(report.training_accuracy >= 0.95);
        CHECK(!report.degenerate);
        std::size_t correct = 0;
        for (const auto& [x, y] : pairs) {
            const double p = predict_similarity(model, x);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            if ((p > 0.5 ? 1 : 0) == y) ++correct;
        }
        CHECK(static_cast<double>(correct) / pairs.size() >= 0.95);
    }

    SUBCASE("positives score above 0.5, negatives below") {
        const auto model = train_similarity_model(pairs, schema);
        CHECK(predict_similarity(model, {1.0, 0.5}) > 0.5);
        CHECK(predict_similarity(model, {0.0, 0.5}) < 0.5);
    }

    SUBCASE("single-class input is an error") {
        std::vector<std::pair<std::vector<double>, int>> ones(pairs.begin(), pairs.begin() + 1);
        CHECK_THROWS_AS(train_similarity_model(ones, schema), InvalidArgument);
    }

    SUBCASE("all-zero features train to a flagged chance-level model") {
        std::vector<std::pair<std::vector<double>, int>> zeros;
        for (int i = 0; i < 8; ++i) zeros.push_back({{0.0, 0.0}, i % 2});
        TrainReport report;
        const auto model = train_similarity_model(zeros, schema, &report);
        CHECK(report.degenerate);
        const double p = predict_similarity(model, {0.0, 0.0});
        CHECK(p == doctest::Approx(0.5).epsilon(0.05));
    }

    SUBCASE("duplicated training set yields the identical model") {
        auto doubled = pairs;
        doubled.insert(doubled.end(), pairs.begin(), pairs.end());
        const auto a = train_similarity_model(pairs, schema);
        const auto b = train_similarity_model(doubled, schema);
        CHECK(a.weights == b.weights);
        CHECK(a.bias == b.bias);
    }

    SUBCASE("prediction is monotone in a positive-weight feature") {
        const auto model = train_similarity_model(pairs, schema);
        REQUIRE(model.weights[0] > 0.0);
        double previous = predict_similarity(model, {0.0, 0.3});
        for (double x = 0.1; x <= 1.0; x += 0.1) {
            const double p = predict_similarity(model, {x, 0.3});
            CHECK(p >= previous);
            previous = p;
        }
    }

    SUBCASE("schema mismatch is an error") {
        const auto model = train_similarity_model(pairs, schema);
        CHECK_THROWS_AS(predict_similarity(model, {1.0, 2.0, 3.0}), InvalidArgument);
    }

    SUBCASE("zero vector scores sigmoid of the standardized bias, inside [0,1]") {
        const auto model = train_similarity_model(pairs, schema);
        const double p = predict_similarity(model, {0.0, 0.0});
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }

    SUBCASE("save/load round-trip") {
        TrainReport report;
        auto model = train_similarity_model(pairs, schema, &report);
        model.setting = 4;
        model.alpha = 1.0;
        model.language = "en";
        std::ostringstream out;
        model.save(out);
        std::istringstream in(out.str());
        const auto loaded = SimilarityModel::load(in, "mem");
        CHECK(loaded.feature_names == model.feature_names);
        CHECK(loaded.weights == model.weights);
        CHECK(loaded.bias == model.bias);
        CHECK(loaded.setting == 4);
        for (const auto& [x, y] : pairs) {
            CHECK(predict_similarity(loaded, x) == doctest::Approx(predict_similarity(model, x)));
        }

        std::istringstream junk("not a model");
        CHECK_THROWS_AS(SimilarityModel::load(junk, "junk"), ParseError);
    }
}

namespace {

// Independent sort-then-scan greedy oracle.
Matching naive_greedy(const std::vector<std::string>& left_ids,
                      const std::vector<std::string>& right_ids,
                      const std::vector<std::vector<double>>& sims, double threshold) {
    struct Item {
        double sim;
        std::string left, right;
        std::size_t i, j;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < left_ids.size(); ++i) {
        for (std::size_t j = 0; j < right_ids.size(); ++j) {
            if (sims[i][j] >= threshold) items.push_back({sims[i][j], left_ids[i], right_ids[j], i, j});
        }
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        if (a.left != b.left) return a.left < b.left;
        return a.right < b.right;
    });
    Matching m;
    std::set<std::string> used_left, used_right;
    for (const auto& item : items) {
        if (used_left.count(item.left) || used_right.count(item.right)) continue;
        used_left.insert(item.left);
        used_right.insert(item.right);
        m.links.push_back(Link{item.left, item.right, item.sim});
        m.total_score += item.sim;
    }
    return m;
}

}  // namespace

TEST_CASE("greedy matching") {
    SUBCASE("simple 2x2") {
        const std::vector<std::vector<double>> sims{{0.9, 0.2}, {0.8, 0.7}};
        const auto m = greedy_match({"a1", "a2"}, {"b1", "b2"},
                                    [&](std::size_t i, std::size_t j) { return sims[i][j]; }, 0.0);
        REQUIRE(m.links.size() == 2);
        CHECK(m.links[0].left == "a1");
        CHECK(m.links[0].right == "b1");
        CHECK(m.links[1].left == "a2");
        CHECK(m.links[1].right == "b2");
        CHECK(m.total_score == doctest::Approx(1.6));
    }

    SUBCASE("greedy is a heuristic: the documented suboptimal instance") {
        const std::vector<std::vector<double>> sims{{0.9, 0.8}, {0.85, 0.1}};
        const auto m = greedy_match({"a1", "a2"}, {"b1", "b2"},
                                    [&](std::size_t i, std::size_t j) { return sims[i][j]; }, 0.0);
        REQUIRE(m.links.size() == 2);
        CHECK(m.links[0].left == "a1");
        CHECK(m.links[0].right == "b1");
        CHECK(m.links[1].left == "a2");
        CHECK(m.links[1].right == "b2");
        CHECK(m.total_score == doctest::Approx(1.0));  // optimal would be 1.65
    }

    SUBCASE("threshold 1.0 with all sims below leaves nothing") {
        const auto m = greedy_match({"a"}, {"b"}, [](std::size_t, std::size_t) { return 0.99; }, 1.0);
        CHECK(m.links.empty());
        CHECK(m.total_score == 0.0);
    }

    SUBCASE("threshold bounds are validated") {
        CHECK_THROWS_AS(greedy_match({}, {}, [](std::size_t, std::size_t) { return 0.0; }, -0.1),
                        InvalidArgument);
        CHECK_THROWS_AS(greedy_match({}, {}, [](std::size_t, std::size_t) { return 0.0; }, 1.1),
                        InvalidArgument);
    }

    SUBCASE("matches the naive oracle on random instances") {
        Rng rng(404);
        for (int round = 0; round < 50; ++round) {
            const std::size_t nl = 1 + rng.bounded(8), nr = 1 + rng.bounded(8);
            std::vector<std::string> left, right;
            for (std::size_t i = 0; i < nl; ++i) left.push_back("a" + std::to_string(i + 1));
            for (std::size_t j = 0; j < nr; ++j) right.push_back("b" + std::to_string(j + 1));
            std::vector<std::vector<double>> sims(nl, std::vector<double>(nr));
            for (auto& row : sims) {
                for (auto& v : row) v = std::round(rng.real() * 100.0) / 100.0;
            }
            const double threshold = rng.bounded(2) ? 0.0 : 0.5;
            const auto got = greedy_match(
                left, right, [&](std::size_t i, std::size_t j) { return sims[i][j]; }, threshold,
                1 + static_cast<unsigned>(rng.bounded(4)));
            const auto want = naive_greedy(left, right, sims, threshold);
            REQUIRE(got.links.size() == want.links.size());
            double sum = 0.0;
            std::set<std::string> seen_left, seen_right;
            for (std::size_t k = 0; k < got.links.size(); ++k) {
                CHECK(got.links[k].left == want.links[k].left);
                CHECK(got.links[k].right == want.links[k].right);
                CHECK(got.links[k].similarity == want.links[k].similarity);
                CHECK(seen_left.insert(got.links[k].left).second);    // bipartite
                CHECK(seen_right.insert(got.links[k].right).second);
                sum += got.links[k].similarity;
            }
            CHECK(std::abs(got.total_score - sum) <= 1e-9);
        }
    }
}

TEST_CASE("evaluate_matching") {
    auto matching = [](std::initializer_list<std::pair<const char*, const char*>> links) {
        Matching m;
        for (const auto& [l, r] : links) m.links.push_back(Link{l, r, 1.0});
        return m;
    };

    SUBCASE("perfect prediction") {
        const GoldLinks gold{{"a", "x"}, {"b", "y"}};
        const auto s = evaluate_matching(matching({{"a", "x"}, {"b", "y"}}), gold);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
    }

    SUBCASE("disjoint prediction") {
        const GoldLinks gold{{"a", "x"}};
        const auto s = evaluate_matching(matching({{"a", "y"}}), gold);
        CHECK(s.precision == 0.0);
        CHECK(s.recall == 0.0);
        CHECK(s.f1 == 0.0);
    }

    SUBCASE("partial overlap: 3 of 4 predicted, 3 of 5 gold") {
        const GoldLinks gold{{"a", "1"}, {"b", "2"}, {"c", "3"}, {"d", "4"}, {"e", "5"}};
        const auto s = evaluate_matching(
            matching({{"a", "1"}, {"b", "2"}, {"c", "3"}, {"z", "9"}}), gold);
        CHECK(s.precision == doctest::Approx(0.75));
        CHECK(s.recall == doctest::Approx(0.6));
        CHECK(s.f1 == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35));
    }

    SUBCASE("empty cases") {
        CHECK(evaluate_matching(matching({}), {{"a", "x"}}).precision == 0.0);
        CHECK(evaluate_matching(matching({}), {}).f1 == 1.0);
    }
}

TEST_CASE("dataset ingestion") {
    SUBCASE("jsonl round trip") {
        std::istringstream in(
            R"({"id": "e1", "labels": {"en": ["cat", "feline"]}, "descriptions": {"en": ["a small cat"]}, "relations": [["hypernym", "e2"]], "type": "n"})"
            "\n"
            R"({"id": "e2", "labels": {"en": ["animal"]}})"
            "\n");
        const auto dataset = Dataset::parse_jsonl(in, "mem");
        CHECK(dataset.size() == 2);
        const auto* e1 = dataset.find("e1");
        REQUIRE(e1 != nullptr);
        CHECK(e1->labels.at("en") == std::vector<std::string>{"cat", "feline"});
        CHECK(e1->type == "n");
        CHECK(dataset.hypernym_closure("e1") == std::vector<std::string>{"e2"});
    }

    SUBCASE("duplicate ids and malformed rows are errors") {
        std::istringstream dup("{\"id\": \"e1\"}\n{\"id\": \"e1\"}\n");
        CHECK_THROWS_AS(Dataset::parse_jsonl(dup, "mem"), ParseError);
        std::istringstream nojson("this is not json\n");
        CHECK_THROWS_AS(Dataset::parse_jsonl(nojson, "mem"), ParseError);
        std::istringstream noid("{\"labels\": {}}\n");
        CHECK_THROWS_AS(Dataset::parse_jsonl(noid, "mem"), ParseError);
    }

    SUBCASE("gold links parse") {
        std::istringstream in("a\tx\nb\ty\n");
        const auto gold = load_gold_links(in, "mem");
        CHECK(gold == GoldLinks{{"a", "x"}, {"b", "y"}});
        std::istringstream bad("only-one-column\n");
        CHECK_THROWS_AS(load_gold_links(bad, "mem"), ParseError);
    }
}

namespace {

// Small synthetic alignment task: labels are ambiguous within groups,
// descriptions are discriminative.
void build_synthetic(Dataset& left, Dataset& right, GoldLinks& gold, std::size_t n) {
    const std::vector<std::string> groups{"station", "bridge", "tower", "garden"};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& group = groups[i % groups.size()];
        const auto tag = "item" + std::to_string(i);
        Entity l;
        l.id = "l" + std::to_string(i);
        l.labels["en"] = {group, "the " + group};
        l.descriptions["en"] = {"the " + group + " known for " + tag + " near marker " +
                                std::to_string(i)};
        left.add(std::move(l));

        Entity r;
        r.id = "r" + std::to_string(i);
        r.labels["en"] = {group + " site"};
        r.descriptions["en"] = {"a " + group + " famous for " + tag + " by marker " +
                                std::to_string(i)};
        right.add(std::move(r));
        gold.emplace("l" + std::to_string(i), "r" + std::to_string(i));
    }
}

}  // namespace

TEST_CASE("kfold evaluation") {
    Dataset left, right;
    GoldLinks gold;
    build_synthetic(left, right, gold, 30);

    KFoldConfig config;
    config.k = 5;
    config.seed = 7;
    config.features.setting = 4;

    SUBCASE("separable fixture reaches high F at setting 4") {
        const auto report = kfold_evaluate(left, right, gold, config);
        CHECK(report.folds.size() == 5);
        CHECK(report.mean.f1 >= 0.9);
    }

    SUBCASE("same seed twice gives identical report bytes") {
        const auto a = kfold_evaluate(left, right, gold, config).to_json(config);
        const auto b = kfold_evaluate(left, right, gold, config).to_json(config);
        CHECK(a == b);

        auto parallel = config;
        parallel.jobs = 4;
        CHECK(kfold_evaluate(left, right, gold, parallel).to_json(config) == a);
    }

    SUBCASE("setting 1 underperforms setting 4 here") {
        auto weak = config;
        weak.features.setting = 1;
        const auto f_weak = kfold_evaluate(left, right, gold, weak).mean.f1;
        const auto f_strong = kfold_evaluate(left, right, gold, config).mean.f1;
        CHECK(f_strong >= f_weak);
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(kfold_evaluate(left, right, gold, [&] {
                            auto c = config;
                            c.k = 1;
                            return c;
                        }()),
                        InvalidArgument);
        GoldLinks bad_gold{{"does-not-exist", "r0"}};
        CHECK_THROWS_AS(kfold_evaluate(left, right, bad_gold, config), InvalidArgument);
    }
}
