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

#include <sstream>

#include "helpers.hpp"
#include "translate.hpp"

using namespace xlwn;
using testutil::corpus_from_lines;
using testutil::wordnet_from_tsv;

namespace {

PhraseTableBackend table_from(const std::string& text, const char* lang = "es") {
    std::istringstream in(text);
    return PhraseTableBackend::parse(in, "table", LanguageCode(lang));
}

const std::string kBankTable =
    "bank ||| banco ||| 0.6\n"
    "bank ||| orilla ||| 0.3\n";

}  // namespace

TEST_CASE("phrase table parsing") {
    SUBCASE("rows are sorted by probability") {
        const auto backend = table_from(
            "bank ||| orilla ||| 0.3\n"
            "bank ||| banco ||| 0.6\n");
        const auto row = backend.table().at("bank");
        REQUIRE(row.size() == 2);
        CHECK(row[0].target == "banco");
        CHECK(row[1].target == "orilla");
    }

    SUBCASE("surface forms are normalized through the tokenizer") {
        const auto backend = table_from("The Bank ||| El Banco! ||| 0.5\n");
        CHECK(backend.table().count("the bank") == 1);
        CHECK(backend.table().at("the bank")[0].target == "el banco");
    }

    SUBCASE("bad probabilities are rejected with a line number") {
        for (const char* row : {"a ||| b ||| 0\n", "a ||| b ||| 1.5\n", "a ||| b ||| x\n",
                                "a ||| b ||| -0.2\n", "a ||| b ||| 0.5junk\n", "a ||| b |||\n"}) {
            CHECK_THROWS_AS(table_from(row), ParseError);
        }
        CHECK(table_from("a ||| b ||| 0.5 \n").table().count("a") == 1);  // trailing blank ok
        try {
            table_from("a ||| b ||| 0.5\nc ||| d ||| nope\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }

    SUBCASE("malformed separators are rejected") {
        CHECK_THROWS_AS(table_from("a || b || 0.5\n"), ParseError);
        CHECK_THROWS_AS(table_from("a ||| b\n"), ParseError);
    }
}

TEST_CASE("translate_with_focus") {
    const auto backend = table_from(kBankTable);
    const auto sentence = tokenize("bank");
    const TokenSpan whole{0, 1};

    SUBCASE("t-best list in score order") {
        const auto candidates = translate_with_focus(backend, sentence, whole, 2);
        REQUIRE(candidates.size() == 2);
        CHECK(candidates[0].target_phrase == "banco");
        CHECK(candidates[0].model_score == doctest::Approx(0.6));
        CHECK(candidates[1].target_phrase == "orilla");
        CHECK(candidates[1].model_score == doctest::Approx(0.3));
    }

    SUBCASE("t truncates") {
        const auto candidates = translate_with_focus(backend, sentence, whole, 1);
        REQUIRE(candidates.size() == 1);
        CHECK(candidates[0].target_phrase == "banco");
    }

    SUBCASE("missing focus phrase yields an empty list") {
        const auto missing = tokenize("riverbank");
        CHECK(translate_with_focus(backend, missing, whole, 2).empty());
    }

    SUBCASE("invalid spans and t are rejected") {
        CHECK_THROWS_AS(translate_with_focus(backend, sentence, TokenSpan{0, 2}, 1), InvalidArgument);
        CHECK_THROWS_AS(translate_with_focus(backend, sentence, TokenSpan{1, 1}, 1), InvalidArgument);
        CHECK_THROWS_AS(translate_with_focus(backend, sentence, whole, 0), InvalidArgument);
    }

    SUBCASE("a longer table row covering the focus wins over the bare focus row") {
        const auto wide = table_from(kBankTable + "river bank ||| orilla ||| 0.9\n");
        const auto in_context = tokenize("the river bank today");
        const auto candidates = translate_with_focus(wide, in_context, TokenSpan{2, 3}, 2);
        REQUIRE(candidates.size() == 1);
        CHECK(candidates[0].target_phrase == "orilla");
        CHECK(candidates[0].full_translation == "the orilla today");

        // Without the wider row the focus row is used as-is.
        const auto narrow = table_from(kBankTable);
        const auto plain = translate_with_focus(narrow, in_context, TokenSpan{2, 3}, 2);
        REQUIRE(plain.size() == 2);
        CHECK(plain[0].target_phrase == "banco");
    }
}

TEST_CASE("vote") {
    auto cand = [](const char* phrase, double score) {
        return TranslationCandidate{phrase, "", score};
    };

    SUBCASE("most frequent wins") {
        const auto winner = vote({{cand("banco", 0.6), cand("banca", 0.3)},
                                  {cand("banco", 0.5), cand("entidad", 0.2)}});
        REQUIRE(winner.has_value());
        CHECK(*winner == "banco");
    }

    SUBCASE("count tie resolved by summed score") {
        const auto winner = vote({{cand("a", 0.6)}, {cand("b", 0.9)}});
        REQUIRE(winner.has_value());
        CHECK(*winner == "b");
    }

    SUBCASE("full tie resolved lexicographically") {
        const auto winner = vote({{cand("zeta", 0.4)}, {cand("alfa", 0.4)}});
        REQUIRE(winner.has_value());
        CHECK(*winner == "alfa");
    }

    SUBCASE("empty pool yields nothing") {
        CHECK(!vote({{}, {}}).has_value());
        CHECK(!vote({}).has_value());
    }

    SUBCASE("permutation invariance") {
        std::vector<std::vector<TranslationCandidate>> contexts = {
            {cand("uno", 0.5), cand("dos", 0.4), cand("tres", 0.3)},
            {cand("dos", 0.45), cand("uno", 0.2)},
            {cand("tres", 0.9)},
        };
        const auto baseline = vote(contexts);
        Rng rng(9);
        for (int round = 0; round < 30; ++round) {
            auto shuffled = contexts;
            for (std::size_t i = shuffled.size(); i > 1; --i) {
                std::swap(shuffled[i - 1], shuffled[rng.bounded(i)]);
            }
            for (auto& list : shuffled) {
                for (std::size_t i = list.size(); i > 1; --i) {
                    std::swap(list[i - 1], list[rng.bounded(i)]);
                }
            }
            CHECK(vote(shuffled) == baseline);
        }
    }
}

namespace {

struct Fixture {
    MultilingualWordnet wn = wordnet_from_tsv(
        "00001740-n\ten\tbank\n"
        "00001740-n\tes\torilla\n"
        "00001740-n\tfr\trive\n"
        "00002000-n\ten\tbank\n"
        "00002000-n\tes\tbanco\n"
        "00002000-n\tfr\tbanque\n"
        "00003000-n\ten\tcat\n"
        "00003000-n\tes\tgato\n"
        "00003000-n\tfr\tchat\n"
        "00004000-n\ten\tglacier\n");
    ParallelCorpus corpus = corpus_from_lines({
        {"en",
         {"the river bank was muddy", "a river bank near the village", "the bank charged a fee",
          "the bank opened late", "a cat slept", "the cat purred"}},
        {"es",
         {"la orilla estaba lodosa", "una orilla cerca del pueblo", "el banco cobró una cuota",
          "el banco abrió tarde", "un gato dormía", "el gato ronroneaba"}},
        {"fr",
         {"la rive était boueuse", "une rive près du village", "la banque a facturé des frais",
          "la banque a ouvert tard", "un chat dormait", "le chat ronronnait"}},
    });
    PhraseIndex index = PhraseIndex::build(corpus, 4);
    PhraseTableBackend backend = table_from(
        "bank ||| banco ||| 0.6\n"
        "bank ||| orilla ||| 0.3\n"
        "river bank ||| orilla ||| 0.9\n"
        "cat ||| gato ||| 0.9\n");

    Sense sense(const char* synset, const char* lemma) const {
        return Sense{SynsetId::parse(synset), LanguageCode("en"), lemma};
    }

    TranslateOptions options(std::uint32_t n_min = 2, std::uint32_t m = 5, std::uint32_t t = 2,
                             std::uint64_t seed = 1) const {
        TranslateOptions o;
        o.disambig = DisambigConfig{n_min, m, seed};
        o.t = t;
        return o;
    }
};

}  // namespace

TEST_CASE("translate_sense pipeline") {
    const Fixture fx;

    SUBCASE("contexts disambiguate the ambiguous lemma") {
        const auto river = translate_sense(fx.wn, fx.corpus, fx.index, fx.backend,
                                           fx.sense("00001740-n", "bank"), fx.options());
        REQUIRE(river.has_value());
        CHECK(river->target_lemma == "orilla");
        CHECK(!river->provenance.fallback);
        CHECK(river->provenance.contexts_used == 2);

        const auto financial = translate_sense(fx.wn, fx.corpus, fx.index, fx.backend,
                                               fx.sense("00002000-n", "bank"), fx.options());
        REQUIRE(financial.has_value());
        CHECK(financial->target_lemma == "banco");
        CHECK(!financial->provenance.fallback);
    }

    SUBCASE("bare-lemma fallback when no context exists") {
        // "cat" tuples have no Spanish witness for a wordnet without es lemmas.
        const auto wn = wordnet_from_tsv("00003000-n\ten\tcat\n");
        const auto result = translate_sense(wn, fx.corpus, fx.index, fx.backend,
                                            Sense{SynsetId::parse("00003000-n"), LanguageCode("en"), "cat"},
                                            fx.options());
        REQUIRE(result.has_value());
        CHECK(result->target_lemma == "gato");
        CHECK(result->provenance.fallback);
        CHECK(result->provenance.contexts_used == 0);
    }

    SUBCASE("untranslatable sense reports nothing") {
        const auto result = translate_sense(fx.wn, fx.corpus, fx.index, fx.backend,
                                            fx.sense("00004000-n", "glacier"), fx.options());
        CHECK(!result.has_value());
    }

    SUBCASE("without a wider table row, context voting falls back to the frequent sense") {
        // A table keyed only on the bare lemma cannot profit from context:
        // every context returns the same list and the top candidate wins.
        const auto narrow = table_from(
            "bank ||| banco ||| 0.6\n"
            "bank ||| orilla ||| 0.3\n");
        const auto river = translate_sense(fx.wn, fx.corpus, fx.index, narrow,
                                           fx.sense("00001740-n", "bank"), fx.options());
        REQUIRE(river.has_value());
        CHECK(river->target_lemma == "banco");
        CHECK(!river->provenance.fallback);
    }

    SUBCASE("direct mode forces the fallback and mistranslates the river sense") {
        auto options = fx.options();
        options.direct_only = true;
        const auto river = translate_sense(fx.wn, fx.corpus, fx.index, fx.backend,
                                           fx.sense("00001740-n", "bank"), options);
        REQUIRE(river.has_value());
        CHECK(river->target_lemma == "banco");
        CHECK(river->provenance.fallback);
    }

    SUBCASE("m=1, t=1 degenerates to translating the top context directly") {
        const auto options = fx.options(2, 1, 1);
        const auto sense = fx.sense("00001740-n", "bank");
        const auto result = translate_sense(fx.wn, fx.corpus, fx.index, fx.backend, sense, options);
        REQUIRE(result.has_value());

        DisambigConfig cfg = options.disambig;
        cfg.seed = derive_seed(options.disambig.seed, sense.synset.str() + "\x1f" + sense.lemma);
        const auto top = select_top_m(
            disambiguated_contexts(fx.wn, fx.corpus, fx.index, sense, cfg.n_min), cfg);
        REQUIRE(top.size() == 1);
        const auto direct = translate_with_focus(
            fx.backend, *fx.corpus.sentence(top[0].tuple_id, LanguageCode("en")), top[0].focus, 1);
        REQUIRE(direct.size() == 1);
        CHECK(result->target_lemma == direct[0].target_phrase);
    }

    SUBCASE("candidate pool never exceeds t*m") {
        for (std::uint32_t m : {1u, 2u, 3u}) {
            for (std::uint32_t t : {1u, 2u, 4u}) {
                const auto result = translate_sense(fx.wn, fx.corpus, fx.index, fx.backend,
                                                    fx.sense("00001740-n", "bank"),
                                                    fx.options(2, m, t));
                REQUIRE(result.has_value());
                CHECK(result->provenance.candidates_seen <= t * m);
            }
        }
    }
}

TEST_CASE("translate_wordnet") {
    const Fixture fx;

    SUBCASE("coverage report") {
        const auto result =
            translate_wordnet(fx.wn, fx.corpus, fx.index, fx.backend, fx.options());
        CHECK(result.report.translated == 3);
        CHECK(result.report.untranslated == 1);
        CHECK(result.report.untranslated_ids ==
              std::vector<std::string>{"00004000-n:glacier"});
        CHECK(result.lexicon.lemmas_of(SynsetId::parse("00001740-n"), LanguageCode("es")) ==
              std::vector<std::string>{"orilla"});
        CHECK(result.lexicon.lemmas_of(SynsetId::parse("00002000-n"), LanguageCode("es")) ==
              std::vector<std::string>{"banco"});

        const std::string json = result.report.to_json();
        CHECK(json.find("\"untranslated\": 1") != std::string::npos);
    }

    SUBCASE("two table gaps are both listed") {
        const auto gapped = table_from(
            "bank ||| banco ||| 0.6\n"
            "bank ||| orilla ||| 0.3\n"
            "river bank ||| orilla ||| 0.9\n");  // no cat row, no glacier row
        const auto result =
            translate_wordnet(fx.wn, fx.corpus, fx.index, gapped, fx.options());
        CHECK(result.report.untranslated == 2);
        CHECK(result.report.untranslated_ids ==
              std::vector<std::string>{"00003000-n:cat", "00004000-n:glacier"});
    }

    SUBCASE("empty wordnet yields an empty lexicon") {
        const MultilingualWordnet empty;
        const auto result =
            translate_wordnet(empty, fx.corpus, fx.index, fx.backend, fx.options());
        CHECK(result.lexicon.empty());
        CHECK(result.report.translated == 0);
    }

    SUBCASE("byte-identical output for any job count") {
        auto serialize = [](const TranslateResult& r) {
            std::ostringstream out;
            r.lexicon.serialize(out, nullptr, nullptr);
            return out.str() + r.report.to_json();
        };
        const auto once = serialize(
            translate_wordnet(fx.wn, fx.corpus, fx.index, fx.backend, fx.options(), 1));
        const auto again = serialize(
            translate_wordnet(fx.wn, fx.corpus, fx.index, fx.backend, fx.options(), 1));
        const auto parallel = serialize(
            translate_wordnet(fx.wn, fx.corpus, fx.index, fx.backend, fx.options(), 4));
        CHECK(once == again);
        CHECK(once == parallel);
    }
}
