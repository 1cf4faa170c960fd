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

// Batch front end over the xlwn C API. Logs go to stderr; data goes to
// --out DIR (fixed file names) or standard output. Exit codes: 0 success,
// 1 validation error, 2 runtime error.

#include <xlwn/xlwn.h>

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"

namespace fs = std::filesystem;
using xlwncli::Config;
using xlwncli::ConfigError;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(xlwn_status status) {
    if (status == XLWN_OK) return;
    // Invalid parameters/inputs are validation failures (exit 1); broken
    // data and I/O mid-run are runtime failures (exit 2).
    if (status == XLWN_EINVAL) throw ValidationError(xlwn_last_error());
    throw RuntimeFailure(xlwn_last_error());
}

void log_line(const std::string& message) { std::cerr << "[xlwn] " << message << "\n"; }

// RAII over the C handles.
using WordnetPtr = std::unique_ptr<xlwn_wordnet, decltype(&xlwn_wordnet_close)>;
using CorpusPtr = std::unique_ptr<xlwn_corpus, decltype(&xlwn_corpus_close)>;
using IndexPtr = std::unique_ptr<xlwn_index, decltype(&xlwn_index_close)>;
using TablePtr = std::unique_ptr<xlwn_phrase_table, decltype(&xlwn_phrase_table_close)>;
using DatasetPtr = std::unique_ptr<xlwn_dataset, decltype(&xlwn_dataset_close)>;
using EmbeddingsPtr = std::unique_ptr<xlwn_embeddings, decltype(&xlwn_embeddings_close)>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    xlwn_string_free(s);
    return out;
}

// Flag overrides; a flag beats its config key, which beats the default.
struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> jobs;
    std::string out_dir;
    std::optional<std::uint32_t> n_min, m, t, max_n, k;
    std::optional<double> threshold, alpha;
    std::optional<int> setting;
};

struct Run {
    Config config;
    const CommonArgs& args;

    explicit Run(const CommonArgs& a) : args(a) {
        if (!a.config_path.empty()) config = Config::load(a.config_path);
    }

    std::uint64_t seed() const {
        if (args.seed) return *args.seed;
        if (const auto v = config.get_int("seed")) return static_cast<std::uint64_t>(*v);
        return 0;
    }
    std::uint32_t jobs() const {
        if (args.jobs) return *args.jobs;
        if (const auto v = config.get_int("jobs")) return static_cast<std::uint32_t>(*v);
        return 1;
    }
    std::uint32_t n_min() const {
        if (args.n_min) return *args.n_min;
        if (const auto v = config.get_int("disambig.n_min")) return static_cast<std::uint32_t>(*v);
        return 2;
    }
    std::uint32_t m() const {
        if (args.m) return *args.m;
        if (const auto v = config.get_int("disambig.m")) return static_cast<std::uint32_t>(*v);
        return 5;
    }
    std::uint32_t t() const {
        if (args.t) return *args.t;
        if (const auto v = config.get_int("translate.t")) return static_cast<std::uint32_t>(*v);
        return 5;
    }
    std::uint32_t max_n() const {
        if (args.max_n) return *args.max_n;
        if (const auto v = config.get_int("index.max_n")) return static_cast<std::uint32_t>(*v);
        return 4;
    }
    std::uint32_t k() const {
        if (args.k) return *args.k;
        if (const auto v = config.get_int("align.k")) return static_cast<std::uint32_t>(*v);
        return 10;
    }
    double threshold() const {
        if (args.threshold) return *args.threshold;
        if (const auto v = config.get_real("align.threshold")) return *v;
        return 0.5;
    }
    double alpha() const {
        if (args.alpha) return *args.alpha;
        if (const auto v = config.get_real("align.alpha")) return *v;
        return 1.0;
    }
    int setting() const {
        if (args.setting) return *args.setting;
        if (const auto v = config.get_int("align.setting")) return static_cast<int>(*v);
        return 4;
    }
    bool brevity_penalty() const {
        if (const auto v = config.get_bool("metrics.brevity_penalty")) return *v;
        return true;
    }
    bool direct_only() const {
        if (const auto v = config.get_bool("translate.direct")) return *v;
        return false;
    }

    std::string required_path(const std::string& key) const {
        const auto p = config.get_path(key);
        if (!p) throw ValidationError("missing config key '" + key + "'");
        if (!fs::exists(*p)) throw ValidationError("config key '" + key + "': no such file: " + *p);
        return *p;
    }
    std::optional<std::string> optional_path(const std::string& key) const {
        const auto p = config.get_path(key);
        if (p && !fs::exists(*p)) {
            throw ValidationError("config key '" + key + "': no such file: " + *p);
        }
        return p;
    }
    std::string required_value(const std::string& key) const {
        const auto v = config.get(key);
        if (!v || v->empty()) throw ValidationError("missing config key '" + key + "'");
        return *v;
    }

    // Emits one artifact: to --out/<name> when an output directory is set,
    // to stdout otherwise.
    void emit(const std::string& name, const std::string& content) const {
        if (args.out_dir.empty()) {
            std::cout << content;
            std::cout.flush();
            return;
        }
        fs::create_directories(args.out_dir);
        const auto path = (fs::path(args.out_dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw RuntimeFailure("cannot write " + path);
        out << content;
        out.flush();
        if (!out) throw RuntimeFailure("write failed: " + path);
        log_line("wrote " + path);
    }

    std::string out_file(const std::string& name) const {
        if (args.out_dir.empty()) {
            throw ValidationError("this subcommand writes multiple artifacts; pass --out DIR");
        }
        fs::create_directories(args.out_dir);
        return (fs::path(args.out_dir) / name).string();
    }
};

WordnetPtr open_wordnet(const Run& run) {
    const auto lemmas = run.required_path("wordnet.lemmas");
    const auto defs = run.optional_path("wordnet.definitions");
    const auto rels = run.optional_path("wordnet.relations");
    xlwn_wordnet* wn = nullptr;
    check(xlwn_wordnet_open(lemmas.c_str(), defs ? defs->c_str() : nullptr,
                            rels ? rels->c_str() : nullptr, &wn));
    return WordnetPtr(wn, &xlwn_wordnet_close);
}

CorpusPtr open_corpus(const Run& run) {
    const auto files = run.config.corpus_files();
    if (files.size() < 2) {
        throw ValidationError("need at least two corpus.<lang> entries (including corpus.en)");
    }
    std::vector<const char*> langs, paths;
    for (const auto& [lang, path] : files) {
        if (!fs::exists(path)) {
            throw ValidationError("config key 'corpus." + lang + "': no such file: " + path);
        }
        langs.push_back(lang.c_str());
        paths.push_back(path.c_str());
    }
    xlwn_corpus* corpus = nullptr;
    check(xlwn_corpus_open(langs.data(), paths.data(), langs.size(), &corpus));
    log_line("loaded corpus: " + std::to_string(xlwn_corpus_size(corpus)) + " tuples, " +
             std::to_string(files.size()) + " languages");
    return CorpusPtr(corpus, &xlwn_corpus_close);
}

// Loads the serialized index when index.path is configured, else builds one.
IndexPtr open_index(const Run& run, const xlwn_corpus* corpus) {
    xlwn_index* index = nullptr;
    if (const auto path = run.optional_path("index.path")) {
        check(xlwn_index_load(path->c_str(), &index));
        log_line("loaded index from " + *path);
    } else {
        check(xlwn_index_build(corpus, run.max_n(), &index));
        log_line("built index (max_n=" + std::to_string(run.max_n()) + ")");
    }
    return IndexPtr(index, &xlwn_index_close);
}

EmbeddingsPtr open_embeddings(const Run& run) {
    if (const auto path = run.optional_path("align.embeddings")) {
        xlwn_embeddings* e = nullptr;
        check(xlwn_embeddings_open(path->c_str(), &e));
        return EmbeddingsPtr(e, &xlwn_embeddings_close);
    }
    return EmbeddingsPtr(nullptr, &xlwn_embeddings_close);
}

DatasetPtr open_dataset(const Run& run, const std::string& key) {
    const auto path = run.required_path(key);
    xlwn_dataset* d = nullptr;
    check(xlwn_dataset_open(path.c_str(), &d));
    return DatasetPtr(d, &xlwn_dataset_close);
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_stats(const Run& run) {
    const auto wn = open_wordnet(run);
    char* langs_raw = nullptr;
    check(xlwn_wordnet_languages(wn.get(), &langs_raw));
    const auto joined = take_string(langs_raw);

    std::string out = "language\tsynsets\twords\tsenses\n";
    std::size_t start = 0;
    while (start <= joined.size() && !joined.empty()) {
        const auto nl = joined.find('\n', start);
        const auto lang = joined.substr(start, nl == std::string::npos ? nl : nl - start);
        if (!lang.empty()) {
            uint64_t synsets = 0, words = 0, senses = 0;
            check(xlwn_wordnet_stats(wn.get(), lang.c_str(), &synsets, &words, &senses));
            out += lang + "\t" + std::to_string(synsets) + "\t" + std::to_string(words) + "\t" +
                   std::to_string(senses) + "\n";
        }
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    run.emit("stats.tsv", out);
    return 0;
}

int cmd_index(const Run& run) {
    const auto corpus = open_corpus(run);
    xlwn_index* index = nullptr;
    check(xlwn_index_build(corpus.get(), run.max_n(), &index));
    IndexPtr guard(index, &xlwn_index_close);

    if (run.args.out_dir.empty()) {
        // Binary to stdout for pipelines.
        const auto tmp = fs::temp_directory_path() /
                         ("xlwn_index." + std::to_string(::getpid()) + ".tmp");
        check(xlwn_index_save(index, tmp.string().c_str()));
        std::ifstream in(tmp, std::ios::binary);
        std::cout << in.rdbuf();
        std::cout.flush();
        fs::remove(tmp);
    } else {
        const auto path = run.out_file("phrase_index.bin");
        check(xlwn_index_save(index, path.c_str()));
        log_line("wrote " + path);
    }
    return 0;
}

int cmd_disambiguate(const Run& run) {
    const auto wn = open_wordnet(run);
    const auto corpus = open_corpus(run);
    const auto index = open_index(run, corpus.get());
    char* tsv = nullptr;
    check(xlwn_disambiguate_all(wn.get(), corpus.get(), index.get(), run.n_min(), run.m(),
                                run.seed(), run.jobs(), &tsv));
    run.emit("contexts.tsv", take_string(tsv));
    return 0;
}

int cmd_translate(const Run& run) {
    const auto lexicon_path = run.out_file("lexicon.tsv");
    const auto report_path = run.out_file("translate_report.json");

    const auto wn = open_wordnet(run);
    const auto corpus = open_corpus(run);
    const auto index = open_index(run, corpus.get());
    const auto table_path = run.required_path("translate.table");
    const auto target = run.required_value("translate.target");
    xlwn_phrase_table* table = nullptr;
    check(xlwn_phrase_table_open(table_path.c_str(), target.c_str(), &table));
    TablePtr table_guard(table, &xlwn_phrase_table_close);

    char* lexicon = nullptr;
    char* report = nullptr;
    check(xlwn_translate_wordnet(wn.get(), corpus.get(), index.get(), table, run.n_min(), run.m(),
                                 run.t(), run.seed(), run.direct_only() ? 1 : 0, run.jobs(),
                                 &lexicon, &report));
    const auto lexicon_text = take_string(lexicon);
    const auto report_text = take_string(report);

    std::ofstream lex_out(lexicon_path, std::ios::binary);
    lex_out << lexicon_text;
    std::ofstream rep_out(report_path, std::ios::binary);
    rep_out << report_text;
    if (!lex_out || !rep_out) throw RuntimeFailure("write failed under " + run.args.out_dir);
    log_line("wrote " + lexicon_path);
    log_line("wrote " + report_path);
    return 0;
}

int cmd_evaluate(const Run& run) {
    const auto hyp_path = run.required_path("evaluate.hypothesis");
    const auto gold_path = run.required_path("evaluate.gold");
    const auto lang = run.required_value("evaluate.lang");

    xlwn_wordnet* hyp = nullptr;
    check(xlwn_wordnet_open(hyp_path.c_str(), nullptr, nullptr, &hyp));
    WordnetPtr hyp_guard(hyp, &xlwn_wordnet_close);
    xlwn_wordnet* gold = nullptr;
    check(xlwn_wordnet_open(gold_path.c_str(), nullptr, nullptr, &gold));
    WordnetPtr gold_guard(gold, &xlwn_wordnet_close);

    double bleu = 0.0, meteor = 0.0, chrf = 0.0;
    uint64_t senses = 0;
    check(xlwn_evaluate_lexicon(hyp, gold, lang.c_str(), run.brevity_penalty() ? 1 : 0, &bleu,
                                &meteor, &chrf, &senses));

    char row[160];
    std::snprintf(row, sizeof(row), "%s\t%.1f\t%.1f\t%.1f\t%llu\n", lang.c_str(), bleu, meteor,
                  chrf, static_cast<unsigned long long>(senses));
    const std::string tsv = std::string("language\tbleu1\tmeteor\tchrf\tsenses\n") + row;

    char json[256];
    std::snprintf(json, sizeof(json),
                  "{\"language\": \"%s\", \"bleu1\": %.1f, \"meteor\": %.1f, \"chrf\": %.1f, "
                  "\"senses\": %llu}\n",
                  lang.c_str(), bleu, meteor, chrf, static_cast<unsigned long long>(senses));

    if (run.args.out_dir.empty()) {
        std::cout << tsv;
        std::cout.flush();
    } else {
        run.emit("evaluation.tsv", tsv);
        run.emit("evaluation.json", json);
    }
    return 0;
}

int cmd_train_align(const Run& run) {
    const auto model_path = run.out_file("similarity_model.txt");
    const auto report_path = run.out_file("train_report.json");

    const auto left = open_dataset(run, "align.left");
    const auto right = open_dataset(run, "align.right");
    const auto gold = run.required_path("align.gold");
    const auto embeddings = open_embeddings(run);
    const auto negation = run.optional_path("align.negation_words");
    const auto lang = run.config.get("align.lang").value_or("en");

    char* report = nullptr;
    check(xlwn_train_alignment(left.get(), right.get(), gold.c_str(), run.setting(), run.alpha(),
                               lang.c_str(), embeddings.get(),
                               negation ? negation->c_str() : nullptr, model_path.c_str(),
                               &report));
    const auto report_text = take_string(report);
    std::ofstream rep_out(report_path, std::ios::binary);
    rep_out << report_text;
    if (!rep_out) throw RuntimeFailure("write failed: " + report_path);
    log_line("wrote " + model_path);
    log_line("wrote " + report_path);
    log_line("train report: " + report_text);
    return 0;
}

int cmd_align(const Run& run) {
    const auto left = open_dataset(run, "align.left");
    const auto right = open_dataset(run, "align.right");
    const auto model = run.required_path("align.model");
    const auto embeddings = open_embeddings(run);
    const auto negation = run.optional_path("align.negation_words");

    char* tsv = nullptr;
    double total = 0.0;
    check(xlwn_align(left.get(), right.get(), model.c_str(), embeddings.get(), run.threshold(),
                     negation ? negation->c_str() : nullptr, run.jobs(), &tsv, &total));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", total);
    log_line("matching score: " + std::string(buf));
    run.emit("alignment.tsv", take_string(tsv));
    return 0;
}

int cmd_cv(const Run& run) {
    const auto left = open_dataset(run, "align.left");
    const auto right = open_dataset(run, "align.right");
    const auto gold = run.required_path("align.gold");
    const auto embeddings = open_embeddings(run);
    const auto negation = run.optional_path("align.negation_words");
    const auto lang = run.config.get("align.lang").value_or("en");

    char* report = nullptr;
    check(xlwn_kfold(left.get(), right.get(), gold.c_str(), run.k(), run.seed(), run.setting(),
                     run.threshold(), run.alpha(), lang.c_str(), embeddings.get(),
                     negation ? negation->c_str() : nullptr, run.jobs(), &report));
    run.emit("cv_report.json", take_string(report));
    return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Config file (flat dotted keys)");
    cmd->add_option("--seed", args.seed, "Random seed (default 0)");
    cmd->add_option("--jobs", args.jobs, "Worker threads; never changes output bytes (default 1)");
    cmd->add_option("--out", args.out_dir, "Output directory (default: stdout where possible)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xlwn - wordnet translation, evaluation and linking toolkit"};
    app.set_version_flag("--version", []() { return std::string(xlwn_version()); });
    app.require_subcommand(1);
    CommonArgs args;

    auto* stats = app.add_subcommand("stats", "Wordnet statistics per language");
    add_common(stats, args);

    auto* index = app.add_subcommand("index", "Build and serialize the phrase index");
    add_common(index, args);
    index->add_option("--max-n", args.max_n, "Longest indexed n-gram (default 4)");

    auto* disambiguate =
        app.add_subcommand("disambiguate", "Dump disambiguated contexts per English sense");
    add_common(disambiguate, args);
    disambiguate->add_option("--n-min", args.n_min, "Required witness languages (default 2)");
    disambiguate->add_option("--m", args.m, "Top contexts kept per sense (default 5)");
    disambiguate->add_option("--max-n", args.max_n, "Longest indexed n-gram (default 4)");

    auto* translate = app.add_subcommand("translate", "Translate the wordnet into a target language");
    add_common(translate, args);
    translate->add_option("--n-min", args.n_min, "Required witness languages (default 2)");
    translate->add_option("--m", args.m, "Contexts used per sense (default 5)");
    translate->add_option("--t", args.t, "t-best candidates per context (default 5)");
    translate->add_option("--max-n", args.max_n, "Longest indexed n-gram (default 4)");

    auto* evaluate = app.add_subcommand("evaluate", "Score a translated lexicon against gold");
    add_common(evaluate, args);

    auto* train = app.add_subcommand("train-align", "Train the similarity classifier");
    add_common(train, args);
    train->add_option("--setting", args.setting, "Feature ladder setting 1..8 (default 4)");
    train->add_option("--alpha", args.alpha, "Smoothed Jaccard alpha (default 1.0)");

    auto* align = app.add_subcommand("align", "Match two entity datasets with a trained model");
    add_common(align, args);
    align->add_option("--threshold", args.threshold, "Minimum similarity to link (default 0.5)");

    auto* cv = app.add_subcommand("cv", "k-fold cross-validation of the alignment settings");
    add_common(cv, args);
    cv->add_option("--k", args.k, "Number of folds (default 10)");
    cv->add_option("--setting", args.setting, "Feature ladder setting 1..8 (default 4)");
    cv->add_option("--alpha", args.alpha, "Smoothed Jaccard alpha (default 1.0)");
    cv->add_option("--threshold", args.threshold, "Minimum similarity to link (default 0.5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message and usage hint
        return 1;
    }

    try {
        const Run run(args);
        if (stats->parsed()) return cmd_stats(run);
        if (index->parsed()) return cmd_index(run);
        if (disambiguate->parsed()) return cmd_disambiguate(run);
        if (translate->parsed()) return cmd_translate(run);
        if (evaluate->parsed()) return cmd_evaluate(run);
        if (train->parsed()) return cmd_train_align(run);
        if (align->parsed()) return cmd_align(run);
        if (cv->parsed()) return cmd_cv(run);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const RuntimeFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
