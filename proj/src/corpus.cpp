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

#include "corpus.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "utf8.hpp"

namespace xlwn {

TokenizedSentence tokenize(std::string_view text) {
    TokenizedSentence out;
    out.raw.assign(text);

    const auto cps = utf8::decode(text);
    std::vector<char32_t> piece;
    auto flush = [&]() {
        if (piece.empty()) return;
        std::size_t b = 0, e = piece.size();
        while (b < e && utf8::is_punct(piece[b])) ++b;
        while (e > b && utf8::is_punct(piece[e - 1])) --e;
        if (e > b) {
            std::string token;
            for (std::size_t i = b; i < e; ++i) utf8::append(token, piece[i]);
            out.tokens.push_back(std::move(token));
        }
        piece.clear();
    };
    for (char32_t cp : cps) {
        if (utf8::is_space(cp)) {
            flush();
        } else {
            piece.push_back(utf8::to_lower(cp));
        }
    }
    flush();
    return out;
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
        if (i > begin) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

ParallelCorpus ParallelCorpus::load(const std::vector<std::pair<LanguageCode, std::istream*>>& files) {
    if (files.size() < 2) throw InvalidArgument("a parallel corpus needs at least 2 languages");

    // Pivot first, the rest in sorted order.
    std::vector<LanguageCode> langs;
    const LanguageCode english("en");
    bool has_en = false;
    for (const auto& [lang, stream] : files) {
        if (lang == english) {
            has_en = true;
        } else {
            langs.push_back(lang);
        }
    }
    if (!has_en) throw InvalidArgument("a parallel corpus must include the pivot language \"en\"");
    std::sort(langs.begin(), langs.end());
    if (std::adjacent_find(langs.begin(), langs.end()) != langs.end()) {
        throw InvalidArgument("duplicate language in parallel corpus");
    }
    langs.insert(langs.begin(), english);

    ParallelCorpus corpus;
    corpus.languages_ = langs;

    std::vector<std::vector<std::string>> lines(langs.size());
    for (const auto& [lang, stream] : files) {
        const auto pos = std::find(langs.begin(), langs.end(), lang) - langs.begin();
        std::string line;
        while (std::getline(*stream, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines[pos].push_back(line);
        }
    }

    const std::size_t n = lines[0].size();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].size() != n) {
            throw ParseError(langs[i].str(), lines[i].size(),
                             "line count mismatch: " + langs[0].str() + " has " + std::to_string(n) +
                                 " lines, " + langs[i].str() + " has " + std::to_string(lines[i].size()));
        }
    }

    corpus.tuples_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ParallelTuple tuple;
        tuple.id = static_cast<std::uint32_t>(i);
        tuple.sentences.reserve(langs.size());
        for (std::size_t l = 0; l < langs.size(); ++l) {
            tuple.sentences.push_back(tokenize(lines[l][i]));
        }
        corpus.tuples_.push_back(std::move(tuple));
    }
    return corpus;
}

ParallelCorpus ParallelCorpus::load_files(const std::vector<std::pair<LanguageCode, std::string>>& paths) {
    std::vector<std::ifstream> streams;
    streams.reserve(paths.size());
    std::vector<std::pair<LanguageCode, std::istream*>> files;
    for (const auto& [lang, path] : paths) {
        streams.emplace_back(path, std::ios::binary);
        if (!streams.back()) throw IoError("cannot open corpus file: " + path);
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
        files.emplace_back(paths[i].first, &streams[i]);
    }
    return load(files);
}

int ParallelCorpus::language_index(const LanguageCode& lang) const {
    for (std::size_t i = 0; i < languages_.size(); ++i) {
        if (languages_[i] == lang) return static_cast<int>(i);
    }
    return -1;
}

const TokenizedSentence* ParallelCorpus::sentence(std::uint32_t tuple_id, const LanguageCode& lang) const {
    if (tuple_id >= tuples_.size()) return nullptr;
    const int li = language_index(lang);
    if (li < 0) return nullptr;
    return &tuples_[tuple_id].sentences[static_cast<std::size_t>(li)];
}

PhraseIndex PhraseIndex::build(const ParallelCorpus& corpus, std::uint32_t max_n) {
    if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
    PhraseIndex index;
    index.max_n_ = max_n;
    for (std::size_t l = 0; l < corpus.languages().size(); ++l) {
        auto& lang_postings = index.postings_[corpus.languages()[l]];
        for (const auto& tuple : corpus.tuples()) {
            const auto& tokens = tuple.sentences[l].tokens;
            for (std::size_t start = 0; start < tokens.size(); ++start) {
                std::string key;
                for (std::size_t n = 1; n <= max_n && start + n <= tokens.size(); ++n) {
                    if (n > 1) key.push_back(' ');
                    key += tokens[start + n - 1];
                    auto& list = lang_postings[key];
                    if (list.empty() || list.back() != tuple.id) list.push_back(tuple.id);
                }
            }
        }
    }
    return index;
}

const std::vector<std::uint32_t>* PhraseIndex::find_tokens(const LanguageCode& lang,
                                                           const std::vector<std::string>& tokens) const {
    if (tokens.empty()) return nullptr;
    if (tokens.size() > max_n_) {
        throw InvalidArgument("phrase has " + std::to_string(tokens.size()) +
                              " tokens but the index holds n-grams up to " + std::to_string(max_n_) +
                              "; rebuild the index with a larger max_n");
    }
    auto lit = postings_.find(lang);
    if (lit == postings_.end()) return nullptr;
    auto it = lit->second.find(join_tokens(tokens, 0, tokens.size()));
    if (it == lit->second.end()) return nullptr;
    return &it->second;
}

std::vector<std::uint32_t> PhraseIndex::find(const LanguageCode& lang, std::string_view phrase) const {
    const auto sent = tokenize(phrase);
    const auto* list = find_tokens(lang, sent.tokens);
    return list ? *list : std::vector<std::uint32_t>{};
}

namespace {

constexpr char kMagic[8] = {'X', 'L', 'W', 'N', 'P', 'I', 'D', 'X'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(buf), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

void put_str(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& in, const std::string& name) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) throw ParseError(name, 0, "truncated index file");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& name) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) throw ParseError(name, 0, "truncated index file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

std::string get_str(std::istream& in, const std::string& name) {
    const auto len = get_u32(in, name);
    std::string s(len, '\0');
    if (len && !in.read(s.data(), len)) throw ParseError(name, 0, "truncated index file");
    return s;
}

}  // namespace

void PhraseIndex::save(std::ostream& out) const {
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u32(out, max_n_);
    put_u32(out, static_cast<std::uint32_t>(postings_.size()));
    for (const auto& [lang, ngram_map] : postings_) {
        put_str(out, lang.str());
        put_u64(out, ngram_map.size());
        for (const auto& [ngram, ids] : ngram_map) {
            put_str(out, ngram);
            put_u64(out, ids.size());
            for (auto id : ids) put_u32(out, id);
        }
    }
}

void PhraseIndex::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write index file: " + path);
    save(out);
    if (!out) throw IoError("write failed: " + path);
}

PhraseIndex PhraseIndex::load(std::istream& in, const std::string& name) {
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ParseError(name, 0, "not a phrase index file (bad magic)");
    }
    const auto version = get_u32(in, name);
    if (version != kVersion) {
        throw ParseError(name, 0, "unsupported index version " + std::to_string(version));
    }
    PhraseIndex index;
    index.max_n_ = get_u32(in, name);
    const auto n_langs = get_u32(in, name);
    for (std::uint32_t l = 0; l < n_langs; ++l) {
        LanguageCode lang(get_str(in, name));
        auto& ngram_map = index.postings_[lang];
        const auto n_ngrams = get_u64(in, name);
        for (std::uint64_t g = 0; g < n_ngrams; ++g) {
            std::string ngram = get_str(in, name);
            const auto count = get_u64(in, name);
            std::vector<std::uint32_t> ids;
            ids.reserve(count);
            for (std::uint64_t i = 0; i < count; ++i) ids.push_back(get_u32(in, name));
            ngram_map.emplace(std::move(ngram), std::move(ids));
        }
    }
    return index;
}

PhraseIndex PhraseIndex::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index file: " + path);
    return load(in, path);
}

}  // namespace xlwn
