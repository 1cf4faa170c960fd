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

#include "lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace xlwn {

namespace {

bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

LanguageCode::LanguageCode(std::string code) : code_(std::move(code)) {
    if (code_.empty()) throw InvalidArgument("language code must not be empty");
    for (char c : code_) {
        if (!is_ascii_lower(c)) {
            throw InvalidArgument("language code must be lowercase ASCII letters: '" + code_ + "'");
        }
    }
}

SynsetId SynsetId::parse(std::string_view text) {
    auto id = try_parse(text);
    if (!id) throw InvalidArgument("bad synset id '" + std::string(text) + "' (want NNNNNNNN-p)");
    return *id;
}

std::optional<SynsetId> SynsetId::try_parse(std::string_view text) {
    if (text.size() != 10 || text[8] != '-') return std::nullopt;
    const char pos = text[9];
    if (pos != 'n' && pos != 'v' && pos != 'a' && pos != 'r') return std::nullopt;
    std::uint32_t offset = 0;
    for (int i = 0; i < 8; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        offset = offset * 10 + static_cast<std::uint32_t>(c - '0');
    }
    return SynsetId{offset, pos};
}

std::string SynsetId::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08u-%c", offset, pos);
    return buf;
}

void MultilingualWordnet::add_lemma(SynsetId id, const LanguageCode& lang, const std::string& lemma) {
    if (lemma.empty()) throw InvalidArgument("empty lemma for synset " + id.str());
    if (lemma != trim(lemma)) {
        throw InvalidArgument("lemma has leading/trailing whitespace: '" + lemma + "'");
    }
    auto& synset = synsets_[id];
    synset.id = id;
    auto& list = synset.lemmas[lang];
    if (std::find(list.begin(), list.end(), lemma) == list.end()) list.push_back(lemma);
}

void MultilingualWordnet::add_definition(SynsetId id, const LanguageCode& lang, const std::string& text) {
    auto& synset = synsets_[id];
    synset.id = id;
    synset.definitions[lang] = text;
}

void MultilingualWordnet::add_relation(SynsetId id, const std::string& kind, SynsetId target) {
    auto& synset = synsets_[id];
    synset.id = id;
    Relation rel{kind, target};
    auto& rels = synset.relations;
    if (std::find(rels.begin(), rels.end(), rel) == rels.end()) rels.push_back(rel);
}

MultilingualWordnet MultilingualWordnet::parse(std::istream& lemmas, const std::string& lemmas_name,
                                               std::istream* definitions, const std::string& definitions_name,
                                               std::istream* relations, const std::string& relations_name) {
    MultilingualWordnet wn;
    std::string line;

    std::size_t lineno = 0;
    while (std::getline(lemmas, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3) {
            throw ParseError(lemmas_name, lineno,
                             "expected 3 tab-separated columns, got " + std::to_string(fields.size()));
        }
        const auto id = SynsetId::try_parse(fields[0]);
        if (!id) throw ParseError(lemmas_name, lineno, "bad synset id '" + fields[0] + "'");
        try {
            wn.add_lemma(*id, LanguageCode(fields[1]), fields[2]);
        } catch (const InvalidArgument& e) {
            throw ParseError(lemmas_name, lineno, e.what());
        }
    }

    if (definitions) {
        lineno = 0;
        while (std::getline(*definitions, line)) {
            ++lineno;
            line = strip_cr(line);
            if (line.empty() || line[0] == '#') continue;
            const auto fields = split_tabs(line);
            if (fields.size() != 3) {
                throw ParseError(definitions_name, lineno,
                                 "expected 3 tab-separated columns, got " + std::to_string(fields.size()));
            }
            const auto id = SynsetId::try_parse(fields[0]);
            if (!id) throw ParseError(definitions_name, lineno, "bad synset id '" + fields[0] + "'");
            try {
                wn.add_definition(*id, LanguageCode(fields[1]), fields[2]);
            } catch (const InvalidArgument& e) {
                throw ParseError(definitions_name, lineno, e.what());
            }
        }
    }

    if (relations) {
        lineno = 0;
        while (std::getline(*relations, line)) {
            ++lineno;
            line = strip_cr(line);
            if (line.empty() || line[0] == '#') continue;
            const auto fields = split_tabs(line);
            if (fields.size() != 3) {
                throw ParseError(relations_name, lineno,
                                 "expected 3 tab-separated columns, got " + std::to_string(fields.size()));
            }
            const auto source = SynsetId::try_parse(fields[0]);
            if (!source) throw ParseError(relations_name, lineno, "bad synset id '" + fields[0] + "'");
            const auto target = SynsetId::try_parse(fields[2]);
            if (!target) throw ParseError(relations_name, lineno, "bad synset id '" + fields[2] + "'");
            if (fields[1].empty()) throw ParseError(relations_name, lineno, "empty relation tag");
            // Unknown tags are preserved as-is.
            wn.add_relation(*source, fields[1], *target);
        }
    }

    return wn;
}

MultilingualWordnet MultilingualWordnet::load(const std::string& lemmas_path,
                                              const std::string& definitions_path,
                                              const std::string& relations_path) {
    std::ifstream lemmas(lemmas_path);
    if (!lemmas) throw IoError("cannot open lemmas file: " + lemmas_path);
    std::ifstream defs, rels;
    std::istream* defs_ptr = nullptr;
    std::istream* rels_ptr = nullptr;
    if (!definitions_path.empty()) {
        defs.open(definitions_path);
        if (!defs) throw IoError("cannot open definitions file: " + definitions_path);
        defs_ptr = &defs;
    }
    if (!relations_path.empty()) {
        rels.open(relations_path);
        if (!rels) throw IoError("cannot open relations file: " + relations_path);
        rels_ptr = &rels;
    }
    return parse(lemmas, lemmas_path, defs_ptr, definitions_path, rels_ptr, relations_path);
}

const Synset* MultilingualWordnet::find(SynsetId id) const {
    auto it = synsets_.find(id);
    return it == synsets_.end() ? nullptr : &it->second;
}

std::vector<std::string> MultilingualWordnet::lemmas_of(SynsetId id, const LanguageCode& lang) const {
    const Synset* s = find(id);
    if (!s) return {};
    auto it = s->lemmas.find(lang);
    if (it == s->lemmas.end()) return {};
    return it->second;
}

std::set<SynsetId> MultilingualWordnet::hypernym_closure(SynsetId id) const {
    std::set<SynsetId> closure;
    std::vector<SynsetId> stack{id};
    std::set<SynsetId> visited{id};
    while (!stack.empty()) {
        const SynsetId current = stack.back();
        stack.pop_back();
        const Synset* s = find(current);
        if (!s) continue;
        for (const auto& rel : s->relations) {
            if (rel.kind != kHypernym) continue;
            if (rel.target != id) closure.insert(rel.target);
            if (visited.insert(rel.target).second) stack.push_back(rel.target);
        }
    }
    return closure;
}

WordnetStats MultilingualWordnet::stats(const LanguageCode& lang) const {
    WordnetStats out;
    std::unordered_set<std::string> words;
    for (const auto& [id, synset] : synsets_) {
        auto it = synset.lemmas.find(lang);
        if (it == synset.lemmas.end() || it->second.empty()) continue;
        out.synsets += 1;
        out.senses += it->second.size();
        for (const auto& lemma : it->second) words.insert(lemma);
    }
    out.words = words.size();
    return out;
}

std::vector<SynsetId> MultilingualWordnet::unresolved_relation_targets() const {
    std::set<SynsetId> unresolved;
    for (const auto& [id, synset] : synsets_) {
        for (const auto& rel : synset.relations) {
            if (!synsets_.count(rel.target)) unresolved.insert(rel.target);
        }
    }
    return {unresolved.begin(), unresolved.end()};
}

std::vector<LanguageCode> MultilingualWordnet::languages() const {
    std::set<LanguageCode> langs;
    for (const auto& [id, synset] : synsets_) {
        for (const auto& [lang, list] : synset.lemmas) {
            if (!list.empty()) langs.insert(lang);
        }
    }
    return {langs.begin(), langs.end()};
}

std::vector<Sense> MultilingualWordnet::senses(const LanguageCode& lang) const {
    std::vector<Sense> out;
    for (const auto& [id, synset] : synsets_) {
        auto it = synset.lemmas.find(lang);
        if (it == synset.lemmas.end()) continue;
        for (const auto& lemma : it->second) out.push_back(Sense{id, lang, lemma});
    }
    std::sort(out.begin(), out.end());
    return out;
}

void MultilingualWordnet::serialize(std::ostream& lemmas, std::ostream* definitions,
                                    std::ostream* relations) const {
    for (const auto& [id, synset] : synsets_) {
        const auto id_str = id.str();
        for (const auto& [lang, list] : synset.lemmas) {
            for (const auto& lemma : list) {
                lemmas << id_str << '\t' << lang.str() << '\t' << lemma << '\n';
            }
        }
        if (definitions) {
            for (const auto& [lang, text] : synset.definitions) {
                *definitions << id_str << '\t' << lang.str() << '\t' << text << '\n';
            }
        }
        if (relations) {
            for (const auto& rel : synset.relations) {
                *relations << id_str << '\t' << rel.kind << '\t' << rel.target.str() << '\n';
            }
        }
    }
}

void MultilingualWordnet::save(const std::string& lemmas_path, const std::string& definitions_path,
                               const std::string& relations_path) const {
    std::ofstream lemmas(lemmas_path, std::ios::binary);
    if (!lemmas) throw IoError("cannot write lemmas file: " + lemmas_path);
    std::ofstream defs, rels;
    std::ostream* defs_ptr = nullptr;
    std::ostream* rels_ptr = nullptr;
    if (!definitions_path.empty()) {
        defs.open(definitions_path, std::ios::binary);
        if (!defs) throw IoError("cannot write definitions file: " + definitions_path);
        defs_ptr = &defs;
    }
    if (!relations_path.empty()) {
        rels.open(relations_path, std::ios::binary);
        if (!rels) throw IoError("cannot write relations file: " + relations_path);
        rels_ptr = &rels;
    }
    serialize(lemmas, defs_ptr, rels_ptr);
    if (!lemmas) throw IoError("write failed: " + lemmas_path);
}

}  // namespace xlwn
