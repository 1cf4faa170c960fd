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

#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace xlwncli {

namespace {

const std::set<std::string> kKnownKeys = {
    "seed",
    "jobs",
    "wordnet.lemmas",
    "wordnet.definitions",
    "wordnet.relations",
    "index.max_n",
    "index.path",
    "disambig.n_min",
    "disambig.m",
    "translate.t",
    "translate.target",
    "translate.table",
    "translate.direct",
    "metrics.brevity_penalty",
    "evaluate.hypothesis",
    "evaluate.gold",
    "evaluate.lang",
    "align.left",
    "align.right",
    "align.gold",
    "align.embeddings",
    "align.model",
    "align.threshold",
    "align.alpha",
    "align.setting",
    "align.lang",
    "align.k",
    "align.negation_words",
};

bool known_key(const std::string& key) {
    if (kKnownKeys.count(key)) return true;
    // corpus.<lang>, lang = lowercase letters
    if (key.rfind("corpus.", 0) == 0 && key.size() > 7) {
        for (std::size_t i = 7; i < key.size(); ++i) {
            if (key[i] < 'a' || key[i] > 'z') return false;
        }
        return true;
    }
    return false;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

}  // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);

    Config config;
    config.base_dir_ = std::filesystem::path(path).parent_path();

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected `key = value`");
        }
        const auto key = trim(stripped.substr(0, eq));
        const auto value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        if (!known_key(key)) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (config.values_.count(key)) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        config.values_[key] = value;
    }
    return config;
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Config::get_path(const std::string& key) const {
    const auto value = get(key);
    if (!value) return std::nullopt;
    std::filesystem::path p(*value);
    if (p.is_relative()) p = base_dir_ / p;
    return p.string();
}

std::optional<std::int64_t> Config::get_int(const std::string& key) const {
    const auto value = get(key);
    if (!value) return std::nullopt;
    char* end = nullptr;
    const long long v = std::strtoll(value->c_str(), &end, 10);
    if (end == value->c_str() || *end != '\0') {
        throw ConfigError("config key '" + key + "' wants an integer, got '" + *value + "'");
    }
    return static_cast<std::int64_t>(v);
}

std::optional<double> Config::get_real(const std::string& key) const {
    const auto value = get(key);
    if (!value) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(value->c_str(), &end);
    if (end == value->c_str() || *end != '\0') {
        throw ConfigError("config key '" + key + "' wants a number, got '" + *value + "'");
    }
    return v;
}

std::optional<bool> Config::get_bool(const std::string& key) const {
    const auto value = get(key);
    if (!value) return std::nullopt;
    if (*value == "true" || *value == "1" || *value == "yes") return true;
    if (*value == "false" || *value == "0" || *value == "no") return false;
    throw ConfigError("config key '" + key + "' wants true/false, got '" + *value + "'");
}

std::vector<std::pair<std::string, std::string>> Config::corpus_files() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, value] : values_) {
        if (key.rfind("corpus.", 0) != 0) continue;
        std::filesystem::path p(value);
        if (p.is_relative()) p = base_dir_ / p;
        out.emplace_back(key.substr(7), p.string());
    }
    return out;
}

}  // namespace xlwncli
