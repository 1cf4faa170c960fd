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
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Flat dotted-key config file:
//
//   # comment
//   disambig.n_min = 2
//   corpus.en = data/corpus.en.txt
//
// Relative paths resolve against the config file's directory. Unknown keys
// are validation errors (a typo must not silently change a run).

namespace xlwncli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    Config() = default;

    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::string> get(const std::string& key) const;
    std::optional<std::string> get_path(const std::string& key) const;  // resolved
    std::optional<std::int64_t> get_int(const std::string& key) const;
    std::optional<double> get_real(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;

    // corpus.<lang> entries, sorted by language code, paths resolved.
    std::vector<std::pair<std::string, std::string>> corpus_files() const;

private:
    std::map<std::string, std::string> values_;
    std::filesystem::path base_dir_;
};

}  // namespace xlwncli
