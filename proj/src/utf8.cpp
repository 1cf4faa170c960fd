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

#include "utf8.hpp"

namespace xlwn::utf8 {

namespace {
constexpr char32_t kReplacement = 0xFFFD;
}

std::vector<char32_t> decode(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    const auto n = text.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(text[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > n) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(text[i + k]);
            if ((bk & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (bk & 0x3F);
        }
        if (!ok || cp > 0x10FFFF) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode(const std::vector<char32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) append(out, cp);
    return out;
}

char32_t to_lower(char32_t cp) {
    // ASCII
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    // Latin-1 supplement (skip the multiplication sign)
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    // Latin Extended-A: mostly upper/lower pairs
    if (cp >= 0x100 && cp <= 0x177) {
        if (cp == 0x130) return 0x69;  // dotted capital I -> i
        if (cp == 0x131) return cp;    // dotless i is already lowercase
        if (cp >= 0x100 && cp <= 0x137 && (cp % 2) == 0) return cp + 1;
        if (cp >= 0x14A && cp <= 0x177 && (cp % 2) == 0) return cp + 1;
        if (cp >= 0x139 && cp <= 0x148 && (cp % 2) == 1) return cp + 1;
        return cp;
    }
    if (cp == 0x178) return 0xFF;  // Y with diaeresis
    if (cp >= 0x179 && cp <= 0x17E && (cp % 2) == 1) return cp + 1;
    // Greek
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x386 && cp <= 0x38F) {
        switch (cp) {
            case 0x386: return 0x3AC;
            case 0x388: return 0x3AD;
            case 0x389: return 0x3AE;
            case 0x38A: return 0x3AF;
            case 0x38C: return 0x3CC;
            case 0x38E: return 0x3CD;
            case 0x38F: return 0x3CE;
            default: return cp;
        }
    }
    // Cyrillic
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\r':
        case U'\f':
        case U'\v':
        case 0xA0:    // no-break space
        case 0x2009:  // thin space
        case 0x202F:  // narrow no-break space
        case 0x3000:  // ideographic space
            return true;
        default:
            return false;
    }
}

bool is_punct(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
        case 0xA1:   // inverted exclamation
        case 0xAB:   // left guillemet
        case 0xB7:   // middle dot
        case 0xBB:   // right guillemet
        case 0xBF:   // inverted question
            return true;
        default:
            break;
    }
    // General punctuation: dashes, quotes, ellipsis, daggers, ...
    if (cp >= 0x2010 && cp <= 0x205E) return true;
    if (cp == 0x2039 || cp == 0x203A) return true;
    return false;
}

std::string lower(std::string_view text) {
    auto cps = decode(text);
    for (auto& cp : cps) cp = to_lower(cp);
    return encode(cps);
}

}  // namespace xlwn::utf8
