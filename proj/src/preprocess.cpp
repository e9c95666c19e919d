// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "clintext/corpus.hpp"
#include "clintext/error.hpp"
#include "clintext/resources.hpp"
#include "json.hpp"

namespace clintext {

namespace {

// U+00C0..U+00FF. nullptr = drop.
constexpr std::array<const char*, 64> kLatin1Letters = {
    "A",  "A", "A", "A", "A", "A", "AE", "C", "E", "E", "E", "E", "I", "I", "I",  "I",
    "D",  "N", "O", "O", "O", "O", "O",  "x", "O", "U", "U", "U", "U", "Y", "TH", "ss",
    "a",  "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i",  "i",
    "d",  "n", "o", "o", "o", "o", "o",  "/", "o", "u", "u", "u", "u", "y", "th", "y"};

// U+0100..U+017F.
constexpr std::array<const char*, 128> kLatinExtA = {
    "A", "a", "A", "a", "A", "a",                                // 0100
    "C", "c", "C", "c", "C", "c", "C", "c",                      // 0106
    "D", "d", "D", "d",                                          // 010E
    "E", "e", "E", "e", "E", "e", "E", "e", "E", "e",            // 0112
    "G", "g", "G", "g", "G", "g", "G", "g",                      // 011C
    "H", "h", "H", "h",                                          // 0124
    "I", "i", "I", "i", "I", "i", "I", "i", "I", "i",            // 0128
    "IJ", "ij",                                                  // 0132
    "J", "j",                                                    // 0134
    "K", "k", "k",                                               // 0136
    "L", "l", "L", "l", "L", "l", "L", "l", "L", "l",            // 0139
    "N", "n", "N", "n", "N", "n", "n", "N", "n",                 // 0143
    "O", "o", "O", "o", "O", "o",                                // 014C
    "OE", "oe",                                                  // 0152
    "R", "r", "R", "r", "R", "r",                                // 0154
    "S", "s", "S", "s", "S", "s", "S", "s",                      // 015A
    "T", "t", "T", "t", "T", "t",                                // 0162
    "U", "u", "U", "u", "U", "u", "U", "u", "U", "u", "U", "u",  // 0168
    "W", "w",                                                    // 0174
    "Y", "y", "Y",                                               // 0176
    "Z", "z", "Z", "z", "Z", "z",                                // 0179
    "s"};                                                        // 017F

const char* Transliterate(char32_t cp) {
  if (cp >= 0xC0 && cp <= 0xFF) return kLatin1Letters[cp - 0xC0];
  if (cp >= 0x100 && cp <= 0x17F) return kLatinExtA[cp - 0x100];
  if ((cp >= 0x2000 && cp <= 0x200A) || cp == 0xA0 || cp == 0x202F || cp == 0x205F ||
      cp == 0x3000) {
    return " ";
  }
  if ((cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212) return "-";
  switch (cp) {
    case 0x2018: case 0x2019: case 0x201A: case 0x2032: return "'";
    case 0x201C: case 0x201D: case 0x201E: case 0x2033: return "\"";
    case 0x2044: case 0x2215: return "/";
    case 0x2026: return "...";
    case 0x2022: return "*";
    case 0xB7: return ".";
    case 0xB5: case 0x3BC: return "u";
    case 0xB2: return "2";
    case 0xB3: return "3";
    case 0xB9: return "1";
    case 0xBC: return "1/4";
    case 0xBD: return "1/2";
    case 0xBE: return "3/4";
    case 0xFB00: return "ff";
    case 0xFB01: return "fi";
    case 0xFB02: return "fl";
    case 0xFB03: return "ffi";
    case 0xFB04: return "ffl";
    default: return nullptr;
  }
}

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

char Lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::vector<std::string> SplitSpaces(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const auto b = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > b) out.emplace_back(text.substr(b, i - b));
  }
  return out;
}

std::string JoinSpaces(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> ParseAbbreviations(std::string_view json_text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("abbreviation map: ") + e.what());
  }
  if (!doc.is_object()) Fail(ErrorCode::kParse, "abbreviation map must be a JSON object");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) Fail(ErrorCode::kParse, "abbreviation map: value of '" + key + "' is not a string");
    if (key.empty()) Fail(ErrorCode::kParse, "abbreviation map: empty key");
    std::string lower = key;
    for (auto& c : lower) c = Lower(c);
    out.emplace_back(std::move(lower), value.get<std::string>());
  }
  return out;
}

std::vector<std::string> ParseMaskTerms(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& term : ParseWordList(text)) {
    auto cleaned = CleanText(term);
    if (!cleaned.empty()) out.push_back(std::move(cleaned));
  }
  return out;
}

PreprocessConfig PreprocessConfig::Default() {
  PreprocessConfig cfg;
  cfg.abbreviations = ParseAbbreviations(resources::abbreviations());
  cfg.mask_terms = ParseMaskTerms(resources::mask_terms());
  return cfg;
}

PreprocessConfig PreprocessConfig::FromFiles(const std::filesystem::path& abbrev,
                                             const std::filesystem::path& mask, bool apply_mask) {
  auto cfg = Default();
  if (!abbrev.empty()) cfg.abbreviations = ParseAbbreviations(ReadText(abbrev));
  if (!mask.empty()) cfg.mask_terms = ParseMaskTerms(ReadText(mask));
  cfg.apply_mask = apply_mask;
  return cfg;
}

std::string NormalizeText(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  const auto n = raw.size();
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(raw[k]); };
  auto cont = [&](std::size_t k) { return k < n && (byte(k) & 0xC0) == 0x80; };
  while (i < n) {
    const unsigned char b = byte(i);
    if (b < 0x80) {
      out.push_back(static_cast<char>(b));
      ++i;
      continue;
    }
    char32_t cp = 0;
    std::size_t len = 0;
    if ((b & 0xE0) == 0xC0 && b >= 0xC2) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0 && b <= 0xF4) {
      len = 4;
      cp = b & 0x07;
    } else {
      ++i;  // stray continuation or invalid lead byte
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      if (!cont(i + k)) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    if (!ok) {
      ++i;
      continue;
    }
    i += len;
    if (const char* t = Transliterate(cp)) out += t;
  }
  return out;
}

std::string CleanText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (static_cast<unsigned char>(c) < 0x80 && IsAlnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(Lower(c));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::string ExpandAbbreviations(std::string_view text,
                                const std::vector<std::pair<std::string, std::string>>& abbrev) {
  if (abbrev.empty()) return std::string(text);
  std::vector<const std::pair<std::string, std::string>*> keys;
  keys.reserve(abbrev.size());
  for (const auto& kv : abbrev) {
    if (!kv.first.empty()) keys.push_back(&kv);
  }
  std::stable_sort(keys.begin(), keys.end(), [](auto* a, auto* b) {
    if (a->first.size() != b->first.size()) return a->first.size() > b->first.size();
    return a->first < b->first;
  });

  auto matches = [&](std::size_t at, const std::string& key) {
    if (at + key.size() > text.size()) return false;
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (Lower(text[at + j]) != Lower(key[j])) return false;
    }
    const auto end = at + key.size();
    return end == text.size() || !IsAlnum(text[end]);
  };

  std::string out;
  out.reserve(text.size() + text.size() / 4);
  std::size_t i = 0;
  while (i < text.size()) {
    if (i == 0 || !IsAlnum(text[i - 1])) {
      bool hit = false;
      for (const auto* kv : keys) {
        if (matches(i, kv->first)) {
          out += kv->second;
          i += kv->first.size();
          hit = true;
          break;
        }
      }
      if (hit) continue;
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string MaskTerms(std::string_view text, const std::vector<std::string>& terms) {
  std::vector<std::vector<std::string>> phrases;
  for (const auto& term : terms) {
    auto toks = SplitSpaces(CleanText(term));
    if (!toks.empty()) phrases.push_back(std::move(toks));
  }
  std::sort(phrases.begin(), phrases.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });

  // Deleting a phrase can join its neighbours into a new occurrence, so
  // passes repeat until nothing is removed.
  std::vector<std::string> tokens = SplitSpaces(text);
  std::vector<std::string> kept;
  for (;;) {
    kept.clear();
    kept.reserve(tokens.size());
    bool removed = false;
    std::size_t i = 0;
    while (i < tokens.size()) {
      std::size_t skip = 0;
      for (const auto& p : phrases) {
        if (i + p.size() <= tokens.size() &&
            std::equal(p.begin(), p.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
          skip = p.size();
          break;
        }
      }
      if (skip > 0) {
        i += skip;
        removed = true;
      } else {
        kept.push_back(std::move(tokens[i]));
        ++i;
      }
    }
    if (!removed) break;
    tokens = std::move(kept);
  }
  return JoinSpaces(kept);
}

std::string EmptyGuard(std::string_view text) {
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  return blank ? std::string(kEmptyPlaceholder) : std::string(text);
}

std::string PreprocessNote(std::string_view raw, const PreprocessConfig& cfg) {
  auto text = CleanText(ExpandAbbreviations(NormalizeText(raw), cfg.abbreviations));
  if (cfg.apply_mask) text = MaskTerms(text, cfg.mask_terms);
  return EmptyGuard(text);
}

std::size_t ChunkSpec::step() const {
  if (window < 2) Fail(ErrorCode::kInvalidArgument, "chunk window must be >= 2");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "chunk overlap fraction must lie in [0, 1)");
  }
  // The epsilon keeps 0.1 * 30 from rounding up to 4.
  const auto overlap =
      static_cast<std::size_t>(std::ceil(overlap_fraction * static_cast<double>(window) - 1e-9));
  if (overlap >= window) Fail(ErrorCode::kInvalidArgument, "chunk step must be >= 1");
  return window - overlap;
}

std::vector<std::pair<std::size_t, std::size_t>> ChunkRanges(std::size_t n, const ChunkSpec& spec) {
  const auto step = spec.step();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t start = 0;; start += step) {
    const auto end = std::min(n, start + spec.window);
    out.emplace_back(start, end);
    if (end >= n) break;
  }
  return out;
}

std::vector<std::vector<std::string>> ChunkTokens(const std::vector<std::string>& tokens,
                                                  const ChunkSpec& spec) {
  std::vector<std::vector<std::string>> out;
  for (const auto& [b, e] : ChunkRanges(tokens.size(), spec)) {
    out.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(b),
                     tokens.begin() + static_cast<std::ptrdiff_t>(e));
  }
  return out;
}

}  // namespace clintext
