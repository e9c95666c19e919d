// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clintext {

inline constexpr std::string_view kEmptyPlaceholder = "EMPTY";

struct PreprocessConfig {
  // Abbreviation -> expansion. Keys are matched case-insensitively, longest
  // first, as whole tokens.
  std::vector<std::pair<std::string, std::string>> abbreviations;
  // Terms and phrases deleted from cleaned text. Stored in cleaned form.
  std::vector<std::string> mask_terms;
  bool apply_mask = true;

  // Built-in abbreviation map and discharge lexicon (data/).
  static PreprocessConfig Default();

  // abbrev: JSON object file {"pt": "patient", ...}. mask: one term per line,
  // '#' comments. An empty path keeps the built-in list.
  static PreprocessConfig FromFiles(const std::filesystem::path& abbrev,
                                    const std::filesystem::path& mask, bool apply_mask);
};

std::vector<std::pair<std::string, std::string>> ParseAbbreviations(std::string_view json_text);
std::vector<std::string> ParseMaskTerms(std::string_view text);

// Unicode to ASCII. Invalid UTF-8 bytes are dropped. Code points with an entry
// in the transliteration table are replaced by its ASCII text; every other
// non-ASCII code point is dropped. The table covers:
//   - Latin-1 Supplement and Latin Extended-A letters -> base letter(s)
//     ("é" -> "e", "ß" -> "ss", "æ" -> "ae", "ø" -> "o", "ł" -> "l")
//   - combining diacritics U+0300..U+036F -> dropped (decomposed input)
//   - spaces: U+00A0, U+2000..U+200A, U+202F, U+205F, U+3000 -> " "
//   - dashes and hyphens U+2010..U+2015, U+2212 -> "-"
//   - quotes U+2018/2019/201A/2032 -> "'", U+201C/201D/201E/2033 -> "\""
//   - slashes U+2044 (fraction), U+2215 (division) -> "/"
//   - U+2026 -> "...", U+2022 -> "*", U+00B7 -> "."
//   - U+00D7 -> "x", U+00B5/U+03BC -> "u", U+00B2/B3/B9 -> "2"/"3"/"1",
//     U+00BC/BD/BE -> "1/4"/"1/2"/"3/4", U+FB00..U+FB04 ligatures spelled out
// Signs without a plain-ASCII reading ("±", "°", "→", "©") are dropped.
std::string NormalizeText(std::string_view raw);

// Lowercase; each ASCII punctuation character becomes a space; whitespace runs
// collapse to one space; ends trimmed. Idempotent.
std::string CleanText(std::string_view text);

// Single left-to-right pass. At each token start the longest matching key wins.
// A key matches when the characters on both sides are not alphanumeric.
std::string ExpandAbbreviations(std::string_view text,
                                const std::vector<std::pair<std::string, std::string>>& abbrev);

// Deletes whole-token occurrences of each term/phrase from space-separated
// text, longest phrase first, and re-joins with single spaces. Repeats until
// no occurrence is left.
std::string MaskTerms(std::string_view text, const std::vector<std::string>& terms);

// "EMPTY" for empty or whitespace-only input, else the input.
std::string EmptyGuard(std::string_view text);

// normalize -> expand abbreviations -> clean -> mask (if enabled) -> EMPTY guard.
std::string PreprocessNote(std::string_view raw, const PreprocessConfig& cfg);

struct ChunkSpec {
  std::size_t window = 512;
  // Consecutive windows share ceil(overlap_fraction * window) tokens.
  double overlap_fraction = 0.10;

  std::size_t step() const;
};

// Half-open [begin, end) token ranges covering [0, n).
std::vector<std::pair<std::size_t, std::size_t>> ChunkRanges(std::size_t n, const ChunkSpec& spec);

std::vector<std::vector<std::string>> ChunkTokens(const std::vector<std::string>& tokens,
                                                  const ChunkSpec& spec);

}  // namespace clintext
