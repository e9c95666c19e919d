// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include <set>
#include <string>
#include <vector>

#include "clintext/error.hpp"
#include "clintext/featurize.hpp"
#include "clintext/preprocess.hpp"
#include "clintext/rng.hpp"
#include "doctest.h"

using namespace clintext;

namespace {

using Map = std::vector<std::pair<std::string, std::string>>;

std::string RandomText(Rng& rng, std::size_t len) {
  static const std::vector<std::string> pieces = {
      "a", "B", "z", "0", "9", " ", "  ", "\t", "\n", ".", ",", "/", "-", "!", "'", "\"", "(", ")",
      "\xC3\xA9", "\xC2\xB1", "\xE2\x88\x95", "\xE2\x80\x94", "\xE2\x80\x9C", "\xC3\x9F", "\xFF", "\xE2"};
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += pieces[rng.UniformInt(pieces.size())];
  return out;
}

PreprocessConfig DischargeConfig(bool mask) {
  PreprocessConfig cfg;
  cfg.abbreviations = {};
  cfg.mask_terms = {"discharge", "home"};
  cfg.apply_mask = mask;
  return cfg;
}

}  // namespace

TEST_SUITE("preprocess") {
  TEST_CASE("normalization transliterates to ASCII") {
    CHECK(NormalizeText("Caf\xC3\xA9") == "Cafe");
    CHECK(NormalizeText("") == "");
    // U+2215 division slash, U+00B1 plus-minus.
    CHECK(NormalizeText("BP 120\xE2\x88\x95" "80 \xC2\xB1") == "BP 120/80 ");
    CHECK(NormalizeText("\xC3\x9F\xC3\xA6 \xE2\x80\x94 \xE2\x80\x9Cq\xE2\x80\x9D") == "ssae - \"q\"");
    CHECK(NormalizeText("1\xE2\x81\x84" "2") == "1/2");
    CHECK(NormalizeText("e\xCC\x81") == "e");
  }

  TEST_CASE("normalization drops invalid bytes") {
    CHECK(NormalizeText("a\xFF" "b") == "ab");
    CHECK(NormalizeText("a\xE2") == "a");
  }

  TEST_CASE("cleaning lowercases and turns punctuation into spaces") {
    CHECK(CleanText("Pain: 3/10!!") == "pain 3 10");
    CHECK(CleanText("a  b\t c") == "a b c");
    CHECK(CleanText("   ") == "");
  }

  TEST_CASE("cleaning is idempotent and yields lowercase ASCII without double spaces") {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
      const auto raw = RandomText(rng, rng.UniformInt(40));
      const auto once = CleanText(NormalizeText(raw));
      CHECK(CleanText(once) == once);
      CHECK(once.find("  ") == std::string::npos);
      for (char c : once) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' ';
        CHECK(ok);
      }
      if (!once.empty()) {
        CHECK(once.front() != ' ');
        CHECK(once.back() != ' ');
      }
    }
  }

  TEST_CASE("abbreviation expansion") {
    const Map map = {{"pt", "patient"}, {"s/p", "status post"}};
    CHECK(ExpandAbbreviations("pt ambulating s/p surgery", map) == "patient ambulating status post surgery");
    CHECK(ExpandAbbreviations("no keys here", map) == "no keys here");
    CHECK(ExpandAbbreviations("PT evaluated pt", {{"pt", "patient"}}) == "patient evaluated patient");
    // Whole tokens only.
    CHECK(ExpandAbbreviations("ptosis apt", map) == "ptosis apt");
    CHECK(ExpandAbbreviations("(pt)", map) == "(patient)");
  }

  TEST_CASE("longest key wins and expansions are not re-expanded") {
    const Map map = {{"d", "day"}, {"d/c", "discharge"}, {"day", "DAY"}};
    CHECK(ExpandAbbreviations("d/c d", map) == "discharge day");
  }

  TEST_CASE("built-in map expands slash abbreviations before cleaning") {
    const auto cfg = PreprocessConfig::Default();
    const auto out = PreprocessNote("Pt s/p ACDF, f/u w/ PT", cfg);
    CHECK(out.find("status post") != std::string::npos);
    CHECK(out.find("anterior cervical discectomy and fusion") != std::string::npos);
    CHECK(out.find("follow up") != std::string::npos);
  }

  TEST_CASE("masking deletes whole tokens and phrases") {
    const std::vector<std::string> terms = {"discharge", "home"};
    CHECK(MaskTerms("patient ready for discharge home", terms) == "patient ready for");
    CHECK(MaskTerms("discharge", {"discharge"}).empty());
    CHECK(MaskTerms("discharged to snf", {"discharge"}) == "discharged to snf");
    CHECK(MaskTerms("go home now", {"go home"}) == "now");
    CHECK(MaskTerms("d d c c x", {"d c"}) == "x");
  }

  TEST_CASE("no mask term survives as a whole token") {
    const std::vector<std::string> vocab = {"discharge", "home", "snf", "d", "c", "pain", "rehab", "x"};
    const auto terms = ParseMaskTerms("discharge\nhome\nsnf\nd/c\nrehab\n");
    Rng rng(9);
    for (int i = 0; i < 300; ++i) {
      std::string text;
      const auto n = rng.UniformInt(15);
      for (std::size_t k = 0; k < n; ++k) text += (k ? " " : "") + vocab[rng.UniformInt(vocab.size())];
      const auto tokens = Tokenize(MaskTerms(text, terms));
      for (std::size_t k = 0; k < tokens.size(); ++k) {
        CHECK(tokens[k] != "discharge");
        CHECK(tokens[k] != "home");
        CHECK(tokens[k] != "snf");
        CHECK(tokens[k] != "rehab");
        if (k + 1 < tokens.size()) CHECK_FALSE((tokens[k] == "d" && tokens[k + 1] == "c"));
      }
    }
  }

  TEST_CASE("empty guard") {
    CHECK(EmptyGuard("") == "EMPTY");
    CHECK(EmptyGuard("  ") == "EMPTY");
    CHECK(EmptyGuard("pain controlled") == "pain controlled");
  }

  TEST_CASE("note that masks to nothing becomes EMPTY") {
    CHECK(PreprocessNote("Discharge Home!", DischargeConfig(true)) == "EMPTY");
    CHECK(PreprocessNote("Discharge Home!", DischargeConfig(false)) == "discharge home");
  }

  TEST_CASE("preprocessing never returns an empty string") {
    Rng rng(13);
    const auto cfg = PreprocessConfig::Default();
    for (int i = 0; i < 300; ++i) CHECK_FALSE(PreprocessNote(RandomText(rng, rng.UniformInt(20)), cfg).empty());
    CHECK(PreprocessNote("D/C home, SNF.", cfg) == "EMPTY");
  }

  TEST_CASE("mask term file parsing cleans entries and skips comments") {
    const auto terms = ParseMaskTerms("# lexicon\nDischarge\n\n d/c \n");
    REQUIRE(terms.size() == 2);
    CHECK(terms[0] == "discharge");
    CHECK(terms[1] == "d c");
  }

  TEST_CASE("abbreviation file parsing") {
    const auto map = ParseAbbreviations(R"({"PT": "patient", "s/p": "status post"})");
    REQUIRE(map.size() == 2);
    CHECK(map[0].first == "pt");
    CHECK(map[1].second == "status post");
    CHECK_THROWS_AS(ParseAbbreviations("[1, 2]"), Error);
    CHECK_THROWS_AS(ParseAbbreviations("{\"a\": 3}"), Error);
  }

  TEST_CASE("chunking with 10% overlap") {
    const ChunkSpec spec{10, 0.10};
    CHECK(spec.step() == 9);
    using R = std::vector<std::pair<std::size_t, std::size_t>>;
    CHECK(ChunkRanges(25, spec) == R{{0, 10}, {9, 19}, {18, 25}});
    CHECK(ChunkRanges(7, spec) == R{{0, 7}});
    CHECK(ChunkRanges(0, spec) == R{{0, 0}});
    CHECK_THROWS_AS(ChunkSpec({1, 0.10}).step(), Error);
    CHECK(ChunkRanges(512, ChunkSpec{}) == R{{0, 512}});
    CHECK(ChunkSpec{}.step() == 460);
  }

  TEST_CASE("chunk windows cover every token and respect the limit") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
      const ChunkSpec spec{static_cast<std::size_t>(rng.UniformRange(2, 40)), 0.10};
      const auto n = static_cast<std::size_t>(rng.UniformRange(0, 200));
      std::vector<std::string> tokens(n);
      for (std::size_t k = 0; k < n; ++k) tokens[k] = std::to_string(k);
      const auto chunks = ChunkTokens(tokens, spec);
      std::set<std::string> seen;
      for (const auto& c : chunks) {
        CHECK(c.size() <= spec.window);
        seen.insert(c.begin(), c.end());
      }
      CHECK(seen.size() == n);
    }
  }
}
