// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace clintext {

// One labeled note. label is 0 (not discharged next day) or 1.
struct Note {
  std::string id;
  std::string text;
  int label = 0;

  friend bool operator==(const Note&, const Note&) = default;
};

// Ordered collection of notes with unique ids.
class Corpus {
 public:
  Corpus() = default;
  // Throws Error(kValidation) on empty or duplicate ids or labels outside {0,1}.
  explicit Corpus(std::vector<Note> notes);

  const std::vector<Note>& notes() const { return notes_; }
  std::size_t size() const { return notes_.size(); }
  bool empty() const { return notes_.empty(); }
  const Note& operator[](std::size_t i) const { return notes_[i]; }

  std::vector<int> labels() const;
  std::size_t positives() const;
  // Fraction of label-1 notes; 0 for an empty corpus.
  double prevalence() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Note> notes_;
};

// JSON Lines, one {"note_id", "text", "label"} object per line. Blank lines are
// skipped. Errors name the 1-based line number.
Corpus LoadCorpus(const std::filesystem::path& path);
Corpus ParseCorpus(std::string_view jsonl);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);
std::string SerializeCorpus(const Corpus& corpus);

struct SynthConfig {
  std::size_t n = 2000;
  double prevalence = 0.18;
  // Probability that a note carries 1-3 label-matching cue phrases.
  double signal_strength = 0.8;
  // Probability that a note carries one cue phrase of the opposite label.
  double noise_rate = 0.1;
  std::size_t min_tokens = 30;
  std::size_t max_tokens = 120;
  std::uint64_t seed = 42;

  // Throws Error(kInvalidArgument).
  void Validate() const;
};

struct CueLexicon {
  std::vector<std::string> filler;
  std::vector<std::string> positive;
  std::vector<std::string> negative;

  // The built-in lists (data/filler.txt, data/cues_*.txt).
  static const CueLexicon& Default();
};

// Exactly round(n * prevalence) notes get label 1; which ones is a seeded
// shuffle. Each note is filler tokens grouped into sentences, with cue phrases
// inserted between tokens. Output depends only on cfg and the lexicon.
Corpus GenerateSynthetic(const SynthConfig& cfg,
                         const CueLexicon& lexicon = CueLexicon::Default());

// Case-insensitive whole-phrase occurrence counts of the positive and negative
// cue phrases in raw text.
struct CueCounts {
  int positive = 0;
  int negative = 0;
};
CueCounts CountCues(std::string_view text, const CueLexicon& lexicon = CueLexicon::Default());

// Reads a word list: one entry per line, '#' starts a comment line, blank
// lines ignored, surrounding whitespace trimmed.
std::vector<std::string> ParseWordList(std::string_view text);

}  // namespace clintext
