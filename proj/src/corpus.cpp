// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "clintext/error.hpp"
#include "clintext/resources.hpp"
#include "clintext/rng.hpp"
#include "json.hpp"

namespace clintext {

using nlohmann::json;

namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path.string());
}

// Lowercased alphanumeric runs; every other byte separates tokens.
std::vector<std::string> WordTokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

int CountPhrase(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return 0;
  int count = 0;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
      i += phrase.size() - 1;
    }
  }
  return count;
}

}  // namespace

Corpus::Corpus(std::vector<Note> notes) : notes_(std::move(notes)) {
  std::unordered_set<std::string> seen;
  seen.reserve(notes_.size());
  for (const auto& note : notes_) {
    if (note.id.empty()) Fail(ErrorCode::kValidation, "note with empty id");
    if (note.label != 0 && note.label != 1) {
      Fail(ErrorCode::kValidation,
           "note " + note.id + ": label must be 0 or 1, got " + std::to_string(note.label));
    }
    if (!seen.insert(note.id).second) Fail(ErrorCode::kValidation, "duplicate note_id " + note.id);
  }
}

std::vector<int> Corpus::labels() const {
  std::vector<int> out;
  out.reserve(notes_.size());
  for (const auto& n : notes_) out.push_back(n.label);
  return out;
}

std::size_t Corpus::positives() const {
  return static_cast<std::size_t>(
      std::count_if(notes_.begin(), notes_.end(), [](const Note& n) { return n.label == 1; }));
}

double Corpus::prevalence() const {
  if (notes_.empty()) return 0.0;
  return static_cast<double>(positives()) / static_cast<double>(notes_.size());
}

Corpus ParseCorpus(std::string_view jsonl) {
  std::vector<Note> notes;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    auto end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string where = "line " + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kParse, where + ": malformed JSON (" + e.what() + ")");
    }
    if (!rec.is_object()) Fail(ErrorCode::kParse, where + ": expected a JSON object");
    auto id = rec.find("note_id");
    auto text = rec.find("text");
    auto label = rec.find("label");
    if (id == rec.end() || !id->is_string()) Fail(ErrorCode::kParse, where + ": missing string note_id");
    if (text == rec.end() || !text->is_string()) Fail(ErrorCode::kParse, where + ": missing string text");
    if (label == rec.end() || !label->is_number_integer()) {
      Fail(ErrorCode::kParse, where + ": missing integer label");
    }
    Note note{id->get<std::string>(), text->get<std::string>(), 0};
    const auto raw_label = label->get<std::int64_t>();
    if (raw_label != 0 && raw_label != 1) {
      Fail(ErrorCode::kValidation, where + ": label must be 0 or 1, got " + std::to_string(raw_label));
    }
    note.label = static_cast<int>(raw_label);
    if (note.id.empty()) Fail(ErrorCode::kValidation, where + ": empty note_id");
    if (!seen.insert(note.id).second) {
      Fail(ErrorCode::kValidation, where + ": duplicate note_id " + note.id);
    }
    notes.push_back(std::move(note));
  }
  return Corpus(std::move(notes));
}

Corpus LoadCorpus(const std::filesystem::path& path) { return ParseCorpus(ReadFile(path)); }

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const auto& note : corpus.notes()) {
    json rec = json::object();
    rec["note_id"] = note.id;
    rec["text"] = note.text;
    rec["label"] = note.label;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  WriteFile(path, SerializeCorpus(corpus));
}

std::vector<std::string> ParseWordList(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

void SynthConfig::Validate() const {
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "synth: n must be positive");
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "synth: prevalence must lie in (0, 1)");
  }
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "synth: signal_strength must lie in [0, 1]");
  }
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "synth: noise_rate must lie in [0, 1]");
  }
  if (min_tokens < 5) Fail(ErrorCode::kInvalidArgument, "synth: min tokens must be >= 5");
  if (max_tokens < min_tokens) Fail(ErrorCode::kInvalidArgument, "synth: max tokens < min tokens");
}

const CueLexicon& CueLexicon::Default() {
  static const CueLexicon lexicon{ParseWordList(resources::filler()),
                                  ParseWordList(resources::cues_positive()),
                                  ParseWordList(resources::cues_negative())};
  return lexicon;
}

Corpus GenerateSynthetic(const SynthConfig& cfg, const CueLexicon& lexicon) {
  cfg.Validate();
  if (lexicon.filler.empty() || lexicon.positive.empty() || lexicon.negative.empty()) {
    Fail(ErrorCode::kInvalidArgument, "synth: lexicon lists must be nonempty");
  }
  const Rng root(cfg.seed);

  const auto n_pos = static_cast<std::size_t>(
      std::llround(static_cast<double>(cfg.n) * cfg.prevalence));
  std::vector<int> labels(cfg.n, 0);
  std::fill_n(labels.begin(), n_pos, 1);
  Rng label_rng = root.Split("labels");
  label_rng.Shuffle(std::span<int>(labels));

  const std::size_t width = std::max<std::size_t>(5, std::to_string(cfg.n).size());

  std::vector<Note> notes;
  notes.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Rng rng = root.Split(static_cast<std::uint64_t>(i));
    const int label = labels[i];
    const auto& own = label == 1 ? lexicon.positive : lexicon.negative;
    const auto& other = label == 1 ? lexicon.negative : lexicon.positive;

    // Units are single filler tokens or whole cue phrases.
    const auto length = static_cast<std::size_t>(rng.UniformRange(
        static_cast<std::int64_t>(cfg.min_tokens), static_cast<std::int64_t>(cfg.max_tokens)));
    std::vector<std::string> units;
    units.reserve(length + 4);
    for (std::size_t t = 0; t < length; ++t) {
      units.push_back(lexicon.filler[rng.UniformInt(lexicon.filler.size())]);
    }
    auto insert_cue = [&](const std::string& phrase) {
      const auto at = rng.UniformInt(units.size() + 1);
      units.insert(units.begin() + static_cast<std::ptrdiff_t>(at), phrase);
    };
    if (rng.Bernoulli(cfg.signal_strength)) {
      const auto k = rng.UniformRange(1, 3);
      for (std::int64_t c = 0; c < k; ++c) insert_cue(own[rng.UniformInt(own.size())]);
    }
    if (rng.Bernoulli(cfg.noise_rate)) insert_cue(other[rng.UniformInt(other.size())]);

    std::string text;
    std::size_t u = 0;
    while (u < units.size()) {
      const auto sentence = static_cast<std::size_t>(rng.UniformRange(6, 14));
      const auto stop = std::min(units.size(), u + sentence);
      std::string s;
      for (; u < stop; ++u) {
        if (!s.empty()) s += ' ';
        s += units[u];
      }
      s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
      if (!text.empty()) text += ' ';
      text += s;
      text += '.';
    }

    std::string id = std::to_string(i + 1);
    id.insert(0, width - id.size(), '0');
    notes.push_back(Note{"note-" + id, std::move(text), label});
  }
  return Corpus(std::move(notes));
}

CueCounts CountCues(std::string_view text, const CueLexicon& lexicon) {
  const auto tokens = WordTokens(text);
  CueCounts counts;
  for (const auto& p : lexicon.positive) counts.positive += CountPhrase(tokens, WordTokens(p));
  for (const auto& p : lexicon.negative) counts.negative += CountPhrase(tokens, WordTokens(p));
  return counts;
}

}  // namespace clintext
