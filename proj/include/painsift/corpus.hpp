#pragma once

#include <algorithm>
#include <cstdio>
#include <span>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "painsift/error.hpp"
#include "painsift/labels.hpp"
#include "painsift/random.hpp"

namespace painsift {

struct ClinicalNote {
  std::string id;
  std::string patient_id;
  std::string text;
  std::optional<PainRelevance> relevance;
  std::optional<PainChange> change;

  friend bool operator==(const ClinicalNote&, const ClinicalNote&) = default;
};

/// A validated, labelled collection of notes for one classification task.
class Corpus {
 public:
  Corpus(Task task, std::vector<ClinicalNote> notes) : task_(task), notes_(std::move(notes)) {
    if (notes_.empty()) throw DataError("corpus is empty");
    std::unordered_set<std::string> seen;
    for (const auto& n : notes_) {
      if (!seen.insert(n.id).second) throw DataError("duplicate note id '" + n.id + "'");
      if (n.change && n.relevance != PainRelevance::Relevant)
        throw DataError("note '" + n.id + "': a pain-change label requires relevance 'yes'");
      if (task_ == Task::Relevance && !n.relevance)
        throw DataError("note '" + n.id + "': missing relevance label");
      if (task_ == Task::Change && !n.change)
        throw DataError("note '" + n.id + "': missing change label");
    }
  }

  Task task() const { return task_; }
  const std::vector<ClinicalNote>& notes() const { return notes_; }
  std::size_t size() const { return notes_.size(); }
  const ClinicalNote& operator[](std::size_t i) const { return notes_[i]; }

  /// Class index of note `i` under this corpus' task.
  int label(std::size_t i) const {
    const auto& n = notes_[i];
    return task_ == Task::Relevance ? static_cast<int>(*n.relevance) : static_cast<int>(*n.change);
  }

  std::vector<int> labels() const {
    std::vector<int> out(notes_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = label(i);
    return out;
  }

  Corpus subset(std::span<const std::size_t> indices) const {
    std::vector<ClinicalNote> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(notes_.at(i));
    return Corpus(task_, std::move(out));
  }

 private:
  Task task_;
  std::vector<ClinicalNote> notes_;
};

enum class CorpusFormat { Jsonl, Csv };

inline CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "jsonl") return CorpusFormat::Jsonl;
  if (s == "csv") return CorpusFormat::Csv;
  throw ConfigError("unknown corpus format '" + std::string(s) + "' (expected jsonl|csv)");
}

/// Picks the format from a file extension, defaulting to JSONL.
inline CorpusFormat guess_corpus_format(std::string_view path) {
  return path.ends_with(".csv") ? CorpusFormat::Csv : CorpusFormat::Jsonl;
}

namespace detail {

inline std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

inline ClinicalNote make_note(std::size_t line, std::string id, std::string patient, std::string text,
                              const std::optional<std::string>& relevance,
                              const std::optional<std::string>& change) {
  ClinicalNote n{std::move(id), std::move(patient), std::move(text), std::nullopt, std::nullopt};
  if (n.id.empty()) throw DataError(line_prefix(line) + "empty id");
  if (relevance) {
    n.relevance = parse_relevance(*relevance);
    if (!n.relevance) throw DataError(line_prefix(line) + "unknown relevance label '" + *relevance + "'");
  }
  if (change) {
    n.change = parse_change(*change);
    if (!n.change) throw DataError(line_prefix(line) + "unknown change label '" + *change + "'");
    if (n.relevance != PainRelevance::Relevant)
      throw DataError(line_prefix(line) + "change label implies relevance 'yes'");
  }
  return n;
}

inline std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key,
                                                  std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DataError(line_prefix(line) + "field '" + key + "' must be a string");
  auto s = it->get<std::string>();
  if (s.empty()) return std::nullopt;
  return s;
}

inline std::string required_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto v = optional_string(obj, key, line);
  if (!v && std::string_view(key) != "text")
    throw DataError(line_prefix(line) + "missing field '" + key + "'");
  return v.value_or("");
}

inline std::vector<ClinicalNote> read_jsonl(std::istream& in) {
  std::vector<ClinicalNote> notes;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(line_prefix(line) + "invalid JSON: " + e.what());
    }
    if (!obj.is_object()) throw DataError(line_prefix(line) + "expected a JSON object");
    notes.push_back(make_note(line, required_string(obj, "id", line),
                              required_string(obj, "patient_id", line),
                              required_string(obj, "text", line), optional_string(obj, "relevance", line),
                              optional_string(obj, "change", line)));
  }
  return notes;
}

// RFC 4180 record reader. Quoted fields may contain separators, doubled
// quotes and newlines. Returns false at end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  ++line;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (;;) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) throw DataError(line_prefix(line) + "unterminated quoted field");
      fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
    } else if (ch == '"') {
      if (!field.empty() || was_quoted) throw DataError(line_prefix(line) + "stray quote in field");
      quoted = was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (ch == '\r' && in.peek() == '\n') {
      // swallowed; the '\n' ends the record
    } else {
      if (was_quoted) throw DataError(line_prefix(line) + "text after closing quote");
      field.push_back(ch);
    }
  }
}

inline std::vector<ClinicalNote> read_csv(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!read_csv_record(in, fields, line)) throw DataError("CSV input has no header row");
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < fields.size(); ++i) column[fields[i]] = i;
  for (const char* key : {"id", "patient_id", "text"})
    if (!column.contains(key)) throw DataError(line_prefix(1) + "CSV header lacks column '" + key + "'");
  auto cell = [&](const char* key) -> std::optional<std::string> {
    auto it = column.find(key);
    if (it == column.end() || it->second >= fields.size()) return std::nullopt;
    if (fields[it->second].empty()) return std::nullopt;
    return fields[it->second];
  };

  std::vector<ClinicalNote> notes;
  while (read_csv_record(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != column.size())
      throw DataError(line_prefix(line) + "expected " + std::to_string(column.size()) + " fields, got " +
                      std::to_string(fields.size()));
    auto id = cell("id");
    auto patient = cell("patient_id");
    if (!id) throw DataError(line_prefix(line) + "missing field 'id'");
    if (!patient) throw DataError(line_prefix(line) + "missing field 'patient_id'");
    notes.push_back(make_note(line, *id, *patient, cell("text").value_or(""),
                              cell("relevance"), cell("change")));
  }
  return notes;
}

}  // namespace detail

/// Parses notes without requiring any particular label to be present.
inline std::vector<ClinicalNote> read_notes(std::istream& in, CorpusFormat format) {
  auto notes = format == CorpusFormat::Jsonl ? detail::read_jsonl(in) : detail::read_csv(in);
  std::unordered_set<std::string> seen;
  for (const auto& n : notes)
    if (!seen.insert(n.id).second) throw DataError("duplicate note id '" + n.id + "'");
  return notes;
}

inline std::vector<ClinicalNote> read_notes(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return read_notes(in, format);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

/// Restricts parsed notes to the ones a task consumes. The change task only
/// sees notes labelled relevant; irrelevant notes are dropped.
inline Corpus to_corpus(std::vector<ClinicalNote> notes, Task task) {
  if (task == Task::Change) {
    std::erase_if(notes, [](const ClinicalNote& n) { return n.relevance == PainRelevance::Irrelevant; });
  }
  return Corpus(task, std::move(notes));
}

inline Corpus load_corpus(const std::string& path, CorpusFormat format, Task task) {
  try {
    return to_corpus(read_notes(path, format), task);
  } catch (const DataError& e) {
    if (std::string_view(e.what()).starts_with(path)) throw;
    throw DataError(path + ": " + e.what());
  }
}

inline void write_jsonl(std::ostream& out, std::span<const ClinicalNote> notes) {
  for (const auto& n : notes) {
    nlohmann::ordered_json obj;
    obj["id"] = n.id;
    obj["patient_id"] = n.patient_id;
    obj["text"] = n.text;
    obj["relevance"] = n.relevance ? nlohmann::ordered_json(std::string(to_string(*n.relevance))) : nullptr;
    obj["change"] = n.change ? nlohmann::ordered_json(std::string(to_string(*n.change))) : nullptr;
    out << obj.dump() << '\n';
  }
}

inline void write_csv(std::ostream& out, std::span<const ClinicalNote> notes) {
  auto field = [&](std::string_view v) {
    if (v.find_first_of(",\"\r\n") == std::string_view::npos) {
      out << v;
      return;
    }
    out << '"';
    for (char c : v) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  };
  out << "id,patient_id,text,relevance,change\n";
  for (const auto& n : notes) {
    field(n.id);
    out << ',';
    field(n.patient_id);
    out << ',';
    field(n.text);
    out << ',';
    if (n.relevance) field(to_string(*n.relevance));
    out << ',';
    if (n.change) field(to_string(*n.change));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Stratified split

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Number of test items drawn from a class of `count` items.
inline std::size_t stratum_test_count(std::size_t count, double test_fraction) {
  auto n = static_cast<std::size_t>(std::floor(static_cast<double>(count) * test_fraction + 0.5));
  return std::clamp<std::size_t>(n, 1, count - 1);
}

/// Per-class split: each class contributes round-half-up(count * fraction)
/// test items, clamped so both sides keep at least one. Indices come back in
/// corpus order.
inline SplitIndices stratified_split_indices(std::span<const int> labels, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(seed);
  SplitIndices out;
  for (auto& [label, members] : by_class) {
    if (members.size() < 2)
      throw DataError("class " + std::to_string(label) + " has fewer than 2 notes; cannot stratify");
    rng.shuffle(std::span(members));
    const auto n_test = stratum_test_count(members.size(), test_fraction);
    out.test.insert(out.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

inline std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, double test_fraction,
                                                  std::uint64_t seed) {
  const auto labels = corpus.labels();
  const auto idx = stratified_split_indices(labels, test_fraction, seed);
  return {corpus.subset(idx.train), corpus.subset(idx.test)};
}

// ---------------------------------------------------------------------------
// Synthetic corpora

struct SyntheticClass {
  std::string label;  // label string for the spec's task
  std::size_t count = 0;
  std::vector<std::string> keywords;
};

struct SyntheticSpec {
  Task task = Task::Relevance;
  std::vector<SyntheticClass> classes;
  std::vector<std::string> noise;
  double noise_rate = 0.0;
  std::size_t min_tokens = 8;
  std::size_t max_tokens = 16;
  std::size_t patients = 40;
};

/// Draws every token from the note's class pool, or with probability
/// `noise_rate` from the shared noise pool. Output order is shuffled.
inline Corpus generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.classes.empty()) throw std::invalid_argument("synthetic spec has no classes");
  if (!(spec.noise_rate >= 0.0 && spec.noise_rate <= 1.0))
    throw std::invalid_argument("noise_rate must lie in [0, 1]");
  if (spec.min_tokens == 0 || spec.min_tokens > spec.max_tokens)
    throw std::invalid_argument("invalid token count range");
  if (spec.noise.empty() && spec.noise_rate > 0.0) throw std::invalid_argument("noise pool is empty");
  std::set<std::string> used;
  for (const auto& c : spec.classes) {
    if (c.keywords.empty()) throw std::invalid_argument("class '" + c.label + "' has an empty keyword pool");
    for (const auto& w : std::set<std::string>(c.keywords.begin(), c.keywords.end()))
      if (!used.insert(w).second)
        throw std::invalid_argument("keyword '" + w + "' appears in more than one class pool");
  }

  Rng rng(seed);
  std::vector<ClinicalNote> notes;
  for (const auto& c : spec.classes) {
    const int label = parse_label(spec.task, c.label);
    for (std::size_t i = 0; i < c.count; ++i) {
      const auto len = spec.min_tokens + rng.below(spec.max_tokens - spec.min_tokens + 1);
      std::string text;
      for (std::size_t t = 0; t < len; ++t) {
        const bool noisy = spec.noise_rate > 0.0 && rng.uniform() < spec.noise_rate;
        const auto& pool = noisy ? spec.noise : c.keywords;
        if (t) text.push_back(' ');
        text += pool[rng.below(pool.size())];
      }
      ClinicalNote n;
      n.text = std::move(text);
      if (spec.task == Task::Relevance) {
        n.relevance = static_cast<PainRelevance>(label);
      } else {
        n.relevance = PainRelevance::Relevant;
        n.change = static_cast<PainChange>(label);
      }
      notes.push_back(std::move(n));
    }
  }
  rng.shuffle(std::span(notes));
  for (std::size_t i = 0; i < notes.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "syn-%05zu", i);
    notes[i].id = buf;
    notes[i].patient_id = "patient-" + std::to_string(i % std::max<std::size_t>(spec.patients, 1));
  }
  return Corpus(spec.task, std::move(notes));
}

/// Planted corpus with clinical-flavoured, class-exclusive keyword pools.
/// Pools stay disjoint after stemming and contain no stopwords.
inline SyntheticSpec planted_spec(Task task, std::size_t notes_per_class, double noise_rate) {
  SyntheticSpec spec;
  spec.task = task;
  spec.noise_rate = noise_rate;
  if (task == Task::Relevance) {
    spec.classes = {
        {"yes", notes_per_class,
         {"emar", "intervention", "increase", "dose", "chest", "regimen", "toradol", "medication", "dilaudid",
          "9/10"}},
        {"no", notes_per_class,
         {"home", "wheelchair", "chc", "fatigue", "bedside", "parent", "discharge", "warm", "mother",
          "ambulate"}},
    };
    spec.noise = {"pain", "pca", "plan", "develop", "control", "patient", "level", "comfort", "manage", "note"};
  } else {
    spec.classes = {
        {"pain decrease", notes_per_class,
         {"decrease", "improve", "relief", "resolve", "2/10", "wean", "comfortable", "tolerate"}},
        {"pain unchanged", notes_per_class,
         {"unchanged", "stable", "baseline", "persist", "remain", "constant", "steady", "6/10"}},
        {"pain uncertain", notes_per_class,
         {"unclear", "fluctuate", "assess", "monitor", "uncertain", "variable", "vague", "question"}},
        {"pain increase", notes_per_class,
         {"increase", "worsen", "severe", "spike", "toradol", "dilaudid", "10/10", "breakthrough"}},
    };
    spec.noise = {"pain", "pca", "plan", "patient", "level", "goal", "regimen", "manage", "dose", "medication"};
  }
  return spec;
}

}  // namespace painsift
