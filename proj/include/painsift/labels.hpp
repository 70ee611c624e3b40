#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "painsift/error.hpp"

namespace painsift {

enum class Task { Relevance, Change };

// Class indices double as the numeric encoding used by models and metrics.
enum class PainRelevance : int { Irrelevant = 0, Relevant = 1 };

/// Ordinal pain change, encoded from least to most severe.
enum class PainChange : int { Decrease = 0, Unchanged = 1, Uncertain = 2, Increase = 3 };

inline constexpr std::array<std::string_view, 2> kRelevanceNames = {"no", "yes"};
inline constexpr std::array<std::string_view, 4> kChangeNames = {
    "pain decrease", "pain unchanged", "pain uncertain", "pain increase"};

inline std::string_view to_string(PainRelevance r) { return kRelevanceNames[static_cast<int>(r)]; }
inline std::string_view to_string(PainChange c) { return kChangeNames[static_cast<int>(c)]; }

inline std::optional<PainRelevance> parse_relevance(std::string_view s) {
  for (std::size_t i = 0; i < kRelevanceNames.size(); ++i)
    if (s == kRelevanceNames[i]) return static_cast<PainRelevance>(i);
  return std::nullopt;
}

inline std::optional<PainChange> parse_change(std::string_view s) {
  for (std::size_t i = 0; i < kChangeNames.size(); ++i)
    if (s == kChangeNames[i]) return static_cast<PainChange>(i);
  return std::nullopt;
}

inline std::string_view to_string(Task t) { return t == Task::Relevance ? "relevance" : "change"; }

inline Task parse_task(std::string_view s) {
  if (s == "relevance") return Task::Relevance;
  if (s == "change") return Task::Change;
  throw ConfigError("unknown task '" + std::string(s) + "' (expected relevance|change)");
}

inline std::span<const std::string_view> class_names(Task t) {
  if (t == Task::Relevance) return kRelevanceNames;
  return kChangeNames;
}

inline int class_count(Task t) { return static_cast<int>(class_names(t).size()); }

/// Class index of a label string for the given task; throws DataError on unknown labels.
inline int parse_label(Task t, std::string_view s) {
  const auto names = class_names(t);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (s == names[i]) return static_cast<int>(i);
  throw DataError("unknown " + std::string(to_string(t)) + " label '" + std::string(s) + "'");
}

}  // namespace painsift
