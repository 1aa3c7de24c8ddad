#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aperiodic/core/pointset.hpp"
#include "aperiodic/cutproject/scheme.hpp"
#include "aperiodic/cutproject/window.hpp"
#include "aperiodic/substitution/substitution.hpp"

namespace aperiodic {

/// One line of a sectioned text file: `key = value` or a raw line.
struct TextLine {
  int number = 0;
  std::string key;
  std::string value;
  std::string raw;
  bool is_entry() const { return !key.empty(); }
};

/// `[kind name]` followed by its lines. '#' starts a comment.
struct TextSection {
  std::string kind;
  std::string name;
  int number = 0;
  std::vector<TextLine> lines;

  std::optional<std::string> get(std::string_view key) const;
};

/// Errors: ParseError (with line numbers).
std::vector<TextSection> parse_sections(std::string_view text);

/// `[rule name]` sections with lines `a -> a b b b`; symbols are ordered by
/// their first left-hand appearance.
std::vector<SubstitutionRule1D> parse_rules(std::string_view text);
SubstitutionRule1D parse_rule_section(const TextSection& section);

struct SchemeSpec {
  std::string name;
  IntMatrix matrix;
  int d = 0;
  EigenSelector selector;
  /// canonical | interval | polygon
  std::string window_kind = "canonical";
  std::vector<double> window_data;

  ProjectionScheme build() const;
  Window window(const ProjectionScheme& scheme) const;
};

/// `[scheme name]` sections (`matrix = n n` plus n rows, `d = k`,
/// `selector = leading` or `selector = indices i j ...`), each optionally
/// followed by a `[window]` section with `kind` and `data`.
std::vector<SchemeSpec> parse_schemes(std::string_view text);

/// Run configuration: `[run]` key/values plus any rule or scheme sections.
struct RunConfig {
  std::map<std::string, std::string> run;
  std::vector<SubstitutionRule1D> rules;
  std::vector<SchemeSpec> schemes;
};
RunConfig parse_config(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Columns x[, y, z], then label and lattice columns when present.
std::string point_set_csv(const PointSet& ps);

/// Parses a comma/space separated list of numbers. Errors: ParseError.
std::vector<double> parse_numbers(std::string_view text);

}  // namespace aperiodic
