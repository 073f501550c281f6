#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trikernel/checker.hpp"
#include "trikernel/diagnostic.hpp"

namespace trikernel::prelude {

/// The ten axiom anchors the coverage table requires, in order.
extern const std::vector<std::string> kAxiomAnchors;

/// Tiers an entry may carry. "definition" marks checked defs with no
/// postulate behind them.
extern const std::vector<std::string> kTiers;

struct Entry {
  std::string name;
  std::string anchor;
  std::string tier;
  bool statement_only = false;
  bool ok = true;
  std::size_t line = 0;
};

struct Report {
  std::vector<Entry> entries;
  std::vector<Diagnostic> diagnostics;
  std::map<std::string, int> tier_counts;
  /// Paper-axiom anchors with exactly one paper-axiom entry.
  std::vector<std::string> covered;
  /// Paper-axiom anchors with no paper-axiom entry.
  std::vector<std::string> missing;
  /// Paper-axiom anchors with more than one paper-axiom entry.
  std::vector<std::string> duplicated;
  /// Entries with a missing or unknown tier.
  std::vector<std::string> untiered;
  /// Counts stated in the file's `tier-counts:` comment, if it has one.
  std::map<std::string, int> documented_tiers;

  bool tiers_match() const { return documented_tiers.empty() || documented_tiers == tier_counts; }
  bool ok() const {
    return diagnostics.empty() && missing.empty() && duplicated.empty() && untiered.empty() &&
           tiers_match();
  }
};

/// TTT_PRELUDE if set, else the prelude shipped under the source root.
std::string default_path();

/// Throws std::runtime_error when the file cannot be read.
std::string read_file(const std::string &path);

/// Checks `text` into `checker` and builds the coverage report.
Report load(Checker &checker, const std::string &file, std::string_view text);

/// load() into a fresh checker.
Report verify(const std::string &file, std::string_view text);

/// Names of prelude entries (the first `count` globals) that no used global
/// reaches through types or values. Statement-only entries are exempt.
std::vector<std::string> dead_entries(const core::Globals &globals, std::size_t count,
                                      const std::set<std::string> &used_names);

std::string format_report(const Report &r);

} // namespace trikernel::prelude
