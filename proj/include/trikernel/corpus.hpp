#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trikernel/diagnostic.hpp"
#include "trikernel/modality.hpp"

namespace trikernel::corpus {

/// Anchors the positive corpus must cover between its files.
extern const std::vector<std::string> kInScopeAnchors;

struct ManifestEntry {
  std::string file; // relative to the stdlib directory
  std::vector<std::string> anchors;
  std::optional<Code> expect; // empty means the file must check cleanly
  std::vector<std::string> deps;
  std::size_t line = 0;
};

struct Manifest {
  int version = 0;
  std::vector<ManifestEntry> entries;
};

/// Throws std::runtime_error naming the line on malformed input, unknown
/// codes, or a dependency that is not listed earlier.
Manifest parse_manifest(std::string_view text);

/// A `-- ^ E-CODE` comment marks the column of the line above it.
struct Marker {
  std::size_t line = 0;
  std::size_t col = 0;
  Code code = Code::Parse;
};
std::vector<Marker> find_markers(std::string_view text);

struct FileResult {
  std::string file;
  bool ok = false;
  std::string detail;
  std::vector<Diagnostic> diagnostics;
  double ms = 0;
};

struct Report {
  std::vector<FileResult> files;
  std::vector<std::string> missing_anchors;
  std::vector<std::string> dead_entries;
  std::vector<std::string> prelude_errors;
  double total_ms = 0;

  bool ok() const;
};

struct Options {
  std::string stdlib_dir;
  std::string prelude_path;
  int search_depth = modality::kDefaultSearchDepth;
  /// Anchor coverage and the dead-entry lint only make sense on the full
  /// manifest.
  bool whole_corpus_checks = true;
};

/// The stdlib directory under the source root.
std::string default_stdlib_dir();

Report run(const Manifest &m, const Options &opts);

/// Checks one file against its expectation. `diags` are the diagnostics
/// attributed to that file.
FileResult judge(const ManifestEntry &e, std::string_view text, std::vector<Diagnostic> diags);

std::string format_report(const Report &r);

} // namespace trikernel::corpus
