#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trikernel {

enum class Code {
  Parse,
  Unbound,
  Modality,
  CellBoundary,
  Conv,
  Universe,
  LatticeSize,
};

std::string_view code_name(Code c);
std::optional<Code> parse_code(std::string_view s);

/// Half-open byte range into a source buffer.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span &) const = default;
};

struct Diagnostic {
  std::string file;
  Span span;
  std::size_t line = 0; // 1-based
  std::size_t col = 0;  // 1-based, in bytes
  Code code = Code::Parse;
  std::string message;
  std::optional<std::string> expected;
  std::optional<std::string> actual;
};

/// Carrier for diagnostics raised deep inside the engines. Positions are
/// filled in by whoever owns the source text.
class Error : public std::runtime_error {
public:
  Error(Code code, std::string message, Span span = {})
      : std::runtime_error(message), code(code), span(span) {}
  Code code;
  Span span;
  std::optional<std::string> expected;
  std::optional<std::string> actual;
};

/// Maps byte offsets to 1-based line/column pairs.
class LineIndex {
public:
  explicit LineIndex(std::string_view text);
  std::pair<std::size_t, std::size_t> locate(std::size_t offset) const;

private:
  std::vector<std::size_t> starts_;
};

Diagnostic make_diagnostic(const std::string &file, const LineIndex &lines,
                           const Error &e);

/// Sorts by (file, offset, code) so output is deterministic.
void sort_diagnostics(std::vector<Diagnostic> &ds);

std::string format_human(const Diagnostic &d);
std::string format_json(const Diagnostic &d);

} // namespace trikernel
