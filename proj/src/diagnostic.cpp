#include "trikernel/diagnostic.hpp"

#include <algorithm>
#include <array>
#include <tuple>

#include <json.hpp>

namespace trikernel {

namespace {
constexpr std::array<std::pair<Code, std::string_view>, 7> kCodes{{
    {Code::Parse, "E-PARSE"},
    {Code::Unbound, "E-UNBOUND"},
    {Code::Modality, "E-MODALITY"},
    {Code::CellBoundary, "E-2CELL-BOUNDARY"},
    {Code::Conv, "E-CONV"},
    {Code::Universe, "E-UNIVERSE"},
    {Code::LatticeSize, "E-LATTICE-SIZE"},
}};
} // namespace

std::string_view code_name(Code c) {
  for (auto &[k, v] : kCodes)
    if (k == c)
      return v;
  return "E-UNKNOWN";
}

std::optional<Code> parse_code(std::string_view s) {
  for (auto &[k, v] : kCodes)
    if (v == s)
      return k;
  return std::nullopt;
}

LineIndex::LineIndex(std::string_view text) {
  starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == '\n')
      starts_.push_back(i + 1);
}

std::pair<std::size_t, std::size_t> LineIndex::locate(std::size_t offset) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
  std::size_t line = static_cast<std::size_t>(it - starts_.begin());
  return {line, offset - starts_[line - 1] + 1};
}

Diagnostic make_diagnostic(const std::string &file, const LineIndex &lines,
                           const Error &e) {
  Diagnostic d;
  d.file = file;
  d.span = e.span;
  std::tie(d.line, d.col) = lines.locate(e.span.begin);
  d.code = e.code;
  d.message = e.what();
  d.expected = e.expected;
  d.actual = e.actual;
  return d;
}

void sort_diagnostics(std::vector<Diagnostic> &ds) {
  std::stable_sort(ds.begin(), ds.end(), [](const Diagnostic &a, const Diagnostic &b) {
    return std::tie(a.file, a.span.begin, a.code) < std::tie(b.file, b.span.begin, b.code);
  });
}

std::string format_human(const Diagnostic &d) {
  std::string out = d.file + ":" + std::to_string(d.line) + ":" + std::to_string(d.col) +
                    ": " + std::string(code_name(d.code)) + ": " + d.message;
  if (d.expected)
    out += "\n  expected: " + *d.expected;
  if (d.actual)
    out += "\n  actual:   " + *d.actual;
  return out;
}

std::string format_json(const Diagnostic &d) {
  nlohmann::ordered_json j;
  j["file"] = d.file;
  j["span"] = {{"begin", d.span.begin}, {"end", d.span.end}};
  j["line"] = d.line;
  j["column"] = d.col;
  j["code"] = code_name(d.code);
  j["message"] = d.message;
  if (d.expected)
    j["expected"] = *d.expected;
  if (d.actual)
    j["actual"] = *d.actual;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

} // namespace trikernel
