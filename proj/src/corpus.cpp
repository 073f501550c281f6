#include "trikernel/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trikernel/checker.hpp"
#include "trikernel/prelude.hpp"

namespace trikernel::corpus {

const std::vector<std::string> kInScopeAnchors = {
    "def:simplex",      "def:horn",           "def:boundary",      "def:hom",
    "def:dhom",         "def:segal",          "def:compose",       "def:iso",
    "def:idtoiso",      "def:rezk",           "def:groupoid",      "def:is-simp",
    "def:u-simp",       "def:covfam",         "def:total",         "lem:cov-transport",
    "def:acov",         "def:u-acov",         "thm:acov-ordinary", "thm:acov-closure",
    "def:space",        "lem:mortofun",       "thm:dua",           "thm:space-segal-rezk",
    "def:glue",
    "def:full-sub",     "thm:fullness",       "def:space-le",      "def:finset",
    "def:monoid",       "thm:monoid-nat"};

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w)
    if (w != "-")
      out.push_back(w);
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size())
        out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

} // namespace

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::set<std::string> seen;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    auto fail = [&](const std::string &why) {
      throw std::runtime_error("MANIFEST line " + std::to_string(i + 1) + ": " + why);
    };
    if (line.empty() || line[0] == '#')
      continue;
    if (line.rfind("version", 0) == 0) {
      try {
        m.version = std::stoi(line.substr(7));
      } catch (const std::exception &) {
        fail("bad version line");
      }
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      std::size_t bar = line.find('|', start);
      cols.push_back(trim(std::string_view(line).substr(start, bar - start)));
      if (bar == std::string::npos)
        break;
      start = bar + 1;
    }
    if (cols.size() != 4)
      fail("expected 4 columns: file | anchors | expect | deps");
    ManifestEntry e;
    e.file = cols[0];
    e.anchors = words(cols[1]);
    if (cols[2] != "pass") {
      e.expect = parse_code(cols[2]);
      if (!e.expect)
        fail("unknown expectation '" + cols[2] + "'");
    }
    e.deps = words(cols[3]);
    for (const std::string &d : e.deps)
      if (!seen.count(d))
        fail("dependency '" + d + "' is not listed before '" + e.file + "'");
    if (!seen.insert(e.file).second)
      fail("duplicate entry '" + e.file + "'");
    e.line = i + 1;
    m.entries.push_back(std::move(e));
  }
  if (m.version != 1)
    throw std::runtime_error("MANIFEST: missing or unsupported version");
  return m;
}

std::vector<Marker> find_markers(std::string_view text) {
  std::vector<Marker> out;
  auto lines = split_lines(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view l = lines[i];
    if (l.substr(0, 2) != "--")
      continue;
    std::size_t caret = l.find('^');
    if (caret == std::string_view::npos || l.find_first_not_of(' ', 2) != caret)
      continue;
    std::string rest = trim(l.substr(caret + 1));
    if (auto code = parse_code(rest))
      out.push_back(Marker{i, caret + 1, *code}); // i is the 1-based line above
  }
  return out;
}

FileResult judge(const ManifestEntry &e, std::string_view text, std::vector<Diagnostic> diags) {
  FileResult r;
  r.file = e.file;
  r.diagnostics = std::move(diags);
  if (!e.expect) {
    r.ok = r.diagnostics.empty();
    if (!r.ok)
      r.detail = std::to_string(r.diagnostics.size()) + " unexpected diagnostic(s)";
    return r;
  }
  auto markers = find_markers(text);
  if (markers.size() != 1 || markers[0].code != *e.expect) {
    r.detail = "negative file needs exactly one marker for " + std::string(code_name(*e.expect));
    return r;
  }
  if (r.diagnostics.size() != 1) {
    r.detail = "expected exactly one diagnostic, got " + std::to_string(r.diagnostics.size());
    return r;
  }
  const Diagnostic &d = r.diagnostics[0];
  if (d.code != *e.expect) {
    r.detail = "expected " + std::string(code_name(*e.expect)) + ", got " +
               std::string(code_name(d.code));
    return r;
  }
  if (d.line != markers[0].line || d.col != markers[0].col) {
    r.detail = "expected at " + std::to_string(markers[0].line) + ":" +
               std::to_string(markers[0].col) + ", got " + std::to_string(d.line) + ":" +
               std::to_string(d.col);
    return r;
  }
  r.ok = true;
  return r;
}

std::string default_stdlib_dir() { return std::string(TRIKERNEL_DEFAULT_ROOT) + "/stdlib"; }

bool Report::ok() const {
  if (!missing_anchors.empty() || !dead_entries.empty() || !prelude_errors.empty())
    return false;
  return std::all_of(files.begin(), files.end(), [](const FileResult &f) { return f.ok; });
}

Report run(const Manifest &m, const Options &opts) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  Report rep;
  const std::string prelude_text = prelude::read_file(opts.prelude_path);

  std::map<std::string, const ManifestEntry *> by_file;
  for (const ManifestEntry &e : m.entries)
    by_file[e.file] = &e;
  std::map<std::string, std::string> texts;
  auto text_of = [&](const std::string &f) -> const std::string & {
    auto it = texts.find(f);
    if (it == texts.end())
      it = texts.emplace(f, prelude::read_file(opts.stdlib_dir + "/" + f)).first;
    return it->second;
  };

  std::set<std::string> used_prelude;
  std::size_t prelude_count = 0;
  for (const ManifestEntry &e : m.entries) {
    const auto f0 = clock::now();
    Checker checker(opts.search_depth);
    auto pre = checker.check_source(opts.prelude_path, prelude_text);
    if (!pre.empty() && rep.prelude_errors.empty())
      for (const Diagnostic &d : pre)
        rep.prelude_errors.push_back(format_human(d));
    prelude_count = checker.globals().size();
    checker.reset_used();

    // Dependencies in manifest order; the manifest parser guarantees they
    // come earlier, so this order is topological.
    std::set<std::string> closure;
    std::vector<std::string> stack = e.deps;
    while (!stack.empty()) {
      std::string d = stack.back();
      stack.pop_back();
      if (closure.insert(d).second)
        for (const std::string &dd : by_file.at(d)->deps)
          stack.push_back(dd);
    }
    for (const ManifestEntry &dep : m.entries)
      if (closure.count(dep.file))
        checker.check_source(dep.file, text_of(dep.file));

    const std::string &text = text_of(e.file);
    auto diags = checker.check_source(e.file, text);
    if (!e.expect)
      for (std::uint32_t id : checker.used())
        if (id < prelude_count)
          used_prelude.insert(checker.globals().at(id).name);
    FileResult fr = judge(e, text, std::move(diags));
    fr.ms = std::chrono::duration<double, std::milli>(clock::now() - f0).count();
    rep.files.push_back(std::move(fr));
  }

  if (opts.whole_corpus_checks) {
    std::set<std::string> anchors;
    for (const ManifestEntry &e : m.entries)
      if (!e.expect)
        anchors.insert(e.anchors.begin(), e.anchors.end());
    for (const std::string &a : kInScopeAnchors)
      if (!anchors.count(a))
        rep.missing_anchors.push_back(a);
    Checker lint(opts.search_depth);
    lint.check_source(opts.prelude_path, prelude_text);
    rep.dead_entries = prelude::dead_entries(lint.globals(), lint.globals().size(), used_prelude);
  }
  rep.total_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  return rep;
}

std::string format_report(const Report &r) {
  std::ostringstream out;
  for (const FileResult &f : r.files) {
    out << (f.ok ? "PASS " : "FAIL ") << f.file;
    if (!f.detail.empty())
      out << "  (" << f.detail << ")";
    out << "\n";
    if (!f.ok)
      for (const Diagnostic &d : f.diagnostics)
        out << "  " << format_human(d) << "\n";
  }
  for (const std::string &e : r.prelude_errors)
    out << "prelude: " << e << "\n";
  for (const std::string &a : r.missing_anchors)
    out << "anchor not covered: " << a << "\n";
  for (const std::string &n : r.dead_entries)
    out << "dead prelude entry: " << n << "\n";
  out << (r.ok() ? "corpus ok" : "corpus FAILED") << " (" << r.files.size() << " files, "
      << static_cast<long>(r.total_ms) << " ms)\n";
  return out.str();
}

} // namespace trikernel::corpus
