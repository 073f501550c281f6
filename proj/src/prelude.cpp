#include "trikernel/prelude.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trikernel::prelude {

const std::vector<std::string> kAxiomAnchors = {
    "ax:int",           "ax:int-is-left-adjoint", "ax:op-of-int-is-int",    "ax:univalence",
    "ax:crisp-id-induction", "ax:discrete-iff-crisp", "ax:global-points", "ax:cubes-separate",
    "ax:simplicial-stability", "ax:sqc"};

const std::vector<std::string> kTiers = {"paper-axiom", "paper-lemma-postulated",
                                         "infrastructure-postulate", "definition"};

std::string default_path() {
  if (const char *env = std::getenv("TTT_PRELUDE"); env && *env)
    return env;
  return std::string(TRIKERNEL_DEFAULT_ROOT) + "/prelude/prelude.ttt";
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Report load(Checker &checker, const std::string &file, std::string_view text) {
  Report r;
  r.diagnostics = checker.check_source(file, text);

  // The checker keeps no per-declaration record, so parse again for names,
  // pragmas and spans. A parse failure already produced the only diagnostic.
  syntax::ParseResult parsed = syntax::parse_module(text);
  if (!parsed.module) {
    r.missing = kAxiomAnchors;
    return r;
  }
  LineIndex lines(text);
  std::map<std::string, int> axiom_entries;
  for (const syntax::Decl &d : parsed.module->decls) {
    if (d.kind != syntax::Decl::Kind::Def && d.kind != syntax::Decl::Kind::Axiom)
      continue;
    Entry e;
    e.name = d.name;
    if (auto it = d.attrs.find("anchor"); it != d.attrs.end())
      e.anchor = it->second;
    if (auto it = d.attrs.find("tier"); it != d.attrs.end())
      e.tier = it->second;
    e.statement_only = d.attrs.count("statement-only") > 0;
    e.line = lines.locate(d.span.begin).first;
    for (const Diagnostic &diag : r.diagnostics)
      if (diag.span.begin >= d.span.begin && diag.span.begin < d.span.end)
        e.ok = false;
    if (std::find(kTiers.begin(), kTiers.end(), e.tier) == kTiers.end())
      r.untiered.push_back(e.name);
    else
      ++r.tier_counts[e.tier];
    if (e.tier == "paper-axiom")
      ++axiom_entries[e.anchor];
    r.entries.push_back(std::move(e));
  }
  const std::string_view key = "-- tier-counts:";
  if (std::size_t at = text.find(key); at != std::string_view::npos) {
    std::size_t eol = text.find('\n', at);
    std::istringstream in(std::string(text.substr(at + key.size(), eol - at - key.size())));
    std::string item;
    while (in >> item)
      if (std::size_t eq = item.find('='); eq != std::string::npos)
        r.documented_tiers[item.substr(0, eq)] = std::atoi(item.c_str() + eq + 1);
  }
  for (const std::string &ax : kAxiomAnchors) {
    int n = axiom_entries.count(ax) ? axiom_entries[ax] : 0;
    if (n == 0)
      r.missing.push_back(ax);
    else if (n > 1)
      r.duplicated.push_back(ax);
    else
      r.covered.push_back(ax);
  }
  return r;
}

Report verify(const std::string &file, std::string_view text) {
  Checker checker;
  return load(checker, file, text);
}

std::vector<std::string> dead_entries(const core::Globals &globals, std::size_t count,
                                      const std::set<std::string> &used_names) {
  count = std::min(count, globals.size());
  std::map<std::string, std::uint32_t> ids;
  for (std::uint32_t i = 0; i < count; ++i)
    ids.emplace(globals.at(i).name, i);

  // Statement-only entries are roots too: what they mention is kept alive
  // by the statement, not by the corpus.
  std::vector<bool> live(count, false);
  std::vector<std::uint32_t> work;
  auto mark = [&](std::uint32_t id) {
    if (!live[id]) {
      live[id] = true;
      work.push_back(id);
    }
  };
  for (const std::string &n : used_names)
    if (auto it = ids.find(n); it != ids.end())
      mark(it->second);
  for (std::uint32_t i = 0; i < count; ++i)
    if (globals.at(i).attrs.count("statement-only"))
      mark(i);
  while (!work.empty()) {
    const core::Global &g = globals.at(work.back());
    work.pop_back();
    std::set<std::uint32_t> refs;
    collect_globals(g.type, refs);
    collect_globals(g.value, refs);
    for (std::uint32_t id : refs)
      if (id < count)
        mark(id);
  }
  std::vector<std::string> dead;
  for (std::uint32_t i = 0; i < count; ++i)
    if (!live[i] && !globals.at(i).attrs.count("statement-only"))
      dead.push_back(globals.at(i).name);
  return dead;
}

std::string format_report(const Report &r) {
  std::ostringstream out;
  for (const Entry &e : r.entries)
    out << (e.ok ? "ok   " : "FAIL ") << e.name << "  [" << (e.tier.empty() ? "?" : e.tier)
        << "] " << e.anchor << (e.statement_only ? " statement-only" : "") << "\n";
  out << "coverage:\n";
  for (const std::string &ax : kAxiomAnchors) {
    const char *state = "present";
    if (std::find(r.missing.begin(), r.missing.end(), ax) != r.missing.end())
      state = "MISSING";
    else if (std::find(r.duplicated.begin(), r.duplicated.end(), ax) != r.duplicated.end())
      state = "DUPLICATED";
    out << "  " << ax << " " << state << "\n";
  }
  out << "tiers:";
  for (const auto &[tier, n] : r.tier_counts)
    out << " " << tier << "=" << n;
  out << "\n";
  if (!r.tiers_match())
    out << "tier counts differ from the documented tier-counts line\n";
  for (const std::string &n : r.untiered)
    out << "untiered: " << n << "\n";
  for (const Diagnostic &d : r.diagnostics)
    out << format_human(d) << "\n";
  out << (r.ok() ? "prelude ok" : "prelude FAILED") << " (" << r.covered.size() << "/"
      << kAxiomAnchors.size() << " axioms)\n";
  return out.str();
}

} // namespace trikernel::prelude
