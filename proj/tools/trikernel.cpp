// Command-line driver. Exit codes: 0 success, 1 diagnostics or a failed
// corpus, 2 I/O trouble or bad arguments.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trikernel/checker.hpp"
#include "trikernel/corpus.hpp"
#include "trikernel/lattice.hpp"
#include "trikernel/modality.hpp"
#include "trikernel/prelude.hpp"

namespace tk = trikernel;

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;

void emit(const std::vector<tk::Diagnostic> &diags, bool json) {
  for (const tk::Diagnostic &d : diags)
    std::cout << (json ? tk::format_json(d) : tk::format_human(d)) << "\n";
}

bool by_position(const tk::Diagnostic &a, const tk::Diagnostic &b) {
  if (a.file != b.file)
    return a.file < b.file;
  return a.span.begin < b.span.begin;
}

struct CheckArgs {
  std::vector<std::string> files;
  std::string prelude;
  bool json = false;
  bool no_prelude = false;
};

// Files share one scope in command-line order, so later files may use
// earlier ones. Diagnostics come out sorted by file, then offset.
int cmd_check(const CheckArgs &a, int depth) {
  std::vector<std::pair<std::string, std::string>> inputs;
  try {
    if (!a.no_prelude) {
      std::string path = a.prelude.empty() ? tk::prelude::default_path() : a.prelude;
      inputs.emplace_back(path, tk::prelude::read_file(path));
    }
    for (const std::string &f : a.files)
      inputs.emplace_back(f, tk::prelude::read_file(f));
  } catch (const std::exception &e) {
    std::cerr << "trikernel: " << e.what() << "\n";
    return kUsage;
  }
  tk::Checker checker(depth);
  std::vector<tk::Diagnostic> all;
  for (const auto &[file, text] : inputs) {
    auto diags = checker.check_source(file, text);
    all.insert(all.end(), diags.begin(), diags.end());
  }
  std::stable_sort(all.begin(), all.end(), by_position);
  emit(all, a.json);
  return all.empty() ? kOk : kDiagnostics;
}

int cmd_mode_normalize(const std::string &text) {
  auto w = tk::modality::parse_word(text);
  if (!w) {
    std::cerr << "trikernel: cannot parse modality word '" << text << "'\n";
    return kUsage;
  }
  std::cout << tk::modality::to_string(tk::modality::normalize(*w)) << "\n";
  return kOk;
}

int cmd_mode_cell(const std::string &src, const std::string &dst, int depth) {
  auto s = tk::modality::parse_word(src);
  auto d = tk::modality::parse_word(dst);
  if (!s || !d) {
    std::cerr << "trikernel: cannot parse modality word '" << (s ? dst : src) << "'\n";
    return kUsage;
  }
  if (auto c = tk::modality::cell_search(*s, *d, depth))
    std::cout << tk::modality::to_string(*c) << "\n";
  else
    std::cout << "none (depth " << depth << ")\n";
  return kOk;
}

struct LatticeArgs {
  std::string sub;
  std::vector<std::string> args;
};

int cmd_lattice(const LatticeArgs &a) {
  namespace lat = tk::lattice;
  lat::AtomTable atoms;
  auto poly = [&](const std::string &s) { return lat::canon(*lat::parse_expr(s, atoms)); };
  auto need = [&](std::size_t n) {
    if (a.args.size() != n)
      throw CLI::ValidationError("lattice " + a.sub, "expects " + std::to_string(n) +
                                                         " argument(s)");
  };
  try {
    if (a.sub == "nf") {
      need(1);
      std::cout << lat::to_string(poly(a.args[0]), atoms) << "\n";
    } else if (a.sub == "eq" || a.sub == "leq") {
      need(2);
      lat::Poly p = poly(a.args[0]);
      lat::Poly q = poly(a.args[1]);
      bool r = a.sub == "eq" ? lat::eq(p, q) : lat::leq(p, q);
      std::cout << (r ? "true" : "false") << "\n";
    } else if (a.sub == "phoa") {
      need(2);
      lat::Poly p = poly(a.args[0]);
      lat::Atom x = atoms.intern(a.args[1]);
      auto [p0, p1] = lat::phoa_endpoints(p, x);
      std::cout << "(" << lat::to_string(p0, atoms) << ", " << lat::to_string(p1, atoms)
                << ")\n";
    } else if (a.sub == "count") {
      need(1);
      unsigned long n = 0;
      try {
        std::size_t used = 0;
        n = std::stoul(a.args[0], &used);
        if (used != a.args[0].size())
          throw std::invalid_argument("trailing");
      } catch (const std::exception &) {
        std::cerr << "trikernel: count expects a natural number\n";
        return kUsage;
      }
      std::cout << lat::count_free(static_cast<unsigned>(std::min(n, 1000UL))) << "\n";
    }
  } catch (const tk::Error &e) {
    std::cerr << "trikernel: " << tk::code_name(e.code) << ": " << e.what() << "\n";
    return e.code == tk::Code::Parse ? kUsage : kDiagnostics;
  }
  return kOk;
}

struct CorpusArgs {
  std::string manifest;
  std::string stdlib;
  std::string prelude;
};

int cmd_corpus(const CorpusArgs &a, int depth) {
  tk::corpus::Options opts;
  opts.stdlib_dir = a.stdlib.empty() ? tk::corpus::default_stdlib_dir() : a.stdlib;
  opts.prelude_path = a.prelude.empty() ? tk::prelude::default_path() : a.prelude;
  opts.search_depth = depth;
  std::string manifest_path = a.manifest.empty() ? opts.stdlib_dir + "/MANIFEST" : a.manifest;
  try {
    auto m = tk::corpus::parse_manifest(tk::prelude::read_file(manifest_path));
    auto report = tk::corpus::run(m, opts);
    std::cout << tk::corpus::format_report(report);
    return report.ok() ? kOk : kDiagnostics;
  } catch (const std::exception &e) {
    std::cerr << "trikernel: " << e.what() << "\n";
    return kUsage;
  }
}

int cmd_prelude(const std::string &path_arg) {
  std::string path = path_arg.empty() ? tk::prelude::default_path() : path_arg;
  try {
    auto report = tk::prelude::verify(path, tk::prelude::read_file(path));
    std::cout << tk::prelude::format_report(report);
    return report.ok() ? kOk : kDiagnostics;
  } catch (const std::exception &e) {
    std::cerr << "trikernel: " << e.what() << "\n";
    return kUsage;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"trikernel: a checker for triangulated type theory"};
  app.require_subcommand(1);
  int depth = tk::modality::kDefaultSearchDepth;
  app.add_option("--depth", depth, "Bound on 2-cell search")
      ->check(CLI::Range(0, 64))
      ->capture_default_str();

  CheckArgs check;
  auto *c = app.add_subcommand("check", "Check files against the prelude");
  c->add_option("files", check.files, "Source files, checked in order")->required();
  c->add_option("--prelude", check.prelude, "Prelude path (default: $TTT_PRELUDE or shipped)");
  c->add_flag("--no-prelude", check.no_prelude, "Check without any prelude");
  c->add_flag("--json", check.json, "One JSON diagnostic per line");
  c->add_option("--depth", depth, "Bound on 2-cell search")->check(CLI::Range(0, 64));

  auto *mode = app.add_subcommand("mode", "Query the mode theory");
  mode->require_subcommand(1);
  std::string word;
  auto *norm = mode->add_subcommand("normalize", "Normal form of a modality word");
  norm->add_option("word", word)->required();
  std::string src, dst;
  auto *cell = mode->add_subcommand("cell", "Search for a 2-cell SRC => DST");
  cell->add_option("src", src)->required();
  cell->add_option("dst", dst)->required();
  cell->add_option("--depth", depth, "Bound on 2-cell search")->check(CLI::Range(0, 64));

  LatticeArgs lattice;
  auto *lat = app.add_subcommand("lattice", "Query the interval lattice solver");
  lat->require_subcommand(1);
  std::vector<CLI::App *> lat_subs;
  for (const char *name : {"nf", "eq", "leq", "phoa", "count"}) {
    auto *sub = lat->add_subcommand(name);
    sub->add_option("args", lattice.args)->required();
    sub->callback([&lattice, name] { lattice.sub = name; });
    lat_subs.push_back(sub);
  }
  lat_subs[0]->description("Canonical form of an expression");
  lat_subs[1]->description("Equality of two expressions");
  lat_subs[2]->description("Order between two expressions");
  lat_subs[3]->description("Endpoints of an expression along an atom");
  lat_subs[4]->description("Number of elements of the free lattice on n atoms");

  CorpusArgs corpus;
  auto *cor = app.add_subcommand("corpus", "Run the checked corpus");
  cor->require_subcommand(1);
  auto *run = cor->add_subcommand("run", "Check every manifest entry");
  run->add_option("--manifest", corpus.manifest, "Manifest path (default: STDLIB/MANIFEST)");
  run->add_option("--stdlib", corpus.stdlib, "Corpus directory");
  run->add_option("--prelude", corpus.prelude, "Prelude path");
  run->add_option("--depth", depth, "Bound on 2-cell search")->check(CLI::Range(0, 64));

  std::string prelude_path;
  auto *pre = app.add_subcommand("prelude", "Check the prelude and print its coverage table");
  pre->add_option("path", prelude_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::Error &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c)
      return cmd_check(check, depth);
    if (*norm)
      return cmd_mode_normalize(word);
    if (*cell)
      return cmd_mode_cell(src, dst, depth);
    if (*lat)
      return cmd_lattice(lattice);
    if (*run)
      return cmd_corpus(corpus, depth);
    if (*pre)
      return cmd_prelude(prelude_path);
  } catch (const CLI::Error &e) {
    std::cerr << "trikernel: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
