#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>

#include "trikernel/checker.hpp"
#include "trikernel/corpus.hpp"
#include "trikernel/prelude.hpp"

using namespace trikernel;
namespace fs = std::filesystem;

namespace {

const std::string kStdlib = corpus::default_stdlib_dir();

corpus::Manifest shipped() {
  return corpus::parse_manifest(prelude::read_file(kStdlib + "/MANIFEST"));
}

corpus::Options options(const std::string &stdlib = kStdlib) {
  corpus::Options o;
  o.stdlib_dir = stdlib;
  o.prelude_path = prelude::default_path();
  return o;
}

// A scratch copy of the corpus that a test may edit.
struct ScratchCorpus {
  fs::path dir;
  explicit ScratchCorpus(const std::string &tag) {
    dir = fs::temp_directory_path() / ("trikernel-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::copy(kStdlib, dir, fs::copy_options::recursive);
  }
  ~ScratchCorpus() { fs::remove_all(dir); }
  void write(const std::string &file, const std::string &text) const {
    std::ofstream(dir / file, std::ios::binary) << text;
  }
  std::string read(const std::string &file) const { return prelude::read_file((dir / file).string()); }
};

} // namespace

TEST_CASE("the shipped corpus passes") {
  auto m = shipped();
  CHECK(m.version == 1);
  auto r = corpus::run(m, options());
  CHECK_MESSAGE(r.ok(), corpus::format_report(r));
  std::size_t negatives = std::count_if(m.entries.begin(), m.entries.end(),
                                        [](const corpus::ManifestEntry &e) { return e.expect.has_value(); });
  CHECK(negatives >= 6);
  CHECK(m.entries.size() - negatives >= 10);
  CHECK(r.dead_entries.empty());
  CHECK(r.missing_anchors.empty());
}

TEST_CASE("the corpus runs well inside its time budget") {
  auto r = corpus::run(shipped(), options());
  CHECK(r.total_ms < 5000);
}

TEST_CASE("negative files hit their designated code and span") {
  const std::pair<const char *, Code> expected[] = {
      {"neg/escape-s.ttt", Code::Modality},    {"neg/escape-g.ttt", Code::Modality},
      {"neg/wrong-boundary.ttt", Code::CellBoundary}, {"neg/universe.ttt", Code::Universe},
      {"neg/int-bool.ttt", Code::Conv},        {"neg/unbound.ttt", Code::Unbound},
      {"neg/parse.ttt", Code::Parse}};
  auto m = shipped();
  auto r = corpus::run(m, options());
  for (auto [file, code] : expected) {
    auto it = std::find_if(r.files.begin(), r.files.end(),
                           [&](const corpus::FileResult &f) { return f.file == file; });
    REQUIRE_MESSAGE(it != r.files.end(), file);
    CHECK_MESSAGE(it->ok, file, " ", it->detail);
    REQUIRE(it->diagnostics.size() == 1);
    CHECK(it->diagnostics[0].code == code);
  }
}

TEST_CASE("every positive file is independently re-checkable") {
  // Each file with only its declared dependencies, one manifest at a time.
  auto m = shipped();
  for (const corpus::ManifestEntry &e : m.entries) {
    corpus::Manifest single;
    single.version = 1;
    std::set<std::string> need(e.deps.begin(), e.deps.end());
    bool grew = true;
    while (grew) {
      grew = false;
      for (const corpus::ManifestEntry &d : m.entries)
        if (need.count(d.file))
          for (const std::string &dd : d.deps)
            grew |= need.insert(dd).second;
    }
    for (const corpus::ManifestEntry &d : m.entries)
      if (need.count(d.file) || d.file == e.file)
        single.entries.push_back(d);
    auto o = options();
    o.whole_corpus_checks = false;
    auto r = corpus::run(single, o);
    CHECK_MESSAGE(r.ok(), corpus::format_report(r));
  }
}

TEST_CASE("a missing dependency declaration is caught") {
  // segal.ttt uses Horn21 from simplices.ttt.
  auto m = shipped();
  for (auto &e : m.entries)
    if (e.file == "segal.ttt")
      e.deps = {"hom.ttt"};
  corpus::Manifest single;
  single.version = 1;
  for (auto &e : m.entries)
    if (e.file == "hom.ttt" || e.file == "segal.ttt")
      single.entries.push_back(e);
  auto o = options();
  o.whole_corpus_checks = false;
  auto r = corpus::run(single, o);
  CHECK(!r.ok());
}

TEST_CASE("flipping a connective in Delta2 changes a downstream conversion") {
  ScratchCorpus scratch("mutate");
  const std::string original = scratch.read("simplices.ttt");
  const std::regex def_line(R"(def Delta2 : U 0 := [^\n]*)");
  std::smatch match;
  REQUIRE(std::regex_search(original, match, def_line));
  const std::string line = match.str();
  // Every meet or join in the definition, one at a time.
  std::vector<std::size_t> sites;
  for (std::size_t at = line.find_first_of("/\\"); at != std::string::npos;
       at = line.find_first_of("/\\", at + 2))
    sites.push_back(at);
  REQUIRE(!sites.empty());
  auto m = shipped();
  corpus::Manifest only;
  only.version = 1;
  for (auto &e : m.entries)
    if (e.file == "simplices.ttt")
      only.entries.push_back(e);
  auto o = options(scratch.dir.string());
  o.whole_corpus_checks = false;
  for (std::size_t at : sites) {
    std::string flipped = line;
    flipped.replace(at, 2, line.compare(at, 2, "/\\") == 0 ? "\\/" : "/\\");
    std::string mutated = original;
    mutated.replace(match.position(), line.size(), flipped);
    scratch.write("simplices.ttt", mutated);
    auto r = corpus::run(only, o);
    REQUIRE(r.files.size() == 1);
    CHECK_MESSAGE(!r.files[0].ok, flipped);
    bool conv = std::any_of(r.files[0].diagnostics.begin(), r.files[0].diagnostics.end(),
                            [](const Diagnostic &d) { return d.code == Code::Conv; });
    CHECK(conv);
  }
}

TEST_CASE("anchor coverage is machine-checked") {
  auto m = shipped();
  for (auto &e : m.entries)
    if (e.file == "subcat.ttt")
      e.anchors.erase(std::remove(e.anchors.begin(), e.anchors.end(), "def:finset"), e.anchors.end());
  auto r = corpus::run(m, options());
  CHECK(r.missing_anchors == std::vector<std::string>{"def:finset"});
  CHECK(!r.ok());
}

TEST_CASE("the dead-entry lint fires when the corpus stops using an entry") {
  ScratchCorpus scratch("dead");
  std::string hom = scratch.read("hom.ttt");
  // Drop the only use of path_of_p and p_of_path.
  std::size_t at = hom.find("-- A path out of the interval is a p-modal point");
  REQUIRE(at != std::string::npos);
  scratch.write("hom.ttt", hom.substr(0, at));
  auto r = corpus::run(shipped(), options(scratch.dir.string()));
  CHECK(std::find(r.dead_entries.begin(), r.dead_entries.end(), "p_of_path") != r.dead_entries.end());
  CHECK(!r.ok());
}

TEST_CASE("empty manifest gives an empty passing report") {
  auto m = corpus::parse_manifest("version 1\n");
  auto o = options();
  o.whole_corpus_checks = false;
  auto r = corpus::run(m, o);
  CHECK(r.files.empty());
  CHECK(r.ok());
}

TEST_CASE("manifest parsing") {
  auto m = corpus::parse_manifest("# c\nversion 1\na.ttt | def:x def:y | pass | -\n"
                                  "b.ttt | - | E-CONV | a.ttt\n");
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].anchors == std::vector<std::string>{"def:x", "def:y"});
  CHECK(!m.entries[0].expect);
  CHECK(m.entries[1].expect == Code::Conv);
  CHECK(m.entries[1].deps == std::vector<std::string>{"a.ttt"});
  CHECK(m.entries[1].line == 4);
  CHECK_THROWS_AS(corpus::parse_manifest("a.ttt | - | pass | -\n"), std::runtime_error);
  CHECK_THROWS_AS(corpus::parse_manifest("version 1\na.ttt | - | pass\n"), std::runtime_error);
  CHECK_THROWS_AS(corpus::parse_manifest("version 1\na.ttt | - | E-NOPE | -\n"), std::runtime_error);
  // Dependencies must come first, which also rules out cycles.
  CHECK_THROWS_AS(corpus::parse_manifest("version 1\na.ttt | - | pass | b.ttt\nb.ttt | - | pass | a.ttt\n"),
                  std::runtime_error);
  CHECK_THROWS_AS(corpus::parse_manifest("version 1\na.ttt | - | pass | -\na.ttt | - | pass | -\n"),
                  std::runtime_error);
}

TEST_CASE("markers and judging") {
  const std::string src = "def x : Int :=\n  true\n--^ E-CONV\n";
  auto marks = corpus::find_markers(src);
  REQUIRE(marks.size() == 1);
  CHECK(marks[0].line == 2);
  CHECK(marks[0].col == 3);
  CHECK(marks[0].code == Code::Conv);

  corpus::ManifestEntry neg{"n.ttt", {}, Code::Conv, {}, 1};
  Diagnostic at;
  at.code = Code::Conv;
  at.line = 2;
  at.col = 3;
  CHECK(corpus::judge(neg, src, {at}).ok);
  Diagnostic off = at;
  off.col = 4;
  CHECK(!corpus::judge(neg, src, {off}).ok);
  Diagnostic wrong = at;
  wrong.code = Code::Universe;
  CHECK(!corpus::judge(neg, src, {wrong}).ok);
  CHECK(!corpus::judge(neg, src, {at, at}).ok);
  CHECK(!corpus::judge(neg, src, {}).ok);
  CHECK(!corpus::judge(neg, "def x : Int := true\n", {at}).ok);

  corpus::ManifestEntry pos{"p.ttt", {}, std::nullopt, {}, 1};
  CHECK(corpus::judge(pos, "", {}).ok);
  CHECK(!corpus::judge(pos, "", {at}).ok);
}

TEST_CASE("checking is deterministic") {
  Checker a, b;
  const std::string &pre = prelude::read_file(prelude::default_path());
  auto da = a.check_source("p", pre);
  auto db = b.check_source("p", pre);
  CHECK(da.size() == db.size());
  std::string neg = prelude::read_file(kStdlib + "/neg/escape-s.ttt");
  auto x = a.check_source("n", neg), y = b.check_source("n", neg);
  REQUIRE(x.size() == 1);
  REQUIRE(y.size() == 1);
  CHECK(format_json(x[0]) == format_json(y[0]));
}

TEST_CASE("the printed form of hom is stable") {
  Checker c;
  REQUIRE(c.check_source("p", prelude::read_file(prelude::default_path())).empty());
  REQUIRE(c.check_source("hom.ttt", prelude::read_file(kStdlib + "/hom.ttt")).empty());
  auto id = c.globals().find("hom");
  REQUIRE(id);
  const core::Global &g = c.globals().at(*id);
  core::Context ctx;
  CHECK(c.kernel().show(ctx, g.type) == "(A : U 0) -> A -> A -> U 0");
  CHECK(c.kernel().show(ctx, g.value) ==
        "fun A => fun a => fun b => (f : Int -> A) * ((f 0) = a) * (f 1) = b");
}
