#include <doctest.h>

#include <random>

#include "trikernel/lexer.hpp"
#include "trikernel/syntax.hpp"

using namespace trikernel;
using namespace trikernel::syntax;

namespace {

Module parse_ok(std::string_view text) {
  auto r = parse_module(text);
  if (!r.errors.empty())
    FAIL("unexpected parse error: " << r.errors.front().what() << " at "
                                    << r.errors.front().span.begin);
  REQUIRE(r.module);
  return *r.module;
}

ExprPtr expr_ok(std::string_view text) {
  ExprPtr e;
  auto r = parse_expr_only(text, e);
  if (!r.errors.empty())
    FAIL("unexpected parse error in `" << text << "`: " << r.errors.front().what());
  return e;
}

// Random ASTs over the full grammar. Only shapes the printer can express are
// produced: a moded λ binder always has a domain, interval names match p count.
class Gen {
public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  ExprPtr expr(int depth) {
    auto e = std::make_shared<Expr>();
    const int leaves = 9;
    int k = depth <= 0 ? pick(leaves) : pick(leaves + 27);
    switch (k) {
    case 0: e->kind = Kind::Var; e->name = name(); break;
    case 1: e->kind = Kind::Num; e->num = pick(3); break;
    case 2: e->kind = Kind::Univ; e->num = pick(3); break;
    case 3: e->kind = Kind::Int; break;
    case 4: e->kind = Kind::Refl; break;
    case 5: e->kind = Kind::Nat; break;
    case 6: e->kind = pick(2) ? Kind::True : Kind::False; break;
    case 7: e->kind = pick(2) ? Kind::Unit : Kind::Tt; break;
    case 8: e->kind = pick(2) ? Kind::Empty : Kind::Bool; break;
    case 9:
      e->kind = Kind::Pi;
      e->name = pick(2) ? "_" : name();
      e->mod = word();
      e->kids = {expr(depth - 1), expr(depth - 1)};
      break;
    case 10:
      e->kind = Kind::Lam;
      e->name = name();
      if (pick(2)) {
        e->kids = {expr(depth - 1), expr(depth - 1)};
        e->has_mod = pick(2);
        if (e->has_mod)
          e->mod = word();
      } else {
        e->kids = {nullptr, expr(depth - 1)};
      }
      break;
    case 11: binary(*e, Kind::App, depth); break;
    case 12:
      e->kind = Kind::Sigma;
      e->name = pick(2) ? "_" : name();
      e->kids = {expr(depth - 1), expr(depth - 1)};
      break;
    case 13: binary(*e, Kind::Pair, depth); break;
    case 14: unary(*e, pick(2) ? Kind::Fst : Kind::Snd, depth); break;
    case 15: binary(*e, Kind::Id, depth); break;
    case 16: nary(*e, Kind::J, 3, depth); break;
    case 17:
    case 18: {
      e->kind = k == 17 ? Kind::ModType : Kind::ModIntro;
      e->mod = word();
      std::size_t ps = modality::count_p(e->mod);
      if (ps > 0 && pick(2))
        for (std::size_t i = 0; i < ps; ++i)
          e->inames.push_back("i" + std::to_string(i));
      e->kids = {expr(depth - 1)};
      break;
    }
    case 19:
      e->kind = Kind::LetMod;
      e->mod = word();
      e->mod2 = word();
      e->name = name();
      if (pick(2)) {
        e->name2 = name();
        e->kids = {expr(depth - 1), expr(depth - 1), expr(depth - 1)};
      } else {
        e->kids = {expr(depth - 1), nullptr, expr(depth - 1)};
      }
      break;
    case 20:
    case 21:
      e->kind = k == 20 ? Kind::CellAct : Kind::Coe;
      e->steps = steps();
      e->kids = {expr(depth - 1)};
      break;
    case 22: binary(*e, Kind::Inst, depth); break;
    case 23: binary(*e, pick(2) ? Kind::Meet : Kind::Join, depth); break;
    case 24: binary(*e, Kind::Le, depth); break;
    case 25: unary(*e, Kind::Suc, depth); break;
    case 26: nary(*e, pick(2) ? Kind::NatRec : Kind::BoolRec, 4, depth); break;
    case 27: nary(*e, Kind::Absurd, 2, depth); break;
    case 28: unary(*e, Kind::Lift, depth); break;
    case 29: unary(*e, Kind::LiftIn, depth); break;
    case 30: unary(*e, Kind::Lower, depth); break;
    case 31:
      e->kind = Kind::Let;
      e->name = name();
      e->kids = {pick(2) ? expr(depth - 1) : nullptr, expr(depth - 1), expr(depth - 1)};
      break;
    case 32: binary(*e, Kind::Ann, depth); break;
    default: binary(*e, Kind::App, depth); break;
    }
    return e;
  }

private:
  std::mt19937 rng_;

  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng_); }
  std::string name() {
    static const char *names[] = {"x", "y", "f", "A", "i", "x'", "_"};
    return names[pick(7)];
  }
  modality::Word word() {
    static const char *words[] = {"1", "g", "s", "o", "p", "a", "a.p", "p.a", "g.p.a"};
    return modality::normalize(*modality::parse_word(words[pick(9)]));
  }
  std::vector<modality::Step> steps() {
    static const char *cells[] = {"id", "eps0", "g * eta_gs", "eta_pa * g ; eps_gs",
                                  "a * eps_pa * p"};
    return *modality::parse_steps(cells[pick(5)]);
  }
  void unary(Expr &e, Kind k, int depth) {
    e.kind = k;
    e.kids = {expr(depth - 1)};
  }
  void binary(Expr &e, Kind k, int depth) {
    e.kind = k;
    e.kids = {expr(depth - 1), expr(depth - 1)};
  }
  void nary(Expr &e, Kind k, int n, int depth) {
    e.kind = k;
    for (int i = 0; i < n; ++i)
      e.kids.push_back(expr(depth - 1));
  }
};

} // namespace

TEST_CASE("lexer folds unicode aliases") {
  auto r = lex("\xCE\xBB x \xE2\x87\x92 \xE2\x9F\xA8p| x\xE2\x9F\xA9 \xC2\xB7 i");
  std::vector<std::string> texts;
  for (auto &t : r.tokens)
    texts.push_back(t.text);
  CHECK(texts == std::vector<std::string>{"fun", "x", "=>", "<", "p", "|", "x", ">", "#", "i", ""});
  CHECK(r.tokens[0].span.end == 2);
}

TEST_CASE("lexer reports stray characters and open comments") {
  CHECK_THROWS_AS(lex("def x ! y"), Error);
  CHECK_THROWS_AS(lex("{- open"), Error);
  CHECK_THROWS_AS(lex("12ab"), Error);
  CHECK(lex("{- a {- nested -} b -} x").tokens.size() == 2);
}

TEST_CASE("minimal definition") {
  Module m = parse_ok("def idfun : (A : U 0) -> A -> A := fun A a => a");
  REQUIRE(m.decls.size() == 1);
  const Decl &d = m.decls[0];
  CHECK(d.kind == Decl::Kind::Def);
  CHECK(d.name == "idfun");
  CHECK(d.type->kind == Kind::Pi);
  CHECK(d.type->name == "A");
  CHECK(d.type->kids[1]->kind == Kind::Pi);
  CHECK(d.type->kids[1]->name == "_");
  CHECK(d.body->kind == Kind::Lam);
  CHECK(d.body->kids[1]->kind == Kind::Lam);
}

TEST_CASE("error position is the second colon") {
  auto r = parse_module("def bad : := x");
  REQUIRE(r.errors.size() == 1);
  CHECK_FALSE(r.module);
  CHECK(r.errors[0].code == Code::Parse);
  CHECK(r.errors[0].span.begin == 10);
}

TEST_CASE("spans are byte offsets") {
  ExprPtr e = expr_ok("f (g x) y");
  CHECK(e->span.begin == 0);
  CHECK(e->span.end == 9);
  CHECK(e->kids[0]->kids[1]->span.begin == 2);
  CHECK(e->kids[0]->kids[1]->span.end == 7);
  CHECK(e->kids[1]->span.begin == 8);
}

TEST_CASE("modal forms") {
  CHECK(print(*expr_ok("<p| Int>")) == "<p| Int>");
  ExprPtr m = expr_ok("<p ; i| A # i>");
  CHECK(m->inames == std::vector<std::string>{"i"});
  CHECK(m->kids[0]->kind == Kind::Inst);
  ExprPtr l = expr_ok("let{g} mod{s}(x) = e return z. B z in mod{g}(x)");
  CHECK(l->kind == Kind::LetMod);
  CHECK(modality::to_string(l->mod2) == "g");
  CHECK(modality::to_string(l->mod) == "s");
  CHECK(l->name2 == "z");
  ExprPtr c = expr_ok("x ^{g * eta_gs ; eps0}");
  CHECK(c->kind == Kind::CellAct);
  CHECK(c->steps.size() == 2);
  // Words are normalized at parse time.
  CHECK(modality::to_string(expr_ok("mod{g.a}(x)")->mod) == "g");
  ExprPtr pi = expr_ok("(x y : A @ s) -> B");
  CHECK(pi->kind == Kind::Pi);
  CHECK(pi->kids[1]->kind == Kind::Pi);
  CHECK(modality::to_string(pi->kids[1]->mod) == "s");
}

TEST_CASE("modality annotations are validated") {
  ExprPtr e;
  CHECK_FALSE(parse_expr_only("mod{q}(x)", e).errors.empty());
  CHECK_FALSE(parse_expr_only("<p ; i, j| A>", e).errors.empty());
  CHECK_FALSE(parse_expr_only("x ^{eta_xx}", e).errors.empty());
}

TEST_CASE("precedence") {
  ExprPtr e = expr_ok("A * B -> C");
  CHECK(e->kind == Kind::Pi);
  CHECK(e->kids[0]->kind == Kind::Sigma);
  e = expr_ok("i /\\ j \\/ k = 1");
  CHECK(e->kind == Kind::Id);
  CHECK(e->kids[0]->kind == Kind::Join);
  CHECK(e->kids[0]->kids[0]->kind == Kind::Meet);
  e = expr_ok("f x # i /\\ j");
  CHECK(e->kind == Kind::Meet);
  CHECK(e->kids[0]->kind == Kind::Inst);
  e = expr_ok("p.1.2");
  CHECK(e->kind == Kind::Snd);
  CHECK(e->kids[0]->kind == Kind::Fst);
  e = expr_ok("(x : A) * B x");
  CHECK(e->kind == Kind::Sigma);
  CHECK(e->name == "x");
  e = expr_ok("((x) : A)");
  CHECK(e->kind == Kind::Ann);
}

TEST_CASE("declaration forms and pragmas") {
  Module m = parse_ok(R"(
--@ tier=paper-axiom anchor=ax:int
axiom int_ax (i : Int @ g) : Int
check tt : Unit
check (0, 1) == (0, 1) : Int * Int
-- a comment
fail-check E-UNIVERSE U 0 : U 0
)");
  REQUIRE(m.decls.size() == 4);
  CHECK(m.decls[0].attrs.at("tier") == "paper-axiom");
  CHECK(m.decls[0].attrs.at("anchor") == "ax:int");
  CHECK(modality::to_string(m.decls[0].params[0].mod) == "g");
  CHECK(m.decls[1].attrs.empty());
  CHECK(m.decls[2].rhs);
  CHECK(m.decls[3].expect == Code::Universe);
  auto bad = parse_module("fail-check E-NOPE tt : Unit");
  CHECK_FALSE(bad.errors.empty());
}

TEST_CASE("print roundtrips on examples") {
  const char *samples[] = {
      "fun A a => a",
      "let{g} mod{s}(x) = let mod{p}(y) = z in y in mod{s}(x)",
      "fun (x : A @ s) => mod{s}(x ^{eta_gs})",
      "J(fun x y q => U 0, refl, p)",
      "(i : Int) * (j : Int) * (j /\\ i = j)",
      "natrec(fun n => Nat, 0, fun n r => suc r, suc (suc 0))",
      "coe{eps0}(lift (lower x))",
      "let x : Nat := 1 in x",
  };
  for (const char *s : samples) {
    ExprPtr e = expr_ok(s);
    std::string printed = print(*e);
    CAPTURE(printed);
    CHECK(same(expr_ok(printed), e));
  }
}

TEST_CASE("property: parse(print(t)) = t for generated ASTs") {
  Gen gen(20241016);
  for (int n = 0; n < 3000; ++n) {
    ExprPtr t = gen.expr(n % 9);
    std::string text = print(*t);
    ExprPtr back;
    auto r = parse_expr_only(text, back);
    CAPTURE(text);
    REQUIRE(r.errors.empty());
    REQUIRE(same(back, t));
  }
}

TEST_CASE("property: module print roundtrips") {
  Gen gen(7);
  Module m;
  for (int n = 0; n < 40; ++n) {
    Decl d;
    d.kind = static_cast<Decl::Kind>(n % 4);
    d.name = "d" + std::to_string(n);
    d.type = gen.expr(3);
    if (d.kind == Decl::Kind::Def)
      d.body = gen.expr(4);
    if (d.kind == Decl::Kind::Def || d.kind == Decl::Kind::Axiom)
      d.params.push_back(Param{"x", gen.expr(2), *modality::parse_word("p"), {}});
    if (d.kind == Decl::Kind::Check || d.kind == Decl::Kind::FailCheck) {
      d.lhs = gen.expr(3);
      if (n % 3 == 0)
        d.rhs = gen.expr(3);
    }
    if (d.kind == Decl::Kind::FailCheck)
      d.expect = Code::Conv;
    if (n % 5 == 0)
      d.attrs["tier"] = "derived";
    m.decls.push_back(d);
  }
  std::string text = print(m);
  Module back = parse_ok(text);
  REQUIRE(back.decls.size() == m.decls.size());
  for (std::size_t i = 0; i < m.decls.size(); ++i) {
    const Decl &a = m.decls[i], &b = back.decls[i];
    CHECK(a.kind == b.kind);
    if (a.kind == Decl::Kind::Def || a.kind == Decl::Kind::Axiom)
      CHECK(a.name == b.name);
    CHECK(a.attrs == b.attrs);
    CHECK(same(a.type, b.type));
    CHECK(same(a.body, b.body));
    CHECK(same(a.lhs, b.lhs));
    CHECK(same(a.rhs, b.rhs));
    CHECK(a.params.size() == b.params.size());
  }
}

TEST_CASE("property: parsing is total") {
  // Mutations of valid text plus random byte strings never escape as
  // anything but E-PARSE diagnostics.
  Gen gen(99);
  std::mt19937 rng(5);
  const std::string alphabet = "()<>{}|:=.,;@^#*-/\\ \nxyfgspoa01U\xCE\xBB\xE2";
  for (int n = 0; n < 4000; ++n) {
    std::string text = n % 2 ? print(*gen.expr(4)) : std::string();
    std::size_t edits = 1 + rng() % 6;
    for (std::size_t k = 0; k < edits; ++k) {
      std::size_t pos = text.empty() ? 0 : rng() % (text.size() + 1);
      switch (rng() % 3) {
      case 0: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
      case 1: if (pos < text.size()) text.erase(pos, 1); break;
      default: if (pos < text.size()) text[pos] = alphabet[rng() % alphabet.size()]; break;
      }
    }
    ParseResult r;
    ExprPtr e;
    CHECK_NOTHROW(r = parse_module("check " + text + " : U 0"));
    CHECK(r.module.has_value() != !r.errors.empty());
    for (const Error &err : r.errors) {
      CHECK(err.code == Code::Parse);
      CHECK(err.span.begin <= text.size() + 12);
    }
    CHECK_NOTHROW(parse_expr_only(text, e));
  }
}
