#include <algorithm>
#include <array>
#include <cctype>

#include "trikernel/lexer.hpp"
#include "trikernel/syntax.hpp"

namespace trikernel::syntax {

namespace {

constexpr std::array<std::string_view, 28> kKeywords{
    "def",  "axiom",  "check",   "fail-check", "fun",   "let",   "in",
    "mod",  "coe",    "refl",    "J",          "U",     "Int",   "Nat",
    "Bool", "Unit",   "Empty",   "true",       "false", "tt",    "suc",
    "natrec", "boolrec", "absurd", "Lift",     "lift",  "lower", "return"};

std::shared_ptr<Expr> node(Kind k, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = s;
  return e;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

class Parser {
public:
  Parser(std::string_view src, LexResult lexed)
      : src_(src), toks_(std::move(lexed.tokens)), pragmas_(std::move(lexed.pragmas)) {}

  Module module() {
    Module m;
    std::size_t prev_end = 0;
    while (!at_end()) {
      Decl d = decl();
      for (const Pragma &p : pragmas_)
        if (p.span.begin >= prev_end && p.span.end <= d.span.begin)
          add_attrs(d, p.text);
      prev_end = d.span.end;
      m.decls.push_back(std::move(d));
    }
    return m;
  }

  ExprPtr single_expr() {
    ExprPtr e = expr();
    if (!at_end())
      fail("unexpected token '" + peek().text + "'");
    return e;
  }

private:
  std::string_view src_;
  std::vector<Token> toks_;
  std::vector<Pragma> pragmas_;
  std::size_t pos_ = 0;

  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  std::size_t last_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }

  [[noreturn]] void fail(const std::string &msg) const {
    throw Error(Code::Parse, msg, peek().span);
  }

  bool is_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Symbol && peek(k).text == s;
  }
  bool is_kw(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  bool eat_sym(std::string_view s) {
    if (!is_sym(s))
      return false;
    ++pos_;
    return true;
  }
  bool eat_kw(std::string_view s) {
    if (!is_kw(s))
      return false;
    ++pos_;
    return true;
  }
  const Token &expect_sym(std::string_view s) {
    if (!is_sym(s))
      fail("expected '" + std::string(s) + "'" + found());
    return toks_[pos_++];
  }
  void expect_kw(std::string_view s) {
    if (!is_kw(s))
      fail("expected '" + std::string(s) + "'" + found());
    ++pos_;
  }
  std::string found() const {
    return at_end() ? " but reached end of input" : " but found '" + peek().text + "'";
  }
  bool is_name(std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && !is_keyword(peek(k).text);
  }
  std::string name() {
    if (!is_name())
      fail("expected a name" + found());
    return toks_[pos_++].text;
  }

  void add_attrs(Decl &d, std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
      std::string_view item = text.substr(start, i - start);
      if (item.empty())
        continue;
      auto eq = item.find('=');
      if (eq == std::string_view::npos)
        d.attrs[std::string(item)] = "";
      else
        d.attrs[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    }
  }

  // Raw source between the current `open` token and its matching `close`.
  std::pair<std::string_view, Span> raw_until(std::string_view close) {
    std::size_t start = last_end();
    while (!at_end() && !is_sym(close)) {
      if (is_sym("{") || is_sym("(") || is_sym("<"))
        fail("unexpected '" + peek().text + "' in modality annotation");
      ++pos_;
    }
    if (!is_sym(close))
      fail("expected '" + std::string(close) + "'" + found());
    std::size_t end = peek().span.begin;
    ++pos_;
    return {src_.substr(start, end - start), Span{start, end}};
  }

  modality::Word word_from(std::string_view raw, Span sp) {
    auto w = modality::parse_word(trim(raw));
    if (!w)
      throw Error(Code::Parse, "malformed modality '" + std::string(trim(raw)) + "'", sp);
    return modality::normalize(*w);
  }

  // `w` or `w ; i, j` inside braces or angle brackets.
  std::pair<modality::Word, std::vector<std::string>> word_and_names(std::string_view raw,
                                                                     Span sp) {
    std::vector<std::string> names;
    auto semi = raw.find(';');
    std::string_view wpart = raw.substr(0, semi);
    if (semi != std::string_view::npos) {
      std::string_view rest = raw.substr(semi + 1);
      std::size_t i = 0;
      while (i <= rest.size()) {
        auto comma = rest.find(',', i);
        std::string_view nm =
            trim(rest.substr(i, comma == std::string_view::npos ? std::string_view::npos
                                                                : comma - i));
        if (nm.empty() || is_keyword(nm) || !std::isalpha(static_cast<unsigned char>(nm[0])))
          throw Error(Code::Parse, "malformed interval binder list", sp);
        names.emplace_back(nm);
        if (comma == std::string_view::npos)
          break;
        i = comma + 1;
      }
    }
    modality::Word w = word_from(wpart, sp);
    if (!names.empty() && names.size() != modality::count_p(w))
      throw Error(Code::Parse, "interval binder list must name every p factor", sp);
    return {w, names};
  }

  std::vector<modality::Step> cell_from(std::string_view raw, Span sp) {
    auto steps = modality::parse_steps(trim(raw));
    if (!steps)
      throw Error(Code::Parse, "malformed 2-cell '" + std::string(trim(raw)) + "'", sp);
    return *steps;
  }

  // ---- declarations ----

  std::vector<Param> params() {
    std::vector<Param> ps;
    while (is_sym("(")) {
      std::size_t start = peek().span.begin;
      ++pos_;
      std::vector<std::string> names;
      while (is_name())
        names.push_back(name());
      if (names.empty())
        fail("expected a parameter name" + found());
      expect_sym(":");
      ExprPtr ty = expr();
      modality::Word mu;
      if (eat_sym("@")) {
        auto [raw, sp] = raw_until(")");
        mu = word_from(raw, sp);
      } else {
        expect_sym(")");
      }
      for (auto &n : names)
        ps.push_back(Param{n, ty, mu, Span{start, last_end()}});
    }
    return ps;
  }

  Decl decl() {
    Decl d;
    d.span.begin = peek().span.begin;
    if (eat_kw("def")) {
      d.kind = Decl::Kind::Def;
      d.name_span = peek().span;
      d.name = name();
      d.params = params();
      expect_sym(":");
      d.type = expr();
      expect_sym(":=");
      d.body = expr();
    } else if (eat_kw("axiom")) {
      d.kind = Decl::Kind::Axiom;
      d.name_span = peek().span;
      d.name = name();
      d.params = params();
      expect_sym(":");
      d.type = expr();
    } else if (eat_kw("check")) {
      d.kind = Decl::Kind::Check;
      check_body(d);
    } else if (eat_kw("fail-check")) {
      d.kind = Decl::Kind::FailCheck;
      if (peek().kind != Tok::Code)
        fail("expected an error code" + found());
      auto c = parse_code(peek().text);
      if (!c)
        fail("unknown error code '" + peek().text + "'");
      d.expect = *c;
      ++pos_;
      check_body(d);
    } else {
      fail("expected a declaration" + found());
    }
    d.span.end = last_end();
    return d;
  }

  void check_body(Decl &d) {
    d.lhs = expr();
    if (eat_sym("=="))
      d.rhs = expr();
    expect_sym(":");
    d.type = expr();
  }

  // ---- expressions ----

  ExprPtr expr() {
    std::size_t start = peek().span.begin;
    if (eat_kw("fun"))
      return lambda(start);
    if (eat_kw("let"))
      return let(start);
    return arrow();
  }

  struct BinderGroup {
    std::vector<std::string> names;
    ExprPtr type;
    modality::Word mod;
    bool has_mod = false;
    Span span;
  };

  BinderGroup binder_group() {
    BinderGroup g;
    g.span.begin = peek().span.begin;
    expect_sym("(");
    while (is_name())
      g.names.push_back(name());
    expect_sym(":");
    g.type = expr();
    if (eat_sym("@")) {
      auto [raw, sp] = raw_until(")");
      g.mod = word_from(raw, sp);
      g.has_mod = true;
    } else {
      expect_sym(")");
    }
    g.span.end = last_end();
    return g;
  }

  bool looks_like_binder_group() const {
    if (!is_sym("("))
      return false;
    std::size_t k = 1;
    while (is_name(k))
      ++k;
    return k > 1 && is_sym(":", k);
  }

  ExprPtr lambda(std::size_t start) {
    std::vector<BinderGroup> groups;
    while (!is_sym("=>")) {
      if (is_name()) {
        BinderGroup g;
        g.span = peek().span;
        g.names.push_back(name());
        groups.push_back(g);
      } else if (looks_like_binder_group()) {
        groups.push_back(binder_group());
      } else {
        fail("expected a binder or '=>'" + found());
      }
    }
    if (groups.empty())
      fail("expected a binder");
    expect_sym("=>");
    ExprPtr body = expr();
    Span whole{start, last_end()};
    for (auto g = groups.rbegin(); g != groups.rend(); ++g)
      for (auto n = g->names.rbegin(); n != g->names.rend(); ++n) {
        auto e = node(Kind::Lam, whole);
        e->name = *n;
        e->mod = g->mod;
        e->has_mod = g->has_mod;
        e->kids = {g->type, body};
        body = e;
      }
    return body;
  }

  ExprPtr let(std::size_t start) {
    modality::Word outer;
    bool has_outer = false;
    if (is_sym("{")) {
      ++pos_;
      auto [raw, sp] = raw_until("}");
      outer = word_from(raw, sp);
      has_outer = true;
    }
    if (eat_kw("mod")) {
      expect_sym("{");
      auto [raw, sp] = raw_until("}");
      modality::Word mu = word_from(raw, sp);
      expect_sym("(");
      std::string x = name();
      expect_sym(")");
      expect_sym("=");
      ExprPtr scrut = expr();
      std::string z;
      ExprPtr motive;
      if (eat_kw("return")) {
        z = name();
        expect_sym(".");
        motive = expr();
      }
      expect_kw("in");
      ExprPtr body = expr();
      auto e = node(Kind::LetMod, Span{start, last_end()});
      e->mod = mu;
      e->mod2 = outer;
      e->name = x;
      e->name2 = z;
      e->kids = {scrut, motive, body};
      return e;
    }
    if (has_outer)
      fail("expected 'mod' after a let modality");
    std::string x = name();
    ExprPtr ty;
    if (eat_sym(":"))
      ty = expr();
    expect_sym(":=");
    ExprPtr val = expr();
    expect_kw("in");
    ExprPtr body = expr();
    auto e = node(Kind::Let, Span{start, last_end()});
    e->name = x;
    e->kids = {ty, val, body};
    return e;
  }

  ExprPtr arrow() {
    std::size_t start = peek().span.begin;
    if (looks_like_binder_group()) {
      std::size_t save = pos_;
      BinderGroup g = binder_group();
      bool pi = is_sym("->");
      bool sigma = is_sym("*");
      if ((pi || sigma) && !(sigma && g.has_mod)) {
        ++pos_;
        ExprPtr body = expr();
        Span whole{start, last_end()};
        for (auto n = g.names.rbegin(); n != g.names.rend(); ++n) {
          auto e = node(pi ? Kind::Pi : Kind::Sigma, whole);
          e->name = *n;
          e->mod = g.mod;
          e->kids = {g.type, body};
          body = e;
        }
        return body;
      }
      pos_ = save;
    }
    ExprPtr lhs = prod();
    if (eat_sym("->")) {
      ExprPtr rhs = expr();
      auto e = node(Kind::Pi, Span{start, last_end()});
      e->name = "_";
      e->kids = {lhs, rhs};
      return e;
    }
    return lhs;
  }

  ExprPtr prod() {
    std::size_t start = peek().span.begin;
    ExprPtr lhs = eqn();
    if (is_sym("*")) {
      ++pos_;
      ExprPtr rhs = looks_like_binder_group() ? arrow_only_sigma() : prod();
      auto e = node(Kind::Sigma, Span{start, last_end()});
      e->name = "_";
      e->kids = {lhs, rhs};
      return e;
    }
    return lhs;
  }

  // A dependent sigma to the right of a non-dependent product.
  ExprPtr arrow_only_sigma() {
    std::size_t save = pos_;
    std::size_t start = peek().span.begin;
    BinderGroup g = binder_group();
    if (!is_sym("*") || g.has_mod) {
      pos_ = save;
      return prod();
    }
    ++pos_;
    ExprPtr body = expr();
    Span whole{start, last_end()};
    for (auto n = g.names.rbegin(); n != g.names.rend(); ++n) {
      auto e = node(Kind::Sigma, whole);
      e->name = *n;
      e->kids = {g.type, body};
      body = e;
    }
    return body;
  }

  ExprPtr eqn() {
    std::size_t start = peek().span.begin;
    ExprPtr lhs = join();
    if (is_sym("=") || is_sym("<=")) {
      Kind k = is_sym("=") ? Kind::Id : Kind::Le;
      ++pos_;
      ExprPtr rhs = join();
      auto e = node(k, Span{start, last_end()});
      e->kids = {lhs, rhs};
      return e;
    }
    return lhs;
  }

  ExprPtr join() {
    std::size_t start = peek().span.begin;
    ExprPtr e = meet();
    while (eat_sym("\\/")) {
      ExprPtr r = meet();
      auto n = node(Kind::Join, Span{start, last_end()});
      n->kids = {e, r};
      e = n;
    }
    return e;
  }

  ExprPtr meet() {
    std::size_t start = peek().span.begin;
    ExprPtr e = inst();
    while (eat_sym("/\\")) {
      ExprPtr r = inst();
      auto n = node(Kind::Meet, Span{start, last_end()});
      n->kids = {e, r};
      e = n;
    }
    return e;
  }

  ExprPtr inst() {
    std::size_t start = peek().span.begin;
    ExprPtr e = app();
    while (eat_sym("#")) {
      ExprPtr r = app();
      auto n = node(Kind::Inst, Span{start, last_end()});
      n->kids = {e, r};
      e = n;
    }
    return e;
  }

  bool starts_atom() const {
    const Token &t = peek();
    if (t.kind == Tok::Number)
      return true;
    if (t.kind == Tok::Ident) {
      if (!is_keyword(t.text))
        return true;
      static constexpr std::array<std::string_view, 17> atomic{
          "mod",  "coe",   "refl", "J",     "U",      "Int",     "Nat",    "Bool",  "Unit",
          "Empty", "true", "false", "tt",   "natrec", "boolrec", "absurd", "suc"};
      if (std::find(atomic.begin(), atomic.end(), t.text) != atomic.end())
        return true;
      return t.text == "Lift" || t.text == "lift" || t.text == "lower";
    }
    return t.kind == Tok::Symbol && (t.text == "(" || t.text == "<");
  }

  ExprPtr app() {
    std::size_t start = peek().span.begin;
    ExprPtr f = prefix();
    while (starts_atom()) {
      ExprPtr a = prefix_arg();
      auto n = node(Kind::App, Span{start, last_end()});
      n->kids = {f, a};
      f = n;
    }
    return f;
  }

  // Arguments of an application cannot be prefix forms without parentheses.
  ExprPtr prefix_arg() {
    if (is_kw("suc") || is_kw("Lift") || is_kw("lift") || is_kw("lower"))
      fail("parenthesize '" + peek().text + "' in argument position");
    return postfix();
  }

  ExprPtr prefix() {
    std::size_t start = peek().span.begin;
    const std::pair<std::string_view, Kind> forms[] = {
        {"suc", Kind::Suc}, {"Lift", Kind::Lift}, {"lift", Kind::LiftIn}, {"lower", Kind::Lower}};
    for (auto [kw, k] : forms)
      if (eat_kw(kw)) {
        ExprPtr a = prefix_arg();
        auto n = node(k, Span{start, last_end()});
        n->kids = {a};
        return n;
      }
    return postfix();
  }

  ExprPtr postfix() {
    std::size_t start = peek().span.begin;
    ExprPtr e = atom();
    for (;;) {
      if (is_sym(".") && peek(1).kind == Tok::Number &&
          peek(1).span.begin == peek().span.end &&
          (peek(1).text == "1" || peek(1).text == "2")) {
        Kind k = peek(1).text == "1" ? Kind::Fst : Kind::Snd;
        pos_ += 2;
        auto n = node(k, Span{start, last_end()});
        n->kids = {e};
        e = n;
      } else if (is_sym("^")) {
        ++pos_;
        expect_sym("{");
        auto [raw, sp] = raw_until("}");
        auto n = node(Kind::CellAct, Span{start, last_end()});
        n->steps = cell_from(raw, sp);
        n->kids = {e};
        e = n;
      } else {
        return e;
      }
    }
  }

  std::vector<ExprPtr> args(std::size_t count) {
    expect_sym("(");
    std::vector<ExprPtr> out;
    for (std::size_t i = 0; i < count; ++i) {
      if (i)
        expect_sym(",");
      out.push_back(expr());
    }
    expect_sym(")");
    return out;
  }

  ExprPtr atom() {
    const Token t = peek();
    std::size_t start = t.span.begin;
    auto simple = [&](Kind k) {
      ++pos_;
      return node(k, t.span);
    };
    if (t.kind == Tok::Number) {
      ++pos_;
      auto e = node(Kind::Num, t.span);
      if (t.text.size() > 18)
        throw Error(Code::Parse, "numeral too large", t.span);
      e->num = std::stoull(t.text);
      return e;
    }
    if (t.kind == Tok::Ident) {
      if (!is_keyword(t.text)) {
        ++pos_;
        auto e = node(Kind::Var, t.span);
        e->name = t.text;
        return e;
      }
      if (t.text == "refl") return simple(Kind::Refl);
      if (t.text == "Int") return simple(Kind::Int);
      if (t.text == "Nat") return simple(Kind::Nat);
      if (t.text == "Bool") return simple(Kind::Bool);
      if (t.text == "Unit") return simple(Kind::Unit);
      if (t.text == "Empty") return simple(Kind::Empty);
      if (t.text == "true") return simple(Kind::True);
      if (t.text == "false") return simple(Kind::False);
      if (t.text == "tt") return simple(Kind::Tt);
      if (t.text == "U") {
        ++pos_;
        if (peek().kind != Tok::Number)
          fail("expected a universe level" + found());
        auto e = node(Kind::Univ, Span{start, peek().span.end});
        if (peek().text.size() > 9)
          fail("universe level too large");
        e->num = std::stoull(peek().text);
        ++pos_;
        return e;
      }
      const std::pair<std::string_view, std::pair<Kind, std::size_t>> eliminators[] = {
          {"J", {Kind::J, 3}},
          {"natrec", {Kind::NatRec, 4}},
          {"boolrec", {Kind::BoolRec, 4}},
          {"absurd", {Kind::Absurd, 2}}};
      for (auto &[kw, info] : eliminators)
        if (t.text == kw) {
          ++pos_;
          auto kids = args(info.second);
          auto e = node(info.first, Span{start, last_end()});
          e->kids = std::move(kids);
          return e;
        }
      if (t.text == "mod") {
        ++pos_;
        expect_sym("{");
        auto [raw, sp] = raw_until("}");
        auto [w, names] = word_and_names(raw, sp);
        expect_sym("(");
        ExprPtr body = expr();
        expect_sym(")");
        auto e = node(Kind::ModIntro, Span{start, last_end()});
        e->mod = w;
        e->inames = names;
        e->kids = {body};
        return e;
      }
      if (t.text == "coe") {
        ++pos_;
        expect_sym("{");
        auto [raw, sp] = raw_until("}");
        auto steps = cell_from(raw, sp);
        expect_sym("(");
        ExprPtr body = expr();
        expect_sym(")");
        auto e = node(Kind::Coe, Span{start, last_end()});
        e->steps = std::move(steps);
        e->kids = {body};
        return e;
      }
      fail("unexpected keyword '" + t.text + "'");
    }
    if (is_sym("<")) {
      ++pos_;
      auto [raw, sp] = raw_until("|");
      auto [w, names] = word_and_names(raw, sp);
      ExprPtr body = expr();
      expect_sym(">");
      auto e = node(Kind::ModType, Span{start, last_end()});
      e->mod = w;
      e->inames = names;
      e->kids = {body};
      return e;
    }
    if (is_sym("(")) {
      ++pos_;
      ExprPtr first = expr();
      if (eat_sym(",")) {
        ExprPtr second = expr();
        expect_sym(")");
        auto e = node(Kind::Pair, Span{start, last_end()});
        e->kids = {first, second};
        return e;
      }
      if (eat_sym(":")) {
        ExprPtr ty = expr();
        expect_sym(")");
        auto e = node(Kind::Ann, Span{start, last_end()});
        e->kids = {first, ty};
        return e;
      }
      expect_sym(")");
      auto wide = std::make_shared<Expr>(*first);
      wide->span = Span{start, last_end()};
      return wide;
    }
    fail("expected an expression" + found());
  }
};

} // namespace

bool is_keyword(std::string_view s) {
  return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

ParseResult parse_module(std::string_view text) {
  ParseResult r;
  try {
    Parser p(text, lex(text));
    r.module = p.module();
  } catch (const Error &e) {
    r.errors.push_back(e);
  }
  return r;
}

ParseResult parse_expr_only(std::string_view text, ExprPtr &out) {
  ParseResult r;
  try {
    Parser p(text, lex(text));
    out = p.single_expr();
    r.module = Module{};
  } catch (const Error &e) {
    r.errors.push_back(e);
  }
  return r;
}

bool same(const ExprPtr &a, const ExprPtr &b) {
  if (!a || !b)
    return !a && !b;
  return same(*a, *b);
}

bool same(const Expr &a, const Expr &b) {
  if (a.kind != b.kind || a.name != b.name || a.name2 != b.name2 || a.inames != b.inames ||
      a.mod != b.mod || a.mod2 != b.mod2 || a.has_mod != b.has_mod || a.steps != b.steps ||
      a.num != b.num || a.kids.size() != b.kids.size())
    return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!same(a.kids[i], b.kids[i]))
      return false;
  return true;
}

} // namespace trikernel::syntax
