#include "trikernel/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "trikernel/diagnostic.hpp"

namespace trikernel::lattice {

namespace {

bool subset(const Monomial &a, const Monomial &b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Sorts, dedups and drops every monomial that strictly contains another.
Poly minimize(std::vector<Monomial> ms) {
  for (auto &m : ms) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  std::sort(ms.begin(), ms.end(), [](const Monomial &a, const Monomial &b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  std::vector<Monomial> keep;
  for (auto &m : ms) {
    bool absorbed = false;
    for (auto &k : keep)
      if (subset(k, m)) {
        absorbed = true;
        break;
      }
    if (!absorbed)
      keep.push_back(std::move(m));
  }
  std::sort(keep.begin(), keep.end());
  return Poly{std::move(keep)};
}

} // namespace

Poly zero() { return Poly{}; }
Poly one() { return Poly{{Monomial{}}}; }
Poly atom(Atom a) { return Poly{{Monomial{a}}}; }

Poly join(const Poly &p, const Poly &q) {
  std::vector<Monomial> ms = p.monos;
  ms.insert(ms.end(), q.monos.begin(), q.monos.end());
  return minimize(std::move(ms));
}

Poly meet(const Poly &p, const Poly &q) {
  std::vector<Monomial> ms;
  ms.reserve(p.monos.size() * q.monos.size());
  for (const auto &a : p.monos)
    for (const auto &b : q.monos) {
      Monomial m;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
      ms.push_back(std::move(m));
    }
  return minimize(std::move(ms));
}

bool is_zero(const Poly &p) { return p.monos.empty(); }
bool is_one(const Poly &p) { return p.monos.size() == 1 && p.monos[0].empty(); }

std::vector<Atom> atoms_of(const Poly &p) {
  std::set<Atom> s;
  for (const auto &m : p.monos)
    s.insert(m.begin(), m.end());
  return {s.begin(), s.end()};
}

ExprPtr Expr::mk_atom(Atom a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Atom;
  e->atom = a;
  return e;
}
ExprPtr Expr::mk_zero() {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Zero;
  return e;
}
ExprPtr Expr::mk_one() {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::One;
  return e;
}
ExprPtr Expr::mk_meet(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Meet;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}
ExprPtr Expr::mk_join(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Join;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

Poly canon(const Expr &e) {
  switch (e.kind) {
  case Expr::Kind::Atom: return atom(e.atom);
  case Expr::Kind::Zero: return zero();
  case Expr::Kind::One: return one();
  case Expr::Kind::Meet: return meet(canon(*e.lhs), canon(*e.rhs));
  case Expr::Kind::Join: return join(canon(*e.lhs), canon(*e.rhs));
  }
  return zero();
}

bool eq(const Poly &p, const Poly &q) { return p == q; }
bool leq(const Poly &p, const Poly &q) { return meet(p, q) == p; }

bool oracle_eq(const Poly &p, const Poly &q) {
  std::set<Atom> all;
  for (Atom a : atoms_of(p))
    all.insert(a);
  for (Atom a : atoms_of(q))
    all.insert(a);
  if (all.size() > kOracleAtomBudget)
    throw Error(Code::LatticeSize, "oracle over " + std::to_string(all.size()) +
                                       " atoms exceeds the budget of " +
                                       std::to_string(kOracleAtomBudget));
  std::map<Atom, unsigned> bit;
  for (Atom a : all)
    bit.emplace(a, static_cast<unsigned>(bit.size()));
  const std::uint64_t n = std::uint64_t{1} << all.size();
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    auto val = [&](Atom a) { return ((mask >> bit.at(a)) & 1u) != 0; };
    if (evaluate(p, val) != evaluate(q, val))
      return false;
  }
  return true;
}

bool evaluate(const Expr &e, const std::unordered_map<Atom, bool> &env) {
  switch (e.kind) {
  case Expr::Kind::Atom: return env.at(e.atom);
  case Expr::Kind::Zero: return false;
  case Expr::Kind::One: return true;
  case Expr::Kind::Meet: return evaluate(*e.lhs, env) && evaluate(*e.rhs, env);
  case Expr::Kind::Join: return evaluate(*e.lhs, env) || evaluate(*e.rhs, env);
  }
  return false;
}

namespace {
void collect(const Expr &e, std::set<Atom> &out) {
  if (e.kind == Expr::Kind::Atom)
    out.insert(e.atom);
  if (e.lhs)
    collect(*e.lhs, out);
  if (e.rhs)
    collect(*e.rhs, out);
}
} // namespace

bool oracle_eq(const Expr &p, const Expr &q) {
  std::set<Atom> all;
  collect(p, all);
  collect(q, all);
  if (all.size() > kOracleAtomBudget)
    throw Error(Code::LatticeSize, "oracle over " + std::to_string(all.size()) +
                                       " atoms exceeds the budget of " +
                                       std::to_string(kOracleAtomBudget));
  std::vector<Atom> order(all.begin(), all.end());
  std::unordered_map<Atom, bool> env;
  const std::uint64_t n = std::uint64_t{1} << order.size();
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    for (std::size_t i = 0; i < order.size(); ++i)
      env[order[i]] = ((mask >> i) & 1u) != 0;
    if (evaluate(p, env) != evaluate(q, env))
      return false;
  }
  return true;
}

Poly subst(const Poly &p, Atom x, const Poly &q) {
  Poly acc = zero();
  for (const Monomial &m : p.monos) {
    Poly term = one();
    for (Atom a : m)
      term = meet(term, a == x ? q : atom(a));
    acc = join(acc, term);
  }
  return acc;
}

std::pair<Poly, Poly> phoa_endpoints(const Poly &p, Atom x) {
  return {subst(p, x, zero()), subst(p, x, one())};
}

Poly dualize(const Poly &p) {
  Poly acc = one();
  for (const Monomial &m : p.monos) {
    Poly clause = zero();
    for (Atom a : m)
      clause = join(clause, atom(a));
    acc = meet(acc, clause);
  }
  return acc;
}

std::uint64_t count_free(unsigned n) {
  if (n > kMaxCountAtoms)
    throw Error(Code::LatticeSize, "count_free supports at most " +
                                       std::to_string(kMaxCountAtoms) + " atoms");
  // Canonical forms over n atoms are exactly the antichains of subsets.
  const unsigned subsets = 1u << n;
  std::vector<unsigned> chosen;
  std::uint64_t count = 0;
  auto comparable = [](unsigned a, unsigned b) { return (a & b) == a || (a & b) == b; };
  auto go = [&](auto &self, unsigned next) -> void {
    ++count;
    for (unsigned s = next; s < subsets; ++s) {
      bool ok = true;
      for (unsigned c : chosen)
        if (comparable(c, s)) {
          ok = false;
          break;
        }
      if (!ok)
        continue;
      chosen.push_back(s);
      self(self, s + 1);
      chosen.pop_back();
    }
  };
  go(go, 0);
  return count;
}

std::vector<std::vector<Poly>> fp_algebra_homs(const Presentation &pres) {
  if (pres.generators > kMaxPresentationGens)
    throw Error(Code::LatticeSize, "presentations support at most " +
                                       std::to_string(kMaxPresentationGens) + " generators");
  for (const auto &[l, r] : pres.relations)
    for (const Poly *side : {&l, &r})
      for (Atom a : atoms_of(*side))
        if (a >= pres.generators)
          throw Error(Code::Unbound, "relation mentions atom " + std::to_string(a) +
                                         " outside the generators");
  // Tuples are listed lexicographically with generator 0 most significant.
  std::vector<std::vector<Poly>> out;
  for (unsigned idx = 0; idx < (1u << pres.generators); ++idx) {
    std::vector<bool> bits(pres.generators);
    for (unsigned g = 0; g < pres.generators; ++g)
      bits[g] = ((idx >> (pres.generators - 1 - g)) & 1u) != 0;
    auto val = [&](Atom a) { return static_cast<bool>(bits[a]); };
    bool ok = true;
    for (const auto &[l, r] : pres.relations)
      if (evaluate(l, val) != evaluate(r, val)) {
        ok = false;
        break;
      }
    if (!ok)
      continue;
    std::vector<Poly> tuple;
    for (bool b : bits)
      tuple.push_back(b ? one() : zero());
    out.push_back(std::move(tuple));
  }
  return out;
}

Atom AtomTable::intern(std::string_view name) {
  std::string key(name);
  if (auto it = ids_.find(key); it != ids_.end())
    return it->second;
  Atom id = static_cast<Atom>(names_.size());
  names_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<Atom> AtomTable::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end())
    return it->second;
  return std::nullopt;
}

namespace {

class ExprParser {
public:
  ExprParser(std::string_view text, AtomTable &atoms) : text_(text), atoms_(atoms) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip();
    if (pos_ != text_.size())
      fail("unexpected input");
    return e;
  }

private:
  std::string_view text_;
  AtomTable &atoms_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &msg) {
    throw Error(Code::Parse, msg + " at offset " + std::to_string(pos_), {pos_, pos_ + 1});
  }

  void skip() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (eat("\\/") || eat("\xE2\x88\xA8"))
      e = Expr::mk_join(e, term());
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (eat("/\\") || eat("\xE2\x88\xA7"))
      e = Expr::mk_meet(e, factor());
    return e;
  }

  ExprPtr factor() {
    skip();
    if (pos_ >= text_.size())
      fail("expected a lattice term");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(")"))
        fail("expected ')'");
      return e;
    }
    if (c == '0' || c == '1') {
      std::size_t start = pos_++;
      if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        pos_ = start;
        fail("malformed constant");
      }
      return c == '0' ? Expr::mk_zero() : Expr::mk_one();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '\''))
        ++pos_;
      return Expr::mk_atom(atoms_.intern(text_.substr(start, pos_ - start)));
    }
    fail("expected a lattice term");
  }
};

} // namespace

ExprPtr parse_expr(std::string_view text, AtomTable &atoms) {
  return ExprParser(text, atoms).run();
}

std::string to_string(const Poly &p, const AtomTable &atoms) {
  if (is_zero(p))
    return "0";
  std::string out;
  for (std::size_t i = 0; i < p.monos.size(); ++i) {
    if (i)
      out += "\\/";
    const Monomial &m = p.monos[i];
    if (m.empty()) {
      out += "1";
      continue;
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j)
        out += "/\\";
      out += atoms.name(m[j]);
    }
  }
  return out;
}

std::string to_string(const Expr &e, const AtomTable &atoms) {
  switch (e.kind) {
  case Expr::Kind::Atom: return atoms.name(e.atom);
  case Expr::Kind::Zero: return "0";
  case Expr::Kind::One: return "1";
  case Expr::Kind::Meet:
    return "(" + to_string(*e.lhs, atoms) + " /\\ " + to_string(*e.rhs, atoms) + ")";
  case Expr::Kind::Join:
    return "(" + to_string(*e.lhs, atoms) + " \\/ " + to_string(*e.rhs, atoms) + ")";
  }
  return "?";
}

} // namespace trikernel::lattice
