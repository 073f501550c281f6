#include "trikernel/term.hpp"

#include <algorithm>
#include <set>

namespace trikernel::core {

namespace {

std::shared_ptr<Term> clone(const Term &t) { return std::make_shared<Term>(t); }

Word strip_p(const Word &w) {
  Word out;
  for (auto g : w.gens)
    if (g != modality::Gen::P)
      out.gens.push_back(g);
  return modality::normalize(out);
}

Word p_power(std::size_t n) {
  Word w;
  w.gens.assign(n, modality::Gen::P);
  return w;
}

bool plain_var(const Term &v) { return v.cell.is_identity() && v.ivars.empty(); }

struct Stuck {};

} // namespace

TermPtr mk(Tag tag, std::vector<TermPtr> kids) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  t->kids = std::move(kids);
  return t;
}

TermPtr mk_var(std::uint32_t idx) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Var;
  t->idx = idx;
  return t;
}

TermPtr mk_var(std::uint32_t idx, TwoCell cell, std::vector<TermPtr> ivars) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Var;
  t->idx = idx;
  t->cell = std::move(cell);
  t->ivars = std::move(ivars);
  return t;
}

TermPtr mk_global(std::uint32_t gid, std::string name) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Global;
  t->idx = gid;
  t->name = std::move(name);
  return t;
}

TermPtr mk_univ(std::uint32_t level) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Univ;
  t->idx = level;
  return t;
}

TermPtr mk_pi(std::string name, Word mod, TermPtr dom, TermPtr cod) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Pi;
  t->name = std::move(name);
  t->mod = std::move(mod);
  t->kids = {std::move(dom), std::move(cod)};
  return t;
}

TermPtr mk_lam(std::string name, Word mod, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Lam;
  t->name = std::move(name);
  t->mod = std::move(mod);
  t->kids = {std::move(body)};
  return t;
}

TermPtr mk_app(TermPtr f, TermPtr arg, Word mod) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::App;
  t->mod = std::move(mod);
  t->kids = {std::move(f), std::move(arg)};
  return t;
}

TermPtr mk_sigma(std::string name, TermPtr dom, TermPtr cod) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Sigma;
  t->name = std::move(name);
  t->kids = {std::move(dom), std::move(cod)};
  return t;
}

// <1 | A> is A and mod{1}(a) is a: the identity modality is erased when a
// modal form is built, so every other part of the kernel sees only the body.
TermPtr mk_modtype(Word mod, TermPtr a, std::vector<std::string> inames) {
  if (mod.empty() && inames.empty())
    return a;
  auto t = std::make_shared<Term>();
  t->tag = Tag::ModType;
  t->mod = std::move(mod);
  t->inames = std::move(inames);
  t->kids = {std::move(a)};
  return t;
}

TermPtr mk_modintro(Word mod, TermPtr a, std::vector<std::string> inames) {
  if (mod.empty() && inames.empty())
    return a;
  auto t = std::make_shared<Term>();
  t->tag = Tag::ModIntro;
  t->mod = std::move(mod);
  t->inames = std::move(inames);
  t->kids = {std::move(a)};
  return t;
}

TermPtr mk_letmod(Word nu, Word mu, std::string x, TermPtr scrut, std::string z, TermPtr motive,
                  TermPtr body) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::LetMod;
  t->mod = std::move(mu);
  t->mod2 = std::move(nu);
  t->name = std::move(x);
  t->name2 = std::move(z);
  t->kids = {std::move(scrut), std::move(motive), std::move(body)};
  return t;
}

TermPtr mk_cellact(TwoCell cell, std::vector<TermPtr> ivars, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::CellAct;
  t->cell = std::move(cell);
  t->ivars = std::move(ivars);
  t->kids = {std::move(body)};
  return t;
}

TermPtr mk_nat(std::uint64_t n) {
  TermPtr t = mk(Tag::Zero);
  for (std::uint64_t i = 0; i < n; ++i)
    t = mk(Tag::Suc, {t});
  return t;
}

KidScope kid_scope(const Term &t, std::size_t i) {
  switch (t.tag) {
  case Tag::Pi:
    return i == 0 ? KidScope{t.mod, false} : KidScope{std::nullopt, true};
  case Tag::Lam:
    return {std::nullopt, true};
  case Tag::App:
    return i == 1 ? KidScope{t.mod, false} : KidScope{};
  case Tag::Sigma:
    return i == 1 ? KidScope{std::nullopt, true} : KidScope{};
  case Tag::ModType:
  case Tag::ModIntro:
    return {t.mod, false};
  case Tag::LetMod:
    return i == 0 ? KidScope{t.mod2, false} : KidScope{std::nullopt, true};
  case Tag::CellAct:
    return {t.cell.src, false};
  default:
    return {};
  }
}

std::uint32_t kid_binds(const Term &t, std::size_t i) {
  KidScope s = kid_scope(t, i);
  return static_cast<std::uint32_t>((s.lock ? modality::count_p(*s.lock) : 0) +
                                    (s.binds_var ? 1 : 0));
}

TermPtr map_vars(const TermPtr &t, const VarFn &f, std::uint32_t depth) {
  if (!t)
    return t;
  if (t->tag == Tag::Var) {
    if (t->ivars.empty())
      return f(depth, *t);
    auto v = clone(*t);
    for (auto &iv : v->ivars)
      iv = map_vars(iv, f, depth);
    return f(depth, *v);
  }
  std::shared_ptr<Term> copy;
  auto touch = [&]() -> Term & {
    if (!copy)
      copy = clone(*t);
    return *copy;
  };
  for (std::size_t i = 0; i < t->ivars.size(); ++i) {
    TermPtr n = map_vars(t->ivars[i], f, depth);
    if (n != t->ivars[i])
      touch().ivars[i] = n;
  }
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    if (!t->kids[i])
      continue;
    TermPtr n = map_vars(t->kids[i], f, depth + kid_binds(*t, i));
    if (n != t->kids[i])
      touch().kids[i] = n;
  }
  return copy ? copy : t;
}

TermPtr shift(const TermPtr &t, std::int64_t d, std::uint32_t cutoff) {
  if (d == 0)
    return t;
  return map_vars(t, [&](std::uint32_t c, const Term &v) -> TermPtr {
    if (v.idx < c + cutoff)
      return std::make_shared<Term>(v);
    auto n = std::make_shared<Term>(v);
    n->idx = static_cast<std::uint32_t>(static_cast<std::int64_t>(v.idx) + d);
    return n;
  });
}

bool has_free(const TermPtr &t, std::uint32_t cutoff, std::uint32_t limit) {
  bool found = false;
  map_vars(t, [&](std::uint32_t c, const Term &v) -> TermPtr {
    if (v.idx >= c + cutoff && (limit == UINT32_MAX || v.idx < c + limit))
      found = true;
    return std::make_shared<Term>(v);
  });
  return found;
}

namespace {

bool has_cellact(const TermPtr &t) {
  if (!t)
    return false;
  if (t->tag == Tag::CellAct)
    return true;
  for (auto &iv : t->ivars)
    if (has_cellact(iv))
      return true;
  for (auto &k : t->kids)
    if (has_cellact(k))
      return true;
  return false;
}

// Whiskers alpha (out of the p-free mu) into each free variable's cell.
class Whiskerer {
public:
  Whiskerer(const TwoCell &alpha, const std::vector<TermPtr> &ivars, std::uint32_t d,
            const LockProfile &rho)
      : alpha_(alpha), ivars_(ivars), d_(d), rho_(rho) {}

  TermPtr go(const TermPtr &t, std::uint32_t c) {
    if (!t)
      return t;
    if (t->tag == Tag::CellAct)
      throw Stuck{};
    auto copy = clone(*t);
    for (auto &iv : copy->ivars)
      iv = go(iv, c);
    if (t->tag == Tag::Var)
      return var(*copy, c);
    for (std::size_t i = 0; i < copy->kids.size(); ++i) {
      if (!copy->kids[i])
        continue;
      KidScope s = kid_scope(*t, i);
      if (s.lock)
        stack_.push_back(strip_p(*s.lock));
      copy->kids[i] = go(copy->kids[i], c + kid_binds(*t, i));
      if (s.lock)
        stack_.pop_back();
    }
    return copy;
  }

private:
  const TwoCell &alpha_;
  const std::vector<TermPtr> &ivars_;
  std::uint32_t d_;
  const LockProfile &rho_;
  std::vector<Word> stack_;

  TermPtr var(Term &v, std::uint32_t c) {
    if (v.idx < c)
      return std::make_shared<Term>(v);
    std::uint32_t y = v.idx - c;
    Word rho = rho_(y);
    Word local;
    for (const Word &w : stack_)
      local = modality::concat(local, w);
    Word right = modality::concat(local, p_power(v.ivars.size()));
    Word expect = modality::normalize(
        modality::concat(modality::concat(rho, alpha_.src), right));
    if (expect != v.cell.dst)
      throw Stuck{};
    TwoCell base = v.cell;
    TwoCell moved = modality::whisker(rho, alpha_, modality::normalize(right));
    auto n = std::make_shared<Term>(v);
    n->cell = modality::vcomp(base, moved);
    n->idx = v.idx + d_;
    std::vector<TermPtr> iv;
    for (auto &x : ivars_)
      iv.push_back(shift(x, c));
    for (auto &x : v.ivars)
      iv.push_back(x);
    n->ivars = std::move(iv);
    return n;
  }
};

} // namespace

TermPtr transport(const TermPtr &u, const TwoCell &alpha, const std::vector<TermPtr> &ivars,
                  std::uint32_t d, const LockProfile &rho) {
  const std::uint32_t m = static_cast<std::uint32_t>(modality::count_p(alpha.src));
  try {
    if (alpha.is_identity()) {
      return map_vars(u, [&](std::uint32_t c, const Term &v) -> TermPtr {
        if (v.idx < c)
          return std::make_shared<Term>(v);
        if (v.idx < c + m) {
          if (!plain_var(v))
            throw Stuck{};
          return shift(ivars.at(m - 1 - (v.idx - c)), c);
        }
        auto n = std::make_shared<Term>(v);
        n->idx = v.idx - m + d;
        return n;
      });
    }
    if (m == 0)
      return Whiskerer(alpha, ivars, d, rho).go(u, 0);
    // A p-annotated term under a non-identity cell: only closed terms move.
    if (has_free(u, m) || has_cellact(u))
      throw Stuck{};
    auto pm = modality::p_map(alpha);
    return map_vars(u, [&](std::uint32_t c, const Term &v) -> TermPtr {
      if (v.idx < c)
        return std::make_shared<Term>(v);
      std::uint32_t q = m - 1 - (v.idx - c);
      if (!plain_var(v) || !pm.at(q))
        throw Stuck{};
      return shift(ivars.at(*pm[q]), c);
    });
  } catch (const Stuck &) {
    return mk_cellact(alpha, ivars, shift(u, d, m));
  }
}

TermPtr subst_top(const TermPtr &body, const TermPtr &u, const LockProfile &rho) {
  return map_vars(body, [&](std::uint32_t c, const Term &v) -> TermPtr {
    if (v.idx < c)
      return std::make_shared<Term>(v);
    if (v.idx == c) {
      TwoCell cell = v.cell;
      return transport(u, cell, v.ivars, c, rho);
    }
    auto n = std::make_shared<Term>(v);
    n->idx = v.idx - 1;
    return n;
  });
}

std::optional<TermPtr> instantiate(const TermPtr &t, const std::vector<TermPtr> &values) {
  const std::uint32_t n = static_cast<std::uint32_t>(values.size());
  if (n == 0)
    return t;
  try {
    return map_vars(t, [&](std::uint32_t c, const Term &v) -> TermPtr {
      if (v.idx < c)
        return std::make_shared<Term>(v);
      if (v.idx < c + n) {
        if (!plain_var(v))
          throw Stuck{};
        return shift(values[n - 1 - (v.idx - c)], c);
      }
      auto r = std::make_shared<Term>(v);
      r->idx = v.idx - n;
      return r;
    });
  } catch (const Stuck &) {
    return std::nullopt;
  }
}

std::optional<TermPtr> strengthen(const TermPtr &t, std::uint32_t k) {
  if (has_free(t, k, k + 1))
    return std::nullopt;
  return map_vars(t, [&](std::uint32_t c, const Term &v) -> TermPtr {
    auto r = std::make_shared<Term>(v);
    if (v.idx >= c + k + 1)
      r->idx = v.idx - 1;
    return r;
  });
}

namespace {

const char *tag_name(Tag t) {
  switch (t) {
  case Tag::Var: return "v";
  case Tag::Global: return "G";
  case Tag::Univ: return "U";
  case Tag::Pi: return "Pi";
  case Tag::Lam: return "Lam";
  case Tag::App: return "App";
  case Tag::Sigma: return "Sig";
  case Tag::Pair: return "Pair";
  case Tag::Fst: return "Fst";
  case Tag::Snd: return "Snd";
  case Tag::Id: return "Id";
  case Tag::Refl: return "refl";
  case Tag::J: return "J";
  case Tag::ModType: return "Mod";
  case Tag::ModIntro: return "mod";
  case Tag::LetMod: return "letmod";
  case Tag::CellAct: return "act";
  case Tag::Int: return "Int";
  case Tag::I0: return "0";
  case Tag::I1: return "1";
  case Tag::Meet: return "meet";
  case Tag::Join: return "join";
  case Tag::Nat: return "Nat";
  case Tag::Zero: return "zero";
  case Tag::Suc: return "suc";
  case Tag::NatRec: return "natrec";
  case Tag::Bool: return "Bool";
  case Tag::True: return "true";
  case Tag::False: return "false";
  case Tag::BoolRec: return "boolrec";
  case Tag::Unit: return "Unit";
  case Tag::Tt: return "tt";
  case Tag::Empty: return "Empty";
  case Tag::Absurd: return "absurd";
  case Tag::Lift: return "Lift";
  case Tag::LiftIn: return "lift";
  case Tag::Lower: return "lower";
  }
  return "?";
}

void ser(const TermPtr &t, std::string &out) {
  if (!t) {
    out += '_';
    return;
  }
  out += tag_name(t->tag);
  switch (t->tag) {
  case Tag::Var:
  case Tag::Global:
  case Tag::Univ:
    out += std::to_string(t->idx);
    break;
  default:
    break;
  }
  if (!t->mod.empty() || t->tag == Tag::LetMod)
    out += "[" + modality::to_string(t->mod) + "]";
  if (!t->mod2.empty())
    out += "[" + modality::to_string(t->mod2) + "]";
  if (!t->cell.steps.empty())
    out += "{" + modality::steps_to_string(t->cell.steps) + "}";
  if (!t->ivars.empty()) {
    out += '<';
    for (auto &iv : t->ivars) {
      ser(iv, out);
      out += ',';
    }
    out += '>';
  }
  if (!t->kids.empty()) {
    out += '(';
    for (auto &k : t->kids) {
      ser(k, out);
      out += ' ';
    }
    out += ')';
  }
}

} // namespace

std::string serialize(const TermPtr &t) {
  std::string out;
  ser(t, out);
  return out;
}

bool same_term(const TermPtr &a, const TermPtr &b) {
  return a == b || serialize(a) == serialize(b);
}

namespace {

class Shower {
public:
  Shower(std::vector<std::string> names,
         const std::function<std::string(std::uint32_t)> &global_name)
      : names_(std::move(names)), global_name_(global_name) {}

  std::string go(const TermPtr &t) { return top(t); }

private:
  std::vector<std::string> names_;
  const std::function<std::string(std::uint32_t)> &global_name_;

  std::string fresh(std::string hint) {
    if (hint.empty() || hint == "_")
      hint = "x";
    std::string n = hint;
    int k = 1;
    while (std::find(names_.begin(), names_.end(), n) != names_.end())
      n = hint + std::to_string(k++);
    return n;
  }

  std::size_t push_lock(const Word &w, const std::vector<std::string> &inames) {
    std::size_t ps = modality::count_p(w);
    for (std::size_t q = 0; q < ps; ++q)
      names_.push_back(fresh(q < inames.size() ? inames[q] : "i"));
    return ps;
  }
  void pop(std::size_t n) { names_.resize(names_.size() - n); }

  std::string name_of(std::uint32_t idx) const {
    if (idx < names_.size())
      return names_[names_.size() - 1 - idx];
    return "#" + std::to_string(idx);
  }

  static bool atomic(const Term &t) {
    switch (t.tag) {
    case Tag::Var:
      return t.ivars.empty();
    case Tag::Global: case Tag::Refl: case Tag::Int: case Tag::I0: case Tag::I1:
    case Tag::Nat: case Tag::Zero: case Tag::Bool: case Tag::True: case Tag::False:
    case Tag::Unit: case Tag::Tt: case Tag::Empty: case Tag::Pair: case Tag::ModType:
    case Tag::ModIntro: case Tag::J: case Tag::NatRec: case Tag::BoolRec: case Tag::Absurd:
    case Tag::Fst: case Tag::Snd:
      return true;
    default:
      return false;
    }
  }

  std::string arg(const TermPtr &t) {
    std::string s = top(t);
    return atomic(*t) ? s : "(" + s + ")";
  }

  std::string under(const Term &t, std::size_t i, const std::string &var = "") {
    KidScope s = kid_scope(t, i);
    std::size_t pushed = 0;
    if (s.lock)
      pushed += push_lock(*s.lock, t.inames);
    if (s.binds_var) {
      names_.push_back(var);
      ++pushed;
    }
    std::string r = top(t.kids[i]);
    pop(pushed);
    return r;
  }

  std::string word(const Word &w, const std::vector<std::string> &binders) {
    std::string s = modality::to_string(w);
    if (!binders.empty()) {
      s += " ;";
      for (std::size_t i = 0; i < binders.size(); ++i)
        s += (i ? ", " : " ") + binders[i];
    }
    return s;
  }

  std::vector<std::string> binder_names(const Word &w, const std::vector<std::string> &inames) {
    std::size_t before = names_.size();
    push_lock(w, inames);
    std::vector<std::string> out(names_.begin() + static_cast<std::ptrdiff_t>(before),
                                 names_.end());
    pop(out.size());
    return out;
  }

  std::string top(const TermPtr &tp) {
    if (!tp)
      return "_";
    const Term &t = *tp;
    switch (t.tag) {
    case Tag::Var: {
      std::string s = name_of(t.idx);
      if (!t.cell.steps.empty())
        s += "^{" + modality::steps_to_string(t.cell.steps) + "}";
      for (auto &iv : t.ivars)
        s += " # " + arg(iv);
      return s;
    }
    case Tag::Global:
      return global_name_ ? global_name_(t.idx) : t.name;
    case Tag::Univ:
      return "U " + std::to_string(t.idx);
    case Tag::Pi: {
      bool dep = has_free(t.kids[1], 0, 1);
      std::string dom_names;
      std::string dom = under(t, 0);
      if (!dep && t.mod.empty())
        return (atomic(*t.kids[0]) || t.kids[0]->tag == Tag::App ? dom : "(" + dom + ")") +
               " -> " + under(t, 1, "_");
      std::string x = fresh(t.name);
      std::string s = "(" + x + " : " + dom;
      if (!t.mod.empty())
        s += " @ " + modality::to_string(t.mod);
      return s + ") -> " + under(t, 1, x);
    }
    case Tag::Lam: {
      std::string x = fresh(t.name);
      return "fun " + x + " => " + under(t, 0, x);
    }
    case Tag::App: {
      std::string f = t.kids[0]->tag == Tag::App ? top(t.kids[0]) : arg(t.kids[0]);
      std::size_t pushed = push_lock(t.mod, {});
      std::string a = arg(t.kids[1]);
      pop(pushed);
      return f + " " + a;
    }
    case Tag::Sigma: {
      bool dep = has_free(t.kids[1], 0, 1);
      if (!dep)
        return arg(t.kids[0]) + " * " + under(t, 1, "_");
      std::string x = fresh(t.name);
      return "(" + x + " : " + top(t.kids[0]) + ") * " + under(t, 1, x);
    }
    case Tag::Pair:
      return "(" + top(t.kids[0]) + ", " + top(t.kids[1]) + ")";
    case Tag::Fst:
      return arg(t.kids[0]) + ".1";
    case Tag::Snd:
      return arg(t.kids[0]) + ".2";
    case Tag::Id:
      return arg(t.kids[1]) + " = " + arg(t.kids[2]);
    case Tag::Refl:
      return "refl";
    case Tag::J:
      return "J(" + top(t.kids[0]) + ", " + top(t.kids[1]) + ", " + top(t.kids[3]) + ")";
    case Tag::ModType:
    case Tag::ModIntro: {
      auto bs = binder_names(t.mod, t.inames);
      std::string w = word(t.mod, bs);
      std::string body = under(t, 0);
      return t.tag == Tag::ModType ? "<" + w + "| " + body + ">" : "mod{" + w + "}(" + body + ")";
    }
    case Tag::LetMod: {
      std::string s = "let";
      if (!t.mod2.empty())
        s += "{" + modality::to_string(t.mod2) + "}";
      std::string x = fresh(t.name);
      s += " mod{" + modality::to_string(t.mod) + "}(" + x + ") = " + under(t, 0);
      if (t.kids[1]) {
        std::string z = fresh(t.name2.empty() ? "z" : t.name2);
        s += " return " + z + ". " + under(t, 1, z);
      }
      return s + " in " + under(t, 2, x);
    }
    case Tag::CellAct: {
      std::string s = "(" + under(t, 0) + ")^{" +
                      (t.cell.steps.empty() ? "id" : modality::steps_to_string(t.cell.steps)) +
                      "}";
      for (auto &iv : t.ivars)
        s += " # " + arg(iv);
      return s;
    }
    case Tag::Int: return "Int";
    case Tag::I0: return "0";
    case Tag::I1: return "1";
    case Tag::Meet: return lat(t.kids[0], Tag::Meet) + " /\\ " + lat(t.kids[1], Tag::Meet);
    case Tag::Join: return lat(t.kids[0], Tag::Join) + " \\/ " + lat(t.kids[1], Tag::Join);
    case Tag::Nat: return "Nat";
    case Tag::Zero: return "0";
    case Tag::Suc: {
      std::uint64_t n = 1;
      TermPtr k = t.kids[0];
      while (k->tag == Tag::Suc) {
        ++n;
        k = k->kids[0];
      }
      if (k->tag == Tag::Zero)
        return std::to_string(n);
      return "suc " + arg(t.kids[0]);
    }
    case Tag::NatRec:
    case Tag::BoolRec:
      return std::string(t.tag == Tag::NatRec ? "natrec(" : "boolrec(") + top(t.kids[0]) + ", " +
             top(t.kids[1]) + ", " + top(t.kids[2]) + ", " + top(t.kids[3]) + ")";
    case Tag::Bool: return "Bool";
    case Tag::True: return "true";
    case Tag::False: return "false";
    case Tag::Unit: return "Unit";
    case Tag::Tt: return "tt";
    case Tag::Empty: return "Empty";
    case Tag::Absurd: return "absurd(" + top(t.kids[0]) + ", " + top(t.kids[1]) + ")";
    case Tag::Lift: return "Lift " + arg(t.kids[0]);
    case Tag::LiftIn: return "lift " + arg(t.kids[0]);
    case Tag::Lower: return "lower " + arg(t.kids[0]);
    }
    return "?";
  }

  std::string lat(const TermPtr &k, Tag parent) {
    if (k->tag == parent || atomic(*k) || (k->tag == Tag::Meet && parent == Tag::Join))
      return top(k);
    return "(" + top(k) + ")";
  }
};

} // namespace

std::string show(const TermPtr &t, std::vector<std::string> names,
                 const std::function<std::string(std::uint32_t)> &global_name) {
  return Shower(std::move(names), global_name).go(t);
}

} // namespace trikernel::core
