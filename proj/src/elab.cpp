#include <algorithm>
#include <bit>

#include "trikernel/kernel.hpp"

namespace trikernel::core {

using syntax::Expr;
using syntax::ExprPtr;
using syntax::Kind;
namespace md = modality;

namespace {

[[noreturn]] void fail(Code code, std::string msg, Span span) {
  throw Error(code, std::move(msg), span);
}

std::string w(const Word &x) { return md::to_string(md::normalize(x)); }

Word p_word(std::size_t n) {
  Word out;
  out.gens.assign(n, md::Gen::P);
  return out;
}

} // namespace

std::string Kernel::fresh(const std::string &base) { return base + "'" + std::to_string(fresh_++); }

// ---------------------------------------------------------------- helpers

void Kernel::expect_conv(Context &ctx, const TermPtr &expected, const TermPtr &actual, Span span) {
  if (conv(ctx, expected, actual))
    return;
  TermPtr we = whnf(ctx, expected), wa = whnf(ctx, actual);
  Code code = (we->tag == Tag::Univ && wa->tag == Tag::Univ) ? Code::Universe : Code::Conv;
  Error err(code, "type mismatch", span);
  err.expected = show(ctx, nf(ctx, expected));
  err.actual = show(ctx, nf(ctx, actual));
  throw err;
}

TermPtr Kernel::expect_form(Context &ctx, const TermPtr &type, Tag tag, const char *what,
                            Span span) {
  TermPtr t = whnf(ctx, type);
  if (t->tag != tag) {
    Error err(Code::Conv, std::string("expected ") + what, span);
    err.expected = what;
    err.actual = show(ctx, nf(ctx, type));
    throw err;
  }
  return t;
}

TermPtr Kernel::expect_pi(Context &ctx, const TermPtr &type, Span span) {
  return expect_form(ctx, type, Tag::Pi, "a function type", span);
}

TermPtr Kernel::type_of(Context &ctx, const TermPtr &t, Span span) {
  switch (t->tag) {
  case Tag::Var: {
    const Entry &e = ctx.var(t->idx);
    return transport(e.type, t->cell, t->ivars, t->idx + 1, ctx.profile(ctx.pos_of(t->idx)));
  }
  case Tag::Global:
    return globals_.at(t->idx).type;
  case Tag::App: {
    TermPtr pi = expect_pi(ctx, type_of(ctx, t->kids[0], span), span);
    return subst(ctx, pi->kids[1], t->kids[1]);
  }
  case Tag::Fst:
  case Tag::Snd: {
    TermPtr sg = expect_form(ctx, type_of(ctx, t->kids[0], span), Tag::Sigma, "a pair type", span);
    if (t->tag == Tag::Fst)
      return sg->kids[0];
    return subst(ctx, sg->kids[1], mk(Tag::Fst, {t->kids[0]}));
  }
  case Tag::NatRec:
  case Tag::BoolRec:
    return mk_app(t->kids[0], t->kids[3]);
  case Tag::Absurd:
    return t->kids[0];
  case Tag::J: {
    TermPtr id = expect_form(ctx, type_of(ctx, t->kids[3], span), Tag::Id, "an identity type", span);
    return mk_app(mk_app(mk_app(t->kids[0], t->kids[2]), id->kids[2]), t->kids[3]);
  }
  case Tag::LetMod:
    return subst(ctx, t->kids[1], t->kids[0]);
  case Tag::Lower: {
    TermPtr l = expect_form(ctx, type_of(ctx, t->kids[0], span), Tag::Lift, "a lifted type", span);
    return l->kids[0];
  }
  case Tag::Univ:
    return mk_univ(t->idx + 1);
  default:
    fail(Code::Universe, "cannot determine the universe of this type", span);
  }
}

std::uint32_t Kernel::level_of(Context &ctx, const TermPtr &type, Span span) {
  TermPtr t = whnf(ctx, type);
  std::size_t m = ctx.mark();
  std::uint32_t l = 0;
  switch (t->tag) {
  case Tag::Univ:
    return t->idx + 1;
  case Tag::Int:
  case Tag::Nat:
  case Tag::Bool:
  case Tag::Unit:
  case Tag::Empty:
    return 0;
  case Tag::Pi:
  case Tag::Sigma:
    if (t->tag == Tag::Pi)
      ctx.push_lock(t->mod);
    l = level_of(ctx, t->kids[0], span);
    ctx.reset(m);
    ctx.push_var(t->name, t->kids[0], t->tag == Tag::Pi ? t->mod : Word{});
    l = std::max(l, level_of(ctx, t->kids[1], span));
    ctx.reset(m);
    return l;
  case Tag::Id:
    return level_of(ctx, t->kids[0], span);
  case Tag::ModType:
    ctx.push_lock(t->mod);
    l = level_of(ctx, t->kids[0], span);
    ctx.reset(m);
    return l;
  case Tag::Lift:
    return level_of(ctx, t->kids[0], span) + 1;
  default: {
    auto u = universe_of(ctx, type_of(ctx, t, span));
    if (!u)
      fail(Code::Universe, "cannot determine the universe of this type", span);
    return *u;
  }
  }
}

std::pair<TermPtr, std::uint32_t> Kernel::check_type(Context &ctx, const ExprPtr &e) {
  Typed r = infer(ctx, e);
  auto l = universe_of(ctx, r.type);
  if (!l) {
    Error err(Code::Conv, "expected a type", e->span);
    err.expected = "U _";
    err.actual = show(ctx, nf(ctx, r.type));
    throw err;
  }
  return {r.term, *l};
}

TermPtr Kernel::elab_motive(Context &ctx, const ExprPtr &p, const std::vector<TermPtr> &doms) {
  std::size_t m = ctx.mark();
  std::vector<std::string> names;
  ExprPtr cur = p;
  std::size_t peeled = 0;
  while (peeled < doms.size() && cur->kind == Kind::Lam) {
    if (cur->has_mod && !md::normalize(cur->mod).gens.empty())
      fail(Code::Conv, "eliminator motives bind unannotated variables", cur->span);
    if (cur->kids[0]) {
      auto [dom, l] = check_type(ctx, cur->kids[0]);
      (void)l;
      expect_conv(ctx, doms[peeled], dom, cur->kids[0]->span);
    }
    ctx.push_var(cur->name, doms[peeled]);
    names.push_back(cur->name);
    cur = cur->kids[1];
    ++peeled;
  }
  TermPtr body;
  if (peeled == doms.size()) {
    body = check_type(ctx, cur).first;
  } else {
    // The rest must be a type family over the remaining domains.
    Typed r = infer(ctx, cur);
    std::size_t m2 = ctx.mark();
    TermPtr t = r.type;
    std::vector<TermPtr> ds;
    for (std::size_t i = peeled; i < doms.size(); ++i) {
      TermPtr pi = expect_pi(ctx, t, cur->span);
      ds.push_back(pi->kids[0]);
      ctx.push_var(pi->name, pi->kids[0], pi->mod);
      t = pi->kids[1];
    }
    auto lvl = universe_of(ctx, t);
    ctx.reset(m2);
    if (!lvl)
      fail(Code::Conv, "the motive must return a type", cur->span);
    TermPtr want = mk_univ(*lvl);
    for (std::size_t i = doms.size(); i-- > peeled;)
      want = mk_pi("_", {}, doms[i], want); // dom i already sits under its predecessors
    expect_conv(ctx, want, r.type, cur->span);
    body = r.term;
  }
  ctx.reset(m);
  for (std::size_t i = peeled; i-- > 0;)
    body = mk_lam(names[i], {}, body);
  return body;
}

// ---------------------------------------------------------------- variables

Typed Kernel::infer_var(Context &ctx, const Expr &, const std::string &name,
                        const std::vector<md::Step> *cell, const std::vector<TermPtr> &points,
                        Span span) {
  auto k = ctx.lookup(name);
  if (!k) {
    auto gid = globals_.find(name);
    if (!gid)
      fail(Code::Unbound, "unbound identifier '" + name + "'", span);
    if (!points.empty())
      fail(Code::Modality, "'" + name + "' is a global constant and takes no interval point",
           span);
    if (cell && !cell->empty())
      fail(Code::CellBoundary, "a global constant is only used with the identity cell", span);
    used_.insert(*gid);
    return {mk_global(*gid, name), globals_.at(*gid).type};
  }
  const Entry &x = ctx.var(*k);
  const std::size_t pos = ctx.pos_of(*k);
  const Word mu = md::normalize(x.mod);
  const auto &es = ctx.entries();

  std::vector<std::size_t> bpos;
  for (std::size_t p = pos + 1; p < es.size(); ++p)
    if (!es[p].is_lock && es[p].binder)
      bpos.push_back(p);
  const std::size_t nb = bpos.size();

  // Readings of the binders after x: each one either a p lock in place or
  // transparent. All-p first, then none, then the rest by size.
  std::vector<std::uint64_t> masks;
  const std::uint64_t full = nb >= 64 ? ~0ULL : ((1ULL << nb) - 1);
  masks.push_back(full);
  if (nb > 0)
    masks.push_back(0);
  if (nb > 1 && nb <= 8) {
    std::vector<std::uint64_t> rest;
    for (std::uint64_t s = 1; s < full; ++s)
      rest.push_back(s);
    std::stable_sort(rest.begin(), rest.end(), [](std::uint64_t a, std::uint64_t b) {
      return std::popcount(a) > std::popcount(b);
    });
    masks.insert(masks.end(), rest.begin(), rest.end());
  }

  // A binder read as a point is itself a variable reached across the locks
  // that follow it.
  auto binder_term = [&](std::size_t bp) -> std::optional<TermPtr> {
    std::uint32_t idx = 0;
    for (std::size_t p = bp + 1; p < es.size(); ++p)
      if (!es[p].is_lock)
        ++idx;
    Word locks = ctx.locks_between(bp, es.size());
    if (locks.gens.empty())
      return mk_var(idx);
    auto c = md::cell_search(Word{}, locks, depth_);
    if (!c)
      return std::nullopt;
    return mk_var(idx, *c, {});
  };

  struct Reading {
    Word word;
    std::vector<TermPtr> ivars;
  };
  std::vector<Reading> readings;
  for (std::uint64_t mask : masks) {
    Word lw;
    std::vector<TermPtr> ivars;
    bool ok = true;
    std::size_t bi = 0;
    for (std::size_t p = pos + 1; p < es.size() && ok; ++p) {
      if (es[p].is_lock) {
        lw = md::concat(lw, es[p].lock);
      } else if (es[p].binder) {
        if (mask >> bi & 1) {
          lw.gens.push_back(md::Gen::P);
          auto b = binder_term(p);
          if (b)
            ivars.push_back(*b);
          else
            ok = false;
        }
        ++bi;
      }
    }
    if (!ok)
      continue;
    lw = md::normalize(md::concat(lw, p_word(points.size())));
    for (auto &pt : points)
      ivars.push_back(pt);
    readings.push_back({lw, std::move(ivars)});
  }
  if (readings.empty())
    fail(Code::Modality, "'" + name + "' cannot be reached across the interval binders in scope",
         span);

  const Reading *chosen = nullptr;
  md::TwoCell alpha;
  if (cell) {
    alpha = md::from_steps(*cell, mu);
    if (md::normalize(alpha.src) != mu) {
      Error err(Code::CellBoundary,
                "the cell starts at " + w(alpha.src) + " but '" + name + "' is annotated " + w(mu),
                span);
      err.expected = w(mu);
      err.actual = w(alpha.src);
      throw err;
    }
    for (auto &r : readings)
      if (r.word == md::normalize(alpha.dst)) {
        chosen = &r;
        break;
      }
    if (!chosen) {
      Error err(Code::CellBoundary,
                "the cell ends at " + w(alpha.dst) + " but '" + name + "' is used under " +
                    w(readings.front().word),
                span);
      err.expected = w(readings.front().word);
      err.actual = w(alpha.dst);
      throw err;
    }
    alpha.src = mu;
    alpha.dst = chosen->word;
  } else {
    for (auto &r : readings)
      if (r.word == mu) {
        chosen = &r;
        alpha = md::identity(mu);
        break;
      }
    if (!chosen)
      for (auto &r : readings)
        if (auto c = md::cell_search(mu, r.word, depth_)) {
          chosen = &r;
          alpha = *c;
          break;
        }
    if (!chosen) {
      Error err(Code::Modality,
                "'" + name + "' is annotated " + w(mu) + " and cannot be used under " +
                    w(readings.front().word) + ": no 2-cell " + w(mu) + " => " +
                    w(readings.front().word) + " within search depth " + std::to_string(depth_),
                span);
      err.expected = w(mu) + " => " + w(readings.front().word);
      throw err;
    }
  }
  TermPtr type = transport(x.type, alpha, chosen->ivars, *k + 1, ctx.profile(pos));
  return {mk_var(*k, alpha, chosen->ivars), type};
}

Typed Kernel::infer_inst(Context &ctx, const ExprPtr &e) {
  std::vector<ExprPtr> pts;
  ExprPtr head = e;
  while (head->kind == Kind::Inst) {
    pts.push_back(head->kids[1]);
    head = head->kids[0];
  }
  std::reverse(pts.begin(), pts.end());
  std::vector<TermPtr> points;
  for (auto &p : pts)
    points.push_back(check(ctx, p, mk(Tag::Int)));

  const Expr *var = nullptr;
  const std::vector<md::Step> *steps = nullptr;
  if (head->kind == Kind::Var) {
    var = head.get();
  } else if (head->kind == Kind::CellAct && head->kids[0]->kind == Kind::Var) {
    var = head->kids[0].get();
    steps = &head->steps;
  }
  if (var) {
    auto k = ctx.lookup(var->name);
    if (k && (steps || md::count_p(ctx.var(*k).mod) > 0))
      return infer_var(ctx, *var, var->name, steps, points, e->span);
  }

  // Eliminate a p-modal value: let mod{mu}(x) = head in x # points.
  Typed h = infer(ctx, head);
  TermPtr mt = whnf(ctx, h.type);
  if (mt->tag != Tag::ModType || md::count_p(mt->mod) != points.size()) {
    Error err(Code::Modality,
              "instantiating at " + std::to_string(points.size()) +
                  " point(s) needs a modal type with as many p factors",
              e->span);
    err.actual = show(ctx, nf(ctx, h.type));
    throw err;
  }
  const Word mu = md::normalize(mt->mod);
  const Word target = p_word(points.size());
  auto gamma = md::cell_search(mu, target, depth_);
  if (!gamma)
    fail(Code::Modality, "no 2-cell " + w(mu) + " => " + w(target), e->span);
  TermPtr result = transport(mt->kids[0], *gamma, points, 0, ctx.profile());
  std::vector<TermPtr> inner;
  for (auto &p : points)
    inner.push_back(shift(p, 1));
  std::string x = fresh("x");
  TermPtr body = mk_var(0, *gamma, inner);
  TermPtr core = mk_letmod({}, mu, x, h.term, fresh("z"), shift(result, 1), body);
  return {core, result};
}

// ---------------------------------------------------------------- modal forms

Typed Kernel::infer_letmod(Context &ctx, const ExprPtr &e, const TermPtr *expected) {
  const Word nu = md::normalize(e->mod2);
  const Word mu = md::normalize(e->mod);
  const std::size_t m = ctx.mark();

  ctx.push_lock(nu);
  Typed s = infer(ctx, e->kids[0]);
  TermPtr st = whnf(ctx, s.type);
  ctx.reset(m);
  if (mu.empty()) {
    st = mk_modtype(mu, st);
  } else if (st->tag != Tag::ModType || md::normalize(st->mod) != mu) {
    Error err(Code::Conv, "the scrutinee does not have the modal type this pattern expects",
              e->kids[0]->span);
    err.expected = "<" + w(mu) + " | _>";
    err.actual = show(ctx, nf(ctx, s.type));
    throw err;
  }
  TermPtr a = mu.empty() ? st : st->kids[0];
  TermPtr scrut_type = mu.empty() ? st : mk_modtype(mu, a, st->inames);

  TermPtr motive; // lives in ctx, z
  if (e->kids[1]) {
    ctx.push_var(e->name2, scrut_type, nu);
    motive = check_type(ctx, e->kids[1]).first;
    ctx.reset(m);
  } else if (expected) {
    motive = shift(*expected, 1);
  }

  const Word both = md::normalize(md::concat(nu, mu));
  ctx.push_var(e->name, a, both);
  TermPtr body_type;
  if (motive) {
    const auto pn = static_cast<std::uint32_t>(md::count_p(nu));
    const auto pm = static_cast<std::uint32_t>(md::count_p(mu));
    std::vector<TermPtr> iv;
    for (std::uint32_t q = 0; q < pn; ++q)
      iv.push_back(mk_var(pm + pn - 1 - q));
    for (std::uint32_t q = 0; q < pm; ++q)
      iv.push_back(mk_var(pm - 1 - q));
    TermPtr u = mk_modintro(mu, mk_var(pm + pn, md::identity(both), iv));
    body_type = subst_top(shift(motive, 1, 1), u, ctx.profile());
  }
  TermPtr body;
  if (body_type) {
    body = check(ctx, e->kids[2], body_type);
  } else {
    Typed b = infer(ctx, e->kids[2]);
    auto st2 = strengthen(b.type, 0);
    if (!st2)
      fail(Code::Conv, "the type of the body depends on '" + e->name + "'; give a motive",
           e->span);
    body = b.term;
    motive = shift(*st2, 1);
  }
  ctx.reset(m);
  TermPtr core = mk_letmod(nu, mu, e->name, s.term, e->name2, motive, body);
  return {core, subst(ctx, motive, s.term)};
}

Typed Kernel::infer_coe(Context &ctx, const ExprPtr &e) {
  Typed inner = infer(ctx, e->kids[0]);
  if (e->steps.empty())
    return inner;
  // A value of a non-modal type is read at the identity modality.
  TermPtr mt = whnf(ctx, inner.type);
  const bool plain = mt->tag != Tag::ModType;
  const Word mu = plain ? Word{} : md::normalize(mt->mod);
  const TermPtr a_type = plain ? mt : mt->kids[0];
  md::TwoCell alpha = md::from_steps(e->steps, mu);
  if (md::normalize(alpha.src) != mu) {
    Error err(Code::CellBoundary,
              "the cell starts at " + w(alpha.src) + " but the value has modality " + w(mu),
              e->span);
    err.expected = w(mu);
    err.actual = w(alpha.src);
    throw err;
  }
  const Word nu = md::normalize(alpha.dst);
  alpha.src = mu;
  alpha.dst = nu;
  const auto pn = static_cast<std::uint32_t>(md::count_p(nu));
  std::vector<TermPtr> iv;
  for (std::uint32_t q = 0; q < pn; ++q)
    iv.push_back(mk_var(pn - 1 - q));

  std::string x = fresh("x");
  const std::size_t m = ctx.mark();
  ctx.push_var(x, a_type, mu);
  TermPtr moved = transport(a_type, alpha, iv, 1 + pn, ctx.profile(m));
  TermPtr body_type = mk_modtype(nu, moved);
  ctx.reset(m);
  auto result = strengthen(body_type, 0);
  if (!result)
    fail(Code::Modality, "the coerced type depends on the coerced value", e->span);
  TermPtr body = mk_modintro(nu, mk_var(pn, alpha, iv));
  TermPtr core = mk_letmod({}, mu, x, inner.term, fresh("z"), shift(*result, 1), body);
  return {core, *result};
}

// ---------------------------------------------------------------- functions

Typed Kernel::infer_lam(Context &ctx, const ExprPtr &e) {
  if (!e->kids[0])
    fail(Code::Conv, "cannot infer the type of an unannotated function", e->span);
  const Word mu = md::normalize(e->mod);
  const std::size_t m = ctx.mark();
  ctx.push_lock(mu);
  TermPtr dom = check_type(ctx, e->kids[0]).first;
  ctx.reset(m);
  ctx.push_var(e->name, dom, mu);
  Typed b = infer(ctx, e->kids[1]);
  ctx.reset(m);
  return {mk_lam(e->name, mu, b.term), mk_pi(e->name, mu, dom, b.type)};
}

TermPtr Kernel::check_lam(Context &ctx, const ExprPtr &e, const TermPtr &pi) {
  const Word mu = md::normalize(pi->mod);
  if (e->has_mod && md::normalize(e->mod) != mu) {
    Error err(Code::Conv, "the binder's modality does not match the function type", e->span);
    err.expected = w(mu);
    err.actual = w(e->mod);
    throw err;
  }
  const std::size_t m = ctx.mark();
  if (e->kids[0]) {
    ctx.push_lock(mu);
    TermPtr dom = check_type(ctx, e->kids[0]).first;
    expect_conv(ctx, pi->kids[0], dom, e->kids[0]->span);
    ctx.reset(m);
  }
  ctx.push_var(e->name, pi->kids[0], mu);
  TermPtr body = check(ctx, e->kids[1], pi->kids[1]);
  ctx.reset(m);
  return mk_lam(e->name, mu, body);
}

// ---------------------------------------------------------------- infer

Typed Kernel::infer(Context &ctx, const ExprPtr &e) {
  const std::size_t m = ctx.mark();
  switch (e->kind) {
  case Kind::Var:
    return infer_var(ctx, *e, e->name, nullptr, {}, e->span);
  case Kind::CellAct:
    if (e->kids[0]->kind != Kind::Var)
      fail(Code::Modality, "a 2-cell annotation applies to a variable", e->span);
    return infer_var(ctx, *e->kids[0], e->kids[0]->name, &e->steps, {}, e->span);
  case Kind::Inst:
    return infer_inst(ctx, e);
  case Kind::Num:
    return {mk_nat(e->num), mk(Tag::Nat)};
  case Kind::Univ:
    return {mk_univ(static_cast<std::uint32_t>(e->num)),
            mk_univ(static_cast<std::uint32_t>(e->num) + 1)};
  case Kind::Pi:
  case Kind::Sigma: {
    const Word mu = e->kind == Kind::Pi ? md::normalize(e->mod) : Word{};
    ctx.push_lock(mu);
    auto [dom, l1] = check_type(ctx, e->kids[0]);
    ctx.reset(m);
    ctx.push_var(e->name, dom, mu);
    auto [cod, l2] = check_type(ctx, e->kids[1]);
    ctx.reset(m);
    TermPtr t = e->kind == Kind::Pi ? mk_pi(e->name, mu, dom, cod) : mk_sigma(e->name, dom, cod);
    return {t, mk_univ(std::max(l1, l2))};
  }
  case Kind::Lam:
    return infer_lam(ctx, e);
  case Kind::App: {
    Typed f = infer(ctx, e->kids[0]);
    TermPtr pi = expect_pi(ctx, f.type, e->kids[0]->span);
    ctx.push_lock(pi->mod);
    TermPtr a = check(ctx, e->kids[1], pi->kids[0]);
    ctx.reset(m);
    return {mk_app(f.term, a, pi->mod), subst(ctx, pi->kids[1], a)};
  }
  case Kind::Pair: {
    Typed a = infer(ctx, e->kids[0]);
    Typed b = infer(ctx, e->kids[1]);
    return {mk(Tag::Pair, {a.term, b.term}), mk_sigma("_", a.type, shift(b.type, 1))};
  }
  case Kind::Fst:
  case Kind::Snd: {
    Typed p = infer(ctx, e->kids[0]);
    TermPtr sg = expect_form(ctx, p.type, Tag::Sigma, "a pair type", e->kids[0]->span);
    if (e->kind == Kind::Fst)
      return {mk(Tag::Fst, {p.term}), sg->kids[0]};
    return {mk(Tag::Snd, {p.term}), subst(ctx, sg->kids[1], mk(Tag::Fst, {p.term}))};
  }
  case Kind::Id: {
    // A bare numeral would infer as Nat; let the other side pick the type.
    if (e->kids[0]->kind == Kind::Num && e->kids[1]->kind != Kind::Num) {
      Typed r = infer(ctx, e->kids[1]);
      TermPtr l = check(ctx, e->kids[0], r.type);
      std::uint32_t lvl = level_of(ctx, r.type, e->kids[1]->span);
      return {mk(Tag::Id, {r.type, l, r.term}), mk_univ(lvl)};
    }
    Typed l = infer(ctx, e->kids[0]);
    TermPtr r = check(ctx, e->kids[1], l.type);
    std::uint32_t lvl = level_of(ctx, l.type, e->kids[0]->span);
    return {mk(Tag::Id, {l.type, l.term, r}), mk_univ(lvl)};
  }
  case Kind::Refl:
    fail(Code::Conv, "cannot infer the type of refl; annotate it", e->span);
  case Kind::J: {
    Typed p = infer(ctx, e->kids[2]);
    TermPtr id = expect_form(ctx, p.type, Tag::Id, "an identity type", e->kids[2]->span);
    TermPtr A = id->kids[0];
    TermPtr P = elab_motive(ctx, e->kids[0],
                            {A, shift(A, 1), mk(Tag::Id, {shift(A, 2), mk_var(1), mk_var(0)})});
    // d : (x : A) -> P x x refl
    TermPtr P1 = shift(P, 1);
    TermPtr dty = mk_pi("x", {}, A, mk_app(mk_app(mk_app(P1, mk_var(0)), mk_var(0)), mk(Tag::Refl)));
    TermPtr d = check(ctx, e->kids[1], dty);
    TermPtr core = mk(Tag::J, {P, d, id->kids[1], p.term});
    return {core, mk_app(mk_app(mk_app(P, id->kids[1]), id->kids[2]), p.term)};
  }
  case Kind::ModType: {
    const Word mu = md::normalize(e->mod);
    ctx.push_lock(mu, e->inames);
    auto [a, l] = check_type(ctx, e->kids[0]);
    ctx.reset(m);
    return {mk_modtype(mu, a, e->inames), mk_univ(l)};
  }
  case Kind::ModIntro: {
    const Word mu = md::normalize(e->mod);
    ctx.push_lock(mu, e->inames);
    Typed a = infer(ctx, e->kids[0]);
    ctx.reset(m);
    return {mk_modintro(mu, a.term, e->inames), mk_modtype(mu, a.type, e->inames)};
  }
  case Kind::LetMod:
    return infer_letmod(ctx, e, nullptr);
  case Kind::Coe:
    return infer_coe(ctx, e);
  case Kind::Int:
  case Kind::Nat:
  case Kind::Bool:
  case Kind::Unit:
  case Kind::Empty: {
    static const std::pair<Kind, Tag> table[] = {{Kind::Int, Tag::Int},
                                                 {Kind::Nat, Tag::Nat},
                                                 {Kind::Bool, Tag::Bool},
                                                 {Kind::Unit, Tag::Unit},
                                                 {Kind::Empty, Tag::Empty}};
    for (auto [k, t] : table)
      if (k == e->kind)
        return {mk(t), mk_univ(0)};
    break;
  }
  case Kind::Meet:
  case Kind::Join: {
    TermPtr l = check(ctx, e->kids[0], mk(Tag::Int));
    TermPtr r = check(ctx, e->kids[1], mk(Tag::Int));
    return {mk(e->kind == Kind::Meet ? Tag::Meet : Tag::Join, {l, r}), mk(Tag::Int)};
  }
  case Kind::Le: {
    TermPtr l = check(ctx, e->kids[0], mk(Tag::Int));
    TermPtr r = check(ctx, e->kids[1], mk(Tag::Int));
    return {mk(Tag::Id, {mk(Tag::Int), mk(Tag::Meet, {l, r}), l}), mk_univ(0)};
  }
  case Kind::Suc:
    return {mk(Tag::Suc, {check(ctx, e->kids[0], mk(Tag::Nat))}), mk(Tag::Nat)};
  case Kind::NatRec: {
    TermPtr nat = mk(Tag::Nat);
    TermPtr P = elab_motive(ctx, e->kids[0], {nat});
    TermPtr z = check(ctx, e->kids[1], mk_app(P, mk(Tag::Zero)));
    // s : (n : Nat) -> P n -> P (suc n)
    TermPtr sty = mk_pi("n", {}, nat,
                        mk_pi("_", {}, mk_app(shift(P, 1), mk_var(0)),
                              mk_app(shift(P, 2), mk(Tag::Suc, {mk_var(1)}))));
    TermPtr s = check(ctx, e->kids[2], sty);
    TermPtr n = check(ctx, e->kids[3], nat);
    return {mk(Tag::NatRec, {P, z, s, n}), mk_app(P, n)};
  }
  case Kind::True:
  case Kind::False:
    return {mk(e->kind == Kind::True ? Tag::True : Tag::False), mk(Tag::Bool)};
  case Kind::BoolRec: {
    TermPtr P = elab_motive(ctx, e->kids[0], {mk(Tag::Bool)});
    TermPtr t = check(ctx, e->kids[1], mk_app(P, mk(Tag::True)));
    TermPtr f = check(ctx, e->kids[2], mk_app(P, mk(Tag::False)));
    TermPtr b = check(ctx, e->kids[3], mk(Tag::Bool));
    return {mk(Tag::BoolRec, {P, t, f, b}), mk_app(P, b)};
  }
  case Kind::Tt:
    return {mk(Tag::Tt), mk(Tag::Unit)};
  case Kind::Absurd: {
    TermPtr P = check_type(ctx, e->kids[0]).first;
    TermPtr v = check(ctx, e->kids[1], mk(Tag::Empty));
    return {mk(Tag::Absurd, {P, v}), P};
  }
  case Kind::Lift: {
    auto [a, l] = check_type(ctx, e->kids[0]);
    return {mk(Tag::Lift, {a}), mk_univ(l + 1)};
  }
  case Kind::LiftIn: {
    Typed a = infer(ctx, e->kids[0]);
    return {mk(Tag::LiftIn, {a.term}), mk(Tag::Lift, {a.type})};
  }
  case Kind::Lower: {
    Typed a = infer(ctx, e->kids[0]);
    TermPtr l = expect_form(ctx, a.type, Tag::Lift, "a lifted type", e->kids[0]->span);
    return {mk(Tag::Lower, {a.term}), l->kids[0]};
  }
  case Kind::Let: {
    TermPtr ty, val;
    if (e->kids[0]) {
      ty = check_type(ctx, e->kids[0]).first;
      val = check(ctx, e->kids[1], ty);
    } else {
      Typed v = infer(ctx, e->kids[1]);
      ty = v.type;
      val = v.term;
    }
    ctx.push_var(e->name, ty, {}, val);
    Typed b = infer(ctx, e->kids[2]);
    ctx.reset(m);
    return {subst(ctx, b.term, val), subst(ctx, b.type, val)};
  }
  case Kind::Ann: {
    TermPtr ty = check_type(ctx, e->kids[1]).first;
    return {check(ctx, e->kids[0], ty), ty};
  }
  }
  fail(Code::Conv, "cannot infer a type for this expression", e->span);
}

// ---------------------------------------------------------------- check

TermPtr Kernel::check(Context &ctx, const ExprPtr &e, const TermPtr &type) {
  const std::size_t m = ctx.mark();
  switch (e->kind) {
  case Kind::Lam: {
    TermPtr pi = expect_pi(ctx, type, e->span);
    return check_lam(ctx, e, pi);
  }
  case Kind::Pair: {
    TermPtr sg = whnf(ctx, type);
    if (sg->tag != Tag::Sigma)
      break;
    TermPtr a = check(ctx, e->kids[0], sg->kids[0]);
    TermPtr b = check(ctx, e->kids[1], subst(ctx, sg->kids[1], a));
    return mk(Tag::Pair, {a, b});
  }
  case Kind::Refl: {
    TermPtr id = expect_form(ctx, type, Tag::Id, "an identity type", e->span);
    if (!conv(ctx, id->kids[1], id->kids[2])) {
      Error err(Code::Conv, "the endpoints of refl are not definitionally equal", e->span);
      err.expected = show(ctx, nf(ctx, id->kids[1]));
      err.actual = show(ctx, nf(ctx, id->kids[2]));
      throw err;
    }
    return mk(Tag::Refl);
  }
  case Kind::ModIntro: {
    TermPtr mt = whnf(ctx, type);
    if (mt->tag != Tag::ModType)
      break;
    const Word mu = md::normalize(e->mod);
    if (md::normalize(mt->mod) != mu) {
      Error err(Code::Conv, "modal introduction at the wrong modality", e->span);
      err.expected = show(ctx, nf(ctx, type));
      err.actual = "<" + w(mu) + " | _>";
      throw err;
    }
    auto names = e->inames.empty() ? mt->inames : e->inames;
    ctx.push_lock(mu, names);
    TermPtr a = check(ctx, e->kids[0], mt->kids[0]);
    ctx.reset(m);
    return mk_modintro(mu, a, names);
  }
  case Kind::LetMod:
    return infer_letmod(ctx, e, &type).term;
  case Kind::Num: {
    TermPtr t = whnf(ctx, type);
    if (t->tag == Tag::Int) {
      if (e->num > 1)
        fail(Code::Conv, "interval endpoints are 0 and 1", e->span);
      return mk(e->num == 0 ? Tag::I0 : Tag::I1);
    }
    break;
  }
  case Kind::Univ: {
    TermPtr t = whnf(ctx, type);
    if (t->tag == Tag::Univ && t->idx != e->num + 1) {
      Error err(Code::Universe,
                "U " + std::to_string(e->num) + " lives in U " + std::to_string(e->num + 1),
                e->span);
      err.expected = show(ctx, t);
      err.actual = "U " + std::to_string(e->num + 1);
      throw err;
    }
    break;
  }
  case Kind::LiftIn: {
    TermPtr t = whnf(ctx, type);
    if (t->tag != Tag::Lift)
      break;
    return mk(Tag::LiftIn, {check(ctx, e->kids[0], t->kids[0])});
  }
  case Kind::Let: {
    TermPtr ty, val;
    if (e->kids[0]) {
      ty = check_type(ctx, e->kids[0]).first;
      val = check(ctx, e->kids[1], ty);
    } else {
      Typed v = infer(ctx, e->kids[1]);
      ty = v.type;
      val = v.term;
    }
    ctx.push_var(e->name, ty, {}, val);
    TermPtr b = check(ctx, e->kids[2], shift(type, 1));
    ctx.reset(m);
    return subst(ctx, b, val);
  }
  default:
    break;
  }
  Typed r = infer(ctx, e);
  expect_conv(ctx, type, r.type, e->span);
  return r.term;
}

// ---------------------------------------------------------------- telescopes

syntax::ExprPtr pi_over(const std::vector<syntax::Param> &ps, syntax::ExprPtr body) {
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Pi;
    e->span = it->span;
    e->name = it->name;
    e->mod = it->mod;
    e->has_mod = !it->mod.gens.empty();
    e->kids = {it->type, body};
    body = e;
  }
  return body;
}

syntax::ExprPtr lam_over(const std::vector<syntax::Param> &ps, syntax::ExprPtr body) {
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Lam;
    e->span = it->span;
    e->name = it->name;
    e->mod = it->mod;
    e->has_mod = true;
    e->kids = {it->type, body};
    body = e;
  }
  return body;
}

} // namespace trikernel::core
