#include "trikernel/kernel.hpp"

namespace trikernel::core {

std::uint32_t Globals::add(Global g) {
  auto id = static_cast<std::uint32_t>(items_.size());
  ids_[g.name] = id;
  items_.push_back(std::move(g));
  return id;
}

std::optional<std::uint32_t> Globals::find(const std::string &name) const {
  auto it = ids_.find(name);
  if (it == ids_.end())
    return std::nullopt;
  return it->second;
}

Kernel::Kernel(const Globals &globals, int search_depth)
    : globals_(globals), depth_(search_depth) {}

TermPtr Kernel::subst(Context &ctx, const TermPtr &body, const TermPtr &u) {
  return subst_top(body, u, ctx.profile());
}

TermPtr Kernel::unfold_var(Context &ctx, const Term &v) {
  const Entry &e = ctx.var(v.idx);
  return transport(e.value, v.cell, v.ivars, v.idx + 1, ctx.profile(ctx.pos_of(v.idx)));
}

TermPtr Kernel::whnf(Context &ctx, const TermPtr &t0) {
  TermPtr t = t0;
  for (;;) {
    bool progressed = false;
    t = whnf_step(ctx, t, progressed);
    if (!progressed)
      return t;
  }
}

TermPtr Kernel::whnf_step(Context &ctx, const TermPtr &t, bool &progressed) {
  auto rebuild = [&](std::size_t i, const TermPtr &k) {
    if (k == t->kids[i])
      return t;
    auto c = std::make_shared<Term>(*t);
    c->kids[i] = k;
    return TermPtr(c);
  };
  switch (t->tag) {
  case Tag::Var:
    if (t->idx < ctx.vars() && ctx.var(t->idx).value) {
      progressed = true;
      return unfold_var(ctx, *t);
    }
    return t;
  case Tag::Global: {
    const Global &g = globals_.at(t->idx);
    if (g.value) {
      progressed = true;
      return g.value;
    }
    return t;
  }
  case Tag::App: {
    TermPtr f = whnf(ctx, t->kids[0]);
    if (f->tag == Tag::Lam) {
      progressed = true;
      return subst(ctx, f->kids[0], t->kids[1]);
    }
    return rebuild(0, f);
  }
  case Tag::Fst:
  case Tag::Snd: {
    TermPtr e = whnf(ctx, t->kids[0]);
    if (e->tag == Tag::Pair) {
      progressed = true;
      return e->kids[t->tag == Tag::Fst ? 0 : 1];
    }
    return rebuild(0, e);
  }
  case Tag::J: {
    TermPtr p = whnf(ctx, t->kids[3]);
    if (p->tag == Tag::Refl) {
      progressed = true;
      return mk_app(t->kids[1], t->kids[2]);
    }
    return rebuild(3, p);
  }
  case Tag::LetMod: {
    if (modality::normalize(t->mod).empty()) {
      // Matching on mod{1}(x) binds the scrutinee itself.
      progressed = true;
      return subst(ctx, t->kids[2], t->kids[0]);
    }
    std::size_t m = ctx.mark();
    ctx.push_lock(t->mod2);
    TermPtr s = whnf(ctx, t->kids[0]);
    ctx.reset(m);
    if (s->tag == Tag::ModIntro && s->mod == t->mod) {
      progressed = true;
      return subst(ctx, t->kids[2], s->kids[0]);
    }
    return rebuild(0, s);
  }
  case Tag::NatRec: {
    TermPtr n = whnf(ctx, t->kids[3]);
    if (n->tag == Tag::Zero) {
      progressed = true;
      return t->kids[1];
    }
    if (n->tag == Tag::Suc) {
      progressed = true;
      auto rec = std::make_shared<Term>(*t);
      rec->kids[3] = n->kids[0];
      return mk_app(mk_app(t->kids[2], n->kids[0]), rec);
    }
    return rebuild(3, n);
  }
  case Tag::BoolRec: {
    TermPtr b = whnf(ctx, t->kids[3]);
    if (b->tag == Tag::True || b->tag == Tag::False) {
      progressed = true;
      return t->kids[b->tag == Tag::True ? 1 : 2];
    }
    return rebuild(3, b);
  }
  case Tag::Lower: {
    TermPtr e = whnf(ctx, t->kids[0]);
    if (e->tag == Tag::LiftIn) {
      progressed = true;
      return e->kids[0];
    }
    return rebuild(0, e);
  }
  case Tag::Meet:
  case Tag::Join:
    return from_poly(to_poly(ctx, t));
  case Tag::CellAct: {
    // Retry the transport once the body has been evaluated.
    std::size_t m = ctx.mark();
    ctx.push_lock(t->cell.src);
    TermPtr body = whnf(ctx, t->kids[0]);
    ctx.reset(m);
    // The body already lives in the target context, so d = 0.
    TermPtr moved = transport(body, t->cell, t->ivars, 0, ctx.profile());
    if (moved->tag != Tag::CellAct) {
      progressed = true;
      return moved;
    }
    return rebuild(0, body);
  }
  default:
    return t;
  }
}

lattice::Poly Kernel::to_poly(Context &ctx, const TermPtr &t) {
  switch (t->tag) {
  case Tag::I0:
    return lattice::zero();
  case Tag::I1:
    return lattice::one();
  case Tag::Meet:
    return lattice::meet(to_poly(ctx, t->kids[0]), to_poly(ctx, t->kids[1]));
  case Tag::Join:
    return lattice::join(to_poly(ctx, t->kids[0]), to_poly(ctx, t->kids[1]));
  default:
    break;
  }
  TermPtr w = whnf(ctx, t);
  if (w->tag == Tag::I0 || w->tag == Tag::I1 || w->tag == Tag::Meet || w->tag == Tag::Join)
    return to_poly(ctx, w);
  TermPtr n = nf(ctx, w);
  std::string key = serialize(n);
  auto it = atom_ids_.find(key);
  if (it == atom_ids_.end()) {
    auto id = static_cast<lattice::Atom>(atom_terms_.size());
    atom_terms_.push_back(n);
    it = atom_ids_.emplace(key, std::make_pair(id, n)).first;
  }
  return lattice::atom(it->second.first);
}

TermPtr Kernel::from_poly(const lattice::Poly &p) {
  if (lattice::is_zero(p))
    return mk(Tag::I0);
  TermPtr out;
  for (const auto &mono : p.monos) {
    TermPtr m;
    for (lattice::Atom a : mono)
      m = m ? mk(Tag::Meet, {m, atom_terms_[a]}) : atom_terms_[a];
    if (!m)
      m = mk(Tag::I1);
    out = out ? mk(Tag::Join, {out, m}) : m;
  }
  return out;
}

TermPtr Kernel::nf(Context &ctx, const TermPtr &t) {
  return nf_kids(ctx, whnf(ctx, t));
}

TermPtr Kernel::nf_kids(Context &ctx, const TermPtr &t) {
  if (t->ivars.empty() && t->kids.empty())
    return t;
  auto c = std::make_shared<Term>(*t);
  for (auto &iv : c->ivars)
    iv = nf(ctx, iv);
  for (std::size_t i = 0; i < c->kids.size(); ++i) {
    if (!c->kids[i])
      continue;
    KidScope s = kid_scope(*t, i);
    std::size_t m = ctx.mark();
    if (s.lock)
      ctx.push_lock(*s.lock);
    if (s.binds_var)
      ctx.push_var(i == 1 && t->tag == Tag::LetMod ? t->name2 : t->name, nullptr);
    c->kids[i] = nf(ctx, c->kids[i]);
    ctx.reset(m);
  }
  return c;
}

std::optional<std::uint32_t> Kernel::universe_of(Context &ctx, const TermPtr &type) {
  TermPtr w = whnf(ctx, type);
  if (w->tag == Tag::Univ)
    return w->idx;
  return std::nullopt;
}

std::string Kernel::show(const Context &ctx, const TermPtr &t) const {
  return core::show(t, ctx.names(), [this](std::uint32_t gid) { return globals_.at(gid).name; });
}

} // namespace trikernel::core
