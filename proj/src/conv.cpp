#include "trikernel/kernel.hpp"

namespace trikernel::core {

// The variable bound by a Lam, seen from inside an argument under its lock:
// index m (past the lock's binders) with ivars naming those binders.
TermPtr Kernel::eta_arg(const Term &lam) {
  const auto m = static_cast<std::uint32_t>(modality::count_p(lam.mod));
  std::vector<TermPtr> ivars;
  for (std::uint32_t q = 0; q < m; ++q)
    ivars.push_back(mk_var(m - 1 - q));
  return mk_var(m, modality::identity(modality::normalize(lam.mod)), std::move(ivars));
}

bool Kernel::conv(Context &ctx, const TermPtr &a, const TermPtr &b) {
  if (a == b)
    return true;
  return conv_whnf(ctx, whnf(ctx, a), whnf(ctx, b));
}

bool Kernel::conv_whnf(Context &ctx, const TermPtr &a, const TermPtr &b) {
  if (a == b)
    return true;
  auto under_var = [&](const std::string &name, auto &&f) {
    std::size_t m = ctx.mark();
    ctx.push_var(name, nullptr);
    bool r = f();
    ctx.reset(m);
    return r;
  };
  // Eta for functions and pairs, with either side neutral.
  if (a->tag == Tag::Lam && b->tag == Tag::Lam) {
    if (modality::normalize(a->mod) != modality::normalize(b->mod))
      return false;
    return under_var(a->name, [&] { return conv(ctx, a->kids[0], b->kids[0]); });
  }
  if (a->tag == Tag::Lam || b->tag == Tag::Lam) {
    const Term &lam = a->tag == Tag::Lam ? *a : *b;
    const TermPtr &other = a->tag == Tag::Lam ? b : a;
    TermPtr applied = mk_app(shift(other, 1), eta_arg(lam), lam.mod);
    return under_var(lam.name, [&] { return conv(ctx, lam.kids[0], applied); });
  }
  if (a->tag == Tag::Pair || b->tag == Tag::Pair) {
    const Term &pair = a->tag == Tag::Pair ? *a : *b;
    const TermPtr &other = a->tag == Tag::Pair ? b : a;
    if (other->tag == Tag::Pair)
      return conv(ctx, a->kids[0], b->kids[0]) && conv(ctx, a->kids[1], b->kids[1]);
    return conv(ctx, pair.kids[0], mk(Tag::Fst, {other})) &&
           conv(ctx, pair.kids[1], mk(Tag::Snd, {other}));
  }
  if (a->tag != b->tag)
    return false;
  switch (a->tag) {
  case Tag::Var:
    if (a->idx != b->idx || !modality::cell_eq(a->cell, b->cell))
      return false;
    break;
  case Tag::Global:
  case Tag::Univ:
    return a->idx == b->idx;
  case Tag::CellAct:
    if (!modality::cell_eq(a->cell, b->cell))
      return false;
    break;
  default:
    if (modality::normalize(a->mod) != modality::normalize(b->mod) ||
        modality::normalize(a->mod2) != modality::normalize(b->mod2))
      return false;
    break;
  }
  if (a->ivars.size() != b->ivars.size())
    return false;
  for (std::size_t i = 0; i < a->ivars.size(); ++i)
    if (!conv(ctx, a->ivars[i], b->ivars[i]))
      return false;
  return conv_kids(ctx, *a, *b);
}

bool Kernel::conv_kids(Context &ctx, const Term &a, const Term &b) {
  if (a.kids.size() != b.kids.size())
    return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    // A let-mod motive is annotation only.
    if (a.tag == Tag::LetMod && i == 1)
      continue;
    if (!a.kids[i] || !b.kids[i]) {
      if (a.kids[i] != b.kids[i])
        return false;
      continue;
    }
    KidScope s = kid_scope(a, i);
    std::size_t m = ctx.mark();
    if (s.lock)
      ctx.push_lock(*s.lock);
    if (s.binds_var)
      ctx.push_var(a.name, nullptr);
    bool ok = conv(ctx, a.kids[i], b.kids[i]);
    ctx.reset(m);
    if (!ok)
      return false;
  }
  return true;
}

} // namespace trikernel::core
