#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trikernel/context.hpp"
#include "trikernel/diagnostic.hpp"
#include "trikernel/lattice.hpp"
#include "trikernel/syntax.hpp"
#include "trikernel/term.hpp"

namespace trikernel::core {

/// A checked top-level constant. Types and values are closed.
struct Global {
  std::string name;
  TermPtr type;
  TermPtr value; // null for axioms
  std::map<std::string, std::string> attrs;
  std::string file;
  Span span;
};

class Globals {
public:
  std::uint32_t add(Global g);
  std::optional<std::uint32_t> find(const std::string &name) const;
  const Global &at(std::uint32_t id) const { return items_.at(id); }
  std::size_t size() const { return items_.size(); }
  const std::vector<Global> &items() const { return items_; }

private:
  std::vector<Global> items_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

struct Typed {
  TermPtr term;
  TermPtr type;
};

/// Bidirectional elaboration from surface syntax to core terms, plus
/// weak-head evaluation and conversion. Not thread safe; use one per module.
class Kernel {
public:
  explicit Kernel(const Globals &globals, int search_depth = modality::kDefaultSearchDepth);

  // ---- evaluation ----
  TermPtr whnf(Context &ctx, const TermPtr &t);
  TermPtr nf(Context &ctx, const TermPtr &t);
  bool conv(Context &ctx, const TermPtr &a, const TermPtr &b);

  /// b[x := u] where b lives in ctx, x and u in ctx/mu.
  TermPtr subst(Context &ctx, const TermPtr &body, const TermPtr &u);

  // ---- elaboration ----
  Typed infer(Context &ctx, const syntax::ExprPtr &e);
  TermPtr check(Context &ctx, const syntax::ExprPtr &e, const TermPtr &type);
  /// Elaborates a type; returns it with its universe level.
  std::pair<TermPtr, std::uint32_t> check_type(Context &ctx, const syntax::ExprPtr &e);

  /// Level n when `type` is U n (after whnf), otherwise nullopt.
  std::optional<std::uint32_t> universe_of(Context &ctx, const TermPtr &type);

  std::string show(const Context &ctx, const TermPtr &t) const;

  /// Globals referenced while elaborating, for the dead-entry lint.
  const std::set<std::uint32_t> &used() const { return used_; }
  void reset_used() { used_.clear(); }

  int search_depth() const { return depth_; }

private:
  const Globals &globals_;
  int depth_;
  std::set<std::uint32_t> used_;
  std::unordered_map<std::string, std::pair<lattice::Atom, TermPtr>> atom_ids_;
  std::vector<TermPtr> atom_terms_;
  int fresh_ = 0;

  // eval
  TermPtr whnf_step(Context &ctx, const TermPtr &t, bool &progressed);
  TermPtr unfold_var(Context &ctx, const Term &v);
  lattice::Poly to_poly(Context &ctx, const TermPtr &t);
  TermPtr from_poly(const lattice::Poly &p);
  TermPtr nf_kids(Context &ctx, const TermPtr &t);
  bool conv_whnf(Context &ctx, const TermPtr &a, const TermPtr &b);
  bool conv_kids(Context &ctx, const Term &a, const Term &b);
  TermPtr eta_arg(const Term &lam_or_pi);

  // elab
  Typed infer_var(Context &ctx, const syntax::Expr &e, const std::string &name,
                  const std::vector<modality::Step> *cell, const std::vector<TermPtr> &points,
                  Span span);
  Typed infer_inst(Context &ctx, const syntax::ExprPtr &e);
  Typed infer_letmod(Context &ctx, const syntax::ExprPtr &e, const TermPtr *expected);
  Typed infer_coe(Context &ctx, const syntax::ExprPtr &e);
  Typed infer_lam(Context &ctx, const syntax::ExprPtr &e);
  TermPtr check_lam(Context &ctx, const syntax::ExprPtr &e, const TermPtr &pi);
  void expect_conv(Context &ctx, const TermPtr &expected, const TermPtr &actual, Span span);
  TermPtr expect_pi(Context &ctx, const TermPtr &type, Span span);
  TermPtr expect_form(Context &ctx, const TermPtr &type, Tag tag, const char *what, Span span);
  std::string fresh(const std::string &base);
  /// Type of a core neutral (or any term whose head determines its type).
  TermPtr type_of(Context &ctx, const TermPtr &t, Span span);
  /// Universe level of a core type.
  std::uint32_t level_of(Context &ctx, const TermPtr &type, Span span);
  /// Elaborates an eliminator motive over binders with the given domains
  /// (each living in ctx extended by the previous ones).
  TermPtr elab_motive(Context &ctx, const syntax::ExprPtr &p, const std::vector<TermPtr> &doms);
};

/// Builds `(x : A @ mu) -> ...` and `fun x ... =>` chains for parameters.
syntax::ExprPtr pi_over(const std::vector<syntax::Param> &ps, syntax::ExprPtr body);
syntax::ExprPtr lam_over(const std::vector<syntax::Param> &ps, syntax::ExprPtr body);

} // namespace trikernel::core
