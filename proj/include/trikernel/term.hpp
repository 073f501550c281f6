#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trikernel/modality.hpp"

// Core terms with de Bruijn indices.
//
// A p factor in a lock is realized as an interval variable, so a kid that
// lives under a lock mu binds count_p(mu) extra variables, innermost last.
// Binder q of mu (outermost first) is index m-1-q inside that kid.

namespace trikernel::core {

using modality::TwoCell;
using modality::Word;

enum class Tag : std::uint8_t {
  Var,      // idx, cell: annotation => locks read at the use site, ivars
  Global,   // gid
  Univ,     // level
  Pi,       // mod; kids {dom under lock mod, cod binding x}
  Lam,      // mod; kids {body binding x}
  App,      // mod; kids {fun, arg under lock mod}
  Sigma,    // kids {dom, cod binding x}
  Pair,     // kids {fst, snd}
  Fst,      // kids {e}
  Snd,      // kids {e}
  Id,       // kids {type, lhs, rhs}
  Refl,     //
  J,        // kids {motive, base, lhs endpoint, path}
  ModType,  // mod; kids {A under lock mod}
  ModIntro, // mod; kids {a under lock mod}
  LetMod,   // mod2 = nu, mod = mu; kids {scrutinee under lock nu,
            //   motive binding z or null, body binding x}
  CellAct,  // cell, ivars; kids {body under lock cell.src}. A transport
            // the kernel could not push further.
  Int,
  I0,
  I1,
  Meet,     // kids {l, r}
  Join,     // kids {l, r}
  Nat,
  Zero,
  Suc,      // kids {n}
  NatRec,   // kids {motive, zero case, step, n}
  Bool,
  True,
  False,
  BoolRec,  // kids {motive, true case, false case, b}
  Unit,
  Tt,
  Empty,
  Absurd,   // kids {motive type, e}
  Lift,     // kids {A}
  LiftIn,   // kids {e}
  Lower,    // kids {e}
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  Tag tag = Tag::Unit;
  std::uint32_t idx = 0;   // Var index, Global id, Univ level
  Word mod;
  Word mod2;
  TwoCell cell;            // Var, CellAct
  std::vector<TermPtr> ivars; // one Int term per p in cell.dst
  std::vector<TermPtr> kids;
  std::string name;        // binder name hint for printing
  std::string name2;
  std::vector<std::string> inames;
};

// ---- constructors ----
TermPtr mk(Tag tag, std::vector<TermPtr> kids = {});
TermPtr mk_var(std::uint32_t idx);
TermPtr mk_var(std::uint32_t idx, TwoCell cell, std::vector<TermPtr> ivars);
TermPtr mk_global(std::uint32_t gid, std::string name);
TermPtr mk_univ(std::uint32_t level);
TermPtr mk_pi(std::string name, Word mod, TermPtr dom, TermPtr cod);
TermPtr mk_lam(std::string name, Word mod, TermPtr body);
TermPtr mk_app(TermPtr f, TermPtr arg, Word mod = {});
TermPtr mk_sigma(std::string name, TermPtr dom, TermPtr cod);
TermPtr mk_modtype(Word mod, TermPtr a, std::vector<std::string> inames = {});
TermPtr mk_modintro(Word mod, TermPtr a, std::vector<std::string> inames = {});
TermPtr mk_letmod(Word nu, Word mu, std::string x, TermPtr scrut, std::string z, TermPtr motive,
                  TermPtr body);
TermPtr mk_cellact(TwoCell cell, std::vector<TermPtr> ivars, TermPtr body);
TermPtr mk_nat(std::uint64_t n);

/// What a kid lives under, relative to its parent.
struct KidScope {
  std::optional<Word> lock; // lock pushed before the kid; its p's bind variables
  bool binds_var = false;   // one ordinary variable after the lock
};
KidScope kid_scope(const Term &t, std::size_t i);
std::uint32_t kid_binds(const Term &t, std::size_t i);

/// Rebuilds every variable occurrence. `f(depth, var)` receives the variable
/// with its ivars already mapped; depth counts binders crossed so far.
using VarFn = std::function<TermPtr(std::uint32_t depth, const Term &var)>;
TermPtr map_vars(const TermPtr &t, const VarFn &f, std::uint32_t depth = 0);

/// Adds d to every index >= cutoff.
TermPtr shift(const TermPtr &t, std::int64_t d, std::uint32_t cutoff = 0);

/// True when some index >= cutoff occurs.
bool has_free(const TermPtr &t, std::uint32_t cutoff, std::uint32_t limit = UINT32_MAX);

/// Locks between a context variable and the end of the context in which a
/// transported term lives, with interval binders read transparently.
using LockProfile = std::function<Word(std::uint32_t index)>;

/// The 2-cell action. `u` lives in Psi/mu with m = count_p(mu) binders
/// innermost; alpha : mu => nu; `ivars` instantiate nu's p factors in the
/// target context Psi + d. Identity cells substitute binders; cells out of a
/// p-free mu are whiskered into every free variable's access cell; anything
/// else yields a CellAct node.
TermPtr transport(const TermPtr &u, const TwoCell &alpha, const std::vector<TermPtr> &ivars,
                  std::uint32_t d, const LockProfile &rho);

/// body lives in Psi, x where x :(mu) A; u lives in Psi/mu. Result in Psi.
TermPtr subst_top(const TermPtr &body, const TermPtr &u, const LockProfile &rho);

/// Replaces the innermost `values.size()` variables (last one innermost)
/// by plain terms living in the remaining context. Only identity-cell
/// occurrences are replaced; other occurrences yield nullopt.
std::optional<TermPtr> instantiate(const TermPtr &t, const std::vector<TermPtr> &values);

/// Removes variable `k` (0 = innermost) when unused.
std::optional<TermPtr> strengthen(const TermPtr &t, std::uint32_t k = 0);

/// Canonical text, used as a structural key (alpha invariant).
std::string serialize(const TermPtr &t);

/// Structural equality of canonical keys.
bool same_term(const TermPtr &a, const TermPtr &b);

/// Readable rendering; `names` lists context variable names outermost first.
std::string show(const TermPtr &t, std::vector<std::string> names,
                 const std::function<std::string(std::uint32_t)> &global_name);

} // namespace trikernel::core
