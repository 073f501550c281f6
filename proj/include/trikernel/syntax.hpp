#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trikernel/diagnostic.hpp"
#include "trikernel/modality.hpp"

namespace trikernel::syntax {

enum class Kind {
  Var,      // name
  Num,      // num; an Int endpoint or a Nat, decided by checking
  Univ,     // num = level
  Pi,       // name, mod, kids {dom, cod}; name "_" when non-dependent
  Lam,      // name, mod/has_mod, kids {dom or null, body}
  App,      // kids {fun, arg}
  Sigma,    // name, kids {dom, cod}
  Pair,     // kids {fst, snd}
  Fst,      // kids {e}
  Snd,      // kids {e}
  Id,       // kids {lhs, rhs}
  Refl,     //
  J,        // kids {motive, base, path}
  ModType,  // mod, inames, kids {A}
  ModIntro, // mod, inames, kids {e}
  LetMod,   // mod2 = outer, mod = inner, name, name2 = motive binder,
            // kids {scrutinee, motive or null, body}
  CellAct,  // steps, kids {e}
  Coe,      // steps, kids {e}
  Inst,     // kids {e, point}
  Int,      //
  Meet,     // kids {l, r}
  Join,     // kids {l, r}
  Le,       // kids {l, r}
  Nat,      //
  Suc,      // kids {n}
  NatRec,   // kids {motive, zero, step, n}
  Bool,     //
  True,     //
  False,    //
  BoolRec,  // kids {motive, t, f, b}
  Unit,     //
  Tt,       //
  Empty,    //
  Absurd,   // kids {motive, e}
  Lift,     // kids {A}
  LiftIn,   // kids {e}
  Lower,    // kids {e}
  Let,      // name, kids {type or null, value, body}
  Ann,      // kids {e, type}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Kind kind = Kind::Var;
  Span span;
  std::string name;
  std::string name2;
  std::vector<std::string> inames;
  modality::Word mod;
  modality::Word mod2;
  bool has_mod = false;
  std::vector<modality::Step> steps;
  std::uint64_t num = 0;
  std::vector<ExprPtr> kids;
};

/// Structural equality ignoring spans.
bool same(const Expr &a, const Expr &b);
bool same(const ExprPtr &a, const ExprPtr &b);

struct Param {
  std::string name;
  ExprPtr type;
  modality::Word mod;
  Span span;
};

struct Decl {
  enum class Kind { Def, Axiom, Check, FailCheck } kind = Kind::Def;
  std::string name;
  Span name_span;
  std::vector<Param> params;
  ExprPtr type;
  ExprPtr body;       // Def only
  ExprPtr lhs, rhs;   // Check and FailCheck: `lhs : type` or `lhs == rhs : type`
  std::optional<Code> expect; // FailCheck only
  Span span;
  /// From `--@ key=value` pragma lines directly above the declaration.
  std::map<std::string, std::string> attrs;
};

struct Module {
  std::vector<Decl> decls;
};

struct ParseResult {
  std::optional<Module> module;
  std::vector<Error> errors; // E-PARSE, non-empty iff module is empty
};

/// Parses a whole `.ttt` file. Reports the first error; never returns a
/// partial module.
ParseResult parse_module(std::string_view text);

/// Parses one expression (tests and the CLI).
ParseResult parse_expr_only(std::string_view text, ExprPtr &out);

std::string print(const Expr &e);
std::string print(const Decl &d);
std::string print(const Module &m);

bool is_keyword(std::string_view s);

} // namespace trikernel::syntax
