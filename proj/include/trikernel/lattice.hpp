#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

// Free bounded distributive lattice over interned atoms.

namespace trikernel::lattice {

using Atom = std::uint32_t;

/// A meet of atoms: sorted, duplicate free. Empty means 1.
using Monomial = std::vector<Atom>;

/// A join of monomials kept as a sorted antichain. Empty means 0.
/// Structural equality coincides with equality in the free lattice.
struct Poly {
  std::vector<Monomial> monos;
  bool operator==(const Poly &) const = default;
  auto operator<=>(const Poly &) const = default;
};

Poly zero();
Poly one();
Poly atom(Atom a);
Poly meet(const Poly &p, const Poly &q);
Poly join(const Poly &p, const Poly &q);

bool is_zero(const Poly &p);
bool is_one(const Poly &p);
std::vector<Atom> atoms_of(const Poly &p);

struct Expr {
  enum class Kind { Atom, Zero, One, Meet, Join } kind = Kind::Zero;
  Atom atom = 0;
  std::shared_ptr<const Expr> lhs, rhs;

  static std::shared_ptr<const Expr> mk_atom(Atom a);
  static std::shared_ptr<const Expr> mk_zero();
  static std::shared_ptr<const Expr> mk_one();
  static std::shared_ptr<const Expr> mk_meet(std::shared_ptr<const Expr> a,
                                             std::shared_ptr<const Expr> b);
  static std::shared_ptr<const Expr> mk_join(std::shared_ptr<const Expr> a,
                                             std::shared_ptr<const Expr> b);
};
using ExprPtr = std::shared_ptr<const Expr>;

Poly canon(const Expr &e);

bool eq(const Poly &p, const Poly &q);
/// p <= q iff p /\ q = p.
bool leq(const Poly &p, const Poly &q);

inline constexpr std::size_t kOracleAtomBudget = 20;

/// Truth-table comparison over every Boolean assignment of the atoms that
/// occur in p or q. Throws Error(E-LATTICE-SIZE) past the atom budget.
bool oracle_eq(const Poly &p, const Poly &q);
bool oracle_eq(const Expr &p, const Expr &q);

/// Evaluates under an assignment given as a predicate on atoms.
template <class F> bool evaluate(const Poly &p, F &&value) {
  for (const Monomial &m : p.monos) {
    bool all = true;
    for (Atom a : m)
      if (!value(a)) {
        all = false;
        break;
      }
    if (all)
      return true;
  }
  return false;
}
bool evaluate(const Expr &e, const std::unordered_map<Atom, bool> &env);

/// p[x := q]
Poly subst(const Poly &p, Atom x, const Poly &q);

/// (p[x:=0], p[x:=1]); always p0 <= p1 and p = p0 \/ (x /\ p1).
std::pair<Poly, Poly> phoa_endpoints(const Poly &p, Atom x);

/// Swaps meet with join and 0 with 1.
Poly dualize(const Poly &p);

inline constexpr unsigned kMaxCountAtoms = 5;

/// Number of canonical forms over n atoms. Throws E-LATTICE-SIZE for n > 5.
std::uint64_t count_free(unsigned n);

inline constexpr unsigned kMaxPresentationGens = 4;

/// Int[x_0..x_{n-1}] / (lhs_k = rhs_k); generators are atoms 0..n-1.
struct Presentation {
  unsigned generators = 0;
  std::vector<std::pair<Poly, Poly>> relations;
};

/// Homomorphisms into Int that are determined by Boolean tuples: every
/// tuple of constants satisfying all relations. Throws E-LATTICE-SIZE past
/// four generators.
std::vector<std::vector<Poly>> fp_algebra_homs(const Presentation &pres);

/// Interns atom names for the textual interface.
class AtomTable {
public:
  Atom intern(std::string_view name);
  std::optional<Atom> find(std::string_view name) const;
  const std::string &name(Atom a) const { return names_.at(a); }
  std::size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Atom> ids_;
};

/// Grammar: expr := term (`\/` term)*, term := factor (`/\` factor)*,
/// factor := `0` | `1` | ident | `(` expr `)`. UTF-8 wedge and vee accepted.
/// Throws Error(E-PARSE) with the failing byte offset.
ExprPtr parse_expr(std::string_view text, AtomTable &atoms);

std::string to_string(const Poly &p, const AtomTable &atoms);
std::string to_string(const Expr &e, const AtomTable &atoms);

} // namespace trikernel::lattice
