#include <sstream>

#include "trikernel/syntax.hpp"

namespace trikernel::syntax {

namespace {

// Precedence levels, loosest first. A child printed below its context's
// level is parenthesized.
enum Level { Top = 0, Prod = 1, Eqn = 2, JoinL = 3, MeetL = 4, InstL = 5, AppL = 6, Post = 7 };

std::string word(const modality::Word &w, const std::vector<std::string> &names) {
  std::string s = modality::to_string(w);
  if (!names.empty()) {
    s += " ;";
    for (std::size_t i = 0; i < names.size(); ++i)
      s += (i ? ", " : " ") + names[i];
  }
  return s;
}

std::string cell(const std::vector<modality::Step> &steps) {
  return steps.empty() ? "id" : modality::steps_to_string(steps);
}

Level level_of(const Expr &e) {
  switch (e.kind) {
  case Kind::Pi:
  case Kind::Lam:
  case Kind::Let:
  case Kind::LetMod:
    return Top;
  case Kind::Sigma:
    return e.name == "_" ? Prod : Top;
  case Kind::Id:
  case Kind::Le:
    return Eqn;
  case Kind::Join:
    return JoinL;
  case Kind::Meet:
    return MeetL;
  case Kind::Inst:
    return InstL;
  case Kind::App:
  case Kind::Suc:
  case Kind::Lift:
  case Kind::LiftIn:
  case Kind::Lower:
  case Kind::Univ:
    return AppL;
  default:
    return Post;
  }
}

class Printer {
public:
  std::string out(const Expr &e, Level ctx) {
    std::string s = raw(e);
    // Arguments of an application are parsed at postfix level, so prefix
    // forms need parentheses there too.
    if (level_of(e) < ctx)
      return "(" + s + ")";
    return s;
  }

private:
  std::string kid(const Expr &e, std::size_t i, Level ctx) { return out(*e.kids[i], ctx); }

  std::string raw(const Expr &e) {
    switch (e.kind) {
    case Kind::Var:
      return e.name;
    case Kind::Num:
      return std::to_string(e.num);
    case Kind::Univ:
      return "U " + std::to_string(e.num);
    case Kind::Pi: {
      if (e.name == "_" && e.mod.gens.empty())
        return kid(e, 0, Prod) + " -> " + kid(e, 1, Top);
      std::string b = "(" + e.name + " : " + kid(e, 0, Top);
      if (!e.mod.gens.empty())
        b += " @ " + modality::to_string(e.mod);
      return b + ") -> " + kid(e, 1, Top);
    }
    case Kind::Sigma:
      if (e.name == "_")
        return kid(e, 0, Eqn) + " * " + kid(e, 1, Prod);
      return "(" + e.name + " : " + kid(e, 0, Top) + ") * " + kid(e, 1, Top);
    case Kind::Lam: {
      std::string b;
      if (!e.kids[0]) {
        b = e.name;
      } else {
        b = "(" + e.name + " : " + kid(e, 0, Top);
        if (e.has_mod)
          b += " @ " + modality::to_string(e.mod);
        b += ")";
      }
      return "fun " + b + " => " + kid(e, 1, Top);
    }
    case Kind::App:
      return kid(e, 0, AppL) + " " + kid(e, 1, Post);
    case Kind::Pair:
      return "(" + kid(e, 0, Top) + ", " + kid(e, 1, Top) + ")";
    case Kind::Fst:
      return kid(e, 0, Post) + ".1";
    case Kind::Snd:
      return kid(e, 0, Post) + ".2";
    case Kind::Id:
      return kid(e, 0, JoinL) + " = " + kid(e, 1, JoinL);
    case Kind::Le:
      return kid(e, 0, JoinL) + " <= " + kid(e, 1, JoinL);
    case Kind::Refl:
      return "refl";
    case Kind::J:
      return "J(" + args(e) + ")";
    case Kind::ModType:
      return "<" + word(e.mod, e.inames) + "| " + kid(e, 0, Top) + ">";
    case Kind::ModIntro:
      return "mod{" + word(e.mod, e.inames) + "}(" + kid(e, 0, Top) + ")";
    case Kind::LetMod: {
      std::string s = "let";
      if (!e.mod2.gens.empty())
        s += "{" + modality::to_string(e.mod2) + "}";
      s += " mod{" + modality::to_string(e.mod) + "}(" + e.name + ") = " + kid(e, 0, Prod);
      if (e.kids[1])
        s += " return " + e.name2 + ". " + kid(e, 1, Top);
      return s + " in " + kid(e, 2, Top);
    }
    case Kind::CellAct:
      return kid(e, 0, Post) + " ^{" + cell(e.steps) + "}";
    case Kind::Coe:
      return "coe{" + cell(e.steps) + "}(" + kid(e, 0, Top) + ")";
    case Kind::Inst:
      return kid(e, 0, InstL) + " # " + kid(e, 1, AppL);
    case Kind::Int:
      return "Int";
    case Kind::Meet:
      return kid(e, 0, MeetL) + " /\\ " + kid(e, 1, InstL);
    case Kind::Join:
      return kid(e, 0, JoinL) + " \\/ " + kid(e, 1, MeetL);
    case Kind::Nat:
      return "Nat";
    case Kind::Suc:
      return "suc " + kid(e, 0, Post);
    case Kind::NatRec:
      return "natrec(" + args(e) + ")";
    case Kind::Bool:
      return "Bool";
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::BoolRec:
      return "boolrec(" + args(e) + ")";
    case Kind::Unit:
      return "Unit";
    case Kind::Tt:
      return "tt";
    case Kind::Empty:
      return "Empty";
    case Kind::Absurd:
      return "absurd(" + args(e) + ")";
    case Kind::Lift:
      return "Lift " + kid(e, 0, Post);
    case Kind::LiftIn:
      return "lift " + kid(e, 0, Post);
    case Kind::Lower:
      return "lower " + kid(e, 0, Post);
    case Kind::Let: {
      std::string s = "let " + e.name;
      if (e.kids[0])
        s += " : " + kid(e, 0, Top);
      return s + " := " + kid(e, 1, Top) + " in " + kid(e, 2, Top);
    }
    case Kind::Ann: {
      // `(x : A)` and `(x y : A)` would read back as binder groups.
      const Expr &k = *e.kids[0];
      std::string lhs = kid(e, 0, Top);
      if (k.kind == Kind::Var || k.kind == Kind::App)
        lhs = "(" + lhs + ")";
      return "(" + lhs + " : " + kid(e, 1, Top) + ")";
    }
    }
    return "?";
  }

  std::string args(const Expr &e) {
    std::string s;
    for (std::size_t i = 0; i < e.kids.size(); ++i)
      s += (i ? ", " : "") + kid(e, i, Top);
    return s;
  }
};

std::string params(const std::vector<Param> &ps) {
  std::string s;
  Printer p;
  for (const Param &q : ps) {
    s += " (" + q.name + " : " + p.out(*q.type, Top);
    if (!q.mod.gens.empty())
      s += " @ " + modality::to_string(q.mod);
    s += ")";
  }
  return s;
}

} // namespace

std::string print(const Expr &e) { return Printer{}.out(e, Top); }

std::string print(const Decl &d) {
  std::string s;
  for (const auto &[k, v] : d.attrs)
    s += "--@ " + k + (v.empty() ? "" : "=" + v) + "\n";
  switch (d.kind) {
  case Decl::Kind::Def:
    return s + "def " + d.name + params(d.params) + " : " + print(*d.type) + " :=\n  " +
           print(*d.body);
  case Decl::Kind::Axiom:
    return s + "axiom " + d.name + params(d.params) + " : " + print(*d.type);
  case Decl::Kind::Check:
  case Decl::Kind::FailCheck: {
    s += d.kind == Decl::Kind::Check ? std::string("check ")
                                     : "fail-check " + std::string(code_name(*d.expect)) + " ";
    s += print(*d.lhs);
    if (d.rhs)
      s += " == " + print(*d.rhs);
    return s + " : " + print(*d.type);
  }
  }
  return s;
}

std::string print(const Module &m) {
  std::ostringstream os;
  for (const Decl &d : m.decls)
    os << print(d) << "\n\n";
  return os.str();
}

} // namespace trikernel::syntax
