#include "trikernel/checker.hpp"

namespace trikernel {

using core::Context;
using core::Global;
using core::TermPtr;
using syntax::Decl;

Checker::Checker(int search_depth) : kernel_(globals_, search_depth) {}

void collect_globals(const TermPtr &t, std::set<std::uint32_t> &out) {
  if (!t)
    return;
  if (t->tag == core::Tag::Global)
    out.insert(t->idx);
  for (auto &iv : t->ivars)
    collect_globals(iv, out);
  for (auto &k : t->kids)
    collect_globals(k, out);
}

void Checker::check_decl(const std::string &file, const Decl &d) {
  Context ctx;
  switch (d.kind) {
  case Decl::Kind::Axiom: {
    TermPtr type = kernel_.check_type(ctx, core::pi_over(d.params, d.type)).first;
    globals_.add(Global{d.name, type, nullptr, d.attrs, file, d.span});
    return;
  }
  case Decl::Kind::Def: {
    TermPtr type = kernel_.check_type(ctx, core::pi_over(d.params, d.type)).first;
    try {
      TermPtr value = kernel_.check(ctx, core::lam_over(d.params, d.body), type);
      globals_.add(Global{d.name, type, value, d.attrs, file, d.span});
    } catch (const Error &) {
      // Keep the name usable so one bad body does not cascade.
      globals_.add(Global{d.name, type, nullptr, d.attrs, file, d.span});
      throw;
    }
    return;
  }
  case Decl::Kind::Check:
  case Decl::Kind::FailCheck: {
    TermPtr type = kernel_.check_type(ctx, d.type).first;
    TermPtr lhs = kernel_.check(ctx, d.lhs, type);
    if (!d.rhs)
      return;
    TermPtr rhs = kernel_.check(ctx, d.rhs, type);
    if (!kernel_.conv(ctx, lhs, rhs)) {
      Error err(Code::Conv, "the two sides are not definitionally equal", d.rhs->span);
      err.expected = kernel_.show(ctx, kernel_.nf(ctx, lhs));
      err.actual = kernel_.show(ctx, kernel_.nf(ctx, rhs));
      throw err;
    }
    return;
  }
  }
}

std::vector<Diagnostic> Checker::check_source(const std::string &file, std::string_view text) {
  LineIndex lines(text);
  std::vector<Diagnostic> out;
  syntax::ParseResult parsed = syntax::parse_module(text);
  if (!parsed.module) {
    for (const Error &e : parsed.errors)
      out.push_back(make_diagnostic(file, lines, e));
    sort_diagnostics(out);
    return out;
  }
  for (const Decl &d : parsed.module->decls) {
    try {
      check_decl(file, d);
      if (d.kind == Decl::Kind::FailCheck) {
        Error e(*d.expect,
                "expected " + std::string(code_name(*d.expect)) + " but the check succeeded",
                d.span);
        out.push_back(make_diagnostic(file, lines, e));
      }
    } catch (const Error &e) {
      if (d.kind == Decl::Kind::FailCheck && e.code == *d.expect)
        continue;
      out.push_back(make_diagnostic(file, lines, e));
    }
  }
  sort_diagnostics(out);
  return out;
}

} // namespace trikernel
