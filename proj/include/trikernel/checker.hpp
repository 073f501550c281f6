#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trikernel/diagnostic.hpp"
#include "trikernel/kernel.hpp"

namespace trikernel {

/// Checks modules declaration by declaration into one growing scope of
/// globals. A later declaration with an existing name shadows it.
class Checker {
public:
  explicit Checker(int search_depth = modality::kDefaultSearchDepth);
  Checker(const Checker &) = delete;
  Checker &operator=(const Checker &) = delete;

  /// Parses and checks `text`, adding its declarations to the scope. Every
  /// failing declaration contributes its first diagnostic. A def whose type
  /// checked but whose body did not stays in scope as an axiom.
  std::vector<Diagnostic> check_source(const std::string &file, std::string_view text);

  const core::Globals &globals() const { return globals_; }
  core::Kernel &kernel() { return kernel_; }

  /// Global ids referenced since the last reset.
  const std::set<std::uint32_t> &used() const { return kernel_.used(); }
  void reset_used() { kernel_.reset_used(); }

private:
  core::Globals globals_;
  core::Kernel kernel_;

  void check_decl(const std::string &file, const syntax::Decl &d);
};

/// Global ids mentioned anywhere in a core term.
void collect_globals(const core::TermPtr &t, std::set<std::uint32_t> &out);

} // namespace trikernel
