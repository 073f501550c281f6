#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trikernel/term.hpp"

namespace trikernel::core {

/// A telescope entry. A lock stores only its p-free segments; each p factor
/// of a pushed modality becomes an interval variable entry (`binder`), which
/// is how the context realizes the identification of a p-lock with an
/// interval hypothesis.
struct Entry {
  bool is_lock = false;
  std::string name;
  TermPtr type;   // lives in the prefix locked by `mod`
  Word mod;       // annotation
  TermPtr value;  // let-bound definitions
  bool binder = false;
  Word lock;      // is_lock only; p-free
};

class Context {
public:
  void push_var(std::string name, TermPtr type, Word mod = {}, TermPtr value = nullptr);
  /// Pushes the lock for `mu`; p factors become binders named from `names`.
  void push_lock(const Word &mu, const std::vector<std::string> &names = {});

  std::size_t mark() const { return entries_.size(); }
  void reset(std::size_t mark);

  std::uint32_t vars() const { return static_cast<std::uint32_t>(var_pos_.size()); }
  const Entry &var(std::uint32_t idx) const { return entries_[pos_of(idx)]; }
  std::size_t pos_of(std::uint32_t idx) const { return var_pos_[var_pos_.size() - 1 - idx]; }
  const std::vector<Entry> &entries() const { return entries_; }

  /// Innermost variable with this name.
  std::optional<std::uint32_t> lookup(const std::string &name) const;

  /// Composite of the lock segments strictly between two entry positions.
  Word locks_between(std::size_t from, std::size_t to) const;

  /// All locks and binders (read as p) right of variable idx.
  Word locks_after(std::uint32_t idx) const;

  /// Transparent lock words for the prefix that ends before entry `end`,
  /// indexed relative to that prefix.
  LockProfile profile(std::size_t end) const;
  LockProfile profile() const { return profile(entries_.size()); }

  std::vector<std::string> names() const;

private:
  std::vector<Entry> entries_;
  std::vector<std::size_t> var_pos_;
};

} // namespace trikernel::core
