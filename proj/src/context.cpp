#include "trikernel/context.hpp"

namespace trikernel::core {

void Context::push_var(std::string name, TermPtr type, Word mod, TermPtr value) {
  Entry e;
  e.name = std::move(name);
  e.type = std::move(type);
  e.mod = std::move(mod);
  e.value = std::move(value);
  var_pos_.push_back(entries_.size());
  entries_.push_back(std::move(e));
}

void Context::push_lock(const Word &mu, const std::vector<std::string> &names) {
  Word segment;
  std::size_t q = 0;
  auto flush = [&] {
    if (segment.empty())
      return;
    Entry e;
    e.is_lock = true;
    e.lock = modality::normalize(segment);
    entries_.push_back(std::move(e));
    segment = Word{};
  };
  for (auto g : modality::normalize(mu).gens) {
    if (g != modality::Gen::P) {
      segment.gens.push_back(g);
      continue;
    }
    flush();
    Entry e;
    e.name = q < names.size() ? names[q] : "i";
    e.type = mk(Tag::Int);
    e.binder = true;
    var_pos_.push_back(entries_.size());
    entries_.push_back(std::move(e));
    ++q;
  }
  flush();
}

void Context::reset(std::size_t mark) {
  entries_.resize(mark);
  while (!var_pos_.empty() && var_pos_.back() >= mark)
    var_pos_.pop_back();
}

std::optional<std::uint32_t> Context::lookup(const std::string &name) const {
  for (std::uint32_t i = 0; i < vars(); ++i)
    if (var(i).name == name)
      return i;
  return std::nullopt;
}

Word Context::locks_between(std::size_t from, std::size_t to) const {
  Word w;
  for (std::size_t p = from + 1; p < to && p < entries_.size(); ++p)
    if (entries_[p].is_lock)
      w = modality::concat(w, entries_[p].lock);
  return modality::normalize(w);
}

Word Context::locks_after(std::uint32_t idx) const {
  Word w;
  for (std::size_t p = pos_of(idx) + 1; p < entries_.size(); ++p) {
    if (entries_[p].is_lock)
      w = modality::concat(w, entries_[p].lock);
    else if (entries_[p].binder)
      w.gens.push_back(modality::Gen::P);
  }
  return modality::normalize(w);
}

LockProfile Context::profile(std::size_t end) const {
  // Variables of the prefix, innermost first.
  std::vector<std::size_t> positions;
  for (auto it = var_pos_.rbegin(); it != var_pos_.rend(); ++it)
    if (*it < end)
      positions.push_back(*it);
  return [this, end, positions](std::uint32_t k) -> Word {
    if (k >= positions.size())
      return Word{};
    return locks_between(positions[k], end);
  };
}

std::vector<std::string> Context::names() const {
  std::vector<std::string> out;
  for (std::size_t p : var_pos_)
    out.push_back(entries_[p].name);
  return out;
}

} // namespace trikernel::core
