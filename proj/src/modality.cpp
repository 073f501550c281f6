#include "trikernel/modality.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "trikernel/diagnostic.hpp"

namespace trikernel::modality {

char gen_char(Gen g) {
  switch (g) {
  case Gen::G: return 'g';
  case Gen::S: return 's';
  case Gen::O: return 'o';
  case Gen::P: return 'p';
  case Gen::A: return 'a';
  }
  return '?';
}

Word concat(const Word &a, const Word &b) {
  Word r = a;
  r.gens.insert(r.gens.end(), b.gens.begin(), b.gens.end());
  return r;
}

namespace {

enum class Rule { None, KeepLeft, Cancel };

// Every rule has a length-two left side whose right side is either its first
// letter or empty, so a single left-to-right stack pass reaches the normal form.
Rule rule_for(Gen x, Gen y) {
  if (x == Gen::G && (y == Gen::G || y == Gen::O || y == Gen::A))
    return Rule::KeepLeft;
  if (x == Gen::S && (y == Gen::G || y == Gen::S || y == Gen::O || y == Gen::A))
    return Rule::KeepLeft;
  if (x == Gen::O && y == Gen::O)
    return Rule::Cancel;
  return Rule::None;
}

} // namespace

Word normalize(const Word &w) {
  std::vector<Gen> out;
  out.reserve(w.gens.size());
  for (Gen g : w.gens) {
    if (out.empty()) {
      out.push_back(g);
      continue;
    }
    switch (rule_for(out.back(), g)) {
    case Rule::None: out.push_back(g); break;
    case Rule::KeepLeft: break;
    case Rule::Cancel: out.pop_back(); break;
    }
  }
  return Word(std::move(out));
}

Word compose(const Word &outer, const Word &inner) { return normalize(concat(outer, inner)); }

std::optional<Word> rewrite_at(const Word &w, std::size_t pos) {
  if (pos + 1 >= w.size())
    return std::nullopt;
  Rule r = rule_for(w.gens[pos], w.gens[pos + 1]);
  if (r == Rule::None)
    return std::nullopt;
  Word out = w;
  auto it = out.gens.begin() + static_cast<std::ptrdiff_t>(pos);
  if (r == Rule::KeepLeft)
    out.gens.erase(it + 1);
  else
    out.gens.erase(it, it + 2);
  return out;
}

std::size_t count_p(const Word &w) {
  return static_cast<std::size_t>(std::count(w.gens.begin(), w.gens.end(), Gen::P));
}

std::optional<Word> parse_word(std::string_view text) {
  Word w;
  bool saw_identity = false;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
      ++i;
  };
  bool expect_gen = true;
  skip_ws();
  if (i == text.size())
    return std::nullopt;
  while (i < text.size()) {
    skip_ws();
    if (i == text.size())
      break;
    if (expect_gen) {
      if (text.substr(i, 2) == "id") {
        saw_identity = true;
        i += 2;
      } else {
        switch (text[i]) {
        case 'g': w.gens.push_back(Gen::G); break;
        case 's': w.gens.push_back(Gen::S); break;
        case 'o': w.gens.push_back(Gen::O); break;
        case 'p': w.gens.push_back(Gen::P); break;
        case 'a': w.gens.push_back(Gen::A); break;
        case '1': saw_identity = true; break;
        default: return std::nullopt;
        }
        ++i;
      }
      expect_gen = false;
    } else {
      if (text[i] == '.') {
        i += 1;
      } else if (text.substr(i, 3) == "\xE2\x88\x98") {
        i += 3;
      } else {
        return std::nullopt;
      }
      expect_gen = true;
    }
  }
  if (expect_gen)
    return std::nullopt;
  (void)saw_identity;
  return w;
}

std::string to_string(const Word &w) {
  if (w.empty())
    return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i)
      s += '.';
    s += gen_char(w.gens[i]);
  }
  return s;
}

Word cell_src(Cell c) {
  switch (c) {
  case Cell::EpsGS: return Word{Gen::G, Gen::S};
  case Cell::EtaGS: return Word{};
  case Cell::EpsPA: return Word{Gen::P, Gen::A};
  case Cell::EtaPA: return Word{};
  case Cell::Eps0: return Word{Gen::G};
  }
  return {};
}

Word cell_dst(Cell c) {
  switch (c) {
  case Cell::EpsGS: return Word{};
  case Cell::EtaGS: return Word{Gen::S, Gen::G};
  case Cell::EpsPA: return Word{};
  case Cell::EtaPA: return Word{Gen::A, Gen::P};
  case Cell::Eps0: return Word{};
  }
  return {};
}

std::string_view cell_name(Cell c) {
  switch (c) {
  case Cell::EpsGS: return "eps_gs";
  case Cell::EtaGS: return "eta_gs";
  case Cell::EpsPA: return "eps_pa";
  case Cell::EtaPA: return "eta_pa";
  case Cell::Eps0: return "eps0";
  }
  return "?";
}

std::optional<Cell> parse_cell_name(std::string_view s) {
  for (Cell c : kAllCells)
    if (cell_name(c) == s)
      return c;
  return std::nullopt;
}

Word Step::src() const { return normalize(concat(concat(left, cell_src(cell)), right)); }
Word Step::dst() const { return normalize(concat(concat(left, cell_dst(cell)), right)); }

TwoCell identity(const Word &w) {
  Word n = normalize(w);
  return TwoCell{n, n, {}};
}

TwoCell generator(Cell c) {
  return TwoCell{normalize(cell_src(c)), normalize(cell_dst(c)), {Step{{}, c, {}}}};
}

void validate(const TwoCell &c) {
  if (c.src != normalize(c.src) || c.dst != normalize(c.dst))
    throw Error(Code::CellBoundary, "2-cell boundary is not in normal form");
  Word cur = c.src;
  for (const Step &s : c.steps) {
    Word from = s.src();
    if (from != cur)
      throw Error(Code::CellBoundary, "2-cell step expects " + to_string(from) +
                                          " but receives " + to_string(cur));
    cur = s.dst();
  }
  if (cur != c.dst)
    throw Error(Code::CellBoundary,
                "2-cell ends at " + to_string(cur) + ", declared " + to_string(c.dst));
}

bool is_valid(const TwoCell &c) {
  try {
    validate(c);
    return true;
  } catch (const Error &) {
    return false;
  }
}

TwoCell vcomp(const TwoCell &c1, const TwoCell &c2) {
  if (normalize(c1.dst) != normalize(c2.src))
    throw Error(Code::CellBoundary, "cannot paste " + to_string(c1.src) + " => " +
                                        to_string(c1.dst) + " with " + to_string(c2.src) +
                                        " => " + to_string(c2.dst));
  TwoCell r{normalize(c1.src), normalize(c2.dst), c1.steps};
  r.steps.insert(r.steps.end(), c2.steps.begin(), c2.steps.end());
  return r;
}

TwoCell whisker(const Word &left, const TwoCell &c, const Word &right) {
  TwoCell r;
  r.src = normalize(concat(concat(left, c.src), right));
  r.dst = normalize(concat(concat(left, c.dst), right));
  for (const Step &s : c.steps)
    r.steps.push_back(Step{normalize(concat(left, s.left)), s.cell,
                           normalize(concat(s.right, right))});
  return r;
}

TwoCell whisker(const Word &w, const TwoCell &c, Side side) {
  return side == Side::Left ? whisker(w, c, Word{}) : whisker(Word{}, c, w);
}

namespace {

bool ends_with(const Word &w, Gen g) { return !w.empty() && w.gens.back() == g; }
bool starts_with(const Word &w, Gen g) { return !w.empty() && w.gens.front() == g; }

Word one(Gen g) { return Word{g}; }

// Unit step s1 followed by counit step s2 forming a triangle identity of the
// adjunction (l -| r) with eps : l.r => id and eta : id => r.l.
bool cancels(const Step &s1, const Step &s2, Cell eta, Cell eps, Gen l, Gen r) {
  if (s1.cell != eta || s2.cell != eps)
    return false;
  // (eps * l) . (l * eta) = id_l
  if (normalize(concat(s2.left, one(l))) == s1.left &&
      normalize(concat(one(l), s1.right)) == s2.right)
    return true;
  // (r * eps) . (eta * r) = id_r
  if (normalize(concat(s1.left, one(r))) == s2.left &&
      normalize(concat(one(r), s2.right)) == s1.right)
    return true;
  return false;
}

bool is_trivial_join(const Step &s) {
  // g * eta * s is the cojoin of g.s; s * eps * g is the join of s.g.
  if (s.cell == Cell::EtaGS)
    return ends_with(s.left, Gen::G) && starts_with(s.right, Gen::S);
  if (s.cell == Cell::EpsGS)
    return ends_with(s.left, Gen::S) && starts_with(s.right, Gen::G);
  return false;
}

} // namespace

TwoCell cell_normalize(const TwoCell &c) {
  TwoCell r{normalize(c.src), normalize(c.dst), {}};
  for (const Step &s : c.steps)
    r.steps.push_back(Step{normalize(s.left), s.cell, normalize(s.right)});
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      if (is_trivial_join(r.steps[i])) {
        r.steps.erase(r.steps.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (i + 1 < r.steps.size()) {
        const Step &a = r.steps[i];
        const Step &b = r.steps[i + 1];
        if (cancels(a, b, Cell::EtaGS, Cell::EpsGS, Gen::G, Gen::S) ||
            cancels(a, b, Cell::EtaPA, Cell::EpsPA, Gen::P, Gen::A)) {
          auto it = r.steps.begin() + static_cast<std::ptrdiff_t>(i);
          r.steps.erase(it, it + 2);
          changed = true;
          break;
        }
      }
    }
  }
  return r;
}

namespace {

bool no_pa(const Word &w) {
  for (Gen x : w.gens)
    if (x == Gen::P || x == Gen::A)
      return false;
  return true;
}

bool in_thin_fragment(const TwoCell &c) {
  if (!no_pa(c.src) || !no_pa(c.dst))
    return false;
  for (const Step &s : c.steps)
    if (s.cell == Cell::EpsPA || s.cell == Cell::EtaPA || !no_pa(s.left) || !no_pa(s.right))
      return false;
  return true;
}

} // namespace

bool cell_eq(const TwoCell &a, const TwoCell &b) {
  if (normalize(a.src) != normalize(b.src) || normalize(a.dst) != normalize(b.dst))
    throw Error(Code::CellBoundary, "cell_eq on cells with different boundaries");
  if (in_thin_fragment(a) && in_thin_fragment(b))
    return true;
  return cell_normalize(a).steps == cell_normalize(b).steps;
}

namespace {

// Raw words equal to `w` after one inverse rewrite; counits may straddle the
// reintroduced letters.
std::vector<Word> expansions(const Word &w) {
  std::vector<Word> out{w};
  for (std::size_t i = 0; i < w.size(); ++i) {
    Gen x = w.gens[i];
    std::vector<Gen> extra;
    if (x == Gen::G)
      extra = {Gen::G, Gen::O, Gen::A};
    else if (x == Gen::S)
      extra = {Gen::G, Gen::S, Gen::O, Gen::A};
    for (Gen y : extra) {
      Word e = w;
      e.gens.insert(e.gens.begin() + static_cast<std::ptrdiff_t>(i) + 1, y);
      out.push_back(std::move(e));
    }
  }
  for (std::size_t i = 0; i <= w.size(); ++i) {
    Word e = w;
    e.gens.insert(e.gens.begin() + static_cast<std::ptrdiff_t>(i), {Gen::O, Gen::O});
    out.push_back(std::move(e));
  }
  return out;
}

Word slice(const Word &w, std::size_t from, std::size_t to) {
  return Word(std::vector<Gen>(w.gens.begin() + static_cast<std::ptrdiff_t>(from),
                               w.gens.begin() + static_cast<std::ptrdiff_t>(to)));
}

// Every single whiskered generator step leaving `w`.
std::vector<Step> moves(const Word &w) {
  std::vector<Step> out;
  std::set<std::tuple<Word, Cell, Word>> seen;
  auto add = [&](Word l, Cell c, Word r) {
    l = normalize(l);
    r = normalize(r);
    if (seen.insert({l, c, r}).second)
      out.push_back(Step{std::move(l), c, std::move(r)});
  };
  for (const Word &e : expansions(w)) {
    for (std::size_t k = 0; k <= e.size(); ++k) {
      for (Cell c : kAllCells) {
        Word src = cell_src(c);
        if (k + src.size() > e.size())
          continue;
        if (!std::equal(src.gens.begin(), src.gens.end(),
                        e.gens.begin() + static_cast<std::ptrdiff_t>(k)))
          continue;
        add(slice(e, 0, k), c, slice(e, k + src.size(), e.size()));
      }
    }
  }
  return out;
}

using SearchKey = std::tuple<Word, Word, int>;

} // namespace

std::optional<TwoCell> cell_search(const Word &src0, const Word &dst0, int depth) {
  Word src = normalize(src0);
  Word dst = normalize(dst0);
  if (src == dst)
    return identity(src);
  if (depth < 1)
    return std::nullopt;

  thread_local std::map<SearchKey, std::optional<TwoCell>> cache;
  SearchKey key{src, dst, depth};
  if (auto it = cache.find(key); it != cache.end())
    return it->second;

  // Intermediate words longer than this bound are pruned; the bound keeps the
  // frontier finite since unit cells grow words without limit.
  const std::size_t max_len = std::max(src.size(), dst.size()) + 4;

  struct Node {
    Word word;
    int parent;
    Step via;
  };
  std::vector<Node> nodes{{src, -1, Step{}}};
  std::map<Word, int> seen{{src, 0}};
  std::deque<std::pair<int, int>> queue{{0, 0}};
  std::optional<TwoCell> found;
  while (!queue.empty() && !found) {
    auto [idx, d] = queue.front();
    queue.pop_front();
    if (d == depth)
      continue;
    Word here = nodes[static_cast<std::size_t>(idx)].word;
    for (Step &s : moves(here)) {
      Word next = s.dst();
      if (next.size() > max_len || seen.count(next))
        continue;
      int id = static_cast<int>(nodes.size());
      nodes.push_back(Node{next, idx, s});
      seen.emplace(next, id);
      if (next == dst) {
        TwoCell c{src, dst, {}};
        for (int n = id; nodes[static_cast<std::size_t>(n)].parent >= 0;
             n = nodes[static_cast<std::size_t>(n)].parent)
          c.steps.push_back(nodes[static_cast<std::size_t>(n)].via);
        std::reverse(c.steps.begin(), c.steps.end());
        found = c;
        break;
      }
      queue.emplace_back(id, d + 1);
    }
  }
  cache.emplace(key, found);
  return found;
}

std::vector<std::optional<std::size_t>> p_map(const TwoCell &c) {
  std::size_t n = count_p(c.src);
  std::vector<std::optional<std::size_t>> map(n);
  for (std::size_t i = 0; i < n; ++i)
    map[i] = i;
  for (const Step &s : c.steps) {
    std::size_t before = count_p(s.left);
    for (auto &m : map) {
      if (!m)
        continue;
      if (s.cell == Cell::EpsPA) {
        if (*m == before)
          m.reset();
        else if (*m > before)
          --*m;
      } else if (s.cell == Cell::EtaPA) {
        if (*m >= before)
          ++*m;
      }
    }
  }
  return map;
}

std::string steps_to_string(const std::vector<Step> &steps) {
  if (steps.empty())
    return "id";
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i)
      out += " ; ";
    const Step &s = steps[i];
    if (!s.left.empty())
      out += to_string(s.left) + " * ";
    out += cell_name(s.cell);
    if (!s.right.empty())
      out += " * " + to_string(s.right);
  }
  return out;
}

std::string to_string(const TwoCell &c) {
  return steps_to_string(c.steps) + " : " + to_string(c.src) + " => " + to_string(c.dst);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

} // namespace

std::optional<std::vector<Step>> parse_steps(std::string_view text) {
  text = trim(text);
  if (text == "id")
    return std::vector<Step>{};
  std::vector<Step> steps;
  for (std::string_view part : split(text, ';')) {
    auto pieces = split(part, '*');
    Step s{};
    std::optional<Cell> cell;
    if (pieces.size() == 1) {
      cell = parse_cell_name(pieces[0]);
    } else if (pieces.size() == 2) {
      // Either `w * name` or `name * w`.
      if ((cell = parse_cell_name(pieces[1]))) {
        auto l = parse_word(pieces[0]);
        if (!l)
          return std::nullopt;
        s.left = *l;
      } else if ((cell = parse_cell_name(pieces[0]))) {
        auto r = parse_word(pieces[1]);
        if (!r)
          return std::nullopt;
        s.right = *r;
      }
    } else if (pieces.size() == 3) {
      cell = parse_cell_name(pieces[1]);
      auto l = parse_word(pieces[0]);
      auto r = parse_word(pieces[2]);
      if (!l || !r)
        return std::nullopt;
      s.left = *l;
      s.right = *r;
    }
    if (!cell)
      return std::nullopt;
    s.cell = *cell;
    s.left = normalize(s.left);
    s.right = normalize(s.right);
    steps.push_back(s);
  }
  return steps;
}

TwoCell from_steps(const std::vector<Step> &steps, const Word &src) {
  if (steps.empty())
    return identity(src);
  TwoCell c{steps.front().src(), steps.back().dst(), steps};
  validate(c);
  return c;
}

} // namespace trikernel::modality
