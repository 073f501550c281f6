#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trikernel::modality {

enum class Gen : std::uint8_t { G, S, O, P, A };

inline constexpr Gen kAllGens[] = {Gen::G, Gen::S, Gen::O, Gen::P, Gen::A};

char gen_char(Gen g);

/// A composite of generators, outermost first: nu o mu stores nu before mu.
/// The empty word is the identity modality.
struct Word {
  std::vector<Gen> gens;

  Word() = default;
  Word(std::initializer_list<Gen> gs) : gens(gs) {}
  explicit Word(std::vector<Gen> gs) : gens(std::move(gs)) {}

  bool empty() const { return gens.empty(); }
  std::size_t size() const { return gens.size(); }
  bool operator==(const Word &) const = default;
  auto operator<=>(const Word &) const = default;
};

Word concat(const Word &a, const Word &b);

/// Unique normal form under the completed rewrite system
///   gg->g  go->g  ga->g  sg->s  ss->s  so->s  sa->s  oo->id.
/// The last two s-rules are critical-pair completions of the defining set.
Word normalize(const Word &w);
Word compose(const Word &outer, const Word &inner);

/// One rewrite of `w` at position `pos`, if a rule applies there.
std::optional<Word> rewrite_at(const Word &w, std::size_t pos);

std::size_t count_p(const Word &w);

/// Accepts generators `g s o p a`, separators `.` or the UTF-8 composition
/// sign, and `1` or `id` for the identity.
std::optional<Word> parse_word(std::string_view text);
std::string to_string(const Word &w);

enum class Cell : std::uint8_t {
  EpsGS, // g o s => id
  EtaGS, // id => s o g
  EpsPA, // p o a => id
  EtaPA, // id => a o p
  Eps0,  // g => id
};

inline constexpr Cell kAllCells[] = {Cell::EpsGS, Cell::EtaGS, Cell::EpsPA, Cell::EtaPA,
                                     Cell::Eps0};

Word cell_src(Cell c);
Word cell_dst(Cell c);
std::string_view cell_name(Cell c);
std::optional<Cell> parse_cell_name(std::string_view s);

/// A generating cell whiskered on both sides.
struct Step {
  Word left;
  Cell cell;
  Word right;
  bool operator==(const Step &) const = default;

  Word src() const;
  Word dst() const;
};

/// A vertical pasting of whiskered generators. `src` and `dst` are normalized.
struct TwoCell {
  Word src;
  Word dst;
  std::vector<Step> steps;
  bool operator==(const TwoCell &) const = default;

  bool is_identity() const { return steps.empty(); }
};

TwoCell identity(const Word &w);
TwoCell generator(Cell c);

/// Throws Error(E-2CELL-BOUNDARY) when the chain does not line up.
void validate(const TwoCell &c);
bool is_valid(const TwoCell &c);

/// Diagrammatic order: first c1, then c2.
TwoCell vcomp(const TwoCell &c1, const TwoCell &c2);

enum class Side { Left, Right };
TwoCell whisker(const Word &w, const TwoCell &c, Side side);
/// left * c * right
TwoCell whisker(const Word &left, const TwoCell &c, const Word &right);

/// Rewrites with the triangle identities of both adjunctions and the
/// (co)join identities of the g -| s (co)monad. Sound, not complete.
TwoCell cell_normalize(const TwoCell &c);

/// Cells built only from g, s, o and the g -| s cells (with eps0) are equal
/// whenever their boundaries are: that adjunction is idempotent, so its
/// hom-categories are preorders. Other cells compare by cell_normalize.
bool cell_eq(const TwoCell &a, const TwoCell &b);

inline constexpr int kDefaultSearchDepth = 8;

/// Breadth-first search over whiskered generator steps. Returns the identity
/// when src == dst. Absence only means "none within depth".
std::optional<TwoCell> cell_search(const Word &src, const Word &dst,
                                   int depth = kDefaultSearchDepth);

/// For each p in src (outermost first), its index among dst's p's, or
/// nothing when a counit of p -| a consumed it.
std::vector<std::optional<std::size_t>> p_map(const TwoCell &c);

std::string to_string(const TwoCell &c);

/// Cell syntax: `id` or `;`-separated steps `[w *] name [* w]`, where a whisker
/// word uses `.` between generators. `id` yields an empty step list.
std::optional<std::vector<Step>> parse_steps(std::string_view text);

/// Builds a cell from a step chain; `src` is used only when `steps` is empty.
/// Throws Error(E-2CELL-BOUNDARY) on a broken chain.
TwoCell from_steps(const std::vector<Step> &steps, const Word &src);

std::string steps_to_string(const std::vector<Step> &steps);

} // namespace trikernel::modality
