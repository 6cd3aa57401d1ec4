#pragma once

// Normal forms and arithmetic in free products of cyclic groups, plus the
// Leinert-set decision procedures (bounded search and Stallings folding).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lfree::words {

struct Factor {
  char symbol = 'a';
  int order = 0;  // 0 for an infinite cyclic factor, otherwise >= 2

  bool finite() const { return order != 0; }
  bool operator==(const Factor&) const = default;
};

/// A free product of cyclic groups. Generator i is written with `symbol`
/// (lowercase); its inverse is the uppercase letter.
class GroupPresentation {
 public:
  explicit GroupPresentation(std::vector<Factor> factors);

  /// F_k with generators a, b, c, ...
  static GroupPresentation free_group(int k);
  /// Parses "Z,Z" or "Z,C2". Generators are named a, b, c, ... in order.
  static GroupPresentation parse(std::string_view spec);

  std::size_t size() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }

  /// True when every factor is infinite cyclic.
  bool is_free() const;

  /// Index of the factor written with `symbol` (either case), or nullopt.
  std::optional<int> find(char symbol) const;

  /// Reduces an exponent into canonical range; returns 0 for the identity.
  long normalize(int factor, long exponent) const;

  std::string to_string() const;

  bool operator==(const GroupPresentation&) const = default;

 private:
  std::vector<Factor> factors_;
};

struct Syllable {
  int factor = 0;
  long exponent = 1;

  auto operator<=>(const Syllable&) const = default;
};

/// Fully reduced normal form: adjacent syllables live in distinct factors,
/// exponents are nonzero and, for finite factors of order k, lie in 1..k-1.
/// The empty word is the identity.
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Normalizes arbitrary syllables into reduced form.
  static ReducedWord from_syllables(std::span<const Syllable> syllables,
                                    const GroupPresentation& pres);
  static ReducedWord generator(int factor, long exponent,
                               const GroupPresentation& pres);

  bool is_identity() const { return syllables_.empty(); }
  const std::vector<Syllable>& syllables() const { return syllables_; }
  std::size_t syllable_count() const { return syllables_.size(); }
  /// Number of letters, i.e. the sum of |exponent| over syllables.
  std::size_t length() const;

  auto operator<=>(const ReducedWord&) const = default;
  bool operator==(const ReducedWord&) const = default;

  // Used by multiply(); keeps the reduced invariant.
  void append(const Syllable& s, const GroupPresentation& pres);

 private:
  std::vector<Syllable> syllables_;
};

struct WordHash {
  std::size_t operator()(const ReducedWord& w) const noexcept;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ReducedWord parse_word(std::string_view text, const GroupPresentation& pres);
std::string render(const ReducedWord& w, const GroupPresentation& pres);

ReducedWord multiply(const ReducedWord& lhs, const ReducedWord& rhs,
                     const GroupPresentation& pres);
ReducedWord inverse(const ReducedWord& w, const GroupPresentation& pres);

// ---------------------------------------------------------------------------
// Leinert sets

enum class LeinertStatus { leinert, not_leinert, undecided };
enum class LeinertMethod { folding_exact, bounded_search };

std::string_view to_string(LeinertStatus s);
std::string_view to_string(LeinertMethod m);

struct LeinertVerdict {
  LeinertStatus status = LeinertStatus::undecided;
  /// 1-based alternating indices (i1, j1, ..., ik, jk) whose product
  /// g_{i1} g_{j1}^-1 ... g_{ik} g_{jk}^-1 reduces to e.
  std::optional<std::vector<int>> witness;
  LeinertMethod method = LeinertMethod::bounded_search;
  std::string note;
};

/// True when `witness` satisfies the index constraints and its product
/// reduces to the identity.
bool verify_witness(std::span<const ReducedWord> words,
                    std::span<const int> witness,
                    const GroupPresentation& pres);

/// Searches alternating products with at most `depth` pairs. Never returns
/// `leinert`: a bounded search cannot certify the property.
LeinertVerdict leinert_bounded(std::span<const ReducedWord> words,
                               const GroupPresentation& pres, int depth);

/// Exact decision for free groups: {g_1, ..., g_n} is Leinert iff
/// g_1^-1 g_2, ..., g_1^-1 g_n freely generate F_{n-1}.
LeinertVerdict leinert_exact(std::span<const ReducedWord> words,
                             const GroupPresentation& pres);

// ---------------------------------------------------------------------------
// Stallings folding

struct FoldEdge {
  int from = 0;
  int to = 0;
  int label = 0;  // factor index, oriented from -> to
};

struct FoldResult {
  int vertex_count = 0;
  std::vector<FoldEdge> edges;  // vertices renumbered 0..vertex_count-1, base is 0
  int folds = 0;
  /// A nontrivial reduced word in the subgroup generators (as the free group
  /// on `generators.size()` letters) that maps to e, if folding found one.
  std::optional<ReducedWord> relation;

  /// First Betti number of the folded graph.
  int rank() const {
    return static_cast<int>(edges.size()) - vertex_count + 1;
  }
};

/// Folds the wedge of loops labelled by `generators` (free-group words).
/// Colliding edge pairs are folded lexicographically-smallest first.
FoldResult stallings_fold(std::span<const ReducedWord> generators,
                          const GroupPresentation& pres);

// ---------------------------------------------------------------------------
// Word list files

struct WordListEntry {
  ReducedWord word;
  std::optional<std::string> coefficient;
  int line = 0;
};

struct WordList {
  GroupPresentation presentation{GroupPresentation::free_group(1)};
  std::vector<WordListEntry> entries;

  std::vector<ReducedWord> words() const;
};

/// Reads the word list format: a `group: Z,Z` header, then one word per
/// line, optionally preceded by a coefficient. `#` starts a comment and the
/// token `1` denotes the identity.
WordList read_word_list(std::istream& in);
WordList read_word_list_file(const std::string& path);

}  // namespace lfree::words
