#include <algorithm>
#include <map>
#include <tuple>

#include "lfree/words.hpp"

namespace lfree::words {

namespace {

struct WorkEdge {
  int from;
  int to;
  int label;
  // Element of the free group on the subgroup generators that this edge
  // contributes when traversed forwards.
  ReducedWord tag;
  bool alive = true;
};

class Folder {
 public:
  explicit Folder(std::span<const ReducedWord> generators)
      : tags_(GroupPresentation::free_group(
            std::max<int>(1, static_cast<int>(generators.size())))) {
    vertex_alive_.push_back(true);  // base vertex 0
    for (std::size_t j = 0; j < generators.size(); ++j) {
      add_loop(generators[j], static_cast<int>(j));
    }
  }

  FoldResult run() {
    FoldResult result;
    while (auto pair = smallest_collision()) {
      fold(pair->first, pair->second, pair_kind_, result);
      ++result.folds;
    }
    std::vector<int> renumber(vertex_alive_.size(), -1);
    int next = 0;
    for (std::size_t v = 0; v < vertex_alive_.size(); ++v) {
      if (vertex_alive_[v]) renumber[v] = next++;
    }
    result.vertex_count = next;
    for (const auto& e : edges_) {
      if (!e.alive) continue;
      result.edges.push_back({renumber[static_cast<std::size_t>(e.from)],
                              renumber[static_cast<std::size_t>(e.to)], e.label});
    }
    return result;
  }

 private:
  enum class Kind { out, in };

  int new_vertex() {
    vertex_alive_.push_back(true);
    return static_cast<int>(vertex_alive_.size()) - 1;
  }

  void add_loop(const ReducedWord& w, int gen) {
    std::vector<std::pair<int, int>> letters;  // (factor, +-1)
    for (const Syllable& s : w.syllables()) {
      const long reps = s.exponent > 0 ? s.exponent : -s.exponent;
      for (long r = 0; r < reps; ++r) letters.emplace_back(s.factor, s.exponent > 0 ? 1 : -1);
    }
    if (letters.empty()) return;  // trivial generator contributes nothing
    int prev = 0;
    for (std::size_t t = 0; t < letters.size(); ++t) {
      const bool last = t + 1 == letters.size();
      const int next = last ? 0 : new_vertex();
      const auto [factor, sign] = letters[t];
      WorkEdge e{sign > 0 ? prev : next, sign > 0 ? next : prev, factor, {}, true};
      if (last) {
        e.tag = ReducedWord::generator(gen, sign > 0 ? 1 : -1, tags_);
      }
      edges_.push_back(std::move(e));
      prev = next;
    }
  }

  // Lexicographically smallest (vertex, direction, label, e1, e2) collision.
  std::optional<std::pair<int, int>> smallest_collision() {
    std::map<std::tuple<int, int, int>, int> first_seen;
    std::optional<std::tuple<int, int, int, int, int>> best;
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
      const auto& e = edges_[static_cast<std::size_t>(i)];
      if (!e.alive) continue;
      const std::tuple<int, int, int> keys[2] = {{e.from, 0, e.label},
                                                 {e.to, 1, e.label}};
      for (const auto& key : keys) {
        auto [it, inserted] = first_seen.emplace(key, i);
        if (inserted) continue;
        const auto cand = std::make_tuple(std::get<0>(key), std::get<1>(key),
                                          std::get<2>(key), it->second, i);
        if (!best || cand < *best) best = cand;
      }
    }
    if (!best) return std::nullopt;
    pair_kind_ = std::get<1>(*best) == 0 ? Kind::out : Kind::in;
    return std::make_pair(std::get<3>(*best), std::get<4>(*best));
  }

  void fold(int i1, int i2, Kind kind, FoldResult& result) {
    WorkEdge& e1 = edges_[static_cast<std::size_t>(i1)];
    WorkEdge& e2 = edges_[static_cast<std::size_t>(i2)];
    const int end1 = kind == Kind::out ? e1.to : e1.from;
    const int end2 = kind == Kind::out ? e2.to : e2.from;

    if (end1 == end2) {
      // Parallel edges: e1 e2^-1 (or e1^-1 e2) is a loop reading e.
      ReducedWord rel = kind == Kind::out
                            ? multiply(e1.tag, inverse(e2.tag, tags_), tags_)
                            : multiply(inverse(e1.tag, tags_), e2.tag, tags_);
      if (!rel.is_identity() && !result.relation) result.relation = std::move(rel);
      e2.alive = false;
      return;
    }

    // Merge vertex `gone` into `keep`; the base vertex is never removed.
    int keep_edge = i1;
    int drop_edge = i2;
    if (end2 == 0) std::swap(keep_edge, drop_edge);
    const WorkEdge& ek = edges_[static_cast<std::size_t>(keep_edge)];
    const WorkEdge& ed = edges_[static_cast<std::size_t>(drop_edge)];
    const int keep = kind == Kind::out ? ek.to : ek.from;
    const int gone = kind == Kind::out ? ed.to : ed.from;
    const ReducedWord shift =
        kind == Kind::out ? multiply(inverse(ek.tag, tags_), ed.tag, tags_)
                          : multiply(ek.tag, inverse(ed.tag, tags_), tags_);
    const ReducedWord shift_inv = inverse(shift, tags_);

    for (auto& e : edges_) {
      if (!e.alive) continue;
      if (e.from == gone) {
        e.tag = multiply(shift, e.tag, tags_);
        e.from = keep;
      }
      if (e.to == gone) {
        e.tag = multiply(e.tag, shift_inv, tags_);
        e.to = keep;
      }
    }
    vertex_alive_[static_cast<std::size_t>(gone)] = false;
    edges_[static_cast<std::size_t>(drop_edge)].alive = false;
  }

  GroupPresentation tags_;
  std::vector<WorkEdge> edges_;
  std::vector<bool> vertex_alive_;
  Kind pair_kind_ = Kind::out;
};

}  // namespace

FoldResult stallings_fold(std::span<const ReducedWord> generators,
                          const GroupPresentation& pres) {
  if (!pres.is_free()) {
    throw std::invalid_argument("Stallings folding requires a free group");
  }
  return Folder(generators).run();
}

}  // namespace lfree::words
