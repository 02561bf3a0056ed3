#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "satmatch/errors.hpp"
#include "satmatch/graph.hpp"

namespace satmatch {

/// A possible partner: a vertex, or std::nullopt for "unmatched".
using Candidate = std::optional<VertexId>;
inline constexpr std::nullopt_t kUnmatched = std::nullopt;

enum class PreferenceErrorKind {
  MissingList,
  DuplicateEntry,
  NotInNeighborhood,
  SameSide,
  IncompleteList,
};

inline const char* to_string(PreferenceErrorKind k) {
  switch (k) {
    case PreferenceErrorKind::MissingList: return "missing preference list";
    case PreferenceErrorKind::DuplicateEntry: return "duplicate entry";
    case PreferenceErrorKind::NotInNeighborhood: return "entry is not an acceptable partner";
    case PreferenceErrorKind::SameSide: return "entry is on the same side";
    case PreferenceErrorKind::IncompleteList: return "list omits acceptable partners";
  }
  return "?";
}

class PreferenceError : public InputError {
 public:
  PreferenceError(PreferenceErrorKind kind, VertexId vertex, std::optional<VertexId> entry = std::nullopt,
                  const std::string& detail = "")
      : InputError(to_string(vertex) + ": " + to_string(kind) +
                   (entry ? " (" + to_string(*entry) + ")" : detail.empty() ? "" : " (" + detail + ")")),
        kind_(kind),
        vertex_(vertex),
        entry_(entry) {}

  PreferenceErrorKind kind() const noexcept { return kind_; }
  VertexId vertex() const noexcept { return vertex_; }
  /// The offending list entry, when there is one.
  std::optional<VertexId> entry() const noexcept { return entry_; }

 private:
  PreferenceErrorKind kind_;
  VertexId vertex_;
  std::optional<VertexId> entry_;
};

/// Unvalidated ranking data; a missing list is std::nullopt (or a short outer vector).
struct RawPreferences {
  std::vector<std::optional<std::vector<VertexId>>> x_lists;
  std::vector<std::optional<std::vector<VertexId>>> y_lists;
};

/// Position of each acceptable partner in a vertex's list. Ranks are stored
/// aligned with the vertex's sorted neighbourhood, so a lookup is a binary
/// search followed by an index.
class RankTable {
 public:
  RankTable() = default;

  explicit RankTable(const std::array<std::vector<std::vector<std::uint32_t>>, 2>& lists) {
    for (int s = 0; s < 2; ++s) {
      sorted_[s].resize(lists[s].size());
      ranks_[s].resize(lists[s].size());
      for (std::size_t v = 0; v < lists[s].size(); ++v) {
        const auto& list = lists[s][v];
        auto& sorted = sorted_[s][v];
        sorted = list;
        std::sort(sorted.begin(), sorted.end());
        auto& ranks = ranks_[s][v];
        ranks.resize(list.size());
        for (std::uint32_t r = 0; r < list.size(); ++r) {
          const auto pos = std::lower_bound(sorted.begin(), sorted.end(), list[r]) - sorted.begin();
          ranks[pos] = r;
        }
      }
    }
  }

  /// 0-based rank of `candidate` (an opposite-side index) in v's list, or
  /// nullopt if it is not acceptable to v.
  std::optional<std::uint32_t> find(VertexId v, std::uint32_t candidate) const {
    const auto& sorted = sorted_[static_cast<int>(v.side)][v.index];
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), candidate);
    if (it == sorted.end() || *it != candidate) return std::nullopt;
    return ranks_[static_cast<int>(v.side)][v.index][it - sorted.begin()];
  }

 private:
  std::array<std::vector<std::vector<std::uint32_t>>, 2> sorted_;
  std::array<std::vector<std::vector<std::uint32_t>>, 2> ranks_;
};

/// One strict ranking per vertex over exactly its neighbourhood. Only
/// obtainable through validate(), sample_uniform() or enumerate_all(), so an
/// instance always matches the graph it was built against.
class PreferenceInstance {
 public:
  PreferenceInstance() = default;

  std::uint32_t x_count() const noexcept { return static_cast<std::uint32_t>(lists_[0].size()); }
  std::uint32_t y_count() const noexcept { return static_cast<std::uint32_t>(lists_[1].size()); }

  /// Opposite-side indices, most preferred first.
  std::span<const std::uint32_t> list(VertexId v) const {
    if (v.index >= lists_[static_cast<int>(v.side)].size()) {
      throw InputError("vertex " + to_string(v) + " has no preference list");
    }
    return lists_[static_cast<int>(v.side)][v.index];
  }

  std::optional<std::uint32_t> find_rank(VertexId v, std::uint32_t candidate) const {
    return ranks_.find(v, candidate);
  }

  /// Rank of an acceptable candidate; throws InputError otherwise.
  std::uint32_t rank(VertexId v, std::uint32_t candidate) const {
    if (const auto r = ranks_.find(v, candidate)) return *r;
    throw InputError(to_string(VertexId{opposite(v.side), candidate}) + " is not acceptable to " +
                     to_string(v));
  }

  friend bool operator==(const PreferenceInstance& a, const PreferenceInstance& b) {
    return a.lists_ == b.lists_;
  }

 private:
  explicit PreferenceInstance(std::array<std::vector<std::vector<std::uint32_t>>, 2> lists)
      : lists_(std::move(lists)), ranks_(lists_) {}

  friend PreferenceInstance validate(const BipartiteGraph&, const RawPreferences&);
  friend class PreferenceBuilder;

  std::array<std::vector<std::vector<std::uint32_t>>, 2> lists_;
  RankTable ranks_;
};

/// Internal constructor access for code that produces lists it has already
/// proven valid (samplers, enumerators, constructors of adversarial instances).
class PreferenceBuilder {
 public:
  static PreferenceInstance trusted(std::array<std::vector<std::vector<std::uint32_t>>, 2> lists) {
    return PreferenceInstance(std::move(lists));
  }
};

/// Checks that every vertex's list is a permutation of its neighbourhood.
inline PreferenceInstance validate(const BipartiteGraph& g, const RawPreferences& raw) {
  std::array<std::vector<std::vector<std::uint32_t>>, 2> lists;
  for (Side side : {Side::X, Side::Y}) {
    const auto& src = side == Side::X ? raw.x_lists : raw.y_lists;
    auto& dst = lists[static_cast<int>(side)];
    dst.resize(g.side_size(side));
    for (std::uint32_t i = 0; i < g.side_size(side); ++i) {
      const VertexId v{side, i};
      if (i >= src.size() || !src[i]) throw PreferenceError(PreferenceErrorKind::MissingList, v);
      const auto adjacent = g.adjacent(v);
      std::vector<char> seen(adjacent.size(), 0);
      for (VertexId w : *src[i]) {
        if (w.side == side) throw PreferenceError(PreferenceErrorKind::SameSide, v, w);
        const auto it = std::lower_bound(adjacent.begin(), adjacent.end(), w.index);
        if (it == adjacent.end() || *it != w.index) {
          throw PreferenceError(PreferenceErrorKind::NotInNeighborhood, v, w);
        }
        char& mark = seen[it - adjacent.begin()];
        if (mark) throw PreferenceError(PreferenceErrorKind::DuplicateEntry, v, w);
        mark = 1;
        dst[i].push_back(w.index);
      }
      if (dst[i].size() != adjacent.size()) {
        throw PreferenceError(PreferenceErrorKind::IncompleteList, v, std::nullopt,
                              std::to_string(dst[i].size()) + " of " +
                                  std::to_string(adjacent.size()) + " listed");
      }
    }
  }
  return PreferenceInstance(std::move(lists));
}

/// Convenience overload taking opposite-side indices per vertex.
inline PreferenceInstance validate(const BipartiteGraph& g,
                                   const std::vector<std::vector<std::uint32_t>>& x_lists,
                                   const std::vector<std::vector<std::uint32_t>>& y_lists) {
  RawPreferences raw;
  for (const auto& l : x_lists) {
    std::vector<VertexId> row;
    for (auto i : l) row.push_back(y_vertex(i));
    raw.x_lists.emplace_back(std::move(row));
  }
  for (const auto& l : y_lists) {
    std::vector<VertexId> row;
    for (auto i : l) row.push_back(x_vertex(i));
    raw.y_lists.emplace_back(std::move(row));
  }
  return validate(g, raw);
}

/// Every list in ascending index order.
inline PreferenceInstance ascending_instance(const BipartiteGraph& g) {
  std::array<std::vector<std::vector<std::uint32_t>>, 2> lists;
  for (Side side : {Side::X, Side::Y}) {
    for (std::uint32_t i = 0; i < g.side_size(side); ++i) {
      const auto adj = g.adjacent({side, i});
      lists[static_cast<int>(side)].emplace_back(adj.begin(), adj.end());
    }
  }
  return PreferenceBuilder::trusted(std::move(lists));
}

/// Independent uniform permutation of each neighbourhood, driven by a
/// 64-bit Mersenne Twister seeded with `seed`. Reproducible for a given
/// standard library; not meant to be golden-tested across implementations.
inline PreferenceInstance sample_uniform(const BipartiteGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<std::vector<std::vector<std::uint32_t>>, 2> lists;
  for (Side side : {Side::X, Side::Y}) {
    for (std::uint32_t i = 0; i < g.side_size(side); ++i) {
      const auto adj = g.adjacent({side, i});
      std::vector<std::uint32_t> list(adj.begin(), adj.end());
      std::shuffle(list.begin(), list.end(), rng);
      lists[static_cast<int>(side)].push_back(std::move(list));
    }
  }
  return PreferenceBuilder::trusted(std::move(lists));
}

/// |P| = product over all vertices of deg(v)!, saturating at UINT64_MAX.
inline std::uint64_t instance_count(const BipartiteGraph& g) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (Side side : {Side::X, Side::Y}) {
    for (std::uint32_t i = 0; i < g.side_size(side); ++i) {
      for (std::uint64_t k = 2; k <= g.adjacent({side, i}).size(); ++k) {
        if (total > kMax / k) return kMax;
        total *= k;
      }
    }
  }
  return total;
}

inline constexpr std::uint64_t kDefaultInstanceCap = 1'000'000;

/// Walks every preference instance of a graph exactly once. Order is
/// lexicographic in the per-vertex permutation indices, X vertices before Y
/// vertices, the last vertex varying fastest. Single pass, single consumer.
class PreferenceEnumeration {
 public:
  PreferenceEnumeration(const BipartiteGraph& g, std::uint64_t cap) : count_(instance_count(g)) {
    if (count_ > cap) {
      throw CapExceeded("graph has " + std::to_string(count_) +
                            " preference instances, more than the cap of " + std::to_string(cap),
                        count_, cap);
    }
    for (Side side : {Side::X, Side::Y}) {
      for (std::uint32_t i = 0; i < g.side_size(side); ++i) {
        const auto adj = g.adjacent({side, i});
        lists_[static_cast<int>(side)].emplace_back(adj.begin(), adj.end());
      }
    }
    current_ = PreferenceBuilder::trusted(lists_);
  }

  std::uint64_t size() const noexcept { return count_; }
  bool finished() const noexcept { return done_; }

  struct sentinel {};

  class iterator {
   public:
    using value_type = PreferenceInstance;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(PreferenceEnumeration* owner) : owner_(owner) {}

    const PreferenceInstance& operator*() const { return owner_->current_; }
    const PreferenceInstance* operator->() const { return &owner_->current_; }
    iterator& operator++() {
      owner_->advance();
      return *this;
    }
    void operator++(int) { owner_->advance(); }
    friend bool operator==(const iterator& it, sentinel) { return it.owner_->finished(); }

   private:
    PreferenceEnumeration* owner_ = nullptr;
  };

  iterator begin() { return iterator(this); }
  sentinel end() const { return {}; }

 private:
  void advance() {
    // Odometer over per-vertex permutations; next_permutation wraps a list
    // back to ascending order when it carries.
    for (int s = 1; s >= 0; --s) {
      auto& side = lists_[s];
      for (std::size_t v = side.size(); v-- > 0;) {
        if (std::next_permutation(side[v].begin(), side[v].end())) {
          current_ = PreferenceBuilder::trusted(lists_);
          return;
        }
      }
    }
    done_ = true;
  }

  std::uint64_t count_;
  std::array<std::vector<std::vector<std::uint32_t>>, 2> lists_;
  PreferenceInstance current_;
  bool done_ = false;
};

/// Throws CapExceeded (carrying the exact count) when |P| > cap.
inline PreferenceEnumeration enumerate_all(const BipartiteGraph& g,
                                           std::uint64_t cap = kDefaultInstanceCap) {
  return PreferenceEnumeration(g, cap);
}

/// True iff v strictly prefers a to b. Any acceptable partner beats
/// kUnmatched; unacceptable candidates are an InputError.
inline bool prefers(const PreferenceInstance& p, VertexId v, Candidate a, Candidate b) {
  auto rank_of = [&](Candidate c) -> std::uint64_t {
    if (!c) return std::numeric_limits<std::uint64_t>::max();
    if (c->side == v.side) {
      throw InputError(to_string(*c) + " is on the same side as " + to_string(v));
    }
    return p.rank(v, c->index);
  };
  return rank_of(a) < rank_of(b);
}

}  // namespace satmatch
