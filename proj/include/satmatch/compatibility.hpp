#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "satmatch/errors.hpp"
#include "satmatch/graph.hpp"
#include "satmatch/saturation.hpp"

namespace satmatch {

/// A market split into n compatibility classes. X vertices may belong to
/// several classes (A_1..A_n overlap); every Y vertex belongs to exactly one
/// (B_1..B_n partition Y). Each class needs at least one X vertex that is in
/// no other class.
class CompatibilityMarket {
 public:
  /// Throws InputError on out-of-range classes, an empty membership, or a
  /// class without an exclusive X vertex. Memberships are sorted and deduplicated.
  CompatibilityMarket(std::uint32_t n_classes, std::vector<std::vector<std::uint32_t>> x_membership,
                      std::vector<std::uint32_t> y_class)
      : n_classes_(n_classes), x_membership_(std::move(x_membership)), y_class_(std::move(y_class)) {
    if (n_classes_ == 0) throw InputError("a compatibility market needs at least one class");
    std::vector<std::uint32_t> exclusive(n_classes_, 0);
    for (std::size_t x = 0; x < x_membership_.size(); ++x) {
      auto& classes = x_membership_[x];
      std::sort(classes.begin(), classes.end());
      classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
      if (classes.empty()) {
        throw InputError("x" + std::to_string(x + 1) + " belongs to no compatibility class");
      }
      if (classes.back() >= n_classes_) {
        throw InputError("x" + std::to_string(x + 1) + " names class " +
                         std::to_string(classes.back() + 1) + " of " + std::to_string(n_classes_));
      }
      if (classes.size() == 1) ++exclusive[classes.front()];
    }
    for (std::size_t y = 0; y < y_class_.size(); ++y) {
      if (y_class_[y] >= n_classes_) {
        throw InputError("y" + std::to_string(y + 1) + " names class " +
                         std::to_string(y_class_[y] + 1) + " of " + std::to_string(n_classes_));
      }
    }
    for (std::uint32_t c = 0; c < n_classes_; ++c) {
      if (exclusive[c] == 0) {
        throw InputError("class " + std::to_string(c + 1) + " has no X vertex exclusive to it");
      }
    }
  }

  std::uint32_t n_classes() const noexcept { return n_classes_; }
  std::uint32_t x_count() const noexcept { return static_cast<std::uint32_t>(x_membership_.size()); }
  std::uint32_t y_count() const noexcept { return static_cast<std::uint32_t>(y_class_.size()); }

  /// Classes of an X vertex, ascending.
  const std::vector<std::uint32_t>& classes_of(std::uint32_t x) const { return x_membership_.at(x); }
  std::uint32_t class_of_y(std::uint32_t y) const { return y_class_.at(y); }

  /// A_c.
  std::vector<std::uint32_t> x_members(std::uint32_t c) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t x = 0; x < x_count(); ++x) {
      if (std::binary_search(x_membership_[x].begin(), x_membership_[x].end(), c)) out.push_back(x);
    }
    return out;
  }

  /// B_c.
  std::vector<std::uint32_t> y_members(std::uint32_t c) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t y = 0; y < y_count(); ++y) {
      if (y_class_[y] == c) out.push_back(y);
    }
    return out;
  }

  /// Lowest-index X vertex whose only class is c.
  std::uint32_t exclusive_vertex(std::uint32_t c) const {
    for (std::uint32_t x = 0; x < x_count(); ++x) {
      if (x_membership_[x].size() == 1 && x_membership_[x].front() == c) return x;
    }
    throw InternalError("class without exclusive vertex survived validation");
  }

  friend bool operator==(const CompatibilityMarket&, const CompatibilityMarket&) = default;

 private:
  std::uint32_t n_classes_;
  std::vector<std::vector<std::uint32_t>> x_membership_;
  std::vector<std::uint32_t> y_class_;
};

/// The acceptability graph of compatibility-wise complete preferences: x and
/// y are adjacent iff y's class is one of x's classes.
inline BipartiteGraph induced_graph(const CompatibilityMarket& m) {
  std::vector<Edge> edges;
  for (std::uint32_t x = 0; x < m.x_count(); ++x) {
    const auto& classes = m.classes_of(x);
    for (std::uint32_t y = 0; y < m.y_count(); ++y) {
      if (std::binary_search(classes.begin(), classes.end(), m.class_of_y(y))) edges.push_back({x, y});
    }
  }
  return {m.x_count(), m.y_count(), edges};
}

struct ClassSizes {
  std::size_t a = 0;  ///< |A_c|
  std::size_t b = 0;  ///< |B_c|

  friend bool operator==(const ClassSizes&, const ClassSizes&) = default;
};

struct Theorem3Verdict {
  bool holds = false;
  std::vector<ClassSizes> classes;
  std::vector<std::uint32_t> deficient;  ///< classes with |B_c| < |A_c|
};

/// X-saturation under every compatibility-wise complete instance holds iff
/// |B_c| >= |A_c| for every class.
inline Theorem3Verdict theorem3_verdict(const CompatibilityMarket& m) {
  Theorem3Verdict v;
  v.holds = true;
  for (std::uint32_t c = 0; c < m.n_classes(); ++c) {
    const ClassSizes s{m.x_members(c).size(), m.y_members(c).size()};
    v.classes.push_back(s);
    if (s.b < s.a) {
      v.holds = false;
      v.deficient.push_back(c);
    }
  }
  return v;
}

/// |N(x)| and |N(N(x))| predicted from class membership alone: the sum of
/// |B_c| over x's classes, and the size of the union of their A_c. The union
/// counts X vertices shared between x's classes once and skips classes with
/// no Y vertices, which contribute no path back to X.
inline Condition1 predicted_condition1(const CompatibilityMarket& m, std::uint32_t x) {
  Condition1 out;
  std::vector<char> in_union(m.x_count(), 0);
  for (std::uint32_t c : m.classes_of(x)) {
    const std::size_t b = m.y_members(c).size();
    out.n_size += b;
    if (b == 0) continue;
    for (std::uint32_t member : m.x_members(c)) in_union[member] = 1;
  }
  out.nn_size = static_cast<std::size_t>(std::count(in_union.begin(), in_union.end(), 1));
  out.holds = out.nn_size <= out.n_size;
  return out;
}

struct ConsistencyReport {
  bool theorem3 = false;
  bool theorem1 = false;
  /// False only for theorem3 && !theorem1, which would mean a checker bug.
  /// The other direction is not implied: the graph-level verdict covers all
  /// instances on the induced graph, not just class-complete ones, but the
  /// two coincide on induced graphs.
  bool consistent = false;
};

inline ConsistencyReport verdict_consistency(const CompatibilityMarket& m) {
  ConsistencyReport r;
  r.theorem3 = theorem3_verdict(m).holds;
  r.theorem1 = theorem1_verdict(induced_graph(m), Side::X).holds;
  r.consistent = !(r.theorem3 && !r.theorem1);
  return r;
}

}  // namespace satmatch
