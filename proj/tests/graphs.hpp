#pragma once

// Small named graphs used across the unit tests. Indices are 0-based: x1 is
// index 0.

#include "satmatch/graph.hpp"

namespace testgraphs {

using satmatch::BipartiteGraph;

inline BipartiteGraph fig1a() { return BipartiteGraph(2, 2, {{0, 0}, {1, 1}, {0, 1}}); }

inline BipartiteGraph fig1b() { return BipartiteGraph(2, 3, {{0, 0}, {1, 1}, {0, 1}, {1, 2}}); }

inline BipartiteGraph fig1c() {
  return BipartiteGraph(3, 4, {{0, 0}, {0, 1}, {0, 3}, {1, 1}, {1, 3}, {1, 0}, {2, 1}, {2, 2}});
}

inline BipartiteGraph fig2a() {
  return BipartiteGraph(4, 4, {{0, 0}, {1, 1}, {0, 1}, {2, 0}, {3, 1}, {2, 1}, {0, 3}, {2, 2}});
}

inline BipartiteGraph fig2b() {
  return BipartiteGraph(4, 4, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}});
}

/// x1 - y1 - x2 - y2 - x3.
inline BipartiteGraph path5() { return BipartiteGraph(3, 2, {{0, 0}, {1, 0}, {1, 1}, {2, 1}}); }

/// x1 fails both conditions, yet its neighbours cannot all be held by
/// competitors: y1 and y2 share the single competitor x2.
inline BipartiteGraph crowded() {
  return BipartiteGraph(4, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 2}, {3, 2}});
}

}  // namespace testgraphs
