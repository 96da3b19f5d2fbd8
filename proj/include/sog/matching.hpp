#ifndef SOG_MATCHING_HPP
#define SOG_MATCHING_HPP

#include <utility>
#include <vector>

namespace sog {

// Bipartite graph over abstract 0-based side indices. Callers keep their own
// label maps; adjacency order is preserved, so results are deterministic for
// deterministic input ordering.
struct BipartiteGraph {
  int left_count = 0;
  int right_count = 0;
  std::vector<std::pair<int, int>> edges; // (left, right)
};

struct Matching {
  std::vector<std::pair<int, int>> pairs; // (left, right), sorted by left
  // match_of_left[l] = matched right or -1; symmetric for rights.
  std::vector<int> match_of_left;
  std::vector<int> match_of_right;
};

// Maximum-cardinality bipartite matching, BFS layering + DFS augmentation,
// O(sqrt(V) * E).
Matching hopcroft_karp(const BipartiteGraph &b);

} // namespace sog

#endif
