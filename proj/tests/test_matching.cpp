#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "sog/matching.hpp"
#include "sog/rng.hpp"

using namespace sog;

namespace {

// Exhaustive maximum matching: DP over left vertices with a bitmask of used
// rights. The independent oracle the fast path is checked against.
int brute_force_max_matching(const BipartiteGraph &b) {
  std::vector<std::vector<int>> adj(b.left_count);
  for (auto [l, r] : b.edges)
    adj[l].push_back(r);
  std::vector<std::vector<int>> memo(
      b.left_count + 1, std::vector<int>(1 << b.right_count, -1));
  // iterative DP, processed from the last left vertex backwards
  for (int l = b.left_count; l >= 0; --l) {
    for (int mask = 0; mask < (1 << b.right_count); ++mask) {
      if (l == b.left_count) {
        memo[l][mask] = 0;
        continue;
      }
      int best = memo[l + 1][mask];
      for (int r : adj[l])
        if (!(mask >> r & 1))
          best = std::max(best, 1 + memo[l + 1][mask | (1 << r)]);
      memo[l][mask] = best;
    }
  }
  return memo[0][0];
}

BipartiteGraph random_bipartite(int nl, int nr, double p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  BipartiteGraph b;
  b.left_count = nl;
  b.right_count = nr;
  for (int l = 0; l < nl; ++l)
    for (int r = 0; r < nr; ++r)
      if (rng.bernoulli(p))
        b.edges.emplace_back(l, r);
  return b;
}

bool valid_matching(const BipartiteGraph &b, const Matching &m) {
  std::vector<char> lu(b.left_count, 0), ru(b.right_count, 0);
  for (auto [l, r] : m.pairs) {
    if (std::find(b.edges.begin(), b.edges.end(), std::pair{l, r}) ==
        b.edges.end())
      return false;
    if (lu[l] || ru[r])
      return false;
    lu[l] = ru[r] = 1;
  }
  return true;
}

// After termination no augmenting path may exist; checked directly by BFS
// over alternating paths.
bool has_augmenting_path(const BipartiteGraph &b, const Matching &m) {
  std::vector<std::vector<int>> adj(b.left_count);
  for (auto [l, r] : b.edges)
    adj[l].push_back(r);
  for (int start = 0; start < b.left_count; ++start) {
    if (m.match_of_left[start] >= 0)
      continue;
    std::vector<char> seen_r(b.right_count, 0);
    std::vector<int> frontier{start};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int l : frontier)
        for (int r : adj[l]) {
          if (seen_r[r])
            continue;
          seen_r[r] = 1;
          if (m.match_of_right[r] < 0)
            return true;
          next.push_back(m.match_of_right[r]);
        }
      frontier = std::move(next);
    }
  }
  return false;
}

} // namespace

TEST_CASE("empty edge set gives an empty matching") {
  BipartiteGraph b;
  b.left_count = 3;
  b.right_count = 2;
  Matching m = hopcroft_karp(b);
  CHECK(m.pairs.empty());
}

TEST_CASE("complete bipartite 2x3 matches both lefts") {
  BipartiteGraph b;
  b.left_count = 2;
  b.right_count = 3;
  for (int l = 0; l < 2; ++l)
    for (int r = 0; r < 3; ++r)
      b.edges.emplace_back(l, r);
  Matching m = hopcroft_karp(b);
  CHECK(m.pairs.size() == 2);
  CHECK(valid_matching(b, m));
}

TEST_CASE("cardinality equals brute force on random instances") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SplitMix64 rng(seed * 7919 + 13);
    int nl = 1 + (int)rng.below(12);
    int nr = 1 + (int)rng.below(12);
    double p = 0.05 + 0.4 * (double)(seed % 10) / 10.0;
    BipartiteGraph b = random_bipartite(nl, nr, p, seed + 5000);
    Matching m = hopcroft_karp(b);
    CHECK(valid_matching(b, m));
    CHECK((int)m.pairs.size() == brute_force_max_matching(b));
    CHECK(!has_augmenting_path(b, m));
  }
}

TEST_CASE("deterministic for identical input ordering") {
  BipartiteGraph b = random_bipartite(8, 8, 0.3, 42);
  Matching m1 = hopcroft_karp(b);
  Matching m2 = hopcroft_karp(b);
  CHECK(m1.pairs == m2.pairs);
}
