#include "sog/matching.hpp"

#include <limits>
#include <stdexcept>

namespace sog {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

struct HkState {
  std::vector<std::vector<int>> adj; // left -> rights
  std::vector<int> match_l, match_r, dist;

  bool bfs(int nl) {
    std::vector<int> queue;
    queue.reserve(nl);
    for (int u = 0; u < nl; ++u) {
      if (match_l[u] < 0) {
        dist[u] = 0;
        queue.push_back(u);
      } else {
        dist[u] = kInf;
      }
    }
    bool reachable_free = false;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int v : adj[u]) {
        int w = match_r[v];
        if (w < 0) {
          reachable_free = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int u) {
    for (int v : adj[u]) {
      int w = match_r[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        match_l[u] = v;
        match_r[v] = u;
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  }
};

} // namespace

Matching hopcroft_karp(const BipartiteGraph &b) {
  HkState st;
  st.adj.assign(b.left_count, {});
  for (auto [l, r] : b.edges) {
    if (l < 0 || l >= b.left_count || r < 0 || r >= b.right_count)
      throw std::out_of_range("bipartite edge endpoint out of range");
    st.adj[l].push_back(r);
  }
  st.match_l.assign(b.left_count, -1);
  st.match_r.assign(b.right_count, -1);
  st.dist.assign(b.left_count, kInf);

  while (st.bfs(b.left_count)) {
    for (int u = 0; u < b.left_count; ++u)
      if (st.match_l[u] < 0)
        st.dfs(u);
  }

  Matching m;
  m.match_of_left = st.match_l;
  m.match_of_right = st.match_r;
  for (int u = 0; u < b.left_count; ++u)
    if (st.match_l[u] >= 0)
      m.pairs.emplace_back(u, st.match_l[u]);
  return m;
}

} // namespace sog
