#include "sog/sog_check.hpp"

#include <algorithm>

#include "json.hpp"

namespace sog {

namespace {

// v satisfies P1 iff some out-neighbor of v has in-degree exactly 1 (that
// out-neighbor's unique in-neighbor is then v, self-loops included).
bool satisfies_p1(const MarkedDigraph &g, int v) {
  for (int w : g.out_neighbors(v))
    if (g.in_degree(w) == 1)
      return true;
  return false;
}

// All OP-CCs: cycles of the partial map v -> unique_in_neighbor(v).
// Pairwise vertex-disjoint by construction. Each cycle is rotated to start
// at its minimum vertex and follows edge direction.
std::vector<std::vector<int>> find_op_ccs(const MarkedDigraph &g) {
  const int n = g.vertex_count();
  std::vector<int> state(n + 1, 0); // 0 unvisited, 1 on stack, 2 done
  std::vector<std::vector<int>> ccs;
  for (int start = 1; start <= n; ++start) {
    if (state[start] != 0)
      continue;
    std::vector<int> stack;
    int v = start;
    while (true) {
      state[v] = 1;
      stack.push_back(v);
      auto u = g.unique_in_neighbor(v);
      if (!u || state[*u] == 2) {
        break;
      }
      if (state[*u] == 1) {
        // Found a cycle: the suffix of the stack from *u.
        auto it = std::find(stack.begin(), stack.end(), *u);
        std::vector<int> cyc(it, stack.end());
        // cyc lists pointer order v, uin(v), ...; reverse for edge order.
        std::reverse(cyc.begin(), cyc.end());
        auto mn = std::min_element(cyc.begin(), cyc.end());
        std::rotate(cyc.begin(), mn, cyc.end());
        ccs.push_back(std::move(cyc));
        break;
      }
      v = *u;
    }
    for (int w : stack)
      state[w] = 2;
  }
  std::sort(ccs.begin(), ccs.end(),
            [](const auto &a, const auto &b) { return a[0] < b[0]; });
  return ccs;
}

bool cycle_all_simple(const MarkedDigraph &g, const std::vector<int> &cyc) {
  for (int v : cyc)
    if (g.is_marked(v))
      return false;
  return true;
}

// Definition of P2 for a cycle: exists w outside the cycle whose unique
// in-neighbor lies on the cycle.
bool cycle_attached(const MarkedDigraph &g, const std::vector<int> &cyc) {
  std::vector<char> on(g.vertex_count() + 1, 0);
  for (int v : cyc)
    on[v] = 1;
  for (int c : cyc)
    for (int w : g.out_neighbors(c))
      if (!on[w] && g.in_degree(w) == 1)
        return true;
  return false;
}

} // namespace

PropertyReport check_properties(const MarkedDigraph &g) {
  PropertyReport r;
  for (int v = 1; v <= g.vertex_count(); ++v)
    if (g.is_simple(v) && !satisfies_p1(g, v))
      r.p1_failures.push_back(v);
  r.op_ccs = find_op_ccs(g);
  for (const auto &cyc : r.op_ccs)
    if (cycle_all_simple(g, cyc) && !cycle_attached(g, cyc))
      r.p2_failures.push_back(cyc);
  r.verdict = r.p1_failures.empty() && r.p2_failures.empty();
  return r;
}

std::optional<ObservedPathCover> decompose_observed_paths(
    const MarkedDigraph &g) {
  const int n = g.vertex_count();
  std::vector<char> assigned(n + 1, 0);
  ObservedPathCover cover;
  for (int m : g.marked()) {
    if (assigned[m])
      continue;
    std::vector<int> path; // collected terminal-first
    int v = m;
    path.push_back(v);
    assigned[v] = 1;
    while (true) {
      auto u = g.unique_in_neighbor(v);
      if (!u || g.is_marked(*u) || assigned[*u])
        break;
      v = *u;
      path.push_back(v);
      assigned[v] = 1;
    }
    std::reverse(path.begin(), path.end());
    cover.paths.push_back(std::move(path));
  }
  for (int v = 1; v <= n; ++v)
    if (!assigned[v])
      return std::nullopt;
  return cover;
}

bool valid_cover(const MarkedDigraph &g, const ObservedPathCover &cover) {
  std::vector<char> seen(g.vertex_count() + 1, 0);
  size_t total = 0;
  for (const auto &path : cover.paths) {
    if (path.empty())
      return false;
    for (size_t i = 0; i < path.size(); ++i) {
      int v = path[i];
      if (v < 1 || v > g.vertex_count() || seen[v])
        return false;
      seen[v] = 1;
      bool terminal = (i + 1 == path.size());
      if (terminal != g.is_marked(v))
        return false;
      if (!terminal) {
        auto u = g.unique_in_neighbor(path[i + 1]);
        if (!u || *u != v)
          return false;
      }
    }
    total += path.size();
  }
  return total == (size_t)g.vertex_count();
}

SogResult is_sog(const MarkedDigraph &g) {
  SogResult res;
  res.report = check_properties(g);
  res.cover = decompose_observed_paths(g);
  if (res.cover && !valid_cover(g, *res.cover))
    throw InternalError("decompose_observed_paths produced an invalid cover");
  if (res.report.verdict != res.cover.has_value())
    throw InternalError(
        "property check and path decomposition disagree on SOG verdict");
  res.sog = res.report.verdict;
  return res;
}

std::vector<int> critical_sensors(const MarkedDigraph &g) {
  PropertyReport base = check_properties(g);
  if (!base.verdict)
    throw std::invalid_argument("critical_sensors requires an SOG input");
  std::vector<int> crit;
  for (int z : g.marked()) {
    bool critical = false;
    // Condition 1: z itself fails P1 once treated as simple.
    if (!satisfies_p1(g, z))
      critical = true;
    // Condition 2: z is the only sensor on an OP-CC that has no external
    // attachment, so removing its mark leaves an unattached all-simple cycle.
    if (!critical) {
      for (const auto &cyc : base.op_ccs) {
        if (std::find(cyc.begin(), cyc.end(), z) == cyc.end())
          continue;
        int marks_on_cycle = 0;
        for (int v : cyc)
          if (g.is_marked(v))
            ++marks_on_cycle;
        if (marks_on_cycle == 1 && !cycle_attached(g, cyc))
          critical = true;
        break; // OP-CCs are disjoint; z is on at most one
      }
    }
    if (critical)
      crit.push_back(z);
  }
  return crit;
}

std::string report_to_json(const SogResult &r,
                           const std::optional<std::vector<int>> &critical) {
  nlohmann::ordered_json j;
  j["p1_failures"] = r.report.p1_failures;
  j["op_ccs"] = r.report.op_ccs;
  j["p2_failures"] = r.report.p2_failures;
  j["verdict"] = r.report.verdict;
  if (r.cover)
    j["cover"] = r.cover->paths;
  else
    j["cover"] = nullptr;
  if (critical)
    j["critical_sensors"] = *critical;
  else
    j["critical_sensors"] = nullptr;
  return j.dump();
}

} // namespace sog
