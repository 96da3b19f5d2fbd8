#ifndef SOG_MIN_REALIZE_HPP
#define SOG_MIN_REALIZE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sog/graph.hpp"
#include "sog/matching.hpp"

namespace sog {

// Minimum extra marks that turn the graph into an SOG.
struct MarkPlan {
  std::vector<int> added_marks;
};

// Minimum vertex-control plan: each controlled vertex has its whole in-edge
// set replaced by the single edge assignment[v] -> v.
struct ControlPlan {
  std::vector<int> controlled;   // ascending
  std::map<int, int> assignment; // controlled vertex -> new unique in-neighbor
  MarkedDigraph result;
};

// M-sets: simple vertices failing P1, split by out-degree, plus the
// distance-one neighborhood of the failing set.
struct MSets {
  std::vector<int> m_bar;   // simple vertices failing P1
  std::vector<int> m_bar_1; // out-degree-zero members
  std::vector<int> m_bar_2; // the rest
  std::vector<int> nabla1;  // vertices at distance exactly 1 from m_bar
};

struct SSets {
  std::vector<std::vector<int>> all; // every OP-CC
  std::vector<std::vector<int>> s1;  // OP-CCs satisfying P2 or carrying marks
  std::vector<std::vector<int>> s2;  // all-simple OP-CCs failing P2
};

// Bipartite graph for the matching-based control construction, with label
// maps back to graph vertices. Right side holds plain targets and duplicate
// stand-ins for targets that themselves fail P1.
struct ControlBipartite {
  BipartiteGraph graph;
  std::vector<int> left_vertex;                    // left index -> vertex
  std::vector<std::pair<int, bool>> right_vertex;  // (vertex, is_duplicate)
};

// One unique-in-neighbor chain of the (partially controlled) digraph.
// Paths are typed I/II by whether the flow terminal carries a mark, with
// sub-type .1 when no backtracking vertex lies on the path, .2 when one
// does and no controlled vertex sits between it and the terminal, .3
// otherwise. Cycles are typed I/II by the absence/presence of a controlled
// member.
struct Component {
  enum class Kind {
    PathI1, PathI2, PathI3, PathII1, PathII2, PathII3, CycleI, CycleII
  };
  Kind kind;
  std::vector<int> vertices; // paths: head first, terminal last
  int head = 0;
  int terminal = 0;
  int backtracking = 0; // nearest the terminal; 0 when absent
};

// Spanning decomposition of a digraph mid-control: vertex-disjoint OP-CPs
// and OP-CCs covering V.
struct ComponentDecomposition {
  std::vector<Component> components;
};

ComponentDecomposition decompose_components(const MarkedDigraph &g,
                                            const std::vector<int> &controlled);

MarkPlan solve_problem1(const MarkedDigraph &g);
MSets compute_m_sets(const MarkedDigraph &g);
ControlBipartite build_bipartite(const MarkedDigraph &g, const MSets &s);
SSets compute_s_sets(const MarkedDigraph &g);

// |m_bar| + |s2|; nullopt means infinite (no marked vertex).
std::optional<int> n_star(const MarkedDigraph &g);

bool is_acyclic(const MarkedDigraph &g);

// Matching-based construction for acyclic inputs. pre: acyclic, marked
// non-empty. post: |controlled| == |m_bar| and result is an SOG.
ControlPlan solve_problem2_acyclic(const MarkedDigraph &g);

// General construction. pre: marked non-empty. post: |controlled| == n_star
// and result is an SOG; violations raise InternalError, never a wrong plan.
ControlPlan solve_problem2(const MarkedDigraph &g);

struct RandomExperimentSummary {
  int n = 0;
  double p = 0;
  int trials = 0;
  double mean_controls = 0; // mean (|I*| - h*)
  double mean_critical = 0; // mean h*
  double mean_marks = 0;    // mean |I*|
};

// Erdos-Renyi digraphs (each ordered pair i != j an edge with probability p,
// no marks); per trial: solve_problem1, then critical sensors of the marked
// result. Trial t draws from a stream seeded by (seed, t), so results do not
// depend on evaluation order.
RandomExperimentSummary random_experiment(int n, double p, int trials,
                                          std::uint64_t seed);

std::string control_plan_to_json(const ControlPlan &plan);
std::string mark_plan_to_json(const MarkPlan &plan);

} // namespace sog

#endif
