#ifndef SOG_SOG_CHECK_HPP
#define SOG_SOG_CHECK_HPP

#include <optional>
#include <string>
#include <vector>

#include "sog/graph.hpp"

namespace sog {

// Property P1: a simple vertex v satisfies P1 when some vertex has v as its
// unique in-neighbor. Property P2: an all-simple cycle satisfies P2 when some
// vertex outside it has its unique in-neighbor on the cycle. Only OP-CCs
// (cycles along which every vertex is the unique in-neighbor of the next)
// can violate P2, so the report lists those.
struct PropertyReport {
  std::vector<int> p1_failures;           // simple vertices failing P1
  std::vector<std::vector<int>> op_ccs;   // all OP-CCs, min vertex first
  std::vector<std::vector<int>> p2_failures; // all-simple OP-CCs failing P2
  bool verdict = false;
};

// Vertex-disjoint partition of V into observed paths: each path's terminal
// is its only marked vertex and every earlier vertex is the unique
// in-neighbor of its successor.
struct ObservedPathCover {
  std::vector<std::vector<int>> paths; // head first, marked terminal last
};

struct SogResult {
  bool sog = false;
  PropertyReport report;
  std::optional<ObservedPathCover> cover;
};

PropertyReport check_properties(const MarkedDigraph &g);

// Builds a cover by backward walks from each marked vertex in ascending
// order; returns nullopt exactly when the graph is not an SOG.
std::optional<ObservedPathCover> decompose_observed_paths(
    const MarkedDigraph &g);

// Both routes computed; a verdict mismatch between them throws InternalError.
SogResult is_sog(const MarkedDigraph &g);

// Validates the three ObservedPathCover invariants against g.
bool valid_cover(const MarkedDigraph &g, const ObservedPathCover &cover);

// Sensors whose single failure destroys SOG-ness, per the two structural
// conditions (P1 on the sensor itself treated as simple; sole sensor of an
// otherwise-unattached OP-CC). pre: is_sog(g).
std::vector<int> critical_sensors(const MarkedDigraph &g);

// JSON with keys p1_failures, op_ccs, p2_failures, verdict, cover,
// critical_sensors (cover/critical_sensors null when absent).
std::string report_to_json(const SogResult &r,
                           const std::optional<std::vector<int>> &critical);

} // namespace sog

#endif
