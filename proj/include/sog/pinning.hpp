#ifndef SOG_PINNING_HPP
#define SOG_PINNING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sog/boolnet.hpp"
#include "sog/min_realize.hpp"
#include "sog/stp.hpp"

namespace sog {

enum class PinType { I, II, III };

// One controlled node's pinning record: the control input u = g(...) and
// coupling op are chosen so that the pinned dynamics collapse to a copy (or
// negation) of the assigned in-neighbor.
struct PinnedNode {
  int node = 0;
  PinType type = PinType::I;
  int k = 0;    // original in-degree
  int iota = 0; // 1-based position of phi in the list g reads
  int phi = 0;  // assigned unique in-neighbor
  bool negate = false;
  LogicalMatrix m_oplus;
  LogicalMatrix m_g;
  std::vector<int> g_inputs;   // variables g reads, ascending
  std::vector<char> realized;  // 2-entry table over x_phi
};

struct PinningPlan {
  std::vector<PinnedNode> nodes; // ascending by node
  BooleanNetwork pinned;         // network with the pinning applied
};

// Solves the per-node structure-matrix equations for every controlled node
// of `plan` (produced by solve_problem2 on dependency_graph(b)). Nodes
// listed in `negated` realize the negation of their assigned in-neighbor.
// Residuals of the Type I/II equations are checked exactly; failure raises
// InternalError. In-degrees above 20 are rejected (tables are 2^(k+1) wide).
PinningPlan design_pinning(const BooleanNetwork &b, const ControlPlan &plan,
                           const std::vector<int> &negated = {});

// Observer = copy of the pinned network plus, per node, the sensor that sees
// it, the delay, and the parity of the inverted edge-function chain.
struct Observer {
  struct Entry {
    int node = 0;
    int sensor = 0; // graph vertex carrying the sensor
    int delay = 0;
    bool negate = false;
  };
  BooleanNetwork network;
  std::vector<Entry> schedule; // one entry per node, ascending
  int max_delay = 0;
};

// pre: the pinned network's dependency graph is an SOG.
Observer build_observer(const BooleanNetwork &pinned);

// Recovers x[0] exactly from per-step output words (outputs[k] packs the
// sensors ascending, bit p = p-th sensor). Requires outputs.size() >
// max_delay; a series inconsistent with the recovered state is rejected.
std::uint64_t estimate_initial_state(const Observer &obs,
                                     const std::vector<std::uint64_t> &outputs);

// Reads a trajectory CSV (header k,x,y or k,y) and returns the y words.
std::vector<std::uint64_t> parse_output_csv(const std::string &text,
                                            int sensor_count);

std::string pinning_plan_to_json(const PinningPlan &plan);

} // namespace sog

#endif
