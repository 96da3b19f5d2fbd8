#ifndef SOG_FFN_HPP
#define SOG_FFN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sog/graph.hpp"

namespace sog {

// Linear network x[k+1] = A x[k] over F_p. Weights are stored edge-oriented:
// weight(i, j) multiplies x_i in the update of x_j, so the zero pattern of
// the weight table matches the interaction digraph.
struct FiniteFieldNetwork {
  int p = 2; // prime modulus
  int n = 0;
  std::vector<int> weights; // row-major, weights[(i-1)*n + (j-1)] = w(i->j)
  std::vector<int> marked;  // output vertices, ascending

  int weight(int i, int j) const { return weights[(size_t)(i - 1) * n + j - 1]; }
  void set_weight(int i, int j, int w) {
    weights[(size_t)(i - 1) * n + j - 1] = w;
  }
};

bool is_prime(int p);

// Rank of [C; CA; ...; CA^(n-1)] over F_p equals n, via Gaussian
// elimination with modular inverses. pre: p prime, n <= 64.
bool observability_rank(const FiniteFieldNetwork &net);

// One simulation step x -> A x over F_p (state indexed x1..xn).
std::vector<int> ffn_step(const FiniteFieldNetwork &net,
                          const std::vector<int> &x);

// Equals is_sog(g): a graph passing P1 and P2 keeps every nonzero-pattern
// weight choice observable.
bool strongly_structural_check(const MarkedDigraph &g);

// Weight-1 design along a vertex-disjoint path cover. SOGs use the observed
// path cover directly; other graphs go through the matching-based path
// cover of the auxiliary digraph (exact when that digraph is acyclic).
// Returns nullopt when no size-h marked-terminal cover is found.
std::optional<FiniteFieldNetwork> design_observable_ffn(const MarkedDigraph &g,
                                                        int p);

// Every weight assignment with nonzero entries exactly on the edge set is
// observable. Exhaustive over (p-1)^|E| assignments, conjunction-merged
// across OpenMP threads; the serial variant is the tested reference.
bool exhaustive_strong_observability(const MarkedDigraph &g, int p);
bool exhaustive_strong_observability_serial(const MarkedDigraph &g, int p);

// First weight assignment (in enumeration order) that is unobservable, if
// any; useful as a witness for non-SOG graphs.
std::optional<FiniteFieldNetwork> find_unobservable_weights(
    const MarkedDigraph &g, int p);

// FFN file = graph file plus `prime <p>` and optional `weight i j w` lines
// (unweighted edges default to 1).
FiniteFieldNetwork parse_ffn(const std::string &text);
std::string ffn_to_json(const FiniteFieldNetwork &net);

} // namespace sog

#endif
