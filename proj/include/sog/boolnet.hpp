#ifndef SOG_BOOLNET_HPP
#define SOG_BOOLNET_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sog/graph.hpp"

namespace sog {

// AST over variables x1..xn, constants, and !, &, |, ^.
struct BooleanExpression {
  enum class Kind { Constant, Variable, Not, And, Or, Xor };
  Kind kind = Kind::Constant;
  bool value = false; // Constant
  int var = 0;        // Variable
  std::vector<BooleanExpression> operands;

  static BooleanExpression constant(bool v);
  static BooleanExpression variable(int v);
  static BooleanExpression make(Kind k, std::vector<BooleanExpression> ops);

  bool eval(const std::vector<char> &values) const; // values[var], 1-based
  void collect_vars(std::vector<int> &out) const;
  std::string to_string() const;
};

// Operators: ! & | ^ with precedence NOT > AND > XOR > OR, left-associative,
// parentheses and constants 0/1.
BooleanExpression parse_expression(const std::string &text);

struct BnNode {
  std::vector<int> inputs;  // essential in-neighbors, ascending
  std::vector<char> table;  // 2^k entries; bit q-1 of the index = input q
};

struct BooleanNetwork {
  int n = 0;
  std::vector<BnNode> nodes; // [1..n], index 0 unused
  std::vector<int> outputs;  // directly observable nodes, ascending

  bool operator==(const BooleanNetwork &o) const {
    if (n != o.n || outputs != o.outputs)
      return false;
    for (int i = 1; i <= n; ++i)
      if (nodes[i].inputs != o.nodes[i].inputs ||
          nodes[i].table != o.nodes[i].table)
        return false;
    return true;
  }
};

struct BnParseResult {
  BooleanNetwork net;
  std::vector<std::string> warnings; // one per dropped non-essential input
};

// BN file grammar: one `x<i> = <expr>` line per node (x1..xn each exactly
// once), one `outputs: x<i> x<j> ...` line, '#' comments. Declared inputs
// that are not essential are dropped with a warning so every stored function
// is minimally represented.
BnParseResult parse_bn(const std::string &text);
std::string render_bn(const BooleanNetwork &net);
BnParseResult load_bn_file(const std::string &path);

// Edge (i, j) iff x_i is an essential input of node j; marked = outputs.
MarkedDigraph dependency_graph(const BooleanNetwork &net);

// States are n-bit words, x1 in the least significant bit.
std::uint64_t bn_step(const BooleanNetwork &net, std::uint64_t state);
std::uint64_t bn_output(const BooleanNetwork &net, std::uint64_t state);

struct StateTrajectory {
  std::vector<std::uint64_t> states;  // length T+1
  std::vector<std::uint64_t> outputs; // outputs[k] for states[k]
};

StateTrajectory simulate(const BooleanNetwork &net, std::uint64_t x0, int T);
std::string trajectory_to_csv(const BooleanNetwork &net,
                              const StateTrajectory &tr);

// Bit-string helpers; strings list x1..xn left to right.
std::uint64_t state_from_bits(const std::string &bits);
std::string bits_from_state(std::uint64_t state, int n);

// True iff every pair of distinct initial states produces output sequences
// that differ at some step. Pair walks are deterministic and eventually
// periodic, so cycle detection bounds every check exactly. pre: n <= 24.
// The default entry point partitions the pair space across OpenMP threads;
// the serial variant keeps a memo over visited pairs and is the reference
// the parallel path is tested against.
bool observability_bruteforce(const BooleanNetwork &net);
bool observability_bruteforce_serial(const BooleanNetwork &net);

// AND of the in-neighbors at every node; vertices of in-degree 0 become the
// constant-0 function (see tests for why the constant matters).
BooleanNetwork conjunctive_bn(const MarkedDigraph &g);

// Uniformly sampled truth tables, resampled until every declared input is
// essential, so dependency_graph(result) == g exactly.
BooleanNetwork sample_consistent_bn(const MarkedDigraph &g,
                                    std::uint64_t seed);

} // namespace sog

#endif
