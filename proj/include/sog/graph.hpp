#ifndef SOG_GRAPH_HPP
#define SOG_GRAPH_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sog {

// Thrown on malformed input files. Line/column are 1-based.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string &what_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(column_) + ": " + what_),
        line(line_), column(column_) {}
};

// Signals a broken internal invariant (an algorithm bug, never bad input).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// A digraph on vertices v1..vn with a set of marked (directly observable)
// vertices. Vertices are 1-based throughout. Immutable after construction.
class MarkedDigraph {
public:
  MarkedDigraph() = default;
  MarkedDigraph(int n, std::vector<std::pair<int, int>> edges,
                std::vector<int> marked);

  int vertex_count() const { return n_; }
  const std::vector<std::pair<int, int>> &edges() const { return edges_; }
  const std::vector<int> &marked() const { return marked_; }

  bool is_marked(int v) const;
  bool is_simple(int v) const { return !is_marked(v); }
  bool has_edge(int i, int j) const;

  // pre: v in [1,n]
  const std::vector<int> &in_neighbors(int v) const;
  const std::vector<int> &out_neighbors(int v) const;
  int in_degree(int v) const { return (int)in_neighbors(v).size(); }
  int out_degree(int v) const { return (int)out_neighbors(v).size(); }

  // The unique in-neighbor of v, when in-degree(v) == 1.
  std::optional<int> unique_in_neighbor(int v) const;

  // Length of the shortest nonempty walk i -> j; nullopt if unreachable.
  // A self-loop gives distance(v, v) == 1.
  std::optional<int> distance(int i, int j) const;
  std::optional<int> distance_from_set(const std::vector<int> &from,
                                       int j) const;

  // Copy with a different marked set.
  MarkedDigraph with_marked(std::vector<int> marked) const;
  // Copy where the in-edges of `v` are replaced by the single edge (u, v).
  MarkedDigraph with_controlled(int v, int u) const;

  bool operator==(const MarkedDigraph &o) const {
    return n_ == o.n_ && edges_ == o.edges_ && marked_ == o.marked_;
  }

private:
  void check_vertex(int v) const;

  int n_ = 0;
  std::vector<std::pair<int, int>> edges_; // sorted, unique
  std::vector<int> marked_;                // sorted, unique
  std::vector<std::vector<int>> out_adj_;  // [1..n], sorted
  std::vector<std::vector<int>> in_adj_;   // [1..n], sorted
  std::vector<char> marked_flag_;          // [1..n]
};

// 0/1 adjacency matrix, entry (i,j) = 1 iff (v_i, v_j) is an edge.
struct AdjacencyMatrix {
  int n = 0;
  std::vector<char> entries; // row-major, n*n
  char at(int i, int j) const { return entries[(size_t)(i - 1) * n + (j - 1)]; }
};

AdjacencyMatrix adjacency_matrix(const MarkedDigraph &g);

// Renumbering that puts the marked vertices first (1..h) while keeping
// relative order on both sides; new_index[v] gives v's new name.
struct Relabeling {
  MarkedDigraph graph;
  std::vector<int> new_index; // [1..n]
};
Relabeling canonical_relabel(const MarkedDigraph &g);

// Graph file grammar (line oriented, '#' starts a comment):
//   digraph <n>
//   marked <i1> <i2> ...      (optional)
//   edge <i> <j>              (zero or more)
MarkedDigraph parse_graph(const std::string &text);
std::string render_graph(const MarkedDigraph &g);

// JSON round-trip with keys n, marked, edges.
MarkedDigraph graph_from_json(const std::string &json_text);
std::string graph_to_json(const MarkedDigraph &g);

// DOT export. Marked vertices get shape=doublecircle; each named highlight
// set fills its vertices with a color picked from a fixed palette, in the
// order the sets are given. Deterministic output.
std::string to_dot(const MarkedDigraph &g,
                   const std::vector<std::pair<std::string, std::vector<int>>>
                       &highlights = {});

MarkedDigraph load_graph_file(const std::string &path);

} // namespace sog

#endif
