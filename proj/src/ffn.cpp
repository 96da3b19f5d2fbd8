#include "sog/ffn.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "json.hpp"
#include "sog/matching.hpp"
#include "sog/sog_check.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sog {

namespace {

int mod_pow(long long base, long long exp, int p) {
  long long r = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1)
      r = r * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return (int)r;
}

int mod_inverse(int a, int p) { return mod_pow(a, p - 2, p); }

// Rank over F_p by row reduction with first-nonzero pivoting.
int rank_mod_p(std::vector<std::vector<int>> rows, int cols, int p) {
  int rank = 0;
  for (int c = 0; c < cols && rank < (int)rows.size(); ++c) {
    int pivot = -1;
    for (int r = rank; r < (int)rows.size(); ++r)
      if (rows[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0)
      continue;
    std::swap(rows[rank], rows[pivot]);
    int inv = mod_inverse(rows[rank][c], p);
    for (int cc = c; cc < cols; ++cc)
      rows[rank][cc] = (int)((long long)rows[rank][cc] * inv % p);
    for (int r = 0; r < (int)rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0)
        continue;
      long long f = rows[r][c];
      for (int cc = c; cc < cols; ++cc)
        rows[r][cc] =
            (int)(((rows[r][cc] - f * rows[rank][cc]) % p + p) % p);
    }
    ++rank;
  }
  return rank;
}

void validate(const FiniteFieldNetwork &net) {
  if (!is_prime(net.p))
    throw std::invalid_argument("modulus " + std::to_string(net.p) +
                                " is not prime");
  if (net.n > 64)
    throw std::invalid_argument("observability_rank: n exceeds guard (64)");
}

} // namespace

bool is_prime(int p) {
  if (p < 2)
    return false;
  for (int d = 2; (long long)d * d <= p; ++d)
    if (p % d == 0)
      return false;
  return true;
}

std::vector<int> ffn_step(const FiniteFieldNetwork &net,
                          const std::vector<int> &x) {
  std::vector<int> y(net.n + 1, 0);
  for (int j = 1; j <= net.n; ++j) {
    long long acc = 0;
    for (int i = 1; i <= net.n; ++i)
      acc += (long long)net.weight(i, j) * x[i];
    y[j] = (int)(acc % net.p);
  }
  return y;
}

bool observability_rank(const FiniteFieldNetwork &net) {
  validate(net);
  const int n = net.n;
  const int h = (int)net.marked.size();
  if (h == 0)
    return n == 0;
  // Build C A^k rows iteratively: r <- r * A means new_r[i] = sum_j r[j] *
  // A[j][i] where A[j][i] is the coefficient of x_j in the update of x_i...
  // here the update of x_j sums weight(i, j) * x_i, so the linear map has
  // matrix M with M[j][i] = weight(i, j); a row r maps to r M.
  std::vector<std::vector<int>> obs_rows;
  std::vector<std::vector<int>> current(h, std::vector<int>(n, 0));
  for (int q = 0; q < h; ++q)
    current[q][net.marked[q] - 1] = 1;
  for (int k = 0; k < n; ++k) {
    for (int q = 0; q < h; ++q)
      obs_rows.push_back(current[q]);
    std::vector<std::vector<int>> next(h, std::vector<int>(n, 0));
    for (int q = 0; q < h; ++q)
      for (int j = 0; j < n; ++j) {
        if (current[q][j] == 0)
          continue;
        long long f = current[q][j];
        // x_{j+1}[k+1] = sum_i weight(i, j+1) x_i[k]
        for (int i = 0; i < n; ++i)
          next[q][i] =
              (int)((next[q][i] + f * net.weight(i + 1, j + 1)) % net.p);
      }
    current = std::move(next);
  }
  return rank_mod_p(std::move(obs_rows), n, net.p) == n;
}

bool strongly_structural_check(const MarkedDigraph &g) {
  return check_properties(g).verdict;
}

namespace {

FiniteFieldNetwork from_path_edges(
    const MarkedDigraph &g, int p,
    const std::vector<std::pair<int, int>> &path_edges) {
  FiniteFieldNetwork net;
  net.p = p;
  net.n = g.vertex_count();
  net.weights.assign((size_t)net.n * net.n, 0);
  net.marked = g.marked();
  for (auto [i, j] : path_edges)
    net.set_weight(i, j, 1);
  return net;
}

} // namespace

std::optional<FiniteFieldNetwork> design_observable_ffn(const MarkedDigraph &g,
                                                        int p) {
  if (!is_prime(p))
    throw std::invalid_argument("modulus " + std::to_string(p) +
                                " is not prime");
  if (g.marked().empty())
    throw std::invalid_argument("design needs at least one marked vertex");

  if (auto cover = decompose_observed_paths(g)) {
    std::vector<std::pair<int, int>> edges;
    for (const auto &path : cover->paths)
      for (size_t q = 0; q + 1 < path.size(); ++q)
        edges.emplace_back(path[q], path[q + 1]);
    return from_path_edges(g, p, edges);
  }

  // Auxiliary digraph: one sink per marked vertex. A vertex-disjoint path
  // cover of it with h paths forces every path to end at a sink, i.e. at a
  // sensor. Minimum path cover via the standard out/in-copy matching
  // reduction, exact on DAGs; successor cycles mean the reduction failed
  // on a cyclic input and the attempt is abandoned.
  const int n = g.vertex_count();
  const int h = (int)g.marked().size();
  const int total = n + h; // sinks n+1 .. n+h
  BipartiteGraph b;
  b.left_count = total;
  b.right_count = total;
  for (auto [i, j] : g.edges())
    b.edges.emplace_back(i - 1, j - 1);
  for (int q = 0; q < h; ++q)
    b.edges.emplace_back(g.marked()[q] - 1, n + q);
  Matching m = hopcroft_karp(b);

  int paths = total - (int)m.pairs.size();
  if (paths != h)
    return std::nullopt;
  // Reconstruct successor structure and reject cycles.
  std::vector<int> succ(total + 1, 0), pred(total + 1, 0);
  for (auto [l, r] : m.pairs) {
    succ[l + 1] = r + 1;
    pred[r + 1] = l + 1;
  }
  std::vector<std::pair<int, int>> edges;
  std::vector<char> seen(total + 1, 0);
  for (int v = 1; v <= total; ++v) {
    if (pred[v] != 0)
      continue;
    int x = v;
    seen[x] = 1;
    while (succ[x] != 0) {
      int y = succ[x];
      seen[y] = 1;
      if (y <= n)
        edges.emplace_back(x, y);
      x = y;
    }
    if (x <= n)
      return std::nullopt; // path ended before reaching a sink
  }
  for (int v = 1; v <= total; ++v)
    if (!seen[v])
      return std::nullopt; // matched into a cycle, not a path cover

  FiniteFieldNetwork net = from_path_edges(g, p, edges);
  if (!observability_rank(net))
    throw InternalError("designed network failed the rank oracle");
  return net;
}

namespace {

template <typename Visit>
bool enumerate_weights(const MarkedDigraph &g, int p, std::uint64_t from,
                       std::uint64_t to, Visit &&visit) {
  const auto &edges = g.edges();
  const int e = (int)edges.size();
  FiniteFieldNetwork net;
  net.p = p;
  net.n = g.vertex_count();
  net.marked = g.marked();
  for (std::uint64_t code = from; code < to; ++code) {
    net.weights.assign((size_t)net.n * net.n, 0);
    std::uint64_t c = code;
    for (int q = 0; q < e; ++q) {
      net.set_weight(edges[q].first, edges[q].second, 1 + (int)(c % (p - 1)));
      c /= (p - 1);
    }
    if (!visit(net, code))
      return false;
  }
  return true;
}

std::uint64_t assignment_count(const MarkedDigraph &g, int p) {
  if (p == 2)
    return 1;
  std::uint64_t count = 1;
  for (size_t q = 0; q < g.edges().size(); ++q) {
    count *= (std::uint64_t)(p - 1);
    if (count > (std::uint64_t)1 << 40)
      throw std::invalid_argument(
          "exhaustive weight enumeration too large for this edge count");
  }
  return count;
}

} // namespace

bool exhaustive_strong_observability_serial(const MarkedDigraph &g, int p) {
  if (!is_prime(p))
    throw std::invalid_argument("modulus is not prime");
  std::uint64_t count = assignment_count(g, p);
  return enumerate_weights(g, p, 0, count,
                           [](const FiniteFieldNetwork &net, std::uint64_t) {
                             return observability_rank(net);
                           });
}

bool exhaustive_strong_observability(const MarkedDigraph &g, int p) {
  if (!is_prime(p))
    throw std::invalid_argument("modulus is not prime");
  std::uint64_t count = assignment_count(g, p);
  std::atomic<bool> all_ok{true};
#ifdef _OPENMP
#pragma omp parallel
  {
    std::uint64_t threads = (std::uint64_t)omp_get_num_threads();
    std::uint64_t tid = (std::uint64_t)omp_get_thread_num();
    std::uint64_t chunk = (count + threads - 1) / threads;
    std::uint64_t lo = tid * chunk, hi = std::min(count, lo + chunk);
    enumerate_weights(g, p, lo, hi,
                      [&](const FiniteFieldNetwork &net, std::uint64_t) {
                        if (!all_ok.load(std::memory_order_relaxed))
                          return false;
                        if (!observability_rank(net))
                          all_ok.store(false, std::memory_order_relaxed);
                        return true;
                      });
  }
#else
  all_ok = exhaustive_strong_observability_serial(g, p);
#endif
  return all_ok.load();
}

std::optional<FiniteFieldNetwork> find_unobservable_weights(
    const MarkedDigraph &g, int p) {
  if (!is_prime(p))
    throw std::invalid_argument("modulus is not prime");
  std::uint64_t count = assignment_count(g, p);
  std::optional<FiniteFieldNetwork> witness;
  enumerate_weights(g, p, 0, count,
                    [&](const FiniteFieldNetwork &net, std::uint64_t) {
                      if (!observability_rank(net)) {
                        witness = net;
                        return false;
                      }
                      return true;
                    });
  return witness;
}

FiniteFieldNetwork parse_ffn(const std::string &text) {
  // Split off the prime/weight directives, hand the rest to the graph
  // parser, then lay weights over the edge pattern.
  std::istringstream in(text);
  std::string line, graph_text;
  int p = -1;
  struct W {
    int i, j, w, line;
  };
  std::vector<W> ws;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = line;
    auto h = stripped.find('#');
    if (h != std::string::npos)
      stripped.erase(h);
    std::istringstream ls(stripped);
    std::string kw;
    if (ls >> kw) {
      if (kw == "prime") {
        if (!(ls >> p))
          throw ParseError(line_no, 1, "expected 'prime <p>'");
        graph_text += "\n";
        continue;
      }
      if (kw == "weight") {
        W w{0, 0, 0, line_no};
        if (!(ls >> w.i >> w.j >> w.w))
          throw ParseError(line_no, 1, "expected 'weight <i> <j> <w>'");
        ws.push_back(w);
        graph_text += "\n";
        continue;
      }
    }
    graph_text += line;
    graph_text += "\n";
  }
  if (p < 0)
    throw ParseError(1, 1, "missing 'prime <p>' line");
  if (!is_prime(p))
    throw ParseError(1, 1, "modulus " + std::to_string(p) + " is not prime");
  MarkedDigraph g = parse_graph(graph_text);

  FiniteFieldNetwork net;
  net.p = p;
  net.n = g.vertex_count();
  net.marked = g.marked();
  net.weights.assign((size_t)net.n * net.n, 0);
  for (auto [i, j] : g.edges())
    net.set_weight(i, j, 1);
  for (const auto &w : ws) {
    if (w.i < 1 || w.i > net.n || w.j < 1 || w.j > net.n)
      throw ParseError(w.line, 1, "weight endpoint out of range");
    if (!g.has_edge(w.i, w.j))
      throw ParseError(w.line, 1,
                       "weight on non-edge (" + std::to_string(w.i) + "," +
                           std::to_string(w.j) + ")");
    if (w.w < 0 || w.w >= p)
      throw ParseError(w.line, 1, "weight outside [0, p-1]");
    net.set_weight(w.i, w.j, w.w);
  }
  return net;
}

std::string ffn_to_json(const FiniteFieldNetwork &net) {
  nlohmann::ordered_json j;
  j["p"] = net.p;
  j["n"] = net.n;
  j["marked"] = net.marked;
  j["A"] = net.weights;
  return j.dump();
}

} // namespace sog
