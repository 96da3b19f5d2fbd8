#include "sog/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sog {

MarkedDigraph::MarkedDigraph(int n, std::vector<std::pair<int, int>> edges,
                             std::vector<int> marked)
    : n_(n), edges_(std::move(edges)), marked_(std::move(marked)) {
  if (n_ < 0)
    throw std::invalid_argument("vertex count must be non-negative");
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("duplicate edge");
  std::sort(marked_.begin(), marked_.end());
  marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());

  out_adj_.assign(n_ + 1, {});
  in_adj_.assign(n_ + 1, {});
  marked_flag_.assign(n_ + 1, 0);
  for (auto [i, j] : edges_) {
    if (i < 1 || i > n_ || j < 1 || j > n_)
      throw std::invalid_argument("edge endpoint out of range");
    out_adj_[i].push_back(j);
    in_adj_[j].push_back(i);
  }
  for (int v : marked_) {
    if (v < 1 || v > n_)
      throw std::invalid_argument("marked vertex out of range");
    marked_flag_[v] = 1;
  }
}

void MarkedDigraph::check_vertex(int v) const {
  if (v < 1 || v > n_)
    throw std::out_of_range("vertex index " + std::to_string(v) +
                            " out of range [1," + std::to_string(n_) + "]");
}

bool MarkedDigraph::is_marked(int v) const {
  check_vertex(v);
  return marked_flag_[v] != 0;
}

bool MarkedDigraph::has_edge(int i, int j) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::pair{i, j});
}

const std::vector<int> &MarkedDigraph::in_neighbors(int v) const {
  check_vertex(v);
  return in_adj_[v];
}

const std::vector<int> &MarkedDigraph::out_neighbors(int v) const {
  check_vertex(v);
  return out_adj_[v];
}

std::optional<int> MarkedDigraph::unique_in_neighbor(int v) const {
  check_vertex(v);
  if (in_adj_[v].size() == 1)
    return in_adj_[v][0];
  return std::nullopt;
}

std::optional<int> MarkedDigraph::distance(int i, int j) const {
  check_vertex(i);
  return distance_from_set({i}, j);
}

std::optional<int> MarkedDigraph::distance_from_set(
    const std::vector<int> &from, int j) const {
  check_vertex(j);
  // BFS over walks of length >= 1: seed with the out-neighbors of `from`.
  std::vector<int> dist(n_ + 1, -1);
  std::deque<int> queue;
  for (int s : from) {
    check_vertex(s);
    for (int w : out_adj_[s]) {
      if (dist[w] < 0) {
        dist[w] = 1;
        queue.push_back(w);
      }
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (u == j)
      return dist[u];
    for (int w : out_adj_[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  if (dist[j] > 0)
    return dist[j];
  return std::nullopt;
}

MarkedDigraph MarkedDigraph::with_marked(std::vector<int> marked) const {
  return MarkedDigraph(n_, edges_, std::move(marked));
}

MarkedDigraph MarkedDigraph::with_controlled(int v, int u) const {
  check_vertex(v);
  check_vertex(u);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edges_.size() + 1);
  for (auto e : edges_)
    if (e.second != v)
      edges.push_back(e);
  edges.emplace_back(u, v);
  return MarkedDigraph(n_, std::move(edges), marked_);
}

Relabeling canonical_relabel(const MarkedDigraph &g) {
  Relabeling r;
  int n = g.vertex_count();
  r.new_index.assign(n + 1, 0);
  int next = 1;
  for (int v : g.marked())
    r.new_index[v] = next++;
  for (int v = 1; v <= n; ++v)
    if (g.is_simple(v))
      r.new_index[v] = next++;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges().size());
  for (auto [i, j] : g.edges())
    edges.emplace_back(r.new_index[i], r.new_index[j]);
  std::vector<int> marked;
  for (int q = 1; q <= (int)g.marked().size(); ++q)
    marked.push_back(q);
  r.graph = MarkedDigraph(n, std::move(edges), std::move(marked));
  return r;
}

AdjacencyMatrix adjacency_matrix(const MarkedDigraph &g) {
  AdjacencyMatrix a;
  a.n = g.vertex_count();
  a.entries.assign((size_t)a.n * a.n, 0);
  for (auto [i, j] : g.edges())
    a.entries[(size_t)(i - 1) * a.n + (j - 1)] = 1;
  return a;
}

namespace {

struct LineScanner {
  std::string line;
  int line_no = 0;
  size_t pos = 0;

  void strip_comment() {
    auto h = line.find('#');
    if (h != std::string::npos)
      line.erase(h);
  }

  bool next_token(std::string &tok) {
    while (pos < line.size() && std::isspace((unsigned char)line[pos]))
      ++pos;
    if (pos >= line.size())
      return false;
    size_t start = pos;
    while (pos < line.size() && !std::isspace((unsigned char)line[pos]))
      ++pos;
    tok = line.substr(start, pos - start);
    return true;
  }

  int column() const { return (int)pos + 1; }

  int expect_int(const char *what) {
    std::string tok;
    int col = column();
    if (!next_token(tok))
      throw ParseError(line_no, col, std::string("expected ") + what);
    col = (int)(pos - tok.size()) + 1;
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size())
        throw std::invalid_argument("");
      return v;
    } catch (const std::exception &) {
      throw ParseError(line_no, col,
                       std::string("expected integer for ") + what +
                           ", got '" + tok + "'");
    }
  }
};

} // namespace

MarkedDigraph parse_graph(const std::string &text) {
  std::istringstream in(text);
  LineScanner sc;
  int n = -1;
  std::vector<int> marked;
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> seen;
  bool saw_marked = false;

  while (std::getline(in, sc.line)) {
    ++sc.line_no;
    sc.pos = 0;
    sc.strip_comment();
    std::string kw;
    if (!sc.next_token(kw))
      continue;
    if (kw == "digraph") {
      if (n >= 0)
        throw ParseError(sc.line_no, 1, "duplicate digraph header");
      n = sc.expect_int("vertex count");
      if (n < 0)
        throw ParseError(sc.line_no, 1, "vertex count must be >= 0");
    } else if (n < 0) {
      throw ParseError(sc.line_no, 1, "expected 'digraph <n>' header first");
    } else if (kw == "marked") {
      if (saw_marked)
        throw ParseError(sc.line_no, 1, "duplicate marked line");
      saw_marked = true;
      std::string tok;
      while (true) {
        size_t save = sc.pos;
        if (!sc.next_token(tok))
          break;
        sc.pos = save;
        int v = sc.expect_int("marked vertex");
        if (v < 1 || v > n)
          throw ParseError(sc.line_no, 1,
                           "marked vertex " + std::to_string(v) +
                               " out of range [1," + std::to_string(n) + "]");
        marked.push_back(v);
      }
    } else if (kw == "edge") {
      int col = sc.column();
      int i = sc.expect_int("edge source");
      int j = sc.expect_int("edge target");
      if (i < 1 || i > n || j < 1 || j > n)
        throw ParseError(sc.line_no, col,
                         "edge (" + std::to_string(i) + "," +
                             std::to_string(j) + ") out of range [1," +
                             std::to_string(n) + "]");
      if (!seen.insert({i, j}).second)
        throw ParseError(sc.line_no, col,
                         "duplicate edge (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
      edges.emplace_back(i, j);
    } else {
      throw ParseError(sc.line_no, 1, "unknown directive '" + kw + "'");
    }
  }
  if (n < 0)
    throw ParseError(sc.line_no == 0 ? 1 : sc.line_no, 1,
                     "missing 'digraph <n>' header");
  return MarkedDigraph(n, std::move(edges), std::move(marked));
}

std::string render_graph(const MarkedDigraph &g) {
  std::ostringstream out;
  out << "digraph " << g.vertex_count() << "\n";
  if (!g.marked().empty()) {
    out << "marked";
    for (int v : g.marked())
      out << ' ' << v;
    out << "\n";
  }
  for (auto [i, j] : g.edges())
    out << "edge " << i << ' ' << j << "\n";
  return out.str();
}

MarkedDigraph graph_from_json(const std::string &json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  int n = j.at("n").get<int>();
  std::vector<int> marked = j.value("marked", std::vector<int>{});
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> seen;
  for (const auto &e : j.value("edges", nlohmann::json::array())) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("edge must be a 2-array");
    std::pair<int, int> p{e[0].get<int>(), e[1].get<int>()};
    if (!seen.insert(p).second)
      throw std::invalid_argument("duplicate edge in JSON");
    edges.push_back(p);
  }
  return MarkedDigraph(n, std::move(edges), std::move(marked));
}

std::string graph_to_json(const MarkedDigraph &g) {
  nlohmann::ordered_json j;
  j["n"] = g.vertex_count();
  j["marked"] = g.marked();
  auto edges = nlohmann::ordered_json::array();
  for (auto [a, b] : g.edges())
    edges.push_back({a, b});
  j["edges"] = std::move(edges);
  return j.dump();
}

std::string to_dot(
    const MarkedDigraph &g,
    const std::vector<std::pair<std::string, std::vector<int>>> &highlights) {
  static const char *palette[] = {"red",    "skyblue", "green",
                                  "orange", "violet",  "gray"};
  std::vector<std::string> color(g.vertex_count() + 1);
  size_t k = 0;
  for (const auto &[name, verts] : highlights) {
    const char *c = palette[std::min(k, sizeof(palette) / sizeof(*palette) - 1)];
    ++k;
    for (int v : verts) {
      if (v < 1 || v > g.vertex_count())
        throw std::out_of_range("highlight vertex out of range in set " + name);
      if (color[v].empty())
        color[v] = c;
    }
  }
  std::ostringstream out;
  out << "digraph G {\n";
  for (int v = 1; v <= g.vertex_count(); ++v) {
    out << "  v" << v << " [label=\"v" << v << "\"";
    if (g.is_marked(v))
      out << " shape=doublecircle";
    if (!color[v].empty())
      out << " style=filled fillcolor=" << color[v];
    out << "];\n";
  }
  for (auto [i, j] : g.edges())
    out << "  v" << i << " -> v" << j << ";\n";
  out << "}\n";
  return out.str();
}

MarkedDigraph load_graph_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

} // namespace sog
