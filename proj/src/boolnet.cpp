#include "sog/boolnet.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sog/rng.hpp"

namespace sog {

BooleanExpression BooleanExpression::constant(bool v) {
  BooleanExpression e;
  e.kind = Kind::Constant;
  e.value = v;
  return e;
}

BooleanExpression BooleanExpression::variable(int v) {
  BooleanExpression e;
  e.kind = Kind::Variable;
  e.var = v;
  return e;
}

BooleanExpression BooleanExpression::make(Kind k,
                                          std::vector<BooleanExpression> ops) {
  BooleanExpression e;
  e.kind = k;
  e.operands = std::move(ops);
  return e;
}

bool BooleanExpression::eval(const std::vector<char> &values) const {
  switch (kind) {
  case Kind::Constant:
    return value;
  case Kind::Variable:
    return values[var] != 0;
  case Kind::Not:
    return !operands[0].eval(values);
  case Kind::And:
    return operands[0].eval(values) && operands[1].eval(values);
  case Kind::Or:
    return operands[0].eval(values) || operands[1].eval(values);
  case Kind::Xor:
    return operands[0].eval(values) != operands[1].eval(values);
  }
  return false;
}

void BooleanExpression::collect_vars(std::vector<int> &out) const {
  if (kind == Kind::Variable)
    out.push_back(var);
  for (const auto &op : operands)
    op.collect_vars(out);
}

std::string BooleanExpression::to_string() const {
  switch (kind) {
  case Kind::Constant:
    return value ? "1" : "0";
  case Kind::Variable:
    return "x" + std::to_string(var);
  case Kind::Not:
    return "!" + operands[0].to_string();
  case Kind::And:
    return "(" + operands[0].to_string() + " & " + operands[1].to_string() +
           ")";
  case Kind::Or:
    return "(" + operands[0].to_string() + " | " + operands[1].to_string() +
           ")";
  case Kind::Xor:
    return "(" + operands[0].to_string() + " ^ " + operands[1].to_string() +
           ")";
  }
  return "";
}

namespace {

struct ExprParser {
  const std::string &text;
  size_t pos = 0;
  int line;

  ExprParser(const std::string &t, int line_no) : text(t), line(line_no) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos]))
      ++pos;
  }

  [[noreturn]] void fail(const std::string &msg) {
    throw ParseError(line, (int)pos + 1, msg);
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  BooleanExpression parse() {
    BooleanExpression e = parse_or();
    skip_ws();
    if (pos != text.size())
      fail(std::string("unexpected character '") + text[pos] +
           "' in expression");
    return e;
  }

  BooleanExpression parse_or() {
    BooleanExpression e = parse_xor();
    while (eat('|'))
      e = BooleanExpression::make(BooleanExpression::Kind::Or,
                                  {std::move(e), parse_xor()});
    return e;
  }

  BooleanExpression parse_xor() {
    BooleanExpression e = parse_and();
    while (eat('^'))
      e = BooleanExpression::make(BooleanExpression::Kind::Xor,
                                  {std::move(e), parse_and()});
    return e;
  }

  BooleanExpression parse_and() {
    BooleanExpression e = parse_unary();
    while (eat('&'))
      e = BooleanExpression::make(BooleanExpression::Kind::And,
                                  {std::move(e), parse_unary()});
    return e;
  }

  BooleanExpression parse_unary() {
    if (eat('!'))
      return BooleanExpression::make(BooleanExpression::Kind::Not,
                                     {parse_unary()});
    return parse_atom();
  }

  BooleanExpression parse_atom() {
    skip_ws();
    if (pos >= text.size())
      fail("unexpected end of expression");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      BooleanExpression e = parse_or();
      if (!eat(')'))
        fail("missing ')'");
      return e;
    }
    if (c == '0' || c == '1') {
      ++pos;
      return BooleanExpression::constant(c == '1');
    }
    if (c == 'x') {
      ++pos;
      size_t start = pos;
      while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
        ++pos;
      if (pos == start)
        fail("expected variable index after 'x'");
      return BooleanExpression::variable(
          std::stoi(text.substr(start, pos - start)));
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

bool input_essential(const std::vector<char> &table, int k, int q) {
  int mask = 1 << (q - 1);
  for (int idx = 0; idx < (1 << k); ++idx)
    if (table[idx] != table[idx ^ mask])
      return true;
  return false;
}

} // namespace

BooleanExpression parse_expression(const std::string &text) {
  ExprParser p(text, 1);
  return p.parse();
}

BnParseResult parse_bn(const std::string &text) {
  struct RawNode {
    int line;
    BooleanExpression expr;
  };
  std::map<int, RawNode> raw;
  std::vector<int> outputs;
  bool saw_outputs = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto h = line.find('#');
    if (h != std::string::npos)
      line.erase(h);
    size_t i = 0;
    while (i < line.size() && std::isspace((unsigned char)line[i]))
      ++i;
    if (i >= line.size())
      continue;
    if (line.compare(i, 8, "outputs:") == 0) {
      if (saw_outputs)
        throw ParseError(line_no, (int)i + 1, "duplicate outputs line");
      saw_outputs = true;
      std::istringstream rest(line.substr(i + 8));
      std::string tok;
      while (rest >> tok) {
        if (tok.size() < 2 || tok[0] != 'x')
          throw ParseError(line_no, 1, "output must look like x<i>: '" + tok +
                                           "'");
        outputs.push_back(std::stoi(tok.substr(1)));
      }
      continue;
    }
    if (line[i] != 'x')
      throw ParseError(line_no, (int)i + 1,
                       "expected 'x<i> = <expr>' or 'outputs:' line");
    size_t j = i + 1;
    while (j < line.size() && std::isdigit((unsigned char)line[j]))
      ++j;
    if (j == i + 1)
      throw ParseError(line_no, (int)j + 1, "expected node index after 'x'");
    int node = std::stoi(line.substr(i + 1, j - i - 1));
    while (j < line.size() && std::isspace((unsigned char)line[j]))
      ++j;
    if (j >= line.size() || line[j] != '=')
      throw ParseError(line_no, (int)j + 1, "expected '=' after node name");
    std::string rhs = line.substr(j + 1);
    ExprParser rp(rhs, line_no);
    BooleanExpression expr = rp.parse_or();
    rp.skip_ws();
    if (rp.pos != rhs.size())
      throw ParseError(line_no, (int)(j + 1 + rp.pos) + 1,
                       "trailing junk after expression");
    if (raw.count(node))
      throw ParseError(line_no, (int)i + 1,
                       "duplicate definition of x" + std::to_string(node));
    raw[node] = RawNode{line_no, std::move(expr)};
  }

  int n = (int)raw.size();
  if (n == 0)
    throw ParseError(std::max(1, line_no), 1, "no node definitions");
  for (int i = 1; i <= n; ++i)
    if (!raw.count(i))
      throw ParseError(1, 1,
                       "missing definition of x" + std::to_string(i) +
                           " (nodes must be x1..xn)");

  BnParseResult res;
  res.net.n = n;
  res.net.nodes.assign(n + 1, {});
  for (int i = 1; i <= n; ++i) {
    const RawNode &rn = raw.at(i);
    std::vector<int> vars;
    rn.expr.collect_vars(vars);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (int v : vars)
      if (v < 1 || v > n)
        throw ParseError(rn.line, 1,
                         "unknown variable x" + std::to_string(v) +
                             " in definition of x" + std::to_string(i));
    int k = (int)vars.size();
    if (k > 24)
      throw ParseError(rn.line, 1,
                       "in-degree " + std::to_string(k) +
                           " exceeds the arity guard (24)");
    std::vector<char> table(1u << k, 0);
    std::vector<char> values(n + 1, 0);
    for (int idx = 0; idx < (1 << k); ++idx) {
      for (int q = 0; q < k; ++q)
        values[vars[q]] = (idx >> q) & 1;
      table[idx] = rn.expr.eval(values) ? 1 : 0;
    }
    // Drop non-essential declared inputs to keep the stored function
    // minimally represented.
    std::vector<int> keep;
    for (int q = 1; q <= k; ++q) {
      if (input_essential(table, k, q)) {
        keep.push_back(q);
      } else {
        res.warnings.push_back("node x" + std::to_string(i) + ": input x" +
                               std::to_string(vars[q - 1]) +
                               " is not essential; dropped");
      }
    }
    if ((int)keep.size() != k) {
      std::vector<char> reduced(1u << keep.size(), 0);
      for (size_t idx = 0; idx < reduced.size(); ++idx) {
        int full = 0;
        for (size_t q = 0; q < keep.size(); ++q)
          if ((idx >> q) & 1)
            full |= 1 << (keep[q] - 1);
        reduced[idx] = table[full];
      }
      std::vector<int> kept_vars;
      for (int q : keep)
        kept_vars.push_back(vars[q - 1]);
      res.net.nodes[i] = BnNode{std::move(kept_vars), std::move(reduced)};
    } else {
      res.net.nodes[i] = BnNode{std::move(vars), std::move(table)};
    }
  }

  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  for (int v : outputs)
    if (v < 1 || v > n)
      throw ParseError(1, 1, "output x" + std::to_string(v) + " out of range");
  res.net.outputs = std::move(outputs);
  return res;
}

std::string render_bn(const BooleanNetwork &net) {
  std::ostringstream out;
  for (int i = 1; i <= net.n; ++i) {
    const BnNode &node = net.nodes[i];
    out << 'x' << i << " = ";
    int k = (int)node.inputs.size();
    if (k == 0) {
      out << (node.table[0] ? '1' : '0');
    } else {
      // Disjunction of minterms; every input is essential, so neither the
      // all-zero nor the all-one table can occur here.
      bool first = true;
      for (int idx = 0; idx < (1 << k); ++idx) {
        if (!node.table[idx])
          continue;
        if (!first)
          out << " | ";
        first = false;
        out << '(';
        for (int q = 0; q < k; ++q) {
          if (q)
            out << " & ";
          if (!((idx >> q) & 1))
            out << '!';
          out << 'x' << node.inputs[q];
        }
        out << ')';
      }
      if (first)
        out << '0';
    }
    out << '\n';
  }
  out << "outputs:";
  for (int v : net.outputs)
    out << " x" << v;
  out << '\n';
  return out.str();
}

BnParseResult load_bn_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open BN file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bn(buf.str());
}

MarkedDigraph dependency_graph(const BooleanNetwork &net) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j <= net.n; ++j)
    for (int i : net.nodes[j].inputs)
      edges.emplace_back(i, j);
  return MarkedDigraph(net.n, std::move(edges), net.outputs);
}

std::uint64_t bn_step(const BooleanNetwork &net, std::uint64_t state) {
  std::uint64_t next = 0;
  for (int i = 1; i <= net.n; ++i) {
    const BnNode &node = net.nodes[i];
    std::uint32_t idx = 0;
    for (size_t q = 0; q < node.inputs.size(); ++q)
      idx |= (std::uint32_t)((state >> (node.inputs[q] - 1)) & 1) << q;
    if (node.table[idx])
      next |= std::uint64_t{1} << (i - 1);
  }
  return next;
}

std::uint64_t bn_output(const BooleanNetwork &net, std::uint64_t state) {
  std::uint64_t y = 0;
  for (size_t p = 0; p < net.outputs.size(); ++p)
    y |= ((state >> (net.outputs[p] - 1)) & 1) << p;
  return y;
}

StateTrajectory simulate(const BooleanNetwork &net, std::uint64_t x0, int T) {
  StateTrajectory tr;
  tr.states.reserve(T + 1);
  tr.outputs.reserve(T + 1);
  std::uint64_t s = x0;
  for (int k = 0; k <= T; ++k) {
    tr.states.push_back(s);
    tr.outputs.push_back(bn_output(net, s));
    s = bn_step(net, s);
  }
  return tr;
}

std::string trajectory_to_csv(const BooleanNetwork &net,
                              const StateTrajectory &tr) {
  std::ostringstream out;
  out << "k,x,y\n";
  for (size_t k = 0; k < tr.states.size(); ++k) {
    out << k << ',' << bits_from_state(tr.states[k], net.n) << ','
        << bits_from_state(tr.outputs[k], (int)net.outputs.size()) << '\n';
  }
  return out.str();
}

std::uint64_t state_from_bits(const std::string &bits) {
  std::uint64_t s = 0;
  int i = 0;
  for (char c : bits) {
    if (c == '0' || c == '1') {
      if (i >= 64)
        throw std::invalid_argument("bit string longer than 64");
      if (c == '1')
        s |= std::uint64_t{1} << i;
      ++i;
    } else if (!std::isspace((unsigned char)c)) {
      throw std::invalid_argument("bit string must contain only 0/1");
    }
  }
  return s;
}

std::string bits_from_state(std::uint64_t state, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if ((state >> i) & 1)
      s[i] = '1';
  return s;
}

namespace {

constexpr int kBruteforceGuard = 24;

struct PairWalker {
  const BooleanNetwork &net;
  std::vector<std::uint32_t> next_table; // empty when too big to precompute

  explicit PairWalker(const BooleanNetwork &net_) : net(net_) {
    if (net.n <= 20) {
      std::uint32_t count = 1u << net.n;
      next_table.resize(count);
      for (std::uint32_t s = 0; s < count; ++s)
        next_table[s] = (std::uint32_t)bn_step(net, s);
    }
  }

  std::uint32_t step(std::uint32_t s) const {
    return next_table.empty() ? (std::uint32_t)bn_step(net, s)
                              : next_table[s];
  }

  // True iff the pair's outputs differ at some step; detected exactly by
  // walking until an output difference, a merge, or a revisited pair.
  bool distinguishable(std::uint32_t a, std::uint32_t b) const {
    std::unordered_set<std::uint64_t> seen;
    while (true) {
      if (a == b)
        return false;
      if (bn_output(net, a) != bn_output(net, b))
        return true;
      std::uint64_t key = a < b ? ((std::uint64_t)a << 32) | b
                                : ((std::uint64_t)b << 32) | a;
      if (!seen.insert(key).second)
        return false;
      a = step(a);
      b = step(b);
    }
  }
};

} // namespace

bool observability_bruteforce_serial(const BooleanNetwork &net) {
  if (net.n > kBruteforceGuard)
    throw std::invalid_argument("observability_bruteforce: n exceeds guard");
  PairWalker walker(net);
  const std::uint64_t count = std::uint64_t{1} << net.n;

  // Memoized verdict per unordered pair: 0 unknown, 1 distinguishable,
  // 2 indistinguishable.
  const bool dense = net.n <= 12;
  std::vector<std::uint8_t> memo_dense;
  std::unordered_map<std::uint64_t, std::uint8_t> memo_sparse;
  if (dense)
    memo_dense.assign((size_t)count * count, 0);
  auto key_of = [](std::uint32_t a, std::uint32_t b) {
    return a < b ? ((std::uint64_t)a << 32) | b : ((std::uint64_t)b << 32) | a;
  };
  auto get = [&](std::uint32_t a, std::uint32_t b) -> std::uint8_t {
    if (dense)
      return memo_dense[(size_t)std::min(a, b) * count + std::max(a, b)];
    auto it = memo_sparse.find(key_of(a, b));
    return it == memo_sparse.end() ? 0 : it->second;
  };
  auto put = [&](std::uint32_t a, std::uint32_t b, std::uint8_t v) {
    if (dense)
      memo_dense[(size_t)std::min(a, b) * count + std::max(a, b)] = v;
    else
      memo_sparse[key_of(a, b)] = v;
  };

  bool observable = true;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> path;
  std::unordered_map<std::uint64_t, size_t> on_path;
  for (std::uint32_t a = 0; a < count && observable; ++a) {
    for (std::uint32_t b = a + 1; b < count; ++b) {
      if (get(a, b))
        continue;
      path.clear();
      on_path.clear();
      std::uint32_t x = a, y = b;
      std::uint8_t verdict;
      while (true) {
        if (x == y) {
          verdict = 2;
          break;
        }
        std::uint8_t m = get(x, y);
        if (m) {
          verdict = m;
          break;
        }
        if (bn_output(net, x) != bn_output(net, y)) {
          verdict = 1;
          path.emplace_back(x, y);
          break;
        }
        std::uint64_t key = key_of(x, y);
        auto it = on_path.find(key);
        if (it != on_path.end()) {
          verdict = 2;
          break;
        }
        on_path[key] = path.size();
        path.emplace_back(x, y);
        x = walker.step(x);
        y = walker.step(y);
      }
      for (auto [px, py] : path)
        put(px, py, verdict);
      if (verdict == 2) {
        observable = false;
        break;
      }
    }
  }
  return observable;
}

bool observability_bruteforce(const BooleanNetwork &net) {
  if (net.n > kBruteforceGuard)
    throw std::invalid_argument("observability_bruteforce: n exceeds guard");
  PairWalker walker(net);
  const std::uint64_t count = std::uint64_t{1} << net.n;
  std::atomic<bool> counterexample{false};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
  for (std::int64_t a = 0; a < (std::int64_t)count; ++a) {
    if (counterexample.load(std::memory_order_relaxed))
      continue;
    for (std::uint32_t b = (std::uint32_t)a + 1; b < count; ++b) {
      if (!walker.distinguishable((std::uint32_t)a, b)) {
        counterexample.store(true, std::memory_order_relaxed);
        break;
      }
    }
  }
  return !counterexample.load();
}

BooleanNetwork conjunctive_bn(const MarkedDigraph &g) {
  BooleanNetwork net;
  net.n = g.vertex_count();
  net.nodes.assign(net.n + 1, {});
  net.outputs = g.marked();
  for (int i = 1; i <= net.n; ++i) {
    std::vector<int> ins = g.in_neighbors(i);
    std::sort(ins.begin(), ins.end());
    int k = (int)ins.size();
    std::vector<char> table(1u << k, 0);
    table[(1u << k) - 1] = 1;
    if (k == 0)
      table[0] = 0; // constant 0 for sources
    net.nodes[i] = BnNode{std::move(ins), std::move(table)};
  }
  return net;
}

BooleanNetwork sample_consistent_bn(const MarkedDigraph &g,
                                    std::uint64_t seed) {
  SplitMix64 rng(seed);
  BooleanNetwork net;
  net.n = g.vertex_count();
  net.nodes.assign(net.n + 1, {});
  net.outputs = g.marked();
  for (int i = 1; i <= net.n; ++i) {
    std::vector<int> ins = g.in_neighbors(i);
    std::sort(ins.begin(), ins.end());
    int k = (int)ins.size();
    std::vector<char> table(1u << k, 0);
    if (k == 0) {
      table[0] = (char)(rng.next() & 1);
    } else {
      const int budget = 100000;
      int tries = 0;
      while (true) {
        if (++tries > budget)
          throw std::runtime_error(
              "sample_consistent_bn: rejection budget exhausted at node x" +
              std::to_string(i));
        for (auto &cell : table)
          cell = (char)(rng.next() & 1);
        bool ok = true;
        for (int q = 1; q <= k && ok; ++q)
          ok = input_essential(table, k, q);
        if (ok)
          break;
      }
    }
    net.nodes[i] = BnNode{std::move(ins), std::move(table)};
  }
  return net;
}

} // namespace sog
