#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sog/boolnet.hpp"
#include "sog/min_realize.hpp"
#include "sog/pinning.hpp"
#include "sog/rng.hpp"
#include "sog/sog_check.hpp"
#include "sog/stp.hpp"
#include "test_util.hpp"

using namespace sog;

namespace {

LogicalMatrix random_logical(SplitMix64 &rng, int rows, int cols) {
  LogicalMatrix m;
  m.rows = rows;
  m.cols.resize(cols);
  for (int j = 0; j < cols; ++j)
    m.cols[j] = 1 + (int)rng.below((std::uint64_t)rows);
  return m;
}

bool dense_equal(const DenseMatrix &a, const DenseMatrix &b) {
  return a.rows == b.rows && a.cols == b.cols && a.a == b.a;
}

BooleanExpression random_expr(SplitMix64 &rng, int arity, int depth) {
  if (depth == 0 || rng.below(4) == 0) {
    if (rng.below(8) == 0)
      return BooleanExpression::constant(rng.below(2) != 0);
    return BooleanExpression::variable(1 + (int)rng.below(arity));
  }
  switch (rng.below(4)) {
  case 0:
    return BooleanExpression::make(BooleanExpression::Kind::Not,
                                   {random_expr(rng, arity, depth - 1)});
  case 1:
    return BooleanExpression::make(BooleanExpression::Kind::And,
                                   {random_expr(rng, arity, depth - 1),
                                    random_expr(rng, arity, depth - 1)});
  case 2:
    return BooleanExpression::make(BooleanExpression::Kind::Or,
                                   {random_expr(rng, arity, depth - 1),
                                    random_expr(rng, arity, depth - 1)});
  default:
    return BooleanExpression::make(BooleanExpression::Kind::Xor,
                                   {random_expr(rng, arity, depth - 1),
                                    random_expr(rng, arity, depth - 1)});
  }
}

} // namespace

TEST_CASE("stp reduces to the ordinary product on conforming dimensions") {
  SplitMix64 rng(1);
  for (int rep = 0; rep < 30; ++rep) {
    LogicalMatrix a = random_logical(rng, 4, 4);
    LogicalMatrix b = random_logical(rng, 4, 3);
    DenseMatrix want = multiply(to_dense(a), to_dense(b));
    CHECK(dense_equal(to_dense(stp(a, b)), want));
    CHECK(dense_equal(stp(to_dense(a), to_dense(b)), want));
  }
}

TEST_CASE("swap matrix exchanges canonical factors") {
  for (int m : {2, 3, 4})
    for (int n : {2, 3, 4}) {
      LogicalMatrix w = swap_matrix(m, n);
      for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) {
          LogicalMatrix u = LogicalMatrix::canonical_vector(i, m);
          LogicalMatrix v = LogicalMatrix::canonical_vector(j, n);
          LogicalMatrix uv = stp(u, v);
          LogicalMatrix vu = stp(v, u);
          CHECK(stp(w, uv) == vu);
        }
    }
}

TEST_CASE("dummy and power-reducing identities on canonical arguments") {
  LogicalMatrix front = dummy_matrix_front();
  LogicalMatrix rear = dummy_matrix_rear();
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      LogicalMatrix u = LogicalMatrix::canonical_vector(i, 2);
      LogicalMatrix v = LogicalMatrix::canonical_vector(j, 2);
      CHECK(stp(stp(front, u), v) == u);
      CHECK(stp(stp(rear, u), v) == v);
    }
  for (int k : {2, 4, 8, 16}) {
    LogicalMatrix mr = power_reducing_matrix(k);
    for (int i = 1; i <= k; ++i) {
      LogicalMatrix e = LogicalMatrix::canonical_vector(i, k);
      CHECK(stp(mr, e) == stp(e, e));
    }
  }
}

TEST_CASE("swap identities hold up to dimension 16") {
  for (int m : {2, 4, 8, 16})
    for (int n : {2, 4}) {
      LogicalMatrix w = swap_matrix(m, n);
      for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j) {
          LogicalMatrix uv =
              stp(LogicalMatrix::canonical_vector(i, m),
                  LogicalMatrix::canonical_vector(j, n));
          LogicalMatrix vu =
              stp(LogicalMatrix::canonical_vector(j, n),
                  LogicalMatrix::canonical_vector(i, m));
          CHECK(stp(w, uv) == vu);
        }
    }
}

TEST_CASE("stp associativity on random logical matrices") {
  SplitMix64 rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    LogicalMatrix a = random_logical(rng, 2 + (int)rng.below(3),
                                     2 + (int)rng.below(4));
    LogicalMatrix b = random_logical(rng, 2 + (int)rng.below(3),
                                     2 + (int)rng.below(4));
    LogicalMatrix c = random_logical(rng, 2 + (int)rng.below(3),
                                     2 + (int)rng.below(4));
    CHECK(stp(stp(a, b), c) == stp(a, stp(b, c)));
    // the dense route agrees with the logical fast path
    CHECK(dense_equal(to_dense(stp(a, b)), stp(to_dense(a), to_dense(b))));
  }
}

TEST_CASE("structure matrix basics") {
  CHECK(structure_matrix(parse_expression("x1"), 1) ==
        LogicalMatrix::identity(2));
  CHECK(structure_matrix(parse_expression("!x1"), 1) == negation_matrix());
  CHECK(structure_matrix(parse_expression("x1 & x2"), 2) == and_matrix());
  CHECK(structure_matrix(parse_expression("x1 | x2"), 2) == or_matrix());
  CHECK(structure_matrix(parse_expression("x1 ^ x2"), 2) == xor_matrix());
}

TEST_CASE("structure matrix equals truth-table evaluation") {
  SplitMix64 rng(33);
  for (int rep = 0; rep < 100; ++rep) {
    int arity = 1 + (int)rng.below(6);
    BooleanExpression f = random_expr(rng, arity, 3);
    LogicalMatrix mf = structure_matrix(f, arity);
    std::vector<char> values(arity + 1, 0);
    for (int idx = 0; idx < (1 << arity); ++idx) {
      std::vector<char> args(arity);
      for (int q = 1; q <= arity; ++q) {
        values[q] = (idx >> (q - 1)) & 1;
        args[q - 1] = values[q];
      }
      bool want = f.eval(values);
      // M_f x1 ... xk as an STP chain of canonical vectors
      LogicalMatrix acc = mf;
      for (int q = 0; q < arity; ++q)
        acc = stp(acc, LogicalMatrix::canonical_vector(
                           canonical_index(args[q] != 0), 2));
      CHECK(acc.rows == 2);
      REQUIRE(acc.col_count() == 1);
      CHECK(acc.cols[0] == canonical_index(want));
      // and the direct column lookup agrees
      CHECK(mf.cols[canonical_arg_index(args) - 1] == canonical_index(want));
    }
  }
}

namespace {

PinningPlan tlgl_pinning(const std::vector<int> &negated = {}) {
  BnParseResult r = load_bn_file(sog_test::data_path("tlgl29.bn"));
  MarkedDigraph g = dependency_graph(r.net);
  ControlPlan plan = solve_problem2(g);
  return design_pinning(r.net, plan, negated);
}

} // namespace

TEST_CASE("T-LGL pinning realizes plain copies") {
  PinningPlan pin = tlgl_pinning();
  CHECK(pin.nodes.size() == 15);
  for (const auto &pn : pin.nodes) {
    CHECK(pin.pinned.nodes[pn.node].inputs == std::vector<int>{pn.phi});
    CHECK(pin.pinned.nodes[pn.node].table == std::vector<char>{0, 1});
  }
  // pinned digraph equals the plan's rewired graph and is an SOG
  BnParseResult r = load_bn_file(sog_test::data_path("tlgl29.bn"));
  MarkedDigraph g = dependency_graph(r.net);
  ControlPlan plan = solve_problem2(g);
  CHECK(dependency_graph(pin.pinned) == plan.result);
  CHECK(is_sog(dependency_graph(pin.pinned)).sog);
}

TEST_CASE("pin types cover I, II and III") {
  // x1 constant (type III candidate), x2 reads x1, x3 reads x2 and itself.
  BnParseResult r =
      parse_bn("x1 = 1\nx2 = !x1\nx3 = x2 & x3\noutputs: x3");
  MarkedDigraph g = dependency_graph(r.net);
  // control x1 <- x3 (type III), x2 <- x2's non-input x3 (type I),
  // x3 <- its own input x2 (type II) -- built by hand
  ControlPlan plan;
  plan.controlled = {1, 2, 3};
  plan.assignment = {{1, 3}, {2, 3}, {3, 2}};
  plan.result = g.with_controlled(1, 3).with_controlled(2, 3)
                    .with_controlled(3, 2);
  PinningPlan pin = design_pinning(r.net, plan);
  CHECK(pin.nodes[0].type == PinType::III);
  CHECK(pin.nodes[1].type == PinType::I);
  CHECK(pin.nodes[2].type == PinType::II);
  for (const auto &pn : pin.nodes)
    CHECK(pin.pinned.nodes[pn.node].table == std::vector<char>{0, 1});
}

TEST_CASE("type III with constant-0 node uses the OR coupling") {
  BnParseResult r = parse_bn("x1 = 0\nx2 = x1\noutputs: x2");
  ControlPlan plan;
  plan.controlled = {1};
  plan.assignment = {{1, 2}};
  plan.result = dependency_graph(r.net).with_controlled(1, 2);
  PinningPlan pin = design_pinning(r.net, plan);
  REQUIRE(pin.nodes.size() == 1);
  CHECK(pin.nodes[0].type == PinType::III);
  CHECK(pin.nodes[0].m_oplus == or_matrix());
  CHECK(pin.pinned.nodes[1].table == std::vector<char>{0, 1});
}

TEST_CASE("negated polarity realizes the negated copy and stays an SOG") {
  BnParseResult r =
      parse_bn("x1 = x2 | x3\nx2 = x1\nx3 = x1 ^ x2\noutputs: x3");
  MarkedDigraph g = dependency_graph(r.net);
  ControlPlan plan = solve_problem2(g);
  if (!plan.controlled.empty()) {
    PinningPlan pin = design_pinning(r.net, plan, {plan.controlled[0]});
    CHECK(pin.pinned.nodes[plan.controlled[0]].table ==
          std::vector<char>{1, 0});
    CHECK(is_sog(dependency_graph(pin.pinned)).sog);
    CHECK(observability_bruteforce_serial(pin.pinned));
  }
}

TEST_CASE("pinning on random small networks keeps equations exact") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int n = 2 + (int)(seed % 5);
    MarkedDigraph g =
        sog_test::random_digraph(n, 0.3, 0.35, 91000 + seed, 1, true);
    BooleanNetwork net = sample_consistent_bn(g, seed + 3);
    ControlPlan plan = solve_problem2(g);
    // design_pinning checks Type I/II residuals and the realized dynamics
    // exhaustively; reaching here means they were exactly solvable
    PinningPlan pin = design_pinning(net, plan);
    CHECK(dependency_graph(pin.pinned) == plan.result);
    CHECK(observability_bruteforce_serial(pin.pinned));
  }
}

TEST_CASE("observer schedule basics") {
  BnParseResult r = load_bn_file(sog_test::data_path("eq9_oa.bn"));
  MarkedDigraph g = dependency_graph(r.net);
  ControlPlan plan = solve_problem2(g); // empty: already an SOG
  PinningPlan pin = design_pinning(r.net, plan);
  Observer obs = build_observer(pin.pinned);
  // sensor node reads itself at delay 0
  CHECK(obs.schedule[0].node == 1);
  CHECK(obs.schedule[0].sensor == 1);
  CHECK(obs.schedule[0].delay == 0);
  CHECK_FALSE(obs.schedule[0].negate);
  // v2 is one step from the sensor, v3 two steps
  CHECK(obs.schedule[1].delay == 1);
  CHECK(obs.schedule[2].delay == 2);
  CHECK(obs.max_delay == 2);
}

TEST_CASE("estimation inverts chains of negations") {
  // x3 -> x2 -> x1 with negating edge functions; sensor x1
  BnParseResult r = parse_bn("x1 = !x2\nx2 = !x3\nx3 = 1\noutputs: x1");
  Observer obs = build_observer(r.net);
  // delays: x1:0, x2:1, x3:2; parities: x2 one negation, x3 two
  CHECK(obs.schedule[1].delay == 1);
  CHECK(obs.schedule[1].negate);
  CHECK(obs.schedule[2].delay == 2);
  CHECK_FALSE(obs.schedule[2].negate);
  for (std::uint64_t x0 = 0; x0 < 8; ++x0) {
    StateTrajectory tr = simulate(r.net, x0, obs.max_delay);
    CHECK(estimate_initial_state(obs, tr.outputs) == x0);
  }
}

TEST_CASE("estimation rejects short and corrupted series") {
  BnParseResult r = parse_bn("x1 = !x2\nx2 = !x3\nx3 = 1\noutputs: x1");
  Observer obs = build_observer(r.net);
  StateTrajectory tr = simulate(r.net, 5, obs.max_delay);
  std::vector<std::uint64_t>
      short_series(tr.outputs.begin(), tr.outputs.end() - 1);
  CHECK_THROWS_AS(estimate_initial_state(obs, short_series),
                  std::invalid_argument);
  std::vector<std::uint64_t> corrupted = tr.outputs;
  corrupted.push_back(corrupted.back());
  corrupted.push_back(1 - (corrupted.back() & 1));
  CHECK_THROWS_AS(estimate_initial_state(obs, corrupted),
                  std::runtime_error);
}

TEST_CASE("T-LGL estimate round-trips on random initial states") {
  PinningPlan pin = tlgl_pinning();
  Observer obs = build_observer(pin.pinned);
  SplitMix64 rng(555);
  for (int rep = 0; rep < 100; ++rep) {
    std::uint64_t x0 = rng.below(std::uint64_t{1} << 29);
    StateTrajectory tr = simulate(pin.pinned, x0, obs.max_delay);
    CHECK(estimate_initial_state(obs, tr.outputs) == x0);
  }
}

TEST_CASE("output CSV parsing") {
  std::vector<std::uint64_t> ys =
      parse_output_csv("k,x,y\n0,101,10\n1,011,01\n", 2);
  REQUIRE(ys.size() == 2);
  CHECK(ys[0] == 0b01);
  CHECK(ys[1] == 0b10);
  CHECK_THROWS_AS(parse_output_csv("a,b\n0,1\n", 1), ParseError);
  CHECK_THROWS_AS(parse_output_csv("k,y\n0,111\n", 2), ParseError);
}

TEST_CASE("pinning JSON lists matrices in column-index form") {
  PinningPlan pin = tlgl_pinning();
  std::string j = pinning_plan_to_json(pin);
  CHECK(j.find("\"pinned_nodes\"") != std::string::npos);
  CHECK(j.find("\"m_oplus\"") != std::string::npos);
  CHECK(j.find("\"columns\"") != std::string::npos);
  CHECK(j.find("\"realized\":[0,1]") != std::string::npos);
}

TEST_CASE("in-degree guard") {
  BooleanNetwork net;
  net.n = 22;
  net.nodes.assign(23, {});
  std::vector<int> ins;
  for (int v = 2; v <= 22; ++v)
    ins.push_back(v);
  net.nodes[1] = BnNode{ins, std::vector<char>(1u << 21, 1)};
  for (int v = 2; v <= 22; ++v)
    net.nodes[v] = BnNode{{1}, {0, 1}};
  net.outputs = {2};
  ControlPlan plan;
  plan.controlled = {1};
  plan.assignment = {{1, 2}};
  plan.result = dependency_graph(net).with_controlled(1, 2);
  CHECK_THROWS_AS(design_pinning(net, plan), std::invalid_argument);
}
