#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "sog/boolnet.hpp"
#include "sog/ffn.hpp"
#include "sog/graph.hpp"
#include "sog/min_realize.hpp"
#include "sog/pinning.hpp"
#include "sog/sog_check.hpp"

using nlohmann::ordered_json;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fnv1a_hex(const std::string &data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

struct Report {
  ordered_json j;
  Report(const std::string &command, const std::string &input,
         const std::string &content) {
    j["command"] = command;
    j["input"] = input;
    j["digest"] = fnv1a_hex(content);
  }
};

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write file: " + path);
  out << content;
}

sog::MarkedDigraph load_graph_any(const std::string &path,
                                  std::string *content_out) {
  std::string content = slurp(path);
  if (content_out)
    *content_out = content;
  // JSON graphs start with '{'; everything else is the line format.
  for (char c : content) {
    if (std::isspace((unsigned char)c))
      continue;
    if (c == '{')
      return sog::graph_from_json(content);
    break;
  }
  return sog::parse_graph(content);
}

int cmd_check(const std::string &path, bool json, const std::string &dot) {
  std::string content;
  sog::MarkedDigraph g = load_graph_any(path, &content);
  sog::SogResult res = sog::is_sog(g);
  std::optional<std::vector<int>> crit;
  if (res.sog)
    crit = sog::critical_sensors(g);
  if (!dot.empty()) {
    std::vector<std::pair<std::string, std::vector<int>>> hi;
    hi.emplace_back("p1_failures", res.report.p1_failures);
    write_file(dot, sog::to_dot(g, hi));
  }
  if (json) {
    Report rep("check", path, content);
    rep.j["report"] = nlohmann::json::parse(sog::report_to_json(res, crit));
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << (res.sog ? "SOG: yes" : "SOG: no") << "\n";
    if (!res.report.p1_failures.empty()) {
      std::cout << "P1 failures:";
      for (int v : res.report.p1_failures)
        std::cout << " v" << v;
      std::cout << "\n";
    }
    if (!res.report.p2_failures.empty()) {
      std::cout << "P2-failing OP-CCs: " << res.report.p2_failures.size()
                << "\n";
    }
    if (res.cover) {
      std::cout << "observed paths:\n";
      for (const auto &p : res.cover->paths) {
        std::cout << " ";
        for (int v : p)
          std::cout << " v" << v;
        std::cout << "\n";
      }
    }
    if (crit) {
      std::cout << "critical sensors:";
      for (int v : *crit)
        std::cout << " v" << v;
      std::cout << " (h* = " << crit->size() << ")\n";
    }
  }
  return res.sog ? 0 : 1;
}

int cmd_mark_min(const std::string &path, bool json) {
  std::string content;
  sog::MarkedDigraph g = load_graph_any(path, &content);
  sog::MarkPlan plan = sog::solve_problem1(g);
  if (json) {
    Report rep("mark-min", path, content);
    rep.j["plan"] = nlohmann::json::parse(sog::mark_plan_to_json(plan));
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << "marks needed: " << plan.added_marks.size() << "\n";
    if (!plan.added_marks.empty()) {
      std::cout << "mark:";
      for (int v : plan.added_marks)
        std::cout << " v" << v;
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_control_min(const std::string &path, bool json) {
  std::string content;
  sog::MarkedDigraph g = load_graph_any(path, &content);
  if (g.marked().empty()) {
    // no sensor anywhere: no amount of rewiring helps
    if (json) {
      Report rep("control-min", path, content);
      rep.j["plan"] = nullptr;
      rep.j["n_star"] = "infinite";
      std::cout << rep.j.dump() << "\n";
    } else {
      std::cout << "n_star: infinite (graph has no marked vertex)\n";
    }
    return 1;
  }
  sog::ControlPlan plan = sog::solve_problem2(g);
  if (json) {
    Report rep("control-min", path, content);
    rep.j["plan"] = nlohmann::json::parse(sog::control_plan_to_json(plan));
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << "controlled vertices: " << plan.controlled.size() << "\n";
    for (int v : plan.controlled)
      std::cout << "  v" << v << " <- v" << plan.assignment.at(v)
                << " (new unique in-neighbor)\n";
  }
  return 0;
}

int cmd_critical(const std::string &path, bool json) {
  std::string content;
  sog::MarkedDigraph g = load_graph_any(path, &content);
  std::vector<int> crit = sog::critical_sensors(g);
  if (json) {
    Report rep("critical-sensors", path, content);
    rep.j["critical_sensors"] = crit;
    rep.j["h_star"] = crit.size();
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << "critical sensors (" << crit.size() << "):";
    for (int v : crit)
      std::cout << " v" << v;
    std::cout << "\n";
  }
  return 0;
}

int cmd_export_dot(const std::string &path, const std::string &out,
                   bool annotate) {
  std::string content;
  sog::MarkedDigraph g = load_graph_any(path, &content);
  std::vector<std::pair<std::string, std::vector<int>>> hi;
  if (annotate) {
    sog::PropertyReport rep = sog::check_properties(g);
    hi.emplace_back("p1_failures", rep.p1_failures);
  }
  std::string dot = sog::to_dot(g, hi);
  if (out.empty())
    std::cout << dot;
  else
    write_file(out, dot);
  return 0;
}

void print_warnings(const sog::BnParseResult &parsed) {
  for (const auto &w : parsed.warnings)
    std::cerr << "warning: " << w << "\n";
}

int cmd_bn_deps(const std::string &path, bool json, const std::string &dot) {
  std::string content = slurp(path);
  sog::BnParseResult parsed = sog::parse_bn(content);
  print_warnings(parsed);
  sog::MarkedDigraph g = sog::dependency_graph(parsed.net);
  if (!dot.empty())
    write_file(dot, sog::to_dot(g));
  if (json) {
    Report rep("bn deps", path, content);
    rep.j["graph"] = nlohmann::json::parse(sog::graph_to_json(g));
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << sog::render_graph(g);
  }
  return 0;
}

int cmd_bn_obs(const std::string &path, bool json, bool serial) {
  std::string content = slurp(path);
  sog::BnParseResult parsed = sog::parse_bn(content);
  print_warnings(parsed);
  bool obs = serial ? sog::observability_bruteforce_serial(parsed.net)
                    : sog::observability_bruteforce(parsed.net);
  if (json) {
    Report rep("bn obs", path, content);
    rep.j["observable"] = obs;
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << (obs ? "observable: yes" : "observable: no") << "\n";
  }
  return obs ? 0 : 1;
}

int cmd_bn_structural(const std::string &path, bool json) {
  std::string content = slurp(path);
  sog::BnParseResult parsed = sog::parse_bn(content);
  print_warnings(parsed);
  sog::MarkedDigraph g = sog::dependency_graph(parsed.net);
  sog::SogResult res = sog::is_sog(g);
  if (json) {
    Report rep("bn structural-check", path, content);
    rep.j["structurally_observable"] = res.sog;
    rep.j["report"] =
        nlohmann::json::parse(sog::report_to_json(res, std::nullopt));
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << (res.sog ? "structurally observable: yes"
                          : "structurally observable: no")
              << "\n";
  }
  return res.sog ? 0 : 1;
}

int cmd_bn_pin(const std::string &path, bool json,
               const std::vector<int> &negate) {
  std::string content = slurp(path);
  sog::BnParseResult parsed = sog::parse_bn(content);
  print_warnings(parsed);
  sog::MarkedDigraph g = sog::dependency_graph(parsed.net);
  sog::ControlPlan plan = sog::solve_problem2(g);
  sog::PinningPlan pin = sog::design_pinning(parsed.net, plan, negate);
  if (json) {
    Report rep("bn pin", path, content);
    rep.j["plan"] = nlohmann::json::parse(sog::control_plan_to_json(plan));
    rep.j["pinning"] =
        nlohmann::json::parse(sog::pinning_plan_to_json(pin));
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << "pinned nodes: " << plan.controlled.size() << "\n";
    for (const auto &pn : pin.nodes) {
      std::cout << "  x" << pn.node << " <- "
                << (pn.negate ? "!x" : "x") << pn.phi << "  (type "
                << (pn.type == sog::PinType::I    ? "I"
                    : pn.type == sog::PinType::II ? "II"
                                                  : "III")
                << ")\n";
    }
  }
  return 0;
}

int cmd_bn_estimate(const std::string &path, const std::string &log_path,
                    bool json) {
  std::string content = slurp(path);
  sog::BnParseResult parsed = sog::parse_bn(content);
  print_warnings(parsed);
  sog::MarkedDigraph g = sog::dependency_graph(parsed.net);
  sog::ControlPlan plan = sog::solve_problem2(g);
  sog::PinningPlan pin = sog::design_pinning(parsed.net, plan);
  sog::Observer obs = sog::build_observer(pin.pinned);
  std::vector<std::uint64_t> ys = sog::parse_output_csv(
      slurp(log_path), (int)pin.pinned.outputs.size());
  std::uint64_t x0 = sog::estimate_initial_state(obs, ys);
  if (json) {
    Report rep("bn estimate", path, content);
    rep.j["x0"] = sog::bits_from_state(x0, parsed.net.n);
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << "x[0] = " << sog::bits_from_state(x0, parsed.net.n) << "\n";
  }
  return 0;
}

int cmd_bn_simulate(const std::string &path, const std::string &x0_bits,
                    int steps) {
  std::string content = slurp(path);
  sog::BnParseResult parsed = sog::parse_bn(content);
  print_warnings(parsed);
  std::uint64_t x0 = sog::state_from_bits(x0_bits);
  sog::StateTrajectory tr = sog::simulate(parsed.net, x0, steps);
  std::cout << sog::trajectory_to_csv(parsed.net, tr);
  return 0;
}

int cmd_ffn_design(const std::string &path, int p, bool json) {
  std::string content;
  sog::MarkedDigraph g = load_graph_any(path, &content);
  auto net = sog::design_observable_ffn(g, p);
  if (json) {
    Report rep("ffn design", path, content);
    if (net)
      rep.j["network"] = nlohmann::json::parse(sog::ffn_to_json(*net));
    else
      rep.j["network"] = nullptr;
    std::cout << rep.j.dump() << "\n";
  } else {
    if (net) {
      std::cout << "designed observable network over F_" << p << "\n";
      for (int i = 1; i <= net->n; ++i)
        for (int j = 1; j <= net->n; ++j)
          if (net->weight(i, j))
            std::cout << "  weight " << i << " " << j << " "
                      << net->weight(i, j) << "\n";
    } else {
      std::cout << "no cover found\n";
    }
  }
  return net ? 0 : 1;
}

int cmd_ffn_check(const std::string &path, bool json) {
  std::string content = slurp(path);
  sog::FiniteFieldNetwork net = sog::parse_ffn(content);
  bool obs = sog::observability_rank(net);
  if (json) {
    Report rep("ffn check", path, content);
    rep.j["observable"] = obs;
    std::cout << rep.j.dump() << "\n";
  } else {
    std::cout << (obs ? "observable: yes" : "observable: no") << "\n";
  }
  return obs ? 0 : 1;
}

int cmd_rand_exp(int n, double p, int trials, std::uint64_t seed, bool json) {
  sog::RandomExperimentSummary s = sog::random_experiment(n, p, trials, seed);
  if (json) {
    ordered_json j;
    j["command"] = "rand-exp";
    j["n"] = s.n;
    j["p"] = s.p;
    j["trials"] = s.trials;
    j["mean_controls"] = s.mean_controls;
    j["mean_critical"] = s.mean_critical;
    j["mean_marks"] = s.mean_marks;
    j["mean_mark_fraction"] = s.mean_marks / s.n;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "trials: " << s.trials << "  n: " << s.n << "  p: " << s.p
              << "\n";
    std::cout << "mean N* (controls)      : " << s.mean_controls << "\n";
    std::cout << "mean h* (critical)      : " << s.mean_critical << "\n";
    std::cout << "mean N*+h* (marks)      : " << s.mean_marks << "\n";
    std::cout << "mean mark fraction n*/n : " << s.mean_marks / s.n << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"structural observability toolkit for marked digraphs"};
  app.require_subcommand(1);

  std::string graph_path, bn_path, log_path, dot_path, out_path, x0_bits;
  bool json = false, serial = false, annotate = false;
  int prime = 2, n = 0, trials = 0, steps = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> negate;

  auto *check = app.add_subcommand("check", "decide whether a graph is an SOG");
  check->add_option("graph", graph_path)->required();
  check->add_flag("--json", json);
  check->add_option("--dot", dot_path);

  auto *markmin = app.add_subcommand("mark-min", "minimum extra marks");
  markmin->add_option("graph", graph_path)->required();
  markmin->add_flag("--json", json);

  auto *ctrlmin = app.add_subcommand("control-min", "minimum vertex control");
  ctrlmin->add_option("graph", graph_path)->required();
  ctrlmin->add_flag("--json", json);

  auto *crit = app.add_subcommand("critical-sensors",
                                  "sensors whose failure breaks the SOG");
  crit->add_option("graph", graph_path)->required();
  crit->add_flag("--json", json);

  auto *dot = app.add_subcommand("export-dot", "write the graph as DOT");
  dot->add_option("graph", graph_path)->required();
  dot->add_option("--out", out_path);
  dot->add_flag("--annotate", annotate);

  auto *bn = app.add_subcommand("bn", "Boolean network commands");
  bn->require_subcommand(1);
  auto *deps = bn->add_subcommand("deps", "dependency graph of a network");
  deps->add_option("bn", bn_path)->required();
  deps->add_flag("--json", json);
  deps->add_option("--dot", dot_path);
  auto *obs = bn->add_subcommand("obs", "brute-force observability");
  obs->add_option("bn", bn_path)->required();
  obs->add_flag("--json", json);
  obs->add_flag("--serial", serial);
  auto *sc = bn->add_subcommand("structural-check",
                                "structural observability via the graph");
  sc->add_option("bn", bn_path)->required();
  sc->add_flag("--json", json);
  auto *pin = bn->add_subcommand("pin", "minimum pinning design");
  pin->add_option("bn", bn_path)->required();
  pin->add_flag("--json", json);
  pin->add_option("--negate", negate,
                  "pinned nodes realized as the negated copy");
  auto *est = bn->add_subcommand("estimate", "initial state from an output log");
  est->add_option("bn", bn_path)->required();
  est->add_option("--log", log_path)->required();
  est->add_flag("--json", json);
  auto *sim = bn->add_subcommand("simulate", "dump a trajectory as CSV");
  sim->add_option("bn", bn_path)->required();
  sim->add_option("--x0", x0_bits)->required();
  sim->add_option("--steps", steps)->required();

  auto *ffn = app.add_subcommand("ffn", "finite-field network commands");
  ffn->require_subcommand(1);
  auto *design = ffn->add_subcommand("design", "design an observable network");
  design->add_option("graph", graph_path)->required();
  design->add_option("-p,--prime", prime)->required();
  design->add_flag("--json", json);
  auto *fcheck = ffn->add_subcommand("check", "rank-test an FFN file");
  fcheck->add_option("ffn", graph_path)->required();
  fcheck->add_flag("--json", json);

  auto *rand = app.add_subcommand("rand-exp", "random-digraph marking estimate");
  rand->add_option("-n", n)->required();
  rand->add_option("-p", p)->required();
  rand->add_option("--trials", trials)->required();
  rand->add_option("--seed", seed)->required();
  rand->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check)
      return cmd_check(graph_path, json, dot_path);
    if (*markmin)
      return cmd_mark_min(graph_path, json);
    if (*ctrlmin)
      return cmd_control_min(graph_path, json);
    if (*crit)
      return cmd_critical(graph_path, json);
    if (*dot)
      return cmd_export_dot(graph_path, out_path, annotate);
    if (*deps)
      return cmd_bn_deps(bn_path, json, dot_path);
    if (*obs)
      return cmd_bn_obs(bn_path, json, serial);
    if (*sc)
      return cmd_bn_structural(bn_path, json);
    if (*pin)
      return cmd_bn_pin(bn_path, json, negate);
    if (*est)
      return cmd_bn_estimate(bn_path, log_path, json);
    if (*sim)
      return cmd_bn_simulate(bn_path, x0_bits, steps);
    if (*design)
      return cmd_ffn_design(graph_path, prime, json);
    if (*fcheck)
      return cmd_ffn_check(graph_path, json);
    if (*rand)
      return cmd_rand_exp(n, p, trials, seed, json);
  } catch (const sog::ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
