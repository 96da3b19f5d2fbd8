// Times the OpenMP kernels against their serial reference implementations:
// pair-space observability brute force, the random-digraph marking
// experiment, and exhaustive finite-field weight enumeration. The serial
// and parallel results must agree; a mismatch aborts the run.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sog/boolnet.hpp"
#include "sog/ffn.hpp"
#include "sog/min_realize.hpp"
#include "sog/rng.hpp"
#include "sog/sog_check.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

sog::MarkedDigraph random_digraph(int n, double p, double mark_frac,
                                  std::uint64_t seed) {
  sog::SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (rng.bernoulli(p))
        edges.emplace_back(i, j);
  std::vector<int> marked;
  for (int v = 1; v <= n; ++v)
    if (rng.bernoulli(mark_frac))
      marked.push_back(v);
  if (marked.empty())
    marked.push_back(1);
  return sog::MarkedDigraph(n, std::move(edges), std::move(marked));
}

void report(const char *name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx\n",
              name, serial_s, parallel_s,
              parallel_s > 0 ? serial_s / parallel_s : 0.0);
}

int run_observability(int n, std::uint64_t seeds) {
  double ts = 0, tp = 0;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    // Mark the graph into an SOG first so the sweep has to visit the whole
    // pair space (observable networks have no early-out counterexample).
    sog::MarkedDigraph base = random_digraph(n, 2.5 / n, 0.0, 100 + seed);
    sog::MarkPlan marks = sog::solve_problem1(base);
    sog::MarkedDigraph g = base.with_marked(marks.added_marks);
    sog::BooleanNetwork net = sog::sample_consistent_bn(g, seed);
    auto t0 = Clock::now();
    bool serial = sog::observability_bruteforce_serial(net);
    ts += seconds_since(t0);
    t0 = Clock::now();
    bool parallel = sog::observability_bruteforce(net);
    tp += seconds_since(t0);
    if (serial != parallel) {
      std::fprintf(stderr, "observability mismatch at seed %llu\n",
                   (unsigned long long)seed);
      return 1;
    }
  }
  report("observability brute force", ts, tp);
  return 0;
}

int run_rand_exp(int n, int trials) {
  auto t0 = Clock::now();
#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
#endif
  sog::RandomExperimentSummary serial =
      sog::random_experiment(n, 1.0 / n, trials, 31337);
  double ts = seconds_since(t0);
#ifdef _OPENMP
  omp_set_num_threads(max_threads);
#endif
  t0 = Clock::now();
  sog::RandomExperimentSummary parallel =
      sog::random_experiment(n, 1.0 / n, trials, 31337);
  double tp = seconds_since(t0);
  if (serial.mean_marks != parallel.mean_marks ||
      serial.mean_critical != parallel.mean_critical) {
    std::fprintf(stderr, "random_experiment mismatch\n");
    return 1;
  }
  report("random marking experiment", ts, tp);
  return 0;
}

int run_ffn_enumeration() {
  double ts = 0, tp = 0;
  int done = 0;
  for (std::uint64_t seed = 0; done < 6 && seed < 200; ++seed) {
    sog::MarkedDigraph base = random_digraph(5, 0.3, 0.0, 500 + seed);
    sog::MarkPlan plan = sog::solve_problem1(base);
    sog::MarkedDigraph g = base.with_marked(plan.added_marks);
    if (g.edges().size() > 9 || g.edges().size() < 5)
      continue;
    ++done;
    auto t0 = Clock::now();
    bool serial = sog::exhaustive_strong_observability_serial(g, 5);
    ts += seconds_since(t0);
    t0 = Clock::now();
    bool parallel = sog::exhaustive_strong_observability(g, 5);
    tp += seconds_since(t0);
    if (serial != parallel) {
      std::fprintf(stderr, "ffn enumeration mismatch at seed %llu\n",
                   (unsigned long long)seed);
      return 1;
    }
  }
  report("ffn weight enumeration", ts, tp);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  int obs_n = 11;
  int exp_n = 120, exp_trials = 40;
  if (argc > 1)
    obs_n = std::stoi(argv[1]);
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  int rc = 0;
  rc |= run_observability(obs_n, 3);
  rc |= run_rand_exp(exp_n, exp_trials);
  rc |= run_ffn_enumeration();
  return rc;
}
