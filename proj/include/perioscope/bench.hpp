#ifndef PERIOSCOPE_BENCH_HPP
#define PERIOSCOPE_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "perioscope/detector.hpp"
#include "perioscope/pipeline.hpp"
#include "perioscope/simgen.hpp"

namespace perioscope {

/// Worker count for replication sweeps: PERIOSCOPE_THREADS caps the pool,
/// hardware concurrency is the default.
inline int worker_count(int n_jobs) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* env = std::getenv("PERIOSCOPE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) workers = std::min(workers, cap);
  }
  return std::min(workers, std::max(1, n_jobs));
}

/// Run fn(rep) for rep = 0..n_reps-1 on a worker pool. Results land in a
/// vector indexed by replication, so aggregation is independent of
/// scheduling order.
template <typename T>
std::vector<T> run_replications(int n_reps, const std::function<T(int)>& fn) {
  std::vector<T> results(n_reps);
  const int workers = worker_count(n_reps);
  if (workers == 1) {
    for (int rep = 0; rep < n_reps; ++rep) results[rep] = fn(rep);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int rep = next.fetch_add(1); rep < n_reps; rep = next.fetch_add(1))
          results[rep] = fn(rep);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

struct BenchConfig {
  ScoreSource source = ScoreSource::bspline;
  int p = 30;
  CriterionConfig criterion;
};

/// Simulate one replication of the spec (seed split by replication index)
/// and run the detector on its scores.
inline DetectionResult run_one_replication(const SimSpec& base_spec, const BenchConfig& bench,
                                           std::uint64_t base_seed, int rep) {
  SimSpec spec = base_spec;
  spec.seed = SeededRng(base_seed).split(static_cast<std::uint64_t>(rep)).next_u64();
  const SimResult sim = simulate(spec);
  const ScoreSeries scores = scores_from_sample(sim.sample, bench.source, bench.p);
  return detect(scores, bench.criterion);
}

/// r-hat frequency table over kappa values and seeded replications of a
/// simulation spec; row i, column j counts replications with r_hat = j
/// under kappas[i].
inline KappaTable run_kappa_bench(const SimSpec& base_spec, const BenchConfig& bench,
                                  const std::vector<double>& kappas, int n_reps,
                                  std::uint64_t base_seed) {
  if (kappas.empty()) throw std::invalid_argument("run_kappa_bench: no kappa values");
  if (n_reps < 1) throw std::invalid_argument("run_kappa_bench: need at least one replication");

  KappaTable table;
  table.kappas = kappas;
  table.r_max = bench.criterion.r_max;
  table.counts.assign(kappas.size(), std::vector<int>(bench.criterion.r_max + 1, 0));

  const std::vector<std::vector<int>> per_rep = run_replications<std::vector<int>>(
      n_reps, [&](int rep) {
        SimSpec spec = base_spec;
        spec.seed = SeededRng(base_seed).split(static_cast<std::uint64_t>(rep)).next_u64();
        const SimResult sim = simulate(spec);
        const ScoreSeries scores = scores_from_sample(sim.sample, bench.source, bench.p);
        std::vector<int> r_hats(kappas.size());
        for (std::size_t i = 0; i < kappas.size(); ++i) {
          CriterionConfig cfg = bench.criterion;
          cfg.kappa = kappas[i];
          r_hats[i] = detect(scores, cfg).r_hat;
        }
        return r_hats;
      });

  for (const std::vector<int>& r_hats : per_rep)
    for (std::size_t i = 0; i < kappas.size(); ++i) table.counts[i][r_hats[i]] += 1;
  return table;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_BENCH_HPP
