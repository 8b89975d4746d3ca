#include "antroute/scaling/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "antroute/random.hpp"
#include "antroute/seedstore/avl_tree.hpp"
#include "antroute/seedstore/records.hpp"

#ifdef __linux__
#include <sched.h>
#endif

namespace antroute::scaling {

namespace {

using Clock = std::chrono::steady_clock;
using Tree = seedstore::AvlTree<seedstore::PheromoneEntry>;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool pin_to_current_cpu() {
#ifdef __linux__
  const int cpu = sched_getcpu();
  if (cpu < 0) return false;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  return sched_setaffinity(0, sizeof set, &set) == 0;
#else
  return false;
#endif
}

struct Populated {
  Tree tree;
  std::vector<std::uint64_t> keys;
};

Populated populate(std::size_t n, std::mt19937_64& rng) {
  Populated p;
  p.keys.reserve(n);
  while (p.tree.size() < n) {
    const auto k = rng();
    if (p.tree.insert(k, seedstore::PheromoneEntry{k})) p.keys.push_back(k);
  }
  return p;
}

constexpr std::size_t kInsertBatch = 128;

volatile std::uint64_t g_sink = 0;
volatile std::uint64_t g_zero = 0;

std::vector<std::uint64_t> sample_keys(const Populated& p, std::size_t count, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, p.keys.size() - 1);
  std::vector<std::uint64_t> out(count);
  for (auto& k : out) k = p.keys[pick(rng)];
  return out;
}

// Walks every probe path once, untimed, so timed passes see warm caches at
// every store size and measure the search path itself.
std::uint64_t warm(const Tree& tree, const std::vector<std::uint64_t>& keys) {
  std::uint64_t acc = 0;
  for (auto k : keys) {
    if (const auto* r = tree.find(k)) acc += r->amount;
  }
  return acc;
}

// Per-lookup time: `passes` timed passes over `probes` present keys. Each key
// depends on the previous result, so lookups cannot overlap.
double time_lookups(const Populated& p, std::size_t probes, std::size_t passes, std::mt19937_64& rng) {
  const auto keys = sample_keys(p, probes, rng);
  const std::uint64_t zero = g_zero;
  std::uint64_t acc = warm(p.tree, keys);
  const auto start = Clock::now();
  for (std::size_t r = 0; r < passes; ++r) {
    for (auto k : keys) acc += p.tree.find(k ^ (acc * zero))->amount;
  }
  const double t = seconds_since(start);
  g_sink = g_sink + acc;
  return t / static_cast<double>(probes * passes);
}

// Walks the path to `key` and touches both children at each level: the nodes
// an insertion reads while rebalancing.
std::uint64_t warm_with_siblings(const Tree& tree, std::uint64_t key) {
  std::uint64_t acc = 0;
  for (const auto* n = tree.root(); n != nullptr; n = key < n->key ? n->left.get() : n->right.get()) {
    if (n->left) acc += n->left->height;
    if (n->right) acc += n->right->height;
  }
  return acc;
}

// Per-insert time into trees of size ~n. A new key k+1 follows nearly the
// same path as an existing key k; that path is warmed first. Each tree takes
// at most n/10 new keys. A timed batch spans several small trees, and stays
// small enough that the warmed paths remain in cache.
double time_inserts(std::size_t n, std::size_t ops, std::mt19937_64& rng) {
  const std::size_t per_tree = std::max<std::size_t>(1, n / 10);
  const std::size_t take = std::min(per_tree, kInsertBatch);
  const std::size_t group = std::max<std::size_t>(1, kInsertBatch / take);
  const std::uint64_t zero = g_zero;
  double total = 0;
  std::size_t done = 0;
  std::uint64_t acc = 0;
  while (done < ops) {
    std::vector<Populated> trees;
    for (std::size_t i = 0; i < group; ++i) trees.push_back(populate(n, rng));
    for (std::size_t absorbed = 0; absorbed < per_tree && done < ops; absorbed += take) {
      std::vector<std::pair<Tree*, std::uint64_t>> plan;
      for (auto& p : trees) {
        auto keys = sample_keys(p, take, rng);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (auto k : keys) plan.emplace_back(&p.tree, k + 1);
      }
      for (int w = 0; w < 2; ++w) {
        for (const auto& [tree, key] : plan) acc += warm_with_siblings(*tree, key);
      }
      {
        // recycle warm node-sized blocks for the allocations below
        std::vector<std::unique_ptr<Tree::Node>> scratch(plan.size());
        for (auto& node : scratch) node = std::make_unique<Tree::Node>();
      }
      const auto start = Clock::now();
      for (const auto& [tree, key] : plan) {
        const auto fresh = key ^ (acc * zero);
        acc += tree->insert(fresh, seedstore::PheromoneEntry{fresh});
      }
      total += seconds_since(start);
      done += plan.size();
    }
  }
  g_sink = g_sink + acc;
  return total / static_cast<double>(done);
}

// Per-tree deletion time for trees of size n.
double time_deletions(std::size_t n, std::size_t trials, std::mt19937_64& rng) {
  std::vector<Populated> forest;
  forest.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) forest.push_back(populate(n, rng));
  const auto start = Clock::now();
  for (auto& p : forest) p.tree.clear();
  return seconds_since(start) / static_cast<double>(trials);
}

}  // namespace

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

BenchmarkResult benchmark_constants(const BenchmarkConfig& config) {
  if (config.sizes.size() < 2) throw std::invalid_argument("need at least two store sizes");
  if (config.trials == 0 || config.replicas <= 0) throw std::invalid_argument("trials and replicas must be positive");
  const auto [lo, hi] = std::minmax_element(config.sizes.begin(), config.sizes.end());
  BenchmarkResult result;
  if (*lo == 0) throw std::invalid_argument("store sizes must be positive");
  if (static_cast<double>(*hi) < 100.0 * static_cast<double>(*lo)) {
    result.diagnostics.push_back("sizes span less than two decades");
  }
  if (config.pin_cpu) {
    result.pinned = pin_to_current_cpu();
    if (!result.pinned) result.diagnostics.push_back("could not pin to one CPU");
  }

  std::mt19937_64 rng(derive_seed(config.rng_seed, 0xbe9cULL));
  {
    // warm-up pass, discarded
    const auto p = populate(config.sizes.front(), rng);
    time_lookups(p, config.trials, config.lookup_passes, rng);
  }

  std::vector<double> log_n, lookups, inserts, n_vals, deletes;
  for (const auto n : config.sizes) {
    SizeSample s;
    s.size = n;
    s.deletion_trials = std::clamp<std::size_t>(config.deletion_node_budget / n, 3, config.trials);
    std::vector<double> l, ins, del;
    const auto p = populate(n, rng);
    for (int r = 0; r < config.replicas; ++r) {
      l.push_back(time_lookups(p, config.trials, config.lookup_passes, rng));
      ins.push_back(time_inserts(n, config.trials * config.insert_batches, rng));
      del.push_back(time_deletions(n, s.deletion_trials, rng));
    }
    s.lookup_seconds = median(l);
    s.insert_seconds = median(ins);
    s.delete_seconds = median(del);
    result.samples.push_back(s);
    log_n.push_back(std::log2(static_cast<double>(n)));
    n_vals.push_back(static_cast<double>(n));
    lookups.push_back(s.lookup_seconds);
    inserts.push_back(s.insert_seconds);
    deletes.push_back(s.delete_seconds);
  }
  result.lookup = least_squares(log_n, lookups);
  result.insert = least_squares(log_n, inserts);
  result.deletion = least_squares(n_vals, deletes);
  result.alpha = result.lookup.slope;
  result.beta = result.insert.slope;
  result.gamma = result.deletion.slope;
  return result;
}

}  // namespace antroute::scaling
