#include "wsnlife/static_sched.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wsnlife/allocation.hpp"
#include "wsnlife/error.hpp"
#include "wsnlife/parallel.hpp"

namespace wsnlife {

namespace {

// Relative slack under which greedy candidates count as tied.
constexpr double kTieTol = 1e-12;

std::vector<int> identity(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool nearly_less(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a < b;
  return a < b - kTieTol * std::max(std::abs(a), std::abs(b));
}

void require_size(const Cluster& cluster) {
  if (cluster.size() > kMaxBruteForceNodes) {
    throw Error(ErrorKind::kGuard,
                "exhaustive search limited to N <= " +
                    std::to_string(kMaxBruteForceNodes) + " (got N = " +
                    std::to_string(cluster.size()) + ")");
  }
}

}  // namespace

std::vector<double> StaticResult::energy_by_node() const {
  std::vector<double> out(schedule.order.size(), 0.0);
  for (std::size_t k = 0; k < schedule.order.size(); ++k) {
    out[schedule.order[k]] = per_node_energy[k];
  }
  return out;
}

std::vector<double> StaticResult::time_by_node() const {
  std::vector<double> out(schedule.order.size(), 0.0);
  for (std::size_t k = 0; k < times.size(); ++k) {
    out[schedule.order[k]] = times[k];
  }
  return out;
}

bool better_static(const StaticResult& a, const StaticResult& b) {
  if (a.lifetime != b.lifetime) return a.lifetime > b.lifetime;
  return a.schedule.order < b.schedule.order;
}

StaticResult evaluate_schedule(std::span<const int> order, const Cluster& cluster,
                               const EnergyMode& mode) {
  if (!is_permutation_of(order, cluster.size())) {
    throw Error(ErrorKind::kValidation,
                "order must be a permutation of all node ids");
  }
  StaticResult r;
  r.schedule = cluster.schedule_loads(order);
  r.method = "eval";

  const std::size_t n = order.size();
  std::vector<double> e(n), d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const NodeSpec& node = cluster.node(order[k]);
    e[k] = node.energy;
    d[k] = node.path_loss;
  }

  if (const auto* s = std::get_if<Srra>(&mode)) {
    const SrraLifetime l = lifetime_srra(r.schedule.loads, e, d, s->c);
    r.lifetime = l.lifetime;
    r.bottleneck = l.bottleneck >= 0 ? order[l.bottleneck] : -1;
    r.per_node_energy.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      r.per_node_energy[k] = s->c * r.schedule.loads[k] * d[k];
    }
    return r;
  }

  AllocationResult a = equalize(r.schedule.loads, e, d);
  r.times = std::move(a.times);
  r.per_node_energy = std::move(a.per_node_energy);
  r.lifetime = a.lifetime;
  return r;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

std::vector<int> permutation_from_rank(int n, std::uint64_t rank) {
  std::vector<int> pool = identity(n);
  std::vector<int> out;
  out.reserve(n);
  for (int k = n; k >= 1; --k) {
    const std::uint64_t f = factorial(k - 1);
    const auto idx = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

StaticResult brute_force_serial(const Cluster& cluster, const EnergyMode& mode) {
  require_size(cluster);
  std::vector<int> order = identity(cluster.size());
  StaticResult best = evaluate_schedule(order, cluster, mode);
  while (std::next_permutation(order.begin(), order.end())) {
    StaticResult r = evaluate_schedule(order, cluster, mode);
    if (better_static(r, best)) best = std::move(r);
  }
  best.method = "brute";
  return best;
}

StaticResult brute_force(const Cluster& cluster, const EnergyMode& mode,
                         int threads) {
  require_size(cluster);
  const int n = cluster.size();
  const std::uint64_t total = factorial(n);
  const std::uint64_t blocks =
      std::min<std::uint64_t>(total, 8u * static_cast<std::uint64_t>(
                                              resolve_threads(threads)));
  std::vector<StaticResult> winners(blocks);

  parallel_blocks(blocks, threads, [&](std::size_t b) {
    const std::uint64_t begin = total * b / blocks;
    const std::uint64_t end = total * (b + 1) / blocks;
    std::vector<int> order = permutation_from_rank(n, begin);
    StaticResult best = evaluate_schedule(order, cluster, mode);
    for (std::uint64_t r = begin + 1; r < end; ++r) {
      std::next_permutation(order.begin(), order.end());
      StaticResult cand = evaluate_schedule(order, cluster, mode);
      if (better_static(cand, best)) best = std::move(cand);
    }
    winners[b] = std::move(best);
  });

  StaticResult best = std::move(winners[0]);
  for (std::size_t b = 1; b < winners.size(); ++b) {
    if (better_static(winners[b], best)) best = std::move(winners[b]);
  }
  best.method = "brute";
  return best;
}

StaticResult nnn(const Cluster& cluster, const EnergyMode& mode) {
  if (cluster.is_gaussian()) {
    throw Error(ErrorKind::kValidation, "nnn requires the bit-distance model");
  }
  const int n = cluster.size();
  StaticResult best;
  bool have = false;
  for (int start = 0; start < n; ++start) {
    std::vector<int> order{start};
    std::vector<char> polled(n, 0);
    polled[start] = 1;
    while (static_cast<int>(order.size()) < n) {
      int pick = -1;
      double pick_dist = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (polled[i]) continue;
        double dmin = std::numeric_limits<double>::infinity();
        for (int j : order) dmin = std::min(dmin, cluster.distance(i, j));
        if (nearly_less(dmin, pick_dist)) {
          pick = i;
          pick_dist = dmin;
        }
      }
      order.push_back(pick);
      polled[pick] = 1;
    }
    StaticResult r = evaluate_schedule(order, cluster, mode);
    if (!have || better_static(r, best)) {
      best = std::move(r);
      have = true;
    }
  }
  best.method = "nnn";
  return best;
}

StaticResult mcn(const Cluster& cluster, const EnergyMode& mode) {
  if (!is_srra(mode)) {
    throw Error(ErrorKind::kValidation, "mcn requires the srra energy mode");
  }
  const int n = cluster.size();
  std::vector<int> order;
  std::vector<char> polled(n, 0);
  while (static_cast<int>(order.size()) < n) {
    int pick = -1;
    double pick_cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (polled[i]) continue;
      const NodeSpec& node = cluster.node(i);
      const double cost = cluster.bits(i, order) * node.path_loss / node.energy;
      if (pick < 0 || nearly_less(cost, pick_cost)) {
        pick = i;
        pick_cost = cost;
      }
    }
    order.push_back(pick);
    polled[pick] = 1;
  }
  StaticResult r = evaluate_schedule(order, cluster, mode);
  r.method = "mcn";
  return r;
}

double path_length(const Cluster& cluster, std::span<const int> order) {
  double len = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    len += cluster.distance(order[k - 1], order[k]);
  }
  return len;
}

std::vector<int> nearest_neighbor_path(const Cluster& cluster, int start) {
  const int n = cluster.size();
  std::vector<int> path{start};
  std::vector<char> used(n, 0);
  used[start] = 1;
  for (int step = 1; step < n; ++step) {
    const int cur = path.back();
    int pick = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = cluster.distance(cur, j);
      if (nearly_less(d, best)) {
        best = d;
        pick = j;
      }
    }
    used[pick] = 1;
    path.push_back(pick);
  }
  return path;
}

std::vector<int> two_opt(const Cluster& cluster, std::vector<int> path) {
  const std::size_t n = path.size();
  if (n < 3) return path;
  auto dist = [&](std::size_t a, std::size_t b) {
    return cluster.distance(path[a], path[b]);
  };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // whole-path reversal
        double before = 0.0;
        double after = 0.0;
        if (i > 0) {
          before += dist(i - 1, i);
          after += dist(i - 1, j);
        }
        if (j + 1 < n) {
          before += dist(j, j + 1);
          after += dist(i, j + 1);
        }
        if (after < before - 1e-12 * std::max(1.0, before)) {
          std::reverse(path.begin() + static_cast<std::ptrdiff_t>(i),
                       path.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return path;
}

std::vector<int> shp_path(const Cluster& cluster) {
  std::vector<int> best;
  double best_len = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<int>& p) {
    const double len = path_length(cluster, p);
    if (best.empty() || nearly_less(len, best_len) ||
        (!nearly_less(best_len, len) && p < best)) {
      best = p;
      best_len = len;
    }
  };
  for (int start = 0; start < cluster.size(); ++start) {
    std::vector<int> p = two_opt(cluster, nearest_neighbor_path(cluster, start));
    consider(p);
    std::reverse(p.begin(), p.end());
    consider(p);
  }
  return best;
}

StaticResult shp_heuristic(const Cluster& cluster, const EnergyMode& mode) {
  if (!cluster.is_gaussian()) {
    throw Error(ErrorKind::kValidation,
                "shp heuristic requires the Gaussian-field model");
  }
  StaticResult r = evaluate_schedule(shp_path(cluster), cluster, mode);
  r.method = "shp";
  return r;
}

std::vector<double> sorted_srra_lifetimes(const Cluster& cluster,
                                          std::span<const int> order, double c) {
  const Schedule s = cluster.schedule_loads(order);
  std::vector<double> out;
  out.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const NodeSpec& node = cluster.node(order[k]);
    out.push_back(s.loads[k] > 0.0
                      ? node.energy / (c * s.loads[k] * node.path_loss)
                      : std::numeric_limits<double>::infinity());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wsnlife
