#include "wsnlife/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wsnlife/error.hpp"
#include "wsnlife/static_sched.hpp"

namespace wsnlife {

namespace {

constexpr double kEps = 1e-4;
constexpr double kStationarity = 1e-8;
constexpr int kMaxFrankWolfe = 200000;
constexpr std::uint64_t kMaxSubsets = 5'000'000;

void compositions(int parts, int total, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int j = 0; j <= total; ++j) {
    cur.push_back(j);
    compositions(parts - 1, total - j, cur, out);
    cur.pop_back();
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMaxSubsets * 16) return r;
  }
  return r;
}

}  // namespace

std::vector<EnergyPoint> surface_sample(std::span<const int> order,
                                        const Cluster& cluster, int density) {
  if (density < 1) throw Error(ErrorKind::kValidation, "density must be >= 1");
  const int n = cluster.size();
  if (!is_permutation_of(order, n)) {
    throw Error(ErrorKind::kValidation, "order must be a permutation");
  }
  const Schedule s = cluster.schedule_loads(order);
  std::vector<std::vector<int>> lattice;
  std::vector<int> cur;
  compositions(n, density, cur, lattice);

  const double scale = 1.0 - n * kEps;
  std::vector<EnergyPoint> out;
  out.reserve(lattice.size());
  for (const auto& j : lattice) {
    EnergyPoint p;
    p.order.assign(order.begin(), order.end());
    p.energy.assign(n, 0.0);
    p.times.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
      const double t = kEps + scale * j[k] / static_cast<double>(density);
      const int id = order[k];
      p.times[id] = t;
      p.energy[id] = shannon_energy(s.loads[k], t) * cluster.node(id).path_loss;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> combine(std::span<const std::vector<double>> points,
                            std::span<const double> weights) {
  std::vector<double> p(points.front().size(), 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += weights[j] * points[j][i];
  }
  return p;
}

WeightVector min_norm_weights(std::span<const std::vector<double>> points) {
  const std::size_t m = points.size();
  if (m == 0) throw Error(ErrorKind::kValidation, "need at least one point");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw Error(ErrorKind::kValidation, "points must share one dimension");
    }
  }

  WeightVector out;
  out.weights.assign(m, 1.0 / static_cast<double>(m));
  if (m == 1) {
    out.combined = points.front();
    return out;
  }

  // Gram matrix: gradient of |P r|^2 is 2 G r.
  std::vector<double> gram(m * m);
  double scale = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      gram[a * m + b] = dot(points[a], points[b]);
    }
    scale = std::max(scale, gram[a * m + a]);
  }
  if (scale == 0.0) {
    out.combined.assign(dim, 0.0);
    return out;
  }

  std::vector<double> grad(m);
  auto& r = out.weights;
  for (int it = 0; it < kMaxFrankWolfe; ++it) {
    for (std::size_t a = 0; a < m; ++a) {
      double g = 0.0;
      for (std::size_t b = 0; b < m; ++b) g += gram[a * m + b] * r[b];
      grad[a] = g;
    }
    std::size_t toward = 0;
    std::size_t away = m;
    for (std::size_t a = 0; a < m; ++a) {
      if (grad[a] < grad[toward]) toward = a;
      if (r[a] > 0.0 && (away == m || grad[a] > grad[away])) away = a;
    }
    out.gap = (grad[away] - grad[toward]) / scale;
    out.iterations = it;
    if (out.gap <= kStationarity) break;

    // Move weight from `away` to `toward` with exact line search.
    const double curv = gram[toward * m + toward] - 2.0 * gram[toward * m + away] +
                        gram[away * m + away];
    double step = r[away];
    if (curv > 0.0) step = std::min(step, (grad[away] - grad[toward]) / curv);
    r[toward] += step;
    r[away] -= step;
    if (r[away] < 1e-15) r[away] = 0.0;
  }

  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  for (double& w : r) w /= total;
  out.on_boundary = std::any_of(r.begin(), r.end(), [](double w) { return w == 0.0; });
  out.combined = combine(points, r);
  return out;
}

WeightVector min_norm_weights(std::span<const EnergyPoint> points) {
  std::vector<std::vector<double>> raw;
  raw.reserve(points.size());
  for (const auto& p : points) raw.push_back(p.energy);
  return min_norm_weights(raw);
}

double lifetime_from_weights(std::span<const std::vector<double>> points,
                             std::span<const double> weights,
                             std::span<const double> energies) {
  if (points.empty() || points.size() != weights.size()) {
    throw Error(ErrorKind::kValidation, "one weight per point required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw Error(ErrorKind::kValidation, "weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::kValidation, "weights must sum to 1");
  }
  const std::vector<double> p = combine(points, weights);
  double life = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      any = true;
      life = std::min(life, energies[i] / p[i]);
    }
  }
  if (!any) {
    throw Error(ErrorKind::kValidation,
                "combined point has no positive coordinate");
  }
  return life;
}

SubsetSweep best_over_subsets(std::span<const std::vector<double>> points,
                              std::span<const double> energies, int max_m) {
  const std::size_t total = points.size();
  if (total == 0 || max_m < 1) {
    throw Error(ErrorKind::kValidation, "need points and max_m >= 1");
  }
  const auto top = std::min<std::size_t>(static_cast<std::size_t>(max_m), total);
  std::uint64_t count = 0;
  for (std::size_t m = 1; m <= top; ++m) count += binomial(total, m);
  if (count > kMaxSubsets) {
    throw Error(ErrorKind::kGuard, "subset enumeration too large (" +
                                       std::to_string(count) + " subsets)");
  }

  SubsetSweep out;
  out.overall = 0.0;
  std::vector<std::vector<double>> chosen;
  for (std::size_t m = 1; m <= top; ++m) {
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    double best = -1.0;
    std::vector<std::size_t> best_idx;
    for (;;) {
      chosen.clear();
      for (std::size_t i : idx) chosen.push_back(points[i]);
      const WeightVector w = min_norm_weights(chosen);
      const double life = lifetime_from_weights(chosen, w.weights, energies);
      if (life > best) {
        best = life;
        best_idx = idx;
      }
      // Next combination in lexicographic order.
      std::size_t k = m;
      while (k > 0 && idx[k - 1] == total - m + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t q = k; q < m; ++q) idx[q] = idx[q - 1] + 1;
    }
    out.lifetime_by_m.push_back(best);
    out.best_subset.push_back(best_idx);
    out.overall = std::max(out.overall, best);
  }
  return out;
}

CrossingReport equal_energy_crossing(const Cluster& cluster) {
  if (cluster.size() != 2) {
    throw Error(ErrorKind::kValidation, "equal-energy crossing needs N = 2");
  }
  CrossingReport rep;
  const std::array<std::array<int, 2>, 2> orders{{{0, 1}, {1, 0}}};
  for (int c = 0; c < 2; ++c) {
    const auto& o = orders[c];
    const Schedule s = cluster.schedule_loads(o);
    if (!(s.loads[0] > 0.0) || !(s.loads[1] > 0.0)) {
      throw Error(ErrorKind::kValidation, "crossing needs positive loads");
    }
    const NodeSpec& a = cluster.node(o[0]);
    const NodeSpec& b = cluster.node(o[1]);
    // Battery-scaled energy difference, strictly decreasing in t.
    auto diff = [&](double t) {
      return shannon_energy(s.loads[0], t) * a.path_loss / a.energy -
             shannon_energy(s.loads[1], 1.0 - t) * b.path_loss / b.energy;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (diff(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    Crossing& x = rep.crossings[c];
    x.order = o;
    x.time = 0.5 * (lo + hi);
    const double ea = shannon_energy(s.loads[0], x.time) * a.path_loss;
    const double eb = shannon_energy(s.loads[1], 1.0 - x.time) * b.path_loss;
    x.energy[o[0]] = ea;
    x.energy[o[1]] = eb;
    x.lifetime = std::min(a.energy / ea, b.energy / eb);
    x.distance = std::hypot(ea / a.energy, eb / b.energy);
  }
  rep.closer = rep.crossings[1].distance < rep.crossings[0].distance ? 1 : 0;
  return rep;
}

std::vector<std::array<double, 2>> hull_2d(
    std::span<const std::array<double, 2>> points) {
  if (points.empty()) throw Error(ErrorKind::kValidation, "hull needs points");
  std::vector<std::array<double, 2>> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> lower;
  for (const auto& p : pts) {
    while (lower.size() >= 2 &&
           cross(lower[lower.size() - 2], lower.back(), p) <= 0.0) {
      lower.pop_back();
    }
    lower.push_back(p);
  }
  // Keep the chain facing the origin: stop at the lowest vertex.
  std::size_t lowest = 0;
  for (std::size_t i = 1; i < lower.size(); ++i) {
    if (lower[i][1] < lower[lowest][1]) lowest = i;
  }
  lower.resize(lowest + 1);
  return lower;
}

std::vector<EnergyPoint> srra_points(const Cluster& cluster, double c) {
  if (cluster.size() > kMaxBruteForceNodes) {
    throw Error(ErrorKind::kGuard, "srra point cloud limited to N <= " +
                                       std::to_string(kMaxBruteForceNodes));
  }
  std::vector<int> order(cluster.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<EnergyPoint> out;
  do {
    const StaticResult r = evaluate_schedule(order, cluster, Srra{c});
    out.push_back({r.energy_by_node(), order, {}});
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

double equal_line_ratio(std::span<const double> energy,
                        std::span<const double> batteries) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < energy.size(); ++i) {
    const double u = energy[i] / batteries[i];
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  return hi > 0.0 ? lo / hi : 1.0;
}

std::size_t closest_to_equal_line(std::span<const EnergyPoint> points,
                                  std::span<const double> batteries) {
  auto peak = [&](const std::vector<double>& e) {
    double hi = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) hi = std::max(hi, e[i] / batteries[i]);
    return hi;
  };
  std::size_t best = 0;
  double best_ratio = -1.0;
  double best_peak = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = equal_line_ratio(points[i].energy, batteries);
    const double p = peak(points[i].energy);
    const double tol = 1e-12 * std::max(r, best_ratio);
    // Equal ratios: the point nearer the origin wins.
    if (r > best_ratio + tol || (std::abs(r - best_ratio) <= tol && p < best_peak)) {
      best_ratio = r;
      best_peak = p;
      best = i;
    }
  }
  return best;
}

}  // namespace wsnlife
