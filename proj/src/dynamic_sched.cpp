#include "wsnlife/dynamic_sched.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "wsnlife/allocation.hpp"
#include "wsnlife/error.hpp"
#include "wsnlife/parallel.hpp"
#include "wsnlife/static_sched.hpp"

namespace wsnlife {

namespace {

constexpr double kSimplexFloor = 1e-4;
constexpr double kPivotTol = 1e-11;
constexpr double kPriceTol = 1e-12;
constexpr int kBlandAfter = 50;
constexpr double kTauFloor = 1e-12;
constexpr int kMaxPivots = 200000;

std::vector<std::vector<int>> all_orders(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> out;
  out.reserve(factorial(n));
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

int columns_per_order(const EnergyMode& mode, int samples) {
  return is_srra(mode) ? 1 : samples;
}

// Columns of one order written into out[0 .. columns_per_order).
void fill_columns(const Cluster& cluster, const EnergyMode& mode,
                  const std::vector<int>& order, std::span<Column> out) {
  const int n = cluster.size();
  const StaticResult eq = evaluate_schedule(order, cluster, mode);
  out[0].order = order;
  out[0].energy = eq.energy_by_node();
  if (!is_srra(mode)) out[0].times = eq.time_by_node();

  for (int s = 1; s < static_cast<int>(out.size()); ++s) {
    const std::vector<double> t = simplex_sample(n, s);
    Column& c = out[s];
    c.order = order;
    c.times.assign(n, 0.0);
    c.energy.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
      const NodeSpec& node = cluster.node(order[k]);
      c.times[order[k]] = t[k];
      c.energy[order[k]] =
          tx_energy(eq.schedule.loads[k], t[k], mode) * node.path_loss;
    }
  }
}

void check_samples(int samples) {
  if (samples < 1) {
    throw Error(ErrorKind::kValidation, "samples_per_schedule must be >= 1");
  }
}

}  // namespace

std::vector<double> simplex_sample(int n, int index) {
  if (n < 1 || index < 1) {
    throw Error(ErrorKind::kValidation, "simplex_sample needs n >= 1, index >= 1");
  }
  if (n == 1) return {1.0};
  // Kronecker sequence with the generalized golden ratio of dimension n-1.
  const int dim = n - 1;
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
  std::vector<double> u(dim);
  double a = 1.0;
  for (int i = 0; i < dim; ++i) {
    a /= phi;
    const double v = 0.5 + static_cast<double>(index) * a;
    u[i] = v - std::floor(v);
  }
  std::sort(u.begin(), u.end());
  std::vector<double> t(n);
  double prev = 0.0;
  for (int i = 0; i < dim; ++i) {
    t[i] = u[i] - prev;
    prev = u[i];
  }
  t[dim] = 1.0 - prev;
  const double scale = 1.0 - n * kSimplexFloor;
  for (double& x : t) x = kSimplexFloor + scale * x;
  return t;
}

std::vector<Column> build_columns_serial(const Cluster& cluster,
                                         const EnergyMode& mode,
                                         std::span<const std::vector<int>> orders,
                                         int samples_per_schedule) {
  check_samples(samples_per_schedule);
  const int per = columns_per_order(mode, samples_per_schedule);
  std::vector<Column> out(orders.size() * per);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    fill_columns(cluster, mode, orders[i],
                 std::span<Column>(out).subspan(i * per, per));
  }
  return out;
}

std::vector<Column> build_columns(const Cluster& cluster, const EnergyMode& mode,
                                  std::span<const std::vector<int>> orders,
                                  int samples_per_schedule, int threads) {
  check_samples(samples_per_schedule);
  const int per = columns_per_order(mode, samples_per_schedule);
  std::vector<Column> out(orders.size() * per);
  parallel_blocks(orders.size(), threads, [&](std::size_t i) {
    fill_columns(cluster, mode, orders[i],
                 std::span<Column>(out).subspan(i * per, per));
  });
  return out;
}

std::vector<Column> build_columns(const Cluster& cluster, const EnergyMode& mode,
                                  int samples_per_schedule, int threads) {
  if (cluster.size() > kMaxColumnNodes) {
    throw Error(ErrorKind::kGuard,
                "full column enumeration limited to N <= " +
                    std::to_string(kMaxColumnNodes) + " (got N = " +
                    std::to_string(cluster.size()) + ")");
  }
  const auto orders = all_orders(cluster.size());
  return build_columns(cluster, mode, orders, samples_per_schedule, threads);
}

LpSolution solve_lp(std::span<const Column> columns,
                    std::span<const double> energies) {
  const std::size_t m = energies.size();
  const std::size_t ncol = columns.size();
  if (m == 0 || ncol == 0) {
    throw Error(ErrorKind::kValidation, "LP needs at least one row and column");
  }
  for (double e : energies) {
    if (!(e > 0.0)) throw Error(ErrorKind::kValidation, "energies must be > 0");
  }

  LpSolution sol;
  sol.tau.assign(ncol, 0.0);

  // Column j is stored divided by the battery row-wise and by its own largest
  // entry, so every entry lies in [0, 1] and its objective weight is 1/scale.
  const auto rows = static_cast<Eigen::Index>(m);
  const std::size_t total = ncol + m;
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(ncol));
  std::vector<double> cost(total, 0.0);
  std::vector<double> scale(ncol, 1.0);
  for (std::size_t c = 0; c < ncol; ++c) {
    if (columns[c].energy.size() != m) {
      throw Error(ErrorKind::kValidation,
                  "column " + std::to_string(c) + " has the wrong length");
    }
    double peak = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double v = columns[c].energy[r];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::kValidation,
                    "column energies must be finite and >= 0");
      }
      peak = std::max(peak, v / energies[r]);
    }
    if (peak == 0.0) {
      sol.lifetime = std::numeric_limits<double>::infinity();
      return sol;
    }
    scale[c] = peak;
    cost[c] = 1.0 / peak;
    for (std::size_t r = 0; r < m; ++r) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          columns[c].energy[r] / energies[r] / peak;
    }
  }
  auto column = [&](std::size_t j) -> Eigen::VectorXd {
    if (j < ncol) return a.col(static_cast<Eigen::Index>(j));
    return Eigen::VectorXd::Unit(rows, static_cast<Eigen::Index>(j - ncol));
  };

  std::vector<std::size_t> basis(m);
  std::vector<char> in_basis(total, 0);
  for (std::size_t r = 0; r < m; ++r) {
    basis[r] = ncol + r;
    in_basis[ncol + r] = 1;
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rows);
  Eigen::MatrixXd bmat(rows, rows);
  Eigen::VectorXd cb(rows);
  Eigen::VectorXd x;
  int stalled = 0;

  for (;;) {
    // The basis is refactored every pivot; it is at most N x N.
    for (std::size_t r = 0; r < m; ++r) {
      bmat.col(static_cast<Eigen::Index>(r)) = column(basis[r]);
      cb(static_cast<Eigen::Index>(r)) = cost[basis[r]];
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
    x = lu.solve(ones);
    const Eigen::VectorXd y = bmat.transpose().fullPivLu().solve(cb);

    // Dantzig pricing, switching to Bland's rule while degenerate.
    const bool bland = stalled > kBlandAfter;
    std::size_t enter = total;
    double best = kPriceTol;
    for (std::size_t j = 0; j < total; ++j) {
      if (in_basis[j]) continue;
      const double d = j < ncol ? cost[j] - y.dot(a.col(static_cast<Eigen::Index>(j)))
                                : -y(static_cast<Eigen::Index>(j - ncol));
      if (d > best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter == total) break;

    const Eigen::VectorXd w = lu.solve(column(enter));
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (w(r) > kPivotTol) ratio = std::min(ratio, std::max(0.0, x(r)) / w(r));
    }
    std::size_t leave = m;
    for (std::size_t r = 0; r < m; ++r) {
      const double wr = w(static_cast<Eigen::Index>(r));
      if (wr <= kPivotTol) continue;
      const double q = std::max(0.0, x(static_cast<Eigen::Index>(r))) / wr;
      if (q <= ratio + 1e-12 * std::max(1.0, ratio) &&
          (leave == m || basis[r] < basis[leave])) {
        leave = r;
      }
    }
    if (leave == m) {
      // Cannot happen with positive batteries and no all-zero column.
      throw Error(ErrorKind::kNumeric, "LP reported unbounded direction");
    }
    stalled = ratio <= 1e-14 ? stalled + 1 : 0;
    in_basis[basis[leave]] = 0;
    in_basis[enter] = 1;
    basis[leave] = enter;
    if (++sol.pivots > kMaxPivots) {
      throw Error(ErrorKind::kNumeric, "simplex pivot limit exceeded");
    }
  }

  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < ncol) {
      sol.tau[basis[r]] =
          std::max(0.0, x(static_cast<Eigen::Index>(r))) / scale[basis[r]];
    }
  }
  // Pull the point back inside if round-off left any row marginally over.
  std::vector<double> use(m, 0.0);
  for (std::size_t c = 0; c < ncol; ++c) {
    if (sol.tau[c] == 0.0) continue;
    for (std::size_t r = 0; r < m; ++r) {
      use[r] += sol.tau[c] * columns[c].energy[r] / energies[r];
    }
  }
  const double worst = *std::max_element(use.begin(), use.end());
  if (worst > 1.0) {
    for (double& t : sol.tau) t /= worst;
    for (double& u : use) u /= worst;
  }
  sol.lifetime = 0.0;
  for (double t : sol.tau) sol.lifetime += t;
  for (std::size_t r = 0; r < m; ++r) {
    if (use[r] >= 1.0 - 1e-9) sol.active_rows.push_back(static_cast<int>(r));
  }
  return sol;
}

DynamicPlan make_plan(std::span<const Column> columns, const LpSolution& lp) {
  DynamicPlan plan;
  plan.lifetime = lp.lifetime;
  plan.active_rows = lp.active_rows;
  plan.columns_considered = columns.size();
  if (lp.unbounded()) return plan;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    // Degenerate pivots can leave round-off sized weights in the basis.
    if (lp.tau[c] > kTauFloor * lp.lifetime) {
      plan.entries.push_back({columns[c], lp.tau[c]});
    }
  }
  return plan;
}

DynamicPlan dynamic_lifetime(const Cluster& cluster, const EnergyMode& mode,
                             int samples_per_schedule, int threads) {
  const std::vector<Column> cols =
      build_columns(cluster, mode, samples_per_schedule, threads);
  const std::vector<double> e = cluster.energies();
  return make_plan(cols, solve_lp(cols, e));
}

std::vector<double> lifetime_by_cooperation_size(const Cluster& cluster,
                                                 const EnergyMode& mode,
                                                 int samples_per_schedule,
                                                 int threads) {
  if (cluster.size() > kMaxColumnNodes) {
    throw Error(ErrorKind::kGuard, "cooperation sweep limited to N <= " +
                                       std::to_string(kMaxColumnNodes));
  }
  std::vector<StaticResult> ranked;
  for (const auto& order : all_orders(cluster.size())) {
    ranked.push_back(evaluate_schedule(order, cluster, mode));
  }
  std::sort(ranked.begin(), ranked.end(), better_static);
  std::vector<std::vector<int>> orders;
  for (const auto& r : ranked) orders.push_back(r.schedule.order);

  const std::vector<Column> cols =
      build_columns(cluster, mode, orders, samples_per_schedule, threads);
  const std::size_t per = cols.size() / orders.size();
  const std::vector<double> e = cluster.energies();
  std::vector<double> out;
  for (std::size_t m = 1; m <= orders.size(); ++m) {
    out.push_back(
        solve_lp(std::span<const Column>(cols).subspan(0, m * per), e).lifetime);
  }
  return out;
}

CooperationReport two_node_cooperation(const Cluster& cluster, int samples,
                                       int grid) {
  if (cluster.size() != 2) {
    throw Error(ErrorKind::kValidation, "two-node cooperation needs N = 2");
  }
  if (grid < 2) throw Error(ErrorKind::kValidation, "grid must be >= 2");
  const EnergyMode mode = Shannon{};
  const std::array<int, 2> o1{0, 1};
  const std::array<int, 2> o2{1, 0};
  StaticResult first = evaluate_schedule(o1, cluster, mode);
  StaticResult second = evaluate_schedule(o2, cluster, mode);
  if (better_static(second, first)) std::swap(first, second);
  for (double h : first.schedule.loads) {
    if (!(h > 0.0)) {
      throw Error(ErrorKind::kValidation,
                  "two-node cooperation needs positive loads");
    }
  }

  CooperationReport rep;
  rep.static_lifetime = first.lifetime;
  rep.static_order = {first.schedule.order[0], first.schedule.order[1]};
  rep.static_time = first.times[0];
  rep.marginal_bits = first.schedule.loads[0];
  rep.conditional_bits = first.schedule.loads[1];
  rep.dynamic_lifetime = dynamic_lifetime(cluster, mode, samples).lifetime;

  // Node a is polled first by the static winner; coordinates are per-slot
  // energy divided by battery, so the equal-lifetime line is u_a = u_b.
  const NodeSpec& a = cluster.node(rep.static_order[0]);
  const NodeSpec& b = cluster.node(rep.static_order[1]);
  const double h = rep.marginal_bits;
  const double hc = rep.conditional_bits;
  const double hb = second.schedule.loads[0];
  const double ha_given_b = second.schedule.loads[1];
  const double t = rep.static_time;
  const double s_floor = (h * t - (h - hc)) / hc;

  for (int i = 0; i < grid; ++i) {
    const double r = (i + 0.5) / grid;
    if (!(r < t)) continue;
    const double p1a = shannon_energy(h, r) * a.path_loss / a.energy;
    const double p1b = shannon_energy(hc, 1.0 - r) * b.path_loss / b.energy;
    for (int j = 0; j < grid; ++j) {
      const double s = (j + 0.5) / grid;
      if (!(s > s_floor)) continue;
      const double p2a = shannon_energy(ha_given_b, s) * a.path_loss / a.energy;
      const double p2b = shannon_energy(hb, 1.0 - s) * b.path_loss / b.energy;
      const double g1 = p1b - p1a;
      const double g2 = p2b - p2a;
      if (g1 == g2) continue;
      // Both weights are formed directly; 1 - lambda cancels when the
      // energies span many orders of magnitude.
      const double lambda = g1 / (g1 - g2);
      const double mu = g2 / (g2 - g1);
      if (lambda < 0.0 || mu < 0.0) continue;
      const double ua = mu * p1a + lambda * p2a;
      const double ub = mu * p1b + lambda * p2b;
      const double life = 1.0 / std::max(ua, ub);
      if (!std::isfinite(life)) continue;
      if (life > rep.static_lifetime * (1.0 + 1e-12) &&
          (!rep.found_pair || life > rep.pair_lifetime)) {
        rep.found_pair = true;
        rep.r = r;
        rep.s = s;
        rep.pair_lifetime = life;
      }
    }
  }
  return rep;
}

}  // namespace wsnlife
