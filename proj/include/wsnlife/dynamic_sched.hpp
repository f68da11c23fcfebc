#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "wsnlife/energy.hpp"
#include "wsnlife/model.hpp"

namespace wsnlife {

/// One schedule run with one concrete time allocation. Vectors are indexed
/// by node id. In SRRA mode times is empty.
struct Column {
  std::vector<int> order;
  std::vector<double> times;
  std::vector<double> energy;  // per-slot energy f(h_k, t_k) d_k
};

/// Result of max sum(tau) s.t. sum_c tau_c e_c(k) <= E_k, tau >= 0.
struct LpSolution {
  std::vector<double> tau;        // one entry per input column
  double lifetime = 0.0;
  std::vector<int> active_rows;   // node ids whose battery is exhausted
  int pivots = 0;

  bool unbounded() const { return std::isinf(lifetime); }
};

/// Columns with tau above 1e-12 L and their slot counts.
struct PlanEntry {
  Column column;
  double slots = 0.0;
};

struct DynamicPlan {
  std::vector<PlanEntry> entries;
  double lifetime = 0.0;
  std::vector<int> active_rows;
  std::size_t columns_considered = 0;

  bool unbounded() const { return std::isinf(lifetime); }
  std::size_t support() const { return entries.size(); }
};

/// Largest cluster for which all N! schedules are turned into columns.
inline constexpr int kMaxColumnNodes = 7;
inline constexpr int kDefaultSamples = 8;

/// Deterministic low-discrepancy allocation on the time simplex with every
/// coordinate at least 1e-4. index >= 1.
std::vector<double> simplex_sample(int n, int index);

/// Columns for the given orders: the equalized allocation first, then
/// samples_per_schedule - 1 simplex samples (Shannon mode only).
std::vector<Column> build_columns(const Cluster& cluster, const EnergyMode& mode,
                                  std::span<const std::vector<int>> orders,
                                  int samples_per_schedule, int threads = 0);

/// Same, over all N! orders in lexicographic order (guarded by
/// kMaxColumnNodes).
std::vector<Column> build_columns(const Cluster& cluster, const EnergyMode& mode,
                                  int samples_per_schedule, int threads = 0);

/// Single-threaded reference for build_columns.
std::vector<Column> build_columns_serial(const Cluster& cluster,
                                         const EnergyMode& mode,
                                         std::span<const std::vector<int>> orders,
                                         int samples_per_schedule);

/// Revised primal simplex; the basis is refactored with full-pivot LU each step.
LpSolution solve_lp(std::span<const Column> columns,
                    std::span<const double> energies);

DynamicPlan make_plan(std::span<const Column> columns, const LpSolution& lp);

/// build_columns over all orders followed by solve_lp.
DynamicPlan dynamic_lifetime(const Cluster& cluster, const EnergyMode& mode,
                             int samples_per_schedule = kDefaultSamples,
                             int threads = 0);

/// Cooperation restricted to the m best static schedules, m = 1..N!.
/// Entry m-1 holds the LP lifetime with columns from the top m schedules.
std::vector<double> lifetime_by_cooperation_size(const Cluster& cluster,
                                                 const EnergyMode& mode,
                                                 int samples_per_schedule,
                                                 int threads = 0);

/// Two-node comparison of the best static schedule with cooperation.
struct CooperationReport {
  double static_lifetime = 0.0;
  double dynamic_lifetime = 0.0;
  std::array<int, 2> static_order{};  // winning static order
  double static_time = 0.0;           // time of the first polled node
  double marginal_bits = 0.0;         // h
  double conditional_bits = 0.0;      // h_{1|2}
  bool found_pair = false;            // an improving (r, s) inside the region
  double r = 0.0;
  double s = 0.0;
  double pair_lifetime = 0.0;

  double gain() const { return dynamic_lifetime - static_lifetime; }
};

/// For N = 2 in Shannon mode: optimal static lifetime, LP lifetime with
/// `samples` columns per schedule, and the best two-point mixture on a
/// grid x grid lattice of (r, s) restricted to r < t and
/// s > (h t - (h - h_{1|2})) / h_{1|2}.
CooperationReport two_node_cooperation(const Cluster& cluster, int samples = 256,
                               int grid = 400);

}  // namespace wsnlife
