#include "wsnlife/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wsnlife/error.hpp"

namespace wsnlife {

namespace {

void check_vector(std::span<const double> energy, std::size_t n) {
  if (energy.size() != n) {
    throw Error(ErrorKind::kUnknownNode,
                "plan energy vector has " + std::to_string(energy.size()) +
                    " entries for " + std::to_string(n) + " nodes");
  }
  for (double e : energy) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw Error(ErrorKind::kValidation, "per-slot energies must be finite and >= 0");
    }
  }
}

void check_order(std::span<const int> order, std::size_t n) {
  for (int id : order) {
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      throw Error(ErrorKind::kUnknownNode,
                  "plan references unknown node " + std::to_string(id));
    }
  }
}

// Node with the largest shortfall if `cost` were paid from `battery`, or -1.
int blocking_node(std::span<const double> battery, std::span<const double> cost,
                  double slack) {
  int worst = -1;
  double worst_def = 0.0;
  for (std::size_t k = 0; k < battery.size(); ++k) {
    const double def = cost[k] - battery[k];
    if (def > slack && (worst < 0 || def > worst_def)) {
      worst = static_cast<int>(k);
      worst_def = def;
    }
  }
  return worst;
}

}  // namespace

SimTrace simulate_static(std::span<const double> per_slot_energy,
                         std::span<const double> batteries,
                         const SimOptions& opts) {
  const std::size_t n = batteries.size();
  check_vector(per_slot_energy, n);
  if (std::all_of(per_slot_energy.begin(), per_slot_energy.end(),
                  [](double e) { return e == 0.0; })) {
    throw Error(ErrorKind::kGuard, "plan spends no energy: lifetime is unbounded");
  }

  SimTrace trace;
  std::vector<double> remaining(batteries.begin(), batteries.end());
  std::vector<double> next(n);
  for (;;) {
    // Remaining battery is recomputed from the slot count, not accumulated.
    const auto s = static_cast<double>(trace.completed + 1);
    for (std::size_t k = 0; k < n; ++k) next[k] = batteries[k] - s * per_slot_energy[k];
    int dead = -1;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (next[k] < -opts.slack && (dead < 0 || next[k] < worst)) {
        dead = static_cast<int>(k);
        worst = next[k];
      }
    }
    if (dead >= 0) {
      trace.first_dead = dead;
      break;
    }
    if (trace.completed >= opts.max_slots) {
      throw Error(ErrorKind::kGuard, "simulation exceeds " +
                                         std::to_string(opts.max_slots) + " slots");
    }
    remaining = next;
    if (opts.record) {
      trace.slots.push_back({trace.completed, 0,
                             std::vector<double>(per_slot_energy.begin(),
                                                 per_slot_energy.end()),
                             remaining});
    }
    ++trace.completed;
  }
  return trace;
}

SimTrace simulate_static(const StaticResult& plan, const Cluster& cluster,
                         const SimOptions& opts) {
  check_order(plan.schedule.order, static_cast<std::size_t>(cluster.size()));
  if (plan.per_node_energy.size() != plan.schedule.order.size()) {
    throw Error(ErrorKind::kValidation, "static plan lacks per-node energies");
  }
  const std::vector<double> e = plan.energy_by_node();
  const std::vector<double> b = cluster.energies();
  return simulate_static(e, b, opts);
}

SimTrace simulate_dynamic(const DynamicPlan& plan, const Cluster& cluster,
                          const SimOptions& opts) {
  const auto n = static_cast<std::size_t>(cluster.size());
  if (plan.unbounded()) {
    throw Error(ErrorKind::kGuard, "plan has unbounded lifetime");
  }
  for (const auto& entry : plan.entries) {
    check_order(entry.column.order, n);
    check_vector(entry.column.energy, n);
  }

  std::vector<std::size_t> rank(plan.entries.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return plan.entries[a].slots > plan.entries[b].slots;
  });

  SimTrace trace;
  std::vector<double> remaining = cluster.energies();

  auto try_slot = [&](std::size_t c) {
    const auto& cost = plan.entries[c].column.energy;
    const int block = blocking_node(remaining, cost, opts.slack);
    if (block >= 0) {
      trace.first_dead = block;
      return false;
    }
    if (trace.completed >= opts.max_slots) {
      throw Error(ErrorKind::kGuard, "simulation exceeds " +
                                         std::to_string(opts.max_slots) + " slots");
    }
    for (std::size_t k = 0; k < n; ++k) remaining[k] -= cost[k];
    if (opts.record) trace.slots.push_back({trace.completed, c, cost, remaining});
    ++trace.completed;
    return true;
  };

  for (std::size_t c : rank) {
    const auto whole = static_cast<std::size_t>(std::floor(plan.entries[c].slots));
    for (std::size_t i = 0; i < whole; ++i) {
      if (!try_slot(c)) break;
    }
  }
  for (std::size_t c : rank) try_slot(c);
  return trace;
}

}  // namespace wsnlife
