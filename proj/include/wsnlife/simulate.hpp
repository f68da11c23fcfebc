#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wsnlife/dynamic_sched.hpp"
#include "wsnlife/model.hpp"
#include "wsnlife/static_sched.hpp"

namespace wsnlife {

struct SlotRecord {
  std::size_t slot = 0;
  std::size_t column = 0;        // plan entry executed (0 for static plans)
  std::vector<double> spent;     // energy drawn this slot, by node id
  std::vector<double> remaining; // battery after the slot, by node id
};

struct SimTrace {
  std::vector<SlotRecord> slots;  // empty when recording is off
  std::size_t completed = 0;
  int first_dead = -1;  // node that could not pay for the next slot
};

struct SimOptions {
  bool record = true;
  std::size_t max_slots = 1'000'000;
  double slack = 1e-9;  // absolute battery tolerance per comparison
};

/// Repeats one per-slot energy vector (by node id) until some node cannot
/// pay. Completed slots equal floor(min_k E_k / e_k) up to the slack.
SimTrace simulate_static(std::span<const double> per_slot_energy,
                         std::span<const double> batteries,
                         const SimOptions& opts = {});

SimTrace simulate_static(const StaticResult& plan, const Cluster& cluster,
                         const SimOptions& opts = {});

/// Runs every plan entry floor(tau) times, largest tau first, then tries
/// each entry once more in the same order while batteries allow.
SimTrace simulate_dynamic(const DynamicPlan& plan, const Cluster& cluster,
                          const SimOptions& opts = {});

}  // namespace wsnlife
