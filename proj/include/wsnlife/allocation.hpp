#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace wsnlife {

/// Time split of one slot and the lifetime it yields. Vectors are aligned
/// with the loads passed to equalize (polling position k).
struct AllocationResult {
  std::vector<double> times;
  std::vector<double> per_node_energy;  // f(h_k, t_k) * d_k
  double lifetime = 0.0;                // slots, real-valued

  bool unbounded() const { return std::isinf(lifetime); }
};

/// Lifetime-equalizing time allocation: nodes with positive load receive
/// times summing to one such that E_k / (f(h_k, t_k) d_k) is the same for
/// every one of them. All-zero loads yield an unbounded lifetime.
AllocationResult equalize(std::span<const double> loads,
                          std::span<const double> energies,
                          std::span<const double> path_losses);

/// Small-rate-region lifetime of one schedule.
struct SrraLifetime {
  double lifetime = std::numeric_limits<double>::infinity();
  int bottleneck = -1;  // position index; -1 when unbounded

  bool unbounded() const { return std::isinf(lifetime); }
};

/// min over positions with h > 0 of E_k / (c h_k d_k); ties go to the
/// earliest position.
SrraLifetime lifetime_srra(std::span<const double> loads,
                           std::span<const double> energies,
                           std::span<const double> path_losses, double c);

}  // namespace wsnlife
