#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wsnlife/energy.hpp"
#include "wsnlife/model.hpp"

namespace wsnlife {

/// One schedule evaluated under an energy mode. Per-position vectors follow
/// schedule.order; times is empty in SRRA mode.
struct StaticResult {
  Schedule schedule;
  std::vector<double> times;
  std::vector<double> per_node_energy;
  double lifetime = 0.0;
  int bottleneck = -1;  // SRRA only: node id limiting the lifetime
  std::string method;

  /// Per-slot energy indexed by node id.
  std::vector<double> energy_by_node() const;
  /// Per-slot transmission time indexed by node id (Shannon mode).
  std::vector<double> time_by_node() const;
};

/// Larger lifetime wins; exact ties go to the lexicographically smaller order.
bool better_static(const StaticResult& a, const StaticResult& b);

/// Largest cluster the exhaustive search accepts.
inline constexpr int kMaxBruteForceNodes = 8;

StaticResult evaluate_schedule(std::span<const int> order, const Cluster& cluster,
                               const EnergyMode& mode);

/// Exhaustive search over all N! orders. The permutation space is cut into
/// contiguous lexicographic blocks searched in parallel; the reduction uses
/// better_static, so the winner does not depend on the thread count.
StaticResult brute_force(const Cluster& cluster, const EnergyMode& mode,
                         int threads = 0);

/// Single-threaded reference walk over std::next_permutation.
StaticResult brute_force_serial(const Cluster& cluster, const EnergyMode& mode);

/// Permutation of 0..n-1 with the given lexicographic rank.
std::vector<int> permutation_from_rank(int n, std::uint64_t rank);
std::uint64_t factorial(int n);

/// Nearest Neighbor Next for the bit-distance model: from every start node,
/// repeatedly poll the unpolled node closest to any already polled node
/// (the node needing the fewest conditional bits). Best start wins.
StaticResult nnn(const Cluster& cluster, const EnergyMode& mode);

/// Minimum Cost Next (SRRA): repeatedly poll the node with the smallest
/// conditional cost h_{i|S} d_i / E_i.
StaticResult mcn(const Cluster& cluster, const EnergyMode& mode);

/// Shortest-Hamiltonian-path heuristic for the Gaussian model.
StaticResult shp_heuristic(const Cluster& cluster, const EnergyMode& mode);

/// Open-path length through the nodes in the given order.
double path_length(const Cluster& cluster, std::span<const int> order);

/// Nearest-neighbour open path from `start`, ties to the smallest id.
std::vector<int> nearest_neighbor_path(const Cluster& cluster, int start);

/// Segment-reversal local search on an open path until no reversal shortens
/// it.
std::vector<int> two_opt(const Cluster& cluster, std::vector<int> path);

/// Shortest path found by nearest neighbour + 2-opt over all starts.
std::vector<int> shp_path(const Cluster& cluster);

/// SRRA per-node lifetimes E_k / (c h_k d_k) of a schedule, sorted ascending.
/// Zero-load nodes contribute +inf.
std::vector<double> sorted_srra_lifetimes(const Cluster& cluster,
                                          std::span<const int> order, double c);

}  // namespace wsnlife
