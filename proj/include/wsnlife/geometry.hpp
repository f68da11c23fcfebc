#pragma once

#include <array>
#include <span>
#include <vector>

#include "wsnlife/energy.hpp"
#include "wsnlife/model.hpp"

namespace wsnlife {

/// Per-slot energy of every node (indexed by id) for one schedule and one
/// time allocation.
struct EnergyPoint {
  std::vector<double> energy;
  std::vector<int> order;
  std::vector<double> times;  // by node id; empty in SRRA mode
};

/// Points of one schedule's energy surface over a lattice on the open time
/// simplex: t_k = eps + (1 - N eps) j_k / density, sum j_k = density,
/// eps = 1e-4. Shannon mode.
std::vector<EnergyPoint> surface_sample(std::span<const int> order,
                                        const Cluster& cluster, int density);

/// Convex-combination weights minimizing the Euclidean norm of the combined
/// point.
struct WeightVector {
  std::vector<double> weights;
  std::vector<double> combined;
  bool on_boundary = false;  // some weight is zero: fewer schedules cooperate
  double gap = 0.0;          // final stationarity gap
  int iterations = 0;
};

/// Pairwise Frank-Wolfe with exact line search, started at the barycentre,
/// stopped when the stationarity gap drops below 1e-8 (relative).
WeightVector min_norm_weights(std::span<const std::vector<double>> points);
WeightVector min_norm_weights(std::span<const EnergyPoint> points);

std::vector<double> combine(std::span<const std::vector<double>> points,
                            std::span<const double> weights);

/// min_i E_i / p_i over coordinates p_i > 0 of the combined point.
double lifetime_from_weights(std::span<const std::vector<double>> points,
                             std::span<const double> weights,
                             std::span<const double> energies);

struct SubsetSweep {
  std::vector<double> lifetime_by_m;  // entry m-1 holds L_m
  std::vector<std::vector<std::size_t>> best_subset;
  double overall = 0.0;  // max over m
};

/// For m = 1..max_m: the best lifetime over all size-m subsets of points,
/// each subset combined with min_norm_weights.
SubsetSweep best_over_subsets(std::span<const std::vector<double>> points,
                              std::span<const double> energies, int max_m);

/// Where one two-node schedule's energy curve meets the equal-lifetime line
/// e_0 / E_0 = e_1 / E_1 (the equal-energy line for equal batteries).
struct Crossing {
  std::array<int, 2> order{};
  double time = 0.0;              // time of the first polled node
  std::array<double, 2> energy{}; // per-slot energy by node id
  double lifetime = 0.0;
  double distance = 0.0;          // Euclidean norm of the battery-scaled point
};

struct CrossingReport {
  std::array<Crossing, 2> crossings;  // orders (0,1) and (1,0)
  int closer = 0;                     // index of the crossing nearer the origin
};

/// N = 2, Shannon mode.
CrossingReport equal_energy_crossing(const Cluster& cluster);

/// Lower-left convex hull chain of 2-D points: from the leftmost point to the
/// lowest one, counter-clockwise, collinear points dropped.
std::vector<std::array<double, 2>> hull_2d(std::span<const std::array<double, 2>> points);

/// One point per schedule in lexicographic order (SRRA mode).
std::vector<EnergyPoint> srra_points(const Cluster& cluster, double c);

/// min_k u_k / max_k u_k with u_k = e_k / E_k: 1 on the equal-lifetime line.
double equal_line_ratio(std::span<const double> energy,
                        std::span<const double> batteries);

/// Index of the point with the largest equal_line_ratio. Ratios equal to
/// 1e-12 go to the smaller max_k e_k / E_k, then to the first index.
std::size_t closest_to_equal_line(std::span<const EnergyPoint> points,
                                  std::span<const double> batteries);

}  // namespace wsnlife
