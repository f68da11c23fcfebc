#pragma once

#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace wsnlife {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// One sensor: planar position, battery E_k and channel path-loss factor d_k.
struct NodeSpec {
  int id = 0;
  Point position;
  double energy = 1.0;
  double path_loss = 1.0;
};

/// Integer-bit correlation: a node at distance d from an already decoded
/// node sends ceil(d) bits when d <= max_bits, max_bits otherwise; with
/// several decoded nodes it sends the minimum over them.
struct BitDistance {
  int max_bits = 1;
};

/// Jointly Gaussian field with K_ii = sigma2 and
/// K_ij = sigma2 * exp(-decay * d_ij^2). Loads are differential entropies in
/// bits plus a constant quantization offset.
struct GaussianField {
  double sigma2 = 1.0;
  double decay = 1.0;
  double offset = 0.0;
};

using CorrelationModel = std::variant<BitDistance, GaussianField>;

/// A polling order and the bits each polled node sends given every node
/// polled before it. loads[k] belongs to node order[k].
struct Schedule {
  std::vector<int> order;
  std::vector<double> loads;

  double total_bits() const;
};

/// Immutable cluster description. Construction validates ids, batteries,
/// path losses and the correlation model (positive-definite covariance and
/// strictly positive Gaussian loads), so every later query is total.
class Cluster {
 public:
  Cluster(std::vector<NodeSpec> nodes, CorrelationModel correlation);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const NodeSpec& node(int id) const;
  const CorrelationModel& correlation() const { return correlation_; }
  bool is_gaussian() const {
    return std::holds_alternative<GaussianField>(correlation_);
  }

  /// Battery and path loss vectors indexed by node id.
  std::vector<double> energies() const;
  std::vector<double> path_losses() const;

  double distance(int i, int j) const;

  /// Covariance of the listed nodes, in list order. Gaussian model only.
  Eigen::MatrixXd covariance(std::span<const int> prefix) const;

  /// Bits node i sends once every node of prefix has been decoded.
  double bits(int i, std::span<const int> prefix) const;
  int bits_bitdist(int i, std::span<const int> prefix) const;
  double bits_gaussian(int i, std::span<const int> prefix) const;

  /// Loads of a full or partial polling order. For the Gaussian model the
  /// covariance factor is extended one row per polled node.
  Schedule schedule_loads(std::span<const int> order) const;

  /// Joint entropy of all nodes in bits plus N * offset (Gaussian only).
  double joint_entropy() const;

 private:
  void check_id(int id) const;
  void check_prefix(int i, std::span<const int> prefix) const;
  const GaussianField& gaussian() const;

  std::vector<NodeSpec> nodes_;
  CorrelationModel correlation_;
};

/// Differential entropy, in bits, of a Gaussian with the given variance.
double gaussian_entropy_bits(double variance);

/// True when order is a permutation of 0..n-1.
bool is_permutation_of(std::span<const int> order, int n);

}  // namespace wsnlife
