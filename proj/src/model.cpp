#include "wsnlife/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wsnlife/error.hpp"

namespace wsnlife {

namespace {

// Conditional variances below this fraction of sigma2 mean the covariance is
// numerically singular.
constexpr double kPivotFloor = 1e-12;

// Lower-triangular factor of a covariance matrix grown one row at a time.
// Appending node i to the factored prefix yields its conditional variance
// det K_{prefix+i} / det K_{prefix} as the squared new pivot.
class GrowingCholesky {
 public:
  explicit GrowingCholesky(int capacity) { rows_.reserve(capacity); }

  // cross[j] = K(new, prefix[j]); returns the conditional variance, or a
  // non-positive value if the extended matrix is not positive definite.
  double append(std::span<const double> cross, double diag) {
    const std::size_t n = rows_.size();
    std::vector<double> row(n + 1, 0.0);
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = cross[j];
      for (std::size_t k = 0; k < j; ++k) s -= row[k] * rows_[j][k];
      row[j] = s / rows_[j][j];
      sq += row[j] * row[j];
    }
    const double cond = diag - sq;
    row[n] = cond > 0.0 ? std::sqrt(cond) : 0.0;
    rows_.push_back(std::move(row));
    return cond;
  }

  // Conditional variance of a candidate row without appending it.
  double peek(std::span<const double> cross, double diag) const {
    const std::size_t n = rows_.size();
    std::vector<double> row(n, 0.0);
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = cross[j];
      for (std::size_t k = 0; k < j; ++k) s -= row[k] * rows_[j][k];
      row[j] = s / rows_[j][j];
      sq += row[j] * row[j];
    }
    return diag - sq;
  }

 private:
  std::vector<std::vector<double>> rows_;
};

double kernel(const GaussianField& g, double dist) {
  return g.sigma2 * std::exp(-g.decay * dist * dist);
}

}  // namespace

double Schedule::total_bits() const {
  double s = 0.0;
  for (double h : loads) s += h;
  return s;
}

double gaussian_entropy_bits(double variance) {
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * variance);
}

bool is_permutation_of(std::span<const int> order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Cluster::Cluster(std::vector<NodeSpec> nodes, CorrelationModel correlation)
    : nodes_(std::move(nodes)), correlation_(correlation) {
  if (nodes_.empty()) {
    throw Error(ErrorKind::kValidation, "cluster needs at least one node");
  }
  std::sort(nodes_.begin(), nodes_.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const NodeSpec& n = nodes_[k];
    if (n.id != static_cast<int>(k)) {
      throw Error(ErrorKind::kValidation,
                  "node ids must be 0..N-1 without gaps or duplicates (got " +
                      std::to_string(n.id) + ")");
    }
    if (!(n.energy > 0.0) || !std::isfinite(n.energy)) {
      throw Error(ErrorKind::kValidation,
                  "node " + std::to_string(n.id) + ": energy must be > 0");
    }
    if (!(n.path_loss > 0.0) || !std::isfinite(n.path_loss)) {
      throw Error(ErrorKind::kValidation,
                  "node " + std::to_string(n.id) + ": path_loss must be > 0");
    }
  }

  if (const auto* b = std::get_if<BitDistance>(&correlation_)) {
    if (b->max_bits < 1) {
      throw Error(ErrorKind::kValidation, "bit-distance max_bits must be >= 1");
    }
    return;
  }

  const auto& g = std::get<GaussianField>(correlation_);
  if (!(g.sigma2 > 0.0) || !std::isfinite(g.sigma2)) {
    throw Error(ErrorKind::kValidation, "gaussian sigma2 must be > 0");
  }
  if (!(g.decay >= 0.0) || !std::isfinite(g.decay)) {
    throw Error(ErrorKind::kValidation, "gaussian decay must be >= 0");
  }
  if (!std::isfinite(g.offset)) {
    throw Error(ErrorKind::kValidation, "gaussian offset must be finite");
  }

  std::vector<int> all(nodes_.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
  const Eigen::MatrixXd cov = covariance(all);

  // Conditioning never increases a Gaussian load, so the smallest load any
  // schedule can produce for node i is its entropy given all other nodes,
  // with conditional variance 1 / (K^-1)_ii.
  const Eigen::MatrixXd precision =
      cov.llt().solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  for (int i = 0; i < size(); ++i) {
    const double h = gaussian_entropy_bits(1.0 / precision(i, i)) + g.offset;
    if (!(h > 0.0)) {
      throw Error(ErrorKind::kModelDegeneracy,
                  "gaussian offset too small: node " + std::to_string(i) +
                      " would carry a non-positive load (" + std::to_string(h) +
                      " bits) when polled last");
    }
  }
}

const NodeSpec& Cluster::node(int id) const {
  check_id(id);
  return nodes_[id];
}

std::vector<double> Cluster::energies() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.energy);
  return out;
}

std::vector<double> Cluster::path_losses() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.path_loss);
  return out;
}

double Cluster::distance(int i, int j) const {
  check_id(i);
  check_id(j);
  if (i == j) return 0.0;
  return std::hypot(nodes_[i].position.x - nodes_[j].position.x,
                    nodes_[i].position.y - nodes_[j].position.y);
}

Eigen::MatrixXd Cluster::covariance(std::span<const int> prefix) const {
  const GaussianField& g = gaussian();
  const auto n = static_cast<Eigen::Index>(prefix.size());
  for (int id : prefix) check_id(id);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    k(r, r) = g.sigma2;
    for (Eigen::Index c = 0; c < r; ++c) {
      const double v = kernel(g, distance(prefix[r], prefix[c]));
      k(r, c) = v;
      k(c, r) = v;
    }
  }
  if (n > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    bool ok = llt.info() == Eigen::Success;
    if (ok) {
      const Eigen::MatrixXd l = llt.matrixL();
      for (Eigen::Index r = 0; r < n && ok; ++r) {
        ok = l(r, r) * l(r, r) > kPivotFloor * g.sigma2;
      }
    }
    if (!ok) {
      throw Error(ErrorKind::kModelDegeneracy,
                  "covariance is not positive definite (duplicate positions "
                  "or zero decay)");
    }
  }
  return k;
}

double Cluster::bits(int i, std::span<const int> prefix) const {
  if (is_gaussian()) return bits_gaussian(i, prefix);
  return bits_bitdist(i, prefix);
}

int Cluster::bits_bitdist(int i, std::span<const int> prefix) const {
  const auto* b = std::get_if<BitDistance>(&correlation_);
  if (b == nullptr) {
    throw Error(ErrorKind::kValidation, "cluster is not a bit-distance model");
  }
  check_prefix(i, prefix);
  int best = b->max_bits;
  for (int j : prefix) {
    const double d = distance(i, j);
    const int bits =
        d <= b->max_bits ? static_cast<int>(std::ceil(d)) : b->max_bits;
    best = std::min(best, bits);
  }
  return best;
}

double Cluster::bits_gaussian(int i, std::span<const int> prefix) const {
  const GaussianField& g = gaussian();
  check_prefix(i, prefix);
  GrowingCholesky chol(static_cast<int>(prefix.size()) + 1);
  std::vector<double> cross;
  cross.reserve(prefix.size());
  for (std::size_t r = 0; r < prefix.size(); ++r) {
    cross.clear();
    for (std::size_t c = 0; c < r; ++c) {
      cross.push_back(kernel(g, distance(prefix[r], prefix[c])));
    }
    if (chol.append(cross, g.sigma2) <= kPivotFloor * g.sigma2) {
      throw Error(ErrorKind::kModelDegeneracy,
                  "covariance is not positive definite");
    }
  }
  cross.clear();
  for (int j : prefix) cross.push_back(kernel(g, distance(i, j)));
  const double cond = chol.peek(cross, g.sigma2);
  if (cond <= kPivotFloor * g.sigma2) {
    throw Error(ErrorKind::kModelDegeneracy,
                "covariance is not positive definite");
  }
  const double h = gaussian_entropy_bits(cond) + g.offset;
  if (!(h > 0.0)) {
    throw Error(ErrorKind::kModelDegeneracy,
                "non-positive conditional load for node " + std::to_string(i));
  }
  return h;
}

Schedule Cluster::schedule_loads(std::span<const int> order) const {
  std::vector<char> seen(nodes_.size(), 0);
  for (int id : order) {
    check_id(id);
    if (seen[id]) {
      throw Error(ErrorKind::kValidation,
                  "order repeats node " + std::to_string(id));
    }
    seen[id] = 1;
  }

  Schedule s;
  s.order.assign(order.begin(), order.end());
  s.loads.reserve(order.size());

  if (const auto* g = std::get_if<GaussianField>(&correlation_)) {
    GrowingCholesky chol(static_cast<int>(order.size()));
    std::vector<double> cross;
    for (std::size_t k = 0; k < order.size(); ++k) {
      cross.clear();
      for (std::size_t j = 0; j < k; ++j) {
        cross.push_back(kernel(*g, distance(order[k], order[j])));
      }
      const double cond = chol.append(cross, g->sigma2);
      if (cond <= kPivotFloor * g->sigma2) {
        throw Error(ErrorKind::kModelDegeneracy,
                    "covariance is not positive definite");
      }
      const double h = gaussian_entropy_bits(cond) + g->offset;
      if (!(h > 0.0)) {
        throw Error(ErrorKind::kModelDegeneracy,
                    "non-positive conditional load for node " +
                        std::to_string(order[k]));
      }
      s.loads.push_back(h);
    }
    return s;
  }

  for (std::size_t k = 0; k < order.size(); ++k) {
    s.loads.push_back(bits_bitdist(order[k], order.subspan(0, k)));
  }
  return s;
}

double Cluster::joint_entropy() const {
  const GaussianField& g = gaussian();
  std::vector<int> all(nodes_.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
  const Eigen::MatrixXd k = covariance(all);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  const Eigen::MatrixXd l = llt.matrixL();
  double log2det = 0.0;
  for (Eigen::Index r = 0; r < l.rows(); ++r) log2det += 2.0 * std::log2(l(r, r));
  const double n = static_cast<double>(nodes_.size());
  return 0.5 * (n * std::log2(2.0 * std::numbers::pi * std::numbers::e) +
                log2det) +
         n * g.offset;
}

void Cluster::check_id(int id) const {
  if (id < 0 || id >= size()) {
    throw Error(ErrorKind::kUnknownNode, "unknown node id " + std::to_string(id));
  }
}

void Cluster::check_prefix(int i, std::span<const int> prefix) const {
  check_id(i);
  for (int j : prefix) {
    check_id(j);
    if (j == i) {
      throw Error(ErrorKind::kValidation,
                  "node " + std::to_string(i) + " is already in the prefix");
    }
  }
}

const GaussianField& Cluster::gaussian() const {
  const auto* g = std::get_if<GaussianField>(&correlation_);
  if (g == nullptr) {
    throw Error(ErrorKind::kValidation, "cluster is not a Gaussian-field model");
  }
  return *g;
}

}  // namespace wsnlife
