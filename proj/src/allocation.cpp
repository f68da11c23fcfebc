#include "wsnlife/allocation.hpp"

#include <algorithm>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "wsnlife/energy.hpp"
#include "wsnlife/error.hpp"

namespace wsnlife {

namespace {

constexpr double kSumTol = 1e-6;
constexpr boost::uintmax_t kMaxOuter = 300;
constexpr double kStopTol = 1e-12;
constexpr double kLogTol = 4 * std::numeric_limits<double>::epsilon();

void check_inputs(std::span<const double> loads,
                  std::span<const double> energies,
                  std::span<const double> path_losses) {
  if (loads.empty() || loads.size() != energies.size() ||
      loads.size() != path_losses.size()) {
    throw Error(ErrorKind::kValidation,
                "loads, energies and path losses must be non-empty and the "
                "same length");
  }
  for (std::size_t k = 0; k < loads.size(); ++k) {
    if (!(loads[k] >= 0.0) || !std::isfinite(loads[k])) {
      throw Error(ErrorKind::kValidation,
                  "load " + std::to_string(k) + " must be finite and >= 0");
    }
    if (!(energies[k] > 0.0) || !(path_losses[k] > 0.0)) {
      throw Error(ErrorKind::kValidation,
                  "energy and path loss " + std::to_string(k) + " must be > 0");
    }
  }
}

// Total time the nodes need to each last `lifetime` slots.
double total_time(std::span<const double> loads,
                  std::span<const double> energies,
                  std::span<const double> path_losses, double lifetime,
                  std::vector<double>& times) {
  double sum = 0.0;
  for (std::size_t k = 0; k < loads.size(); ++k) {
    times[k] = loads[k] > 0.0
                   ? min_time_for_energy(
                         loads[k], energies[k] / (lifetime * path_losses[k]))
                   : 0.0;
    sum += times[k];
  }
  return sum;
}

}  // namespace

AllocationResult equalize(std::span<const double> loads,
                          std::span<const double> energies,
                          std::span<const double> path_losses) {
  check_inputs(loads, energies, path_losses);
  const std::size_t n = loads.size();

  AllocationResult out;
  out.times.assign(n, 0.0);
  out.per_node_energy.assign(n, 0.0);

  if (std::none_of(loads.begin(), loads.end(), [](double h) { return h > 0.0; })) {
    std::fill(out.times.begin(), out.times.end(), 1.0 / static_cast<double>(n));
    out.lifetime = std::numeric_limits<double>::infinity();
    return out;
  }

  // Closed-form bracket. At lo every active node can pay for its share of
  // an equal split, so sum t <= 1; at hi the binding node alone needs the
  // whole slot, so sum t >= 1.
  std::vector<double> times(n, 0.0);
  const auto active = static_cast<double>(
      std::count_if(loads.begin(), loads.end(), [](double h) { return h > 0.0; }));
  double lo = std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (loads[k] == 0.0) continue;
    const double scale = energies[k] / path_losses[k];
    lo = std::min(lo, scale / shannon_energy(loads[k], 1.0 / active));
    hi = std::min(hi, scale / shannon_energy(loads[k], 1.0));
  }
  // Root search runs in log L and remembers the best point evaluated; it
  // stops once the time sum is within kStopTol of one.
  double best_l = hi;
  double best_gap = std::numeric_limits<double>::infinity();
  auto excess = [&](double l) {
    const double sum = total_time(loads, energies, path_losses, l, times);
    if (std::abs(sum - 1.0) < best_gap) {
      best_gap = std::abs(sum - 1.0);
      best_l = l;
    }
    return sum - 1.0;
  };
  if (!(lo > 0.0)) {
    // f overflowed at the equal split: fall back to halving.
    lo = hi;
    for (int it = 0; excess(lo) >= 0.0; ++it) {
      if (it > 2000) {
        throw Error(ErrorKind::kNumeric, "equalize: lifetime underflows");
      }
      lo *= 0.5;
    }
  }

  const double f_lo = excess(lo);
  const double f_hi = excess(hi);
  if (f_lo < 0.0 && f_hi > 0.0 && best_gap > kStopTol) {
    auto log_excess = [&](double u) { return excess(std::exp(u)); };
    auto done = [&](double a, double b) {
      return best_gap <= kStopTol || std::abs(b - a) <= kLogTol;
    };
    boost::uintmax_t iters = kMaxOuter;
    boost::math::tools::toms748_solve(log_excess, std::log(lo), std::log(hi),
                                      f_lo, f_hi, done, iters);
  }
  const double sum = total_time(loads, energies, path_losses, best_l, out.times);
  if (!(best_gap <= kSumTol)) {
    throw Error(ErrorKind::kNumeric,
                "equalize: time sum missed 1 by " + std::to_string(best_gap));
  }
  // Near-linear nodes make the sum insensitive to L; project onto the simplex.
  for (double& t : out.times) t /= sum;

  out.lifetime = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (loads[k] == 0.0) continue;
    out.per_node_energy[k] = shannon_energy(loads[k], out.times[k]) * path_losses[k];
    out.lifetime = std::min(out.lifetime, energies[k] / out.per_node_energy[k]);
  }
  return out;
}

SrraLifetime lifetime_srra(std::span<const double> loads,
                           std::span<const double> energies,
                           std::span<const double> path_losses, double c) {
  check_inputs(loads, energies, path_losses);
  if (!(c > 0.0)) {
    throw Error(ErrorKind::kValidation, "srra constant c must be > 0");
  }
  SrraLifetime out;
  for (std::size_t k = 0; k < loads.size(); ++k) {
    if (loads[k] == 0.0) continue;
    const double l = energies[k] / (c * loads[k] * path_losses[k]);
    if (l < out.lifetime) {
      out.lifetime = l;
      out.bottleneck = static_cast<int>(k);
    }
  }
  return out;
}

}  // namespace wsnlife
