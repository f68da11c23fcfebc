#include "wsnlife/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "wsnlife/error.hpp"

namespace wsnlife {

namespace {
constexpr boost::uintmax_t kMaxIterations = 200;
// Width of the final bracket in log t: 1e-13 relative, inside the 1e-10
// contract.
constexpr double kLogTol = 1e-13;
constexpr double kGrowth = 1.5;
constexpr double kRelTol = 1e-10;
}  // namespace

double shannon_energy(double bits, double time) {
  if (bits == 0.0) return 0.0;
  if (!(time > 0.0)) {
    throw Error(ErrorKind::kValidation,
                "transmission time must be > 0 when bits > 0");
  }
  // expm1 keeps the long-time limit h ln2 accurate.
  return time * std::expm1(bits / time * std::numbers::ln2);
}

double tx_energy(double bits, double time, const EnergyMode& mode) {
  if (!(bits >= 0.0)) {
    throw Error(ErrorKind::kValidation, "bits must be >= 0");
  }
  if (const auto* s = std::get_if<Srra>(&mode)) return s->c * bits;
  return shannon_energy(bits, time);
}

double min_time_for_energy(double bits, double energy) {
  if (!(bits > 0.0)) {
    throw Error(ErrorKind::kValidation, "min_time_for_energy needs bits > 0");
  }
  if (!(energy > bits * std::numbers::ln2)) {
    throw Error(ErrorKind::kInfeasibleEnergy,
                "energy " + std::to_string(energy) +
                    " is at or below the h*ln2 infimum for " +
                    std::to_string(bits) + " bits");
  }

  // Starting guess from the rate y = h / t, which satisfies
  // y = log2(1 + (e / h) y); a few fixed-point steps land within a small
  // factor of the root.
  const double ratio = energy / bits;
  double rate = std::max(1.0, std::log2(ratio) + 1.0);
  for (int it = 0; it < 3; ++it) rate = std::log2(1.0 + ratio * rate);
  const double guess = bits / rate;

  // f(h, .) is strictly decreasing: lo overspends, hi underspends.
  double lo = guess;
  double hi = guess;
  if (shannon_energy(bits, guess) > energy) {
    while (shannon_energy(bits, hi) > energy) {
      lo = hi;
      hi *= kGrowth;
      if (!std::isfinite(hi)) {
        throw Error(ErrorKind::kNumeric, "time bracket overflow");
      }
    }
  } else {
    while (shannon_energy(bits, lo) <= energy) {
      hi = lo;
      lo /= kGrowth;
      if (lo < std::numeric_limits<double>::min()) {
        throw Error(ErrorKind::kNumeric, "time bracket underflow");
      }
    }
  }

  // Solved in log space, where the curve is close to a straight line.
  const double log_e = std::log(energy);
  // log f(h, e^u) = u + log(expm1(z)) with z = h ln2 e^-u, kept finite for
  // large z where f itself overflows.
  auto gap = [&](double u) {
    const double z = bits * std::numbers::ln2 * std::exp(-u);
    const double log_expm1 = z > 30.0 ? z + std::log1p(-std::exp(-z))
                                      : std::log(std::expm1(z));
    return u + log_expm1 - log_e;
  };
  const double a = std::log(lo);
  const double b = std::log(hi);
  boost::uintmax_t iters = kMaxIterations;
  const auto root = boost::math::tools::toms748_solve(
      gap, a, b, gap(a), gap(b),
      [](double x, double y) { return std::abs(y - x) <= kLogTol; }, iters);
  if (iters >= kMaxIterations && root.second - root.first > kRelTol) {
    throw Error(ErrorKind::kNumeric, "min_time_for_energy did not converge");
  }
  return std::exp(0.5 * (root.first + root.second));
}

double srra_error(double bits, double time) {
  if (bits == 0.0) return 0.0;
  return shannon_energy(bits, time) - bits * std::numbers::ln2;
}

}  // namespace wsnlife
