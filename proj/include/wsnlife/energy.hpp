#pragma once

#include <numbers>
#include <variant>

namespace wsnlife {

/// Shannon AWGN inversion: sending h bits in time x costs x * (2^(h/x) - 1).
struct Shannon {};

/// Small-rate-region approximation: energy c * h, independent of time.
struct Srra {
  double c = std::numbers::ln2;
};

using EnergyMode = std::variant<Shannon, Srra>;

inline bool is_srra(const EnergyMode& mode) {
  return std::holds_alternative<Srra>(mode);
}

/// Per-slot transmit energy for unit path loss.
double tx_energy(double bits, double time, const EnergyMode& mode);

/// Shannon-mode energy x * (2^(h/x) - 1).
double shannon_energy(double bits, double time);

/// Inverse of shannon_energy in time: the unique t with f(h, t) = energy.
/// Requires bits > 0 and energy > bits * ln 2.
double min_time_for_energy(double bits, double energy);

/// f(h, x) - h ln 2: how far the Shannon cost sits above its linear limit.
double srra_error(double bits, double time);

}  // namespace wsnlife
