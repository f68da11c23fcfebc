// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: wsnlife_acceptance [--only N ...]. Exit status is the number of
// failing criteria (capped at 100).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "wsnlife/allocation.hpp"
#include "wsnlife/dynamic_sched.hpp"
#include "wsnlife/energy.hpp"
#include "wsnlife/geometry.hpp"
#include "wsnlife/simulate.hpp"
#include "wsnlife/static_sched.hpp"

using namespace wsnlife;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// ---------------------------------------------------------------------------
// 1. Energy function properties on 10^4 random (h, x).
Outcome energy_suite() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uh(0.01, 20.0);
  std::uniform_real_distribution<double> ux(0.01, 20.0);
  int mono = 0, convex = 0, blow = 0, asym = 0, inv = 0;
  double worst_inv = 0.0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const double h = uh(rng);
    const double x = ux(rng);
    const double y = ux(rng);
    const double f = shannon_energy(h, x);
    // Strict where finite; once f overflows the neighbours must overflow too.
    const double slower = shannon_energy(h, x * 1.01);
    const double bigger = shannon_energy(h * 1.01, x);
    if (std::isfinite(f) ? !(slower < f) || !(bigger > f) : !std::isinf(bigger)) ++mono;
    const double mid = shannon_energy(h, 0.5 * (x + y));
    if (mid > 0.5 * (f + shannon_energy(h, y)) * (1 + 1e-12)) ++convex;
    // f grows without bound as t halves towards zero; at t = h/1100 it
    // exceeds 2^1000.
    double prev = shannon_energy(h, h);
    for (int j = 1; j <= 10; ++j) {
      const double cur = shannon_energy(h, h * std::ldexp(1.0, -j));
      if (!(cur > prev)) ++blow;
      prev = cur;
    }
    if (!(shannon_energy(h, h / 1100.0) > 1e300)) ++blow;
    if (!(std::abs(shannon_energy(h, 1e6) - h * std::numbers::ln2) < 1e-5 * h)) ++asym;
    if (std::isfinite(f) && f > h * std::numbers::ln2 * (1 + 1e-12)) {
      const double e = rel(min_time_for_energy(h, f), x);
      worst_inv = std::max(worst_inv, e);
      if (e > 1e-8) ++inv;
    }
  }
  Outcome o;
  o.pass = mono + convex + blow + asym + inv == 0;
  o.detail = fmt("%d samples; violations mono %d convex %d blowup %d asymptote %d inverse %d; "
                 "max inverse rel err %.1e",
                 samples, mono, convex, blow, asym, inv, worst_inv);
  return o;
}

// ---------------------------------------------------------------------------
// Shared instances for criteria 2 and 9.
struct EqInstance {
  Cluster cluster;
  std::vector<int> order;
};

std::vector<EqInstance> equalizer_instances() {
  std::mt19937_64 rng(202);
  std::vector<EqInstance> out;
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 5;
    auto nodes = oracle::random_nodes(rng, n, 4.0, 5.0, 60.0, 0.5, 2.0);
    Cluster c = i % 2 ? oracle::gaussian_cluster(nodes, 1.0, 0.4)
                      : Cluster(nodes, BitDistance{4});
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    out.push_back({std::move(c), std::move(order)});
  }
  return out;
}

// 2. Equal-lifetime certificate and grid oracle.
Outcome equalizer(const std::vector<EqInstance>& inst) {
  int sum_bad = 0, eq_bad = 0, grid_bad = 0, grid_n = 0;
  double worst_sum = 0, worst_eq = 0, worst_grid = 0;
  for (const auto& in : inst) {
    const StaticResult r = evaluate_schedule(in.order, in.cluster, Shannon{});
    const double s = std::accumulate(r.times.begin(), r.times.end(), 0.0);
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    if (std::abs(s - 1.0) > 1e-9) ++sum_bad;
    for (std::size_t k = 0; k < in.order.size(); ++k) {
      const double life = in.cluster.node(in.order[k]).energy / r.per_node_energy[k];
      worst_eq = std::max(worst_eq, rel(life, r.lifetime));
      if (rel(life, r.lifetime) > 1e-6) ++eq_bad;
    }
    if (in.order.size() <= 3) {
      ++grid_n;
      std::vector<double> e, d;
      for (int id : in.order) {
        e.push_back(in.cluster.node(id).energy);
        d.push_back(in.cluster.node(id).path_loss);
      }
      const double g = oracle::grid_lifetime(r.schedule.loads, e, d, 200, 6);
      worst_grid = std::max(worst_grid, rel(g, r.lifetime));
      if (rel(g, r.lifetime) > 1e-4) ++grid_bad;
    }
  }
  Outcome o;
  o.pass = sum_bad + eq_bad + grid_bad == 0;
  o.detail = fmt("%zu instances; max |sum t - 1| %.1e, max lifetime spread %.1e, "
                 "grid oracle (%d with N<=3) max rel err %.1e",
                 inst.size(), worst_sum, worst_eq, grid_n, worst_grid);
  return o;
}

// ---------------------------------------------------------------------------
// 3. Nearest Neighbor Next is optimal for bit-distance loads with E/d equal.
Outcome nnn_optimal() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 3 + i % 5;
    auto nodes = oracle::random_nodes(rng, n, 6.0, 1, 1, 1, 1);
    for (auto& s : nodes) s.path_loss = s.energy = u(rng);
    Cluster c(nodes, BitDistance{4});
    const double a = nnn(c, Shannon{}).lifetime;
    const double b = brute_force(c, Shannon{}).lifetime;
    worst = std::max(worst, rel(a, b));
    if (std::abs(a - b) > 1e-9) ++bad;
  }
  return {bad == 0, fmt("200 instances N=3..7; mismatches %d; max rel diff %.1e", bad, worst)};
}

// ---------------------------------------------------------------------------
// 4. Minimum Cost Next: optimal bottleneck and lexicographically maximal
// sorted lifetime vector.
Outcome mcn_check() {
  std::mt19937_64 rng(404);
  int opt_bad = 0, lex_bad = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 3 + i % 5;
    auto nodes = oracle::random_nodes(rng, n, 5.0, 0.5, 1.5, 0.5, 1.5);
    Cluster c = i % 2 ? oracle::gaussian_cluster(nodes, 1.0, 0.3) : Cluster(nodes, BitDistance{5});
    const Srra mode{1.0};
    const StaticResult m = mcn(c, mode);
    if (rel(m.lifetime, oracle::static_optimum(c, true, 1.0).lifetime) > 1e-12) ++opt_bad;
    const auto mine = sorted_srra_lifetimes(c, m.schedule.order, 1.0);
    bool dominated = false;
    oracle::each_order(n, [&](const std::vector<int>& p) {
      if (dominated) return;
      const auto other = sorted_srra_lifetimes(c, p, 1.0);
      for (int k = 0; k < n; ++k) {
        if (other[k] > mine[k] * (1 + 1e-12)) {
          dominated = true;
          return;
        }
        if (other[k] < mine[k] * (1 - 1e-12)) return;
      }
    });
    if (dominated) ++lex_bad;
  }
  return {opt_bad + lex_bad == 0,
          fmt("200 instances N=3..7; bottleneck mismatches %d; lexicographic counterexamples %d",
              opt_bad, lex_bad)};
}

// ---------------------------------------------------------------------------
// 5. Two-node cooperation.
Outcome cooperation() {
  std::mt19937_64 rng(505);
  int dom_bad = 0;
  for (int i = 0; i < 100; ++i) {
    auto nodes = oracle::random_nodes(rng, 2, 2.0, 0.5, 2.0, 0.5, 2.0);
    Cluster c = oracle::gaussian_cluster(nodes, 1.0, 0.5);
    const Schedule s = c.schedule_loads(std::vector<int>{0, 1});
    if (!(s.loads[0] > s.loads[1])) continue;
    const double stat = brute_force(c, Shannon{}).lifetime;
    const double dyn = dynamic_lifetime(c, Shannon{}, 16).lifetime;
    if (dyn < stat * (1 - 1e-12)) ++dom_bad;
  }
  // h = 2, h_{1|2} = 1 with symmetric batteries and path losses.
  int gain_bad = 0;
  double min_gain = std::numeric_limits<double>::infinity();
  for (double e : {0.5, 1.0, 2.0, 5.0}) {
    for (double d : {0.5, 1.0, 3.0}) {
      for (double gap : {0.2, 0.5, 0.9}) {
        Cluster c({{0, {0, 0}, e, d}, {1, {gap, 0}, e, d}}, BitDistance{2});
        const CooperationReport r = two_node_cooperation(c, 64, 100);
        min_gain = std::min(min_gain, r.gain());
        if (!(r.gain() > 1e-6) || !r.found_pair) ++gain_bad;
      }
    }
  }
  // SRRA worked example: columns (2, 1) and (1, 2) against E = 2.
  Cluster w({{0, {0, 0}, 2, 1}, {1, {0.5, 0}, 2, 1}}, BitDistance{2});
  const double stat = brute_force(w, Srra{1.0}).lifetime;
  const DynamicPlan p = dynamic_lifetime(w, Srra{1.0});
  double residual = 0.0;
  for (int k = 0; k < 2; ++k) {
    double used = 0.0;
    for (const auto& entry : p.entries) used += entry.slots * entry.column.energy[k];
    residual = std::max(residual, std::abs(used - 2.0));
  }
  const bool worked = std::abs(stat - 1.0) < 1e-12 && std::abs(p.lifetime - 4.0 / 3.0) < 1e-9 &&
                      residual < 1e-9;
  return {dom_bad == 0 && gain_bad == 0 && worked,
          fmt("random pairs L_dyn<L_stat %d/100; constructed family min gain %.3e (failures %d/36); "
              "srra example L_stat %.12g L_dyn %.12g residual %.1e",
              dom_bad, min_gain, gain_bad, stat, p.lifetime, residual)};
}

// ---------------------------------------------------------------------------
// 6. Lifetime grows with the number of cooperating schedules; LP support.
Outcome cooperation_size() {
  std::mt19937_64 rng(606);
  int geo_bad = 0, lp_bad = 0, support_bad = 0, lps = 0;
  for (int i = 0; i < 60; ++i) {
    auto nodes = oracle::random_nodes(rng, 3, 3.0, 0.5, 2.0, 0.5, 2.0);
    Cluster c = i % 2 ? oracle::gaussian_cluster(nodes, 1.0, 0.5) : Cluster(nodes, BitDistance{3});
    std::vector<std::vector<double>> pts;
    oracle::each_order(3, [&](const std::vector<int>& o) {
      pts.push_back(evaluate_schedule(o, c, Shannon{}).energy_by_node());
    });
    const SubsetSweep sw = best_over_subsets(pts, c.energies(), 6);
    for (std::size_t m = 1; m < sw.lifetime_by_m.size(); ++m) {
      if (sw.lifetime_by_m[m] < sw.lifetime_by_m[m - 1] - 1e-8) {
        ++geo_bad;
        break;
      }
    }
    const auto lm = lifetime_by_cooperation_size(c, Shannon{}, 4);
    for (std::size_t m = 1; m < lm.size(); ++m) {
      if (lm[m] < lm[m - 1] - 1e-8) {
        ++lp_bad;
        break;
      }
    }
  }
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + i % 4;
    auto nodes = oracle::random_nodes(rng, n, 3.0, 0.5, 2.0, 0.5, 2.0);
    Cluster c = i % 2 ? oracle::gaussian_cluster(nodes, 1.0, 0.5) : Cluster(nodes, BitDistance{3});
    for (const EnergyMode& mode : {EnergyMode{Shannon{}}, EnergyMode{Srra{}}}) {
      ++lps;
      if (dynamic_lifetime(c, mode, 3).support() > static_cast<std::size_t>(n)) ++support_bad;
    }
  }
  return {geo_bad + lp_bad + support_bad == 0,
          fmt("60 N=3 instances; geometry L_m decreases %d, LP L_m decreases %d; "
              "support > N in %d of %d LPs",
              geo_bad, lp_bad, support_bad, lps)};
}

// ---------------------------------------------------------------------------
// 7. Chain rule for Gaussian loads against an LU-determinant joint entropy.
Outcome chain_rule() {
  std::mt19937_64 rng(707);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 6;
    auto nodes = oracle::random_nodes(rng, n, 4.0, 1, 1, 1, 1);
    Cluster c = oracle::gaussian_cluster(nodes, 0.5 + i % 3, 0.3);
    const auto& g = std::get<GaussianField>(c.correlation());
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    const double joint = oracle::joint_entropy(c.nodes(), all, g.sigma2, g.decay, g.offset);
    std::vector<int> order = all;
    for (int p = 0; p < 10; ++p) {
      std::shuffle(order.begin(), order.end(), rng);
      const double e = rel(c.schedule_loads(order).total_bits(), joint);
      worst = std::max(worst, e);
      if (e > 1e-9) ++bad;
    }
  }
  return {bad == 0, fmt("100 clusters x 10 orders; violations %d; max rel err %.1e", bad, worst)};
}

// ---------------------------------------------------------------------------
// 8. Shorter Hamiltonian path => smaller total minimum time at a fixed
// lifetime, for schedules that differ only in the last two nodes.
Outcome path_ordering() {
  std::mt19937_64 rng(808);
  int pairs = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    auto nodes = oracle::random_nodes(rng, 4, 3.0, 1, 1, 1, 1);
    Cluster c = oracle::gaussian_cluster(nodes, 1.0, 1.0);
    oracle::each_order(4, [&](const std::vector<int>& p) {
      if (p[2] > p[3]) return;
      std::vector<int> q = p;
      std::swap(q[2], q[3]);
      const double lp = path_length(c, p);
      const double lq = path_length(c, q);
      if (std::abs(lp - lq) <= 1e-9) return;
      const Schedule sp = c.schedule_loads(p);
      const Schedule sq = c.schedule_loads(q);
      double hmax = 0.0;
      for (double h : sp.loads) hmax = std::max(hmax, h);
      for (double h : sq.loads) hmax = std::max(hmax, h);
      // Target lifetime where every node may spend 2 h_max ln2 per slot.
      const double energy = 2.0 * hmax * std::numbers::ln2;
      double tp = 0.0, tq = 0.0;
      for (double h : sp.loads) tp += min_time_for_energy(h, energy);
      for (double h : sq.loads) tq += min_time_for_energy(h, energy);
      ++pairs;
      const bool p_shorter = lp < lq;
      if (p_shorter ? tp > tq + 1e-9 : tq > tp + 1e-9) ++bad;
    });
  }
  return {bad == 0, fmt("200 instances, %d pairs; shorter path with larger total time in %d (%.1f%%)",
                        pairs, bad, 100.0 * bad / std::max(1, pairs))};
}

// ---------------------------------------------------------------------------
// 9. Slot simulator agrees with analytic lifetimes.
Outcome simulator(const std::vector<EqInstance>& inst) {
  int stat_bad = 0, dyn_bad = 0;
  const SimOptions quiet{false};
  for (const auto& in : inst) {
    const StaticResult r = evaluate_schedule(in.order, in.cluster, Shannon{});
    if (simulate_static(r, in.cluster, quiet).completed !=
        static_cast<std::size_t>(std::floor(r.lifetime))) {
      ++stat_bad;
    }
    const int samples = in.cluster.size() >= 5 ? 2 : 4;
    const DynamicPlan p = dynamic_lifetime(in.cluster, Shannon{}, samples);
    const SimTrace t = simulate_dynamic(p, in.cluster, quiet);
    if (static_cast<double>(t.completed) <
        std::floor(p.lifetime) - static_cast<double>(p.support())) {
      ++dyn_bad;
    }
  }
  return {stat_bad + dyn_bad == 0,
          fmt("%zu instances; static slot mismatches %d; dynamic shortfalls %d", inst.size(),
              stat_bad, dyn_bad)};
}

// ---------------------------------------------------------------------------
// 10. Geometry: min-norm weights, equal-energy crossing, SRRA equal line.
Outcome geometry_oracles() {
  std::mt19937_64 rng(1010);
  int norm_bad = 0;
  double worst_norm = 0.0;
  for (int i = 0; i < 150; ++i) {
    const int n = 2 + i % 2;
    auto nodes = oracle::random_nodes(rng, n, 3.0, 0.5, 2.0, 0.5, 2.0);
    Cluster c = oracle::gaussian_cluster(nodes, 1.0, 0.5);
    std::vector<std::vector<double>> pts;
    oracle::each_order(n, [&](const std::vector<int>& o) {
      pts.push_back(evaluate_schedule(o, c, Shannon{}).energy_by_node());
    });
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(std::min<std::size_t>(pts.size(), 1 + i % 3));
    const WeightVector w = min_norm_weights(pts);
    const double got = std::sqrt(std::inner_product(w.combined.begin(), w.combined.end(),
                                                    w.combined.begin(), 0.0));
    const double want = oracle::grid_min_norm(pts, 2000);
    worst_norm = std::max(worst_norm, rel(got, want));
    if (rel(got, want) > 1e-4) ++norm_bad;
  }

  int cross_bad = 0;
  double worst_cross = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto nodes = oracle::random_nodes(rng, 2, 3.0, 0.5, 2.0, 0.5, 2.0);
    Cluster c = i % 2 ? oracle::gaussian_cluster(nodes, 1.0, 0.5) : Cluster(nodes, BitDistance{3});
    const CrossingReport r = equal_energy_crossing(c);
    for (const Crossing& x : r.crossings) {
      const StaticResult s = evaluate_schedule(x.order, c, Shannon{});
      const double e = std::max({rel(x.lifetime, s.lifetime), rel(x.time, s.times[0]),
                                 rel(x.energy[x.order[0]], s.per_node_energy[0]),
                                 rel(x.energy[x.order[1]], s.per_node_energy[1])});
      worst_cross = std::max(worst_cross, e);
      if (e > 1e-8) ++cross_bad;
    }
  }

  int line_bad = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 4;
    auto nodes = oracle::random_nodes(rng, n, 5.0, 0.5, 1.5, 0.5, 1.5);
    Cluster c = i % 2 ? oracle::gaussian_cluster(nodes, 1.0, 0.3) : Cluster(nodes, BitDistance{5});
    const auto pts = srra_points(c, 1.0);
    const std::size_t pick = closest_to_equal_line(pts, c.energies());
    const StaticResult m = mcn(c, Srra{1.0});
    const auto mine = m.energy_by_node();
    bool same = true;
    for (int k = 0; k < n; ++k) same = same && rel(mine[k], pts[pick].energy[k]) <= 1e-12;
    if (!same) ++line_bad;
  }
  return {norm_bad + cross_bad + line_bad == 0,
          fmt("min-norm 150 sets max rel err %.1e (fail %d); crossing 200 curves max rel err %.1e "
              "(fail %d); equal-line pick differs from MCN in %d of 200",
              worst_norm, norm_bad, worst_cross, cross_bad, line_bad)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default: all)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  std::vector<EqInstance> shared;
  auto instances = [&]() -> const std::vector<EqInstance>& {
    if (shared.empty()) shared = equalizer_instances();
    return shared;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"energy function suite", energy_suite},
      {"equalizer certificate", [&] { return equalizer(instances()); }},
      {"nearest-neighbour-next optimality", nnn_optimal},
      {"minimum-cost-next optimality", mcn_check},
      {"two-node cooperation gain", cooperation},
      {"cooperation size and LP support", cooperation_size},
      {"entropy chain rule", chain_rule},
      {"path-length ordering of final swaps", path_ordering},
      {"slot simulator agreement", [&] { return simulator(instances()); }},
      {"geometry oracles", geometry_oracles},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-36s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return std::min(failed, 100);
}
