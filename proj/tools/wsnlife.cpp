#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsnlife/dynamic_sched.hpp"
#include "wsnlife/error.hpp"
#include "wsnlife/geometry.hpp"
#include "wsnlife/scenario_io.hpp"
#include "wsnlife/simulate.hpp"
#include "wsnlife/static_sched.hpp"

using namespace wsnlife;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<int>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

// Rows are buffered so a failing command never leaves a half-written file.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ << ',';
      text_ << cells[i];
    }
    text_ << '\n';
  }

  void write(const std::string& path) const {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::kValidation, "cannot write " + path);
    out << text_.str();
  }

 private:
  std::ostringstream text_;
};

std::vector<int> parse_order(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kValidation, "bad --order entry '" + item + "'");
    }
  }
  return out;
}

struct Common {
  std::string scenario;
  std::string mode;  // empty: scenario setting
  std::optional<double> srra_c;
  int threads = 0;  // 0: scenario setting
  std::string csv;
};

struct Loaded {
  Scenario s;
  EnergyMode mode;
  int threads = 0;
};

Loaded load(const Common& c) {
  Loaded l{load_scenario(c.scenario), Shannon{}, 0};
  l.mode = l.s.file.energy_mode;
  if (c.mode == "shannon") l.mode = Shannon{};
  if (c.mode == "srra") {
    Srra s;
    if (const auto* old = std::get_if<Srra>(&l.s.file.energy_mode)) s = *old;
    l.mode = s;
  }
  if (c.srra_c) {
    if (!is_srra(l.mode)) {
      throw Error(ErrorKind::kValidation, "--srra-c needs the srra mode");
    }
    if (!(*c.srra_c > 0.0)) throw Error(ErrorKind::kValidation, "--srra-c must be > 0");
    l.mode = Srra{*c.srra_c};
  }
  l.threads = c.threads > 0 ? c.threads : l.s.file.solver.threads;
  return l;
}

const char* mode_name(const EnergyMode& m) { return is_srra(m) ? "srra" : "shannon"; }

void add_common(CLI::App* app, Common& c, bool need_mode = true) {
  app->add_option("--scenario", c.scenario, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  if (need_mode) {
    app->add_option("--mode", c.mode, "energy mode (default: scenario)")
        ->check(CLI::IsMember({"shannon", "srra"}));
    app->add_option("--srra-c", c.srra_c, "constant of the srra energy c*h");
  }
  app->add_option("--threads", c.threads,
                  "worker cap; 0 defers to the scenario, WSNLIFE_THREADS, then OpenMP")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--csv", c.csv, "machine-readable output file");
}

// Static result table: one row per polled position.
void report_static(const StaticResult& r, const Cluster& cluster,
                   const EnergyMode& mode, const std::string& csv_path) {
  std::cout << "method " << r.method << "\n"
            << "mode " << mode_name(mode) << "\n"
            << "order " << join(r.schedule.order, ',') << "\n"
            << "lifetime " << num(r.lifetime) << "\n";
  if (r.bottleneck >= 0) std::cout << "bottleneck " << r.bottleneck << "\n";

  Csv csv({"position", "node", "bits", "time", "energy", "node_lifetime"});
  std::printf("%8s %6s %14s %14s %14s %14s\n", "position", "node", "bits", "time",
              "energy", "node_life");
  for (std::size_t k = 0; k < r.schedule.order.size(); ++k) {
    const int id = r.schedule.order[k];
    const double e = r.per_node_energy[k];
    const double life = e > 0.0 ? cluster.node(id).energy / e
                                : std::numeric_limits<double>::infinity();
    const double t = r.times.empty() ? 0.0 : r.times[k];
    csv.row({std::to_string(k), std::to_string(id), num(r.schedule.loads[k]), num(t),
             num(e), num(life)});
    std::printf("%8zu %6d %14s %14s %14s %14s\n", k, id,
                num(r.schedule.loads[k]).c_str(), num(t).c_str(), num(e).c_str(),
                num(life).c_str());
  }
  csv.write(csv_path);
}

StaticResult run_static(const std::string& method, const Loaded& l) {
  if (method == "brute") return brute_force(l.s.cluster, l.mode, l.threads);
  if (method == "nnn") return nnn(l.s.cluster, l.mode);
  if (method == "mcn") return mcn(l.s.cluster, l.mode);
  return shp_heuristic(l.s.cluster, l.mode);
}

int run_gen(const GeneratorParams& p, const std::string& model, int max_bits,
            const GaussianField& g, const std::string& mode, double srra_c,
            const std::string& out) {
  GeneratorParams q = p;
  if (model == "gaussian") {
    q.correlation = g;
  } else {
    q.correlation = BitDistance{max_bits};
  }
  if (mode == "srra") {
    q.energy_mode = Srra{srra_c};
  } else {
    q.energy_mode = Shannon{};
  }
  const ScenarioFile f = generate_scenario(q);
  build_cluster(f);  // reject degenerate models before writing anything
  if (out.empty()) {
    std::cout << serialize(f);
  } else {
    save_scenario(f, out);
    std::cout << "wrote " << out << " (" << f.nodes.size() << " nodes)\n";
  }
  return 0;
}

int run_dynamic(const Loaded& l, int samples, const std::string& csv_path) {
  const Cluster& c = l.s.cluster;
  const DynamicPlan p = dynamic_lifetime(c, l.mode, samples, l.threads);
  std::cout << "mode " << mode_name(l.mode) << "\n"
            << "columns " << p.columns_considered << "\n"
            << "dynamic_lifetime " << num(p.lifetime) << "\n";
  if (c.size() <= kMaxBruteForceNodes) {
    const StaticResult s = brute_force(c, l.mode, l.threads);
    std::cout << "static_lifetime " << num(s.lifetime) << "\n"
              << "static_order " << join(s.schedule.order, ',') << "\n"
              << "gain " << num(p.lifetime - s.lifetime) << "\n";
  }
  std::cout << "support " << p.support() << "\n"
            << "exhausted " << join(p.active_rows, ',') << "\n";

  std::vector<std::string> header{"entry", "order", "slots"};
  for (int k = 0; k < c.size(); ++k) header.push_back("t" + std::to_string(k));
  for (int k = 0; k < c.size(); ++k) header.push_back("e" + std::to_string(k));
  Csv csv(header);
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const PlanEntry& e = p.entries[i];
    std::vector<std::string> row{std::to_string(i), join(e.column.order, ' '),
                                 num(e.slots)};
    for (int k = 0; k < c.size(); ++k) {
      row.push_back(e.column.times.empty() ? "" : num(e.column.times[k]));
    }
    for (int k = 0; k < c.size(); ++k) row.push_back(num(e.column.energy[k]));
    csv.row(row);
    std::cout << "  " << join(e.column.order, ',') << " x " << num(e.slots) << "\n";
  }
  csv.write(csv_path);
  return 0;
}

int run_geometry(const Loaded& l, int density, const std::string& csv_path,
                 const std::string& hull_path) {
  const Cluster& c = l.s.cluster;
  const int n = c.size();
  std::vector<EnergyPoint> pts;
  if (const auto* s = std::get_if<Srra>(&l.mode)) {
    pts = srra_points(c, s->c);
  } else {
    if (n > 3) {
      throw Error(ErrorKind::kGuard, "surface export limited to N <= 3 (got N = " +
                                         std::to_string(n) + ")");
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
      for (auto& p : surface_sample(order, c, density)) pts.push_back(std::move(p));
    } while (std::next_permutation(order.begin(), order.end()));
  }

  std::vector<std::string> header{"order"};
  for (int k = 0; k < n; ++k) header.push_back("t" + std::to_string(k));
  for (int k = 0; k < n; ++k) header.push_back("e" + std::to_string(k));
  Csv csv(header);
  for (const auto& p : pts) {
    std::vector<std::string> row{join(p.order, ' ')};
    for (int k = 0; k < n; ++k) row.push_back(p.times.empty() ? "" : num(p.times[k]));
    for (int k = 0; k < n; ++k) row.push_back(num(p.energy[k]));
    csv.row(row);
  }
  csv.write(csv_path);
  std::cout << "mode " << mode_name(l.mode) << "\n"
            << "points " << pts.size() << "\n";

  if (is_srra(l.mode)) {
    const std::size_t pick = closest_to_equal_line(pts, c.energies());
    std::cout << "closest_to_equal_line " << join(pts[pick].order, ',') << "\n";
  } else if (n == 2) {
    const CrossingReport r = equal_energy_crossing(c);
    for (const Crossing& x : r.crossings) {
      std::cout << "crossing " << x.order[0] << ',' << x.order[1] << " time "
                << num(x.time) << " lifetime " << num(x.lifetime) << "\n";
    }
    const Crossing& best = r.crossings[r.closer];
    std::cout << "closer " << best.order[0] << ',' << best.order[1] << "\n";
  }

  if (!hull_path.empty()) {
    if (n != 2) throw Error(ErrorKind::kGuard, "hull export needs N = 2");
    std::vector<std::array<double, 2>> flat;
    for (const auto& p : pts) {
      if (std::isfinite(p.energy[0]) && std::isfinite(p.energy[1])) {
        flat.push_back({p.energy[0], p.energy[1]});
      }
    }
    Csv hull({"e0", "e1"});
    const auto h = hull_2d(flat);
    for (const auto& v : h) hull.row({num(v[0]), num(v[1])});
    hull.write(hull_path);
    std::cout << "hull_vertices " << h.size() << "\n";
  }
  return 0;
}

void trace_csv(const SimTrace& t, int n, const std::string& path) {
  std::vector<std::string> header{"slot", "column"};
  for (int k = 0; k < n; ++k) header.push_back("spent" + std::to_string(k));
  for (int k = 0; k < n; ++k) header.push_back("remaining" + std::to_string(k));
  Csv csv(header);
  for (const auto& s : t.slots) {
    std::vector<std::string> row{std::to_string(s.slot), std::to_string(s.column)};
    for (double v : s.spent) row.push_back(num(v));
    for (double v : s.remaining) row.push_back(num(v));
    csv.row(row);
  }
  csv.write(path);
}

int run_simulate(const Loaded& l, const std::string& plan, const std::string& method,
                 const std::vector<int>& order, int samples, std::size_t max_slots,
                 const std::string& csv_path) {
  const Cluster& c = l.s.cluster;
  SimOptions opts;
  opts.record = !csv_path.empty();
  opts.max_slots = max_slots;
  SimTrace t;
  double analytic = 0.0;
  if (plan == "dynamic") {
    const DynamicPlan p = dynamic_lifetime(c, l.mode, samples, l.threads);
    analytic = p.lifetime;
    t = simulate_dynamic(p, c, opts);
    std::cout << "plan dynamic (" << p.support() << " columns)\n";
  } else {
    const StaticResult r =
        order.empty() ? run_static(method, l) : evaluate_schedule(order, c, l.mode);
    analytic = r.lifetime;
    t = simulate_static(r, c, opts);
    std::cout << "plan static " << join(r.schedule.order, ',') << "\n";
  }
  std::cout << "analytic_lifetime " << num(analytic) << "\n"
            << "completed_slots " << t.completed << "\n"
            << "first_dead " << t.first_dead << "\n";
  trace_csv(t, c.size(), csv_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifetime of a correlated-data sensor cluster polled by a base station"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random scenario");
  GeneratorParams gp;
  std::string gen_model = "bit_distance";
  std::string gen_mode = "shannon";
  std::string gen_out;
  int gen_bits = 5;
  double gen_c = std::numbers::ln2;
  GaussianField gen_g{1.0, 0.5, 3.0};
  gen->add_option("--seed", gp.seed, "RNG seed");
  gen->add_option("--nodes", gp.nodes, "node count")->check(CLI::PositiveNumber);
  gen->add_option("--side", gp.side, "square side length");
  gen->add_option("--energy-min", gp.energy_min, "smallest battery");
  gen->add_option("--energy-max", gp.energy_max, "largest battery");
  gen->add_option("--gamma", gp.gamma, "path-loss exponent");
  gen->add_option("--model", gen_model, "correlation model")
      ->check(CLI::IsMember({"bit_distance", "gaussian"}));
  gen->add_option("--max-bits", gen_bits, "bit-distance cap")->check(CLI::PositiveNumber);
  gen->add_option("--sigma2", gen_g.sigma2, "Gaussian variance");
  gen->add_option("--decay", gen_g.decay, "Gaussian decay per squared distance");
  gen->add_option("--offset", gen_g.offset, "quantization offset in bits per node");
  gen->add_option("--mode", gen_mode, "energy mode")
      ->check(CLI::IsMember({"shannon", "srra"}));
  gen->add_option("--srra-c", gen_c, "srra constant");
  gen->add_option("--out", gen_out, "output file (default: stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate one polling order");
  Common eval_c;
  std::string order_text;
  add_common(eval, eval_c);
  eval->add_option("--order", order_text, "comma-separated node ids")->required();

  // static-opt
  auto* sopt = app.add_subcommand("static-opt", "best single schedule");
  Common sopt_c;
  std::string method = "brute";
  add_common(sopt, sopt_c);
  sopt->add_option("--method", method, "search method")
      ->check(CLI::IsMember({"brute", "nnn", "mcn", "shp"}));

  // dynamic-opt
  auto* dopt = app.add_subcommand("dynamic-opt", "cooperation LP over all schedules");
  Common dopt_c;
  int samples = -1;
  add_common(dopt, dopt_c);
  dopt->add_option("--samples", samples, "columns per schedule (default: scenario)")
      ->check(CLI::PositiveNumber);

  // geometry-export
  auto* geo = app.add_subcommand("geometry-export", "energy points for plotting");
  Common geo_c;
  int density = -1;
  std::string hull_path;
  add_common(geo, geo_c);
  geo->add_option("--density", density, "lattice density (default: scenario)")
      ->check(CLI::PositiveNumber);
  geo->add_option("--hull", hull_path, "lower hull CSV (N = 2)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "slot-by-slot battery depletion");
  Common sim_c;
  std::string plan = "static";
  std::string sim_method = "brute";
  std::string sim_order;
  int sim_samples = -1;
  std::size_t max_slots = SimOptions{}.max_slots;
  add_common(sim, sim_c);
  sim->add_option("--plan", plan, "plan kind")->check(CLI::IsMember({"static", "dynamic"}));
  sim->add_option("--method", sim_method, "static search method")
      ->check(CLI::IsMember({"brute", "nnn", "mcn", "shp"}));
  sim->add_option("--order", sim_order, "explicit static order");
  sim->add_option("--samples", sim_samples, "columns per schedule (dynamic)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--max-slots", max_slots, "guard on the slot count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return run_gen(gp, gen_model, gen_bits, gen_g, gen_mode, gen_c, gen_out);
    if (*eval) {
      const Loaded l = load(eval_c);
      StaticResult r = evaluate_schedule(parse_order(order_text), l.s.cluster, l.mode);
      report_static(r, l.s.cluster, l.mode, eval_c.csv);
      return 0;
    }
    if (*sopt) {
      const Loaded l = load(sopt_c);
      report_static(run_static(method, l), l.s.cluster, l.mode, sopt_c.csv);
      return 0;
    }
    if (*dopt) {
      const Loaded l = load(dopt_c);
      return run_dynamic(l, samples > 0 ? samples : l.s.file.solver.samples_per_schedule,
                         dopt_c.csv);
    }
    if (*geo) {
      const Loaded l = load(geo_c);
      return run_geometry(l, density > 0 ? density : l.s.file.solver.grid_density,
                          geo_c.csv, hull_path);
    }
    const Loaded l = load(sim_c);
    return run_simulate(l, plan, sim_method,
                        sim_order.empty() ? std::vector<int>{} : parse_order(sim_order),
                        sim_samples > 0 ? sim_samples : l.s.file.solver.samples_per_schedule,
                        max_slots, sim_c.csv);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
