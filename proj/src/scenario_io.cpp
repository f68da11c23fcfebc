#include "wsnlife/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "wsnlife/error.hpp"

namespace wsnlife {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::kValidation, path + ": " + msg);
}

void only_keys(const json& obj, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(path + "." + key, "unknown field");
  }
}

const json& need(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Point parse_point(const json& v, const std::string& path) {
  only_keys(v, path, {"x", "y"});
  return {number(need(v, path, "x"), path + ".x"),
          number(need(v, path, "y"), path + ".y")};
}

CorrelationModel parse_correlation(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const std::string model = text(need(v, path, "model"), path + ".model");
  if (model == "bit_distance") {
    only_keys(v, path, {"model", "max_bits"});
    const int n = integer(need(v, path, "max_bits"), path + ".max_bits");
    if (n < 1) fail(path + ".max_bits", "must be >= 1");
    return BitDistance{n};
  }
  if (model == "gaussian") {
    only_keys(v, path, {"model", "sigma2", "decay", "offset"});
    GaussianField g;
    g.sigma2 = number(need(v, path, "sigma2"), path + ".sigma2");
    g.decay = number(need(v, path, "decay"), path + ".decay");
    if (v.contains("offset")) g.offset = number(v.at("offset"), path + ".offset");
    if (!(g.sigma2 > 0.0)) fail(path + ".sigma2", "must be > 0");
    if (!(g.decay >= 0.0)) fail(path + ".decay", "must be >= 0");
    return g;
  }
  fail(path + ".model", "expected \"bit_distance\" or \"gaussian\"");
}

EnergyMode parse_mode(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const std::string mode = text(need(v, path, "mode"), path + ".mode");
  if (mode == "shannon") {
    only_keys(v, path, {"mode"});
    return Shannon{};
  }
  if (mode == "srra") {
    only_keys(v, path, {"mode", "c"});
    Srra s;
    if (v.contains("c")) s.c = number(v.at("c"), path + ".c");
    if (!(s.c > 0.0)) fail(path + ".c", "must be > 0");
    return s;
  }
  fail(path + ".mode", "expected \"shannon\" or \"srra\"");
}

SolverParams parse_solver(const json& v, const std::string& path) {
  only_keys(v, path, {"samples_per_schedule", "threads", "grid_density"});
  SolverParams p;
  if (v.contains("samples_per_schedule")) {
    p.samples_per_schedule =
        integer(v.at("samples_per_schedule"), path + ".samples_per_schedule");
    if (p.samples_per_schedule < 1) {
      fail(path + ".samples_per_schedule", "must be >= 1");
    }
  }
  if (v.contains("threads")) {
    p.threads = integer(v.at("threads"), path + ".threads");
    if (p.threads < 0) fail(path + ".threads", "must be >= 0");
  }
  if (v.contains("grid_density")) {
    p.grid_density = integer(v.at("grid_density"), path + ".grid_density");
    if (p.grid_density < 1) fail(path + ".grid_density", "must be >= 1");
  }
  return p;
}

}  // namespace

ScenarioFile parse_scenario(const json& doc) {
  const std::string root = "$";
  only_keys(doc, root,
            {"version", "base_station", "path_loss_rule", "correlation",
             "energy_mode", "solver", "nodes"});
  ScenarioFile f;
  f.version = integer(need(doc, root, "version"), "$.version");
  if (f.version != kScenarioVersion) {
    fail("$.version", "unsupported version " + std::to_string(f.version));
  }
  if (doc.contains("base_station")) {
    f.base_station = parse_point(doc.at("base_station"), "$.base_station");
  }
  if (doc.contains("path_loss_rule")) {
    const json& r = doc.at("path_loss_rule");
    only_keys(r, "$.path_loss_rule", {"gamma"});
    if (r.contains("gamma")) {
      f.path_loss_rule.gamma = number(r.at("gamma"), "$.path_loss_rule.gamma");
    }
    if (!(f.path_loss_rule.gamma > 0.0)) {
      fail("$.path_loss_rule.gamma", "must be > 0");
    }
  }
  f.correlation = parse_correlation(need(doc, root, "correlation"), "$.correlation");
  if (doc.contains("energy_mode")) {
    f.energy_mode = parse_mode(doc.at("energy_mode"), "$.energy_mode");
  }
  if (doc.contains("solver")) f.solver = parse_solver(doc.at("solver"), "$.solver");

  const json& nodes = need(doc, root, "nodes");
  if (!nodes.is_array() || nodes.empty()) {
    fail("$.nodes", "expected a non-empty array");
  }
  std::vector<char> seen(nodes.size(), 0);
  int explicit_count = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string p = "$.nodes[" + std::to_string(k) + "]";
    const json& n = nodes[k];
    only_keys(n, p, {"id", "x", "y", "energy", "path_loss"});
    ScenarioNode node;
    node.id = integer(need(n, p, "id"), p + ".id");
    if (node.id < 0 || node.id >= static_cast<int>(nodes.size())) {
      fail(p + ".id", "ids must be 0..N-1");
    }
    if (seen[node.id]) fail(p + ".id", "duplicate id " + std::to_string(node.id));
    seen[node.id] = 1;
    node.position = {number(need(n, p, "x"), p + ".x"),
                     number(need(n, p, "y"), p + ".y")};
    node.energy = number(need(n, p, "energy"), p + ".energy");
    if (!(node.energy > 0.0)) fail(p + ".energy", "must be > 0");
    if (n.contains("path_loss")) {
      node.path_loss = number(n.at("path_loss"), p + ".path_loss");
      if (!(*node.path_loss > 0.0)) fail(p + ".path_loss", "must be > 0");
      ++explicit_count;
    }
    f.nodes.push_back(node);
  }
  if (explicit_count != 0 && explicit_count != static_cast<int>(f.nodes.size())) {
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
      if (!f.nodes[k].path_loss) {
        fail("$.nodes[" + std::to_string(k) + "].path_loss",
             "either every node carries path_loss or none does");
      }
    }
  }
  return f;
}

json to_json(const ScenarioFile& f) {
  json doc;
  doc["version"] = f.version;
  doc["base_station"] = {{"x", f.base_station.x}, {"y", f.base_station.y}};
  doc["path_loss_rule"] = {{"gamma", f.path_loss_rule.gamma}};
  if (const auto* b = std::get_if<BitDistance>(&f.correlation)) {
    doc["correlation"] = {{"model", "bit_distance"}, {"max_bits", b->max_bits}};
  } else {
    const auto& g = std::get<GaussianField>(f.correlation);
    doc["correlation"] = {{"model", "gaussian"},
                          {"sigma2", g.sigma2},
                          {"decay", g.decay},
                          {"offset", g.offset}};
  }
  if (const auto* s = std::get_if<Srra>(&f.energy_mode)) {
    doc["energy_mode"] = {{"mode", "srra"}, {"c", s->c}};
  } else {
    doc["energy_mode"] = {{"mode", "shannon"}};
  }
  doc["solver"] = {{"samples_per_schedule", f.solver.samples_per_schedule},
                   {"threads", f.solver.threads},
                   {"grid_density", f.solver.grid_density}};
  json nodes = json::array();
  for (const auto& n : f.nodes) {
    json j = {{"id", n.id},
              {"x", n.position.x},
              {"y", n.position.y},
              {"energy", n.energy}};
    if (n.path_loss) j["path_loss"] = *n.path_loss;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

std::string serialize(const ScenarioFile& file) {
  return to_json(file).dump(2) + "\n";
}

Cluster build_cluster(const ScenarioFile& f) {
  std::vector<NodeSpec> specs;
  specs.reserve(f.nodes.size());
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    const ScenarioNode& n = f.nodes[k];
    NodeSpec s{n.id, n.position, n.energy, 0.0};
    if (n.path_loss) {
      s.path_loss = *n.path_loss;
    } else {
      const double dist = std::hypot(n.position.x - f.base_station.x,
                                     n.position.y - f.base_station.y);
      s.path_loss = std::pow(dist, f.path_loss_rule.gamma);
      if (!(s.path_loss > 0.0)) {
        fail("$.nodes[" + std::to_string(k) + "]",
             "node sits on the base station; distance rule gives zero path loss");
      }
    }
    specs.push_back(s);
  }
  return Cluster(std::move(specs), f.correlation);
}

Scenario load_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("scenario parse error: ") + e.what());
  }
  ScenarioFile f = parse_scenario(doc);
  Cluster c = build_cluster(f);
  return Scenario{std::move(f), std::move(c)};
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot read scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario_text(ss.str());
}

void save_scenario(const ScenarioFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kValidation, "cannot write " + path);
  out << serialize(file);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ScenarioRng::ScenarioRng(std::uint64_t seed, std::uint64_t stream_tag)
    : engine_(splitmix64(seed ^ splitmix64(stream_tag))) {}

double ScenarioRng::uniform() {
  // std::uniform_real_distribution is implementation-defined; this is not.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ScenarioRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

ScenarioFile generate_scenario(const GeneratorParams& p) {
  if (p.nodes < 1) throw Error(ErrorKind::kValidation, "nodes must be >= 1");
  if (!(p.side > 0.0)) throw Error(ErrorKind::kValidation, "side must be > 0");
  if (!(p.energy_min > 0.0) || p.energy_max < p.energy_min) {
    throw Error(ErrorKind::kValidation, "need 0 < energy_min <= energy_max");
  }
  if (!(p.gamma > 0.0)) throw Error(ErrorKind::kValidation, "gamma must be > 0");

  ScenarioFile f;
  f.base_station = p.base_station.value_or(Point{p.side / 2.0, p.side / 2.0});
  f.path_loss_rule.gamma = p.gamma;
  f.correlation = p.correlation;
  f.energy_mode = p.energy_mode;

  ScenarioRng pos(p.seed, kStreamPositions);
  ScenarioRng en(p.seed, kStreamEnergies);
  for (int k = 0; k < p.nodes; ++k) {
    ScenarioNode n;
    n.id = k;
    n.position.x = pos.uniform(0.0, p.side);
    n.position.y = pos.uniform(0.0, p.side);
    n.energy = en.uniform(p.energy_min, p.energy_max);
    f.nodes.push_back(n);
  }
  return f;
}

}  // namespace wsnlife
