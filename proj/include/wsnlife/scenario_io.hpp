#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsnlife/energy.hpp"
#include "wsnlife/model.hpp"

namespace wsnlife {

inline constexpr int kScenarioVersion = 1;

struct ScenarioNode {
  int id = 0;
  Point position;
  double energy = 1.0;
  std::optional<double> path_loss;
};

/// How d_k is derived when nodes carry no explicit path loss.
struct PathLossRule {
  double gamma = 2.0;  // d_k = (distance to base station)^gamma
};

struct SolverParams {
  int samples_per_schedule = 8;
  int threads = 0;  // 0: WSNLIFE_THREADS or the OpenMP default
  int grid_density = 50;
};

/// In-memory form of the scenario JSON document.
struct ScenarioFile {
  int version = kScenarioVersion;
  Point base_station;
  PathLossRule path_loss_rule;
  CorrelationModel correlation = BitDistance{5};
  EnergyMode energy_mode = Shannon{};
  SolverParams solver;
  std::vector<ScenarioNode> nodes;
};

/// A validated scenario: the document plus the cluster built from it.
struct Scenario {
  ScenarioFile file;
  Cluster cluster;
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// Error(kValidation) naming the offending field path.
ScenarioFile parse_scenario(const nlohmann::json& doc);
nlohmann::json to_json(const ScenarioFile& file);

/// Pretty-printed JSON with a trailing newline.
std::string serialize(const ScenarioFile& file);

Cluster build_cluster(const ScenarioFile& file);

Scenario load_scenario(const std::string& path);
Scenario load_scenario_text(const std::string& text);
void save_scenario(const ScenarioFile& file, const std::string& path);

struct GeneratorParams {
  std::uint64_t seed = 1;
  int nodes = 5;
  double side = 10.0;
  double energy_min = 1.0;
  double energy_max = 1.0;
  std::optional<Point> base_station;  // default: centre of the square
  double gamma = 2.0;
  CorrelationModel correlation = BitDistance{5};
  EnergyMode energy_mode = Shannon{};
};

/// Nodes uniform over [0, side]^2. Positions and energies come from separate
/// streams (see ScenarioRng), so the same parameters give the same document.
ScenarioFile generate_scenario(const GeneratorParams& params);

/// Deterministic stream: std::mt19937_64 seeded with
/// splitmix64(seed ^ splitmix64(stream_tag)); doubles take the top 53 bits.
class ScenarioRng {
 public:
  ScenarioRng(std::uint64_t seed, std::uint64_t stream_tag);
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

inline constexpr std::uint64_t kStreamPositions = 0x706f73;  // "pos"
inline constexpr std::uint64_t kStreamEnergies = 0x656e72;   // "enr"

}  // namespace wsnlife
