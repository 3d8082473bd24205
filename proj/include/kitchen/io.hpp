#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kitchen/optimizer.hpp"

namespace kitchen {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  std::string name;
  Problem problem;
  AnnealConfig anneal;
};

// Throws ConfigError with a line number for syntax errors and a field path
// for schema or semantic errors.
ProblemConfig parseConfig(const std::string& text, const std::string& source = "<config>");
ProblemConfig loadConfig(const std::filesystem::path& path);

enum class RoomVariant { Regular, Small, LShape };

const char* toString(RoomVariant v);
RoomVariant roomVariantFromString(const std::string& s);

// Small scales the room, its walls and the spawns by 0.8. LShape removes the
// top-right quarter of the room's bounding box and drops the interior walls.
Problem withRoomVariant(const Problem& problem, RoomVariant variant);

// Centered horizontal segment of half the room width.
Segment defaultInteriorWall(double width, double height);

nlohmann::json toJson(const Counter& c);
nlohmann::json toJson(const Layout& layout);
nlohmann::json toJson(const TimedPath& path);
nlohmann::json toJson(const CostVector& c);
nlohmann::json solutionToJson(const Solution& s, const Weights& weights);

Counter counterFromJson(const nlohmann::json& j);
Layout layoutFromJson(const nlohmann::json& j);
TimedPath timedPathFromJson(const nlohmann::json& j, Agent agent);
CostVector costVectorFromJson(const nlohmann::json& j);
// Placement events are not serialized.
Solution solutionFromJson(const nlohmann::json& j);

// Independent checks of a reported solution: layout invariants, static and
// dynamic path validity, and recomputed costs. Empty when all hold.
std::vector<std::string> verifySolution(const Solution& s, const Problem& problem);

struct SvgOptions {
  double pixelsPerMeter = 60.0;
  double margin = 30.0;
};

std::string renderSvg(const Layout& layout, const SimOutcome* outcome, const SvgOptions& opts = {});

}  // namespace kitchen
