#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kitchen/io.hpp"
#include "kitchen/optimizer.hpp"

namespace kitchen {

struct ExperimentOptions {
  std::optional<std::uint64_t> seed;  // first seed; config value when unset
  int runs = 1;
  std::vector<AnnealMode> modes;  // config mode when empty
  std::vector<RoomVariant> rooms{RoomVariant::Regular};
  std::optional<int> iterations;
  bool alwaysInfer = false;
  int threads = 1;
};

struct RunRecord {
  std::uint64_t seed = 0;
  AnnealResult result;
  double wallSeconds = 0.0;
};

// All runs of one (room, mode) pair, seeds in increasing order.
struct RunGroup {
  RoomVariant room = RoomVariant::Regular;
  AnnealMode mode = AnnealMode::Together;
  Problem problem;
  AnnealConfig anneal;
  std::vector<RunRecord> runs;
  ParetoSet pareto;  // run Pareto sets merged in seed order
  std::vector<std::string> rejected;  // merged members that failed verification
};

struct RunReport {
  std::string name;
  std::vector<RunGroup> groups;

  bool hasValidSolution() const;
};

// Weighted path cost of the run's lowest-total accepted state.
double runPathCost(const RunRecord& run, const Weights& weights);
double median(std::vector<double> values);

// Runs rooms x modes x seeds. Runs are independent and may execute on
// several threads; merging and verification are sequential and ordered.
RunReport runExperiment(const ProblemConfig& config, const ExperimentOptions& options);

// Deterministic unless includeTiming is set.
nlohmann::json reportToJson(const RunReport& report, bool includeTiming = false);

}  // namespace kitchen
