#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kitchen/cost.hpp"
#include "kitchen/geometry.hpp"
#include "kitchen/planner.hpp"
#include "kitchen/recipe.hpp"

namespace kitchen {

enum class AnnealMode { Together, Separate };

const char* toString(AnnealMode m);
AnnealMode annealModeFromString(const std::string& s);

struct AnnealConfig {
  double t0 = 1.0;
  double cooling = 0.995;
  int iterations = 2000;
  int stageLength = 10;
  AnnealMode mode = AnnealMode::Together;
  double layoutThreshold = 0.05;
  std::uint64_t seed = 1;
  // Standard deviation of a position move at temperature 1, meters.
  double stepScale = 1.0;

  void validate() const;
};

// Everything an optimization run needs besides its schedule.
struct Problem {
  Room room;
  std::vector<Counter> inventory;  // positions and orientations are ignored
  std::vector<Recipe> recipes;
  DwellTimes dwell;
  SimSetup sim;
  CostParams costParams;
  Weights weights;
  // Counters keep at least this distance from the spawn points.
  double spawnKeepOut = 0.9;

  TaskPool pool() const { return TaskPool(expandRecipes(recipes, dwell)); }
};

double objective(double totalCost, double t);
// Metropolis test on objective values: accepts with probability min(1, fNew / fOld).
bool accept(double fOld, double fNew, std::mt19937_64& rng);
// The same test in the log domain: probability min(1, exp(-delta / t)).
bool acceptDelta(double delta, double t, std::mt19937_64& rng);

// Layout invariants hold, spawn points are clear of counters and every
// counter has a clear service configuration.
bool layoutAdmissible(const Layout& layout, const Problem& problem);

// Counters flush against random boundary walls, facing the room.
Layout initialLayout(const Problem& problem, std::mt19937_64& rng);

struct MoveStats {
  int attempts = 0;
  bool swapped = false;
  bool skipped = false;
};

Layout proposeLayoutMove(const Layout& layout, const Problem& problem, std::mt19937_64& rng,
                         double t, double stepScale, MoveStats* stats = nullptr);

// A fresh simulation of `layout` under a new random stream.
SimOutcome proposePathMove(const Layout& layout, const Problem& problem, std::uint64_t simSeed);

Solution evaluate(const Layout& layout, const Problem& problem, std::uint64_t simSeed);
Solution makeSolution(const Layout& layout, SimOutcome outcome, const Problem& problem,
                      std::uint64_t simSeed);

class ParetoSet {
 public:
  explicit ParetoSet(Weights weights = {}, std::size_t capacity = 5)
      : weights_(weights), capacity_(capacity) {}

  // Returns true when s is a member afterwards.
  bool insert(const Solution& s);
  const std::vector<Solution>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return members_.empty(); }
  const Weights& weights() const { return weights_; }

 private:
  Weights weights_;
  std::size_t capacity_;
  std::vector<Solution> members_;
};

ParetoSet paretoInsert(ParetoSet set, const Solution& s);

struct AnnealResult {
  ParetoSet pareto;
  Solution initial;
  Solution best;  // lowest total cost among accepted states
  int evaluations = 0;
  int accepted = 0;
  int failedSimulations = 0;
  int layoutPhaseIterations = 0;  // Separate mode only
  // Total cost of the current state after each path-evaluating iteration.
  std::vector<double> trace;
  std::string diagnostic;
};

AnnealResult anneal(const AnnealConfig& config, const Problem& problem);

// Seed of the k-th simulation in a run.
std::uint64_t simulationSeed(std::uint64_t runSeed, std::uint64_t k);

}  // namespace kitchen
