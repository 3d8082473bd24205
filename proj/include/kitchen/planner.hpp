#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kitchen/geometry.hpp"
#include "kitchen/recipe.hpp"

namespace kitchen {

struct TimedNode {
  Point2 q;
  double t = 0.0;

  bool operator==(const TimedNode&) const = default;
};

struct TimedPath {
  Agent agent = Agent::Human;
  std::vector<TimedNode> nodes;

  bool empty() const { return nodes.empty(); }
  double startTime() const { return nodes.front().t; }
  double endTime() const { return nodes.back().t; }
  double length() const;
  // Linear interpolation; clamps to the end points outside the time span.
  Point2 positionAt(double t) const;

  bool operator==(const TimedPath&) const = default;
};

// A time-stamped path used as an obstacle. Beyond its last node the agent is
// parked there; beyond `until` it is ignored.
struct MovingObstacle {
  TimedPath path;
  double until = std::numeric_limits<double>::infinity();
};

struct PlannerParams {
  double agentRadius = 0.3;
  double stepLength = 0.3;
  double speed = 1.0;
  double tolerance = 0.3;  // seconds; time-matching window half-width
  double standoff = 0.2;
  int iterationBudget = 5000;
  double goalBias = 0.8;
  int randomExtensionSteps = 5;
  int maxReplans = 3;
  // Extra separation the planner keeps beyond 2 * agentRadius. Covers the
  // sub-sampling of edges during dynamic checks.
  double dynamicMargin = 0.05;
  // Waits tried at the current node when a leg fails against moving obstacles.
  std::vector<double> waitSchedule = {1.0, 2.0, 4.0, 8.0, 16.0};
  // Iteration budget for each retry after a wait.
  int retryBudget = 1500;
};

class PlanningFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PlanningPrecondition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Sample {
  Point2 q;
  bool isGoal = false;
};

// Draws the goal with probability `bias`, otherwise a uniform point in `bounds`.
class GoalBiasedSampler {
 public:
  GoalBiasedSampler(Box bounds, Point2 goal, double bias);
  Sample draw(std::mt19937_64& rng);

 private:
  Point2 goal_;
  std::bernoulli_distribution pickGoal_;
  std::uniform_real_distribution<double> x_;
  std::uniform_real_distribution<double> y_;
};

// Goal-biased time-RRT. The goal is reached only if the agent can also stay
// there for `goalHold` seconds without conflict.
TimedPath planSingle(const Layout& layout, Agent agent, TimedNode start, Point2 goal,
                     std::span<const MovingObstacle> obstacles, std::mt19937_64& rng,
                     const PlannerParams& params, double goalHold = 0.0,
                     std::optional<int> budget = std::nullopt);

struct ServiceStop {
  std::optional<CounterKind> counter;  // empty for a plain waypoint
  Point2 point;
  double dwell = 0.0;
};

class TourFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Service configurations for each visit. Throws TourFailure when a counter is
// missing or unreachable.
std::vector<ServiceStop> resolveStops(const Layout& layout, const SubTask& subTask,
                                      const PlannerParams& params);

struct Tour {
  TimedPath path;
  // Node index at which each stop's dwell is finished.
  std::vector<std::size_t> visitDone;
};

Tour planStops(const Layout& layout, Agent agent, std::span<const ServiceStop> stops,
               TimedNode start, std::span<const MovingObstacle> obstacles,
               std::mt19937_64& rng, const PlannerParams& params);

TimedPath planTour(const Layout& layout, Agent agent, const SubTask& subTask, TimedNode start,
                   std::span<const MovingObstacle> obstacles, std::mt19937_64& rng,
                   const PlannerParams& params);

// Smallest distance from q to the positions `path` occupies during [lo, hi].
double windowDistance(const TimedPath& path, Point2 q, double lo, double hi);

struct CollisionQuery {
  double from = -std::numeric_limits<double>::infinity();
  double until = std::numeric_limits<double>::infinity();
};

// Earliest time at which a position of one path comes within 2 * radius of a
// position the other path occupies within +-tol of that time. Paths are
// sampled every 10 ms along their edges; after its last node an agent stays
// parked there.
std::optional<double> checkDynamicCollision(const TimedPath& a, const TimedPath& b, double radius,
                                            double tol, CollisionQuery query = {});

struct Belief {
  std::map<std::string, double> probs;
};

Belief beliefInit(const TaskPool& pool);
Belief beliefUpdate(const Belief& belief, const std::string& completedId);

// Predicted human tour for the most probable sub-task (ties: lowest id),
// starting from the human's pose and clock. Falls back to a single parked node.
TimedPath virtualHumanPath(const Layout& layout, const Belief& belief, const TaskPool& pool,
                           const AgentState& human, std::mt19937_64& rng,
                           const PlannerParams& params);

enum class PlanningPolicy { DirectThenReactive, AlwaysInfer };

enum class SegmentKind { Task, Retreat };

struct PathSegment {
  std::string label;  // sub-task id, or "retreat"
  SegmentKind kind = SegmentKind::Task;
  TimedPath path;
  std::uint64_t ordinal = 0;  // index of the agent's commitment that produced it
};

enum class FailureKind { PlanningBudget, UnavoidableCollision, Unreachable, SpawnBlocked };

const char* toString(FailureKind k);

struct SimFailure {
  FailureKind kind;
  std::string detail;
};

struct SimOutcome {
  bool success = false;
  std::vector<PathSegment> human;
  std::vector<PathSegment> robot;
  std::map<std::string, double> finishTimes;  // dish -> seconds
  std::optional<SimFailure> failure;
  int replanCount = 0;
  std::vector<std::string> humanTasks;  // claim order
  std::vector<std::string> robotTasks;
  // Place events at submission counters: (sub-task id, time).
  std::vector<std::pair<std::string, double>> placeEvents;

  const std::vector<PathSegment>& segments(Agent a) const { return a == Agent::Human ? human : robot; }
  // Whole trajectory of one agent, segments concatenated in time order.
  TimedPath trajectory(Agent a) const;
};

struct SimSetup {
  Point2 humanSpawn;
  Point2 robotSpawn;
  PlannerParams params;
  PlanningPolicy policy = PlanningPolicy::DirectThenReactive;
  bool robotEnabled = true;
};

// Deterministic per-purpose random stream derived from a run seed.
std::mt19937_64 rngStream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a = 0,
                          std::uint64_t b = 0);

namespace stream {
inline constexpr std::uint64_t kTasks = 0;
inline constexpr std::uint64_t kHuman = 1;
inline constexpr std::uint64_t kRobot = 2;
inline constexpr std::uint64_t kVirtual = 3;
inline constexpr std::uint64_t kRefuge = 4;
}  // namespace stream

SimOutcome simulate(const Layout& layout, const TaskPool& pool, std::uint64_t seed,
                    const SimSetup& setup);

}  // namespace kitchen
