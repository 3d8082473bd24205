#include <doctest.h>

#include <set>

#include "fixtures.hpp"

using namespace kitchen;
using namespace fixtures;

namespace {

struct Scene {
  Problem problem;
  Layout layout;
};

const Scene& scene() {
  static const Scene s = [] {
    Scene out{loadConfig(scenario("two_burger_regular.json")).problem, {}};
    std::mt19937_64 rng(11);
    out.layout = initialLayout(out.problem, rng);
    return out;
  }();
  return s;
}

SimOutcome run(std::uint64_t seed, bool robot = true) {
  const Scene& s = scene();
  SimSetup setup = s.problem.sim;
  setup.robotEnabled = robot;
  return simulate(s.layout, s.problem.pool(), seed, setup);
}

bool replaysAlone(const PathSegment& seg, std::uint64_t seed) {
  return fixtures::replaysAlone(scene().layout, scene().problem, seg, seed);
}

bool sameSegments(const std::vector<PathSegment>& a, const std::vector<PathSegment>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label || a[i].kind != b[i].kind || a[i].path.nodes != b[i].path.nodes) return false;
  }
  return true;
}

// Two rooms joined by a dead-end corridor 1 m wide. The bun sits at the dead
// end and the robot waits inside the corridor.
Layout dumbbell() {
  Room room({{0, 0}, {4, 0}, {4, 1.5}, {8, 1.5}, {8, 2.5}, {4, 2.5}, {4, 4}, {0, 4}});
  Layout l{room, {}};
  l.counters.push_back(counter("bun", CounterKind::Bun, {7.7, 2.0}, QuarterTurn::West));
  l.counters.push_back(southCounter("plate", CounterKind::Plate, 2.0));
  return l;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("empty pool succeeds at once") {
  const Scene& s = scene();
  const SimOutcome o = simulate(s.layout, TaskPool(std::vector<SubTask>{}), 1, s.problem.sim);
  CHECK(o.success);
  CHECK(o.human.empty());
  CHECK(o.robot.empty());
  CHECK(o.finishTimes.empty());
}

TEST_CASE("most seeds complete all seven sub-tasks") {
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SimOutcome o = run(seed);
    if (!o.success) continue;
    ++ok;
    int tasks = 0;
    for (Agent a : {Agent::Human, Agent::Robot}) {
      for (const PathSegment& seg : o.segments(a)) tasks += seg.kind == SegmentKind::Task;
    }
    CHECK(tasks == 7);
  }
  CHECK(ok >= 80);
}

TEST_CASE("identical inputs give identical outcomes") {
  for (std::uint64_t seed : {3u, 4u}) {
    const SimOutcome a = run(seed);
    const SimOutcome b = run(seed);
    CHECK(a.success == b.success);
    CHECK(sameSegments(a.human, b.human));
    CHECK(sameSegments(a.robot, b.robot));
    CHECK(a.finishTimes == b.finishTimes);
    CHECK(a.replanCount == b.replanCount);
  }
}

TEST_CASE("human segments never depend on the robot") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (bool robot : {true, false}) {
      const SimOutcome o = run(seed, robot);
      for (const PathSegment& seg : o.human) CHECK(replaysAlone(seg, seed));
    }
  }
  const SimOutcome alone = run(5, false);
  CHECK(alone.success);
  CHECK(alone.robot.empty());
  CHECK(alone.humanTasks.size() == 7);
}

TEST_CASE("sub-tasks are done once and in dependency order") {
  const TaskPool pool = scene().problem.pool();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SimOutcome o = run(seed);
    if (!o.success) continue;
    CHECK(integrityError(o, pool) == "");
    std::set<std::string> h(o.humanTasks.begin(), o.humanTasks.end());
    std::set<std::string> r(o.robotTasks.begin(), o.robotTasks.end());
    CHECK(h.size() + r.size() == 7);

    SimOutcome twice = o;
    twice.robotTasks.push_back(o.humanTasks.empty() ? o.robotTasks.front() : o.humanTasks.front());
    CHECK(integrityError(twice, pool) != "");
    SimOutcome early = o;
    for (PathSegment& seg : early.human) {
      if (seg.kind == SegmentKind::Task && seg.label.rfind("bun", 0) != 0) seg.path.nodes.front().t = -1.0;
    }
    for (PathSegment& seg : early.robot) {
      if (seg.kind == SegmentKind::Task && seg.label.rfind("bun", 0) != 0) seg.path.nodes.front().t = -1.0;
    }
    CHECK(integrityError(early, pool) != "");
  }
}

TEST_CASE("timestamps follow distance over speed") {
  const PlannerParams& p = scene().problem.sim.params;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SimOutcome o = run(seed);
    if (!o.success) continue;
    std::map<std::string, double> finish;
    for (Agent a : {Agent::Human, Agent::Robot}) {
      const TimedPath whole = o.trajectory(a);
      for (std::size_t i = 1; i < whole.nodes.size(); ++i) {
        const double dt = whole.nodes[i].t - whole.nodes[i - 1].t;
        CHECK(dt >= 0.0);
        CHECK(dt + 1e-9 >= distance(whole.nodes[i - 1].q, whole.nodes[i].q) / p.speed);
      }
      for (const PathSegment& seg : o.segments(a)) {
        if (seg.kind != SegmentKind::Task) continue;
        double& f = finish[scene().problem.pool().get(seg.label).dish];
        f = std::max(f, seg.path.endTime());
      }
    }
    CHECK(finish == o.finishTimes);
  }
}

TEST_CASE("agents keep apart under the dense oracle") {
  const PlannerParams& p = scene().problem.sim.params;
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 5 && seed <= 20; ++seed) {
    const SimOutcome o = run(seed);
    if (!o.success) continue;
    ++checked;
    const double sep = ref::minSeparation(o.trajectory(Agent::Human), o.trajectory(Agent::Robot), p.tolerance);
    CHECK(sep >= 2.0 * p.agentRadius);
  }
  CHECK(checked == 5);
}

TEST_CASE("a head-on dead-end corridor narrower than four radii fails with a collision") {
  const Layout l = dumbbell();
  REQUIRE(validateLayout(l).empty());
  TaskPool pool(expandRecipes({{"b", {Component::Bun}, CounterKind::Plate}}));
  SimSetup setup;
  setup.humanSpawn = {3.2, 2.0};
  setup.robotSpawn = {6.0, 2.0};
  REQUIRE(1.0 < 4.0 * setup.params.agentRadius);
  const SimOutcome o = simulate(l, pool, 1, setup);
  CHECK_FALSE(o.success);
  REQUIRE(o.failure.has_value());
  CHECK((o.failure->kind == FailureKind::UnavoidableCollision));
  CHECK_FALSE(o.failure->detail.empty());
}

TEST_CASE("blocked spawns are reported") {
  const Scene& s = scene();
  SimSetup setup = s.problem.sim;
  setup.robotSpawn = setup.humanSpawn;
  const SimOutcome o = simulate(s.layout, s.problem.pool(), 1, setup);
  CHECK_FALSE(o.success);
  REQUIRE(o.failure.has_value());
  CHECK((o.failure->kind == FailureKind::SpawnBlocked));
}

}
