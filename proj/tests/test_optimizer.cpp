#include <doctest.h>

#include <functional>
#include <numbers>
#include <set>

#include "fixtures.hpp"

using namespace kitchen;
using namespace fixtures;

namespace {

const Problem& problem() {
  static const Problem p = loadConfig(scenario("two_burger_regular.json")).problem;
  return p;
}

const Layout& startLayout() {
  static const Layout l = [] {
    std::mt19937_64 rng(5);
    return initialLayout(problem(), rng);
  }();
  return l;
}

double frequency(int n, const std::function<bool()>& trial) {
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += trial();
  return static_cast<double>(hits) / n;
}

Solution withCosts(double a, double b, double c, double d, double e) {
  Solution s;
  s.costs.layoutDistance = a;
  s.costs.layoutRotation = b;
  s.costs.pathLength = c;
  s.costs.pathTime = d;
  s.costs.pathNarrowness = e;
  return s;
}

double meanStep(double t, int n) {
  Layout l{problem().room, {counter("bun", CounterKind::Bun, {2.0, 6.0}, QuarterTurn::North)}};
  REQUIRE(layoutAdmissible(l, problem()));
  std::mt19937_64 rng(17);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    MoveStats st;
    const Layout next = proposeLayoutMove(l, problem(), rng, t, 1.0, &st);
    REQUIRE_FALSE(st.skipped);
    REQUIRE(st.attempts == 1);
    sum += distance(next.counters[0].position, l.counters[0].position);
  }
  return sum / n;
}

AnnealConfig shortRun(int iterations, double t0, double cooling = 0.995) {
  AnnealConfig c;
  c.iterations = iterations;
  c.t0 = t0;
  c.cooling = cooling;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("objective") {
  CHECK(objective(0.0, 0.7) == 1.0);
  CHECK(objective(0.5, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  double previous = 1.0;
  for (double c = 0.5; c < 200; c *= 2) {
    CHECK(objective(c, 1.0) < previous);
    previous = objective(c, 1.0);
  }
  CHECK(objective(1e6, 1.0) == 0.0);
  CHECK_THROWS(objective(1.0, 0.0));
  CHECK_THROWS(objective(1.0, -1.0));
}

TEST_CASE("accept on objective values") {
  std::mt19937_64 rng(1);
  CHECK(frequency(1000, [&] { return accept(0.4, 0.4, rng); }) == 1.0);
  CHECK(frequency(1000, [&] { return accept(0.4, 0.9, rng); }) == 1.0);
  CHECK(frequency(1000, [&] { return accept(0.4, 0.0, rng); }) == 0.0);
  CHECK(std::abs(frequency(10000, [&] { return accept(0.6, 0.3, rng); }) - 0.5) <= 0.02);
  CHECK_THROWS(accept(0.0, 0.5, rng));
}

TEST_CASE("Metropolis acceptance statistics") {
  std::mt19937_64 rng(2);
  const std::pair<double, double> grid[] = {{0.0, 1.0}, {std::log(2.0), 1.0}, {2.0, 0.5}};
  for (auto [delta, t] : grid) {
    const double expected = std::min(1.0, std::exp(-delta / t));
    CHECK(std::abs(frequency(10000, [&] { return acceptDelta(delta, t, rng); }) - expected) <= 0.02);
    const double fOld = objective(1.0, t), fNew = objective(1.0 + delta, t);
    CHECK(std::abs(frequency(10000, [&] { return accept(fOld, fNew, rng); }) - expected) <= 0.02);
  }
  CHECK(frequency(1000, [&] { return acceptDelta(1e-3, 1e-12, rng); }) == 0.0);
  CHECK(frequency(1000, [&] { return acceptDelta(5.0, 1e12, rng); }) == 1.0);
}

TEST_CASE("layout moves") {
  std::mt19937_64 rng(4);
  const Layout& l = startLayout();
  REQUIRE(layoutAdmissible(l, problem()));

  Layout single{problem().room, {counter("bun", CounterKind::Bun, {2.0, 6.0}, QuarterTurn::North)}};
  for (int i = 0; i < 200; ++i) {
    MoveStats st;
    proposeLayoutMove(single, problem(), rng, 1.0, 1.0, &st);
    CHECK_FALSE(st.swapped);
  }

  auto poses = [](const Layout& x) {
    std::multiset<std::tuple<double, double, int>> s;
    for (const Counter& c : x.counters) s.insert({c.position.x, c.position.y, static_cast<int>(c.orientation)});
    return s;
  };
  int swaps = 0;
  for (int i = 0; i < 200; ++i) {
    MoveStats st;
    const Layout next = proposeLayoutMove(l, problem(), rng, 0.5, 1.0, &st);
    CHECK(layoutAdmissible(next, problem()));
    CHECK(next.counters.size() == l.counters.size());
    if (st.skipped) {
      CHECK(poses(next) == poses(l));
    } else if (st.swapped) {
      ++swaps;
      CHECK(poses(next) == poses(l));
    }
  }
  CHECK(swaps > 0);
}

TEST_CASE("layout move size scales with temperature") {
  const double hot = meanStep(0.2, 4000);
  const double cool = meanStep(0.1, 4000);
  CHECK(hot == doctest::Approx(0.2 * std::sqrt(std::numbers::pi / 2)).epsilon(0.05));
  CHECK(hot / cool == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("path moves") {
  const Layout& l = startLayout();
  const SimOutcome a = proposePathMove(l, problem(), 7);
  const SimOutcome b = proposePathMove(l, problem(), 7);
  CHECK(a.humanTasks == b.humanTasks);
  CHECK(a.robotTasks == b.robotTasks);
  CHECK(a.trajectory(Agent::Human).nodes == b.trajectory(Agent::Human).nodes);

  std::set<std::set<std::string>> humanSets;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SimOutcome o = proposePathMove(l, problem(), seed);
    humanSets.insert(std::set<std::string>(o.humanTasks.begin(), o.humanTasks.end()));
  }
  CHECK(humanSets.size() >= 2);

  Layout broken = l;
  broken.counters.push_back(broken.counters.front());
  CHECK_THROWS_AS(proposePathMove(broken, problem(), 1), std::invalid_argument);
}

TEST_CASE("Pareto set examples") {
  ParetoSet set;
  REQUIRE(set.insert(withCosts(0.2, 0.2, 0.2, 0.2, 0.2)));
  CHECK_FALSE(set.insert(withCosts(0.3, 0.2, 0.2, 0.2, 0.2)));
  CHECK(set.size() == 1);

  REQUIRE(set.insert(withCosts(0.1, 0.3, 0.3, 0.3, 0.3)));
  CHECK(set.size() == 2);
  CHECK(set.insert(withCosts(0.1, 0.1, 0.1, 0.1, 0.1)));
  CHECK(set.size() == 1);

  ParetoSet full;
  for (int i = 0; i < 5; ++i) {
    REQUIRE(full.insert(withCosts(0.1 * i, 0.5 - 0.1 * i, 0.1, 0.1, 0.1 * i)));
  }
  REQUIRE(full.size() == 5);
  CHECK(full.insert(withCosts(0.05, 0.45, 0.1, 0.1, 0.05)));
  CHECK(full.size() == 5);
  for (const Solution& m : full.members()) CHECK(m.costs.pathNarrowness < 0.4);

  ParetoSet worst;
  for (int i = 0; i < 5; ++i) REQUIRE(worst.insert(withCosts(0.1 * i, 0.5 - 0.1 * i, 0.1, 0.1, 0.1)));
  CHECK_FALSE(worst.insert(withCosts(0.05, 0.45, 0.1, 0.1, 0.9)));
  CHECK(worst.size() == 5);

  const ParetoSet copy = paretoInsert(ParetoSet{}, withCosts(0, 0, 0, 0, 0));
  CHECK(copy.size() == 1);
}

TEST_CASE("Pareto set matches a brute-force archive") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 50);
  const Weights w;
  for (int stream = 0; stream < 300; ++stream) {
    std::vector<CostVector> costs;
    ParetoSet set(w);
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const Solution s = withCosts(u(rng), u(rng), u(rng), u(rng), u(rng));
      costs.push_back(s.costs);
      set.insert(s);
      REQUIRE(set.size() <= 5);
      for (const Solution& a : set.members()) {
        for (const Solution& b : set.members()) CHECK_FALSE(dominates(a, b));
      }
    }
    std::vector<CostVector> got;
    for (const Solution& m : set.members()) got.push_back(m.costs);
    CHECK(ref::sortedTerms(got) == ref::sortedTerms(ref::archive(costs, w, 5)));
  }
}

TEST_CASE("anneal with no iterations keeps the initial solution") {
  const AnnealResult r = anneal(shortRun(0, 1.0), problem());
  CHECK(r.evaluations == 1);
  CHECK(r.trace.empty());
  CHECK(r.pareto.size() <= 1);
  if (r.pareto.size() == 1) CHECK(r.pareto.members()[0].costs == r.initial.costs);
  CHECK(r.best.totalCost == r.initial.totalCost);
}

TEST_CASE("very hot annealing accepts everything") {
  const AnnealResult r = anneal(shortRun(30, 1e12, 1.0), problem());
  CHECK(r.accepted == 30);
  CHECK(r.evaluations == 31);
}

TEST_CASE("very cold annealing only accepts improvements") {
  const AnnealResult r = anneal(shortRun(30, 1e-12, 1.0), problem());
  REQUIRE(r.trace.size() == 30);
  double previous = r.initial.totalCost;
  for (double c : r.trace) {
    CHECK(c <= previous);
    previous = c;
  }
  CHECK(r.best.totalCost == previous);
}

TEST_CASE("anneal bookkeeping") {
  const AnnealResult a = anneal(shortRun(20, 0.2), problem());
  const AnnealResult b = anneal(shortRun(20, 0.2), problem());
  CHECK(a.trace == b.trace);
  CHECK(a.best.totalCost <= a.initial.totalCost);
  CHECK(*std::min_element(a.trace.begin(), a.trace.end()) >= a.best.totalCost);
  for (const Solution& m : a.pareto.members()) {
    CHECK(m.outcome.success);
    CHECK(m.totalCost == totalCost(m.costs, problem().weights));
    CHECK(verifySolution(m, problem()).empty());
  }

  AnnealConfig sep = shortRun(40, 0.2);
  sep.mode = AnnealMode::Separate;
  const AnnealResult s = anneal(sep, problem());
  CHECK(s.layoutPhaseIterations <= 20);
  CHECK(s.trace.size() == static_cast<std::size_t>(40 - s.layoutPhaseIterations));

  AnnealConfig bad;
  bad.cooling = 0.0;
  CHECK_THROWS(anneal(bad, problem()));
  bad = AnnealConfig{};
  bad.stageLength = 0;
  CHECK_THROWS(anneal(bad, problem()));
}

}
