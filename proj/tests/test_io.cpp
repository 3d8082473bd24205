#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "kitchen/experiment.hpp"

using namespace kitchen;
using namespace fixtures;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json scenarioJson() { return nlohmann::json::parse(read(scenario("two_burger_regular.json"))); }

std::string errorOf(const std::string& text) {
  try {
    parseConfig(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

double shoelace(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 p = poly[i], q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return std::abs(a) / 2;
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const RunReport& smallReport() {
  static const RunReport r = [] {
    ExperimentOptions o;
    o.seed = 1;
    o.iterations = 12;
    return runExperiment(loadConfig(scenario("two_burger_regular.json")), o);
  }();
  return r;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("bundled scenarios load") {
  for (const char* name : {"two_burger_regular.json", "two_burger_small.json", "two_burger_lshape.json"}) {
    const ProblemConfig cfg = loadConfig(scenario(name));
    CHECK(cfg.problem.inventory.size() == 9);
    CHECK(cfg.problem.recipes.size() == 2);
    CHECK(cfg.problem.pool().all().size() == 7);
    CHECK(cfg.problem.costParams.lengthFactor == 3.0);
    CHECK(cfg.anneal.iterations == 2000);
  }
  const ProblemConfig regular = loadConfig(scenario("two_burger_regular.json"));
  CHECK(regular.problem.room.interiorWalls().size() == 1);
  CHECK_FALSE(regular.problem.room.interiorWallsBlockMotion());
  CHECK(regular.problem.sim.params.agentRadius == 0.3);
}

TEST_CASE("config errors name the line or the field") {
  const std::string empty = errorOf("");
  CHECK(contains(empty, "line 1"));
  const std::string broken = errorOf("{\n  \"name\": \"x\",\n  \"room\": {,\n}");
  CHECK(contains(broken, "line 3"));

  nlohmann::json j = scenarioJson();
  auto& counters = j["counters"];
  counters.erase(std::remove_if(counters.begin(), counters.end(),
                                [](const nlohmann::json& c) { return c["kind"] == "Stove"; }),
                 counters.end());
  const std::string noStove = errorOf(j.dump());
  CHECK(contains(noStove, "Stove"));
  CHECK(contains(noStove, "recipes"));

  j = scenarioJson();
  j["agents"]["radius"] = -0.3;
  CHECK(contains(errorOf(j.dump()), "agents.radius"));
  j = scenarioJson();
  j["anneal"]["mode"] = "sideways";
  CHECK_FALSE(errorOf(j.dump()).empty());
  j = scenarioJson();
  j["room"]["type"] = "circle";
  CHECK(contains(errorOf(j.dump()), "room.type"));
  CHECK_THROWS_AS(loadConfig("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("room variants") {
  const Problem p = loadConfig(scenario("two_burger_regular.json")).problem;
  const Problem small = withRoomVariant(p, RoomVariant::Small);
  CHECK(small.room.perimeter() == doctest::Approx(0.8 * p.room.perimeter()).epsilon(1e-12));
  CHECK(small.sim.humanSpawn.x == doctest::Approx(0.8 * p.sim.humanSpawn.x).epsilon(1e-12));
  CHECK(small.room.interiorWalls().size() == 1);
  const Problem l = withRoomVariant(p, RoomVariant::LShape);
  CHECK(l.room.boundary().size() == 6);
  CHECK(l.room.interiorWalls().empty());
  CHECK(shoelace(l.room.boundary()) == doctest::Approx(0.75 * shoelace(p.room.boundary())).epsilon(1e-12));
  CHECK((roomVariantFromString("lshape") == RoomVariant::LShape));
  CHECK_THROWS(roomVariantFromString("round"));
}

TEST_CASE("solutions survive a serialization round trip") {
  const RunReport& r = smallReport();
  REQUIRE(r.hasValidSolution());
  const RunGroup& g = r.groups.front();
  for (const Solution& s : g.pareto.members()) {
    const nlohmann::json j = solutionToJson(s, g.problem.weights);
    const Solution back = solutionFromJson(nlohmann::json::parse(j.dump()));
    CHECK(back.costs == s.costs);
    CHECK(back.totalCost == s.totalCost);
    CHECK(back.simSeed == s.simSeed);
    CHECK(back.outcome.humanTasks == s.outcome.humanTasks);
    CHECK(back.outcome.robotTasks == s.outcome.robotTasks);
    CHECK(solutionToJson(back, g.problem.weights).dump() == j.dump());
    CHECK(evaluateCosts(back.layout, back.outcome, g.problem.costParams) == s.costs);
    CHECK(verifySolution(back, g.problem).empty());
  }
}

TEST_CASE("identical config and seed give identical report bytes") {
  ExperimentOptions o;
  o.seed = 1;
  o.iterations = 12;
  const RunReport again = runExperiment(loadConfig(scenario("two_burger_regular.json")), o);
  CHECK(reportToJson(again).dump(2) == reportToJson(smallReport()).dump(2));
  CHECK_FALSE(contains(reportToJson(again).dump(), "wallSeconds"));
}

TEST_CASE("verification catches tampered solutions") {
  const RunGroup& g = smallReport().groups.front();
  REQUIRE_FALSE(g.pareto.empty());
  Solution s = g.pareto.members().front();
  s.totalCost += 0.5;
  CHECK_FALSE(verifySolution(s, g.problem).empty());
  s = g.pareto.members().front();
  s.layout.counters.push_back(s.layout.counters.front());
  CHECK_FALSE(verifySolution(s, g.problem).empty());
}

TEST_CASE("svg rendering maps room coordinates to pixels") {
  Layout l{Room::rectangle(8, 8), {southCounter("bun", CounterKind::Bun, 2.0)}};
  SvgOptions o;
  o.pixelsPerMeter = 50;
  o.margin = 10;
  const std::string svg = renderSvg(l, nullptr, o);
  CHECK(contains(svg, "viewBox=\"0 0 420.00 420.00\""));
  CHECK(contains(svg, "<rect x=\"85.00\" y=\"380.00\" width=\"50.00\" height=\"30.00\""));
  CHECK(contains(svg, "<circle cx=\"110.00\" cy=\"380.00\""));
  CHECK(contains(svg, "10.00,410.00 410.00,410.00 410.00,10.00 10.00,10.00"));
  CHECK(contains(svg, "</svg>"));
}

}
