#include "kitchen/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace kitchen {

using nlohmann::json;

namespace {

// Reads optional keys of one JSON object and reports errors by field path.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + msg);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) const {
    if (!j_.contains(key)) fail("missing required key '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback, bool required = false) const {
    if (!j_.contains(key)) {
      if (required) fail("missing required key '" + key + "'");
      return fallback;
    }
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key) + ": expected a finite number");
    return d;
  }

  double positive(const std::string& key, double fallback, bool required = false) const {
    const double d = number(key, fallback, required);
    if (!(d > 0.0)) throw ConfigError(field(key) + ": must be positive");
    return d;
  }

  double nonNegative(const std::string& key, double fallback) const {
    const double d = number(key, fallback);
    if (d < 0.0) throw ConfigError(field(key) + ": must be non-negative");
    return d;
  }

  int integer(const std::string& key, int fallback) const {
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback, bool required = false) const {
    if (!j_.contains(key)) {
      if (required) fail("missing required key '" + key + "'");
      return fallback;
    }
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  Point2 point(const std::string& key, Point2 fallback) const {
    if (!j_.contains(key)) return fallback;
    return pointAt(j_.at(key), field(key));
  }

  static Point2 pointAt(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(where + ": expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  const json& j_;
  std::string path_;
};

std::size_t lineOf(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

Room parseRoom(const json& j, const std::string& where, bool& rectangular, double& width,
               double& height) {
  Reader r(j, where);
  const std::string type = r.string("type", "rectangle");
  rectangular = false;
  if (type == "rectangle") {
    width = r.positive("width", 0.0, true);
    height = r.positive("height", 0.0, true);
    rectangular = true;
    return Room::rectangle(width, height);
  }
  if (type == "lshape") {
    width = r.positive("width", 0.0, true);
    height = r.positive("height", 0.0, true);
    const double cw = r.positive("cutWidth", width / 2.0);
    const double ch = r.positive("cutHeight", height / 2.0);
    if (cw >= width || ch >= height) r.fail("the cut must be smaller than the room");
    return Room::lShape(width, height, cw, ch);
  }
  if (type == "polygon") {
    const json& vs = r.at("vertices");
    if (!vs.is_array() || vs.size() < 3) throw ConfigError(r.field("vertices") + ": expected at least 3 points");
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      pts.push_back(Reader::pointAt(vs[i], r.field("vertices") + "[" + std::to_string(i) + "]"));
    }
    Room room(pts);
    const Box b = room.bounds();
    width = b.max.x - b.min.x;
    height = b.max.y - b.min.y;
    return room;
  }
  throw ConfigError(r.field("type") + ": unknown room type '" + type + "'");
}

std::set<CounterKind> requiredKinds(const Recipe& recipe) {
  std::set<CounterKind> kinds{recipe.submission};
  for (Component c : recipe.components) {
    kinds.insert(counterFor(c));
    if (c == Component::Meat) kinds.insert(CounterKind::Stove);
    if (c != Component::Meat && c != Component::Bun) kinds.insert(CounterKind::CuttingBoard);
  }
  return kinds;
}

}  // namespace

Segment defaultInteriorWall(double width, double height) {
  return {{width / 4.0, height / 2.0}, {3.0 * width / 4.0, height / 2.0}};
}

ProblemConfig parseConfig(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": parse error at line " + std::to_string(lineOf(text, e.byte)) + ": " +
                      e.what());
  }
  try {
    Reader top(root, "");
    ProblemConfig cfg;
    cfg.name = top.string("name", "unnamed");
    Problem& p = cfg.problem;

    bool rectangular = false;
    double width = 0.0;
    double height = 0.0;
    Room room = parseRoom(top.at("room"), "room", rectangular, width, height);
    std::vector<Segment> walls;
    if (top.has("interiorWalls")) {
      const json& w = root.at("interiorWalls");
      if (w.is_string() && w.get<std::string>() == "default") {
        if (!rectangular) throw ConfigError("interiorWalls: 'default' needs a rectangular room");
        walls.push_back(defaultInteriorWall(width, height));
      } else if (w.is_array()) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          const std::string where = "interiorWalls[" + std::to_string(i) + "]";
          if (!w[i].is_array() || w[i].size() != 2) throw ConfigError(where + ": expected [[x, y], [x, y]]");
          walls.push_back({Reader::pointAt(w[i][0], where + "[0]"), Reader::pointAt(w[i][1], where + "[1]")});
        }
      } else {
        throw ConfigError("interiorWalls: expected \"default\" or a list of segments");
      }
    }
    try {
      p.room = room.withInteriorWalls(walls, top.boolean("interiorWallsBlockMotion", false));
    } catch (const GeometryError& e) {
      throw ConfigError(std::string("interiorWalls: ") + e.what());
    }

    const json& counters = top.at("counters");
    if (!counters.is_array()) throw ConfigError("counters: expected a list");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < counters.size(); ++i) {
      Reader c(counters[i], "counters[" + std::to_string(i) + "]");
      Counter k;
      k.id = c.string("id", "", true);
      if (!ids.insert(k.id).second) c.fail("duplicate counter id '" + k.id + "'");
      try {
        k.kind = counterKindFromString(c.string("kind", "", true));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(c.field("kind") + ": " + e.what());
      }
      k.width = c.positive("width", k.width);
      k.depth = c.positive("depth", k.depth);
      k.targetWallDistance = c.nonNegative("targetWallDistance", 0.0);
      p.inventory.push_back(k);
    }

    const json& recipes = top.at("recipes");
    if (!recipes.is_array()) throw ConfigError("recipes: expected a list");
    for (std::size_t i = 0; i < recipes.size(); ++i) {
      Reader rr(recipes[i], "recipes[" + std::to_string(i) + "]");
      Recipe rec;
      rec.dishId = rr.string("dish", "", true);
      const json& comps = rr.at("components");
      if (!comps.is_array()) throw ConfigError(rr.field("components") + ": expected a list");
      for (const json& c : comps) {
        if (!c.is_string()) throw ConfigError(rr.field("components") + ": expected strings");
        try {
          rec.components.push_back(componentFromString(c.get<std::string>()));
        } catch (const InvalidRecipe& e) {
          throw ConfigError(rr.field("components") + ": " + e.what());
        }
      }
      try {
        rec.submission = counterKindFromString(rr.string("submission", "Plate"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(rr.field("submission") + ": " + e.what());
      }
      for (CounterKind k : requiredKinds(rec)) {
        const bool present = std::any_of(p.inventory.begin(), p.inventory.end(),
                                         [&](const Counter& c) { return c.kind == k; });
        if (!present) {
          throw ConfigError(rr.field("components") + ": recipe '" + rec.dishId + "' needs a " +
                            toString(k) + " counter that the inventory lacks");
        }
      }
      p.recipes.push_back(rec);
    }
    try {
      expandRecipes(p.recipes);
    } catch (const InvalidRecipe& e) {
      throw ConfigError(std::string("recipes: ") + e.what());
    }

    if (top.has("dwell")) {
      Reader d(root.at("dwell"), "dwell");
      p.dwell.pickup = d.nonNegative("pickup", p.dwell.pickup);
      p.dwell.place = d.nonNegative("place", p.dwell.place);
      p.dwell.cook = d.nonNegative("cook", p.dwell.cook);
      p.dwell.chop = d.nonNegative("chop", p.dwell.chop);
    }

    PlannerParams& pp = p.sim.params;
    const Box b = p.room.bounds();
    p.sim.humanSpawn = {b.min.x + width * 0.425, b.min.y + 0.8};
    p.sim.robotSpawn = {b.min.x + width * 0.575, b.min.y + 0.8};
    if (top.has("agents")) {
      Reader a(root.at("agents"), "agents");
      pp.agentRadius = a.positive("radius", pp.agentRadius);
      pp.speed = a.positive("speed", pp.speed);
      p.sim.humanSpawn = a.point("humanSpawn", p.sim.humanSpawn);
      p.sim.robotSpawn = a.point("robotSpawn", p.sim.robotSpawn);
    }
    pp.stepLength = pp.agentRadius;
    pp.tolerance = pp.stepLength / pp.speed;
    if (top.has("planner")) {
      Reader pl(root.at("planner"), "planner");
      pp.stepLength = pl.positive("stepLength", pp.stepLength);
      pp.tolerance = pl.nonNegative("tolerance", pp.stepLength / pp.speed);
      pp.standoff = pl.nonNegative("standoff", pp.standoff);
      pp.iterationBudget = pl.integer("iterationBudget", pp.iterationBudget);
      pp.goalBias = pl.number("goalBias", pp.goalBias);
      pp.randomExtensionSteps = pl.integer("randomExtensionSteps", pp.randomExtensionSteps);
      pp.maxReplans = pl.integer("maxReplans", pp.maxReplans);
      pp.dynamicMargin = pl.nonNegative("dynamicMargin", pp.dynamicMargin);
      if (pp.goalBias < 0.0 || pp.goalBias > 1.0) pl.fail("goalBias must lie in [0, 1]");
      if (pp.iterationBudget < 1) pl.fail("iterationBudget must be at least 1");
      if (pp.maxReplans < 0) pl.fail("maxReplans must be non-negative");
    }
    p.costParams.speed = pp.speed;
    p.costParams.dSafe = 4.0 * pp.agentRadius;
    if (top.has("cost")) {
      Reader c(root.at("cost"), "cost");
      p.costParams.lengthFactor = c.positive("lengthFactor", p.costParams.lengthFactor);
      p.costParams.timeFactor = c.positive("timeFactor", p.costParams.timeFactor);
      p.costParams.dSafe = c.positive("dSafe", p.costParams.dSafe);
    }
    if (top.has("weights")) {
      Reader w(root.at("weights"), "weights");
      p.weights.alpha = w.nonNegative("alpha", p.weights.alpha);
      p.weights.distance = w.nonNegative("distance", p.weights.distance);
      p.weights.rotation = w.nonNegative("rotation", p.weights.rotation);
      p.weights.length = w.nonNegative("length", p.weights.length);
      p.weights.time = w.nonNegative("time", p.weights.time);
      p.weights.narrowness = w.nonNegative("narrowness", p.weights.narrowness);
    }
    p.spawnKeepOut = top.nonNegative("spawnKeepOut", p.spawnKeepOut);
    if (top.has("anneal")) {
      Reader a(root.at("anneal"), "anneal");
      AnnealConfig& ac = cfg.anneal;
      ac.t0 = a.number("t0", ac.t0);
      ac.cooling = a.number("cooling", ac.cooling);
      ac.iterations = a.integer("iterations", ac.iterations);
      ac.stageLength = a.integer("stageLength", ac.stageLength);
      ac.layoutThreshold = a.nonNegative("layoutThreshold", ac.layoutThreshold);
      ac.stepScale = a.number("stepScale", ac.stepScale);
      try {
        ac.mode = annealModeFromString(a.string("mode", toString(ac.mode)));
        ac.validate();
      } catch (const std::invalid_argument& e) {
        a.fail(e.what());
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  } catch (const GeometryError& e) {
    throw ConfigError(source + ": room: " + e.what());
  }
}

ProblemConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parseConfig(buf.str(), path.string());
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw ConfigError(path.string() + ": " + msg);
  }
}

const char* toString(RoomVariant v) {
  switch (v) {
    case RoomVariant::Regular: return "regular";
    case RoomVariant::Small: return "small";
    case RoomVariant::LShape: return "lshape";
  }
  return "?";
}

RoomVariant roomVariantFromString(const std::string& s) {
  if (s == "regular") return RoomVariant::Regular;
  if (s == "small") return RoomVariant::Small;
  if (s == "lshape") return RoomVariant::LShape;
  throw std::invalid_argument("unknown room variant '" + s + "'");
}

Problem withRoomVariant(const Problem& problem, RoomVariant variant) {
  Problem p = problem;
  if (variant == RoomVariant::Small) {
    constexpr double k = 0.8;
    p.room = problem.room.scaled(k);
    p.sim.humanSpawn = problem.sim.humanSpawn * k;
    p.sim.robotSpawn = problem.sim.robotSpawn * k;
  } else if (variant == RoomVariant::LShape) {
    const Box b = problem.room.bounds();
    const double w = b.max.x - b.min.x;
    const double h = b.max.y - b.min.y;
    const Room shape = Room::lShape(w, h, w / 2.0, h / 2.0);
    std::vector<Point2> pts;
    for (Point2 q : shape.boundary()) pts.push_back(q + b.min);
    p.room = Room(pts);
  }
  return p;
}

// ---------------------------------------------------------------------------

json toJson(const Counter& c) {
  return {{"id", c.id},
          {"kind", toString(c.kind)},
          {"position", {c.position.x, c.position.y}},
          {"orientation", toString(c.orientation)},
          {"width", c.width},
          {"depth", c.depth},
          {"targetWallDistance", c.targetWallDistance}};
}

json toJson(const Layout& layout) {
  json boundary = json::array();
  for (Point2 q : layout.room.boundary()) boundary.push_back({q.x, q.y});
  json walls = json::array();
  for (const Segment& s : layout.room.interiorWalls()) walls.push_back({{s.a.x, s.a.y}, {s.b.x, s.b.y}});
  json counters = json::array();
  for (const Counter& c : layout.counters) counters.push_back(toJson(c));
  return {{"boundary", boundary},
          {"interiorWalls", walls},
          {"interiorWallsBlockMotion", layout.room.interiorWallsBlockMotion()},
          {"counters", counters}};
}

json toJson(const TimedPath& path) {
  json nodes = json::array();
  for (const TimedNode& n : path.nodes) nodes.push_back({n.q.x, n.q.y, n.t});
  return nodes;
}

json toJson(const CostVector& c) {
  return {{"layoutDistance", c.layoutDistance}, {"layoutRotation", c.layoutRotation},
          {"pathLength", c.pathLength},         {"pathTime", c.pathTime},
          {"pathNarrowness", c.pathNarrowness}, {"humanLength", c.humanLength},
          {"robotLength", c.robotLength}};
}

json solutionToJson(const Solution& s, const Weights& weights) {
  json paths = json::object();
  for (Agent a : {Agent::Human, Agent::Robot}) {
    json segs = json::array();
    for (const PathSegment& seg : s.outcome.segments(a)) {
      segs.push_back({{"label", seg.label},
                      {"kind", seg.kind == SegmentKind::Task ? "task" : "retreat"},
                      {"ordinal", seg.ordinal},
                      {"nodes", toJson(seg.path)}});
    }
    paths[toString(a)] = segs;
  }
  json finish = json::object();
  for (const auto& [dish, t] : s.outcome.finishTimes) finish[dish] = t;
  return {{"layout", toJson(s.layout)},
          {"success", s.outcome.success},
          {"assignment", {{"human", s.outcome.humanTasks}, {"robot", s.outcome.robotTasks}}},
          {"paths", paths},
          {"finishTimes", finish},
          {"replanCount", s.outcome.replanCount},
          {"simSeed", s.simSeed},
          {"costs", toJson(s.costs)},
          {"layoutCost", layoutCost(s.costs, weights)},
          {"pathCost", pathCost(s.costs, weights)},
          {"totalCost", s.totalCost}};
}

Counter counterFromJson(const json& j) {
  Counter c;
  c.id = j.at("id").get<std::string>();
  c.kind = counterKindFromString(j.at("kind").get<std::string>());
  c.position = {j.at("position").at(0).get<double>(), j.at("position").at(1).get<double>()};
  c.orientation = quarterTurnFromString(j.at("orientation").get<std::string>());
  c.width = j.at("width").get<double>();
  c.depth = j.at("depth").get<double>();
  c.targetWallDistance = j.at("targetWallDistance").get<double>();
  return c;
}

Layout layoutFromJson(const json& j) {
  std::vector<Point2> boundary;
  for (const json& q : j.at("boundary")) boundary.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
  std::vector<Segment> walls;
  for (const json& w : j.at("interiorWalls")) {
    walls.push_back({{w.at(0).at(0).get<double>(), w.at(0).at(1).get<double>()},
                     {w.at(1).at(0).get<double>(), w.at(1).at(1).get<double>()}});
  }
  Layout layout{Room(boundary, walls, j.at("interiorWallsBlockMotion").get<bool>()), {}};
  for (const json& c : j.at("counters")) layout.counters.push_back(counterFromJson(c));
  return layout;
}

TimedPath timedPathFromJson(const json& j, Agent agent) {
  TimedPath p{agent, {}};
  for (const json& n : j) p.nodes.push_back({{n.at(0).get<double>(), n.at(1).get<double>()}, n.at(2).get<double>()});
  return p;
}

CostVector costVectorFromJson(const json& j) {
  CostVector c;
  c.layoutDistance = j.at("layoutDistance").get<double>();
  c.layoutRotation = j.at("layoutRotation").get<double>();
  c.pathLength = j.at("pathLength").get<double>();
  c.pathTime = j.at("pathTime").get<double>();
  c.pathNarrowness = j.at("pathNarrowness").get<double>();
  c.humanLength = j.at("humanLength").get<double>();
  c.robotLength = j.at("robotLength").get<double>();
  return c;
}

Solution solutionFromJson(const json& j) {
  Solution s;
  s.layout = layoutFromJson(j.at("layout"));
  s.outcome.success = j.at("success").get<bool>();
  for (Agent a : {Agent::Human, Agent::Robot}) {
    auto& segs = a == Agent::Human ? s.outcome.human : s.outcome.robot;
    for (const json& seg : j.at("paths").at(toString(a))) {
      const std::string kind = seg.at("kind").get<std::string>();
      if (kind != "task" && kind != "retreat") throw std::invalid_argument("unknown segment kind '" + kind + "'");
      segs.push_back({seg.at("label").get<std::string>(),
                      kind == "task" ? SegmentKind::Task : SegmentKind::Retreat,
                      timedPathFromJson(seg.at("nodes"), a),
                      seg.value("ordinal", std::uint64_t{0})});
    }
  }
  s.outcome.humanTasks = j.at("assignment").at("human").get<std::vector<std::string>>();
  s.outcome.robotTasks = j.at("assignment").at("robot").get<std::vector<std::string>>();
  for (const auto& [dish, t] : j.at("finishTimes").items()) s.outcome.finishTimes[dish] = t.get<double>();
  s.outcome.replanCount = j.at("replanCount").get<int>();
  s.simSeed = j.at("simSeed").get<std::uint64_t>();
  s.costs = costVectorFromJson(j.at("costs"));
  s.totalCost = j.at("totalCost").get<double>();
  return s;
}

// ---------------------------------------------------------------------------

std::vector<std::string> verifySolution(const Solution& s, const Problem& problem) {
  std::vector<std::string> issues;
  for (const Violation& v : validateLayout(s.layout)) issues.push_back("layout: " + v.message);
  const PlannerParams& pp = problem.sim.params;
  const double r = pp.agentRadius;
  for (Agent a : {Agent::Human, Agent::Robot}) {
    for (const PathSegment& seg : s.outcome.segments(a)) {
      const auto& n = seg.path.nodes;
      for (std::size_t i = 0; i < n.size(); ++i) {
        if (!pointClear(s.layout, n[i].q, r)) {
          issues.push_back(std::string(toString(a)) + " " + seg.label + ": node " + std::to_string(i) + " not clear");
        }
        if (i > 0 && !segmentClearSampled(s.layout, n[i - 1].q, n[i].q, r, r / 20.0)) {
          issues.push_back(std::string(toString(a)) + " " + seg.label + ": edge " + std::to_string(i) + " not clear");
        }
        if (i > 0 && n[i].t < n[i - 1].t) {
          issues.push_back(std::string(toString(a)) + " " + seg.label + ": time runs backwards");
        }
      }
    }
  }
  if (s.outcome.success) {
    const TimedPath h = s.outcome.trajectory(Agent::Human);
    const TimedPath rb = s.outcome.trajectory(Agent::Robot);
    if (!h.empty() && !rb.empty()) {
      if (auto t = checkDynamicCollision(h, rb, r, pp.tolerance)) {
        issues.push_back("agents conflict at t = " + std::to_string(*t));
      }
    }
  }
  const CostVector again = evaluateCosts(s.layout, s.outcome, problem.costParams);
  if (!(again == s.costs)) issues.push_back("recomputed cost vector differs");
  if (totalCost(again, problem.weights) != s.totalCost) issues.push_back("recomputed total cost differs");
  return issues;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

const char* counterFill(CounterKind k) {
  switch (k) {
    case CounterKind::Stove: return "#f4b183";
    case CounterKind::CuttingBoard: return "#c9e3b5";
    case CounterKind::Plate:
    case CounterKind::Plain: return "#dddddd";
    default: return "#fde9a9";
  }
}

}  // namespace

std::string renderSvg(const Layout& layout, const SimOutcome* outcome, const SvgOptions& opts) {
  const Box b = layout.room.bounds();
  const double k = opts.pixelsPerMeter;
  const double m = opts.margin;
  const double w = (b.max.x - b.min.x) * k + 2 * m;
  const double h = (b.max.y - b.min.y) * k + 2 * m;
  auto X = [&](double x) { return fmt(m + (x - b.min.x) * k); };
  auto Y = [&](double y) { return fmt(m + (b.max.y - y) * k); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
     << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\"white\"/>\n";
  os << "  <polygon id=\"room\" points=\"";
  for (Point2 q : layout.room.boundary()) os << X(q.x) << "," << Y(q.y) << " ";
  os << "\" fill=\"#fafafa\" stroke=\"black\" stroke-width=\"3\"/>\n";
  for (const Segment& s : layout.room.interiorWalls()) {
    os << "  <line class=\"interior-wall\" x1=\"" << X(s.a.x) << "\" y1=\"" << Y(s.a.y) << "\" x2=\"" << X(s.b.x)
       << "\" y2=\"" << Y(s.b.y) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (const Counter& c : layout.counters) {
    const Box f = c.footprint();
    const Point2 front = c.frontMidpoint();
    os << "  <g class=\"counter\" id=\"counter-" << c.id << "\">\n";
    os << "    <rect x=\"" << X(f.min.x) << "\" y=\"" << Y(f.max.y) << "\" width=\"" << fmt((f.max.x - f.min.x) * k)
       << "\" height=\"" << fmt((f.max.y - f.min.y) * k) << "\" fill=\"" << counterFill(c.kind)
       << "\" stroke=\"black\"/>\n";
    os << "    <circle cx=\"" << X(front.x) << "\" cy=\"" << Y(front.y) << "\" r=\"3\" fill=\"black\"/>\n";
    os << "    <text x=\"" << X(c.position.x) << "\" y=\"" << Y(c.position.y)
       << "\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << toString(c.kind)
       << "</text>\n";
    os << "  </g>\n";
  }
  if (outcome != nullptr) {
    for (Agent a : {Agent::Human, Agent::Robot}) {
      const char* color = a == Agent::Robot ? "red" : "purple";
      for (const PathSegment& seg : outcome->segments(a)) {
        if (seg.path.nodes.size() < 2) continue;
        os << "  <polyline class=\"path " << toString(a) << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"2\" stroke-opacity=\"0.8\" points=\"";
        for (const TimedNode& n : seg.path.nodes) os << X(n.q.x) << "," << Y(n.q.y) << " ";
        os << "\"/>\n";
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace kitchen
