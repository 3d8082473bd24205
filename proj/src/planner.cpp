#include "kitchen/planner.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace kitchen {

double TimedPath::length() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) sum += distance(nodes[i - 1].q, nodes[i].q);
  return sum;
}

Point2 TimedPath::positionAt(double t) const {
  if (nodes.empty()) throw std::logic_error("positionAt on an empty path");
  if (t <= nodes.front().t) return nodes.front().q;
  if (t >= nodes.back().t) return nodes.back().q;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                             [](double v, const TimedNode& n) { return v < n.t; });
  const TimedNode& b = *it;
  const TimedNode& a = *(it - 1);
  if (b.t <= a.t) return b.q;
  return a.q + (b.q - a.q) * ((t - a.t) / (b.t - a.t));
}

std::mt19937_64 rngStream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a,
                          std::uint64_t b) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(purpose), lo(a), hi(a), lo(b), hi(b)};
  return std::mt19937_64(seq);
}

GoalBiasedSampler::GoalBiasedSampler(Box bounds, Point2 goal, double bias)
    : goal_(goal), pickGoal_(bias), x_(bounds.min.x, bounds.max.x), y_(bounds.min.y, bounds.max.y) {}

Sample GoalBiasedSampler::draw(std::mt19937_64& rng) {
  if (pickGoal_(rng)) return {goal_, true};
  const double x = x_(rng);
  const double y = y_(rng);
  return {{x, y}, false};
}

// ---------------------------------------------------------------------------

double windowDistance(const TimedPath& path, Point2 q, double lo, double hi) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& n = path.nodes;
  if (n.empty() || hi < lo || hi < n.front().t) return inf;
  lo = std::max(lo, n.front().t);
  if (lo >= n.back().t) return distance(q, n.back().q);

  auto lerp = [&](std::size_t k, double s) {
    const double t0 = n[k].t, t1 = n[k + 1].t;
    if (t1 <= t0) return n[k].q;
    const double u = std::clamp((s - t0) / (t1 - t0), 0.0, 1.0);
    return n[k].q + (n[k + 1].q - n[k].q) * u;
  };

  auto it = std::upper_bound(n.begin(), n.end(), lo,
                             [](double v, const TimedNode& node) { return v < node.t; });
  std::size_t k = static_cast<std::size_t>(it - n.begin());
  k = k == 0 ? 0 : k - 1;
  double best = inf;
  for (; k + 1 < n.size() && n[k].t <= hi; ++k) {
    const Point2 a = lerp(k, std::max(lo, n[k].t));
    const Point2 b = lerp(k, std::min(hi, n[k + 1].t));
    best = std::min(best, pointSegmentDistance(q, {a, b}));
  }
  if (hi >= n.back().t) best = std::min(best, distance(q, n.back().q));
  return best;
}

namespace {

constexpr double kPlanSampleDt = 0.02;
constexpr double kCheckSampleDt = 0.01;
// Arrivals at a goal held by a moving obstacle before the planner gives up
// and lets the caller wait instead.
constexpr int kMaxBlockedArrivals = 25;
// Consecutive iterations without a new tree node before giving up.
constexpr int kMaxStagnant = 400;
constexpr double kWaitProbeDt = 0.25;

// Dynamic clearance against moving obstacles with the planner's margin.
// Past an obstacle's horizon its position is unknown, so a window reaching
// beyond it is charged the distance the obstacle could cover meanwhile.
struct DynamicChecker {
  std::span<const MovingObstacle> obstacles;
  double minSep;
  double tol;
  double speed;

  // nullopt when the window lies entirely past the horizon.
  std::optional<double> clearance(const MovingObstacle& o, Point2 q, double lo, double hi) const {
    if (lo > o.until) return std::nullopt;
    const double reach = speed * std::clamp(hi - o.until, 0.0, tol);
    return windowDistance(o.path, q, lo, std::min(hi, o.until)) - reach;
  }

  bool holdClear(Point2 q, double t0, double t1) const {
    for (const MovingObstacle& o : obstacles) {
      const auto d = clearance(o, q, t0 - tol, t1 + tol);
      if (d && *d < minSep) return false;
    }
    return true;
  }

  bool edgeClear(Point2 a, double ta, Point2 b, double tb) const {
    if (obstacles.empty()) return true;
    const Point2 mid = (a + b) * 0.5;
    const double half = distance(a, b) / 2.0;
    for (const MovingObstacle& o : obstacles) {
      const auto bound = clearance(o, mid, ta - tol, tb + tol);
      if (!bound || *bound - half >= minSep) continue;
      const int n = std::max(1, static_cast<int>(std::ceil((tb - ta) / kPlanSampleDt)));
      for (int i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / n;
        const double s = ta + (tb - ta) * u;
        const auto d = clearance(o, a + (b - a) * u, s - tol, s + tol);
        if (d && *d < minSep) return false;
      }
    }
    return true;
  }
};

DynamicChecker checkerFor(std::span<const MovingObstacle> obstacles, const PlannerParams& p) {
  return {obstacles, 2.0 * p.agentRadius + p.dynamicMargin, p.tolerance, p.speed};
}

}  // namespace

TimedPath planSingle(const Layout& layout, Agent agent, TimedNode start, Point2 goal,
                     std::span<const MovingObstacle> obstacles, std::mt19937_64& rng,
                     const PlannerParams& params, double goalHold, std::optional<int> budget) {
  const double r = params.agentRadius;
  if (!pointClear(layout, start.q, r)) throw PlanningPrecondition("start configuration is not clear");
  if (!pointClear(layout, goal, r)) throw PlanningPrecondition("goal configuration is not clear");

  const DynamicChecker dyn = checkerFor(obstacles, params);
  if (!dyn.holdClear(start.q, start.t, start.t)) {
    throw PlanningFailure("start conflicts with a moving obstacle");
  }
  const bool startAtGoal = distance(start.q, goal) < 1e-9;
  if (startAtGoal && dyn.holdClear(goal, start.t, start.t + goalHold)) return {agent, {start}};

  struct Node {
    Point2 q;
    double t;
    int parent;
  };
  std::vector<Node> tree{{start.q, start.t, -1}};
  GoalBiasedSampler sampler(layout.room.bounds(), goal, params.goalBias);
  const int iterations = budget.value_or(params.iterationBudget);
  int blockedArrivals = 0;
  int stagnant = 0;

  for (int iter = 0; iter < iterations; ++iter) {
    const Sample sample = sampler.draw(rng);

    int cur = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tree.size(); ++i) {
      const Point2 d = tree[i].q - sample.q;
      const double d2 = d.dot(d);
      if (startAtGoal && sample.isGoal && d2 < 1e-18) continue;
      if (d2 < best) {
        best = d2;
        cur = static_cast<int>(i);
      }
    }

    if (++stagnant > kMaxStagnant) throw PlanningFailure("tree stopped growing");
    if (cur < 0) continue;
    // Goal samples extend until blocked; random samples at most a few steps.
    const int maxSteps = sample.isGoal ? INT_MAX : params.randomExtensionSteps;
    for (int step = 0; step < maxSteps; ++step) {
      const Point2 from = tree[cur].q;
      const double tFrom = tree[cur].t;
      const Point2 d = sample.q - from;
      const double len = d.norm();
      if (len < 1e-9) break;
      const double stepLen = std::min(params.stepLength, len);
      const Point2 next = len - stepLen < 1e-9 ? sample.q : from + d * (stepLen / len);
      const double tNext = tFrom + stepLen / params.speed;

      if (!segmentClear(layout, from, next, r)) break;
      if (!dyn.edgeClear(from, tFrom, next, tNext)) break;
      const bool atGoal = distance(next, goal) < 1e-9;
      if (atGoal && !dyn.holdClear(goal, tNext, tNext + goalHold)) {
        if (++blockedArrivals > kMaxBlockedArrivals) throw PlanningFailure("goal stays occupied");
        break;
      }

      tree.push_back({atGoal ? goal : next, tNext, cur});
      stagnant = 0;
      cur = static_cast<int>(tree.size()) - 1;
      if (atGoal) {
        TimedPath path{agent, {}};
        for (int i = cur; i >= 0; i = tree[i].parent) path.nodes.push_back({tree[i].q, tree[i].t});
        std::reverse(path.nodes.begin(), path.nodes.end());
        return path;
      }
    }
  }
  throw PlanningFailure("iteration budget exhausted");
}

std::vector<ServiceStop> resolveStops(const Layout& layout, const SubTask& subTask,
                                      const PlannerParams& params) {
  std::vector<ServiceStop> stops;
  for (const Visit& v : subTask.visits) {
    const Counter* c = layout.findKind(v.counter);
    if (c == nullptr) {
      throw TourFailure(std::string("layout has no ") + toString(v.counter) + " counter");
    }
    try {
      const Pose pose = serviceConfiguration(layout, *c, params.agentRadius, params.standoff);
      stops.push_back({v.counter, pose.position, v.dwell});
    } catch (const UnreachableCounter& e) {
      throw TourFailure(e.what());
    }
  }
  return stops;
}

namespace {

// Earliest time, not before `from`, at which q can be held for `hold` seconds.
double earliestFree(const DynamicChecker& dyn, Point2 q, double from, double hold) {
  double horizon = from;
  for (const MovingObstacle& o : dyn.obstacles) {
    horizon = std::max(horizon, std::min(o.until, o.path.endTime()) + dyn.tol);
  }
  for (double t = from; t <= horizon + kWaitProbeDt; t += kWaitProbeDt) {
    if (dyn.holdClear(q, t, t + hold)) return t;
  }
  return std::numeric_limits<double>::infinity();
}

// One leg: straight planning, or waiting in place first when the goal is
// still taken by a moving obstacle at the earliest possible arrival.
TimedPath planLeg(const Layout& layout, Agent agent, TimedNode cur, const ServiceStop& stop,
                  std::span<const MovingObstacle> obstacles, std::mt19937_64& rng,
                  const PlannerParams& params, const DynamicChecker& dyn) {
  if (obstacles.empty()) {
    return planSingle(layout, agent, cur, stop.point, obstacles, rng, params, stop.dwell);
  }
  const double arrival = cur.t + distance(cur.q, stop.point) / params.speed;
  const double free = earliestFree(dyn, stop.point, arrival, stop.dwell);

  std::vector<double> waits;
  if (free > arrival && std::isfinite(free)) {
    const double w = free - arrival;
    waits = {w, w + 1.0, w + 2.0, w + 4.0};
  } else {
    try {
      return planSingle(layout, agent, cur, stop.point, obstacles, rng, params, stop.dwell);
    } catch (const PlanningFailure&) {
    }
  }
  const double floor = waits.empty() ? 0.0 : waits.back();
  for (double w : params.waitSchedule) {
    if (w > floor) waits.push_back(w);
  }
  for (double wait : waits) {
    if (!dyn.holdClear(cur.q, cur.t, cur.t + wait)) break;
    try {
      return planSingle(layout, agent, {cur.q, cur.t + wait}, stop.point, obstacles, rng, params,
                        stop.dwell, params.retryBudget);
    } catch (const PlanningFailure&) {
    }
  }
  throw PlanningFailure("no wait at the leg start leads to a plan");
}

}  // namespace

Tour planStops(const Layout& layout, Agent agent, std::span<const ServiceStop> stops,
               TimedNode start, std::span<const MovingObstacle> obstacles, std::mt19937_64& rng,
               const PlannerParams& params) {
  Tour tour;
  tour.path.agent = agent;
  tour.path.nodes.push_back(start);
  const DynamicChecker dyn = checkerFor(obstacles, params);

  for (const ServiceStop& stop : stops) {
    const TimedNode cur = tour.path.nodes.back();
    TimedPath leg;
    try {
      leg = planLeg(layout, agent, cur, stop, obstacles, rng, params, dyn);
    } catch (const PlanningFailure& e) {
      throw TourFailure(std::string("leg planning failed: ") + e.what());
    } catch (const PlanningPrecondition& e) {
      throw TourFailure(std::string("leg precondition failed: ") + e.what());
    }

    for (const TimedNode& n : leg.nodes) {
      if (n == tour.path.nodes.back()) continue;
      tour.path.nodes.push_back(n);
    }
    if (stop.dwell > 0.0) {
      tour.path.nodes.push_back({stop.point, tour.path.nodes.back().t + stop.dwell});
    }
    tour.visitDone.push_back(tour.path.nodes.size() - 1);
  }
  return tour;
}

TimedPath planTour(const Layout& layout, Agent agent, const SubTask& subTask, TimedNode start,
                   std::span<const MovingObstacle> obstacles, std::mt19937_64& rng,
                   const PlannerParams& params) {
  const std::vector<ServiceStop> stops = resolveStops(layout, subTask, params);
  return planStops(layout, agent, stops, start, obstacles, rng, params).path;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<double> firstConflict(const TimedPath& p, const TimedPath& o, double minSep,
                                    double tol, const CollisionQuery& q) {
  const auto& n = p.nodes;
  if (n.empty() || o.nodes.empty()) return std::nullopt;

  auto probe = [&](Point2 pos, double s) {
    if (s < q.from || s > q.until) return false;
    const double hi = std::min(s + tol, q.until);
    return windowDistance(o, pos, s - tol, hi) < minSep;
  };

  // Scans [ta, tb] at the check resolution after a cheap bounding test.
  auto scan = [&](Point2 a, double ta, Point2 b, double tb) -> std::optional<double> {
    if (tb < q.from || ta > q.until) return std::nullopt;
    const double lo = std::max(ta, q.from) - tol;
    const double hi = std::min(tb + tol, q.until);
    const double half = distance(a, b) / 2.0;
    if (windowDistance(o, (a + b) * 0.5, lo, hi) - half >= minSep) return std::nullopt;
    const int steps = std::max(1, static_cast<int>(std::ceil((tb - ta) / kCheckSampleDt)));
    for (int i = 0; i <= steps; ++i) {
      const double u = static_cast<double>(i) / steps;
      const double s = ta + (tb - ta) * u;
      if (probe(a + (b - a) * u, s)) return s;
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    if (auto hit = scan(n[i].q, n[i].t, n[i + 1].q, n[i + 1].t)) return hit;
  }
  // Parked after the last node until the other path has settled as well.
  const double tailEnd = std::max(n.back().t, o.nodes.back().t + tol);
  return scan(n.back().q, n.back().t, n.back().q, tailEnd);
}

}  // namespace

std::optional<double> checkDynamicCollision(const TimedPath& a, const TimedPath& b, double radius,
                                            double tol, CollisionQuery query) {
  const double minSep = 2.0 * radius;
  auto ab = firstConflict(a, b, minSep, tol, query);
  auto ba = firstConflict(b, a, minSep, tol, query);
  if (ab && ba) return std::min(*ab, *ba);
  return ab ? ab : ba;
}

// ---------------------------------------------------------------------------

Belief beliefInit(const TaskPool& pool) {
  Belief b;
  const auto ids = pool.claimable();
  for (const std::string& id : ids) b.probs[id] = 1.0 / static_cast<double>(ids.size());
  return b;
}

Belief beliefUpdate(const Belief& belief, const std::string& completedId) {
  auto it = belief.probs.find(completedId);
  if (it == belief.probs.end()) {
    throw std::invalid_argument("belief has no sub-task '" + completedId + "'");
  }
  Belief out = belief;
  const double mass = it->second;
  out.probs[completedId] = 0.0;
  std::size_t remaining = 0;
  for (const auto& [id, p] : out.probs) {
    if (p > 0.0) ++remaining;
  }
  if (remaining == 0) return {};
  for (auto& [id, p] : out.probs) {
    if (p > 0.0) p += mass / static_cast<double>(remaining);
  }
  return out;
}

TimedPath virtualHumanPath(const Layout& layout, const Belief& belief, const TaskPool& pool,
                           const AgentState& human, std::mt19937_64& rng,
                           const PlannerParams& params) {
  if (belief.probs.empty()) throw std::invalid_argument("virtual path needs a non-empty belief");
  const std::string* best = nullptr;
  double bestP = -1.0;
  for (const auto& [id, p] : belief.probs) {
    if (p > bestP) {
      bestP = p;
      best = &id;
    }
  }
  const TimedNode start{human.pose, human.clock};
  try {
    return planTour(layout, Agent::Human, pool.get(*best), start, {}, rng, params);
  } catch (const TourFailure&) {
    return {Agent::Human, {start}};
  }
}

const char* toString(FailureKind k) {
  switch (k) {
    case FailureKind::PlanningBudget: return "planning-budget";
    case FailureKind::UnavoidableCollision: return "unavoidable-collision";
    case FailureKind::Unreachable: return "unreachable";
    case FailureKind::SpawnBlocked: return "spawn-blocked";
  }
  return "?";
}

TimedPath SimOutcome::trajectory(Agent a) const {
  TimedPath out{a, {}};
  for (const PathSegment& s : segments(a)) {
    for (const TimedNode& n : s.path.nodes) {
      if (!out.nodes.empty() && out.nodes.back() == n) continue;
      out.nodes.push_back(n);
    }
  }
  return out;
}

}  // namespace kitchen
