#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <random>
#include <string>
#include <vector>

#include "kitchen/io.hpp"

namespace fixtures {

using namespace kitchen;

inline std::string scenario(const std::string& name) {
  return std::string(KITCHEN_SCENARIO_DIR) + "/" + name;
}

inline Counter counter(const std::string& id, CounterKind kind, Point2 pos, QuarterTurn facing,
                       double width = 1.0, double depth = 0.6, double target = 0.0) {
  Counter c;
  c.id = id;
  c.kind = kind;
  c.position = pos;
  c.orientation = facing;
  c.width = width;
  c.depth = depth;
  c.targetWallDistance = target;
  return c;
}

// Counter flush against the south wall of a rectangle at x, facing north.
inline Counter southCounter(const std::string& id, CounterKind kind, double x) {
  return counter(id, kind, {x, 0.3}, QuarterTurn::North);
}

// Two long counters facing each other across a gap centered on y = 3.
inline Layout corridor(double gap) {
  Layout l{Room::rectangle(10, 6), {}};
  l.counters.push_back(counter("a", CounterKind::Plain, {5, 3 - gap / 2 - 0.3}, QuarterTurn::North, 4.0));
  l.counters.push_back(counter("b", CounterKind::Plate, {5, 3 + gap / 2 + 0.3}, QuarterTurn::South, 4.0));
  return l;
}

// Independent reference geometry, written without the library's helpers.
namespace ref {

inline double pointSeg(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double l2 = dx * dx + dy * dy;
  double u = l2 == 0.0 ? 0.0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / l2;
  u = std::max(0.0, std::min(1.0, u));
  return std::hypot(p.x - (a.x + u * dx), p.y - (a.y + u * dy));
}

inline double pointBox(Point2 p, const Box& b) {
  const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
  const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
  return std::hypot(dx, dy);
}

// Ray-casting point-in-polygon.
inline bool inside(const std::vector<Point2>& poly, Point2 p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

inline bool discClear(const Layout& l, Point2 p, double r) {
  const auto& poly = l.room.boundary();
  if (!inside(poly, p)) return false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (pointSeg(p, poly[i], poly[(i + 1) % poly.size()]) < r) return false;
  }
  for (const Counter& c : l.counters) {
    if (pointBox(p, c.footprint()) < r) return false;
  }
  if (l.room.interiorWallsBlockMotion()) {
    for (const Segment& w : l.room.interiorWalls()) {
      if (pointSeg(p, w.a, w.b) < r) return false;
    }
  }
  return true;
}

inline bool segmentClearFine(const Layout& l, Point2 a, Point2 b, double r, double spacing) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    if (!discClear(l, {a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u}, r)) return false;
  }
  return true;
}

// Time-matched separation of two trajectories sampled every dt: for each
// sample time t of `a`, the distance to every position of `b` within
// [t - tol, t + tol]. Parked at the last node after the end.
inline double minSeparation(const TimedPath& a, const TimedPath& b, double tol, double dt = 0.01) {
  auto at = [](const TimedPath& p, double t) {
    const auto& n = p.nodes;
    if (t <= n.front().t) return n.front().q;
    if (t >= n.back().t) return n.back().q;
    const auto it = std::lower_bound(n.begin(), n.end(), t, [](const TimedNode& x, double v) { return x.t < v; });
    const std::size_t i = static_cast<std::size_t>(it - n.begin());
    const double span = n[i].t - n[i - 1].t;
    const double u = span > 0.0 ? (t - n[i - 1].t) / span : 1.0;
    return Point2{n[i - 1].q.x + (n[i].q.x - n[i - 1].q.x) * u, n[i - 1].q.y + (n[i].q.y - n[i - 1].q.y) * u};
  };
  const double start = std::min(a.nodes.front().t, b.nodes.front().t);
  const double end = std::max(a.nodes.back().t, b.nodes.back().t) + tol;
  double best = std::numeric_limits<double>::infinity();
  for (double t = start; t <= end + 1e-12; t += dt) {
    const Point2 p = at(a, t);
    for (double s = t - tol; s <= t + tol + 1e-12; s += dt) {
      const Point2 q = at(b, s);
      best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
    }
  }
  return best;
}

// Brute-force width at each interior node: obstacle edges sampled every mm,
// split by the side of the heading they fall on.
inline double denseWidth(const Layout& l, const TimedPath& p) {
  std::vector<Segment> edges;
  const auto& poly = l.room.boundary();
  for (std::size_t i = 0; i < poly.size(); ++i) edges.push_back({poly[i], poly[(i + 1) % poly.size()]});
  for (const Counter& c : l.counters) {
    const Box b = c.footprint();
    const Point2 q[] = {b.min, {b.max.x, b.min.y}, b.max, {b.min.x, b.max.y}};
    for (int i = 0; i < 4; ++i) edges.push_back({q[i], q[(i + 1) % 4]});
  }
  std::vector<Point2> samples;
  for (const Segment& e : edges) {
    const int n = static_cast<int>(std::ceil(distance(e.a, e.b) / 0.001));
    for (int k = 0; k <= n; ++k) {
      const double u = static_cast<double>(k) / n;
      samples.push_back({e.a.x + (e.b.x - e.a.x) * u, e.a.y + (e.b.y - e.a.y) * u});
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) {
    const Point2 at = p.nodes[i].q;
    const Point2 next = p.nodes[i + 1].q;
    const double hx = next.x - at.x, hy = next.y - at.y;
    double left = std::numeric_limits<double>::infinity(), right = left;
    for (Point2 s : samples) {
      const double side = hx * (s.y - at.y) - hy * (s.x - at.x);
      const double d = std::hypot(s.x - at.x, s.y - at.y);
      if (side > 0) left = std::min(left, d);
      if (side < 0) right = std::min(right, d);
    }
    best = std::min(best, 2 * std::min(left, right));
  }
  return best;
}

inline bool dominates(const CostVector& a, const CostVector& b) {
  const auto x = a.terms(), y = b.terms();
  bool strict = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) return false;
    strict = strict || x[i] < y[i];
  }
  return strict;
}

// Non-dominated filter of the previous archive plus the newcomer, then the
// largest weighted path cost leaves while over capacity (latest on ties).
inline std::vector<CostVector> archive(const std::vector<CostVector>& stream, const Weights& w, std::size_t cap) {
  auto pathCost = [&](const CostVector& c) {
    return w.length * c.pathLength + w.time * c.pathTime + w.narrowness * c.pathNarrowness;
  };
  std::vector<CostVector> set;
  for (const CostVector& s : stream) {
    std::vector<CostVector> cand = set;
    cand.push_back(s);
    std::vector<CostVector> kept;
    for (const CostVector& x : cand) {
      bool dominated = false;
      for (const CostVector& y : cand) dominated = dominated || ref::dominates(y, x);
      if (!dominated) kept.push_back(x);
    }
    while (kept.size() > cap) {
      std::size_t worst = 0;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (pathCost(kept[i]) >= pathCost(kept[worst])) worst = i;
      }
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    set = kept;
  }
  return set;
}

inline std::vector<std::array<double, 5>> sortedTerms(const std::vector<CostVector>& v) {
  std::vector<std::array<double, 5>> out;
  for (const CostVector& c : v) out.push_back(c.terms());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ref

// Re-plans a human segment from nothing but the layout, its sub-task, its
// start node and its random stream.
inline bool replaysAlone(const Layout& layout, const Problem& problem, const PathSegment& seg,
                         std::uint64_t seed) {
  const PlannerParams& p = problem.sim.params;
  std::vector<ServiceStop> stops;
  if (seg.kind == SegmentKind::Task) {
    stops = resolveStops(layout, problem.pool().get(seg.label), p);
  } else {
    stops = {ServiceStop{std::nullopt, problem.sim.humanSpawn, 0.0}};
  }
  auto rng = rngStream(seed, stream::kHuman, seg.ordinal);
  const Tour tour = planStops(layout, Agent::Human, stops, seg.path.nodes.front(), {}, rng, p);
  return tour.path.nodes == seg.path.nodes;
}

// Every sub-task done once by one agent, claims matching the segments, and no
// sub-task started before its prerequisites finished. Empty when all hold.
inline std::string integrityError(const SimOutcome& o, const TaskPool& pool) {
  std::set<std::string> seen;
  for (const auto* list : {&o.humanTasks, &o.robotTasks}) {
    for (const std::string& id : *list) {
      if (!seen.insert(id).second) return "sub-task " + id + " claimed twice";
    }
  }
  if (seen.size() != pool.all().size()) return "claimed " + std::to_string(seen.size()) + " sub-tasks";
  std::map<std::string, double> start, end;
  for (Agent a : {Agent::Human, Agent::Robot}) {
    std::vector<std::string> labels;
    for (const PathSegment& seg : o.segments(a)) {
      if (seg.kind != SegmentKind::Task) continue;
      labels.push_back(seg.label);
      start[seg.label] = seg.path.startTime();
      end[seg.label] = seg.path.endTime();
    }
    if (labels != (a == Agent::Human ? o.humanTasks : o.robotTasks)) return "segments differ from claims";
  }
  for (const SubTask& t : pool.all()) {
    if (!start.count(t.id)) return "sub-task " + t.id + " has no segment";
    for (const std::string& pre : t.prerequisites) {
      if (start.at(t.id) < end.at(pre)) return t.id + " started before " + pre + " finished";
    }
  }
  return "";
}

}  // namespace fixtures
