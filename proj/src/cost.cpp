#include "kitchen/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kitchen {

double layoutDistanceCost(const Layout& layout) {
  double sum = 0.0;
  for (const Counter& c : layout.counters) {
    const Point2 back = c.backMidpoint();
    const WallHit wall = nearestWall(layout, back);
    const double e = distance(back, wall.point) - c.targetWallDistance;
    sum += e * e;
  }
  return sum;
}

double layoutRotationCost(const Layout& layout) {
  double sum = 0.0;
  for (const Counter& c : layout.counters) {
    const WallHit wall = nearestWall(layout, c.position);
    const double d = angularDifference(c.orientation, wall.facing);
    sum += d * d;
  }
  return sum;
}

double lengthNormalizer(const Room& room, const CostParams& params) {
  return room.perimeter() * params.lengthFactor;
}

double timeNormalizer(const Room& room, const CostParams& params) {
  return room.perimeter() * params.timeFactor / params.speed;
}

double pathLength(const TimedPath& path) { return path.length(); }

double pathLengthCost(std::span<const TimedPath> paths, double normalizer) {
  if (normalizer <= 0.0) throw std::invalid_argument("length normalizer must be positive");
  double sum = 0.0;
  for (const TimedPath& p : paths) sum += p.length();
  return std::clamp(sum / normalizer, 0.0, 1.0);
}

double pathTimeCost(const SimOutcome& outcome, double normalizer) {
  if (normalizer <= 0.0) throw std::invalid_argument("time normalizer must be positive");
  if (!outcome.success) return 1.0;
  double latest = 0.0;
  for (const auto& [dish, t] : outcome.finishTimes) latest = std::max(latest, t);
  return std::clamp(latest / normalizer, 0.0, 1.0);
}

double narrownessWidth(const Layout& layout, const TimedPath& path) {
  const auto& n = path.nodes;
  double width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n.size(); ++i) {
    if (n[i].q == n[i - 1].q || n[i].q == n[i + 1].q) continue;
    const Clearance c = clearanceLeftRight(layout, n[i].q, n[i + 1].q - n[i].q);
    width = std::min(width, 2.0 * std::min(c.left, c.right));
  }
  return width;
}

double pathNarrowness(const Layout& layout, const TimedPath& path, double dSafe) {
  if (dSafe <= 0.0) throw std::invalid_argument("dSafe must be positive");
  const double width = narrownessWidth(layout, path);
  if (!std::isfinite(width)) return 0.0;
  return std::max(0.0, (dSafe - width) / dSafe);
}

double aggregateNarrowness(std::span<const double> perPath) {
  double sum = 0.0;
  int count = 0;
  for (double v : perPath) {
    if (v > 0.0) {
      sum += v;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / count;
}

double pathNarrownessCost(const Layout& layout, std::span<const TimedPath> paths, double dSafe) {
  std::vector<double> per;
  per.reserve(paths.size());
  for (const TimedPath& p : paths) per.push_back(pathNarrowness(layout, p, dSafe));
  return aggregateNarrowness(per);
}

std::vector<TimedPath> segmentPaths(const SimOutcome& outcome, Agent agent) {
  std::vector<TimedPath> out;
  for (const PathSegment& s : outcome.segments(agent)) out.push_back(s.path);
  return out;
}

CostVector evaluateCosts(const Layout& layout, const SimOutcome& outcome,
                         const CostParams& params) {
  CostVector c;
  c.layoutDistance = layoutDistanceCost(layout);
  c.layoutRotation = layoutRotationCost(layout);
  if (!outcome.success) {
    c.pathLength = c.pathTime = c.pathNarrowness = 1.0;
    c.humanLength = c.robotLength = 1.0;
    return c;
  }
  const double ln = lengthNormalizer(layout.room, params);
  const std::vector<TimedPath> human = segmentPaths(outcome, Agent::Human);
  const std::vector<TimedPath> robot = segmentPaths(outcome, Agent::Robot);
  c.humanLength = pathLengthCost(human, ln);
  c.robotLength = pathLengthCost(robot, ln);
  c.pathLength = (c.humanLength + c.robotLength) / 2.0;
  c.pathTime = pathTimeCost(outcome, timeNormalizer(layout.room, params));

  std::vector<TimedPath> all = human;
  all.insert(all.end(), robot.begin(), robot.end());
  c.pathNarrowness = pathNarrownessCost(layout, all, params.dSafe);
  return c;
}

double layoutCost(const CostVector& c, const Weights& w) {
  return w.alpha * (c.layoutDistance * w.distance + c.layoutRotation * w.rotation);
}

double pathCost(const CostVector& c, const Weights& w) {
  return c.pathLength * w.length + c.pathTime * w.time + c.pathNarrowness * w.narrowness;
}

double totalCost(const CostVector& c, const Weights& w) { return layoutCost(c, w) + pathCost(c, w); }

bool dominates(const CostVector& a, const CostVector& b) {
  const auto ta = a.terms();
  const auto tb = b.terms();
  bool strict = false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i] > tb[i]) return false;
    if (ta[i] < tb[i]) strict = true;
  }
  return strict;
}

bool dominates(const Solution& a, const Solution& b) { return dominates(a.costs, b.costs); }

}  // namespace kitchen
