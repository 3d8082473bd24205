#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "kitchen/geometry.hpp"
#include "kitchen/planner.hpp"

namespace kitchen {

struct Weights {
  double alpha = 1.0;
  double distance = 1.0;
  double rotation = 1.0;
  double length = 1.0;
  double time = 1.0;
  double narrowness = 2.0;
};

struct CostParams {
  // Path length is normalized by perimeter * lengthFactor, time by
  // perimeter * timeFactor / speed.
  double lengthFactor = 1.0;
  double timeFactor = 1.0;
  double speed = 1.0;
  double dSafe = 1.2;
};

struct CostVector {
  double layoutDistance = 0.0;
  double layoutRotation = 0.0;
  double pathLength = 0.0;
  double pathTime = 0.0;
  double pathNarrowness = 0.0;
  // Per-agent length costs, reported alongside the folded pathLength.
  double humanLength = 0.0;
  double robotLength = 0.0;

  std::array<double, 5> terms() const {
    return {layoutDistance, layoutRotation, pathLength, pathTime, pathNarrowness};
  }
  bool operator==(const CostVector&) const = default;
};

double layoutDistanceCost(const Layout& layout);
double layoutRotationCost(const Layout& layout);

double lengthNormalizer(const Room& room, const CostParams& params);
double timeNormalizer(const Room& room, const CostParams& params);

double pathLength(const TimedPath& path);
// Summed length of all paths over the normalizer, clamped to [0, 1].
double pathLengthCost(std::span<const TimedPath> paths, double normalizer);
// Latest dish finish time over the normalizer; 1 for a failed outcome.
double pathTimeCost(const SimOutcome& outcome, double normalizer);

// Smallest 2 * min(left, right) clearance over the interior travel nodes of a
// path. Service stops (first and last node, dwell nodes) are skipped.
// Returns +inf when the path has no such node.
double narrownessWidth(const Layout& layout, const TimedPath& path);
double pathNarrowness(const Layout& layout, const TimedPath& path, double dSafe);
// Mean over the strictly positive entries; 0 when there are none.
double aggregateNarrowness(std::span<const double> perPath);
double pathNarrownessCost(const Layout& layout, std::span<const TimedPath> paths, double dSafe);

std::vector<TimedPath> segmentPaths(const SimOutcome& outcome, Agent agent);

// All five terms. Path terms are 1 when the outcome failed.
CostVector evaluateCosts(const Layout& layout, const SimOutcome& outcome, const CostParams& params);

double layoutCost(const CostVector& c, const Weights& w);
double pathCost(const CostVector& c, const Weights& w);
double totalCost(const CostVector& c, const Weights& w);

bool dominates(const CostVector& a, const CostVector& b);

struct Solution {
  Layout layout;
  SimOutcome outcome;
  CostVector costs;
  double totalCost = 0.0;
  std::uint64_t simSeed = 0;
};

bool dominates(const Solution& a, const Solution& b);

}  // namespace kitchen
