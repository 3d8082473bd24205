#include "kitchen/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace kitchen {

namespace {

constexpr std::uint64_t kAnnealStream = 16;
constexpr std::uint64_t kSimSeedStream = 17;
constexpr std::uint64_t kLayoutStream = 18;
constexpr int kMoveRetries = 20;
constexpr int kPlacementDraws = 400;
constexpr int kLayoutRestarts = 50;

}  // namespace

const char* toString(AnnealMode m) { return m == AnnealMode::Together ? "together" : "separate"; }

AnnealMode annealModeFromString(const std::string& s) {
  if (s == "together") return AnnealMode::Together;
  if (s == "separate") return AnnealMode::Separate;
  throw std::invalid_argument("unknown anneal mode '" + s + "'");
}

void AnnealConfig::validate() const {
  if (!(t0 > 0.0)) throw std::invalid_argument("t0 must be positive");
  if (!(cooling > 0.0 && cooling <= 1.0)) throw std::invalid_argument("cooling must be in (0, 1]");
  if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  if (stageLength < 1) throw std::invalid_argument("stageLength must be at least 1");
  if (!(stepScale > 0.0)) throw std::invalid_argument("stepScale must be positive");
}

double objective(double totalCost, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  return std::exp(-totalCost / t);
}

bool accept(double fOld, double fNew, std::mt19937_64& rng) {
  if (!(fOld > 0.0)) throw std::invalid_argument("accept needs fOld > 0");
  const double ratio = fNew / fOld;
  if (ratio >= 1.0) return true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < ratio;
}

bool acceptDelta(double delta, double t, std::mt19937_64& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (delta <= 0.0) return true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < std::exp(-delta / t);
}

bool layoutAdmissible(const Layout& layout, const Problem& problem) {
  if (!validateLayout(layout).empty()) return false;
  const double r = problem.sim.params.agentRadius;
  for (Point2 spawn : {problem.sim.humanSpawn, problem.sim.robotSpawn}) {
    if (!pointClear(layout, spawn, r)) return false;
    for (const Counter& c : layout.counters) {
      if (pointBoxDistance(spawn, c.footprint()) < problem.spawnKeepOut) return false;
    }
  }
  for (const Counter& c : layout.counters) {
    try {
      serviceConfiguration(layout, c, r, problem.sim.params.standoff);
    } catch (const UnreachableCounter&) {
      return false;
    }
  }
  return true;
}

Layout initialLayout(const Problem& problem, std::mt19937_64& rng) {
  const Room& room = problem.room;
  std::vector<double> lengths;
  for (std::size_t i = 0; i < room.edgeCount(); ++i) {
    const Segment e = room.edge(i);
    lengths.push_back(distance(e.a, e.b));
  }
  std::discrete_distribution<std::size_t> pickEdge(lengths.begin(), lengths.end());
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (int restart = 0; restart < kLayoutRestarts; ++restart) {
    Layout layout{room, {}};
    bool ok = true;
    for (const Counter& proto : problem.inventory) {
      bool placed = false;
      for (int draw = 0; draw < kPlacementDraws && !placed; ++draw) {
        const std::size_t i = pickEdge(rng);
        const Segment e = room.edge(i);
        const double len = lengths[i];
        if (len < proto.width) continue;
        const Point2 along = (e.b - e.a) * (1.0 / len);
        const Point2 inward{-along.y, along.x};
        const double s = proto.width / 2.0 + u01(rng) * (len - proto.width);
        Counter c = proto;
        c.orientation = snapToQuarterTurn(inward);
        c.position = e.a + along * s + direction(c.orientation) * (c.depth / 2.0 + c.targetWallDistance);
        layout.counters.push_back(c);
        if (layoutAdmissible(layout, problem)) {
          placed = true;
        } else {
          layout.counters.pop_back();
        }
      }
      if (!placed) {
        ok = false;
        break;
      }
    }
    if (ok) return layout;
  }
  throw std::runtime_error("could not place the counter inventory along the walls");
}

Layout proposeLayoutMove(const Layout& layout, const Problem& problem, std::mt19937_64& rng,
                         double t, double stepScale, MoveStats* stats) {
  MoveStats local;
  MoveStats& st = stats ? *stats : local;
  st = {};
  const std::size_t n = layout.counters.size();
  if (n == 0) {
    st.skipped = true;
    return layout;
  }
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::normal_distribution<double> step(0.0, stepScale * t);
  std::uniform_int_distribution<int> quarter(0, 3);

  for (int attempt = 0; attempt < kMoveRetries; ++attempt) {
    ++st.attempts;
    Layout next = layout;
    const bool swap = n >= 2 && coin(rng);
    if (swap) {
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i) j = pick(rng);
      std::swap(next.counters[i].position, next.counters[j].position);
      std::swap(next.counters[i].orientation, next.counters[j].orientation);
    } else {
      Counter& c = next.counters[pick(rng)];
      const double dx = step(rng);
      const double dy = step(rng);
      c.position = c.position + Point2{dx, dy};
      c.orientation = static_cast<QuarterTurn>(quarter(rng));
    }
    if (layoutAdmissible(next, problem)) {
      st.swapped = swap;
      return next;
    }
  }
  st.skipped = true;
  return layout;
}

SimOutcome proposePathMove(const Layout& layout, const Problem& problem, std::uint64_t simSeed) {
  if (!validateLayout(layout).empty()) {
    throw std::invalid_argument("path move needs a valid layout");
  }
  return simulate(layout, problem.pool(), simSeed, problem.sim);
}

Solution makeSolution(const Layout& layout, SimOutcome outcome, const Problem& problem,
                      std::uint64_t simSeed) {
  Solution s;
  s.layout = layout;
  s.costs = evaluateCosts(layout, outcome, problem.costParams);
  s.totalCost = totalCost(s.costs, problem.weights);
  s.outcome = std::move(outcome);
  s.simSeed = simSeed;
  return s;
}

Solution evaluate(const Layout& layout, const Problem& problem, std::uint64_t simSeed) {
  return makeSolution(layout, proposePathMove(layout, problem, simSeed), problem, simSeed);
}

bool ParetoSet::insert(const Solution& s) {
  for (const Solution& m : members_) {
    if (dominates(m, s)) return false;
  }
  std::erase_if(members_, [&](const Solution& m) { return dominates(s, m); });
  members_.push_back(s);
  if (members_.size() <= capacity_) return true;

  // Largest weighted path cost leaves; on ties the most recent entry.
  std::size_t worst = 0;
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (pathCost(members_[i].costs, weights_) >= pathCost(members_[worst].costs, weights_)) worst = i;
  }
  const bool evictedSelf = worst + 1 == members_.size();
  members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(worst));
  return !evictedSelf;
}

ParetoSet paretoInsert(ParetoSet set, const Solution& s) {
  set.insert(s);
  return set;
}

std::uint64_t simulationSeed(std::uint64_t runSeed, std::uint64_t k) {
  return rngStream(runSeed, kSimSeedStream, k)();
}

namespace {

class Annealer {
 public:
  Annealer(const AnnealConfig& config, const Problem& problem)
      : config_(config), problem_(problem), rng_(rngStream(config.seed, kAnnealStream)) {
    result_.pareto = ParetoSet(problem.weights);
  }

  AnnealResult run() {
    auto layoutRng = rngStream(config_.seed, kLayoutStream);
    const Layout start = initialLayout(problem_, layoutRng);
    Solution cur = evaluateNext(start);
    result_.initial = cur;
    result_.best = cur;
    offer(cur);

    double t = config_.t0;
    if (config_.mode == AnnealMode::Together) {
      for (int it = 0; it < config_.iterations; ++it) {
        const bool layoutStage = (it / config_.stageLength) % 2 == 0;
        Solution cand = layoutStage
                            ? evaluateNext(proposeLayoutMove(cur.layout, problem_, rng_, t,
                                                             config_.stepScale))
                            : evaluateNext(cur.layout);
        step(cur, std::move(cand), t);
        t *= config_.cooling;
      }
    } else {
      // Layout alone first, then paths on the frozen layout.
      Layout layout = cur.layout;
      double lc = layoutOnly(layout);
      int it = 0;
      const int half = config_.iterations / 2;
      while (it < half && lc >= config_.layoutThreshold) {
        Layout next = proposeLayoutMove(layout, problem_, rng_, t, config_.stepScale);
        const double nc = layoutOnly(next);
        if (acceptDelta(nc - lc, t, rng_)) {
          layout = std::move(next);
          lc = nc;
        }
        t *= config_.cooling;
        ++it;
      }
      result_.layoutPhaseIterations = it;
      if (it > 0) {
        cur = evaluateNext(layout);
        offer(cur);
        if (cur.totalCost < result_.best.totalCost) result_.best = cur;
      }
      for (; it < config_.iterations; ++it) {
        step(cur, evaluateNext(cur.layout), t);
        t *= config_.cooling;
      }
    }
    if (result_.pareto.empty()) result_.diagnostic = "no successful simulation in the run";
    return std::move(result_);
  }

 private:
  double layoutOnly(const Layout& layout) const {
    CostVector c;
    c.layoutDistance = layoutDistanceCost(layout);
    c.layoutRotation = layoutRotationCost(layout);
    return layoutCost(c, problem_.weights);
  }

  Solution evaluateNext(const Layout& layout) {
    const std::uint64_t seed = simulationSeed(config_.seed, counter_++);
    ++result_.evaluations;
    Solution s = evaluate(layout, problem_, seed);
    if (!s.outcome.success) ++result_.failedSimulations;
    return s;
  }

  void step(Solution& cur, Solution cand, double t) {
    if (acceptDelta(cand.totalCost - cur.totalCost, t, rng_)) {
      cur = std::move(cand);
      ++result_.accepted;
      offer(cur);
      if (cur.totalCost < result_.best.totalCost) result_.best = cur;
    }
    result_.trace.push_back(cur.totalCost);
  }

  void offer(const Solution& s) {
    if (s.outcome.success) result_.pareto.insert(s);
  }

  const AnnealConfig& config_;
  const Problem& problem_;
  std::mt19937_64 rng_;
  std::uint64_t counter_ = 0;
  AnnealResult result_;
};

}  // namespace

AnnealResult anneal(const AnnealConfig& config, const Problem& problem) {
  config.validate();
  Annealer a(config, problem);
  return a.run();
}

}  // namespace kitchen
