#include <algorithm>
#include <cmath>

#include "kitchen/planner.hpp"

namespace kitchen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxEvents = 400;
constexpr double kMaxClock = 3600.0;
constexpr int kRefugeDraws = 200;

struct Commitment {
  SegmentKind kind = SegmentKind::Task;
  std::string label;
  std::size_t startIndex = 0;
  std::vector<ServiceStop> remaining;
  std::vector<double> doneAt;  // completion time of each remaining stop
  std::uint64_t ordinal = 0;
};

struct Runner {
  AgentState state;
  Point2 home;
  TimedPath traj;
  std::optional<Commitment> active;
  std::uint64_t ordinal = 0;
};

class Failed {
 public:
  SimFailure failure;
};

class Simulation {
 public:
  Simulation(const Layout& layout, const TaskPool& pool, std::uint64_t seed, const SimSetup& setup)
      : layout_(layout), pool_(pool), seed_(seed), setup_(setup), p_(setup_.params),
        tasksRng_(rngStream(seed, stream::kTasks)) {
    human_.state.agent = Agent::Human;
    robot_.state.agent = Agent::Robot;
    human_.traj.agent = Agent::Human;
    robot_.traj.agent = Agent::Robot;
    for (Runner* r : {&human_, &robot_}) {
      r->home = r == &human_ ? setup.humanSpawn : setup.robotSpawn;
      r->state.pose = r->home;
      r->traj.nodes.push_back({r->home, 0.0});
    }
    minSep_ = 2.0 * p_.agentRadius + p_.dynamicMargin;
    verifyRadius_ = p_.agentRadius + p_.dynamicMargin / 2.0;
  }

  SimOutcome run() {
    try {
      checkSpawns();
      resolveAllStops();
      belief_ = beliefInit(pool_);
      loop();
      if (setup_.robotEnabled &&
          checkDynamicCollision(robot_.traj, human_.traj, verifyRadius_, p_.tolerance)) {
        throw Failed{{FailureKind::UnavoidableCollision, "final verification found a conflict"}};
      }
      out_.success = true;
    } catch (const Failed& f) {
      out_.success = false;
      out_.failure = f.failure;
    } catch (const std::logic_error& e) {
      out_.success = false;
      out_.failure = SimFailure{FailureKind::PlanningBudget, e.what()};
    }
    return std::move(out_);
  }

 private:
  void checkSpawns() {
    for (const Runner* r : runners()) {
      if (!pointClear(layout_, r->home, p_.agentRadius)) {
        throw Failed{{FailureKind::SpawnBlocked,
                      std::string(toString(r->state.agent)) + " spawn is not clear"}};
      }
    }
    if (setup_.robotEnabled && distance(human_.home, robot_.home) < minSep_) {
      throw Failed{{FailureKind::SpawnBlocked, "spawn points are too close"}};
    }
  }

  void resolveAllStops() {
    for (const SubTask& t : pool_.all()) {
      try {
        stops_[t.id] = resolveStops(layout_, t, p_);
      } catch (const TourFailure& e) {
        throw Failed{{FailureKind::Unreachable, e.what()}};
      }
    }
  }

  std::vector<Runner*> runners() {
    if (setup_.robotEnabled) return {&human_, &robot_};
    return {&human_};
  }

  void loop() {
    for (int events = 0;; ++events) {
      if (events > kMaxEvents || now_ > kMaxClock) {
        throw Failed{{FailureKind::PlanningBudget, "simulation did not terminate"}};
      }
      for (Runner* r : runners()) {
        if (!r->active && r->state.mode == AgentMode::NeedNewTask) decide(*r);
      }
      resolveRobot();

      Runner* next = nullptr;
      for (Runner* r : runners()) {
        if (r->active && (next == nullptr || r->traj.endTime() < next->traj.endTime())) next = r;
      }
      if (next == nullptr) break;
      now_ = std::max(now_, next->traj.endTime());
      finish(*next);
    }
    if (!pool_.allCompleted()) throw std::logic_error("simulation stalled with open sub-tasks");
    for (Runner* r : runners()) {
      if (r->state.mode != AgentMode::Idle) throw std::logic_error("agent did not reach Idle");
    }
  }

  TimedNode startNode(Runner& r) {
    const TimedNode last = r.traj.nodes.back();
    if (last.t < now_) r.traj.nodes.push_back({last.q, now_});
    return r.traj.nodes.back();
  }

  void decide(Runner& r) {
    std::optional<SubTask> task = nextSubTask(pool_, r.state.agent, tasksRng_);
    if (task) {
      r.state = fsmStep(r.state, AgentEvent::TaskAssigned, &*task);
      (r.state.agent == Agent::Human ? out_.humanTasks : out_.robotTasks).push_back(task->id);
      commit(r, SegmentKind::Task, task->id, stops_.at(task->id), true);
      return;
    }
    if (!pool_.hasUnclaimed()) r.state = fsmStep(r.state, AgentEvent::NoTaskAvailable);
    if (distance(r.traj.nodes.back().q, r.home) > 1e-9) {
      commit(r, SegmentKind::Retreat, "retreat", {ServiceStop{std::nullopt, r.home, 0.0}}, false);
    }
  }

  void commit(Runner& r, SegmentKind kind, const std::string& label,
              const std::vector<ServiceStop>& stops, bool required) {
    const std::uint64_t ordinal = r.ordinal++;
    const TimedNode start = startNode(r);
    const std::size_t startIndex = r.traj.nodes.size() - 1;

    if (r.state.agent == Agent::Human) {
      auto rng = rngStream(seed_, stream::kHuman, ordinal);
      try {
        Tour tour = planStops(layout_, Agent::Human, stops, start, {}, rng, p_);
        adopt(r, kind, label, startIndex, stops, tour, ordinal);
      } catch (const TourFailure& e) {
        if (required) throw Failed{{FailureKind::PlanningBudget, e.what()}};
      }
      return;
    }

    const bool infer = setup_.policy == PlanningPolicy::AlwaysInfer;
    const MovingObstacle obstacle = infer ? predictedHuman(ordinal, 0) : committedHuman();
    for (int attempt = 0; attempt <= p_.maxReplans; ++attempt) {
      std::vector<ServiceStop> plan = stops;
      if (attempt > 0) {
        if (auto refuge = pickRefuge(obstacle, ordinal, attempt)) {
          plan.insert(plan.begin(), ServiceStop{std::nullopt, *refuge, 0.0});
        }
      }
      auto rng = rngStream(seed_, stream::kRobot, ordinal, static_cast<std::uint64_t>(attempt));
      try {
        Tour tour = planStops(layout_, Agent::Robot, plan, start,
                              std::span<const MovingObstacle>(&obstacle, 1), rng, p_);
        adopt(r, kind, label, startIndex, plan, tour, ordinal);
        return;
      } catch (const TourFailure&) {
      }
    }
    if (required) {
      throw Failed{{FailureKind::PlanningBudget, "robot could not plan sub-task " + label}};
    }
  }

  // Replaces everything after the tour's first node with the tour.
  static void adopt(Runner& r, SegmentKind kind, const std::string& label, std::size_t startIndex,
                    const std::vector<ServiceStop>& stops, const Tour& tour,
                    std::uint64_t ordinal) {
    Commitment c{kind, label, startIndex, stops, {}, ordinal};
    r.traj.nodes.resize(startIndex + 1);
    for (std::size_t i = 1; i < tour.path.nodes.size(); ++i) r.traj.nodes.push_back(tour.path.nodes[i]);
    for (std::size_t idx : tour.visitDone) c.doneAt.push_back(tour.path.nodes[idx].t);
    r.active = std::move(c);
  }

  double horizonOf(const Runner& r) const {
    if (r.active && r.active->kind == SegmentKind::Task) return r.traj.endTime();
    return kInf;
  }

  MovingObstacle committedHuman() const { return {human_.traj, horizonOf(human_)}; }

  // Committed human path extended by the predicted next sub-task.
  MovingObstacle predictedHuman(std::uint64_t ordinal, int attempt) const {
    MovingObstacle o{human_.traj, kInf};
    if (!human_.active || human_.active->kind != SegmentKind::Task) return o;
    o.until = human_.traj.endTime();

    Belief b;
    double mass = 0.0;
    for (const auto& [id, pr] : belief_.probs) {
      if (pr > 0.0 && !pool_.isClaimed(id) && !pool_.isCompleted(id)) {
        b.probs[id] = pr;
        mass += pr;
      }
    }
    for (auto& [id, pr] : b.probs) pr /= mass;
    if (b.probs.empty()) b = beliefInit(pool_);
    if (b.probs.empty()) return o;

    AgentState hs = human_.state;
    hs.pose = human_.traj.nodes.back().q;
    hs.clock = human_.traj.endTime();
    auto rng = rngStream(seed_, stream::kVirtual, ordinal, static_cast<std::uint64_t>(attempt));
    const TimedPath v = virtualHumanPath(layout_, b, pool_, hs, rng, p_);
    if (v.nodes.size() < 2) return o;
    for (std::size_t i = 1; i < v.nodes.size(); ++i) o.path.nodes.push_back(v.nodes[i]);
    o.until = o.path.endTime();
    return o;
  }

  std::optional<Point2> pickRefuge(const MovingObstacle& human, std::uint64_t ordinal,
                                   int attempt) {
    if (servicePoints_.empty()) {
      for (const Counter& c : layout_.counters) {
        try {
          servicePoints_.push_back(serviceConfiguration(layout_, c, p_.agentRadius, p_.standoff).position);
        } catch (const UnreachableCounter&) {
        }
      }
    }
    auto rng = rngStream(seed_, stream::kRefuge, ordinal, static_cast<std::uint64_t>(attempt));
    const Box box = layout_.room.bounds();
    std::uniform_real_distribution<double> ux(box.min.x, box.max.x);
    std::uniform_real_distribution<double> uy(box.min.y, box.max.y);
    for (int i = 0; i < kRefugeDraws; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      const Point2 q{x, y};
      if (!pointClear(layout_, q, p_.agentRadius + 0.1)) continue;
      const bool nearService = std::any_of(servicePoints_.begin(), servicePoints_.end(),
                                           [&](Point2 s) { return distance(s, q) < minSep_ + 0.2; });
      if (nearService) continue;
      if (windowDistance(human.path, q, now_, std::min(human.until, now_ + 60.0)) < minSep_ + 0.3) {
        continue;
      }
      return q;
    }
    return std::nullopt;
  }

  std::optional<double> conflict(const TimedPath& robotPath, double robotHorizon) const {
    const double horizon = std::min(horizonOf(human_), robotHorizon);
    return checkDynamicCollision(robotPath, human_.traj, verifyRadius_, p_.tolerance,
                                 {now_, horizon});
  }

  void resolveRobot() {
    if (!setup_.robotEnabled) return;
    if (!conflict(robot_.traj, horizonOf(robot_))) return;

    // Pause at the current time and re-plan the rest of the robot's commitment.
    Runner& r = robot_;
    std::vector<ServiceStop> rest;
    SegmentKind kind = SegmentKind::Retreat;
    std::string label = "retreat";
    std::size_t startIndex = 0;
    TimedNode branch{r.traj.positionAt(now_), now_};

    if (r.active) {
      kind = r.active->kind;
      label = r.active->label;
      startIndex = r.active->startIndex;
      for (std::size_t i = 0; i < r.active->remaining.size(); ++i) {
        if (r.active->doneAt[i] > now_) rest.push_back(r.active->remaining[i]);
      }
    }
    // Prefix up to the pause time.
    std::vector<TimedNode> prefix;
    for (const TimedNode& n : r.traj.nodes) {
      if (n.t > now_) break;
      prefix.push_back(n);
    }
    if (prefix.empty() || !(prefix.back() == branch)) prefix.push_back(branch);
    if (!r.active) startIndex = prefix.size() - 1;

    const std::uint64_t ordinal = r.active ? r.ordinal - 1 : r.ordinal++;
    for (int attempt = 0; attempt < p_.maxReplans; ++attempt) {
      ++out_.replanCount;
      const MovingObstacle human = predictedHuman(ordinal, attempt + 1);
      std::vector<ServiceStop> plan = rest;
      if (attempt > 0 || !r.active) {
        if (auto refuge = pickRefuge(human, ordinal, attempt + 1)) {
          plan.insert(plan.begin(), ServiceStop{std::nullopt, *refuge, 0.0});
        }
      }
      if (plan.empty()) continue;
      auto rng = rngStream(seed_, stream::kRobot, ordinal,
                           static_cast<std::uint64_t>(out_.replanCount) << 8);
      Tour tour;
      try {
        tour = planStops(layout_, Agent::Robot, plan, branch,
                         std::span<const MovingObstacle>(&human, 1), rng, p_);
      } catch (const TourFailure&) {
        continue;
      }
      TimedPath candidate{Agent::Robot, prefix};
      for (std::size_t i = 1; i < tour.path.nodes.size(); ++i) candidate.nodes.push_back(tour.path.nodes[i]);
      const double horizon = kind == SegmentKind::Task ? candidate.endTime() : kInf;
      if (conflict(candidate, horizon)) continue;

      r.traj = std::move(candidate);
      Commitment c{kind, label, startIndex, plan, {}, ordinal};
      for (std::size_t idx : tour.visitDone) c.doneAt.push_back(tour.path.nodes[idx].t);
      r.active = std::move(c);
      return;
    }
    throw Failed{{FailureKind::UnavoidableCollision, "robot could not avoid the human"}};
  }

  void finish(Runner& r) {
    Commitment c = std::move(*r.active);
    r.active.reset();
    PathSegment seg{c.label, c.kind, {r.state.agent, {}}, c.ordinal};
    seg.path.nodes.assign(r.traj.nodes.begin() + static_cast<std::ptrdiff_t>(c.startIndex),
                          r.traj.nodes.end());
    (r.state.agent == Agent::Human ? out_.human : out_.robot).push_back(std::move(seg));
    r.state.pose = r.traj.nodes.back().q;
    r.state.clock = r.traj.endTime();
    if (c.kind != SegmentKind::Task) return;

    const SubTask& task = pool_.get(c.label);
    for (std::size_t i = 0; i < task.visits.size(); ++i) {
      r.state = fsmStep(r.state, AgentEvent::ArrivedAtCounter);
      r.state = fsmStep(r.state, AgentEvent::DwellDone);
    }
    pool_.complete(task.id);
    double& fin = out_.finishTimes[task.dish];
    fin = std::max(fin, r.state.clock);
    out_.placeEvents.emplace_back(task.id, r.state.clock);
    if (belief_.probs.count(task.id)) belief_ = beliefUpdate(belief_, task.id);
  }

  const Layout& layout_;
  TaskPool pool_;
  std::uint64_t seed_;
  SimSetup setup_;
  const PlannerParams& p_;
  std::mt19937_64 tasksRng_;
  Runner human_;
  Runner robot_;
  Belief belief_;
  std::map<std::string, std::vector<ServiceStop>> stops_;
  std::vector<Point2> servicePoints_;
  double now_ = 0.0;
  double minSep_ = 0.0;
  double verifyRadius_ = 0.0;
  SimOutcome out_;
};

}  // namespace

SimOutcome simulate(const Layout& layout, const TaskPool& pool, std::uint64_t seed,
                    const SimSetup& setup) {
  if (!validateLayout(layout).empty()) {
    throw std::invalid_argument("simulate needs a valid layout");
  }
  Simulation sim(layout, pool, seed, setup);
  return sim.run();
}

}  // namespace kitchen
