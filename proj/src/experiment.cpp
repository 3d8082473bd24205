#include "kitchen/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace kitchen {

using nlohmann::json;

bool RunReport::hasValidSolution() const {
  return std::any_of(groups.begin(), groups.end(), [](const RunGroup& g) { return !g.pareto.empty(); });
}

double runPathCost(const RunRecord& run, const Weights& weights) {
  return pathCost(run.result.best.costs, weights);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RunReport runExperiment(const ProblemConfig& config, const ExperimentOptions& options) {
  if (options.runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (options.threads < 1) throw std::invalid_argument("threads must be at least 1");
  if (options.rooms.empty()) throw std::invalid_argument("no room variant selected");

  RunReport report;
  report.name = config.name;
  const std::vector<AnnealMode> modes =
      options.modes.empty() ? std::vector<AnnealMode>{config.anneal.mode} : options.modes;
  const std::uint64_t firstSeed = options.seed.value_or(config.anneal.seed);

  for (RoomVariant room : options.rooms) {
    for (AnnealMode mode : modes) {
      RunGroup g;
      g.room = room;
      g.mode = mode;
      g.problem = withRoomVariant(config.problem, room);
      if (options.alwaysInfer) g.problem.sim.policy = PlanningPolicy::AlwaysInfer;
      g.anneal = config.anneal;
      g.anneal.mode = mode;
      if (options.iterations) g.anneal.iterations = *options.iterations;
      g.anneal.validate();
      g.pareto = ParetoSet(g.problem.weights);
      g.runs.resize(static_cast<std::size_t>(options.runs));
      for (int i = 0; i < options.runs; ++i) g.runs[static_cast<std::size_t>(i)].seed = firstSeed + static_cast<std::uint64_t>(i);
      report.groups.push_back(std::move(g));
    }
  }

  struct Job {
    RunGroup* group;
    RunRecord* run;
  };
  std::vector<Job> jobs;
  for (RunGroup& g : report.groups) {
    for (RunRecord& r : g.runs) jobs.push_back({&g, &r});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex errorMutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        AnnealConfig ac = jobs[i].group->anneal;
        ac.seed = jobs[i].run->seed;
        const auto start = std::chrono::steady_clock::now();
        jobs[i].run->result = anneal(ac, jobs[i].group->problem);
        jobs[i].run->wallSeconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        std::lock_guard<std::mutex> lock(errorMutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t nThreads = std::min<std::size_t>(static_cast<std::size_t>(options.threads), jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nThreads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  for (RunGroup& g : report.groups) {
    ParetoSet merged(g.problem.weights);
    for (const RunRecord& r : g.runs) {
      for (const Solution& s : r.result.pareto.members()) merged.insert(s);
    }
    g.pareto = ParetoSet(g.problem.weights);
    for (const Solution& s : merged.members()) {
      const std::vector<std::string> issues = verifySolution(s, g.problem);
      if (issues.empty()) {
        g.pareto.insert(s);
      } else {
        g.rejected.push_back("simSeed " + std::to_string(s.simSeed) + ": " + issues.front());
      }
    }
  }
  return report;
}

namespace {

json ratioOrNull(double num, double den) {
  if (den == 0.0) return nullptr;
  return num / den;
}

json groupToJson(const RunGroup& g, bool includeTiming) {
  const Weights& w = g.problem.weights;
  json runs = json::array();
  std::vector<double> pathCosts, narrowness, totals;
  int improved = 0;
  for (const RunRecord& r : g.runs) {
    const AnnealResult& a = r.result;
    json jr = {{"seed", r.seed},
               {"evaluations", a.evaluations},
               {"accepted", a.accepted},
               {"failedSimulations", a.failedSimulations},
               {"initialTotalCost", a.initial.totalCost},
               {"bestTotalCost", a.best.totalCost},
               {"bestPathCost", runPathCost(r, w)},
               {"bestCosts", toJson(a.best.costs)},
               {"paretoSize", a.pareto.size()}};
    if (g.mode == AnnealMode::Separate) jr["layoutPhaseIterations"] = a.layoutPhaseIterations;
    if (!a.diagnostic.empty()) jr["diagnostic"] = a.diagnostic;
    if (includeTiming) jr["wallSeconds"] = r.wallSeconds;
    runs.push_back(std::move(jr));
    pathCosts.push_back(runPathCost(r, w));
    narrowness.push_back(a.best.costs.pathNarrowness);
    totals.push_back(a.best.totalCost);
    if (a.best.totalCost <= a.initial.totalCost) ++improved;
  }
  json pareto = json::array();
  for (const Solution& s : g.pareto.members()) pareto.push_back(solutionToJson(s, w));
  return {{"room", toString(g.room)},
          {"mode", toString(g.mode)},
          {"iterations", g.anneal.iterations},
          {"alwaysInfer", g.problem.sim.policy == PlanningPolicy::AlwaysInfer},
          {"perimeter", g.problem.room.perimeter()},
          {"runs", runs},
          {"summary",
           {{"medianBestPathCost", median(pathCosts)},
            {"medianBestNarrowness", median(narrowness)},
            {"medianBestTotalCost", median(totals)},
            {"runsNotWorseThanInitial", improved}}},
          {"pareto", pareto},
          {"rejected", g.rejected}};
}

}  // namespace

json reportToJson(const RunReport& report, bool includeTiming) {
  json groups = json::array();
  for (const RunGroup& g : report.groups) groups.push_back(groupToJson(g, includeTiming));

  // Every further group against the first one, seed by seed.
  json comparisons = json::array();
  if (!report.groups.empty()) {
    const RunGroup& base = report.groups.front();
    const Weights& w = base.problem.weights;
    std::vector<double> basePc, baseN;
    for (const RunRecord& r : base.runs) {
      basePc.push_back(runPathCost(r, w));
      baseN.push_back(r.result.best.costs.pathNarrowness);
    }
    for (std::size_t gi = 1; gi < report.groups.size(); ++gi) {
      const RunGroup& g = report.groups[gi];
      std::vector<double> pc, n;
      int baseWins = 0;
      for (std::size_t i = 0; i < g.runs.size(); ++i) {
        pc.push_back(runPathCost(g.runs[i], g.problem.weights));
        n.push_back(g.runs[i].result.best.costs.pathNarrowness);
        if (basePc[i] < pc.back()) ++baseWins;
      }
      comparisons.push_back({{"baseline", {{"room", toString(base.room)}, {"mode", toString(base.mode)}}},
                             {"group", {{"room", toString(g.room)}, {"mode", toString(g.mode)}}},
                             {"medianPathCostRatio", ratioOrNull(median(pc), median(basePc))},
                             {"medianNarrownessRatio", ratioOrNull(median(n), median(baseN))},
                             {"baselineLowerPathCostPairs", baseWins},
                             {"pairs", g.runs.size()}});
    }
  }
  return {{"name", report.name}, {"groups", groups}, {"comparisons", comparisons}};
}

}  // namespace kitchen
