#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kitchen/geometry.hpp"

namespace kitchen {

enum class Component { Bun, Meat, Tomato, Lettuce, Cheese };

const char* toString(Component c);
Component componentFromString(const std::string& s);
CounterKind counterFor(Component c);

struct Recipe {
  std::string dishId;
  std::vector<Component> components;
  CounterKind submission = CounterKind::Plate;
};

class InvalidRecipe : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Visit {
  CounterKind counter;
  double dwell = 0.0;  // seconds

  bool operator==(const Visit&) const = default;
};

struct SubTask {
  std::string id;  // e.g. "meat-1"
  std::string dish;
  std::vector<Visit> visits;
  std::set<std::string> prerequisites;
};

struct DwellTimes {
  double pickup = 1.0;
  double place = 1.0;
  double cook = 12.0;  // Stove
  double chop = 6.0;   // CuttingBoard
};

// Sub-task ids are "<component>-<n>" where n is the 1-based dish position.
std::vector<SubTask> expandRecipes(const std::vector<Recipe>& recipes,
                                   const DwellTimes& dwell = {});

enum class Agent { Human, Robot };

const char* toString(Agent a);

class TaskPool {
 public:
  TaskPool() = default;
  explicit TaskPool(std::vector<SubTask> tasks);

  const std::vector<SubTask>& all() const { return all_; }
  const SubTask& get(const std::string& id) const;
  bool contains(const std::string& id) const;

  bool isCompleted(const std::string& id) const { return completed_.count(id) != 0; }
  bool isClaimed(const std::string& id) const { return claimed_.count(id) != 0; }
  bool isClaimable(const std::string& id) const;

  // Unclaimed, uncompleted, prerequisites completed; in construction order.
  std::vector<std::string> claimable() const;
  bool hasUnclaimed() const;
  bool allCompleted() const { return completed_.size() == all_.size(); }

  void claim(const std::string& id, Agent agent);
  // Moves a claimed sub-task to completed.
  void complete(const std::string& id);

  const std::set<std::string>& completed() const { return completed_; }
  const std::map<std::string, Agent>& claimed() const { return claimed_; }

 private:
  std::vector<SubTask> all_;
  std::map<std::string, std::size_t> index_;
  std::set<std::string> completed_;
  std::map<std::string, Agent> claimed_;
};

// Uniform choice over claimable sub-tasks; claims the result for `agent`.
std::optional<SubTask> nextSubTask(TaskPool& pool, Agent agent, std::mt19937_64& rng);

enum class AgentMode { Moving, DoingAtCounter, NeedNewTask, Idle };
enum class AgentEvent { ArrivedAtCounter, DwellDone, PathDone, TaskAssigned, NoTaskAvailable };

const char* toString(AgentMode m);
const char* toString(AgentEvent e);

struct AgentState {
  Agent agent = Agent::Human;
  AgentMode mode = AgentMode::NeedNewTask;
  std::optional<std::string> currentSubTask;
  std::size_t nextVisit = 0;
  std::size_t visitCount = 0;
  Point2 pose;
  double clock = 0.0;
};

class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// TaskAssigned needs the assigned sub-task; other events ignore it.
AgentState fsmStep(const AgentState& state, AgentEvent event, const SubTask* assigned = nullptr);

enum class Verb { GoTo, PickUp, Operate, Place };

const char* toString(Verb v);

struct Action {
  Verb verb;
  CounterKind counter;
  double dwell = 0.0;

  bool operator==(const Action&) const = default;
};

struct ActionSequence {
  std::string subTaskId;
  std::vector<Action> actions;
};

ActionSequence toActionSequence(const SubTask& subTask);

}  // namespace kitchen
