#include "kitchen/recipe.hpp"

#include <algorithm>
#include <cctype>

namespace kitchen {

const char* toString(Component c) {
  switch (c) {
    case Component::Bun: return "Bun";
    case Component::Meat: return "Meat";
    case Component::Tomato: return "Tomato";
    case Component::Lettuce: return "Lettuce";
    case Component::Cheese: return "Cheese";
  }
  return "?";
}

Component componentFromString(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Component::Cheese); ++i) {
    const auto c = static_cast<Component>(i);
    if (s == toString(c)) return c;
  }
  throw InvalidRecipe("unknown recipe component '" + s + "'");
}

CounterKind counterFor(Component c) {
  switch (c) {
    case Component::Bun: return CounterKind::Bun;
    case Component::Meat: return CounterKind::Meat;
    case Component::Tomato: return CounterKind::Tomato;
    case Component::Lettuce: return CounterKind::Lettuce;
    case Component::Cheese: return CounterKind::Cheese;
  }
  return CounterKind::Bun;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

}  // namespace

std::vector<SubTask> expandRecipes(const std::vector<Recipe>& recipes, const DwellTimes& dwell) {
  std::vector<SubTask> out;
  for (std::size_t d = 0; d < recipes.size(); ++d) {
    const Recipe& r = recipes[d];
    std::set<Component> parts(r.components.begin(), r.components.end());
    if (parts.size() != r.components.size()) {
      throw InvalidRecipe("recipe '" + r.dishId + "' repeats a component");
    }
    if (!parts.count(Component::Bun)) {
      throw InvalidRecipe("recipe '" + r.dishId + "' has no bun");
    }
    if (r.submission != CounterKind::Plate && r.submission != CounterKind::Plain) {
      throw InvalidRecipe("recipe '" + r.dishId + "' must submit to a Plate or Plain counter");
    }

    const std::string suffix = "-" + std::to_string(d + 1);
    const std::string bunId = "bun" + suffix;
    // Canonical order: bun, meat, then toppings.
    for (Component c : {Component::Bun, Component::Meat, Component::Tomato, Component::Lettuce,
                        Component::Cheese}) {
      if (!parts.count(c)) continue;
      SubTask t;
      t.id = lower(toString(c)) + suffix;
      t.dish = r.dishId;
      t.visits.push_back({counterFor(c), dwell.pickup});
      if (c == Component::Meat) {
        t.visits.push_back({CounterKind::Stove, dwell.cook});
      } else if (c != Component::Bun) {
        t.visits.push_back({CounterKind::CuttingBoard, dwell.chop});
      }
      t.visits.push_back({r.submission, dwell.place});
      if (c != Component::Bun) t.prerequisites.insert(bunId);
      out.push_back(std::move(t));
    }
  }
  return out;
}

const char* toString(Agent a) { return a == Agent::Human ? "human" : "robot"; }

// ---------------------------------------------------------------------------

TaskPool::TaskPool(std::vector<SubTask> tasks) : all_(std::move(tasks)) {
  for (std::size_t i = 0; i < all_.size(); ++i) {
    if (!index_.emplace(all_[i].id, i).second) {
      throw std::invalid_argument("duplicate sub-task id '" + all_[i].id + "'");
    }
  }
  for (const SubTask& t : all_) {
    for (const std::string& p : t.prerequisites) {
      if (!index_.count(p)) {
        throw std::invalid_argument("sub-task '" + t.id + "' requires unknown '" + p + "'");
      }
    }
  }
}

const SubTask& TaskPool::get(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown sub-task '" + id + "'");
  return all_[it->second];
}

bool TaskPool::contains(const std::string& id) const { return index_.count(id) != 0; }

bool TaskPool::isClaimable(const std::string& id) const {
  if (isClaimed(id) || isCompleted(id)) return false;
  const SubTask& t = get(id);
  return std::all_of(t.prerequisites.begin(), t.prerequisites.end(),
                     [&](const std::string& p) { return isCompleted(p); });
}

std::vector<std::string> TaskPool::claimable() const {
  std::vector<std::string> out;
  for (const SubTask& t : all_) {
    if (isClaimable(t.id)) out.push_back(t.id);
  }
  return out;
}

bool TaskPool::hasUnclaimed() const {
  return std::any_of(all_.begin(), all_.end(), [&](const SubTask& t) {
    return !isClaimed(t.id) && !isCompleted(t.id);
  });
}

void TaskPool::claim(const std::string& id, Agent agent) {
  if (!isClaimable(id)) throw std::logic_error("sub-task '" + id + "' is not claimable");
  claimed_.emplace(id, agent);
}

void TaskPool::complete(const std::string& id) {
  if (!isClaimed(id)) throw std::logic_error("sub-task '" + id + "' was never claimed");
  claimed_.erase(id);
  completed_.insert(id);
}

std::optional<SubTask> nextSubTask(TaskPool& pool, Agent agent, std::mt19937_64& rng) {
  const std::vector<std::string> options = pool.claimable();
  if (options.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  const std::string& id = options[pick(rng)];
  pool.claim(id, agent);
  return pool.get(id);
}

// ---------------------------------------------------------------------------

const char* toString(AgentMode m) {
  switch (m) {
    case AgentMode::Moving: return "Moving";
    case AgentMode::DoingAtCounter: return "DoingAtCounter";
    case AgentMode::NeedNewTask: return "NeedNewTask";
    case AgentMode::Idle: return "Idle";
  }
  return "?";
}

const char* toString(AgentEvent e) {
  switch (e) {
    case AgentEvent::ArrivedAtCounter: return "ArrivedAtCounter";
    case AgentEvent::DwellDone: return "DwellDone";
    case AgentEvent::PathDone: return "PathDone";
    case AgentEvent::TaskAssigned: return "TaskAssigned";
    case AgentEvent::NoTaskAvailable: return "NoTaskAvailable";
  }
  return "?";
}

AgentState fsmStep(const AgentState& state, AgentEvent event, const SubTask* assigned) {
  AgentState next = state;
  auto reject = [&]() -> AgentState {
    throw ProtocolError(std::string("illegal event ") + toString(event) + " in mode " +
                        toString(state.mode));
  };

  switch (state.mode) {
    case AgentMode::NeedNewTask:
      if (event == AgentEvent::TaskAssigned) {
        if (assigned == nullptr || assigned->visits.empty()) {
          throw ProtocolError("TaskAssigned needs a sub-task with visits");
        }
        next.mode = AgentMode::Moving;
        next.currentSubTask = assigned->id;
        next.nextVisit = 0;
        next.visitCount = assigned->visits.size();
        return next;
      }
      if (event == AgentEvent::NoTaskAvailable) {
        next.mode = AgentMode::Idle;
        next.currentSubTask.reset();
        return next;
      }
      return reject();
    case AgentMode::Moving:
      if (event == AgentEvent::ArrivedAtCounter) {
        next.mode = AgentMode::DoingAtCounter;
        return next;
      }
      return reject();
    case AgentMode::DoingAtCounter:
      if (event == AgentEvent::DwellDone) {
        next.nextVisit = state.nextVisit + 1;
        if (next.nextVisit >= state.visitCount) {
          next.mode = AgentMode::NeedNewTask;
          next.currentSubTask.reset();
        } else {
          next.mode = AgentMode::Moving;
        }
        return next;
      }
      return reject();
    case AgentMode::Idle:
      return reject();
  }
  return reject();
}

const char* toString(Verb v) {
  switch (v) {
    case Verb::GoTo: return "GoTo";
    case Verb::PickUp: return "PickUp";
    case Verb::Operate: return "Operate";
    case Verb::Place: return "Place";
  }
  return "?";
}

ActionSequence toActionSequence(const SubTask& subTask) {
  ActionSequence seq{subTask.id, {}};
  const std::size_t n = subTask.visits.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Visit& v = subTask.visits[i];
    seq.actions.push_back({Verb::GoTo, v.counter, 0.0});
    Verb verb = Verb::Operate;
    if (i + 1 == n) {
      verb = Verb::Place;
    } else if (i == 0) {
      verb = Verb::PickUp;
    }
    seq.actions.push_back({verb, v.counter, v.dwell});
  }
  return seq;
}

}  // namespace kitchen
