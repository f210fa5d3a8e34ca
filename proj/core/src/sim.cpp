/* Copyright 2026 The absflow Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "absflow/sim.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>

#include "absflow/errors.hpp"

namespace absflow {

SourceInput make_source(const StreamName& stream,
                        const std::vector<std::vector<Value>>& epochs) {
  SourceInput result{stream, {}};
  for (std::size_t k = 0; k < epochs.size(); ++k) {
    const Epoch e = k + 1;
    for (const Value& w : epochs[k]) result.messages.push_back(MessageData::event(e, w));
    result.messages.push_back(MessageData::border(e));
  }
  return result;
}

namespace {

std::size_t epoch_count(const SourceInput& src) {
  return static_cast<std::size_t>(
      std::count_if(src.messages.begin(), src.messages.end(),
                    [](const MessageData& d) { return d.is_border(); }));
}

void check_source(const SourceInput& src, const std::string& path,
                  std::vector<std::string>& issues) {
  Epoch current = 1;
  for (std::size_t i = 0; i < src.messages.size(); ++i) {
    const MessageData& d = src.messages[i];
    if (d.epoch != current) {
      issues.push_back(path + ": message " + std::to_string(i) + " has epoch " +
                       std::to_string(d.epoch) + ", expected " + std::to_string(current));
      return;
    }
    if (d.is_border()) ++current;
  }
  if (!src.messages.empty() && !src.messages.back().is_border()) {
    issues.push_back(path + ": last epoch is not closed by a border");
  }
}

std::string at(const std::string& field, std::size_t i) {
  return field + "[" + std::to_string(i) + "]";
}

// Topological order of the tasks, or nullopt on a cycle.
std::optional<std::vector<std::size_t>> topological_order(const std::vector<TaskDef>& tasks) {
  std::map<StreamName, std::size_t> producer;
  for (std::size_t p = 0; p < tasks.size(); ++p) producer.emplace(tasks[p].output, p);
  std::vector<std::size_t> indegree(tasks.size(), 0);
  std::vector<std::vector<std::size_t>> downstream(tasks.size());
  for (std::size_t p = 0; p < tasks.size(); ++p) {
    for (const StreamName& s : tasks[p].inputs) {
      if (auto it = producer.find(s); it != producer.end()) {
        ++indegree[p];
        downstream[it->second].push_back(p);
      }
    }
  }
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
  for (std::size_t p = 0; p < tasks.size(); ++p) {
    if (indegree[p] == 0) ready.push_back(p);
  }
  while (!ready.empty()) {
    const std::size_t p = ready.front();
    ready.erase(ready.begin());
    order.push_back(p);
    for (std::size_t q : downstream[p]) {
      if (--indegree[q] == 0) ready.push_back(q);
    }
  }
  if (order.size() != tasks.size()) return std::nullopt;
  return order;
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> issues;
  if (s.tasks.empty()) issues.emplace_back("tasks: scenario has no tasks (no processors)");
  if (s.initial_values.size() != s.tasks.size()) {
    issues.push_back("tasks: expected " + std::to_string(s.tasks.size()) +
                     " initial values, got " + std::to_string(s.initial_values.size()));
  }

  std::map<StreamName, std::size_t> sources;
  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    const SourceInput& src = s.sources[i];
    const std::string path = at("sources", i);
    if (src.stream.str().empty()) issues.push_back(path + ".stream: empty stream name");
    if (!sources.emplace(src.stream, i).second) {
      issues.push_back(path + ".stream: duplicate source stream '" + src.stream.str() + "'");
    }
    check_source(src, path + ".epochs", issues);
    if (i > 0 && epoch_count(src) != epoch_count(s.sources[0])) {
      issues.push_back(path + ".epochs: " + std::to_string(epoch_count(src)) +
                       " epochs, but sources[0] has " +
                       std::to_string(epoch_count(s.sources[0])));
    }
  }

  std::map<std::string, std::size_t> names;
  std::map<StreamName, std::size_t> outputs;
  for (std::size_t p = 0; p < s.tasks.size(); ++p) {
    const TaskDef& t = s.tasks[p];
    const std::string path = at("tasks", p);
    if (t.name.empty()) issues.push_back(path + ".name: empty task name");
    if (!names.emplace(t.name, p).second) {
      issues.push_back(path + ".name: duplicate task name '" + t.name + "'");
    }
    if (t.output.str().empty()) issues.push_back(path + ".output: empty stream name");
    if (sources.contains(t.output)) {
      issues.push_back(path + ".output: writes source stream '" + t.output.str() + "'");
    }
    if (!outputs.emplace(t.output, p).second) {
      issues.push_back(path + ".output: stream '" + t.output.str() +
                       "' is already written by another task");
    }
    if (t.inputs.empty()) issues.push_back(path + ".inputs: task has no inputs");
  }
  for (std::size_t p = 0; p < s.tasks.size(); ++p) {
    const TaskDef& t = s.tasks[p];
    std::set<StreamName> seen;
    for (std::size_t j = 0; j < t.inputs.size(); ++j) {
      const StreamName& in = t.inputs[j];
      const std::string path = at(at("tasks", p) + ".inputs", j);
      if (!seen.insert(in).second) issues.push_back(path + ": reads '" + in.str() + "' twice");
      if (!sources.contains(in) && !outputs.contains(in)) {
        issues.push_back(path + ": unknown stream '" + in.str() + "'");
      }
    }
  }

  const std::optional<std::vector<std::size_t>> order = topological_order(s.tasks);
  if (!order) issues.emplace_back("tasks: task graph has a cycle");

  for (std::size_t k = 0; k < s.failures.size(); ++k) {
    if (s.failures[k].processor.index >= s.tasks.size()) {
      issues.push_back(at("failures", k) + ".task: unknown processor " +
                       std::to_string(s.failures[k].processor.index));
    }
  }

  if (!issues.empty() || !order) return issues;

  // Shapes of values carried by each stream, propagated along the graph.
  std::map<StreamName, unsigned> kinds;
  for (const SourceInput& src : s.sources) {
    unsigned k = kKindNone;
    for (const MessageData& d : src.messages) {
      if (d.is_event()) k |= kind_of(d.payload());
    }
    kinds[src.stream] = k;
  }
  for (std::size_t p : *order) {
    const TaskDef& t = s.tasks[p];
    const std::string path = at("tasks", p);
    unsigned in = kKindNone;
    for (const StreamName& s_in : t.inputs) in |= kinds[s_in];
    const unsigned accepted = accepted_input_kinds(t.function);
    if ((in & ~accepted) != 0) {
      issues.push_back(path + ".inputs: " + function_name(t.function.kind) +
                       " cannot consume " + kinds_to_string(in & ~accepted));
    }
    kinds[t.output] = output_kinds(t.function, in & accepted);
    const Value& init = s.initial_values[p];
    if (kind_of(init) != state_kind(t.function)) {
      issues.push_back(path + ".initial_value: " + init.to_string() + " is not a " +
                       kinds_to_string(state_kind(t.function)));
    } else if (t.function.kind == TaskFunction::Kind::kIncrementalAverage &&
               (init.as_record().size() != 2 || !init.as_record().contains("sum") ||
                !init.as_record().contains("count"))) {
      issues.push_back(path + ".initial_value: expected exactly the fields sum and count");
    }
  }
  return issues;
}

Configuration build_initial(const Scenario& s) {
  std::vector<std::string> issues = validate_scenario(s);
  if (!issues.empty()) throw ScenarioError(std::move(issues));

  MessageSet m0;
  for (const SourceInput& src : s.sources) {
    SeqNo n = 0;
    for (const MessageData& d : src.messages) m0.insert(Message{n++, src.stream, d});
  }

  std::vector<ProcessorState> states;
  std::vector<Cursors> cursors;
  for (std::size_t p = 0; p < s.tasks.size(); ++p) {
    ProcessorState st;
    st.archive[0] = s.initial_values[p];
    st.volatile_state = NormalState{1, s.initial_values[p]};
    states.push_back(std::move(st));
    Cursors n;
    for (const StreamName& in : s.tasks[p].inputs) n[in] = 0;
    n[s.tasks[p].output] = 0;
    cursors.push_back(std::move(n));
  }
  return Configuration(s.tasks, std::move(states), std::move(cursors), m0, m0);
}

namespace {

bool any_failed(const Configuration& c) {
  return std::any_of(c.states.begin(), c.states.end(),
                     [](const ProcessorState& st) { return st.failed(); });
}

bool is_progress(const StepChoice& ch) {
  return ch.kind == StepChoice::Kind::kEvent || ch.kind == StepChoice::Kind::kBorder;
}

bool quiescent(const Configuration& c) {
  for (const StepChoice& ch : enabled_steps(c)) {
    if (ch.productive()) return false;
  }
  return true;
}

// Bookkeeping shared by the schedulers: the execution, pending failures and
// the recovery deadline.
class Runner {
 public:
  Runner(const Scenario& s, RecoveryMode mode) : s_(s), mode_(mode) {
    failures_ = s.failures;
    std::stable_sort(failures_.begin(), failures_.end(),
                     [](const ScheduledFailure& a, const ScheduledFailure& b) {
                       return a.step_index < b.step_index;
                     });
    result_.execution.push_back(build_initial(s));
  }

  const Configuration& current() const { return result_.execution.back(); }
  std::size_t step() const { return result_.trace.size(); }

  std::optional<ProcessorId> due_failure() const {
    if (next_failure_ < failures_.size() && failures_[next_failure_].step_index <= step()) {
      return failures_[next_failure_].processor;
    }
    return std::nullopt;
  }

  bool recovery_overdue() const {
    return failed_since_ && step() >= *failed_since_ + 1 + s_.recovery_delay_max;
  }

  void take(const StepChoice& choice) {
    if (choice.kind == StepChoice::Kind::kFail && due_failure() &&
        failures_[next_failure_].processor == choice.processor) {
      ++next_failure_;
    }
    const std::size_t i = step();
    AppliedStep applied = apply_choice(current(), choice, mode_);
    result_.trace.push_back(std::move(applied.record));
    result_.execution.push_back(std::move(applied.next));
    if (choice.kind == StepChoice::Kind::kRecover) {
      failed_since_.reset();
    } else if (!failed_since_ && any_failed(current())) {
      failed_since_ = i;
    }
  }

  RunResult finish() {
    result_.steps_taken = result_.trace.size();
    result_.terminated = quiescent(current());
    return std::move(result_);
  }

 private:
  const Scenario& s_;
  RecoveryMode mode_;
  std::vector<ScheduledFailure> failures_;
  std::size_t next_failure_ = 0;
  std::optional<std::size_t> failed_since_;
  RunResult result_;
};

}  // namespace

RunResult run(const Scenario& s, RecoveryMode mode) {
  Runner runner(s, mode);
  std::mt19937_64 rng(s.seed);
  while (runner.step() < s.max_steps) {
    if (auto p = runner.due_failure()) {
      runner.take(StepChoice::fail(*p));
      continue;
    }
    std::vector<StepChoice> candidates;
    bool recover_enabled = false;
    for (const StepChoice& ch : enabled_steps(runner.current())) {
      if (is_progress(ch)) candidates.push_back(ch);
      if (ch.kind == StepChoice::Kind::kRecover) recover_enabled = true;
    }
    if (recover_enabled && (candidates.empty() || runner.recovery_overdue())) {
      runner.take(StepChoice::recover());
      continue;
    }
    if (recover_enabled) candidates.push_back(StepChoice::recover());
    if (candidates.empty()) break;
    runner.take(candidates[rng() % candidates.size()]);
  }
  return runner.finish();
}

namespace {

RunResult run_round_robin(const Scenario& s, std::optional<ProcessorId> victim) {
  Runner runner(s, RecoveryMode::kPurge);
  const std::size_t budget = s.max_steps;
  const std::size_t n = s.tasks.size();
  std::size_t next_processor = 0;
  // Per processor: next slot to try; slots 0..k-1 are inputs, slot k the border.
  std::vector<std::size_t> next_slot(n, 0);

  while (runner.step() < budget) {
    if (auto p = runner.due_failure()) {
      runner.take(StepChoice::fail(*p));
      continue;
    }
    const Configuration& c = runner.current();
    const bool failed = any_failed(c);
    if (failed && runner.recovery_overdue()) {
      runner.take(StepChoice::recover());
      continue;
    }

    std::optional<StepChoice> pick;
    for (std::size_t k = 0; k < n && !pick; ++k) {
      const std::size_t p = (next_processor + k) % n;
      if (victim && victim->index == p) continue;
      const std::size_t slots = s.tasks[p].inputs.size() + 1;
      for (std::size_t t = 0; t < slots; ++t) {
        const std::size_t slot = (next_slot[p] + t) % slots;
        const StepChoice ch = slot + 1 == slots ? StepChoice::border(ProcessorId{p})
                                                : StepChoice::event(ProcessorId{p}, slot);
        if (derive_step(c, ch)) {
          pick = ch;
          next_slot[p] = (slot + 1) % slots;
          next_processor = (p + 1) % n;
          break;
        }
      }
    }
    if (!pick && failed) pick = StepChoice::recover();
    if (!pick) break;
    runner.take(*pick);
  }
  return runner.finish();
}

}  // namespace

RunResult run_fair(const Scenario& s) { return run_round_robin(s, std::nullopt); }

RunResult run_starving(const Scenario& s, ProcessorId victim) {
  return run_round_robin(s, victim);
}

std::size_t fairness_bound(const Scenario& s) {
  std::size_t fan_in = 0;
  for (const TaskDef& t : s.tasks) fan_in = std::max(fan_in, t.inputs.size());
  return s.tasks.size() * (fan_in + 1);
}

std::size_t fair_step_budget(const Scenario& s) {
  // Upper bound on stream lengths: a task emits at most one message per
  // message it consumes.
  std::map<StreamName, std::size_t> length;
  for (const SourceInput& src : s.sources) length[src.stream] = src.messages.size();
  std::size_t per_pass = 0;
  if (auto order = topological_order(s.tasks)) {
    for (std::size_t p : *order) {
      std::size_t consumed = 0;
      for (const StreamName& in : s.tasks[p].inputs) consumed += length[in];
      length[s.tasks[p].output] = consumed;
      per_pass += consumed;
    }
  }
  const std::size_t failures = s.failures.size();
  const std::size_t needed =
      (failures + 1) * (per_pass + 1) + failures * (s.recovery_delay_max + 2);
  std::size_t last_failure = 0;
  for (const ScheduledFailure& f : s.failures) last_failure = std::max(last_failure, f.step_index);
  return last_failure + needed;
}

LivenessReport liveness_of(const Scenario& s, const RunResult& r) {
  LivenessReport report;
  report.quiesced = r.terminated;
  report.steps = r.steps_taken;
  std::set<Epoch> wanted;
  for (const SourceInput& src : s.sources) {
    for (const MessageData& d : src.messages) wanted.insert(d.epoch);
  }
  for (std::size_t i = 0; i < r.execution.size(); ++i) {
    for (const Message& m : out(r.execution[i])) report.first_visible.emplace(m.data.epoch, i);
  }
  report.input_epochs.assign(wanted.begin(), wanted.end());
  for (Epoch e : wanted) {
    if (!report.first_visible.contains(e)) report.missing.push_back(e);
  }
  report.live = report.missing.empty();
  return report;
}

bool check_liveness(const Scenario& s) { return liveness_of(s, run_fair(s)).live; }

namespace {

struct Explorer {
  const EnumerationOptions& options;
  const TraceVisitor& visit;
  EnumerationStats stats;
  std::set<Configuration> configurations;
  Trace trace;

  void explore(const Configuration& c, std::size_t fails) {
    if (++stats.traces > options.node_limit) throw StateLimitExceeded(options.node_limit);
    stats.max_length = std::max(stats.max_length, trace.size());
    if (options.count_configurations) configurations.insert(c);
    visit(trace, c);
    if (trace.size() >= options.depth) return;
    for (const StepChoice& ch : enabled_steps(c)) {
      if (!ch.productive() && fails >= options.failure_budget) continue;
      if (ch.kind == StepChoice::Kind::kRecover && options.failure_budget == 0) continue;
      std::optional<TraceStep> record = derive_step(c, ch);
      if (!record) continue;
      std::optional<Configuration> next = apply_step(c, *record, options.mode);
      if (!next) continue;
      trace.push_back(std::move(*record));
      explore(*next, fails + (ch.productive() ? 0 : 1));
      trace.pop_back();
    }
  }
};

}  // namespace

EnumerationStats for_each_execution(const Configuration& c, const EnumerationOptions& options,
                                    const TraceVisitor& visit) {
  Explorer explorer{options, visit, {}, {}, {}};
  explorer.explore(c, 0);
  explorer.stats.distinct_configurations = explorer.configurations.size();
  return explorer.stats;
}

std::set<Trace> enumerate_executions(const Scenario& s, std::size_t depth,
                                     std::size_t failure_budget, std::size_t node_limit) {
  EnumerationOptions options;
  options.depth = depth;
  options.failure_budget = failure_budget;
  options.node_limit = node_limit;
  std::set<Trace> traces;
  for_each_execution(build_initial(s), options,
                     [&](const Trace& z, const Configuration&) { traces.insert(z); });
  return traces;
}

std::size_t state_limit_from_env(std::size_t fallback) {
  const char* raw = std::getenv("ABSFLOW_STATE_LIMIT");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return fallback;
  return static_cast<std::size_t>(v);
}

namespace {

// Uniform-enough draws that are identical on every standard library.
std::size_t draw(std::mt19937_64& rng, std::size_t bound) {
  return bound == 0 ? 0 : static_cast<std::size_t>(rng() % bound);
}

TaskFunction random_function(std::mt19937_64& rng) {
  switch (draw(rng, 6)) {
    case 0:
      return TaskFunction::incremental_average();
    case 1:
      return TaskFunction::sum();
    case 2:
      return TaskFunction::count();
    case 3:
      return TaskFunction::map_add(static_cast<std::int64_t>(draw(rng, 5)) + 1);
    case 4:
      return TaskFunction::filter_greater_than(static_cast<std::int64_t>(draw(rng, 6)));
    default:
      return TaskFunction::identity();
  }
}

}  // namespace

Scenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& options) {
  std::mt19937_64 rng(seed);
  Scenario s;
  s.seed = seed;
  s.max_steps = options.max_steps;

  const std::size_t n_sources = 1 + draw(rng, std::max<std::size_t>(options.max_sources, 1));
  const std::size_t n_epochs = 1 + draw(rng, std::max<std::size_t>(options.max_epochs, 1));
  std::vector<StreamName> streams;
  for (std::size_t i = 0; i < n_sources; ++i) {
    std::vector<std::vector<Value>> epochs(n_epochs);
    for (auto& events : epochs) {
      const std::size_t k = draw(rng, options.max_events_per_epoch + 1);
      for (std::size_t j = 0; j < k; ++j) {
        events.push_back(Value::integer(
            static_cast<std::int64_t>(draw(rng, static_cast<std::size_t>(options.max_payload) + 1))));
      }
    }
    streams.emplace_back("in" + std::to_string(i));
    s.sources.push_back(make_source(streams.back(), epochs));
  }

  const std::size_t n_tasks = 1 + draw(rng, std::max<std::size_t>(options.max_tasks, 1));
  for (std::size_t p = 0; p < n_tasks; ++p) {
    TaskDef t;
    t.name = "t" + std::to_string(p);
    t.function = random_function(rng);
    t.output = StreamName("s" + std::to_string(p));
    const std::size_t fan_in = std::min<std::size_t>(1 + draw(rng, 2), streams.size());
    // Pick fan_in distinct upstream streams; later streams are preferred so
    // that pipelines form.
    std::vector<StreamName> pool = streams;
    for (std::size_t j = 0; j < fan_in; ++j) {
      const bool prefer_last = draw(rng, 2) == 0;
      const std::size_t at = prefer_last ? pool.size() - 1 : draw(rng, pool.size());
      t.inputs.push_back(pool[at]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    }
    streams.push_back(t.output);
    s.initial_values.push_back(default_initial_state(t.function));
    s.tasks.push_back(std::move(t));
  }
  return s;
}

Scenario with_sampled_failures(const Scenario& s, std::uint64_t seed, std::size_t max_failures,
                               std::size_t horizon) {
  std::mt19937_64 rng(seed);
  Scenario result = s;
  result.seed = seed;
  result.failures.clear();
  if (horizon == 0) {
    // Failures past quiescence never fire; aim inside the failure-free run.
    Scenario quiet = s;
    quiet.failures.clear();
    horizon = std::max<std::size_t>(run(quiet).steps_taken, 1);
  }
  const std::size_t k = draw(rng, max_failures + 1);
  for (std::size_t i = 0; i < k; ++i) {
    ScheduledFailure f;
    f.step_index = draw(rng, horizon);
    f.processor = ProcessorId{draw(rng, s.tasks.size())};
    result.failures.push_back(f);
  }
  std::stable_sort(result.failures.begin(), result.failures.end(),
                   [](const ScheduledFailure& a, const ScheduledFailure& b) {
                     return a.step_index < b.step_index;
                   });
  result.recovery_delay_max = draw(rng, 3);
  return result;
}

}  // namespace absflow
