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

#include "commands.hpp"

#include <exception>
#include <functional>
#include <set>

#include "absflow/errors.hpp"
#include "absflow/explain.hpp"
#include "absflow/lemmas.hpp"
#include "absflow/scenario_io.hpp"
#include "absflow/sim.hpp"

namespace absflow::cli {

namespace {

// Loads the scenario and maps exceptions to exit codes.
int guarded(const std::string& path, std::ostream& err,
            const std::function<int(const Scenario&)>& body) {
  try {
    const Scenario s = load_scenario_file(path);
    return body(s);
  } catch (const ScenarioError& e) {
    for (const std::string& issue : e.issues()) err << "error: " << issue << '\n';
    return kExitInput;
  } catch (const StateLimitExceeded& e) {
    err << "error: " << e.what() << " (raise ABSFLOW_STATE_LIMIT or lower --depth)\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

// Every check a single trace must pass. Returns the explanation report for
// diagnostics.
struct TraceVerdict {
  bool ok = false;
  std::string reason;
  ExplanationReport report;
};

TraceVerdict verify_trace(const Trace& z, const Configuration& initial, RecoveryMode mode,
                          const std::set<Trace>* failure_free) {
  TraceVerdict v;
  v.report = construct_explanation(z, initial, mode);
  if (!v.report.verdict) {
    v.reason = "explanation verdict false";
    return v;
  }
  if (!v.report.joins_hold()) {
    v.reason = "stripped generation does not end in the recovered configuration";
    return v;
  }
  if (!check_observational_explanation(v.report.original_execution,
                                       v.report.explaining_execution)
           .mapping) {
    v.reason = "no monotone observational witness";
    return v;
  }
  if (failure_free != nullptr && !failure_free->contains(v.report.explaining_trace)) {
    v.reason = "explanation is not an enumerated failure-free execution";
    return v;
  }
  v.ok = true;
  return v;
}

void print_counterexample(std::ostream& out, const std::string& label, const Trace& z,
                          const TraceVerdict& v) {
  out << "counterexample " << label << ": " << v.reason << '\n';
  out << dump_trace(z);
  out << "report " << v.report.to_json() << '\n';
}

}  // namespace

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, std::ostream& out,
            std::ostream& err) {
  return guarded(path, err, [&](const Scenario& loaded) {
    Scenario s = loaded;
    if (seed) s.seed = *seed;
    const RunResult r = run(s);
    for (std::size_t i = 0; i < r.execution.size(); ++i) {
      std::vector<std::string> v = well_formed_violations(r.execution[i]);
      if (!v.empty()) {
        err << "internal error: configuration " << i << " is not well formed: " << v.front()
            << '\n';
        return kExitInternal;
      }
    }
    out << dump_trace(r.trace);
    for (const Message& m : absflow::out(r.execution.back())) {
      out << "out " << format_message(m) << '\n';
    }
    return kExitOk;
  });
}

int cmd_check_ft(const std::string& path, const FtOptions& options, std::ostream& out,
                 std::ostream& err) {
  return guarded(path, err, [&](const Scenario& base) {
    std::size_t total = 0;
    std::size_t passed = 0;
    bool reported = false;
    auto record = [&](const std::string& label, const Trace& z, const TraceVerdict& v) {
      ++total;
      if (v.ok) {
        ++passed;
      } else if (!reported) {
        print_counterexample(out, label, z, v);
        reported = true;
      }
    };

    if (options.mode == FtOptions::Mode::kRandom) {
      out << "check-ft random runs=" << options.runs << " seed=" << options.seed << '\n';
      for (std::size_t i = 0; i < options.runs; ++i) {
        const std::uint64_t run_seed = options.seed + i;
        const Scenario s = with_sampled_failures(base, run_seed);
        const RunResult r = run(s, options.engine);
        record("seed=" + std::to_string(run_seed), r.trace,
               verify_trace(r.trace, r.execution.front(), options.engine, nullptr));
      }
    } else {
      out << "check-ft exhaustive depth=" << options.depth << " budget=" << options.budget
          << '\n';
      const Configuration initial = build_initial(base);
      EnumerationOptions eo;
      eo.depth = options.depth;
      eo.node_limit = state_limit_from_env();
      std::set<Trace> failure_free;
      for_each_execution(initial, eo,
                         [&](const Trace& z, const Configuration&) { failure_free.insert(z); });
      eo.failure_budget = options.budget;
      eo.mode = options.engine;
      std::size_t index = 0;
      for_each_execution(initial, eo, [&](const Trace& z, const Configuration&) {
        record("trace=" + std::to_string(index++), z,
               verify_trace(z, initial, options.engine, &failure_free));
      });
    }
    out << "passed " << passed << '/' << total << '\n';
    return passed == total ? kExitOk : kExitViolation;
  });
}

int cmd_check_liveness(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded(path, err, [&](const Scenario& s) {
    const RunResult r = run_fair(s);
    const LivenessReport report = liveness_of(s, r);
    for (Epoch e : report.input_epochs) {
      auto it = report.first_visible.find(e);
      if (it == report.first_visible.end()) {
        out << "epoch " << e << " never visible\n";
      } else {
        out << "epoch " << e << " visible at " << it->second << '\n';
      }
    }
    if (report.live) {
      out << "live steps=" << report.steps << '\n';
      return kExitOk;
    }
    if (report.quiesced) {
      out << "not live: quiesced without producing every epoch after " << report.steps
          << " steps\n";
    } else {
      out << "not live: budget exhausted after " << report.steps << " steps\n";
    }
    return kExitViolation;
  });
}

int cmd_lemmas(const std::string& path, std::size_t n, std::uint64_t seed, std::ostream& out,
               std::ostream& err) {
  return guarded(path, err, [&](const Scenario& s) {
    const std::vector<PropertyResult> results =
        run_property_suite(sampled_failures_of(s), seed, n);
    bool ok = true;
    for (const PropertyResult& r : results) {
      out << r.name << ' ' << r.passed << '/' << r.runs << '\n';
      if (!r.ok()) {
        ok = false;
        out << "FAILED " << r.name << " seed=" << *r.failing_seed << ": " << r.detail << '\n';
      }
    }
    return ok ? kExitOk : kExitViolation;
  });
}

int cmd_enumerate(const std::string& path, std::size_t depth, std::size_t budget, bool dump,
                  std::ostream& out, std::ostream& err) {
  return guarded(path, err, [&](const Scenario& s) {
    EnumerationOptions eo;
    eo.depth = depth;
    eo.failure_budget = budget;
    eo.node_limit = state_limit_from_env();
    eo.count_configurations = true;
    std::size_t with_failures = 0;
    const EnumerationStats stats =
        for_each_execution(build_initial(s), eo, [&](const Trace& z, const Configuration&) {
          bool faulty = false;
          for (const TraceStep& step : z) faulty = faulty || step.is_fail();
          if (faulty) ++with_failures;
          if (dump) out << "trace\n" << dump_trace(z);
        });
    out << "traces " << stats.traces << '\n';
    out << "traces_with_failures " << with_failures << '\n';
    out << "max_length " << stats.max_length << '\n';
    out << "distinct_configurations " << stats.distinct_configurations << '\n';
    return kExitOk;
  });
}

}  // namespace absflow::cli
