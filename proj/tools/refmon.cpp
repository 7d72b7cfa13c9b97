/*
 * Copyright 2026 The refmon Authors
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

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "refmon/refmon.hpp"

namespace {

// Exit codes: 0 conformant / clean, 1 policy findings, 2 input errors.
constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitInputError = 2;

struct RunOptions {
  std::string config_path;
  std::string mode = "relaxed";
  std::string events_path = "-";
  std::string fail_out;
  std::string conflict_out;
  int level = 3;
};

refmon::ValidationMode mode_of(const RunOptions& opts) {
  return opts.mode == "strict" ? refmon::ValidationMode::Strict
                               : refmon::ValidationMode::Relaxed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw refmon::ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

refmon::Configuration load_config(const RunOptions& opts) {
  return refmon::parse_config(read_file(opts.config_path));
}

// Feeds every event line of the log to `sink`. Malformed lines are reported
// and skipped; returns false if any line was malformed.
bool replay_events(std::istream& in, const std::function<void(const refmon::Event&)>& sink) {
  bool clean = true;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    try {
      if (auto event = refmon::parse_event_log_line(line)) sink(*event);
    } catch (const refmon::ParseError& e) {
      std::cerr << "error: line " << line_no << ": " << e.raw_message() << "\n";
      clean = false;
    }
  }
  return clean;
}

bool with_event_stream(const RunOptions& opts,
                       const std::function<void(const refmon::Event&)>& sink) {
  if (opts.events_path == "-") return replay_events(std::cin, sink);
  std::ifstream in(opts.events_path);
  if (!in) throw refmon::ParseError("cannot read '" + opts.events_path + "'");
  return replay_events(in, sink);
}

void write_journal(const std::string& path, const refmon::ValueSet& events) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw refmon::ParseError("cannot write '" + path + "'");
  for (const auto& v : events) out << refmon::render_event(3, v) << "\n";
}

int cmd_validate(const RunOptions& opts) {
  auto cfg = load_config(opts);
  auto report = refmon::validate(cfg, mode_of(opts));
  std::cout << "mode=" << opts.mode << "\n";
  std::cout << "monitored";
  for (int i = 0; i < 4; ++i)
    std::cout << " L" << i << "=" << report.monitored_domain[i].size();
  std::cout << "\n";
  std::cout << "violations=" << report.violations.size() << "\n";
  for (const auto& v : report.violations)
    std::cout << refmon::render_violation(v) << "\n";
  return report.ok() ? kExitOk : kExitFindings;
}

int cmd_classify(const RunOptions& opts) {
  auto cfg = load_config(opts);
  refmon::Monitor monitor(refmon::build_representations(cfg), cfg.policy);

  std::size_t pass = 0, fail = 0, conflict = 0, unspecified = 0;
  bool clean = with_event_stream(opts, [&](const refmon::Event& event) {
    auto record = monitor.observe(event);
    switch (record.verdict) {
      case refmon::Verdict::Pass: ++pass; break;
      case refmon::Verdict::Fail: ++fail; break;
      case refmon::Verdict::Conflict: ++conflict; break;
      case refmon::Verdict::Unspecified: ++unspecified; break;
    }
    std::cout << refmon::to_string(record.verdict) << "\t" << event.to_string()
              << "\t" << refmon::render_actions(record.actions) << "\n";
  });

  std::cout << "pass=" << pass << " fail=" << fail << " conflict=" << conflict
            << " unspecified=" << unspecified << "\n";

  auto journals = monitor.snapshot();
  write_journal(opts.fail_out, journals.fail[3]);
  write_journal(opts.conflict_out, journals.conflict[3]);

  if (!clean) return kExitInputError;
  return (fail + conflict) > 0 ? kExitFindings : kExitOk;
}

int cmd_trace(const RunOptions& opts, const std::string& src, const std::string& dst,
              const std::string& port) {
  auto cfg = load_config(opts);
  auto reps = refmon::build_representations(cfg);
  auto event = refmon::Event::packet(refmon::parse_ipv4(src), refmon::parse_ipv4(dst),
                                     refmon::parse_port(port));
  if (refmon::abstract_actions(reps, event).empty()) {
    std::cerr << "error: " << event.to_string() << " outside monitored sub-network\n";
    return kExitFindings;
  }
  auto record = refmon::trace(reps, cfg.policy, event);
  for (const auto& entry : record.chain)
    std::cout << "L" << entry.level << "\t" << entry.event.to_string() << "\t"
              << refmon::to_string(entry.status) << "\t"
              << refmon::render_actions(entry.actions) << "\n";
  return kExitOk;
}

int cmd_table(const RunOptions& opts) {
  auto cfg = load_config(opts);
  auto reps = refmon::build_representations(cfg);
  for (const auto& [event, verdict] :
       refmon::enumerate_verdicts(reps, cfg.policy, opts.level, mode_of(opts)))
    std::cout << event.to_string() << "\t" << refmon::to_string(verdict) << "\n";
  return kExitOk;
}

int cmd_check(const RunOptions& opts) {
  auto cfg = load_config(opts);
  refmon::Monitor monitor(refmon::build_representations(cfg), cfg.policy);

  std::optional<refmon::Event> last_monitored;
  bool clean = with_event_stream(opts, [&](const refmon::Event& event) {
    if (monitor.observe(event).verdict != refmon::Verdict::Unspecified)
      last_monitored = event;
  });

  if (last_monitored.has_value()) {
    // Walk the representative chain of the last monitored event so the
    // observed pairs are populated consistently across levels.
    auto record =
        refmon::trace(monitor.representations(), monitor.policy(), *last_monitored);
    for (const auto& entry : record.chain) refmon::get_status(monitor, entry.event);
  }

  auto violations = refmon::check_invariants(monitor);
  for (const auto& v : violations) std::cout << refmon::render_violation(v) << "\n";
  if (!clean) return kExitInputError;
  return violations.empty() ? kExitOk : kExitFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network policy-conformance monitor"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string trace_src, trace_dst, trace_port;

  auto add_common = [&opts](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "configuration file")->required();
    cmd->add_option("--mode", opts.mode, "validation mode")
        ->check(CLI::IsMember({"strict", "relaxed"}));
  };

  auto* validate = app.add_subcommand("validate", "check a configuration");
  add_common(validate);

  auto* classify = app.add_subcommand("classify", "classify an event log");
  add_common(classify);
  classify->add_option("--events", opts.events_path, "event log ('-' for stdin)");
  classify->add_option("--fail-out", opts.fail_out, "write the FAIL journal here");
  classify->add_option("--conflict-out", opts.conflict_out,
                       "write the CONFLICT journal here");

  auto* trace = app.add_subcommand("trace", "trace one event across levels");
  add_common(trace);
  trace->add_option("src", trace_src, "source address")->required();
  trace->add_option("dst", trace_dst, "destination address")->required();
  trace->add_option("port", trace_port, "destination port")->required();

  auto* table = app.add_subcommand("table", "print the verdict table of a level");
  add_common(table);
  table->add_option("--level", opts.level, "stack level 0..3")
      ->check(CLI::Range(0, 3));

  auto* check = app.add_subcommand("check", "replay a log and check invariants");
  add_common(check);
  check->add_option("--events", opts.events_path, "event log ('-' for stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(opts);
    if (app.got_subcommand(classify)) return cmd_classify(opts);
    if (app.got_subcommand(trace)) return cmd_trace(opts, trace_src, trace_dst, trace_port);
    if (app.got_subcommand(table)) return cmd_table(opts);
    return cmd_check(opts);
  } catch (const refmon::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
