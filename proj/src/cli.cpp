// Copyright 2026 The Interview Eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "interview/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "interview/analysis.hpp"
#include "interview/engine.hpp"
#include "interview/errors.hpp"
#include "interview/metrics.hpp"
#include "interview/report.hpp"
#include "interview/serialization.hpp"

namespace interview {

namespace fs = std::filesystem;

namespace {

const char* const kTranscripts = "transcripts.jsonl";
const char* const kScores = "scores.json";
const char* const kReportJson = "report.json";
const char* const kReportText = "report.txt";
const char* const kSummaries = "summaries.jsonl";
const char* const kModifications = "modifications.jsonl";

void reject_unknown(const Json& section, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!section.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : section.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_opt(const Json& section, const char* key, T& target, const std::string& where) {
  auto it = section.find(key);
  if (it == section.end() || it->is_null()) return;
  try {
    target = it->get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

AgentConfig agent_from_json(const Json& j, const std::string& where) {
  reject_unknown(j,
                 {"kind", "endpoint", "model", "max_tokens", "timeout_ms", "max_network_retries",
                  "credential_env", "max_in_flight", "initial_backoff_ms", "max_backoff_ms",
                  "rules", "queue", "exhaustion"},
                 where);
  AgentConfig a;
  std::string kind = "http";
  read_opt(j, "kind", kind, where);
  if (kind == "http") {
    a.kind = AgentConfig::Kind::Http;
  } else if (kind == "scripted") {
    a.kind = AgentConfig::Kind::Scripted;
  } else {
    throw ConfigError(where + ".kind must be \"http\" or \"scripted\"");
  }
  read_opt(j, "endpoint", a.http.endpoint, where);
  read_opt(j, "model", a.http.model, where);
  read_opt(j, "max_tokens", a.http.max_tokens, where);
  read_opt(j, "max_network_retries", a.http.max_network_retries, where);
  read_opt(j, "credential_env", a.http.credential_env, where);
  read_opt(j, "max_in_flight", a.http.max_in_flight, where);
  std::int64_t ms = a.http.timeout.count();
  read_opt(j, "timeout_ms", ms, where);
  a.http.timeout = std::chrono::milliseconds(ms);
  ms = a.http.initial_backoff.count();
  read_opt(j, "initial_backoff_ms", ms, where);
  a.http.initial_backoff = std::chrono::milliseconds(ms);
  ms = a.http.max_backoff.count();
  read_opt(j, "max_backoff_ms", ms, where);
  a.http.max_backoff = std::chrono::milliseconds(ms);

  read_opt(j, "queue", a.queue, where);
  if (auto it = j.find("rules"); it != j.end()) {
    if (!it->is_array()) throw ConfigError(where + ".rules must be an array");
    for (const Json& r : *it) {
      reject_unknown(r, {"pattern", "scope", "responses"}, where + ".rules[]");
      ScriptRule rule;
      read_opt(r, "pattern", rule.pattern, where + ".rules[]");
      read_opt(r, "responses", rule.responses, where + ".rules[]");
      std::string scope = "last_message";
      read_opt(r, "scope", scope, where + ".rules[]");
      if (scope == "last_message") {
        rule.scope = MatchScope::LastMessage;
      } else if (scope == "dialogue") {
        rule.scope = MatchScope::Dialogue;
      } else {
        throw ConfigError(where + ".rules[].scope must be \"last_message\" or \"dialogue\"");
      }
      a.rules.push_back(std::move(rule));
    }
  }
  std::string exhaustion = "error";
  read_opt(j, "exhaustion", exhaustion, where);
  if (exhaustion == "error") {
    a.exhaustion = Exhaustion::Error;
  } else if (exhaustion == "repeat_last") {
    a.exhaustion = Exhaustion::RepeatLast;
  } else {
    throw ConfigError(where + ".exhaustion must be \"error\" or \"repeat_last\"");
  }
  if (a.kind == AgentConfig::Kind::Http) {
    if (auto errors = a.http.validate(); !errors.empty()) {
      throw ConfigError(where + ": " + errors.front());
    }
  } else if (a.rules.empty() == a.queue.empty()) {
    throw ConfigError(where + ": a scripted agent needs exactly one of rules or queue");
  }
  return a;
}

Json agent_to_json(const AgentConfig& a) {
  if (a.kind == AgentConfig::Kind::Scripted) {
    Json rules = Json::array();
    for (const auto& r : a.rules) {
      rules.push_back({{"pattern", r.pattern},
                       {"scope", r.scope == MatchScope::LastMessage ? "last_message" : "dialogue"},
                       {"responses", r.responses}});
    }
    return Json{{"kind", "scripted"},
                {"rules", std::move(rules)},
                {"queue", a.queue},
                {"exhaustion", a.exhaustion == Exhaustion::Error ? "error" : "repeat_last"}};
  }
  return Json{{"kind", "http"},
              {"endpoint", a.http.endpoint},
              {"model", a.http.model},
              {"max_tokens", a.http.max_tokens}};
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::size_t calls_of(const std::shared_ptr<ChatAgent>& a, const std::shared_ptr<ChatAgent>& b) {
  return a->call_count() + (a == b ? 0 : b->call_count());
}

// Agent-produced text that must not be requested twice, keyed by purpose.
class SummaryCache {
 public:
  explicit SummaryCache(fs::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      const Json j = Json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key") || !j.contains("summary")) continue;
      entries_.emplace(j["key"].get<std::string>(), j["summary"].get<std::string>());
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const std::string& summary) {
    std::lock_guard lock(mu_);
    if (!entries_.emplace(key, summary).second) return;
    std::ofstream out(path_, std::ios::app);
    out << Json{{"key", key}, {"summary", summary}}.dump() << '\n';
  }

 private:
  fs::path path_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

struct Prepared {
  AppConfig config;
  TaskProfile profile;
  std::string hash;
  fs::path out;
};

Prepared prepare(const fs::path& config_path, const CommandOptions* overrides) {
  Prepared p;
  p.config = load_config(config_path);
  RunConfig& run = p.config.run;
  if (overrides) {
    if (overrides->parallelism) run.parallelism = *overrides->parallelism;
    if (overrides->seed) run.random_seed = *overrides->seed;
    if (overrides->max_retries) run.max_retries = *overrides->max_retries;
    if (overrides->followups) run.followups_per_interview = *overrides->followups;
    if (overrides->mode) run.mode = *overrides->mode;
    if (overrides->out) p.config.out = *overrides->out;
    if (overrides->dataset) p.config.dataset = *overrides->dataset;
  }
  if (run.mode == RunMode::Judge) run = run.as_judge();
  if (auto errors = run.validate(); !errors.empty()) {
    throw ConfigError("invalid run settings: " + errors.front());
  }
  p.profile = load_profile(p.config.task_profile, p.config.template_dir);
  p.hash = config_hash(p.config, p.profile);
  if (!p.config.out) throw ConfigError("no output directory (use --out or paths.out)");
  p.out = *p.config.out;
  return p;
}

std::vector<InterviewTranscript> load_run_transcripts(const fs::path& out_dir, std::ostream& log) {
  const fs::path path = out_dir / kTranscripts;
  if (!fs::exists(path)) throw ConfigError("no transcripts at " + path.string());
  TranscriptFile file = read_transcripts(path);
  if (file.damaged_lines > 0) {
    log << "warning: skipped " << file.damaged_lines << " damaged transcript line(s)\n";
  }
  std::set<std::string> hashes;
  for (const auto& t : file.transcripts) hashes.insert(t.config_hash);
  if (hashes.size() > 1) throw ConfigError(path.string() + " mixes runs with different settings");
  return std::move(file.transcripts);
}

int interactions_of(std::span<const InterviewTranscript> transcripts) {
  std::size_t n = 1;
  for (const auto& t : transcripts) n = std::max(n, t.score_at.size());
  return static_cast<int>(n);
}

Json scores_document(const ScoreTable& table, const std::string& hash) {
  Json j = to_json(table);
  j["config_hash"] = hash;
  return j;
}

// Session summaries, the overall summary and the report files.
std::size_t write_report(const Prepared& p, std::span<const InterviewTranscript> transcripts,
                         const ScoreTable& scores, ChatAgent& interviewer, std::ostream& log) {
  const std::size_t calls_before = interviewer.call_count();
  std::string summary = "(summaries disabled)";
  if (p.config.summaries && !transcripts.empty()) {
    SummaryCache cache(p.out / kSummaries);
    auto handle = interviewer.for_session();
    Judge judge{*handle, p.profile, p.config.run.max_parse_retries};
    std::vector<std::string> sessions;
    bool complete = true;
    for (const auto& t : transcripts) {
      const std::string key = "session:" + p.hash + ":" + t.problem.id;
      if (auto hit = cache.get(key)) {
        sessions.push_back(*hit);
        continue;
      }
      try {
        sessions.push_back(summarize_session(t, judge));
        cache.put(key, sessions.back());
      } catch (const Error& e) {
        log << "warning: no summary for problem " << t.problem.id << ": " << e.what() << '\n';
        complete = false;
      }
    }
    const std::string key = "report:" + sha256_hex(Json(sessions).dump()).substr(0, 16);
    if (auto hit = cache.get(key)) {
      summary = *hit;
    } else if (sessions.empty()) {
      summary = "(summary unavailable)";
    } else {
      try {
        summary = summarize_all(sessions, judge, p.config.summary_chunk_size);
        if (complete) cache.put(key, summary);
      } catch (const Error& e) {
        log << "warning: no overall summary: " << e.what() << '\n';
        summary = "(summary unavailable)";
      }
    }
  }
  std::optional<std::map<ErrorType, double>> freqs;
  std::optional<QualityScores> quality;
  if (p.profile.grading == GradingKind::Binary) {
    freqs = error_frequencies(transcripts);
  } else {
    quality = quality_means(transcripts);
    if (!quality) quality = QualityScores{};
  }
  const InterviewReport report =
      build_report(scores, freqs, pick_examples(transcripts, p.config.examples_per_type),
                   std::move(summary), quality);
  Json doc = to_json(report);
  doc["config_hash"] = p.hash;
  write_file_atomic(p.out / kReportJson, doc.dump(2) + "\n");
  write_file_atomic(p.out / kReportText,
                    render_score_table(scores, p.config.interviewee.http.model.empty()
                                                   ? "interviewee"
                                                   : p.config.interviewee.http.model) +
                        "\n" + render_report_text(report));
  return interviewer.call_count() - calls_before;
}

}  // namespace

// ---------------------------------------------------------------------------

AppConfig config_from_json(const Json& j, const fs::path& base_dir) {
  reject_unknown(j, {"agents", "run", "task", "report", "paths"}, "config");
  AppConfig c;
  const Json agents = j.value("agents", Json::object());
  reject_unknown(agents, {"interviewer", "interviewee"}, "agents");
  if (!agents.contains("interviewer") || !agents.contains("interviewee")) {
    throw ConfigError("agents needs both interviewer and interviewee");
  }
  c.interviewer = agent_from_json(agents["interviewer"], "agents.interviewer");
  c.interviewee = agent_from_json(agents["interviewee"], "agents.interviewee");

  const Json run = j.value("run", Json::object());
  reject_unknown(run,
                 {"max_retries", "max_questions", "followups_per_interview", "mode",
                  "interviewer_temperature", "interviewee_temperature", "random_seed",
                  "parallelism", "modify_seeds", "max_parse_retries", "quality_threshold",
                  "exact_match_fast_path", "setup_clarification", "max_attrition_rate"},
                 "run");
  RunConfig& r = c.run;
  read_opt(run, "max_retries", r.max_retries, "run");
  read_opt(run, "max_questions", r.max_questions, "run");
  read_opt(run, "followups_per_interview", r.followups_per_interview, "run");
  read_opt(run, "interviewer_temperature", r.interviewer_temperature, "run");
  read_opt(run, "interviewee_temperature", r.interviewee_temperature, "run");
  read_opt(run, "random_seed", r.random_seed, "run");
  read_opt(run, "parallelism", r.parallelism, "run");
  read_opt(run, "modify_seeds", r.modify_seeds, "run");
  read_opt(run, "max_parse_retries", r.max_parse_retries, "run");
  read_opt(run, "quality_threshold", r.quality_threshold, "run");
  read_opt(run, "exact_match_fast_path", r.exact_match_fast_path, "run");
  read_opt(run, "setup_clarification", r.setup_clarification, "run");
  read_opt(run, "max_attrition_rate", c.max_attrition_rate, "run");
  std::string mode = "interview";
  read_opt(run, "mode", mode, "run");
  auto parsed_mode = parse_mode(mode);
  if (!parsed_mode) throw ConfigError("run.mode must be \"judge\" or \"interview\"");
  r.mode = *parsed_mode;
  if (c.max_attrition_rate < 0 || c.max_attrition_rate > 1) {
    throw ConfigError("run.max_attrition_rate must lie in [0, 1]");
  }

  const Json task = j.value("task", Json::object());
  reject_unknown(task, {"profile", "template_dir"}, "task");
  read_opt(task, "profile", c.task_profile, "task");
  std::string template_dir;
  read_opt(task, "template_dir", template_dir, "task");
  if (!template_dir.empty()) c.template_dir = resolve(base_dir, template_dir);

  const Json report = j.value("report", Json::object());
  reject_unknown(report, {"chunk_size", "examples_per_type", "summaries"}, "report");
  read_opt(report, "chunk_size", c.summary_chunk_size, "report");
  read_opt(report, "examples_per_type", c.examples_per_type, "report");
  read_opt(report, "summaries", c.summaries, "report");
  if (c.summary_chunk_size < 1) throw ConfigError("report.chunk_size must be >= 1");

  const Json paths = j.value("paths", Json::object());
  reject_unknown(paths, {"dataset", "out"}, "paths");
  std::string dataset;
  std::string out;
  read_opt(paths, "dataset", dataset, "paths");
  read_opt(paths, "out", out, "paths");
  if (!dataset.empty()) c.dataset = resolve(base_dir, dataset);
  if (!out.empty()) c.out = resolve(base_dir, out);
  return c;
}

AppConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  const Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path.string());
  return config_from_json(j, path.parent_path());
}

Json hashed_settings(const AppConfig& c, const TaskProfile& profile) {
  const RunConfig& r = c.run;
  return Json{{"interviewer", agent_to_json(c.interviewer)},
              {"interviewee", agent_to_json(c.interviewee)},
              {"run",
               {{"max_retries", r.max_retries},
                {"max_questions", r.max_questions},
                {"followups_per_interview", r.followups_per_interview},
                {"mode", to_string(r.mode)},
                {"interviewer_temperature", r.interviewer_temperature},
                {"interviewee_temperature", r.interviewee_temperature},
                {"random_seed", r.random_seed},
                {"modify_seeds", r.modify_seeds},
                {"max_parse_retries", r.max_parse_retries},
                {"quality_threshold", r.quality_threshold},
                {"exact_match_fast_path", r.exact_match_fast_path},
                {"setup_clarification", r.setup_clarification}}},
              {"task", {{"profile", profile.name}, {"templates", profile.templates}}}};
}

std::string config_hash(const AppConfig& config, const TaskProfile& profile) {
  return sha256_hex(hashed_settings(config, profile).dump()).substr(0, 16);
}

std::shared_ptr<ChatAgent> make_agent(const AgentConfig& config, double temperature) {
  if (config.kind == AgentConfig::Kind::Scripted) {
    if (!config.rules.empty()) return ScriptedAgent::from_rules(config.rules, config.exhaustion);
    return ScriptedAgent::from_queue(config.queue, config.exhaustion);
  }
  AgentSpec spec = config.http;
  spec.temperature = temperature;
  return std::make_shared<HttpChatAgent>(std::move(spec));
}

std::vector<Problem> stratified_sample(std::span<const Problem> problems, std::size_t k,
                                       std::uint64_t seed) {
  if (k >= problems.size()) return {problems.begin(), problems.end()};
  std::map<std::string, std::vector<std::size_t>> levels;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    levels[problems[i].difficulty.value_or("")].push_back(i);
  }
  std::mt19937_64 rng(seed);
  for (auto& [level, idx] : levels) std::shuffle(idx.begin(), idx.end(), rng);

  // Equal shares; levels that run short hand their remainder to the rest.
  std::map<std::string, std::size_t> take;
  std::size_t remaining = k;
  std::vector<std::string> open;
  for (const auto& [level, idx] : levels) open.push_back(level);
  while (remaining > 0 && !open.empty()) {
    const std::size_t share = remaining / open.size();
    std::size_t extra = remaining % open.size();
    std::vector<std::string> still_open;
    std::size_t granted = 0;
    for (const auto& level : open) {
      const std::size_t capacity = levels[level].size() - take[level];
      std::size_t want = share + (extra > 0 ? 1 : 0);
      if (extra > 0) --extra;
      const std::size_t got = std::min(want, capacity);
      take[level] += got;
      granted += got;
      if (take[level] < levels[level].size()) still_open.push_back(level);
    }
    remaining -= granted;
    open = std::move(still_open);
    if (granted == 0) break;
  }
  std::vector<std::size_t> chosen;
  for (const auto& [level, idx] : levels) {
    chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take[level]));
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Problem> out;
  for (std::size_t i : chosen) out.push_back(problems[i]);
  return out;
}

PipelineResult cmd_run(const CommandOptions& options, std::ostream& log) {
  PipelineResult result;
  Prepared p;
  std::vector<Problem> problems;
  try {
    p = prepare(options.config, &options);
    if (!p.config.dataset) throw ConfigError("no dataset (use --dataset or paths.dataset)");
    problems = load_dataset(*p.config.dataset, p.profile.task_kind);
    if (auto issues = validate_dataset(problems); !issues.empty()) {
      for (const auto& issue : issues) log << "dataset: " << issue.message << '\n';
      throw ConfigError("dataset has " + std::to_string(issues.size()) + " invalid record(s)");
    }
    for (const auto& prob : problems) {
      if (prob.task_kind != p.profile.task_kind) {
        throw ConfigError("problem " + prob.id + " does not fit task profile " + p.profile.name);
      }
    }
    if (options.sample) problems = stratified_sample(problems, *options.sample, p.config.run.random_seed);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = 1;
    return result;
  }

  const fs::path transcripts_path = p.out / kTranscripts;
  std::map<std::string, InterviewTranscript> done;
  try {
    fs::create_directories(p.out);
    if (fs::exists(transcripts_path) && fs::file_size(transcripts_path) > 0) {
      if (!options.resume) {
        throw ConfigError(transcripts_path.string() +
                          " already exists; pass --resume or choose another --out");
      }
      TranscriptFile existing = read_transcripts(transcripts_path);
      if (existing.damaged_lines > 0) {
        log << "resume: dropping " << existing.damaged_lines << " damaged line(s)\n";
      }
      std::set<std::string> wanted;
      for (const auto& prob : problems) wanted.insert(prob.id);
      for (auto& t : existing.transcripts) {
        if (t.config_hash != p.hash || t.mode != p.config.run.mode) {
          throw ConfigError("existing transcripts were produced with different settings "
                            "(config hash " + t.config_hash + ", now " + p.hash + ")");
        }
        if (wanted.count(t.problem.id)) done.emplace(t.problem.id, std::move(t));
      }
      std::vector<InterviewTranscript> kept;
      for (const auto& prob : problems) {
        if (auto it = done.find(prob.id); it != done.end()) kept.push_back(it->second);
      }
      write_transcripts(transcripts_path, kept);
      log << "resume: " << done.size() << " of " << problems.size() << " problems already done\n";
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = 1;
    return result;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = 1;
    return result;
  }

  std::vector<Problem> todo;
  for (const auto& prob : problems) {
    if (!done.count(prob.id)) todo.push_back(prob);
  }

  auto interviewer = make_agent(p.config.interviewer, p.config.run.interviewer_temperature);
  auto interviewee = make_agent(p.config.interviewee, p.config.run.interviewee_temperature);
  ModificationCache cache(p.out / kModifications);
  std::ofstream stream(transcripts_path, std::ios::app);
  BatchHooks hooks;
  hooks.cache = &cache;
  hooks.config_hash = p.hash;
  hooks.on_complete = [&](std::size_t, const InterviewTranscript& t) {
    stream << to_jsonl_line(t) << '\n';
    stream.flush();
  };
  std::vector<InterviewTranscript> fresh;
  try {
    fresh = run_batch(todo, *interviewer, *interviewee, p.profile, p.config.run, hooks);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = 1;
    return result;
  }
  stream.close();

  std::vector<InterviewTranscript> all;
  std::size_t next_fresh = 0;
  for (const auto& prob : problems) {
    if (auto it = done.find(prob.id); it != done.end()) {
      all.push_back(std::move(it->second));
    } else {
      all.push_back(std::move(fresh[next_fresh++]));
    }
  }
  write_transcripts(transcripts_path, all);
  result.transcripts = all.size();

  const ScoreTable scores = compute_scores(all, p.config.run.interactions());
  write_file_atomic(p.out / kScores, scores_document(scores, p.hash).dump(2) + "\n");
  try {
    write_report(p, all, scores, *interviewer, log);
  } catch (const Error& e) {
    log << "error: report: " << e.what() << '\n';
    result.exit_code = 1;
  }
  result.agent_calls = calls_of(interviewer, interviewee);

  const int failed = scores.attrition_count;
  for (const auto& t : all) {
    if (t.termination == Termination::AgentError) {
      log << "problem " << t.problem.id << " failed: " << t.error << '\n';
    }
  }
  if (!all.empty() &&
      static_cast<double>(failed) / static_cast<double>(all.size()) > p.config.max_attrition_rate) {
    log << "error: " << failed << " of " << all.size() << " sessions failed\n";
    result.exit_code = 2;
  }
  log << "wrote " << all.size() << " transcripts to " << transcripts_path.string() << '\n';
  return result;
}

PipelineResult cmd_judge(CommandOptions options, std::ostream& log) {
  options.mode = RunMode::Judge;
  return cmd_run(options, log);
}

int cmd_metrics(const fs::path& out_dir, std::ostream& stdout_stream, std::ostream& log) {
  try {
    const auto transcripts = load_run_transcripts(out_dir, log);
    const ScoreTable scores = compute_scores(transcripts, interactions_of(transcripts));
    const std::string hash = transcripts.empty() ? "" : transcripts.front().config_hash;
    write_file_atomic(out_dir / kScores, scores_document(scores, hash).dump(2) + "\n");
    stdout_stream << render_score_table(scores, "interviewee");
    return 0;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

PipelineResult cmd_report(const fs::path& config_path, const fs::path& out_dir, std::ostream& log) {
  PipelineResult result;
  try {
    CommandOptions overrides;
    overrides.config = config_path;
    overrides.out = out_dir;
    Prepared p = prepare(config_path, &overrides);
    auto transcripts = load_run_transcripts(out_dir, log);
    if (!transcripts.empty() && transcripts.front().config_hash != p.hash) {
      // The stored mode decides between the run and judge settings.
      overrides.mode = transcripts.front().mode;
      p = prepare(config_path, &overrides);
      if (transcripts.front().config_hash != p.hash) {
        throw ConfigError("transcripts were produced with different settings than " +
                          config_path.string());
      }
    }
    const ScoreTable scores = compute_scores(transcripts, interactions_of(transcripts));
    auto interviewer = make_agent(p.config.interviewer, p.config.run.interviewer_temperature);
    result.agent_calls = write_report(p, transcripts, scores, *interviewer, log);
    result.transcripts = transcripts.size();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = 1;
  }
  return result;
}

namespace {

// A score given directly or as the Score_seed@n of a scores.json file.
double score_entry(const Json& v, const fs::path& base, int n) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ConfigError("score entries must be numbers or scores.json paths");
  const ScoreTable t = score_table_from_json(Json::parse(read_file(resolve(base, v.get<std::string>()))));
  if (n < 1 || static_cast<std::size_t>(n) > t.score_seed_at.size()) {
    throw ConfigError("scores file has no Score_seed@" + std::to_string(n));
  }
  return t.score_seed_at[static_cast<std::size_t>(n - 1)];
}

ScoreTable table_entry(const Json& v, const fs::path& base) {
  if (!v.is_string()) throw ConfigError("run entries must be scores.json paths");
  return score_table_from_json(Json::parse(read_file(resolve(base, v.get<std::string>()))));
}

Json load_manifest(const fs::path& path) {
  const Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("manifest is not valid JSON: " + path.string());
  return j;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& o, std::ostream& stdout_stream, std::ostream& log) {
  try {
    const fs::path dir = o.out / "analysis";
    if (o.analysis == "verbosity") {
      const auto transcripts = load_run_transcripts(o.input, log);
      const int max_n = o.n > 0 ? o.n : interactions_of(transcripts);
      write_file_atomic(dir / "verbosity.csv", verbosity_csv(transcripts, max_n));
      for (int n = o.n > 0 ? o.n : 1; n <= max_n; ++n) {
        try {
          const Correlation c = verbosity_correlation(transcripts, n);
          stdout_stream << "interaction " << n << ": r = " << fmt(c.r) << ", p = " << fmt(c.p)
                        << ", n = " << c.count << '\n';
        } catch (const Error& e) {
          stdout_stream << "interaction " << n << ": " << e.what() << '\n';
        }
      }
      return 0;
    }
    const Json manifest = load_manifest(o.input);
    const fs::path base = o.input.parent_path();
    const int n = o.n > 0 ? o.n : 1;
    if (o.analysis == "self-enhancement") {
      std::map<RunKey, ScoreTable> runs;
      for (const Json& row : manifest.at("runs")) {
        runs[{row.at("interviewer").get<std::string>(), row.at("interviewee").get<std::string>()}] =
            table_entry(row.at("scores"), base);
      }
      const SelfEnhancement s = self_enhancement_matrix(runs, n);
      write_file_atomic(dir / "self_enhancement.csv", self_enhancement_csv(s));
      for (const auto& [model, delta] : s.self_delta) {
        stdout_stream << model << ": self delta " << fmt(delta) << '\n';
      }
      return 0;
    }
    if (o.analysis == "robustness") {
      std::map<std::string, std::vector<ScoreTable>> runs;
      for (const auto& [setting, list] : manifest.at("settings").items()) {
        for (const Json& entry : list) runs[setting].push_back(table_entry(entry, base));
      }
      const Robustness r = robustness_std(runs, n);
      write_file_atomic(dir / "robustness.csv", robustness_csv(r));
      for (const auto& [setting, sd] : r.std_by_setting) stdout_stream << setting << ": " << fmt(sd) << '\n';
      stdout_stream << "mean: " << fmt(r.grand_mean) << '\n';
      return 0;
    }
    if (o.analysis == "contamination") {
      std::map<std::string, double> judge;
      std::map<std::string, double> interview;
      for (const auto& [id, v] : manifest.at("judge").items()) judge[id] = score_entry(v, base, n);
      for (const auto& [id, v] : manifest.at("interview").items()) interview[id] = score_entry(v, base, n);
      const auto c = contamination_compare(judge, interview,
                                           manifest.at("uncontaminated").get<std::vector<std::string>>(),
                                           manifest.at("contaminated").get<std::vector<std::string>>());
      write_file_atomic(dir / "contamination.csv", comparison_csv(c));
      stdout_stream << "judge gap: " << fmt(c.judge_gap) << ", interview gap: " << fmt(c.interview_gap)
                    << '\n';
      return 0;
    }
    throw ConfigError("unknown analysis '" + o.analysis + "'");
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    log << "error: malformed manifest: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Interview-style evaluation of chat models"};
  app.require_subcommand(1);

  CommandOptions run_opts;
  std::string mode_text;
  auto add_run_flags = [&](CLI::App* cmd, bool with_mode) {
    cmd->add_option("--config", run_opts.config, "Configuration file")->required();
    cmd->add_option("--dataset", run_opts.dataset, "Dataset JSONL");
    cmd->add_option("--out", run_opts.out, "Output directory");
    if (with_mode) {
      cmd->add_option("--mode", mode_text, "judge or interview")
          ->check(CLI::IsMember({"judge", "interview"}));
    }
    cmd->add_flag("--resume", run_opts.resume, "Skip problems already in the output");
    cmd->add_option("--parallelism", run_opts.parallelism, "Concurrent sessions")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", run_opts.seed, "Random seed");
    cmd->add_option("--max-retries", run_opts.max_retries, "Revisions after the first attempt")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--followups", run_opts.followups, "Follow-up questions per interview")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--sample", run_opts.sample, "Stratified sample size");
  };
  CLI::App* run = app.add_subcommand("run", "Run interviews and write all artifacts");
  add_run_flags(run, true);
  CLI::App* judge = app.add_subcommand("judge", "Single-turn baseline on original questions");
  add_run_flags(judge, false);

  fs::path out_dir;
  fs::path config_path;
  CLI::App* metrics = app.add_subcommand("metrics", "Recompute scores from stored transcripts");
  metrics->add_option("--out", out_dir, "Output directory of a run")->required();
  CLI::App* report = app.add_subcommand("report", "Rebuild the interview report");
  report->add_option("--config", config_path, "Configuration file")->required();
  report->add_option("--out", out_dir, "Output directory of a run")->required();

  AnalyzeOptions analyze_opts;
  CLI::App* analyze = app.add_subcommand("analyze", "Reliability and contamination analyses");
  analyze->require_subcommand(1);
  CLI::App* verbosity = analyze->add_subcommand("verbosity", "Answer length vs score");
  verbosity->add_option("--out", analyze_opts.input, "Output directory of a run")->required();
  verbosity->add_option("--interaction", analyze_opts.n, "Interaction index (default: all)");
  for (const char* name : {"self-enhancement", "robustness", "contamination"}) {
    CLI::App* sub = analyze->add_subcommand(name, std::string("Run the ") + name + " analysis");
    sub->add_option("--manifest", analyze_opts.input, "Manifest JSON")->required();
    sub->add_option("--out", analyze_opts.out, "Directory for analysis/*.csv")->required();
    sub->add_option("--n", analyze_opts.n, "Interaction index (default 1)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (!mode_text.empty()) run_opts.mode = parse_mode(mode_text);

  if (run->parsed()) return cmd_run(run_opts, std::cerr).exit_code;
  if (judge->parsed()) return cmd_judge(run_opts, std::cerr).exit_code;
  if (metrics->parsed()) return cmd_metrics(out_dir, std::cout, std::cerr);
  if (report->parsed()) return cmd_report(config_path, out_dir, std::cerr).exit_code;
  for (CLI::App* sub : analyze->get_subcommands()) {
    analyze_opts.analysis = sub->get_name();
    if (analyze_opts.analysis == "verbosity") analyze_opts.out = analyze_opts.input;
    return cmd_analyze(analyze_opts, std::cout, std::cerr);
  }
  return 1;
}

}  // namespace interview
