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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interview/agents.hpp"
#include "interview/domain.hpp"
#include "interview/templates.hpp"

namespace interview {

struct AgentConfig {
  enum class Kind { Http, Scripted };
  Kind kind = Kind::Http;
  AgentSpec http;
  std::vector<ScriptRule> rules;
  std::vector<std::string> queue;
  Exhaustion exhaustion = Exhaustion::Error;
};

struct AppConfig {
  AgentConfig interviewer;
  AgentConfig interviewee;
  RunConfig run;
  // Fraction of failed sessions above which a run exits with status 2.
  double max_attrition_rate = 0.1;
  std::string task_profile = "math";
  std::optional<std::filesystem::path> template_dir;
  int summary_chunk_size = 20;
  int examples_per_type = 2;
  bool summaries = true;
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> out;
};

// JSON document with sections agents, run, task, report and paths. Relative
// paths resolve against `base_dir`. Unknown keys are rejected.
AppConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
AppConfig load_config(const std::filesystem::path& path);

// Settings that determine transcript content, in canonical form. Excludes
// parallelism, paths and report settings.
nlohmann::json hashed_settings(const AppConfig& config, const TaskProfile& profile);

// First 16 hex digits of the SHA-256 of the canonical settings.
std::string config_hash(const AppConfig& config, const TaskProfile& profile);

std::shared_ptr<ChatAgent> make_agent(const AgentConfig& config, double temperature);

// Seeded sample of k problems spread evenly over difficulty levels (levels
// that run short give their share to the others). Keeps dataset order.
std::vector<Problem> stratified_sample(std::span<const Problem> problems, std::size_t k,
                                       std::uint64_t seed);

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> out;
  std::optional<RunMode> mode;
  bool resume = false;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_retries;
  std::optional<int> followups;
  std::optional<std::size_t> sample;
};

struct PipelineResult {
  int exit_code = 0;
  std::size_t agent_calls = 0;   // interviewer and interviewee calls made
  std::size_t transcripts = 0;   // transcripts in the output file
};

// Exit codes: 0 success, 1 invalid config, dataset or output, 2 attrition
// above the configured cap.
PipelineResult cmd_run(const CommandOptions& options, std::ostream& log);
PipelineResult cmd_judge(CommandOptions options, std::ostream& log);

// Recomputes scores.json from <out>/transcripts.jsonl; no agent calls.
int cmd_metrics(const std::filesystem::path& out_dir, std::ostream& stdout_stream, std::ostream& log);

// Recomputes scores and writes report.json and report.txt. Session and
// report summaries are cached in <out>/summaries.jsonl.
PipelineResult cmd_report(const std::filesystem::path& config_path,
                          const std::filesystem::path& out_dir, std::ostream& log);

struct AnalyzeOptions {
  std::string analysis;  // verbosity, self-enhancement, robustness, contamination
  std::filesystem::path input;  // out dir (verbosity) or manifest JSON
  std::filesystem::path out;    // directory receiving analysis/*.csv
  int n = 0;                    // interaction index; 0 means the default
};

int cmd_analyze(const AnalyzeOptions& options, std::ostream& stdout_stream, std::ostream& log);

// Full command line entry point.
int run_cli(int argc, char** argv);

}  // namespace interview
