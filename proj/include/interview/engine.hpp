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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interview/agents.hpp"
#include "interview/domain.hpp"
#include "interview/grading.hpp"
#include "interview/seedprep.hpp"
#include "interview/templates.hpp"

namespace interview {

enum class Phase { Setup, FeedbackRevision, FollowUp, Done };

std::string_view to_string(Phase p);

// Setup -> FeedbackRevision -> FollowUp -> Done; FollowUp may be skipped.
bool can_transition(Phase from, Phase to);

struct SessionState {
  Phase phase = Phase::Setup;
  int attempt = 0;
  int questions_asked = 0;
  std::vector<ChatMessage> dialogue;

  // Throws ProtocolError on a transition can_transition rejects.
  void advance(Phase next);
};

// Feedback on a not fully correct answer. Rejects (and re-asks about) text
// that contains the gold answer.
FeedbackRecord generate_feedback(const GradingContext& ctx, std::string_view answer,
                                 const GradeOutcome& grade,
                                 std::span<const FeedbackRecord> previous, Judge& judge);

// True when the interviewer classifies `reply` as a request for
// clarification rather than an answer.
bool is_clarification_request(std::string_view posed_question, std::string_view reply,
                              Judge& judge);

std::string answer_clarification(const ModifiedProblem& modified, std::string_view request,
                                 Judge& judge);

// One interview session. Agent and parse failures end the session with
// termination AgentError; the transcript is returned either way.
// Throws ConfigError when `config` is invalid or `modified` does not fit the
// mode (Judge mode never takes a modification).
InterviewTranscript run_interview(const Problem& problem,
                                  const std::optional<ModifiedProblem>& modified,
                                  ChatAgent& interviewer, ChatAgent& interviewee,
                                  const TaskProfile& profile, const RunConfig& config);

struct BatchHooks {
  // Shared modification cache; a private one is used when null.
  ModificationCache* cache = nullptr;
  std::string config_hash;
  // Called once per finished transcript, serialized, in completion order.
  std::function<void(std::size_t index, const InterviewTranscript&)> on_complete;
};

// The seed a session should pose: a modification in Interview mode (cached
// by problem id, strategy and random seed), nothing otherwise.
std::optional<ModifiedProblem> prepare_seed(const Problem& problem, ChatAgent& interviewer,
                                            const TaskProfile& profile, const RunConfig& config,
                                            ModificationCache& cache);

// Runs every problem on up to config.parallelism threads. Each session gets
// its own agent handles from for_session(). Output order is input order.
// Seed preparation failures are recorded as AgentError transcripts.
std::vector<InterviewTranscript> run_batch(std::span<const Problem> problems,
                                           const ChatAgent& interviewer,
                                           const ChatAgent& interviewee,
                                           const TaskProfile& profile, const RunConfig& config,
                                           const BatchHooks& hooks = {});

}  // namespace interview
