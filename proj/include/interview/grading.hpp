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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interview/agents.hpp"
#include "interview/domain.hpp"
#include "interview/templates.hpp"

namespace interview {

// The interviewer model together with the prompts it is driven by.
struct Judge {
  ChatAgent& agent;
  const TaskProfile& profile;
  int max_parse_retries = 2;
};

// "Interviewer: ..." / "Model: ..." lines for prompt payloads.
std::string format_dialogue(std::span<const ChatMessage> dialogue);

// What the grader needs to know about the posed question.
struct GradingContext {
  const Problem& problem;
  const ModifiedProblem* modified = nullptr;
  std::span<const ChatMessage> history;  // dialogue before the graded answer
};

// Binary judgment with the error taxonomy. With `exact_match_fast_path`, an
// answer whose normalized final answer equals the gold answer is accepted
// without a judge call.
GradeOutcome grade_binary(const GradingContext& ctx, std::string_view answer, Judge& judge,
                          bool exact_match_fast_path = true);

bool exact_match(std::string_view answer, std::string_view gold);

// Atomic facts of `answer`, labelled against the reference solution.
// Throws EmptyDecomposition for a blank answer or an empty judge list.
std::vector<FactLabel> decompose_and_label(const Problem& problem, std::string_view answer,
                                           Judge& judge);

// supported / total. Throws EmptyInput on an empty list.
double fact_precision(std::span<const FactLabel> labels);

// Folds a correction statement into earlier labels. The fact count must not
// change: one corrective re-ask, then CardinalityError. A blank correction
// returns `previous` unchanged without a judge call.
std::vector<FactLabel> merge_revision(const Problem& problem, std::span<const FactLabel> previous,
                                      std::string_view correction, std::string_view feedback,
                                      Judge& judge);

QualityScores assess_quality(const Problem& problem, std::string_view answer, Judge& judge);

// Binary judgment of a follow-up answer against the generator's expected
// answer and the problem's reference material.
GradeOutcome grade_followup(const Problem& problem, std::string_view followup_question,
                            std::string_view answer, std::string_view expected_answer,
                            Judge& judge);

}  // namespace interview
