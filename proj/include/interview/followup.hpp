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

#include "interview/domain.hpp"
#include "interview/grading.hpp"
#include "interview/templates.hpp"

namespace interview {

// A generated follow-up before the interviewee has answered it.
struct FollowupDraft {
  FollowupType type = FollowupType::Rationale;
  std::string question;
  std::string expected_answer;  // the generator's own answer, used when grading
};

// Follow-up type for the final seed outcome; total over every input.
FollowupType followup_type_for(const TaskProfile& profile, const GradeOutcome& final_grade,
                               double quality_threshold);

// True when `text` contains the gold answer as a standalone term. Single
// character answers are not checked.
bool discloses_answer(std::string_view text, std::string_view gold);

// Reference sentences of at least `min_words` words that `text` contains
// verbatim (case and whitespace insensitive).
std::vector<std::string> quoted_reference_sentences(std::string_view text,
                                                    std::string_view reference,
                                                    std::size_t min_words = 4);

// Each generator validates the interviewer's question, re-asks once with the
// reason, and throws ValidationError if the second question fails too.

FollowupDraft gen_rationale(const Problem& problem, std::string_view posed_question,
                            std::string_view model_solution,
                            std::span<const std::string> prior_followups, Judge& judge);

FollowupDraft gen_clarification(const Problem& problem, std::string_view posed_question,
                                ErrorType error_type, std::span<const ChatMessage> history,
                                std::span<const std::string> prior_followups, Judge& judge);

// `unsupported` may be empty; the question then asks for depth on a fact the
// answer already covers.
FollowupDraft gen_additional_facts(const Problem& problem, std::string_view posed_question,
                                   std::string_view model_output,
                                   std::span<const FactLabel> unsupported,
                                   std::span<const std::string> prior_followups, Judge& judge);

}  // namespace interview
