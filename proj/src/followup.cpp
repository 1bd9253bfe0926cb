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

#include "interview/followup.hpp"

#include <algorithm>
#include <functional>

#include "interview/errors.hpp"
#include "interview/serialization.hpp"
#include "interview/text.hpp"

namespace interview {
namespace {

using Check = std::function<std::optional<std::string>(const std::string& question)>;

std::optional<std::string> check_novel(const std::string& question,
                                       std::span<const std::string> prior) {
  for (const auto& p : prior) {
    if (text::trim(p) == text::trim(question)) return "it repeats an earlier follow-up question";
  }
  return std::nullopt;
}

FollowupDraft ask_followup(FollowupType type, const std::string& prompt, const Check& check,
                           Judge& judge) {
  static const StructuredSchema schema{
      {{"question", JsonKind::String}, {"answer", JsonKind::String, false}},
      [](const Json& v) -> std::optional<std::string> {
        if (text::trim(v["question"].get<std::string>()).empty()) return "question is empty";
        return std::nullopt;
      }};
  std::vector<ChatMessage> messages{{Role::User, prompt}};
  std::string reason;
  for (int round = 0; round < 2; ++round) {
    const StructuredReply reply =
        chat_structured(judge.agent, messages, schema, judge.max_parse_retries);
    FollowupDraft draft{type, std::string(text::trim(reply.value["question"].get<std::string>())),
                        reply.value.value("answer", std::string())};
    auto violation = check(draft.question);
    if (!violation) return draft;
    reason = *violation;
    messages.push_back({Role::Assistant, reply.raw});
    messages.push_back({Role::User, "That question cannot be used because " + reason +
                                        ". Write a different question, as JSON."});
  }
  throw ValidationError("follow-up question rejected twice: " + reason);
}

std::string prior_list(std::span<const std::string> prior) {
  if (prior.empty()) return "(none)";
  std::string out;
  for (const auto& p : prior) out += "\n- " + p;
  return out;
}

}  // namespace

FollowupType followup_type_for(const TaskProfile& profile, const GradeOutcome& final_grade,
                               double quality_threshold) {
  return profile.followup_for(grade_status(final_grade, quality_threshold));
}

bool discloses_answer(std::string_view text_in, std::string_view gold) {
  const std::string_view g = text::trim(gold);
  if (g.size() < 2) return false;
  return text::contains_term(text_in, g, /*case_sensitive=*/false);
}

std::vector<std::string> quoted_reference_sentences(std::string_view text_in,
                                                    std::string_view reference,
                                                    std::size_t min_words) {
  const std::string haystack = text::to_lower(text::collapse_whitespace(text_in));
  std::vector<std::string> quoted;
  for (const auto& sentence : text::sentences(reference)) {
    if (text::whitespace_token_count(sentence) < min_words) continue;
    std::string needle = text::to_lower(text::collapse_whitespace(sentence));
    // Matching ignores the sentence's closing punctuation.
    while (!needle.empty() && (needle.back() == '.' || needle.back() == '!' || needle.back() == '?')) {
      needle.pop_back();
    }
    if (haystack.find(needle) != std::string::npos) quoted.push_back(sentence);
  }
  return quoted;
}

FollowupDraft gen_rationale(const Problem& problem, std::string_view posed_question,
                            std::string_view model_solution,
                            std::span<const std::string> prior_followups, Judge& judge) {
  const std::string prompt = judge.profile.render(
      followup_template_name(FollowupType::Rationale),
      {{"question", std::string(posed_question)},
       {"answer", problem.gold_answer.value_or("")},
       {"solution", problem.reference_solution},
       {"prior_followups", prior_list(prior_followups)},
       {"model_solution", std::string(model_solution)}});
  const std::string gold = problem.gold_answer.value_or("");
  return ask_followup(
      FollowupType::Rationale, prompt,
      [&](const std::string& q) -> std::optional<std::string> {
        if (auto v = check_novel(q, prior_followups)) return v;
        if (discloses_answer(q, gold)) return std::string("it reveals the correct answer");
        return std::nullopt;
      },
      judge);
}

FollowupDraft gen_clarification(const Problem& problem, std::string_view posed_question,
                                ErrorType error_type, std::span<const ChatMessage> history,
                                std::span<const std::string> prior_followups, Judge& judge) {
  const GradeOutcome as_graded = GradeOutcome::binary(false, error_type);
  const FollowupType type =
      judge.profile.followup_for(grade_status(as_graded, /*quality_threshold=*/1.0));
  const std::string prompt = judge.profile.render(
      followup_template_name(type), {{"question", std::string(posed_question)},
                                     {"answer", problem.gold_answer.value_or("")},
                                     {"solution", problem.reference_solution},
                                     {"history", format_dialogue(history)},
                                     {"prior_followups", prior_list(prior_followups)},
                                     {"error_type", std::string(to_string(error_type))}});
  const std::string gold = problem.gold_answer.value_or("");
  const std::string label(to_string(error_type));
  return ask_followup(
      type, prompt,
      [&](const std::string& q) -> std::optional<std::string> {
        if (auto v = check_novel(q, prior_followups)) return v;
        if (discloses_answer(q, gold)) return std::string("it reveals the correct answer");
        if (text::contains_term(q, "error type", false) ||
            (error_type != ErrorType::NA && text::contains_term(q, label))) {
          return std::string("it discloses the error type");
        }
        return std::nullopt;
      },
      judge);
}

FollowupDraft gen_additional_facts(const Problem& problem, std::string_view posed_question,
                                   std::string_view model_output,
                                   std::span<const FactLabel> unsupported,
                                   std::span<const std::string> prior_followups, Judge& judge) {
  std::string flagged;
  for (const auto& f : unsupported) flagged += "\n- " + f.fact;
  if (flagged.empty()) {
    flagged = "(none; every fact in the answer is supported, so ask for an example or a more "
              "detailed explanation of one of them)";
  }
  const std::string prompt = judge.profile.render(
      followup_template_name(FollowupType::AdditionalFacts),
      {{"question", std::string(posed_question)},
       {"solution", problem.reference_solution},
       {"model_output", std::string(model_output)},
       {"prior_followups", prior_list(prior_followups)},
       {"unsupported_facts", flagged}});
  return ask_followup(
      FollowupType::AdditionalFacts, prompt,
      [&](const std::string& q) -> std::optional<std::string> {
        if (auto v = check_novel(q, prior_followups)) return v;
        if (!quoted_reference_sentences(q, problem.reference_solution).empty()) {
          return std::string("it quotes a sentence of the reference solution");
        }
        return std::nullopt;
      },
      judge);
}

}  // namespace interview
