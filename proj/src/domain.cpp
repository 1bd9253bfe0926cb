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

#include "interview/domain.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "interview/text.hpp"

namespace interview {
namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view s, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(E v, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<TaskKind, std::string_view> kTaskKinds[] = {
    {TaskKind::DeterministicAnswer, "deterministic"},
    {TaskKind::OpenEnded, "open_ended"},
};
constexpr std::pair<ModificationStrategy, std::string_view> kStrategies[] = {
    {ModificationStrategy::VariableMasking, "variable_masking"},
    {ModificationStrategy::QuestionRegeneration, "question_regeneration"},
};
constexpr std::pair<Role, std::string_view> kRoles[] = {
    {Role::System, "system"},
    {Role::User, "user"},
    {Role::Assistant, "assistant"},
};
constexpr std::pair<ErrorType, std::string_view> kErrorTypes[] = {
    {ErrorType::Concept, "Concept"},
    {ErrorType::Misinterpret, "Misinterpret"},
    {ErrorType::Calculation, "Calculation"},
    {ErrorType::NA, "N/A"},
};
constexpr std::pair<FeedbackType, std::string_view> kFeedbackTypes[] = {
    {FeedbackType::ConceptualGuidance, "Conceptual Guidance"},
    {FeedbackType::ErrorIdentificationCorrection, "Error Identification and Correction"},
    {FeedbackType::ProcessStrategyGuidance, "Process and Strategy Guidance"},
    {FeedbackType::PrecisionAccuracyEmphasis, "Precision and Accuracy Emphasis"},
    {FeedbackType::EncouragementAffirmation, "Encouragement and Affirmation"},
};
constexpr std::pair<FollowupType, std::string_view> kFollowupTypes[] = {
    {FollowupType::Rationale, "rationale"},
    {FollowupType::ClarificationConcept, "clarification_concept"},
    {FollowupType::ClarificationInterpretation, "clarification_interpretation"},
    {FollowupType::AdditionalFacts, "additional_facts"},
};
constexpr std::pair<Termination, std::string_view> kTerminations[] = {
    {Termination::SolvedEarly, "solved_early"},
    {Termination::RetriesExhausted, "retries_exhausted"},
    {Termination::QuestionBudgetExhausted, "question_budget_exhausted"},
    {Termination::AgentError, "agent_error"},
};
constexpr std::pair<RunMode, std::string_view> kModes[] = {
    {RunMode::Judge, "judge"},
    {RunMode::Interview, "interview"},
};
constexpr std::pair<GradingKind, std::string_view> kGradingKinds[] = {
    {GradingKind::Binary, "binary"},
    {GradingKind::FactPrecision, "fact_precision"},
};

// Lowercase letters of every word except "and"; punctuation and spaces drop.
std::string squash(std::string_view s) {
  std::string result;
  std::string word;
  auto flush = [&] {
    if (word != "and") result += word;
    word.clear();
  };
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
  return result;
}

}  // namespace

std::string_view to_string(TaskKind v) { return name_of(v, kTaskKinds); }
std::string_view to_string(ModificationStrategy v) { return name_of(v, kStrategies); }
std::string_view to_string(Role v) { return name_of(v, kRoles); }
std::string_view to_string(ErrorType v) { return name_of(v, kErrorTypes); }
std::string_view to_string(FeedbackType v) { return name_of(v, kFeedbackTypes); }
std::string_view to_string(FollowupType v) { return name_of(v, kFollowupTypes); }
std::string_view to_string(Termination v) { return name_of(v, kTerminations); }
std::string_view to_string(RunMode v) { return name_of(v, kModes); }
std::string_view to_string(GradingKind v) { return name_of(v, kGradingKinds); }

std::optional<TaskKind> parse_task_kind(std::string_view s) { return lookup(s, kTaskKinds); }
std::optional<ModificationStrategy> parse_strategy(std::string_view s) {
  return lookup(s, kStrategies);
}
std::optional<Role> parse_role(std::string_view s) { return lookup(s, kRoles); }

std::optional<ErrorType> parse_error_type(std::string_view s) {
  if (auto exact = lookup(s, kErrorTypes)) return exact;
  const std::string key = squash(s);
  if (key == "concept" || key == "conceptual") return ErrorType::Concept;
  if (key == "misinterpret" || key == "misinterpretation") return ErrorType::Misinterpret;
  if (key == "calculation") return ErrorType::Calculation;
  if (key == "na" || key == "none") return ErrorType::NA;
  return std::nullopt;
}

std::optional<FeedbackType> parse_feedback_type(std::string_view s) {
  const std::string key = squash(s);
  for (const auto& [value, name] : kFeedbackTypes) {
    if (squash(name) == key) return value;
  }
  return std::nullopt;
}

std::optional<FollowupType> parse_followup_type(std::string_view s) {
  return lookup(s, kFollowupTypes);
}
std::optional<Termination> parse_termination(std::string_view s) {
  return lookup(s, kTerminations);
}
std::optional<RunMode> parse_mode(std::string_view s) { return lookup(s, kModes); }
std::optional<GradingKind> parse_grading_kind(std::string_view s) {
  return lookup(s, kGradingKinds);
}

bool is_clarification(FollowupType t) {
  return t == FollowupType::ClarificationConcept || t == FollowupType::ClarificationInterpretation;
}

bool QualityScores::all_at_least(double threshold) const {
  return completeness >= threshold && redundancy >= threshold && readability >= threshold &&
         depth >= threshold;
}

double GradeOutcome::score() const {
  if (const auto* b = std::get_if<BinaryGrade>(&kind)) return b->correct ? 1.0 : 0.0;
  return std::get<FactPrecisionGrade>(kind).precision;
}

bool GradeOutcome::fully_correct(double quality_threshold) const {
  if (const auto* b = std::get_if<BinaryGrade>(&kind)) return b->correct;
  const auto& fp = std::get<FactPrecisionGrade>(kind);
  if (fp.precision < 1.0) return false;
  return !quality || quality->all_at_least(quality_threshold);
}

GradeOutcome GradeOutcome::binary(bool correct, std::optional<ErrorType> error_type,
                                  std::string raw) {
  GradeOutcome g;
  g.kind = BinaryGrade{correct};
  if (!correct) g.error_type = error_type.value_or(ErrorType::NA);
  g.raw_judgment = std::move(raw);
  return g;
}

GradeOutcome GradeOutcome::fact_precision(std::vector<FactLabel> facts,
                                          std::optional<QualityScores> quality,
                                          std::string raw) {
  GradeOutcome g;
  const auto supported = std::count_if(facts.begin(), facts.end(),
                                       [](const FactLabel& f) { return f.supported; });
  const double precision =
      facts.empty() ? 0.0 : static_cast<double>(supported) / static_cast<double>(facts.size());
  g.kind = FactPrecisionGrade{std::move(facts), precision};
  g.quality = quality;
  g.raw_judgment = std::move(raw);
  return g;
}

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> errors;
  if (max_retries < 0) errors.push_back("max_retries must be >= 0");
  if (max_questions < 1) errors.push_back("max_questions must be >= 1");
  if (followups_per_interview < 0) errors.push_back("followups_per_interview must be >= 0");
  if (interviewer_temperature < 0 || interviewee_temperature < 0) {
    errors.push_back("temperatures must be >= 0");
  }
  if (parallelism < 1) errors.push_back("parallelism must be >= 1");
  if (max_parse_retries < 0) errors.push_back("max_parse_retries must be >= 0");
  if (quality_threshold < 0 || quality_threshold > 1) {
    errors.push_back("quality_threshold must lie in [0, 1]");
  }
  if (mode == RunMode::Judge) {
    if (max_retries != 0) errors.push_back("judge mode requires max_retries = 0");
    if (followups_per_interview != 0) {
      errors.push_back("judge mode requires followups_per_interview = 0");
    }
    if (modify_seeds) errors.push_back("judge mode poses unmodified questions");
  }
  return errors;
}

RunConfig RunConfig::as_judge() const {
  RunConfig c = *this;
  c.mode = RunMode::Judge;
  c.max_retries = 0;
  c.followups_per_interview = 0;
  c.modify_seeds = false;
  return c;
}

std::vector<DatasetIssue> validate_dataset(std::span<const Problem> problems) {
  std::vector<DatasetIssue> issues;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const Problem& p = problems[i];
    if (p.id.empty()) {
      issues.push_back({DatasetIssue::Kind::EmptyId, i, "problem at index " + std::to_string(i) +
                                                            " has an empty id"});
    } else if (!seen.insert(p.id).second) {
      issues.push_back({DatasetIssue::Kind::DuplicateId, i, "duplicate problem id '" + p.id + "'"});
    }
    if (text::trim(p.question).empty()) {
      issues.push_back({DatasetIssue::Kind::EmptyQuestion, i, "problem '" + p.id +
                                                                  "' has an empty question"});
    }
    if (p.task_kind == TaskKind::DeterministicAnswer &&
        (!p.gold_answer || text::trim(*p.gold_answer).empty())) {
      issues.push_back({DatasetIssue::Kind::MissingGold, i, "problem '" + p.id +
                                                                "' has no gold answer"});
    }
    if (p.task_kind == TaskKind::OpenEnded && text::trim(p.reference_solution).empty()) {
      issues.push_back({DatasetIssue::Kind::MissingReference, i,
                        "open-ended problem '" + p.id + "' has no reference solution"});
    }
  }
  return issues;
}

std::vector<std::string> check_transcript(const InterviewTranscript& t, int max_retries,
                                          double quality_threshold) {
  std::vector<std::string> v;
  const int cap = 1 + max_retries;
  if (static_cast<int>(t.interactions.size()) > cap) v.push_back("too many interactions");
  const bool failed = t.termination == Termination::AgentError;
  for (std::size_t k = 0; k < t.interactions.size(); ++k) {
    const Interaction& it = t.interactions[k];
    if (it.attempt != static_cast<int>(k) + 1) v.push_back("attempt indices not 1..n");
    const bool ok = it.grade.fully_correct(quality_threshold);
    if (ok && it.grade.error_type) v.push_back("error_type on a correct interaction");
    const bool want_feedback = !ok && static_cast<int>(k) + 1 < cap;
    const bool last = k + 1 == t.interactions.size();
    if (it.feedback && !want_feedback) v.push_back("feedback on interaction that needs none");
    if (!it.feedback && want_feedback && !(failed && last)) {
      v.push_back("missing feedback on interaction " + std::to_string(k + 1));
    }
    if (ok && !last) v.push_back("revision continued after a fully correct answer");
  }
  if (!failed) {
    if (static_cast<int>(t.score_at.size()) != cap) v.push_back("score_at has wrong length");
    bool binary = !t.interactions.empty() && t.interactions.front().grade.is_binary();
    for (std::size_t n = 1; binary && n < t.score_at.size(); ++n) {
      if (t.score_at[n] < t.score_at[n - 1]) v.push_back("binary score_at decreases");
    }
  }
  return v;
}

}  // namespace interview
