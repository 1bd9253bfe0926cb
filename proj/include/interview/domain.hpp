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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace interview {

enum class TaskKind { DeterministicAnswer, OpenEnded };

enum class ModificationStrategy { VariableMasking, QuestionRegeneration };

enum class Role { System, User, Assistant };

enum class ErrorType { Concept, Misinterpret, Calculation, NA };

enum class FeedbackType {
  ConceptualGuidance,
  ErrorIdentificationCorrection,
  ProcessStrategyGuidance,
  PrecisionAccuracyEmphasis,
  EncouragementAffirmation,
};

enum class FollowupType { Rationale, ClarificationConcept, ClarificationInterpretation, AdditionalFacts };

enum class Termination { SolvedEarly, RetriesExhausted, QuestionBudgetExhausted, AgentError };

enum class RunMode { Judge, Interview };

enum class GradingKind { Binary, FactPrecision };

inline constexpr ErrorType kAllErrorTypes[] = {ErrorType::Concept, ErrorType::Misinterpret,
                                               ErrorType::Calculation, ErrorType::NA};
inline constexpr FollowupType kAllFollowupTypes[] = {
    FollowupType::Rationale, FollowupType::ClarificationConcept,
    FollowupType::ClarificationInterpretation, FollowupType::AdditionalFacts};

// Canonical wire spellings. Every parse_* accepts exactly what to_string
// emits, plus a few judge-friendly aliases where noted.
std::string_view to_string(TaskKind v);
std::string_view to_string(ModificationStrategy v);
std::string_view to_string(Role v);
std::string_view to_string(ErrorType v);
std::string_view to_string(FeedbackType v);
std::string_view to_string(FollowupType v);
std::string_view to_string(Termination v);
std::string_view to_string(RunMode v);
std::string_view to_string(GradingKind v);

std::optional<TaskKind> parse_task_kind(std::string_view s);
std::optional<ModificationStrategy> parse_strategy(std::string_view s);
std::optional<Role> parse_role(std::string_view s);
// Also accepts "NA", "N-A", "none" (case-insensitive) for ErrorType::NA.
std::optional<ErrorType> parse_error_type(std::string_view s);
// Case-insensitive; "and"/"&" and punctuation are ignored.
std::optional<FeedbackType> parse_feedback_type(std::string_view s);
std::optional<FollowupType> parse_followup_type(std::string_view s);
std::optional<Termination> parse_termination(std::string_view s);
std::optional<RunMode> parse_mode(std::string_view s);
std::optional<GradingKind> parse_grading_kind(std::string_view s);

bool is_clarification(FollowupType t);

struct Problem {
  std::string id;
  TaskKind task_kind = TaskKind::DeterministicAnswer;
  std::string question;
  std::string reference_solution;
  std::optional<std::string> gold_answer;
  std::optional<std::string> difficulty;

  bool operator==(const Problem&) const = default;
};

struct ModifiedProblem {
  std::string original_id;
  std::string modified_question;
  ModificationStrategy strategy = ModificationStrategy::VariableMasking;
  // Maps each masked value (or the new focus) back to the original.
  std::string explanation;

  bool operator==(const ModifiedProblem&) const = default;
};

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct FactLabel {
  std::string fact;
  bool supported = false;

  bool operator==(const FactLabel&) const = default;
};

// Each dimension is a fraction in [0, 1].
struct QualityScores {
  double completeness = 0.0;
  double redundancy = 0.0;
  double readability = 0.0;
  double depth = 0.0;

  bool all_at_least(double threshold) const;
  bool operator==(const QualityScores&) const = default;
};

struct BinaryGrade {
  bool correct = false;
  bool operator==(const BinaryGrade&) const = default;
};

struct FactPrecisionGrade {
  std::vector<FactLabel> facts;
  double precision = 0.0;
  bool operator==(const FactPrecisionGrade&) const = default;
};

struct GradeOutcome {
  std::variant<BinaryGrade, FactPrecisionGrade> kind;
  std::optional<ErrorType> error_type;
  std::optional<QualityScores> quality;
  std::string raw_judgment;

  bool is_binary() const { return std::holds_alternative<BinaryGrade>(kind); }
  // 0/1 for binary outcomes, the fact precision otherwise.
  double score() const;
  // Binary: the correct flag. Fact precision: precision == 1 and, when
  // quality was assessed, every dimension >= quality_threshold.
  bool fully_correct(double quality_threshold) const;

  static GradeOutcome binary(bool correct, std::optional<ErrorType> error_type = std::nullopt,
                             std::string raw = {});
  static GradeOutcome fact_precision(std::vector<FactLabel> facts,
                                     std::optional<QualityScores> quality = std::nullopt,
                                     std::string raw = {});

  bool operator==(const GradeOutcome&) const = default;
};

struct FeedbackRecord {
  std::string text;
  FeedbackType feedback_type = FeedbackType::ErrorIdentificationCorrection;

  bool operator==(const FeedbackRecord&) const = default;
};

struct FollowUp {
  FollowupType followup_type = FollowupType::Rationale;
  std::string question;
  std::string answer;
  GradeOutcome grade;

  bool operator==(const FollowUp&) const = default;
};

struct Interaction {
  int attempt = 1;  // 1-based
  std::string answer;
  GradeOutcome grade;
  std::optional<FeedbackRecord> feedback;

  bool operator==(const Interaction&) const = default;
};

// The optional Problem Set Up exchange where the interviewee asked for
// clarification before answering.
struct Clarification {
  std::string request;
  std::string reply;

  bool operator==(const Clarification&) const = default;
};

struct InterviewTranscript {
  Problem problem;
  std::optional<ModifiedProblem> modified;
  RunMode mode = RunMode::Interview;
  std::optional<Clarification> clarification;
  std::vector<Interaction> interactions;
  // score_at[n-1] is the score at interaction n, carried forward past the
  // last attempt actually made.
  std::vector<double> score_at;
  std::vector<FollowUp> followups;
  Termination termination = Termination::RetriesExhausted;
  std::string config_hash;
  std::string error;  // set when termination == AgentError

  // The question the interviewee actually saw.
  const std::string& posed_question() const {
    return modified ? modified->modified_question : problem.question;
  }

  bool operator==(const InterviewTranscript&) const = default;
};

struct RunConfig {
  int max_retries = 2;               // revisions after the first attempt
  int max_questions = 2;             // seed + follow-ups per session
  int followups_per_interview = 1;
  RunMode mode = RunMode::Interview;
  double interviewer_temperature = 0.0;
  double interviewee_temperature = 0.0;
  std::uint64_t random_seed = 0;
  int parallelism = 1;
  // Interview mode normally poses a modified seed; false poses the original.
  bool modify_seeds = true;
  int max_parse_retries = 2;
  double quality_threshold = 0.8;
  bool exact_match_fast_path = true;
  bool setup_clarification = true;

  // Number of interactions N in Score_seed@N.
  int interactions() const { return 1 + max_retries; }
  // Empty when valid.
  std::vector<std::string> validate() const;
  // Forces the single-turn baseline settings.
  RunConfig as_judge() const;
};

struct ScoreTable {
  std::vector<double> score_seed_at;  // index n-1
  double adapt = 0.0;
  std::optional<double> score_follow_total;
  std::map<FollowupType, double> score_follow_by_type;
  std::map<FollowupType, int> followup_count_by_type;
  int problem_count = 0;
  int followup_count = 0;
  int attrition_count = 0;

  bool operator==(const ScoreTable&) const = default;
};

struct DatasetIssue {
  enum class Kind { EmptyId, DuplicateId, EmptyQuestion, MissingGold, MissingReference };
  Kind kind;
  std::size_t index;
  std::string message;
};

std::vector<DatasetIssue> validate_dataset(std::span<const Problem> problems);

// Checks the structural transcript invariants; returns the violations.
std::vector<std::string> check_transcript(const InterviewTranscript& t, int max_retries,
                                          double quality_threshold);

}  // namespace interview
