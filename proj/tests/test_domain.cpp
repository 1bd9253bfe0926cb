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

#include <gtest/gtest.h>

#include <algorithm>

#include "interview/domain.hpp"

namespace interview {
namespace {

TEST(Domain, EnumSpellingsRoundTrip) {
  for (ErrorType e : kAllErrorTypes) EXPECT_EQ(parse_error_type(to_string(e)), e);
  for (FollowupType f : kAllFollowupTypes) EXPECT_EQ(parse_followup_type(to_string(f)), f);
  for (RunMode m : {RunMode::Judge, RunMode::Interview}) EXPECT_EQ(parse_mode(to_string(m)), m);
  for (Termination t : {Termination::SolvedEarly, Termination::RetriesExhausted,
                        Termination::QuestionBudgetExhausted, Termination::AgentError}) {
    EXPECT_EQ(parse_termination(to_string(t)), t);
  }
}

TEST(Domain, ErrorTypeAliases) {
  EXPECT_EQ(parse_error_type("NA"), ErrorType::NA);
  EXPECT_EQ(parse_error_type("none"), ErrorType::NA);
  EXPECT_EQ(parse_error_type("conceptual"), ErrorType::Concept);
  EXPECT_FALSE(parse_error_type("typo"));
}

TEST(Domain, FeedbackTypeIgnoresCaseAndConnectives) {
  EXPECT_EQ(parse_feedback_type("error identification & correction"),
            FeedbackType::ErrorIdentificationCorrection);
  EXPECT_EQ(parse_feedback_type("Encouragement and Affirmation"), FeedbackType::EncouragementAffirmation);
  EXPECT_FALSE(parse_feedback_type("Praise"));
}

TEST(Domain, GradeScores) {
  EXPECT_EQ(GradeOutcome::binary(true).score(), 1.0);
  EXPECT_EQ(GradeOutcome::binary(false, ErrorType::Concept).score(), 0.0);
  const auto fp = GradeOutcome::fact_precision({{"a", true}, {"b", false}, {"c", true}, {"d", true}});
  EXPECT_EQ(fp.score(), 0.75);
  EXPECT_FALSE(fp.fully_correct(0.8));
  const auto full = GradeOutcome::fact_precision({{"a", true}}, QualityScores{0.9, 0.9, 0.7, 0.9});
  EXPECT_FALSE(full.fully_correct(0.8));
  EXPECT_TRUE(full.fully_correct(0.7));
}

TEST(Domain, RunConfigValidation) {
  RunConfig c;
  EXPECT_TRUE(c.validate().empty());
  EXPECT_EQ(c.interactions(), 3);
  c.max_retries = -1;
  EXPECT_FALSE(c.validate().empty());
  c = RunConfig{};
  c.quality_threshold = 1.5;
  EXPECT_FALSE(c.validate().empty());
  c = RunConfig{};
  c.mode = RunMode::Judge;
  EXPECT_FALSE(c.validate().empty());
  const RunConfig j = RunConfig{}.as_judge();
  EXPECT_TRUE(j.validate().empty());
  EXPECT_EQ(j.interactions(), 1);
  EXPECT_EQ(j.followups_per_interview, 0);
  EXPECT_FALSE(j.modify_seeds);
}

TEST(Domain, DatasetValidation) {
  std::vector<Problem> ps(3);
  ps[0] = {"a", TaskKind::DeterministicAnswer, "q", "s", "1", std::nullopt};
  ps[1] = {"a", TaskKind::DeterministicAnswer, "q", "s", std::nullopt, std::nullopt};
  ps[2] = {"", TaskKind::OpenEnded, "", "", std::nullopt, std::nullopt};
  const auto issues = validate_dataset(ps);
  auto has = [&](DatasetIssue::Kind k) {
    return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.kind == k; });
  };
  EXPECT_TRUE(has(DatasetIssue::Kind::DuplicateId));
  EXPECT_TRUE(has(DatasetIssue::Kind::MissingGold));
  EXPECT_TRUE(has(DatasetIssue::Kind::EmptyId));
  EXPECT_TRUE(has(DatasetIssue::Kind::EmptyQuestion));
  EXPECT_TRUE(has(DatasetIssue::Kind::MissingReference));
}

TEST(Domain, CheckTranscriptFlagsViolations) {
  InterviewTranscript t;
  t.interactions.push_back({1, "a", GradeOutcome::binary(false, ErrorType::Concept), FeedbackRecord{"f"}});
  t.interactions.push_back({2, "b", GradeOutcome::binary(true), std::nullopt});
  t.score_at = {0.0, 1.0, 1.0};
  t.termination = Termination::SolvedEarly;
  EXPECT_TRUE(check_transcript(t, 2, 0.8).empty());
  t.interactions[0].feedback.reset();
  EXPECT_FALSE(check_transcript(t, 2, 0.8).empty());
  t.interactions[0].feedback = FeedbackRecord{"f"};
  t.score_at = {1.0, 0.0, 0.0};
  EXPECT_FALSE(check_transcript(t, 2, 0.8).empty());
}

}  // namespace
}  // namespace interview
