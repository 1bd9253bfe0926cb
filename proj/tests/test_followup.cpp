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

#include "interview/errors.hpp"
#include "interview/followup.hpp"
#include "interview/grading.hpp"

namespace interview {
namespace {

using Json = nlohmann::json;

const Problem kMath{"p", TaskKind::DeterministicAnswer, "What is 6 * 7?", "6 * 7 = 42.", "42",
                    std::nullopt};

std::string q(const std::string& question) {
  return Json{{"question", question}, {"answer", "expected"}}.dump();
}

TEST(Followup, TypeFollowsPolicy) {
  const auto math = builtin_profile("math");
  EXPECT_EQ(followup_type_for(math, GradeOutcome::binary(true), 0.8), FollowupType::Rationale);
  EXPECT_EQ(followup_type_for(math, GradeOutcome::binary(false, ErrorType::Concept), 0.8),
            FollowupType::ClarificationConcept);
  EXPECT_EQ(followup_type_for(math, GradeOutcome::binary(false, ErrorType::Misinterpret), 0.8),
            FollowupType::ClarificationInterpretation);
  const auto depth = builtin_profile("depthqa");
  EXPECT_EQ(followup_type_for(depth, GradeOutcome::fact_precision({{"a", true}}), 0.8),
            FollowupType::AdditionalFacts);
}

TEST(Followup, DisclosureChecks) {
  EXPECT_TRUE(discloses_answer("Is it 42?", "42"));
  EXPECT_FALSE(discloses_answer("Is it 420?", "42"));
  EXPECT_FALSE(discloses_answer("Is it 7?", "7"));
  const auto quoted = quoted_reference_sentences("Explain: short  wavelengths scatter MORE strongly",
                                                 "Short wavelengths scatter more strongly. Sky.");
  EXPECT_EQ(quoted, (std::vector<std::string>{"Short wavelengths scatter more strongly."}));
}

TEST(Followup, RationaleRejectsAnswerDisclosureOnce) {
  const auto profile = builtin_profile("math");
  auto agent = ScriptedAgent::from_queue({q("Why is it 42?"), q("Why did you multiply?")});
  Judge judge{*agent, profile};
  const auto d = gen_rationale(kMath, kMath.question, "42", {}, judge);
  EXPECT_EQ(d.question, "Why did you multiply?");
  EXPECT_EQ(d.expected_answer, "expected");
  EXPECT_EQ(d.type, FollowupType::Rationale);

  auto stubborn = ScriptedAgent::from_queue({q("Is it 42?"), q("Really 42?")});
  Judge j2{*stubborn, profile};
  EXPECT_THROW(gen_rationale(kMath, kMath.question, "42", {}, j2), ValidationError);
}

TEST(Followup, RejectsRepeatsAndErrorTypeMentions) {
  const auto profile = builtin_profile("math");
  const std::vector<std::string> prior{"What did you compute first?"};
  auto agent = ScriptedAgent::from_queue({q("What did you compute first?"), q("Which operation applies?")});
  Judge judge{*agent, profile};
  EXPECT_EQ(gen_clarification(kMath, kMath.question, ErrorType::Concept, {}, prior, judge).question,
            "Which operation applies?");

  auto leaky = ScriptedAgent::from_queue({q("Was this a Calculation slip?"), q("What is your error type?")});
  Judge j2{*leaky, profile};
  EXPECT_THROW(gen_clarification(kMath, kMath.question, ErrorType::Calculation, {}, {}, j2),
               ValidationError);
}

TEST(Followup, ClarificationSubtypeFromErrorType) {
  const auto profile = builtin_profile("math");
  auto agent = ScriptedAgent::from_queue({q("Which quantity does the question ask for?")});
  Judge judge{*agent, profile};
  EXPECT_EQ(gen_clarification(kMath, kMath.question, ErrorType::Misinterpret, {}, {}, judge).type,
            FollowupType::ClarificationInterpretation);
}

TEST(Followup, AdditionalFactsMustNotQuoteTheReference) {
  const Problem open{"d", TaskKind::OpenEnded, "Why is the sky blue?",
                     "Short wavelengths scatter more strongly. The sky looks blue.", std::nullopt,
                     std::nullopt};
  const auto profile = builtin_profile("depthqa");
  auto agent = ScriptedAgent::from_queue(
      {q("Is it true that short wavelengths scatter more strongly?"), q("How does wavelength matter?")});
  Judge judge{*agent, profile};
  const std::vector<FactLabel> unsupported{{"x", false}};
  const auto d = gen_additional_facts(open, open.question, "Blue.", unsupported, {}, judge);
  EXPECT_EQ(d.question, "How does wavelength matter?");
  EXPECT_EQ(d.type, FollowupType::AdditionalFacts);
}

}  // namespace
}  // namespace interview
