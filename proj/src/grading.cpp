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

#include "interview/grading.hpp"

#include "interview/errors.hpp"
#include "interview/serialization.hpp"
#include "interview/text.hpp"

namespace interview {
namespace {

std::optional<std::string> check_facts(const Json& v) {
  for (const Json& f : v["facts"]) {
    if (!f.is_object()) return "every fact must be an object";
    auto fact = f.find("fact");
    if (fact == f.end() || !fact->is_string() || text::trim(fact->get<std::string>()).empty()) {
      return "every fact needs a non-empty \"fact\" string";
    }
    auto supported = f.find("supported");
    if (supported == f.end() || !supported->is_boolean()) {
      return "every fact needs a boolean \"supported\"";
    }
  }
  return std::nullopt;
}

const StructuredSchema& facts_schema() {
  static const StructuredSchema schema{{{"facts", JsonKind::Array}}, check_facts};
  return schema;
}

std::vector<FactLabel> labels_from(const Json& facts) {
  std::vector<FactLabel> out;
  for (const Json& f : facts) {
    out.push_back({f["fact"].get<std::string>(), f["supported"].get<bool>()});
  }
  return out;
}

Json labels_to_json(std::span<const FactLabel> labels) {
  Json out = Json::array();
  for (const auto& l : labels) out.push_back({{"fact", l.fact}, {"supported", l.supported}});
  return out;
}

std::string reference_for(const Problem& p) {
  std::string ref = p.reference_solution;
  if (p.gold_answer) ref += (ref.empty() ? "" : "\nFinal answer: ") + *p.gold_answer;
  return ref;
}

}  // namespace

std::string format_dialogue(std::span<const ChatMessage> dialogue) {
  std::string out;
  for (const auto& m : dialogue) {
    if (!out.empty()) out += '\n';
    switch (m.role) {
      case Role::System: out += "System: "; break;
      case Role::User: out += "Interviewer: "; break;
      case Role::Assistant: out += "Model: "; break;
    }
    out += m.content;
  }
  return out.empty() ? "(none)" : out;
}

bool exact_match(std::string_view answer, std::string_view gold) {
  const std::string g = text::normalize_answer(gold);
  return !g.empty() && text::normalize_answer(answer) == g;
}

GradeOutcome grade_binary(const GradingContext& ctx, std::string_view answer, Judge& judge,
                          bool exact_match_fast_path) {
  const Problem& p = ctx.problem;
  if (p.task_kind != TaskKind::DeterministicAnswer) {
    throw ValidationError("binary grading applies to deterministic-answer problems only");
  }
  if (exact_match_fast_path && p.gold_answer && exact_match(answer, *p.gold_answer)) {
    return GradeOutcome::binary(true, std::nullopt, "exact match with the gold answer");
  }
  static const StructuredSchema schema{
      {{"correct", JsonKind::Boolean}, {"error_type", JsonKind::String, false}},
      [](const Json& v) -> std::optional<std::string> {
        auto e = v.find("error_type");
        if (e != v.end() && e->is_string() && !parse_error_type(e->get<std::string>())) {
          return "error_type must be one of Concept, Misinterpret, Calculation, N/A";
        }
        return std::nullopt;
      }};
  const std::string prompt = judge.profile.render(
      "grade", {{"question", ctx.modified ? ctx.modified->modified_question : p.question},
                {"answer", p.gold_answer.value_or("")},
                {"solution", p.reference_solution},
                {"explanation", ctx.modified ? ctx.modified->explanation : "none"},
                {"history", format_dialogue(ctx.history)},
                {"model_output", std::string(answer)}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  const StructuredReply reply = chat_structured(judge.agent, messages, schema, judge.max_parse_retries);
  const bool correct = reply.value["correct"].get<bool>();
  std::optional<ErrorType> error_type;
  if (!correct) {
    auto e = reply.value.find("error_type");
    if (e != reply.value.end() && e->is_string()) error_type = parse_error_type(e->get<std::string>());
  }
  return GradeOutcome::binary(correct, error_type, reply.raw);
}

std::vector<FactLabel> decompose_and_label(const Problem& problem, std::string_view answer,
                                           Judge& judge) {
  if (text::trim(answer).empty()) {
    throw EmptyDecomposition("answer to problem " + problem.id + " is blank");
  }
  const std::string prompt = judge.profile.render(
      "decompose", {{"question", problem.question},
                    {"solution", problem.reference_solution},
                    {"model_output", std::string(answer)}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  const StructuredReply reply =
      chat_structured(judge.agent, messages, facts_schema(), judge.max_parse_retries);
  auto labels = labels_from(reply.value["facts"]);
  if (labels.empty()) {
    throw EmptyDecomposition("judge found no facts in the answer to problem " + problem.id);
  }
  return labels;
}

double fact_precision(std::span<const FactLabel> labels) {
  if (labels.empty()) throw EmptyInput("fact precision of an empty fact list");
  std::size_t supported = 0;
  for (const auto& l : labels) supported += l.supported ? 1 : 0;
  return static_cast<double>(supported) / static_cast<double>(labels.size());
}

std::vector<FactLabel> merge_revision(const Problem& problem, std::span<const FactLabel> previous,
                                      std::string_view correction, std::string_view feedback,
                                      Judge& judge) {
  if (previous.empty()) throw EmptyInput("merge_revision needs earlier fact labels");
  if (text::trim(correction).empty()) return {previous.begin(), previous.end()};
  const std::string prompt = judge.profile.render(
      "merge", {{"question", problem.question},
                {"solution", problem.reference_solution},
                {"feedback", feedback.empty() ? std::string("(none)") : std::string(feedback)},
                {"facts", labels_to_json(previous).dump()},
                {"correction", std::string(correction)}});
  std::vector<ChatMessage> messages{{Role::User, prompt}};
  StructuredReply reply = chat_structured(judge.agent, messages, facts_schema(), judge.max_parse_retries);
  auto labels = labels_from(reply.value["facts"]);
  if (labels.size() == previous.size()) return labels;

  messages.push_back({Role::Assistant, reply.raw});
  messages.push_back({Role::User, "Your list has " + std::to_string(labels.size()) +
                                      " facts but the earlier list has " +
                                      std::to_string(previous.size()) +
                                      ". Reply again with exactly " +
                                      std::to_string(previous.size()) +
                                      " facts in the same order, as JSON."});
  reply = chat_structured(judge.agent, messages, facts_schema(), judge.max_parse_retries);
  labels = labels_from(reply.value["facts"]);
  if (labels.size() != previous.size()) {
    throw CardinalityError("merged fact list has " + std::to_string(labels.size()) +
                           " facts, expected " + std::to_string(previous.size()));
  }
  return labels;
}

QualityScores assess_quality(const Problem& problem, std::string_view answer, Judge& judge) {
  static const StructuredSchema schema{
      {{"completeness", JsonKind::Number},
       {"redundancy", JsonKind::Number},
       {"readability", JsonKind::Number},
       {"depth", JsonKind::Number}},
      [](const Json& v) -> std::optional<std::string> {
        for (const char* key : {"completeness", "redundancy", "readability", "depth"}) {
          const double x = v[key].get<double>();
          if (!(x >= 0.0 && x <= 1.0)) return std::string(key) + " must be between 0 and 1";
        }
        return std::nullopt;
      }};
  const std::string prompt = judge.profile.render(
      "quality", {{"question", problem.question},
                  {"solution", problem.reference_solution},
                  {"model_output", std::string(answer)}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  const StructuredReply reply = chat_structured(judge.agent, messages, schema, judge.max_parse_retries);
  return QualityScores{reply.value["completeness"].get<double>(),
                       reply.value["redundancy"].get<double>(),
                       reply.value["readability"].get<double>(), reply.value["depth"].get<double>()};
}

GradeOutcome grade_followup(const Problem& problem, std::string_view followup_question,
                            std::string_view answer, std::string_view expected_answer,
                            Judge& judge) {
  static const StructuredSchema schema{{{"correct", JsonKind::Boolean}}, {}};
  const std::string prompt = judge.profile.render(
      "followup_grade", {{"question", problem.question},
                         {"reference", reference_for(problem)},
                         {"followup_question", std::string(followup_question)},
                         {"expected_answer", std::string(expected_answer)},
                         {"followup_answer", std::string(answer)}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  const StructuredReply reply = chat_structured(judge.agent, messages, schema, judge.max_parse_retries);
  // Follow-up grades carry no error taxonomy.
  GradeOutcome g;
  g.kind = BinaryGrade{reply.value["correct"].get<bool>()};
  g.raw_judgment = reply.raw;
  return g;
}

}  // namespace interview
