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

#include "interview/seedprep.hpp"

#include <algorithm>
#include <fstream>

#include "interview/errors.hpp"
#include "interview/serialization.hpp"
#include "interview/text.hpp"

namespace interview {
namespace {

const StructuredSchema& modification_schema() {
  static const StructuredSchema schema{
      {{"modified_question", JsonKind::String}, {"explanation", JsonKind::String}},
      [](const Json& v) -> std::optional<std::string> {
        if (text::trim(v["modified_question"].get<std::string>()).empty()) {
          return "modified_question is empty";
        }
        return std::nullopt;
      }};
  return schema;
}

ModifiedProblem ask_modification(const Problem& problem, ChatAgent& interviewer,
                                 const TaskProfile& profile, int max_parse_retries,
                                 ModificationStrategy strategy) {
  const std::string prompt = profile.render(
      "modify", {{"question", problem.question}, {"solution", problem.reference_solution}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  const StructuredReply reply =
      chat_structured(interviewer, messages, modification_schema(), max_parse_retries);
  ModifiedProblem m;
  m.original_id = problem.id;
  m.modified_question = std::string(text::trim(reply.value["modified_question"].get<std::string>()));
  m.strategy = strategy;
  m.explanation = reply.value["explanation"].get<std::string>();
  return m;
}

void throw_if_any(const std::vector<std::string>& violations, const std::string& id) {
  if (violations.empty()) return;
  std::string what = "modification of problem " + id + " rejected: " + violations.front();
  for (std::size_t i = 1; i < violations.size(); ++i) what += "; " + violations[i];
  throw ValidationError(what);
}

}  // namespace

ModificationStrategy strategy_for(TaskKind kind) {
  return kind == TaskKind::DeterministicAnswer ? ModificationStrategy::VariableMasking
                                               : ModificationStrategy::QuestionRegeneration;
}

std::vector<std::string> masked_literals(std::string_view original, std::string_view modified) {
  std::vector<std::string> before;
  std::vector<std::string> after;
  for (const auto& t : text::numeric_literals(original)) before.push_back(text::canonical_number(t.text));
  for (const auto& t : text::numeric_literals(modified)) after.push_back(text::canonical_number(t.text));
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  std::vector<std::string> missing;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::back_inserter(missing));
  return missing;
}

std::vector<std::string> check_masking(const Problem& problem, const ModifiedProblem& m) {
  std::vector<std::string> errors;
  if (text::same_text(problem.question, m.modified_question)) {
    errors.push_back("modified question equals the original");
    return errors;
  }
  const auto masked = masked_literals(problem.question, m.modified_question);
  if (masked.empty()) errors.push_back("no numeric literal was masked");

  const auto a = text::tokenize(problem.question);
  const auto b = text::tokenize(m.modified_question);
  for (const auto& t : a) {
    if (!t.numeric) continue;
    const std::string canon = text::canonical_number(t.text);
    if (!std::binary_search(masked.begin(), masked.end(), canon)) continue;
    if (!text::contains_term(m.explanation, t.text) && !text::contains_term(m.explanation, canon)) {
      errors.push_back("explanation omits masked value " + t.text);
    }
  }

  bool names_symbol = false;
  for (const auto& hunk : text::diff(a, b)) {
    const bool touches_number =
        std::any_of(a.begin() + static_cast<std::ptrdiff_t>(hunk.a_begin),
                    a.begin() + static_cast<std::ptrdiff_t>(hunk.a_end),
                    [](const text::Token& t) { return t.numeric; });
    if (!touches_number) {
      std::string removed;
      for (std::size_t i = hunk.a_begin; i < hunk.a_end; ++i) removed += a[i].text + " ";
      std::string added;
      for (std::size_t j = hunk.b_begin; j < hunk.b_end; ++j) added += b[j].text + " ";
      errors.push_back("edit outside numeric values: '" + std::string(text::trim(removed)) +
                       "' -> '" + std::string(text::trim(added)) + "'");
    }
    for (std::size_t j = hunk.b_begin; j < hunk.b_end; ++j) {
      if (!b[j].numeric && text::contains_term(m.explanation, b[j].text) &&
          std::isalpha(static_cast<unsigned char>(b[j].text.front()))) {
        names_symbol = true;
      }
    }
  }
  if (!masked.empty() && !names_symbol) {
    errors.push_back("explanation names none of the introduced symbols");
  }
  return errors;
}

std::vector<std::string> check_regeneration(const Problem& problem, const ModifiedProblem& m) {
  std::vector<std::string> errors;
  if (text::trim(m.modified_question).empty()) errors.push_back("modified question is empty");
  if (text::same_text(problem.question, m.modified_question)) {
    errors.push_back("modified question equals the original");
  }
  return errors;
}

ModifiedProblem mask_variables(const Problem& problem, ChatAgent& interviewer,
                               const TaskProfile& profile, int max_parse_retries) {
  if (problem.task_kind != TaskKind::DeterministicAnswer) {
    throw ValidationError("variable masking applies to deterministic-answer problems only");
  }
  if (text::numeric_literals(problem.question).empty()) {
    throw ValidationError("problem " + problem.id + " has no numeric literal to mask");
  }
  ModifiedProblem m = ask_modification(problem, interviewer, profile, max_parse_retries,
                                       ModificationStrategy::VariableMasking);
  throw_if_any(check_masking(problem, m), problem.id);
  return m;
}

ModifiedProblem regenerate_question(const Problem& problem, ChatAgent& interviewer,
                                    const TaskProfile& profile, int max_parse_retries) {
  if (problem.task_kind != TaskKind::OpenEnded) {
    throw ValidationError("question regeneration applies to open-ended problems only");
  }
  if (text::trim(problem.reference_solution).empty()) {
    throw ValidationError("problem " + problem.id + " has no reference solution");
  }
  ModifiedProblem m = ask_modification(problem, interviewer, profile, max_parse_retries,
                                       ModificationStrategy::QuestionRegeneration);
  throw_if_any(check_regeneration(problem, m), problem.id);
  return m;
}

ModifiedProblem modify_problem(const Problem& problem, ChatAgent& interviewer,
                               const TaskProfile& profile, int max_parse_retries) {
  if (problem.task_kind == TaskKind::DeterministicAnswer) {
    return mask_variables(problem, interviewer, profile, max_parse_retries);
  }
  return regenerate_question(problem, interviewer, profile, max_parse_retries);
}

// ---------------------------------------------------------------------------

ModificationCache::ModificationCache(std::filesystem::path sidecar) : sidecar_(std::move(sidecar)) {
  std::ifstream in(*sidecar_);
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      const auto strategy = parse_strategy(j.at("strategy").get<std::string>());
      if (!strategy) continue;
      Key key{j.at("problem_id").get<std::string>(), *strategy, j.at("seed").get<std::uint64_t>()};
      entries_.emplace(std::move(key), modified_from_json(j.at("modified")));
    } catch (const std::exception&) {
      continue;
    }
  }
}

std::optional<ModifiedProblem> ModificationCache::get(const std::string& problem_id,
                                                      ModificationStrategy strategy,
                                                      std::uint64_t seed) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(Key{problem_id, strategy, seed});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

ModifiedProblem ModificationCache::put(const std::string& problem_id, ModificationStrategy strategy,
                                       std::uint64_t seed, const ModifiedProblem& m) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.emplace(Key{problem_id, strategy, seed}, m);
  if (inserted && sidecar_) {
    if (sidecar_->has_parent_path()) std::filesystem::create_directories(sidecar_->parent_path());
    std::ofstream out(*sidecar_, std::ios::app);
    const Json line{{"problem_id", problem_id},
                    {"strategy", to_string(strategy)},
                    {"seed", seed},
                    {"modified", to_json(m)}};
    out << line.dump() << '\n';
    if (!out) throw Error("cannot append to modification cache " + sidecar_->string());
  }
  return it->second;
}

std::size_t ModificationCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace interview
