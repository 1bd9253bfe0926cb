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

#include "interview/templates.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "interview/errors.hpp"
#include "interview/serialization.hpp"

namespace interview {
namespace detail {
const std::map<std::string, std::string>& builtin_template_files();
}  // namespace detail

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

// Length of "{identifier}" at i, or 0.
std::size_t placeholder_at(std::string_view s, std::size_t i) {
  if (s[i] != '{' || i + 1 >= s.size() || !ident_start(s[i + 1])) return 0;
  std::size_t j = i + 1;
  while (j < s.size() && ident_char(s[j])) ++j;
  if (j >= s.size() || s[j] != '}') return 0;
  return j + 1 - i;
}

// Placeholders a template must reference to be usable.
const std::map<std::string, std::vector<std::string>>& required_placeholders() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"modify", {"question"}},
      {"grade", {"question", "model_output"}},
      {"decompose", {"model_output"}},
      {"merge", {"facts", "correction"}},
      {"quality", {"model_output"}},
      {"feedback", {"model_output", "evaluation"}},
      {"followup_rationale", {"model_solution", "prior_followups"}},
      {"followup_clarification", {"question", "prior_followups"}},
      {"followup_facts", {"model_output", "prior_followups"}},
      {"followup_grade", {"followup_question", "followup_answer"}},
      {"clarify_classify", {"reply"}},
      {"clarify_reply", {"request"}},
      {"session_summary", {"session_history"}},
      {"report_summary", {"chunk_dict"}},
  };
  return table;
}

const std::vector<std::string> kCommonTemplates = {"followup_grade", "clarify_classify",
                                                   "clarify_reply", "session_summary",
                                                   "report_summary"};

}  // namespace

std::string_view to_string(GradeStatus s) {
  switch (s) {
    case GradeStatus::Correct: return "correct";
    case GradeStatus::IncorrectConcept: return "incorrect_concept";
    case GradeStatus::IncorrectMisinterpret: return "incorrect_misinterpret";
    case GradeStatus::IncorrectCalculation: return "incorrect_calculation";
    case GradeStatus::IncorrectNA: return "incorrect_na";
    case GradeStatus::Incomplete: return "incomplete";
  }
  return "?";
}

GradeStatus grade_status(const GradeOutcome& g, double quality_threshold) {
  if (!g.is_binary()) {
    return g.fully_correct(quality_threshold) ? GradeStatus::Correct : GradeStatus::Incomplete;
  }
  if (g.fully_correct(quality_threshold)) return GradeStatus::Correct;
  switch (g.error_type.value_or(ErrorType::NA)) {
    case ErrorType::Concept: return GradeStatus::IncorrectConcept;
    case ErrorType::Misinterpret: return GradeStatus::IncorrectMisinterpret;
    case ErrorType::Calculation: return GradeStatus::IncorrectCalculation;
    case ErrorType::NA: return GradeStatus::IncorrectNA;
  }
  return GradeStatus::IncorrectNA;
}

FollowupPolicy default_followup_policy(GradingKind kind) {
  if (kind == GradingKind::FactPrecision) {
    FollowupPolicy policy;
    for (GradeStatus s : kAllGradeStatuses) policy[s] = FollowupType::AdditionalFacts;
    return policy;
  }
  return {
      {GradeStatus::Correct, FollowupType::Rationale},
      {GradeStatus::IncorrectConcept, FollowupType::ClarificationConcept},
      {GradeStatus::IncorrectMisinterpret, FollowupType::ClarificationInterpretation},
      {GradeStatus::IncorrectCalculation, FollowupType::ClarificationInterpretation},
      {GradeStatus::IncorrectNA, FollowupType::ClarificationInterpretation},
      {GradeStatus::Incomplete, FollowupType::ClarificationInterpretation},
  };
}

std::string render_template(std::string_view tmpl, const TemplateVars& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (const std::size_t n = placeholder_at(tmpl, i)) {
      auto it = vars.find(std::string(tmpl.substr(i + 1, n - 2)));
      if (it != vars.end()) {
        out += it->second;
        i += n;
        continue;
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::vector<std::string> placeholders(std::string_view tmpl) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (const std::size_t n = placeholder_at(tmpl, i)) {
      names.insert(std::string(tmpl.substr(i + 1, n - 2)));
      i += n - 1;
    }
  }
  return {names.begin(), names.end()};
}

std::string_view followup_template_name(FollowupType t) {
  switch (t) {
    case FollowupType::Rationale: return "followup_rationale";
    case FollowupType::ClarificationConcept:
    case FollowupType::ClarificationInterpretation: return "followup_clarification";
    case FollowupType::AdditionalFacts: return "followup_facts";
  }
  return "";
}

std::vector<std::string> required_templates(GradingKind kind) {
  std::vector<std::string> names;
  if (kind == GradingKind::Binary) {
    names = {"modify", "grade", "feedback"};
  } else {
    names = {"modify", "decompose", "merge", "quality", "feedback"};
  }
  names.insert(names.end(), kCommonTemplates.begin(), kCommonTemplates.end());
  return names;
}

const std::string& TaskProfile::get(std::string_view template_name) const {
  auto it = templates.find(std::string(template_name));
  if (it == templates.end()) {
    throw ConfigError("profile '" + name + "' has no template '" + std::string(template_name) + "'");
  }
  return it->second;
}

std::string TaskProfile::render(std::string_view template_name, const TemplateVars& vars) const {
  return render_template(get(template_name), vars);
}

FollowupType TaskProfile::followup_for(GradeStatus status) const {
  auto it = followup_policy.find(status);
  if (it == followup_policy.end()) {
    throw ConfigError("follow-up policy of profile '" + name + "' has no entry for " +
                      std::string(to_string(status)));
  }
  return it->second;
}

std::vector<std::string> TaskProfile::validate() const {
  std::vector<std::string> errors;
  std::vector<std::string> needed = required_templates(grading);
  for (GradeStatus s : kAllGradeStatuses) {
    auto it = followup_policy.find(s);
    if (it == followup_policy.end()) {
      errors.push_back("follow-up policy has no entry for " + std::string(to_string(s)));
      continue;
    }
    const std::string t(followup_template_name(it->second));
    if (std::find(needed.begin(), needed.end(), t) == needed.end()) needed.push_back(t);
  }
  for (const std::string& t : needed) {
    auto it = templates.find(t);
    if (it == templates.end() || it->second.empty()) {
      errors.push_back("missing template '" + t + "'");
      continue;
    }
    auto req = required_placeholders().find(t);
    if (req == required_placeholders().end()) continue;
    const auto present = placeholders(it->second);
    for (const std::string& p : req->second) {
      if (!std::binary_search(present.begin(), present.end(), p)) {
        errors.push_back("template '" + t + "' does not reference {" + p + "}");
      }
    }
  }
  return errors;
}

std::vector<std::string> builtin_profile_names() { return {"depthqa", "math"}; }

TaskProfile builtin_profile(std::string_view name) {
  TaskProfile profile;
  profile.name = std::string(name);
  if (name == "math") {
    profile.task_kind = TaskKind::DeterministicAnswer;
    profile.grading = GradingKind::Binary;
  } else if (name == "depthqa") {
    profile.task_kind = TaskKind::OpenEnded;
    profile.grading = GradingKind::FactPrecision;
  } else {
    throw ConfigError("unknown task profile '" + std::string(name) + "'");
  }
  profile.followup_policy = default_followup_policy(profile.grading);
  const auto& files = detail::builtin_template_files();
  for (const std::string& dir : {std::string("common"), profile.name}) {
    const std::string prefix = dir + "/";
    for (auto it = files.lower_bound(prefix); it != files.end() && it->first.rfind(prefix, 0) == 0;
         ++it) {
      profile.templates[it->first.substr(prefix.size())] = it->second;
    }
  }
  return profile;
}

TaskProfile load_profile(std::string_view name,
                         const std::optional<std::filesystem::path>& template_dir) {
  TaskProfile profile = builtin_profile(name);
  if (template_dir) {
    if (!std::filesystem::is_directory(*template_dir)) {
      throw ConfigError("template directory not found: " + template_dir->string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(*template_dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
      profile.templates[entry.path().stem().string()] = read_file(entry.path());
    }
  }
  if (auto errors = profile.validate(); !errors.empty()) {
    throw ConfigError("task profile '" + profile.name + "' is incomplete: " + errors.front());
  }
  return profile;
}

}  // namespace interview
