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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interview/domain.hpp"

namespace interview {

// Outcome classes the follow-up policy is keyed on.
enum class GradeStatus {
  Correct,
  IncorrectConcept,
  IncorrectMisinterpret,
  IncorrectCalculation,
  IncorrectNA,
  Incomplete,  // open-ended answer that is not fully correct
};

inline constexpr GradeStatus kAllGradeStatuses[] = {
    GradeStatus::Correct,           GradeStatus::IncorrectConcept,
    GradeStatus::IncorrectMisinterpret, GradeStatus::IncorrectCalculation,
    GradeStatus::IncorrectNA,       GradeStatus::Incomplete};

std::string_view to_string(GradeStatus s);

GradeStatus grade_status(const GradeOutcome& g, double quality_threshold);

using FollowupPolicy = std::map<GradeStatus, FollowupType>;

FollowupPolicy default_followup_policy(GradingKind kind);

using TemplateVars = std::map<std::string, std::string>;

// Replaces each `{name}` whose name is a key of `vars`. Other braces (JSON
// examples, LaTeX) are left as they are. Substituted values are not rescanned.
std::string render_template(std::string_view tmpl, const TemplateVars& vars);

// Names of the `{identifier}` placeholders in `tmpl`, sorted and unique.
std::vector<std::string> placeholders(std::string_view tmpl);

// Template used to generate a follow-up of type `t`.
std::string_view followup_template_name(FollowupType t);

// Templates an interviewer profile must provide for `kind`.
std::vector<std::string> required_templates(GradingKind kind);

// Everything task specific about an interviewer: prompts, grading scheme
// and follow-up policy.
struct TaskProfile {
  std::string name;
  TaskKind task_kind = TaskKind::DeterministicAnswer;
  GradingKind grading = GradingKind::Binary;
  std::map<std::string, std::string> templates;
  FollowupPolicy followup_policy;

  const std::string& get(std::string_view template_name) const;
  std::string render(std::string_view template_name, const TemplateVars& vars) const;
  FollowupType followup_for(GradeStatus status) const;
  // Empty when complete.
  std::vector<std::string> validate() const;
};

std::vector<std::string> builtin_profile_names();

// "math" (binary grading) or "depthqa" (fact precision).
TaskProfile builtin_profile(std::string_view name);

// Built-in profile with any `<template_dir>/<name>.txt` files replacing the
// matching prompts. Throws ConfigError when the result is incomplete.
TaskProfile load_profile(std::string_view name,
                         const std::optional<std::filesystem::path>& template_dir);

}  // namespace interview
