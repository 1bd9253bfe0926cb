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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interview/domain.hpp"

namespace interview {

using Json = nlohmann::json;

Json to_json(const Problem& p);
// Accepts the canonical field names and the common benchmark spellings
// (problem/question, solution/reference_solution, answer/gold_answer,
// level/difficulty). When task_kind is absent, `default_kind` applies, or
// the presence of a gold answer decides.
Problem problem_from_json(const Json& j, std::optional<TaskKind> default_kind = std::nullopt);

Json to_json(const ModifiedProblem& m);
ModifiedProblem modified_from_json(const Json& j);

Json to_json(const GradeOutcome& g);
GradeOutcome grade_from_json(const Json& j);

// One transcript line. Canonical field names: problem_id, mode,
// modified_question, interactions[{attempt, answer, correct_or_precision,
// error_type, feedback, feedback_type}], score_at[],
// followups[{type, question, answer, score}], termination. Extra fields carry
// what a lossless round trip needs (problem, modification, facts, quality,
// raw judgments, config_hash).
Json to_json(const InterviewTranscript& t);
InterviewTranscript transcript_from_json(const Json& j);

// Compact single-line form used in JSONL streams.
std::string to_jsonl_line(const InterviewTranscript& t);

Json to_json(const ScoreTable& s);
ScoreTable score_table_from_json(const Json& j);

std::vector<Problem> load_dataset(const std::filesystem::path& path,
                                  std::optional<TaskKind> default_kind = std::nullopt);

struct TranscriptFile {
  std::vector<InterviewTranscript> transcripts;
  // Lines that failed to parse (e.g. a record cut short by a crash).
  std::size_t damaged_lines = 0;
};

TranscriptFile read_transcripts(const std::filesystem::path& path);
void write_transcripts(const std::filesystem::path& path,
                       const std::vector<InterviewTranscript>& transcripts);

// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace interview
