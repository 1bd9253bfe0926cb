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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interview/domain.hpp"
#include "interview/grading.hpp"

namespace interview {

struct Excerpt {
  std::string problem_id;
  ErrorType error_type = ErrorType::NA;
  int attempt = 1;
  std::string question;
  std::string answer;
  std::string feedback;  // empty when the interaction got none

  bool operator==(const Excerpt&) const = default;
};

// Up to `per_type` excerpts per error type, one per transcript (its first
// interaction with that type), lowest problem id first. Types without an
// excerpt are absent.
std::map<ErrorType, std::vector<Excerpt>> pick_examples(
    std::span<const InterviewTranscript> transcripts, int per_type);

// The session as the interviewee experienced it, in order.
std::vector<ChatMessage> transcript_dialogue(const InterviewTranscript& t);

inline constexpr const char* kFailedSessionSummary = "(session failed)";

// Summary of one session. A session that failed before any answer yields
// kFailedSessionSummary without a judge call.
std::string summarize_session(const InterviewTranscript& t, Judge& judge);

// Summaries are summarized in chunks of at most chunk_size; with more than
// one chunk, a final call merges the chunk summaries.
std::string summarize_all(std::span<const std::string> summaries, Judge& judge,
                          int chunk_size = 20);

struct InterviewReport {
  ScoreTable scores;
  // Deterministic-answer tasks carry error frequencies, open-ended tasks
  // carry quality means instead.
  std::optional<std::map<ErrorType, double>> error_frequencies;
  std::optional<QualityScores> quality_means;
  std::map<ErrorType, std::vector<Excerpt>> examples;
  std::string summary;

  bool operator==(const InterviewReport&) const = default;
};

// Pure assembly. Throws ConsistencyError when the inputs disagree.
InterviewReport build_report(const ScoreTable& scores,
                             std::optional<std::map<ErrorType, double>> error_freqs,
                             std::map<ErrorType, std::vector<Excerpt>> examples,
                             std::string summary,
                             std::optional<QualityScores> quality_means = std::nullopt);

nlohmann::json to_json(const InterviewReport& r);

// x rounded half-up to `decimals` places, as text.
std::string format_half_up(double x, int decimals);

// Human-readable rendering with the three report sections.
std::string render_report_text(const InterviewReport& r);

}  // namespace interview
