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

#include "interview/domain.hpp"

namespace interview {

// Transcripts ending in AgentError are excluded from every mean below and
// only show up in attrition_count.
bool counts_toward_scores(const InterviewTranscript& t);
int attrition_count(std::span<const InterviewTranscript> transcripts);

// Mean of score_at[n-1] (n is 1-based; past the end the last entry carries
// forward). Throws EmptyInput with no usable transcript, ValidationError
// when n < 1.
double score_seed_at(std::span<const InterviewTranscript> transcripts, int n);

// score_seed_at(final_n) - score_seed_at(1).
double adaptability(std::span<const InterviewTranscript> transcripts, int final_n);

struct FollowupFilter {
  enum class Kind { All, Type, Clarification };
  Kind kind = Kind::All;
  FollowupType type = FollowupType::Rationale;

  static FollowupFilter all() { return {}; }
  static FollowupFilter of(FollowupType t) { return {Kind::Type, t}; }
  // Both clarification subtypes.
  static FollowupFilter clarification() { return {Kind::Clarification, FollowupType::Rationale}; }

  bool matches(FollowupType t) const;
};

// Mean follow-up grade over the matching follow-ups. Throws
// NoMatchingFollowups when there are none.
double score_follow(std::span<const InterviewTranscript> transcripts,
                    FollowupFilter filter = FollowupFilter::all());

// Per error type: final interactions with that type / usable transcripts.
// Every type is present in the result.
std::map<ErrorType, double> error_frequencies(std::span<const InterviewTranscript> transcripts);

// Share of usable transcripts whose final interaction is fully correct.
double final_correct_rate(std::span<const InterviewTranscript> transcripts, double quality_threshold);

// Mean quality over the final interactions that carry a quality assessment.
std::optional<QualityScores> quality_means(std::span<const InterviewTranscript> transcripts);

// Score_seed@1..N, Adapt and follow-up scores in one table.
ScoreTable compute_scores(std::span<const InterviewTranscript> transcripts, int interactions);

// Aligned plain-text rendering with one column per score.
std::string render_score_table(const ScoreTable& table, const std::string& label = "model");

}  // namespace interview
