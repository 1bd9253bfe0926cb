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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "interview/domain.hpp"

namespace interview {

// I_x(a, b) by continued fraction. Requires a, b > 0 and 0 <= x <= 1.
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

// P(|T| >= |t|).
double student_t_two_tailed_p(double t, double df);

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-tailed
  int count = 0;
};

// Pearson r with its t-test p-value. Throws InsufficientData below three
// points and DegenerateVariance when either variable is constant.
Correlation pearson(std::span<const double> x, std::span<const double> y);

struct LengthScore {
  std::string problem_id;
  std::size_t length = 0;  // whitespace-delimited tokens of the answer
  double score = 0.0;
};

// Answers actually given at interaction n (no carry-forward), with length
// and score.
std::vector<LengthScore> verbosity_points(std::span<const InterviewTranscript> transcripts, int n);

Correlation verbosity_correlation(std::span<const InterviewTranscript> transcripts, int n);

using RunKey = std::pair<std::string, std::string>;  // (interviewer, interviewee)

struct SelfEnhancement {
  std::map<RunKey, double> matrix;  // Score_seed@n per run
  // Own score minus the mean score other interviewers gave.
  std::map<std::string, double> self_delta;
};

// Throws MissingCell when an interviewee lacks its diagonal run or every
// off-diagonal run.
SelfEnhancement self_enhancement_matrix(const std::map<RunKey, ScoreTable>& runs, int n);

// Standard deviation with divisor k - 1. Throws InsufficientRepetitions
// below two values.
double sample_std(std::span<const double> values);

struct Robustness {
  std::map<std::string, double> std_by_setting;
  double grand_mean = 0.0;
};

Robustness robustness_std(const std::map<std::string, std::vector<ScoreTable>>& repeated_runs, int n);

struct ComparisonRow {
  std::string setting;
  bool contaminated = false;
  double judge = 0.0;
  double interview = 0.0;
};

struct ContaminationComparison {
  std::vector<ComparisonRow> rows;  // uncontaminated ids first, in the given order
  double judge_uncontaminated = 0.0;
  double judge_contaminated = 0.0;
  double interview_uncontaminated = 0.0;
  double interview_contaminated = 0.0;
  double judge_gap = 0.0;      // contaminated - uncontaminated
  double interview_gap = 0.0;
};

// Throws KeyMismatch unless both maps have exactly the keys of the two
// disjoint, non-empty id lists.
ContaminationComparison contamination_compare(const std::map<std::string, double>& judge_scores,
                                              const std::map<std::string, double>& interview_scores,
                                              const std::vector<std::string>& uncontaminated_ids,
                                              const std::vector<std::string>& contaminated_ids);

// CSV renderings for external plotting (RFC 4180 quoting).
std::string csv_escape(const std::string& field);
std::string verbosity_csv(std::span<const InterviewTranscript> transcripts, int max_n);
std::string self_enhancement_csv(const SelfEnhancement& s);
std::string robustness_csv(const Robustness& r);
std::string comparison_csv(const ContaminationComparison& c);

}  // namespace interview
