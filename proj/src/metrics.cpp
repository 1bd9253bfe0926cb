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

#include "interview/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

#include "interview/errors.hpp"

namespace interview {
namespace {

std::vector<const InterviewTranscript*> usable(std::span<const InterviewTranscript> transcripts) {
  std::vector<const InterviewTranscript*> out;
  for (const auto& t : transcripts) {
    if (counts_toward_scores(t)) out.push_back(&t);
  }
  return out;
}

double score_at_n(const InterviewTranscript& t, int n) {
  if (t.score_at.empty()) return 0.0;
  const std::size_t idx = std::min(static_cast<std::size_t>(n), t.score_at.size()) - 1;
  return t.score_at[idx];
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

bool counts_toward_scores(const InterviewTranscript& t) {
  return t.termination != Termination::AgentError;
}

int attrition_count(std::span<const InterviewTranscript> transcripts) {
  return static_cast<int>(std::count_if(transcripts.begin(), transcripts.end(),
                                        [](const auto& t) { return !counts_toward_scores(t); }));
}

double score_seed_at(std::span<const InterviewTranscript> transcripts, int n) {
  if (n < 1) throw ValidationError("interaction index must be >= 1, got " + std::to_string(n));
  const auto ts = usable(transcripts);
  if (ts.empty()) throw EmptyInput("no completed transcripts to score");
  double sum = 0.0;
  for (const auto* t : ts) sum += score_at_n(*t, n);
  return sum / static_cast<double>(ts.size());
}

double adaptability(std::span<const InterviewTranscript> transcripts, int final_n) {
  return score_seed_at(transcripts, final_n) - score_seed_at(transcripts, 1);
}

bool FollowupFilter::matches(FollowupType t) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::Type: return t == type;
    case Kind::Clarification: return is_clarification(t);
  }
  return false;
}

double score_follow(std::span<const InterviewTranscript> transcripts, FollowupFilter filter) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto* t : usable(transcripts)) {
    for (const auto& f : t->followups) {
      if (!filter.matches(f.followup_type)) continue;
      sum += f.grade.score();
      ++count;
    }
  }
  if (count == 0) throw NoMatchingFollowups("no follow-up questions match the filter");
  return sum / static_cast<double>(count);
}

std::map<ErrorType, double> error_frequencies(std::span<const InterviewTranscript> transcripts) {
  std::map<ErrorType, double> freq;
  for (ErrorType e : kAllErrorTypes) freq[e] = 0.0;
  const auto ts = usable(transcripts);
  if (ts.empty()) return freq;
  std::map<ErrorType, std::size_t> counts;
  for (const auto* t : ts) {
    if (t->interactions.empty()) continue;
    if (const auto& e = t->interactions.back().grade.error_type) ++counts[*e];
  }
  for (const auto& [e, c] : counts) freq[e] = static_cast<double>(c) / static_cast<double>(ts.size());
  return freq;
}

double final_correct_rate(std::span<const InterviewTranscript> transcripts, double quality_threshold) {
  const auto ts = usable(transcripts);
  if (ts.empty()) throw EmptyInput("no completed transcripts to score");
  std::size_t correct = 0;
  for (const auto* t : ts) {
    if (!t->interactions.empty() && t->interactions.back().grade.fully_correct(quality_threshold)) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(ts.size());
}

std::optional<QualityScores> quality_means(std::span<const InterviewTranscript> transcripts) {
  QualityScores sum;
  std::size_t count = 0;
  for (const auto* t : usable(transcripts)) {
    if (t->interactions.empty() || !t->interactions.back().grade.quality) continue;
    const QualityScores& q = *t->interactions.back().grade.quality;
    sum.completeness += q.completeness;
    sum.redundancy += q.redundancy;
    sum.readability += q.readability;
    sum.depth += q.depth;
    ++count;
  }
  if (count == 0) return std::nullopt;
  const double n = static_cast<double>(count);
  return QualityScores{sum.completeness / n, sum.redundancy / n, sum.readability / n, sum.depth / n};
}

ScoreTable compute_scores(std::span<const InterviewTranscript> transcripts, int interactions) {
  if (interactions < 1) throw ValidationError("interaction count must be >= 1");
  ScoreTable table;
  table.attrition_count = attrition_count(transcripts);
  const auto ts = usable(transcripts);
  table.problem_count = static_cast<int>(ts.size());
  if (ts.empty()) return table;
  for (int n = 1; n <= interactions; ++n) table.score_seed_at.push_back(score_seed_at(transcripts, n));
  table.adapt = table.score_seed_at.back() - table.score_seed_at.front();

  std::map<FollowupType, double> sums;
  for (const auto* t : ts) {
    for (const auto& f : t->followups) {
      sums[f.followup_type] += f.grade.score();
      ++table.followup_count_by_type[f.followup_type];
      ++table.followup_count;
    }
  }
  if (table.followup_count > 0) {
    double total = 0.0;
    for (const auto& [type, sum] : sums) {
      table.score_follow_by_type[type] = sum / table.followup_count_by_type[type];
      total += sum;
    }
    table.score_follow_total = total / table.followup_count;
  }
  return table;
}

std::string render_score_table(const ScoreTable& table, const std::string& label) {
  std::vector<std::string> head{"Model"};
  std::vector<std::string> row{label};
  for (std::size_t n = 0; n < table.score_seed_at.size(); ++n) {
    head.push_back("Seed@" + std::to_string(n + 1));
    row.push_back(fixed2(table.score_seed_at[n]));
  }
  head.push_back("Adapt");
  row.push_back(fixed2(table.adapt));
  head.push_back("Follow");
  row.push_back(table.score_follow_total ? fixed2(*table.score_follow_total) : "-");
  for (FollowupType type : kAllFollowupTypes) {
    auto it = table.score_follow_by_type.find(type);
    if (it == table.score_follow_by_type.end()) continue;
    head.push_back("Follow(" + std::string(to_string(type)) + ")");
    row.push_back(fixed2(it->second));
  }
  head.push_back("Problems");
  row.push_back(std::to_string(table.problem_count));
  head.push_back("Failed");
  row.push_back(std::to_string(table.attrition_count));

  std::ostringstream out;
  for (const auto* cells : {&head, &row}) {
    for (std::size_t i = 0; i < cells->size(); ++i) {
      const std::size_t width = std::max(head[i].size(), row[i].size());
      std::string cell = (*cells)[i];
      if (i == 0) {
        cell.resize(width, ' ');
      } else {
        cell.insert(0, width - cell.size(), ' ');
      }
      out << (i ? "  " : "") << cell;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace interview
