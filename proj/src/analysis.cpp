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

#include "interview/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "interview/errors.hpp"
#include "interview/metrics.hpp"
#include "interview/text.hpp"

namespace interview {
namespace {

// Continued fraction for I_x(a, b), modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double score_at(const ScoreTable& t, int n) {
  if (n < 1 || static_cast<std::size_t>(n) > t.score_seed_at.size()) {
    throw ValidationError("score table has no Score_seed@" + std::to_string(n));
  }
  return t.score_seed_at[static_cast<std::size_t>(n - 1)];
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw ValidationError("incomplete beta needs a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The continued fraction converges quickly only on this side.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
  const double tail = student_t_two_tailed_p(t, df) / 2.0;
  return t >= 0.0 ? 1.0 - tail : tail;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson needs equally long samples");
  const std::size_t n = x.size();
  if (n < 3) throw InsufficientData("pearson needs at least 3 points, got " + std::to_string(n));
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateVariance("a variable is constant");
  Correlation c;
  c.count = static_cast<int>(n);
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  const double denom = 1.0 - c.r * c.r;
  const double t = denom <= 0.0 ? std::numeric_limits<double>::infinity()
                                : c.r * std::sqrt(df / denom);
  c.p = student_t_two_tailed_p(t, df);
  return c;
}

std::vector<LengthScore> verbosity_points(std::span<const InterviewTranscript> transcripts, int n) {
  if (n < 1) throw ValidationError("interaction index must be >= 1");
  std::vector<LengthScore> points;
  for (const auto& t : transcripts) {
    if (!counts_toward_scores(t) || t.interactions.size() < static_cast<std::size_t>(n)) continue;
    const Interaction& it = t.interactions[static_cast<std::size_t>(n - 1)];
    points.push_back({t.problem.id, text::whitespace_token_count(it.answer), it.grade.score()});
  }
  return points;
}

Correlation verbosity_correlation(std::span<const InterviewTranscript> transcripts, int n) {
  const auto points = verbosity_points(transcripts, n);
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : points) {
    x.push_back(static_cast<double>(p.length));
    y.push_back(p.score);
  }
  return pearson(x, y);
}

SelfEnhancement self_enhancement_matrix(const std::map<RunKey, ScoreTable>& runs, int n) {
  SelfEnhancement out;
  std::set<std::string> interviewees;
  for (const auto& [key, table] : runs) {
    out.matrix[key] = score_at(table, n);
    interviewees.insert(key.second);
  }
  for (const std::string& m : interviewees) {
    auto diag = out.matrix.find({m, m});
    if (diag == out.matrix.end()) throw MissingCell("no run of " + m + " interviewing itself");
    std::vector<double> others;
    for (const auto& [key, v] : out.matrix) {
      if (key.second == m && key.first != m) others.push_back(v);
    }
    if (others.empty()) throw MissingCell("no other interviewer evaluated " + m);
    out.self_delta[m] = diag->second - mean_of(others);
  }
  return out;
}

double sample_std(std::span<const double> values) {
  const std::size_t k = values.size();
  if (k < 2) throw InsufficientRepetitions("standard deviation needs at least 2 values");
  // Shifted by the first value so identical inputs give exactly zero.
  const double origin = values.front();
  double mean = 0.0;
  for (double v : values) mean += v - origin;
  mean /= static_cast<double>(k);
  double ss = 0.0;
  for (double v : values) ss += (v - origin - mean) * (v - origin - mean);
  return std::sqrt(ss / static_cast<double>(k - 1));
}

Robustness robustness_std(const std::map<std::string, std::vector<ScoreTable>>& repeated_runs, int n) {
  if (repeated_runs.empty()) throw InsufficientRepetitions("no settings given");
  Robustness out;
  double sum = 0.0;
  for (const auto& [setting, tables] : repeated_runs) {
    if (tables.size() < 2) {
      throw InsufficientRepetitions("setting " + setting + " has fewer than 2 repetitions");
    }
    std::vector<double> scores;
    for (const auto& t : tables) scores.push_back(score_at(t, n));
    out.std_by_setting[setting] = sample_std(scores);
    sum += out.std_by_setting[setting];
  }
  out.grand_mean = sum / static_cast<double>(out.std_by_setting.size());
  return out;
}

ContaminationComparison contamination_compare(const std::map<std::string, double>& judge_scores,
                                              const std::map<std::string, double>& interview_scores,
                                              const std::vector<std::string>& uncontaminated_ids,
                                              const std::vector<std::string>& contaminated_ids) {
  if (uncontaminated_ids.empty() || contaminated_ids.empty()) {
    throw KeyMismatch("both setting groups must be non-empty");
  }
  std::set<std::string> ids;
  for (const auto* group : {&uncontaminated_ids, &contaminated_ids}) {
    for (const auto& id : *group) {
      if (!ids.insert(id).second) throw KeyMismatch("setting " + id + " listed twice");
    }
  }
  for (const auto* scores : {&judge_scores, &interview_scores}) {
    std::set<std::string> keys;
    for (const auto& [k, v] : *scores) keys.insert(k);
    if (keys != ids) throw KeyMismatch("score keys do not match the listed settings");
  }
  ContaminationComparison out;
  std::vector<double> ju, jc, iu, ic;
  for (const auto* group : {&uncontaminated_ids, &contaminated_ids}) {
    const bool contaminated = group == &contaminated_ids;
    for (const auto& id : *group) {
      const double j = judge_scores.at(id);
      const double i = interview_scores.at(id);
      out.rows.push_back({id, contaminated, j, i});
      (contaminated ? jc : ju).push_back(j);
      (contaminated ? ic : iu).push_back(i);
    }
  }
  out.judge_uncontaminated = mean_of(ju);
  out.judge_contaminated = mean_of(jc);
  out.interview_uncontaminated = mean_of(iu);
  out.interview_contaminated = mean_of(ic);
  out.judge_gap = out.judge_contaminated - out.judge_uncontaminated;
  out.interview_gap = out.interview_contaminated - out.interview_uncontaminated;
  return out;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string verbosity_csv(std::span<const InterviewTranscript> transcripts, int max_n) {
  std::ostringstream out;
  out << "interaction,problem_id,length,score\n";
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& p : verbosity_points(transcripts, n)) {
      out << n << ',' << csv_escape(p.problem_id) << ',' << p.length << ',' << num(p.score) << '\n';
    }
  }
  return out.str();
}

std::string self_enhancement_csv(const SelfEnhancement& s) {
  std::ostringstream out;
  out << "interviewer,interviewee,score,self_delta\n";
  for (const auto& [key, v] : s.matrix) {
    out << csv_escape(key.first) << ',' << csv_escape(key.second) << ',' << num(v) << ',';
    if (key.first == key.second) {
      auto it = s.self_delta.find(key.first);
      if (it != s.self_delta.end()) out << num(it->second);
    }
    out << '\n';
  }
  return out.str();
}

std::string robustness_csv(const Robustness& r) {
  std::ostringstream out;
  out << "setting,std\n";
  for (const auto& [setting, v] : r.std_by_setting) out << csv_escape(setting) << ',' << num(v) << '\n';
  out << "mean," << num(r.grand_mean) << '\n';
  return out.str();
}

std::string comparison_csv(const ContaminationComparison& c) {
  std::ostringstream out;
  out << "setting,group,judge,interview\n";
  for (const auto& row : c.rows) {
    out << csv_escape(row.setting) << ',' << (row.contaminated ? "contaminated" : "uncontaminated")
        << ',' << num(row.judge) << ',' << num(row.interview) << '\n';
  }
  out << "avg_uncontaminated,uncontaminated," << num(c.judge_uncontaminated) << ','
      << num(c.interview_uncontaminated) << '\n';
  out << "avg_contaminated,contaminated," << num(c.judge_contaminated) << ','
      << num(c.interview_contaminated) << '\n';
  out << "gap,," << num(c.judge_gap) << ',' << num(c.interview_gap) << '\n';
  return out.str();
}

}  // namespace interview
