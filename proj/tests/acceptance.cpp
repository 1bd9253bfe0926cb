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

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fcntl.h>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <httplib.h>

#include "interview/analysis.hpp"
#include "interview/cli.hpp"
#include "interview/engine.hpp"
#include "interview/errors.hpp"
#include "interview/metrics.hpp"
#include "interview/report.hpp"
#include "interview/seedprep.hpp"
#include "interview/serialization.hpp"
#include "sim.hpp"

namespace fs = std::filesystem;
using namespace interview;

namespace {

// Tolerances and sizes.
constexpr double kMetricTol = 1e-12;
constexpr double kPearsonTol = 1e-9;
constexpr double kStdTol = 1e-12;
constexpr double kProtocolSeconds = 1.0;
constexpr int kRandomTranscripts = 200;
constexpr int kMergeFixtures = 50;
constexpr int kPearsonDatasets = 20;
constexpr int kPearsonPoints = 50;
constexpr int kDeterminismRuns = 5;
constexpr std::size_t kResumeProblems = 20;
constexpr std::size_t kKillAfterLines = 6;
constexpr auto kStubDelay = std::chrono::milliseconds(5);

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string detail() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    if (failed_ > static_cast<int>(failures_.size())) out += "; ...";
    return out;
  }
  void note(std::string n) { notes_ = std::move(n); }
  const std::string& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
  std::string notes_;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::shared_ptr<const sim::World> shared(sim::World w) {
  return std::make_shared<const sim::World>(std::move(w));
}

// ---------------------------------------------------------------------------

void protocol_walk(Checker& c) {
  std::vector<sim::Behavior> behaviors;
  const ErrorType errors[] = {ErrorType::Concept, ErrorType::Misinterpret, ErrorType::Calculation};
  for (int rep = 0; rep < 3; ++rep) {
    for (int k : {1, 2, 3, 0}) behaviors.push_back({k, errors[rep], rep != 1});
  }
  const auto world = shared(sim::math_world(behaviors));
  RunConfig config;
  config.max_retries = 2;
  config.max_questions = 3;
  config.followups_per_interview = 2;
  config.random_seed = 3;
  auto interviewer = sim::interviewer(world);
  auto interviewee = sim::interviewee(world);

  const auto start = std::chrono::steady_clock::now();
  const auto ts = run_batch(world->problems, *interviewer, *interviewee, world->profile, config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(seconds < kProtocolSeconds, "runtime " + num(seconds) + " s");
  c.expect(ts.size() == 12, "transcript count");

  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    const sim::Behavior& b = behaviors[i];
    const std::string id = t.problem.id;
    // Hand walk: wrong until attempt k, then stop; k = 0 never solves.
    std::vector<double> expected(3, 0.0);
    if (b.correct_at > 0) {
      for (int n = b.correct_at; n <= 3; ++n) expected[static_cast<std::size_t>(n - 1)] = 1.0;
    }
    c.expect(t.score_at == expected, id + " score_at");
    const std::size_t attempts = b.correct_at > 0 ? static_cast<std::size_t>(b.correct_at) : 3;
    c.expect(t.interactions.size() == attempts && attempts <= 3, id + " interaction count");
    c.expect(t.termination == (b.correct_at > 0 ? Termination::SolvedEarly : Termination::RetriesExhausted),
             id + " termination");
    c.expect(check_transcript(t, config.max_retries, config.quality_threshold).empty(), id + " invariants");
    for (std::size_t a = 0; a < t.interactions.size(); ++a) {
      c.expect(t.interactions[a].feedback.has_value() == (a + 1 < t.interactions.size()),
               id + " feedback placement");
    }
    FollowupType want = FollowupType::Rationale;
    if (b.correct_at == 0) {
      want = b.error == ErrorType::Concept ? FollowupType::ClarificationConcept
                                           : FollowupType::ClarificationInterpretation;
    }
    c.expect(t.followups.size() == 2, id + " follow-up count");
    for (const auto& f : t.followups) {
      c.expect(f.followup_type == want, id + " follow-up type " + std::string(to_string(f.followup_type)));
      c.expect(f.grade.score() == (b.followup_correct ? 1.0 : 0.0), id + " follow-up grade");
    }
    c.expect(t.modified && check_masking(t.problem, *t.modified).empty(), id + " masked seed");
  }
  c.note(num(seconds * 1000.0) + " ms");
}

// ---------------------------------------------------------------------------

void metric_oracle(Checker& c) {
  std::mt19937_64 rng(20260101);
  const int n_max = 3;
  std::vector<InterviewTranscript> ts;
  for (int i = 0; i < kRandomTranscripts; ++i) {
    InterviewTranscript t;
    t.problem.id = "r" + std::to_string(i);
    const int k = static_cast<int>(rng() % (n_max + 1));  // 0 = never
    const int attempts = k == 0 ? n_max : k;
    for (int a = 1; a <= attempts; ++a) {
      const bool ok = a == k;
      const auto e = static_cast<ErrorType>(rng() % 4);
      t.interactions.push_back({a, "answer", ok ? GradeOutcome::binary(true) : GradeOutcome::binary(false, e), {}});
    }
    for (int n = 1; n <= n_max; ++n) t.score_at.push_back(k != 0 && n >= k ? 1.0 : 0.0);
    const int fu = static_cast<int>(rng() % 3);
    for (int f = 0; f < fu; ++f) {
      t.followups.push_back({static_cast<FollowupType>(rng() % 3), "q", "a", GradeOutcome::binary(rng() % 2 == 0)});
    }
    t.termination = k ? Termination::SolvedEarly : Termination::RetriesExhausted;
    if (rng() % 10 == 0) t.termination = Termination::AgentError;
    ts.push_back(std::move(t));
  }

  // Brute-force recount.
  int usable = 0;
  std::vector<int> solved(n_max + 1, 0);
  std::map<ErrorType, int> final_errors;
  std::map<FollowupType, std::pair<int, int>> follow;  // correct, total
  int follow_correct = 0;
  int follow_total = 0;
  for (const auto& t : ts) {
    if (t.termination == Termination::AgentError) continue;
    ++usable;
    for (int n = 1; n <= n_max; ++n) {
      bool any = false;
      for (const auto& it : t.interactions) any = any || (it.attempt <= n && it.grade.score() == 1.0);
      if (any) ++solved[static_cast<std::size_t>(n)];
    }
    if (t.interactions.back().grade.error_type) ++final_errors[*t.interactions.back().grade.error_type];
    for (const auto& f : t.followups) {
      const int ok = f.grade.score() == 1.0 ? 1 : 0;
      follow[f.followup_type].first += ok;
      follow[f.followup_type].second += 1;
      follow_correct += ok;
      ++follow_total;
    }
  }
  for (int n = 1; n <= n_max; ++n) {
    const double want = static_cast<double>(solved[static_cast<std::size_t>(n)]) / usable;
    c.expect(std::abs(score_seed_at(ts, n) - want) <= kMetricTol, "Score_seed@" + std::to_string(n));
  }
  c.expect(std::abs(adaptability(ts, n_max) - (static_cast<double>(solved[n_max]) - solved[1]) / usable) <= kMetricTol,
           "adaptability");
  c.expect(std::abs(score_follow(ts) - static_cast<double>(follow_correct) / follow_total) <= kMetricTol,
           "score_follow");
  for (const auto& [type, ct] : follow) {
    c.expect(std::abs(score_follow(ts, FollowupFilter::of(type)) - static_cast<double>(ct.first) / ct.second) <=
                 kMetricTol,
             "score_follow " + std::string(to_string(type)));
  }
  const auto freqs = error_frequencies(ts);
  for (ErrorType e : kAllErrorTypes) {
    const double want = static_cast<double>(final_errors[e]) / usable;
    c.expect(std::abs(freqs.at(e) - want) <= kMetricTol, "error frequency " + std::string(to_string(e)));
  }
  const auto table = compute_scores(ts, n_max);
  c.expect(table.attrition_count == kRandomTranscripts - usable, "attrition");

  // Monotonicity over many binary fixtures.
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<InterviewTranscript> batch(ts.begin() + trial, ts.begin() + trial + 1 + trial % 50);
    if (attrition_count(batch) == static_cast<int>(batch.size())) continue;
    const auto s = compute_scores(batch, n_max);
    for (std::size_t n = 1; n < s.score_seed_at.size(); ++n) {
      c.expect(s.score_seed_at[n] >= s.score_seed_at[n - 1], "monotonicity");
    }
  }
}

// ---------------------------------------------------------------------------

void table_shaped_fixture(Checker& c) {
  std::vector<sim::Behavior> behaviors;
  for (int i = 0; i < 100; ++i) {
    const int k = i < 72 ? 1 : i < 82 ? 2 : i < 84 ? 3 : 0;
    behaviors.push_back({k, ErrorType::Calculation, true});
  }
  const auto world = shared(sim::math_world(behaviors));
  RunConfig config;
  config.max_retries = 2;
  config.max_questions = 2;
  config.followups_per_interview = 1;
  config.parallelism = 4;
  auto interviewer = sim::interviewer(world);
  auto interviewee = sim::interviewee(world);
  const auto ts = run_batch(world->problems, *interviewer, *interviewee, world->profile, config);
  const ScoreTable s = compute_scores(ts, config.interactions());
  const double want[] = {0.72, 0.82, 0.84};
  for (std::size_t n = 0; n < 3; ++n) {
    c.expect(s.score_seed_at.size() == 3 && std::abs(s.score_seed_at[n] - want[n]) <= kMetricTol,
             "Score_seed@" + std::to_string(n + 1));
    c.expect(format_half_up(s.score_seed_at[n], 2) == format_half_up(want[n], 2), "rounded @" + std::to_string(n + 1));
  }
  c.expect(std::abs(s.adapt - 0.12) <= kMetricTol, "Adapt");
  c.expect(format_half_up(s.adapt, 2) == "0.12", "rounded Adapt");
  c.note(format_half_up(s.score_seed_at[0], 2) + " / " + format_half_up(s.score_seed_at[1], 2) + " / " +
         format_half_up(s.score_seed_at[2], 2) + ", Adapt " + format_half_up(s.adapt, 2));
}

// ---------------------------------------------------------------------------

void judge_reduction(Checker& c) {
  std::mt19937_64 rng(4);
  std::vector<sim::Behavior> behaviors;
  for (int i = 0; i < 20; ++i) {
    behaviors.push_back({static_cast<int>(rng() % 4), static_cast<ErrorType>(rng() % 4), rng() % 2 == 0});
  }
  const auto world = shared(sim::math_world(behaviors));
  auto interviewer = sim::interviewer(world);
  auto interviewee = sim::interviewee(world);
  RunConfig interview;
  interview.max_retries = 2;
  interview.max_questions = 2;
  interview.modify_seeds = false;
  const RunConfig judge = interview.as_judge();
  const auto ti = run_batch(world->problems, *interviewer, *interviewee, world->profile, interview);
  const auto tj = run_batch(world->problems, *interviewer, *interviewee, world->profile, judge);
  const double si = score_seed_at(ti, 1);
  const double sj = score_seed_at(tj, 1);
  c.expect(si == sj, "Judge " + num(sj) + " vs Interview@1 " + num(si));
  for (std::size_t i = 0; i < ti.size(); ++i) {
    c.expect(!ti[i].modified && tj[i].interactions.size() == 1, ti[i].problem.id + " shape");
    c.expect(ti[i].score_at.front() == tj[i].score_at.front(), ti[i].problem.id + " first score");
  }
  c.note("score " + num(sj));
}

// ---------------------------------------------------------------------------

void fact_precision_pipeline(Checker& c) {
  const std::vector<std::string> words{"alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "theta"};
  const auto world = shared(sim::depth_world({{}}));
  const Problem& problem = world->problems.front();
  auto agent = sim::interviewer(world);
  Judge judge{*agent, world->profile};
  std::mt19937_64 rng(55);

  for (int f = 0; f < kMergeFixtures; ++f) {
    const std::size_t n = 1 + rng() % words.size();
    std::vector<FactLabel> previous;
    std::string correction;
    std::multiset<std::pair<std::string, bool>> expected;
    int expected_supported = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool good = rng() % 2 == 0;
      previous.push_back({std::string("Fact ") + (good ? "GOOD " : "BAD ") + words[i], good});
      const bool fixed = !good && rng() % 2 == 0;
      if (fixed) correction += "Fact GOOD " + words[i] + ". ";
      const bool supported = good || fixed;
      expected.insert({std::string("Fact ") + (supported ? "GOOD " : "BAD ") + words[i], supported});
      expected_supported += supported ? 1 : 0;
    }
    if (correction.empty()) correction = "No change.";
    const std::string tag = "fixture " + std::to_string(f);
    const auto merged = merge_revision(problem, previous, correction, "Revise.", judge);
    c.expect(merged.size() == previous.size(), tag + " cardinality");
    std::size_t supported = 0;
    for (const auto& l : merged) supported += l.supported ? 1 : 0;
    c.expect(fact_precision(merged) == static_cast<double>(supported) / static_cast<double>(merged.size()),
             tag + " precision");
    c.expect(static_cast<int>(supported) == expected_supported, tag + " supported count");
    c.expect(std::multiset<std::pair<std::string, bool>>(
                 [&] {
                   std::multiset<std::pair<std::string, bool>> s;
                   for (const auto& l : merged) s.insert({l.fact, l.supported});
                   return s;
                 }()) == expected,
             tag + " labels");

    auto shuffled = previous;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto merged2 = merge_revision(problem, shuffled, correction, "Revise.", judge);
    std::multiset<std::pair<std::string, bool>> a, b;
    for (const auto& l : merged) a.insert({l.fact, l.supported});
    for (const auto& l : merged2) b.insert({l.fact, l.supported});
    c.expect(a == b && fact_precision(merged) == fact_precision(merged2), tag + " permutation");
    auto reordered = merged;
    std::shuffle(reordered.begin(), reordered.end(), rng);
    c.expect(fact_precision(reordered) == fact_precision(merged), tag + " precision permutation");
  }

  // A judge that changes the fact count is corrected once, then rejected.
  const std::vector<FactLabel> two{{"Fact BAD alpha", false}, {"Fact GOOD beta", true}};
  const std::string one = R"({"facts": [{"fact": "x", "supported": true}]})";
  const std::string ok = R"({"facts": [{"fact": "x", "supported": true}, {"fact": "y", "supported": true}]})";
  auto recovering = ScriptedAgent::from_queue({one, ok});
  Judge j1{*recovering, world->profile};
  c.expect(merge_revision(problem, two, "fix", "", j1).size() == 2, "re-ask recovers");
  auto stubborn = ScriptedAgent::from_queue({one, one});
  Judge j2{*stubborn, world->profile};
  bool threw = false;
  try {
    merge_revision(problem, two, "fix", "", j2);
  } catch (const CardinalityError&) {
    threw = true;
  }
  c.expect(threw, "CardinalityError after one re-ask");
  c.note(std::to_string(kMergeFixtures) + " fixtures");
}

// ---------------------------------------------------------------------------

// Token-level diff oracle, independent of the library's tokenizer.
std::vector<std::string> words_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) {
    while (!w.empty() && std::string(".,?!:;").find(w.back()) != std::string::npos) w.pop_back();
    out.push_back(w);
  }
  return out;
}

bool numeric_word(const std::string& w) {
  static const std::regex re(R"(-?\d+(\.\d+)?)");
  return std::regex_match(w, re);
}

bool contains_word(const std::string& text, const std::string& w) {
  const auto ws = words_of(text);
  return std::find(ws.begin(), ws.end(), w) != ws.end();
}

void modification_validation(Checker& c) {
  const std::vector<std::string> templates{
      "A crate holds {a} apples and {b} pears. How many pieces of fruit are in the crate?",
      "Tom reads {a} pages on Monday and {b} pages on Tuesday. How many pages did he read?",
      "A train travels {a} km in {b} hours. What is its average speed in km per hour?",
      "If 3 notebooks cost {a} dollars, how much do {b} notebooks cost?",
      "A rectangle has length {a} cm and width {b} cm. Find its area.",
      "Sara has {a} marbles. She gives away {b} of them. How many are left?",
      "What is the remainder when {a} is divided by {b}?",
      "A tank fills at {a} liters per minute for {b} minutes. How many liters does it hold?",
      "The sum of two numbers is {a} and their difference is {b}. Find the larger number.",
      "A shirt costs {a} dollars after a {b} percent discount. What was the original price?"};
  const std::vector<std::pair<std::string, std::string>> values{{"12", "5"}, {"240", "8"}, {"7.5", "3"}};
  const TaskProfile profile = builtin_profile("math");

  auto fill = [](std::string t, const std::string& a, const std::string& b) {
    t.replace(t.find("{a}"), 3, a);
    t.replace(t.find("{b}"), 3, b);
    return t;
  };
  auto reply = [](const std::string& q, const std::string& e) {
    return nlohmann::json{{"modified_question", q}, {"explanation", e}}.dump();
  };

  int violations = 0;
  int rejected = 0;
  int question_no = 0;
  for (const auto& tmpl : templates) {
    for (const auto& [a, b] : values) {
      Problem p{"c" + std::to_string(++question_no), TaskKind::DeterministicAnswer, fill(tmpl, a, b), "s", "1",
                std::nullopt};
      const std::string masked_q = fill(tmpl, "x", b);
      const std::string good_expl = "x = " + a + ", the first given value.";

      auto compliant = ScriptedAgent::from_queue({reply(masked_q, good_expl)});
      try {
        const ModifiedProblem m = mask_variables(p, *compliant, profile);
        const auto wa = words_of(p.question);
        const auto wb = words_of(m.modified_question);
        bool diff_ok = wa.size() == wb.size();
        int changed = 0;
        for (std::size_t i = 0; diff_ok && i < wa.size(); ++i) {
          if (wa[i] == wb[i]) continue;
          ++changed;
          diff_ok = numeric_word(wa[i]) && !numeric_word(wb[i]) && contains_word(m.explanation, wa[i]);
        }
        c.expect(diff_ok && changed >= 1, p.id + " token diff");
      } catch (const Error& e) {
        c.expect(false, p.id + " compliant rejected: " + e.what());
      }

      const std::vector<std::string> bad{
          reply(p.question, good_expl),
          reply("Please answer: " + p.question, "Nothing was hidden."),
          reply(masked_q, "x is the first given value."),
          reply(masked_q + " Show all work.", good_expl),
          reply(masked_q, "The first given value was " + a + ".")};
      for (const auto& r : bad) {
        ++violations;
        auto agent = ScriptedAgent::from_queue({r});
        try {
          mask_variables(p, *agent, profile);
        } catch (const ValidationError&) {
          ++rejected;
        } catch (const Error&) {
        }
      }
    }
  }
  c.expect(question_no == 30, "corpus size");
  c.expect(rejected == violations, std::to_string(rejected) + " of " + std::to_string(violations) + " rejected");
  c.note(std::to_string(question_no) + " questions, " + std::to_string(rejected) + "/" +
         std::to_string(violations) + " violations rejected");
}

// ---------------------------------------------------------------------------

void statistics_oracles(Checker& c) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int d = 0; d < kPearsonDatasets; ++d) {
    std::vector<double> x, y;
    const double slope = (d - 10) * 0.05;
    for (int i = 0; i < kPearsonPoints; ++i) {
      x.push_back(normal(rng));
      y.push_back(slope * x.back() + normal(rng));
    }
    const Correlation got = pearson(x, y);
    // Direct formula: r from raw sums, p from Student's t.
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const double n = kPearsonPoints;
    for (int i = 0; i < kPearsonPoints; ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      syy += y[i] * y[i];
      sxy += x[i] * y[i];
    }
    const double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    const double t = r * std::sqrt((n - 2) / (1 - r * r));
    const double p = 2 * boost::math::cdf(boost::math::complement(boost::math::students_t(n - 2), std::abs(t)));
    c.expect(std::abs(got.r - r) <= kPearsonTol, "r dataset " + std::to_string(d));
    c.expect(std::abs(got.p - p) <= kPearsonTol, "p dataset " + std::to_string(d));
    worst = std::max({worst, std::abs(got.r - r), std::abs(got.p - p)});
  }

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v;
    for (int i = 0; i < 2 + trial; ++i) v.push_back(normal(rng));
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    c.expect(std::abs(sample_std(v) - std::sqrt(ss / static_cast<double>(v.size() - 1))) <= kStdTol, "std");
  }

  // Per-setting scores: settings 1-3 uncontaminated, 5-7 contaminated.
  const std::map<std::string, double> judge{{"1", 0.10}, {"2", 0.07}, {"3", 0.07},
                                            {"5", 0.77}, {"6", 0.56}, {"7", 0.75}};
  const std::map<std::string, double> interview{{"1", 0.05}, {"2", 0.05}, {"3", 0.06},
                                                {"5", 0.15}, {"6", 0.12}, {"7", 0.10}};
  const auto cmp = contamination_compare(judge, interview, {"1", "2", "3"}, {"5", "6", "7"});
  c.expect(format_half_up(cmp.judge_gap, 2) == "0.61", "judge gap " + num(cmp.judge_gap));
  c.expect(format_half_up(cmp.interview_gap, 2) == "0.07", "interview gap " + num(cmp.interview_gap));
  c.note("max |diff| " + num(worst) + ", gaps " + format_half_up(cmp.judge_gap, 2) + " -> " +
         format_half_up(cmp.interview_gap, 2));
}

// ---------------------------------------------------------------------------

nlohmann::json scripted_config(const sim::World& w) {
  return {{"agents", {{"interviewer", sim::interviewer_script(w)}, {"interviewee", sim::interviewee_script(w)}}},
          {"run",
           {{"max_retries", 2}, {"max_questions", 3}, {"followups_per_interview", 2}, {"random_seed", 42},
            {"parallelism", 4}}},
          {"task", {{"profile", "math"}}},
          {"paths", {{"dataset", "data.jsonl"}}}};
}

std::vector<sim::Behavior> mixed_behaviors(std::size_t n) {
  std::vector<sim::Behavior> b;
  for (std::size_t i = 0; i < n; ++i) {
    b.push_back({static_cast<int>(i % 4), static_cast<ErrorType>(i % 4), i % 3 != 0});
  }
  return b;
}

void determinism(Checker& c) {
  const auto world = sim::math_world(mixed_behaviors(12));
  const fs::path dir = sim::temp_dir("accept_determinism");
  std::ofstream(dir / "data.jsonl") << sim::dataset_jsonl(world);
  std::ofstream(dir / "config.json") << scripted_config(world).dump(2);
  std::vector<std::array<std::string, 3>> outputs;
  std::vector<double> finals;
  for (int run = 0; run < kDeterminismRuns; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run));
    std::ostringstream log;
    CommandOptions o;
    o.config = dir / "config.json";
    o.out = out;
    const PipelineResult r = cmd_run(o, log);
    c.expect(r.exit_code == 0, "run " + std::to_string(run) + " exit " + std::to_string(r.exit_code));
    outputs.push_back({sim::slurp(out / "transcripts.jsonl"), sim::slurp(out / "scores.json"),
                       sim::slurp(out / "report.json")});
    finals.push_back(score_table_from_json(nlohmann::json::parse(outputs.back()[1])).score_seed_at.back());
  }
  for (int run = 1; run < kDeterminismRuns; ++run) {
    c.expect(outputs[run][0] == outputs[0][0], "transcripts differ in run " + std::to_string(run));
    c.expect(outputs[run][1] == outputs[0][1], "scores differ in run " + std::to_string(run));
    c.expect(outputs[run][2] == outputs[0][2], "report differs in run " + std::to_string(run));
  }
  c.expect(!outputs[0][0].empty(), "empty transcripts");
  const double sd = sample_std(finals);
  c.expect(sd == 0.0, "std " + num(sd));
  c.note(std::to_string(kDeterminismRuns) + " runs, std " + num(sd));
}

// ---------------------------------------------------------------------------

// OpenAI-style endpoint answering with the simulated agents.
class StubEndpoint {
 public:
  explicit StubEndpoint(std::shared_ptr<const sim::World> world)
      : interviewer_(sim::interviewer_reply(world)), interviewee_(sim::interviewee_reply(world)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::this_thread::sleep_for(kStubDelay);
      const auto body = nlohmann::json::parse(req.body);
      std::vector<ChatMessage> messages;
      for (const auto& m : body.at("messages")) {
        messages.push_back({*parse_role(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
      }
      try {
        const std::string content =
            body.at("model") == "interviewer" ? interviewer_(messages) : interviewee_(messages);
        nlohmann::json reply{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
        res.set_content(reply.dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(e.what(), "text/plain");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubEndpoint() {
    server_.stop();
    thread_.join();
  }
  int port() const { return port_; }

 private:
  sim::Reply interviewer_;
  sim::Reply interviewee_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

pid_t spawn(const std::vector<std::string>& args, const fs::path& log) {
  const pid_t pid = fork();
  if (pid == 0) {
    const int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd >= 0) {
      dup2(fd, 1);
      dup2(fd, 2);
    }
    std::vector<char*> argv;
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execv(argv[0], argv.data());
    _exit(127);
  }
  return pid;
}

std::size_t line_count(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

void persistence_resume(Checker& c) {
  const auto world = shared(sim::math_world(mixed_behaviors(kResumeProblems)));
  StubEndpoint stub(world);
  const fs::path dir = sim::temp_dir("accept_resume");
  std::ofstream(dir / "data.jsonl") << sim::dataset_jsonl(*world);
  auto http = [&](const char* model) {
    return nlohmann::json{{"kind", "http"},
                          {"endpoint", "http://127.0.0.1:" + std::to_string(stub.port()) + "/v1"},
                          {"model", model},
                          {"timeout_ms", 10000},
                          {"max_network_retries", 1},
                          {"initial_backoff_ms", 10}};
  };
  const nlohmann::json config{{"agents", {{"interviewer", http("interviewer")}, {"interviewee", http("interviewee")}}},
                              {"run",
                               {{"max_retries", 2}, {"max_questions", 3}, {"followups_per_interview", 2},
                                {"random_seed", 9}, {"parallelism", 2}}},
                              {"task", {{"profile", "math"}}},
                              {"paths", {{"dataset", "data.jsonl"}, {"out", "out"}}}};
  std::ofstream(dir / "config.json") << config.dump(2);
  const fs::path transcripts = dir / "out" / "transcripts.jsonl";
  const std::string bin = INTERVIEW_EVAL_BIN;
  const std::vector<std::string> args{bin, "run", "--config", (dir / "config.json").string()};

  const pid_t first = spawn(args, dir / "first.log");
  bool killed = false;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(60);
  while (std::chrono::steady_clock::now() < deadline) {
    int status = 0;
    if (waitpid(first, &status, WNOHANG) == first) break;
    if (line_count(transcripts) >= kKillAfterLines) {
      kill(first, SIGKILL);
      waitpid(first, &status, 0);
      killed = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  c.expect(killed, "first run was not interrupted");
  const std::size_t before = read_transcripts(transcripts).transcripts.size();
  c.expect(before < kResumeProblems, "interrupted run already complete");

  std::vector<std::string> resume_args = args;
  resume_args.push_back("--resume");
  const pid_t second = spawn(resume_args, dir / "second.log");
  int status = 0;
  waitpid(second, &status, 0);
  c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "resume exit status " + sim::slurp(dir / "second.log"));

  const TranscriptFile file = read_transcripts(transcripts);
  std::set<std::string> ids;
  for (const auto& t : file.transcripts) ids.insert(t.problem.id);
  c.expect(file.transcripts.size() == kResumeProblems, "transcript count " + std::to_string(file.transcripts.size()));
  c.expect(ids.size() == file.transcripts.size(), "duplicate problem ids");
  c.expect(file.damaged_lines == 0, "damaged lines after resume");
  for (const auto& p : world->problems) c.expect(ids.count(p.id) == 1, "missing " + p.id);

  // Bit-exact round trip of every stored line.
  std::ifstream in(transcripts);
  std::string line;
  std::size_t exact = 0;
  while (std::getline(in, line)) {
    const InterviewTranscript t = transcript_from_json(nlohmann::json::parse(line));
    const std::string again = to_jsonl_line(t);
    c.expect(again == line, "round trip changed a line");
    c.expect(transcript_from_json(nlohmann::json::parse(again)) == t, "round trip changed a value");
    exact += again == line ? 1 : 0;
  }

  // An uninterrupted run produces the same transcripts.
  CommandOptions o;
  o.config = dir / "config.json";
  o.out = dir / "reference";
  std::ostringstream log;
  c.expect(cmd_run(o, log).exit_code == 0, "reference run");
  c.expect(sim::slurp(dir / "reference" / "transcripts.jsonl") == sim::slurp(transcripts),
           "resumed transcripts differ from an uninterrupted run");
  c.note("killed after " + std::to_string(before) + " transcripts, " + std::to_string(ids.size()) +
         " unique after resume, " + std::to_string(exact) + " lines round-trip exactly");
}

// ---------------------------------------------------------------------------

void structured_output(Checker& c) {
  const StructuredSchema schema{{{"correct", JsonKind::Boolean}, {"justification", JsonKind::String}}, {}};
  const std::vector<ChatMessage> ask{{Role::User, "Grade this."}};
  const std::vector<std::string> wrapped{
      "```json\n{\"correct\": true, \"justification\": \"ok\"}\n```",
      "Sure. Here is my verdict:\n{\"correct\": false, \"justification\": \"off by {one}\"}\nHope this helps.",
      "The set $\\{1, 2\\}$ is relevant. ```\n{\"correct\": true, \"justification\": \"}\"}\n```",
      "{\"correct\": true, \"justification\": \"plain\"}"};
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    auto agent = ScriptedAgent::from_queue({wrapped[i]});
    try {
      const StructuredReply r = chat_structured(*agent, ask, schema, 0);
      c.expect(r.value.contains("correct") && r.raw == wrapped[i], "fixture " + std::to_string(i));
    } catch (const Error& e) {
      c.expect(false, "fixture " + std::to_string(i) + ": " + e.what());
    }
  }

  const int max_parse_retries = 2;
  const std::vector<std::string> garbage{"I think it is right.", "```json\n{correct: yes}\n```", "{\"correct\": 1}"};
  auto agent = ScriptedAgent::from_queue(garbage);
  bool threw = false;
  try {
    chat_structured(*agent, ask, schema, max_parse_retries);
  } catch (const StructuredOutputError& e) {
    threw = true;
    c.expect(e.raw_replies() == garbage, "raw replies not retained");
  }
  c.expect(threw, "no StructuredOutputError");
  c.expect(agent->received().size() == static_cast<std::size_t>(max_parse_retries + 1), "attempt count");
  c.expect(agent->received().back().size() == 1 + 2 * max_parse_retries && agent->received().back()[0] == ask[0],
           "dialogue was not extended");
  c.note(std::to_string(wrapped.size()) + " wrapped fixtures, " + std::to_string(garbage.size()) +
         " garbage replies retained");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria{
      {"protocol walk", protocol_walk},
      {"metric oracle equivalence", metric_oracle},
      {"score fixture", table_shaped_fixture},
      {"judge-mode reduction", judge_reduction},
      {"fact-precision pipeline", fact_precision_pipeline},
      {"modification validation", modification_validation},
      {"statistics oracles", statistics_oracles},
      {"determinism across reruns", determinism},
      {"persistence and resume", persistence_resume},
      {"structured-output robustness", structured_output}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checker c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!c.ok()) {
      std::cout << " (" << c.detail() << ")";
      ++failed;
    } else if (!c.notes().empty()) {
      std::cout << " (" << c.notes() << ")";
    }
    std::cout << '\n';
  }
  return failed == 0 ? 0 : 1;
}
