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

#include "interview/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "interview/errors.hpp"
#include "interview/serialization.hpp"
#include "interview/text.hpp"

namespace interview {

std::map<ErrorType, std::vector<Excerpt>> pick_examples(
    std::span<const InterviewTranscript> transcripts, int per_type) {
  std::vector<const InterviewTranscript*> ordered;
  for (const auto& t : transcripts) ordered.push_back(&t);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->problem.id < b->problem.id; });

  std::map<ErrorType, std::vector<Excerpt>> out;
  if (per_type <= 0) return out;
  for (const auto* t : ordered) {
    std::map<ErrorType, bool> taken;
    for (const auto& it : t->interactions) {
      if (!it.grade.error_type || taken[*it.grade.error_type]) continue;
      const ErrorType e = *it.grade.error_type;
      taken[e] = true;
      auto& bucket = out[e];
      if (static_cast<int>(bucket.size()) >= per_type) continue;
      bucket.push_back(Excerpt{t->problem.id, e, it.attempt, t->posed_question(), it.answer,
                               it.feedback ? it.feedback->text : std::string()});
    }
  }
  return out;
}

std::vector<ChatMessage> transcript_dialogue(const InterviewTranscript& t) {
  std::vector<ChatMessage> d;
  if (t.interactions.empty()) return d;
  d.push_back({Role::User, t.posed_question()});
  if (t.clarification) {
    d.push_back({Role::Assistant, t.clarification->request});
    d.push_back({Role::User, t.clarification->reply});
  }
  for (const auto& it : t.interactions) {
    d.push_back({Role::Assistant, it.answer});
    if (it.feedback) d.push_back({Role::User, it.feedback->text});
  }
  for (const auto& f : t.followups) {
    d.push_back({Role::User, f.question});
    d.push_back({Role::Assistant, f.answer});
  }
  return d;
}

namespace {

std::string ask_text(Judge& judge, const std::string& prompt) {
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  std::string reply(text::trim(judge.agent.chat(messages)));
  if (reply.empty()) throw ProtocolError("interviewer returned an empty summary");
  return reply;
}

std::string chunk_dict(std::span<const std::string> summaries, std::size_t first_index) {
  Json j = Json::object();
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    j["summary_" + std::to_string(first_index + i + 1)] = summaries[i];
  }
  return j.dump(2);
}

}  // namespace

std::string summarize_session(const InterviewTranscript& t, Judge& judge) {
  const auto dialogue = transcript_dialogue(t);
  if (dialogue.empty()) return kFailedSessionSummary;
  return ask_text(judge, judge.profile.render("session_summary",
                                              {{"session_history", format_dialogue(dialogue)}}));
}

std::string summarize_all(std::span<const std::string> summaries, Judge& judge, int chunk_size) {
  if (summaries.empty()) throw EmptyInput("no session summaries to summarize");
  if (chunk_size < 1) throw ValidationError("chunk_size must be >= 1");
  const auto size = static_cast<std::size_t>(chunk_size);
  if (summaries.size() <= size) {
    return ask_text(judge, judge.profile.render("report_summary",
                                                {{"chunk_dict", chunk_dict(summaries, 0)}}));
  }
  std::vector<std::string> partial;
  for (std::size_t begin = 0; begin < summaries.size(); begin += size) {
    const auto chunk = summaries.subspan(begin, std::min(size, summaries.size() - begin));
    partial.push_back(ask_text(
        judge, judge.profile.render("report_summary", {{"chunk_dict", chunk_dict(chunk, begin)}})));
  }
  return ask_text(judge, judge.profile.render("report_summary",
                                              {{"chunk_dict", chunk_dict(partial, 0)}}));
}

InterviewReport build_report(const ScoreTable& scores,
                             std::optional<std::map<ErrorType, double>> error_freqs,
                             std::map<ErrorType, std::vector<Excerpt>> examples,
                             std::string summary, std::optional<QualityScores> quality_means) {
  constexpr double kTol = 1e-9;
  if (error_freqs && quality_means) {
    throw ConsistencyError("a report carries error frequencies or quality means, not both");
  }
  if (!scores.score_seed_at.empty() &&
      std::abs(scores.adapt - (scores.score_seed_at.back() - scores.score_seed_at.front())) > kTol) {
    throw ConsistencyError("adapt does not equal Score_seed@N - Score_seed@1");
  }
  int by_type = 0;
  double weighted = 0.0;
  for (const auto& [type, n] : scores.followup_count_by_type) {
    by_type += n;
    auto it = scores.score_follow_by_type.find(type);
    if (it == scores.score_follow_by_type.end()) {
      throw ConsistencyError("follow-up count without a score for " + std::string(to_string(type)));
    }
    weighted += it->second * n;
  }
  if (by_type != scores.followup_count) {
    throw ConsistencyError("follow-up counts by type do not add up to the follow-up total");
  }
  if (scores.followup_count > 0) {
    if (!scores.score_follow_total ||
        std::abs(*scores.score_follow_total - weighted / scores.followup_count) > kTol) {
      throw ConsistencyError("follow-up total is not the count-weighted mean of the types");
    }
  }
  if (error_freqs) {
    double sum = 0.0;
    for (const auto& [type, f] : *error_freqs) {
      if (f < 0.0 || f > 1.0) throw ConsistencyError("error frequency outside [0, 1]");
      const double count = f * scores.problem_count;
      if (std::abs(count - std::round(count)) > kTol) {
        throw ConsistencyError("error frequency of " + std::string(to_string(type)) +
                               " is not a whole number of problems");
      }
      sum += f;
    }
    if (sum > 1.0 + kTol) throw ConsistencyError("error frequencies add up to more than 1");
  }
  for (const auto& [type, list] : examples) {
    for (const auto& ex : list) {
      if (ex.error_type != type) throw ConsistencyError("example filed under the wrong error type");
    }
  }
  return InterviewReport{scores, std::move(error_freqs), quality_means, std::move(examples),
                         std::move(summary)};
}

Json to_json(const InterviewReport& r) {
  Json follow_by_type = Json::object();
  for (const auto& [type, v] : r.scores.score_follow_by_type) follow_by_type[std::string(to_string(type))] = v;
  Json scores{{"seed_at", r.scores.score_seed_at},
              {"adapt", r.scores.adapt},
              {"follow_total", r.scores.score_follow_total ? Json(*r.scores.score_follow_total) : Json(nullptr)},
              {"follow_by_type", std::move(follow_by_type)},
              {"problem_count", r.scores.problem_count},
              {"followup_count", r.scores.followup_count}};
  Json freqs = Json::object();
  if (r.error_frequencies) {
    for (const auto& [type, f] : *r.error_frequencies) freqs[std::string(to_string(type))] = f;
  }
  Json quality = Json::object();
  if (r.quality_means) {
    quality = {{"completeness", r.quality_means->completeness},
               {"redundancy", r.quality_means->redundancy},
               {"readability", r.quality_means->readability},
               {"depth", r.quality_means->depth}};
  }
  Json examples = Json::array();
  for (const auto& [type, list] : r.examples) {
    for (const auto& ex : list) {
      examples.push_back({{"error_type", to_string(type)},
                          {"problem_id", ex.problem_id},
                          {"attempt", ex.attempt},
                          {"question", ex.question},
                          {"answer", ex.answer},
                          {"feedback", ex.feedback}});
    }
  }
  return Json{{"scores", std::move(scores)},
              {"error_frequencies", std::move(freqs)},
              {"quality_means", std::move(quality)},
              {"examples", std::move(examples)},
              {"summary", r.summary},
              {"attrition_count", r.scores.attrition_count}};
}

std::string format_half_up(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The nudge absorbs representation error such as 72.49999999999999.
  const double scaled = x * scale;
  const double rounded = std::floor(std::abs(scaled) + 0.5 + 1e-9) * (scaled < 0 ? -1.0 : 1.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded / scale);
  return buf;
}

std::string render_report_text(const InterviewReport& r) {
  const bool open_ended = r.quality_means.has_value();
  const int decimals = open_ended ? 1 : 0;
  auto pct = [&](double x) { return format_half_up(x * 100.0, decimals) + "%"; };
  std::ostringstream out;
  out << "INTERVIEW REPORT\n\n1. Performance Scores\n";
  for (std::size_t n = 0; n < r.scores.score_seed_at.size(); ++n) {
    out << "  Score_seed@" << n + 1 << ": " << pct(r.scores.score_seed_at[n]) << '\n';
  }
  out << "  Adaptability: " << format_half_up(r.scores.adapt * 100.0, decimals) << " points\n";
  if (r.scores.score_follow_total) {
    out << "  Follow-up score: " << pct(*r.scores.score_follow_total) << " over "
        << r.scores.followup_count << " questions\n";
    for (const auto& [type, v] : r.scores.score_follow_by_type) {
      out << "    " << to_string(type) << ": " << pct(v) << '\n';
    }
  }
  out << "  Problems scored: " << r.scores.problem_count
      << ", failed sessions: " << r.scores.attrition_count << '\n';

  if (open_ended) {
    out << "\n2. Response Quality & Examples\n";
    out << "  completeness: " << pct(r.quality_means->completeness) << '\n'
        << "  redundancy: " << pct(r.quality_means->redundancy) << '\n'
        << "  readability: " << pct(r.quality_means->readability) << '\n'
        << "  depth: " << pct(r.quality_means->depth) << '\n';
  } else {
    out << "\n2. Error Analysis & Examples\n";
    if (r.error_frequencies) {
      for (const auto& [type, f] : *r.error_frequencies) {
        out << "  " << to_string(type) << ": " << format_half_up(f, 2) << '\n';
      }
    }
  }
  for (const auto& [type, list] : r.examples) {
    for (const auto& ex : list) {
      out << "  [" << to_string(type) << "] problem " << ex.problem_id << ", attempt " << ex.attempt
          << "\n    Question: " << ex.question << "\n    Answer: " << ex.answer << '\n';
      if (!ex.feedback.empty()) out << "    Feedback: " << ex.feedback << '\n';
    }
  }
  out << "\n3. Comprehensive Summary\n" << r.summary << '\n';
  return out.str();
}

}  // namespace interview
