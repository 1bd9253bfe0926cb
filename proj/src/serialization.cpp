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

#include "interview/serialization.hpp"

#include <fstream>
#include <sstream>

#include "interview/errors.hpp"
#include "interview/text.hpp"

namespace interview {
namespace {

template <typename E>
E enum_field(const Json& j, const char* key, std::optional<E> (*parse)(std::string_view)) {
  const auto& s = j.at(key).get_ref<const std::string&>();
  auto v = parse(s);
  if (!v) throw ValidationError(std::string("invalid value '") + s + "' for field " + key);
  return *v;
}

Json optional_string(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

std::optional<std::string> read_optional_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<std::string> first_string(const Json& j, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number()) return it->dump();
  }
  return std::nullopt;
}

Json to_json(const QualityScores& q) {
  return Json{{"completeness", q.completeness},
              {"redundancy", q.redundancy},
              {"readability", q.readability},
              {"depth", q.depth}};
}

QualityScores quality_from_json(const Json& j) {
  return QualityScores{j.at("completeness").get<double>(), j.at("redundancy").get<double>(),
                       j.at("readability").get<double>(), j.at("depth").get<double>()};
}

Json facts_to_json(const std::vector<FactLabel>& facts) {
  Json arr = Json::array();
  for (const auto& f : facts) arr.push_back({{"fact", f.fact}, {"supported", f.supported}});
  return arr;
}

std::vector<FactLabel> facts_from_json(const Json& j) {
  std::vector<FactLabel> out;
  for (const auto& f : j) out.push_back({f.at("fact").get<std::string>(), f.at("supported").get<bool>()});
  return out;
}

}  // namespace

Json to_json(const Problem& p) {
  Json j{{"id", p.id},
         {"task_kind", to_string(p.task_kind)},
         {"question", p.question},
         {"reference_solution", p.reference_solution},
         {"gold_answer", optional_string(p.gold_answer)},
         {"difficulty", optional_string(p.difficulty)}};
  return j;
}

Problem problem_from_json(const Json& j, std::optional<TaskKind> default_kind) {
  if (!j.is_object()) throw ValidationError("problem record is not a JSON object");
  Problem p;
  p.id = first_string(j, {"id", "problem_id", "qid", "unique_id"}).value_or("");
  p.question = first_string(j, {"question", "problem", "query"}).value_or("");
  p.reference_solution = first_string(j, {"reference_solution", "solution", "reference_answer"})
                             .value_or("");
  p.gold_answer = first_string(j, {"gold_answer", "answer", "final_answer"});
  p.difficulty = first_string(j, {"difficulty", "level"});
  if (auto kind = first_string(j, {"task_kind"})) {
    auto parsed = parse_task_kind(*kind);
    if (!parsed) throw ValidationError("invalid task_kind '" + *kind + "'");
    p.task_kind = *parsed;
  } else if (default_kind) {
    p.task_kind = *default_kind;
  } else {
    p.task_kind = p.gold_answer ? TaskKind::DeterministicAnswer : TaskKind::OpenEnded;
  }
  return p;
}

Json to_json(const ModifiedProblem& m) {
  return Json{{"original_id", m.original_id},
              {"modified_question", m.modified_question},
              {"strategy", to_string(m.strategy)},
              {"explanation", m.explanation}};
}

ModifiedProblem modified_from_json(const Json& j) {
  return ModifiedProblem{j.at("original_id").get<std::string>(),
                         j.at("modified_question").get<std::string>(),
                         enum_field<ModificationStrategy>(j, "strategy", parse_strategy),
                         j.at("explanation").get<std::string>()};
}

Json to_json(const GradeOutcome& g) {
  Json j = Json::object();
  if (const auto* b = std::get_if<BinaryGrade>(&g.kind)) {
    j["correct_or_precision"] = b->correct;
  } else {
    const auto& fp = std::get<FactPrecisionGrade>(g.kind);
    j["correct_or_precision"] = fp.precision;
    j["facts"] = facts_to_json(fp.facts);
  }
  j["error_type"] = g.error_type ? Json(to_string(*g.error_type)) : Json(nullptr);
  if (g.quality) j["quality"] = to_json(*g.quality);
  j["raw_judgment"] = g.raw_judgment;
  return j;
}

GradeOutcome grade_from_json(const Json& j) {
  GradeOutcome g;
  const Json& v = j.at("correct_or_precision");
  if (v.is_boolean()) {
    g.kind = BinaryGrade{v.get<bool>()};
  } else {
    g.kind = FactPrecisionGrade{facts_from_json(j.at("facts")), v.get<double>()};
  }
  if (auto it = j.find("error_type"); it != j.end() && !it->is_null()) {
    auto e = parse_error_type(it->get<std::string>());
    if (!e) throw ValidationError("invalid error_type " + it->dump());
    g.error_type = *e;
  }
  if (auto it = j.find("quality"); it != j.end() && !it->is_null()) g.quality = quality_from_json(*it);
  g.raw_judgment = j.value("raw_judgment", std::string());
  return g;
}

Json to_json(const InterviewTranscript& t) {
  Json interactions = Json::array();
  for (const auto& it : t.interactions) {
    Json row{{"attempt", it.attempt}, {"answer", it.answer}};
    row.update(to_json(it.grade));
    row["feedback"] = it.feedback ? Json(it.feedback->text) : Json(nullptr);
    row["feedback_type"] =
        it.feedback ? Json(to_string(it.feedback->feedback_type)) : Json(nullptr);
    interactions.push_back(std::move(row));
  }
  Json followups = Json::array();
  for (const auto& f : t.followups) {
    Json row{{"type", to_string(f.followup_type)},
             {"question", f.question},
             {"answer", f.answer},
             {"score", f.grade.score()},
             {"raw_judgment", f.grade.raw_judgment}};
    if (const auto* fp = std::get_if<FactPrecisionGrade>(&f.grade.kind)) row["facts"] = facts_to_json(fp->facts);
    if (f.grade.error_type) row["error_type"] = to_string(*f.grade.error_type);
    if (f.grade.quality) row["quality"] = to_json(*f.grade.quality);
    followups.push_back(std::move(row));
  }
  Json j{{"problem_id", t.problem.id},
         {"mode", to_string(t.mode)},
         {"modified_question",
          t.modified ? Json(t.modified->modified_question) : Json(nullptr)},
         {"interactions", std::move(interactions)},
         {"score_at", t.score_at},
         {"followups", std::move(followups)},
         {"termination", to_string(t.termination)},
         {"config_hash", t.config_hash},
         {"problem", to_json(t.problem)}};
  if (t.modified) {
    j["modification"] = {{"strategy", to_string(t.modified->strategy)},
                         {"explanation", t.modified->explanation}};
  } else {
    j["modification"] = nullptr;
  }
  j["clarification"] = t.clarification ? Json{{"request", t.clarification->request},
                                              {"reply", t.clarification->reply}}
                                       : Json(nullptr);
  if (!t.error.empty()) j["error"] = t.error;
  return j;
}

InterviewTranscript transcript_from_json(const Json& j) {
  InterviewTranscript t;
  t.problem = problem_from_json(j.at("problem"));
  if (t.problem.id != j.at("problem_id").get<std::string>()) {
    throw ValidationError("problem_id does not match the embedded problem");
  }
  t.mode = enum_field<RunMode>(j, "mode", parse_mode);
  if (auto mq = read_optional_string(j, "modified_question")) {
    const Json& m = j.at("modification");
    t.modified = ModifiedProblem{t.problem.id, *mq,
                                 enum_field<ModificationStrategy>(m, "strategy", parse_strategy),
                                 m.at("explanation").get<std::string>()};
  }
  if (auto it = j.find("clarification"); it != j.end() && !it->is_null()) {
    t.clarification = Clarification{it->at("request").get<std::string>(),
                                    it->at("reply").get<std::string>()};
  }
  for (const auto& row : j.at("interactions")) {
    Interaction it;
    it.attempt = row.at("attempt").get<int>();
    it.answer = row.at("answer").get<std::string>();
    it.grade = grade_from_json(row);
    if (auto text = read_optional_string(row, "feedback")) {
      auto type = parse_feedback_type(row.at("feedback_type").get<std::string>());
      if (!type) throw ValidationError("invalid feedback_type " + row.at("feedback_type").dump());
      it.feedback = FeedbackRecord{*text, *type};
    }
    t.interactions.push_back(std::move(it));
  }
  t.score_at = j.at("score_at").get<std::vector<double>>();
  for (const auto& row : j.at("followups")) {
    FollowUp f;
    f.followup_type = enum_field<FollowupType>(row, "type", parse_followup_type);
    f.question = row.at("question").get<std::string>();
    f.answer = row.at("answer").get<std::string>();
    const double score = row.at("score").get<double>();
    if (auto it = row.find("facts"); it != row.end()) {
      f.grade.kind = FactPrecisionGrade{facts_from_json(*it), score};
    } else {
      f.grade.kind = BinaryGrade{score >= 1.0};
    }
    if (auto it = row.find("error_type"); it != row.end() && !it->is_null()) {
      f.grade.error_type = enum_field<ErrorType>(row, "error_type", parse_error_type);
    }
    if (auto it = row.find("quality"); it != row.end()) f.grade.quality = quality_from_json(*it);
    f.grade.raw_judgment = row.value("raw_judgment", std::string());
    t.followups.push_back(std::move(f));
  }
  t.termination = enum_field<Termination>(j, "termination", parse_termination);
  t.config_hash = j.value("config_hash", std::string());
  t.error = j.value("error", std::string());
  return t;
}

std::string to_jsonl_line(const InterviewTranscript& t) { return to_json(t).dump(); }

Json to_json(const ScoreTable& s) {
  Json by_type = Json::object();
  for (const auto& [type, value] : s.score_follow_by_type) by_type[std::string(to_string(type))] = value;
  Json counts = Json::object();
  for (const auto& [type, n] : s.followup_count_by_type) counts[std::string(to_string(type))] = n;
  return Json{{"score_seed_at", s.score_seed_at},
              {"adapt", s.adapt},
              {"score_follow_total",
               s.score_follow_total ? Json(*s.score_follow_total) : Json(nullptr)},
              {"score_follow_by_type", std::move(by_type)},
              {"followup_count_by_type", std::move(counts)},
              {"problem_count", s.problem_count},
              {"followup_count", s.followup_count},
              {"attrition_count", s.attrition_count}};
}

ScoreTable score_table_from_json(const Json& j) {
  ScoreTable s;
  s.score_seed_at = j.at("score_seed_at").get<std::vector<double>>();
  s.adapt = j.at("adapt").get<double>();
  if (const Json& v = j.at("score_follow_total"); !v.is_null()) s.score_follow_total = v.get<double>();
  for (const auto& [key, value] : j.at("score_follow_by_type").items()) {
    auto type = parse_followup_type(key);
    if (!type) throw ValidationError("invalid follow-up type '" + key + "'");
    s.score_follow_by_type[*type] = value.get<double>();
  }
  if (auto it = j.find("followup_count_by_type"); it != j.end()) {
    for (const auto& [key, value] : it->items()) {
      auto type = parse_followup_type(key);
      if (!type) throw ValidationError("invalid follow-up type '" + key + "'");
      s.followup_count_by_type[*type] = value.get<int>();
    }
  }
  s.problem_count = j.at("problem_count").get<int>();
  s.followup_count = j.at("followup_count").get<int>();
  s.attrition_count = j.value("attrition_count", 0);
  return s;
}

std::vector<Problem> load_dataset(const std::filesystem::path& path,
                                  std::optional<TaskKind> default_kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  std::vector<Problem> problems;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      problems.push_back(problem_from_json(Json::parse(line), default_kind));
    } catch (const Json::exception& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return problems;
}

TranscriptFile read_transcripts(const std::filesystem::path& path) {
  TranscriptFile out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    try {
      out.transcripts.push_back(transcript_from_json(Json::parse(line)));
    } catch (const Json::exception&) {
      ++out.damaged_lines;
    } catch (const ValidationError&) {
      ++out.damaged_lines;
    }
  }
  return out;
}

void write_transcripts(const std::filesystem::path& path,
                       const std::vector<InterviewTranscript>& transcripts) {
  std::string body;
  for (const auto& t : transcripts) {
    body += to_jsonl_line(t);
    body += '\n';
  }
  write_file_atomic(path, body);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace interview
