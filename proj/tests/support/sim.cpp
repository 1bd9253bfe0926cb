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

#include "sim.hpp"

#include <unistd.h>

#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "interview/serialization.hpp"

namespace interview::sim {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const char* const kFactWords[] = {"one", "two", "three", "four", "five", "six"};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::size_t count_of(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string template_prefix(const std::string& text) {
  const auto brace = text.find('{');
  const auto newline = text.find('\n');
  return text.substr(0, std::min({brace, newline, std::size_t{60}}));
}

std::string regex_escape(const std::string& s) {
  static const std::string special = R"(\^$.|?*+()[]{}/-)";
  std::string out;
  for (char c : s) {
    if (special.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

int attempt_of(std::span<const ChatMessage> messages) {
  int n = 1;
  for (const auto& m : messages) n += m.role == Role::Assistant ? 1 : 0;
  return n;
}

bool solved_at(const Behavior& b, int attempt) { return b.correct_at > 0 && attempt >= b.correct_at; }

std::string math_answer(const Problem& p, bool right) {
  return right ? "RIGHT-ANSWER: there are " + *p.gold_answer + " pieces of fruit."
               : "WRONG-ANSWER: there are 3 pieces of fruit.";
}

std::string depth_answer(bool right) {
  return right ? "Fact GOOD one. Fact GOOD two. Fact GOOD three."
               : "Fact GOOD one. Fact BAD two. Fact BAD three.";
}

const char* const kFollowupAnswer = "The key step combines the two given quantities.";

std::string followup_question(std::size_t n) {
  return "Follow-up " + std::string(kFactWords[std::min<std::size_t>(n, 5)]) +
         ": which step of your reasoning matters most, and why?";
}

Json modification_for(const World& w, const Problem& p) {
  if (w.profile.task_kind == TaskKind::DeterministicAnswer) {
    const ModifiedProblem m = masked_version(p);
    return {{"modified_question", m.modified_question}, {"explanation", m.explanation}};
  }
  return {{"modified_question", p.question + " Answer in plain words."},
          {"explanation", "Targets the same facts as the reference solution."}};
}

Json grade_for(const Behavior& b, bool right) {
  if (right) return {{"correct", true}, {"justification", "The final answer matches."}};
  return {{"correct", false},
          {"error_type", std::string(to_string(b.error))},
          {"justification", "The final answer is wrong."}};
}

const Json kFeedback = {{"feedback", "Recheck each step of your work."},
                        {"feedback_type", "Process and Strategy Guidance"}};

std::vector<std::pair<std::string, std::string>> facts_in(std::string_view text) {
  static const std::regex fact("Fact (GOOD|BAD) ([a-z]+)");
  std::vector<std::pair<std::string, std::string>> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), fact); it != std::sregex_iterator(); ++it) {
    out.emplace_back((*it)[1].str(), (*it)[2].str());
  }
  return out;
}

Json merged_facts(const std::string& prompt) {
  const auto start = prompt.rfind("[{\"fact\":");
  if (start == std::string::npos) throw std::runtime_error("merge prompt without facts");
  const auto end = prompt.find('\n', start);
  const Json previous = Json::parse(prompt.substr(start, end - start));
  const std::string correction = prompt.substr(end);
  Json out = Json::array();
  for (const Json& f : previous) {
    const std::string name = f["fact"].get<std::string>();
    const std::string key = name.substr(name.rfind(' ') + 1);
    if (correction.find("Fact GOOD " + key) != std::string::npos) {
      out.push_back({{"fact", "Fact GOOD " + key}, {"supported", true}});
    } else {
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace

std::shared_ptr<ChatAgent> FnAgent::for_session() const {
  auto handle = std::make_shared<FnAgent>(reply_);
  share_counter_with(*handle);
  return handle;
}

const Problem* World::find_in(std::string_view text) const {
  for (const auto& p : problems) {
    if (text.find("Tag " + tag_of(p) + ".") != std::string_view::npos) return &p;
  }
  return nullptr;
}

std::string tag_for(std::size_t index) {
  return std::string("q") + static_cast<char>('a' + (index / 26) % 26) +
         static_cast<char>('a' + index % 26);
}

std::string tag_of(const Problem& p) {
  const auto start = p.question.find("Tag ") + 4;
  return p.question.substr(start, p.question.find('.', start) - start);
}

World math_world(const std::vector<Behavior>& behaviors) {
  World w;
  w.profile = builtin_profile("math");
  for (std::size_t i = 0; i < behaviors.size(); ++i) {
    const int a = 10 + 3 * static_cast<int>(i);
    const int b = 5 + 2 * static_cast<int>(i);
    Problem p;
    p.id = "m" + std::to_string(i + 1);
    p.task_kind = TaskKind::DeterministicAnswer;
    p.question = "Tag " + tag_for(i) + ". A crate holds " + std::to_string(a) + " apples and " +
                 std::to_string(b) + " pears. How many pieces of fruit are in the crate?";
    p.reference_solution = "Add the apples and the pears: " + std::to_string(a) + " + " +
                           std::to_string(b) + " = " + std::to_string(a + b) + ".";
    p.gold_answer = std::to_string(a + b);
    p.difficulty = "Level " + std::to_string(i % 3 + 1);
    w.behavior[p.id] = behaviors[i];
    w.problems.push_back(std::move(p));
  }
  return w;
}

World depth_world(const std::vector<Behavior>& behaviors) {
  World w;
  w.profile = builtin_profile("depthqa");
  for (std::size_t i = 0; i < behaviors.size(); ++i) {
    Problem p;
    p.id = "d" + std::to_string(i + 1);
    p.task_kind = TaskKind::OpenEnded;
    p.question = "Tag " + tag_for(i) + ". Why does sunlight scatter more at short wavelengths?";
    p.reference_solution =
        "Scattering by small molecules grows as the wavelength shrinks. Blue light therefore "
        "scatters more than red light. This is why the daytime sky appears blue.";
    w.behavior[p.id] = behaviors[i];
    w.problems.push_back(std::move(p));
  }
  return w;
}

std::string prompt_kind(const TaskProfile& profile, std::string_view prompt) {
  std::string best;
  std::size_t best_len = 0;
  for (const auto& [name, text] : profile.templates) {
    const std::string prefix = template_prefix(text);
    if (prefix.size() > best_len && starts_with(prompt, prefix)) {
      best = name;
      best_len = prefix.size();
    }
  }
  return best;
}

ModifiedProblem masked_version(const Problem& p) {
  const auto start = p.question.find("holds ") + 6;
  const auto end = p.question.find(' ', start);
  const std::string value = p.question.substr(start, end - start);
  ModifiedProblem m;
  m.original_id = p.id;
  m.strategy = ModificationStrategy::VariableMasking;
  m.modified_question = p.question.substr(0, start) + "x" + p.question.substr(end);
  m.explanation = "x = " + value + ", the number of apples.";
  return m;
}

Reply interviewer_reply(std::shared_ptr<const World> world) {
  return [world](std::span<const ChatMessage> messages) -> std::string {
    const std::string& prompt = messages.front().content;
    const std::string kind = prompt_kind(world->profile, prompt);
    const Problem* p = world->find_in(prompt);
    if (kind == "report_summary") return "Overall the model improves when given feedback.";
    if (!p) throw std::runtime_error("simulated interviewer cannot place prompt: " + kind);
    const Behavior& b = world->of(*p);
    if (kind == "modify") return modification_for(*world, *p).dump();
    if (kind == "grade") return grade_for(b, prompt.find("RIGHT-ANSWER") != std::string::npos).dump();
    if (kind == "feedback") return kFeedback.dump();
    if (kind == "followup_rationale" || kind == "followup_clarification" || kind == "followup_facts") {
      return Json{{"question", followup_question(count_of(prompt, "- Follow-up "))},
                  {"answer", kFollowupAnswer}}
          .dump();
    }
    if (kind == "followup_grade") {
      return Json{{"correct", b.followup_correct}, {"justification", "Compared with the expected answer."}}
          .dump();
    }
    if (kind == "clarify_classify") return R"({"is_clarification_request": false})";
    if (kind == "clarify_reply") return R"({"reply": "Use the values given."})";
    if (kind == "session_summary") {
      return "Session " + tag_of(*p) + ": the model revised its answer when prompted.";
    }
    if (kind == "decompose") {
      const auto body = prompt.substr(prompt.rfind("Reference solution"));
      Json facts = Json::array();
      for (const auto& [label, word] : facts_in(body)) {
        facts.push_back({{"fact", "Fact " + label + " " + word}, {"supported", label == "GOOD"}});
      }
      return Json{{"facts", facts}}.dump();
    }
    if (kind == "merge") return Json{{"facts", merged_facts(prompt)}}.dump();
    if (kind == "quality") {
      return R"({"completeness": 0.9, "redundancy": 0.9, "readability": 0.9, "depth": 0.9})";
    }
    throw std::runtime_error("simulated interviewer got an unknown prompt");
  };
}

Reply interviewee_reply(std::shared_ptr<const World> world) {
  return [world](std::span<const ChatMessage> messages) -> std::string {
    const Problem* p = world->find_in(messages.front().content);
    if (!p) throw std::runtime_error("simulated interviewee cannot place the question");
    if (starts_with(messages.back().content, "Follow-up")) return kFollowupAnswer;
    const bool right = solved_at(world->of(*p), attempt_of(messages));
    return p->task_kind == TaskKind::DeterministicAnswer ? math_answer(*p, right) : depth_answer(right);
  };
}

std::shared_ptr<FnAgent> interviewer(std::shared_ptr<const World> world) {
  return std::make_shared<FnAgent>(interviewer_reply(std::move(world)));
}

std::shared_ptr<FnAgent> interviewee(std::shared_ptr<const World> world) {
  return std::make_shared<FnAgent>(interviewee_reply(std::move(world)));
}

Json interviewer_script(const World& w) {
  auto head = [&](const char* name) { return "^" + regex_escape(template_prefix(w.profile.get(name))); };
  auto rule = [](std::string pattern, std::vector<std::string> responses) {
    return Json{{"pattern", std::move(pattern)}, {"responses", std::move(responses)}};
  };
  Json rules = Json::array();
  for (const auto& p : w.problems) {
    const std::string tag = "[\\s\\S]*Tag " + tag_of(p) + "\\.";
    rules.push_back(rule(head("modify") + tag, {modification_for(w, p).dump()}));
  }
  rules.push_back(rule(head("grade") + "[\\s\\S]*RIGHT-ANSWER", {grade_for({}, true).dump()}));
  for (const auto& p : w.problems) {
    const std::string tag = "[\\s\\S]*Tag " + tag_of(p) + "\\.";
    rules.push_back(rule(head("grade") + tag, {grade_for(w.of(p), false).dump()}));
    rules.push_back(rule(head("followup_grade") + tag,
                         {Json{{"correct", w.of(p).followup_correct}}.dump()}));
    rules.push_back(rule(head("session_summary") + tag,
                         {"Session " + tag_of(p) + ": the model revised its answer when prompted."}));
  }
  rules.push_back(rule(head("feedback"), {kFeedback.dump()}));
  std::vector<std::string> followups;
  for (std::size_t n = 0; n < 4; ++n) {
    followups.push_back(Json{{"question", followup_question(n)}, {"answer", kFollowupAnswer}}.dump());
  }
  rules.push_back(rule(head("followup_rationale"), followups));
  rules.push_back(rule(head("followup_clarification"), followups));
  rules.push_back(rule(head("clarify_classify"), {R"({"is_clarification_request": false})"}));
  rules.push_back(rule(head("clarify_reply"), {R"({"reply": "Use the values given."})"}));
  rules.push_back(rule(head("report_summary"), {"Overall the model improves when given feedback."}));
  return Json{{"kind", "scripted"}, {"rules", rules}, {"exhaustion", "repeat_last"}};
}

Json interviewee_script(const World& w) {
  Json rules = Json::array();
  rules.push_back({{"pattern", "^Follow-up"}, {"responses", {kFollowupAnswer}}});
  for (const auto& p : w.problems) {
    const Behavior& b = w.of(p);
    std::vector<std::string> answers;
    const int wrong = b.correct_at == 0 ? 1 : b.correct_at - 1;
    for (int i = 0; i < wrong; ++i) answers.push_back(math_answer(p, false));
    if (b.correct_at > 0) answers.push_back(math_answer(p, true));
    rules.push_back({{"pattern", "Tag " + tag_of(p) + "\\."}, {"scope", "dialogue"}, {"responses", answers}});
  }
  return Json{{"kind", "scripted"}, {"rules", rules}, {"exhaustion", "repeat_last"}};
}

std::string dataset_jsonl(const World& w) {
  std::string out;
  for (const auto& p : w.problems) out += to_json(p).dump() + "\n";
  return out;
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("interview_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace interview::sim
