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

#include "interview/engine.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "interview/errors.hpp"
#include "interview/followup.hpp"
#include "interview/serialization.hpp"
#include "interview/text.hpp"

namespace interview {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Setup: return "setup";
    case Phase::FeedbackRevision: return "feedback_revision";
    case Phase::FollowUp: return "follow_up";
    case Phase::Done: return "done";
  }
  return "?";
}

bool can_transition(Phase from, Phase to) {
  switch (from) {
    case Phase::Setup: return to == Phase::FeedbackRevision;
    case Phase::FeedbackRevision: return to == Phase::FollowUp || to == Phase::Done;
    case Phase::FollowUp: return to == Phase::Done;
    case Phase::Done: return false;
  }
  return false;
}

void SessionState::advance(Phase next) {
  if (!can_transition(phase, next)) {
    throw ProtocolError("invalid session transition " + std::string(to_string(phase)) + " -> " +
                        std::string(to_string(next)));
  }
  phase = next;
}

namespace {

std::string justification_of(const std::string& raw) {
  auto j = extract_first_json_object(raw);
  if (j) {
    auto it = j->find("justification");
    if (it != j->end() && it->is_string()) return it->get<std::string>();
  }
  return {};
}

std::string describe_grade(const GradeOutcome& g) {
  std::ostringstream out;
  if (g.is_binary()) {
    out << "The answer is incorrect.";
    if (g.error_type) out << " Error type: " << to_string(*g.error_type) << '.';
    if (auto why = justification_of(g.raw_judgment); !why.empty()) out << " Grader notes: " << why;
    return out.str();
  }
  const auto& fp = std::get<FactPrecisionGrade>(g.kind);
  out << "Fact precision " << fp.precision << ". Facts:";
  for (const auto& f : fp.facts) {
    out << "\n- [" << (f.supported ? "supported" : "unsupported") << "] " << f.fact;
  }
  if (g.quality) {
    out << "\nQuality: completeness " << g.quality->completeness << ", redundancy "
        << g.quality->redundancy << ", readability " << g.quality->readability << ", depth "
        << g.quality->depth;
  }
  return out.str();
}

std::string feedback_list(std::span<const FeedbackRecord> previous) {
  if (previous.empty()) return "(none)";
  std::string out;
  for (const auto& f : previous) out += "\n- " + f.text;
  return out;
}

}  // namespace

FeedbackRecord generate_feedback(const GradingContext& ctx, std::string_view answer,
                                 const GradeOutcome& grade,
                                 std::span<const FeedbackRecord> previous, Judge& judge) {
  const Problem& p = ctx.problem;
  const std::string gold = p.gold_answer.value_or("");
  const StructuredSchema schema{
      {{"feedback", JsonKind::String}, {"feedback_type", JsonKind::String}},
      [&](const Json& v) -> std::optional<std::string> {
        const std::string text = v["feedback"].get<std::string>();
        if (text::trim(text).empty()) return "feedback is empty";
        if (!parse_feedback_type(v["feedback_type"].get<std::string>())) {
          return "feedback_type must be one of the five listed types";
        }
        if (discloses_answer(text, gold)) return "feedback must not reveal the correct answer";
        return std::nullopt;
      }};
  const std::string reference = p.gold_answer ? *p.gold_answer : p.reference_solution;
  const std::string prompt = judge.profile.render(
      "feedback", {{"question", ctx.modified ? ctx.modified->modified_question : p.question},
                   {"solution", p.reference_solution},
                   {"answer", reference},
                   {"evaluation", describe_grade(grade)},
                   {"previous_feedback", feedback_list(previous)},
                   {"history", format_dialogue(ctx.history)},
                   {"model_output", std::string(answer)}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  const StructuredReply reply = chat_structured(judge.agent, messages, schema, judge.max_parse_retries);
  return FeedbackRecord{std::string(text::trim(reply.value["feedback"].get<std::string>())),
                        *parse_feedback_type(reply.value["feedback_type"].get<std::string>())};
}

bool is_clarification_request(std::string_view posed_question, std::string_view reply,
                              Judge& judge) {
  static const StructuredSchema schema{{{"is_clarification_request", JsonKind::Boolean}}, {}};
  const std::string prompt = judge.profile.render(
      "clarify_classify", {{"question", std::string(posed_question)}, {"reply", std::string(reply)}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  return chat_structured(judge.agent, messages, schema, judge.max_parse_retries)
      .value["is_clarification_request"]
      .get<bool>();
}

std::string answer_clarification(const ModifiedProblem& modified, std::string_view request,
                                 Judge& judge) {
  static const StructuredSchema schema{
      {{"reply", JsonKind::String}}, [](const Json& v) -> std::optional<std::string> {
        if (text::trim(v["reply"].get<std::string>()).empty()) return "reply is empty";
        return std::nullopt;
      }};
  const std::string prompt = judge.profile.render(
      "clarify_reply", {{"question", modified.modified_question},
                        {"explanation", modified.explanation},
                        {"request", std::string(request)}});
  const std::vector<ChatMessage> messages{{Role::User, prompt}};
  return std::string(text::trim(
      chat_structured(judge.agent, messages, schema, judge.max_parse_retries).value["reply"].get<std::string>()));
}

namespace {

class Session {
 public:
  Session(const Problem& problem, const std::optional<ModifiedProblem>& modified,
          ChatAgent& interviewer, ChatAgent& interviewee, const TaskProfile& profile,
          const RunConfig& config)
      : problem_(problem),
        modified_(modified),
        interviewee_(interviewee),
        judge_{interviewer, profile, config.max_parse_retries},
        config_(config),
        posed_(problem) {
    if (modified_) posed_.question = modified_->modified_question;
    t_.problem = problem;
    t_.modified = modified;
    t_.mode = config.mode;
  }

  InterviewTranscript run() {
    try {
      setup();
      revise();
      follow_up();
      t_.termination = termination();
      state_.advance(Phase::Done);
    } catch (const std::exception& e) {
      t_.termination = Termination::AgentError;
      t_.error = std::string(to_string(state_.phase)) + ": " + e.what();
    }
    fill_scores();
    return std::move(t_);
  }

 private:
  std::string ask_interviewee() {
    std::string reply = interviewee_.chat(state_.dialogue);
    state_.dialogue.push_back({Role::Assistant, reply});
    return reply;
  }

  void setup() {
    state_.dialogue.push_back({Role::User, posed_.question});
    state_.questions_asked = 1;
    std::string answer = ask_interviewee();
    if (modified_ && config_.mode == RunMode::Interview && config_.setup_clarification &&
        is_clarification_request(posed_.question, answer, judge_)) {
      const std::string reply = answer_clarification(*modified_, answer, judge_);
      t_.clarification = Clarification{answer, reply};
      state_.dialogue.push_back({Role::User, reply});
      answer = ask_interviewee();
    }
    state_.advance(Phase::FeedbackRevision);
  }

  GradeOutcome grade(const std::string& answer, std::span<const ChatMessage> history) {
    if (judge_.profile.grading == GradingKind::Binary) {
      const GradingContext ctx{problem_, modified_ ? &*modified_ : nullptr, history};
      return grade_binary(ctx, answer, judge_, config_.exact_match_fast_path);
    }
    if (t_.interactions.empty()) {
      facts_ = decompose_and_label(posed_, answer, judge_);
    } else {
      const auto& last = t_.interactions.back();
      facts_ = merge_revision(posed_, facts_, answer, last.feedback ? last.feedback->text : "",
                              judge_);
    }
    return GradeOutcome::fact_precision(facts_, assess_quality(posed_, answer, judge_),
                                        "fact decomposition");
  }

  void revise() {
    const int cap = config_.interactions();
    std::vector<FeedbackRecord> given;
    for (int k = 1;; ++k) {
      state_.attempt = k;
      const std::string answer = state_.dialogue.back().content;
      const std::span<const ChatMessage> history(state_.dialogue.data(), state_.dialogue.size() - 1);
      t_.interactions.push_back(Interaction{k, answer, grade(answer, history), std::nullopt});
      const GradeOutcome& g = t_.interactions.back().grade;
      if (g.fully_correct(config_.quality_threshold) || k >= cap) return;

      const GradingContext ctx{problem_, modified_ ? &*modified_ : nullptr, history};
      FeedbackRecord fb = generate_feedback(ctx, answer, g, given, judge_);
      t_.interactions.back().feedback = fb;
      given.push_back(fb);
      state_.dialogue.push_back({Role::User, fb.text});
      ask_interviewee();
    }
  }

  int planned_followups() const {
    return std::max(0, std::min(config_.followups_per_interview, config_.max_questions - 1));
  }

  void follow_up() {
    const int count = planned_followups();
    if (count == 0) return;
    state_.advance(Phase::FollowUp);
    const Interaction& last = t_.interactions.back();
    const FollowupType type = followup_type_for(judge_.profile, last.grade, config_.quality_threshold);
    std::vector<std::string> prior;
    for (int i = 0; i < count; ++i) {
      FollowupDraft draft;
      switch (type) {
        case FollowupType::Rationale:
          draft = gen_rationale(problem_, posed_.question, last.answer, prior, judge_);
          break;
        case FollowupType::ClarificationConcept:
        case FollowupType::ClarificationInterpretation:
          draft = gen_clarification(problem_, posed_.question,
                                    last.grade.error_type.value_or(ErrorType::NA),
                                    state_.dialogue, prior, judge_);
          break;
        case FollowupType::AdditionalFacts: {
          std::vector<FactLabel> unsupported;
          for (const auto& f : facts_) {
            if (!f.supported) unsupported.push_back(f);
          }
          draft = gen_additional_facts(posed_, posed_.question, last.answer, unsupported, prior,
                                       judge_);
          break;
        }
      }
      state_.dialogue.push_back({Role::User, draft.question});
      ++state_.questions_asked;
      const std::string answer = ask_interviewee();
      GradeOutcome g = grade_followup(posed_, draft.question, answer, draft.expected_answer, judge_);
      t_.followups.push_back(FollowUp{draft.type, draft.question, answer, std::move(g)});
      prior.push_back(draft.question);
    }
  }

  Termination termination() const {
    if (planned_followups() < config_.followups_per_interview) {
      return Termination::QuestionBudgetExhausted;
    }
    return t_.interactions.back().grade.fully_correct(config_.quality_threshold)
               ? Termination::SolvedEarly
               : Termination::RetriesExhausted;
  }

  // score_at[n-1] is the score of attempt min(n, attempts made).
  void fill_scores() {
    const int cap = config_.interactions();
    t_.score_at.assign(static_cast<std::size_t>(cap), 0.0);
    if (t_.interactions.empty()) return;
    for (int n = 1; n <= cap; ++n) {
      const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(n), t_.interactions.size());
      t_.score_at[static_cast<std::size_t>(n - 1)] = t_.interactions[k - 1].grade.score();
    }
  }

  const Problem& problem_;
  const std::optional<ModifiedProblem>& modified_;
  ChatAgent& interviewee_;
  Judge judge_;
  const RunConfig& config_;
  Problem posed_;  // the problem as the interviewee saw it
  SessionState state_;
  std::vector<FactLabel> facts_;
  InterviewTranscript t_;
};

}  // namespace

InterviewTranscript run_interview(const Problem& problem,
                                  const std::optional<ModifiedProblem>& modified,
                                  ChatAgent& interviewer, ChatAgent& interviewee,
                                  const TaskProfile& profile, const RunConfig& config) {
  if (auto errors = config.validate(); !errors.empty()) {
    throw ConfigError("invalid run configuration: " + errors.front());
  }
  if (config.mode == RunMode::Judge && modified) {
    throw ConfigError("judge mode poses the original question; got a modification");
  }
  if (config.mode == RunMode::Interview && config.modify_seeds && !modified) {
    throw ConfigError("interview mode with modify_seeds needs a modified problem");
  }
  return Session(problem, modified, interviewer, interviewee, profile, config).run();
}

std::optional<ModifiedProblem> prepare_seed(const Problem& problem, ChatAgent& interviewer,
                                            const TaskProfile& profile, const RunConfig& config,
                                            ModificationCache& cache) {
  if (config.mode == RunMode::Judge || !config.modify_seeds) return std::nullopt;
  const ModificationStrategy strategy = strategy_for(problem.task_kind);
  if (auto hit = cache.get(problem.id, strategy, config.random_seed)) return hit;
  ModifiedProblem m = modify_problem(problem, interviewer, profile, config.max_parse_retries);
  return cache.put(problem.id, strategy, config.random_seed, m);
}

std::vector<InterviewTranscript> run_batch(std::span<const Problem> problems,
                                           const ChatAgent& interviewer,
                                           const ChatAgent& interviewee,
                                           const TaskProfile& profile, const RunConfig& config,
                                           const BatchHooks& hooks) {
  if (auto errors = config.validate(); !errors.empty()) {
    throw ConfigError("invalid run configuration: " + errors.front());
  }
  std::vector<InterviewTranscript> out(problems.size());
  if (problems.empty()) return out;
  ModificationCache private_cache;
  ModificationCache& cache = hooks.cache ? *hooks.cache : private_cache;

  std::atomic<std::size_t> next{0};
  std::mutex done_mu;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < problems.size(); i = next.fetch_add(1)) {
      const Problem& p = problems[i];
      auto judge_handle = interviewer.for_session();
      auto subject_handle = interviewee.for_session();
      InterviewTranscript t;
      try {
        const auto seed = prepare_seed(p, *judge_handle, profile, config, cache);
        t = run_interview(p, seed, *judge_handle, *subject_handle, profile, config);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        t.problem = p;
        t.mode = config.mode;
        t.termination = Termination::AgentError;
        t.error = std::string("seed preparation: ") + e.what();
        t.score_at.assign(static_cast<std::size_t>(config.interactions()), 0.0);
      }
      t.config_hash = hooks.config_hash;
      std::lock_guard lock(done_mu);
      out[i] = std::move(t);
      if (hooks.on_complete) hooks.on_complete(i, out[i]);
    }
  };

  const int threads = std::max(1, std::min<int>(config.parallelism, static_cast<int>(problems.size())));
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          worker();
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
          next.store(problems.size());
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace interview
