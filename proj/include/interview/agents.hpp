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

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "interview/domain.hpp"

namespace interview {

// A chat participant. `chat` sends the whole dialogue and returns the reply.
//
// Thread safety: network agents may be shared by concurrent sessions.
// Scripted agents are not thread safe; each session works on its own handle
// obtained from for_session().
class ChatAgent {
 public:
  ChatAgent();
  virtual ~ChatAgent() = default;

  // Requires a non-empty dialogue whose last message is not from the agent.
  std::string chat(std::span<const ChatMessage> messages);

  // Handle to use for one interview session. Network agents return a handle
  // sharing connection limits; scripted agents restart their script.
  virtual std::shared_ptr<ChatAgent> for_session() const = 0;

  // Calls made through this agent and every handle derived from it.
  std::size_t call_count() const { return calls_->load(); }

 protected:
  virtual std::string do_chat(std::span<const ChatMessage> messages) = 0;
  void share_counter_with(ChatAgent& other) const { other.calls_ = calls_; }

 private:
  std::shared_ptr<std::atomic<std::size_t>> calls_;
};

enum class Exhaustion { Error, RepeatLast };

enum class MatchScope {
  LastMessage,  // the rule's pattern is searched in the last message
  Dialogue,     // ... in all messages joined by newlines
};

struct ScriptRule {
  std::string pattern;  // ECMAScript regex, searched (not fully matched)
  MatchScope scope = MatchScope::LastMessage;
  std::vector<std::string> responses;  // consumed in order, one per match
};

// Deterministic stand-in for a model. Either replays a fixed queue, or picks
// the first rule whose pattern matches and returns that rule's next response.
class ScriptedAgent : public ChatAgent {
 public:
  static std::shared_ptr<ScriptedAgent> from_queue(std::vector<std::string> responses,
                                                   Exhaustion policy = Exhaustion::Error);
  static std::shared_ptr<ScriptedAgent> from_rules(std::vector<ScriptRule> rules,
                                                   Exhaustion policy = Exhaustion::Error);

  std::shared_ptr<ChatAgent> for_session() const override;

  // Every dialogue this handle received, in call order.
  const std::vector<std::vector<ChatMessage>>& received() const { return received_; }

 protected:
  std::string do_chat(std::span<const ChatMessage> messages) override;

 private:
  struct Script {
    std::vector<ScriptRule> rules;
    std::vector<std::regex> compiled;
    std::vector<std::string> queue;
    bool use_rules = false;
    Exhaustion policy = Exhaustion::Error;
  };

  explicit ScriptedAgent(std::shared_ptr<const Script> script);

  std::string next_from(const std::vector<std::string>& responses, std::size_t& cursor,
                        std::string_view what);

  std::shared_ptr<const Script> script_;
  std::size_t queue_cursor_ = 0;
  std::vector<std::size_t> rule_cursors_;
  std::vector<std::vector<ChatMessage>> received_;
};

struct AgentSpec {
  std::string endpoint;  // e.g. https://api.openai.com/v1
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::chrono::milliseconds timeout{60'000};
  int max_network_retries = 3;
  // Name of the environment variable holding the bearer token. Empty means
  // no Authorization header (local servers).
  std::string credential_env;
  int max_in_flight = 8;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{30'000};

  std::vector<std::string> validate() const;
};

// Delay before retry number `retry` (1-based): initial * 2^(retry-1), capped.
std::chrono::milliseconds backoff_delay(const AgentSpec& spec, int retry);

// Client for the common `POST {endpoint}/chat/completions` protocol.
class HttpChatAgent : public ChatAgent {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpChatAgent(AgentSpec spec, Sleeper sleeper = {});

  std::shared_ptr<ChatAgent> for_session() const override;

  const AgentSpec& spec() const;
  // Retries across all calls on every handle.
  std::size_t retry_count() const;
  // Every backoff delay slept so far, in order.
  std::vector<std::chrono::milliseconds> backoff_log() const;

 protected:
  std::string do_chat(std::span<const ChatMessage> messages) override;

 private:
  struct Shared;
  explicit HttpChatAgent(std::shared_ptr<Shared> shared);

  std::shared_ptr<Shared> shared_;
};

nlohmann::json chat_request_body(const AgentSpec& spec, std::span<const ChatMessage> messages);

// ---------------------------------------------------------------------------
// Structured (JSON) replies.

enum class JsonKind { String, Boolean, Number, Array, Object, Any };

struct FieldSpec {
  std::string name;
  JsonKind kind = JsonKind::Any;
  bool required = true;
};

struct StructuredSchema {
  std::vector<FieldSpec> fields;
  // Extra semantic check on a well-formed object; returns a reason to re-ask.
  std::function<std::optional<std::string>(const nlohmann::json&)> check;
};

struct StructuredReply {
  nlohmann::json value;
  std::string raw;  // the full reply text the value was taken from
  std::vector<std::string> all_raw;
};

// First balanced {...} region, scanning left to right, that parses as a JSON
// object. Braces inside JSON strings are respected; regions that do not parse
// (e.g. LaTeX groups in surrounding prose) are skipped.
std::optional<nlohmann::json> extract_first_json_object(std::string_view text);

// Returns the reason `value` does not satisfy `schema`, if any.
std::optional<std::string> schema_violation(const nlohmann::json& value,
                                            const StructuredSchema& schema);

// Asks `agent` and parses the reply. On failure appends the bad reply and a
// corrective instruction to the dialogue (never replacing it) and asks again,
// at most max_parse_retries times. Throws StructuredOutputError carrying every
// raw reply when all attempts fail. `messages` is left untouched.
StructuredReply chat_structured(ChatAgent& agent, std::span<const ChatMessage> messages,
                                const StructuredSchema& schema, int max_parse_retries);

}  // namespace interview
