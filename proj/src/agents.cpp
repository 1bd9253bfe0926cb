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

#include "interview/agents.hpp"

#include <cstdlib>
#include <semaphore>
#include <sstream>
#include <thread>
#include <variant>

#include <httplib.h>

#include "interview/errors.hpp"

namespace interview {

using Json = nlohmann::json;

ChatAgent::ChatAgent() : calls_(std::make_shared<std::atomic<std::size_t>>(0)) {}

std::string ChatAgent::chat(std::span<const ChatMessage> messages) {
  if (messages.empty()) throw ProtocolError("chat called with an empty dialogue");
  if (messages.back().role == Role::Assistant) {
    throw ProtocolError("chat called with the agent's own message last");
  }
  calls_->fetch_add(1);
  return do_chat(messages);
}

// ---------------------------------------------------------------------------
// ScriptedAgent

ScriptedAgent::ScriptedAgent(std::shared_ptr<const Script> script)
    : script_(std::move(script)), rule_cursors_(script_->rules.size(), 0) {}

std::shared_ptr<ScriptedAgent> ScriptedAgent::from_queue(std::vector<std::string> responses,
                                                         Exhaustion policy) {
  auto script = std::make_shared<Script>();
  script->queue = std::move(responses);
  script->policy = policy;
  return std::shared_ptr<ScriptedAgent>(new ScriptedAgent(std::move(script)));
}

std::shared_ptr<ScriptedAgent> ScriptedAgent::from_rules(std::vector<ScriptRule> rules,
                                                         Exhaustion policy) {
  auto script = std::make_shared<Script>();
  for (const auto& rule : rules) {
    try {
      script->compiled.emplace_back(rule.pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw ConfigError("invalid script pattern '" + rule.pattern + "': " + e.what());
    }
  }
  script->rules = std::move(rules);
  script->use_rules = true;
  script->policy = policy;
  return std::shared_ptr<ScriptedAgent>(new ScriptedAgent(std::move(script)));
}

std::shared_ptr<ChatAgent> ScriptedAgent::for_session() const {
  auto fresh = std::shared_ptr<ScriptedAgent>(new ScriptedAgent(script_));
  share_counter_with(*fresh);
  return fresh;
}

std::string ScriptedAgent::next_from(const std::vector<std::string>& responses,
                                     std::size_t& cursor, std::string_view what) {
  if (cursor < responses.size()) return responses[cursor++];
  if (script_->policy == Exhaustion::RepeatLast && !responses.empty()) return responses.back();
  throw ScriptExhausted("scripted agent has no response left for " + std::string(what));
}

std::string ScriptedAgent::do_chat(std::span<const ChatMessage> messages) {
  received_.emplace_back(messages.begin(), messages.end());
  if (!script_->use_rules) return next_from(script_->queue, queue_cursor_, "its queue");

  std::string dialogue;
  for (const auto& m : messages) {
    dialogue += m.content;
    dialogue += '\n';
  }
  for (std::size_t i = 0; i < script_->rules.size(); ++i) {
    const auto& rule = script_->rules[i];
    const std::string& subject =
        rule.scope == MatchScope::LastMessage ? messages.back().content : dialogue;
    if (std::regex_search(subject, script_->compiled[i])) {
      return next_from(rule.responses, rule_cursors_[i], "rule '" + rule.pattern + "'");
    }
  }
  throw ScriptExhausted("no script rule matches the prompt");
}

// ---------------------------------------------------------------------------
// HttpChatAgent

std::vector<std::string> AgentSpec::validate() const {
  std::vector<std::string> errors;
  if (endpoint.empty()) errors.push_back("endpoint is empty");
  if (model.empty()) errors.push_back("model is empty");
  if (temperature < 0) errors.push_back("temperature must be >= 0");
  if (max_tokens <= 0) errors.push_back("max_tokens must be positive");
  if (timeout.count() <= 0) errors.push_back("timeout must be positive");
  if (max_network_retries < 0) errors.push_back("max_network_retries must be >= 0");
  if (max_in_flight <= 0) errors.push_back("max_in_flight must be positive");
  return errors;
}

std::chrono::milliseconds backoff_delay(const AgentSpec& spec, int retry) {
  auto delay = spec.initial_backoff;
  for (int i = 1; i < retry && delay < spec.max_backoff; ++i) delay *= 2;
  return std::min(delay, spec.max_backoff);
}

Json chat_request_body(const AgentSpec& spec, std::span<const ChatMessage> messages) {
  Json msgs = Json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return Json{{"model", spec.model},
              {"messages", std::move(msgs)},
              {"temperature", spec.temperature},
              {"max_tokens", spec.max_tokens}};
}

struct HttpChatAgent::Shared {
  Shared(AgentSpec s, Sleeper sl)
      : spec(std::move(s)), sleeper(std::move(sl)), slots(spec.max_in_flight) {}

  AgentSpec spec;
  Sleeper sleeper;
  std::counting_semaphore<> slots;
  std::string scheme_host_port;
  std::string base_path;
  mutable std::mutex mu;
  std::size_t retries = 0;
  std::vector<std::chrono::milliseconds> backoffs;
};

HttpChatAgent::HttpChatAgent(AgentSpec spec, Sleeper sleeper) {
  if (auto errors = spec.validate(); !errors.empty()) {
    throw ConfigError("invalid agent spec: " + errors.front());
  }
  if (!sleeper) sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  shared_ = std::make_shared<Shared>(std::move(spec), std::move(sleeper));
  const std::string& url = shared_->spec.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  shared_->scheme_host_port = url.substr(0, path_start);
  shared_->base_path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!shared_->base_path.empty() && shared_->base_path.back() == '/') {
    shared_->base_path.pop_back();
  }
}

HttpChatAgent::HttpChatAgent(std::shared_ptr<Shared> shared) : shared_(std::move(shared)) {}

std::shared_ptr<ChatAgent> HttpChatAgent::for_session() const {
  auto handle = std::shared_ptr<HttpChatAgent>(new HttpChatAgent(shared_));
  share_counter_with(*handle);
  return handle;
}

const AgentSpec& HttpChatAgent::spec() const { return shared_->spec; }

std::size_t HttpChatAgent::retry_count() const {
  std::lock_guard lock(shared_->mu);
  return shared_->retries;
}

std::vector<std::chrono::milliseconds> HttpChatAgent::backoff_log() const {
  std::lock_guard lock(shared_->mu);
  return shared_->backoffs;
}

namespace {

struct Transient {
  bool network;  // false: malformed reply
  std::string message;
};

std::variant<std::string, Transient> parse_completion(const std::string& body) {
  Json j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return Transient{false, "reply body is not JSON"};
  auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    return Transient{false, "reply has no choices"};
  }
  const Json& first = (*choices)[0];
  auto message = first.find("message");
  if (message == first.end() || !message->is_object()) {
    return Transient{false, "reply choice has no message"};
  }
  auto content = message->find("content");
  if (content == message->end() || !content->is_string()) {
    return Transient{false, "reply message has no text content"};
  }
  return content->get<std::string>();
}

}  // namespace

std::string HttpChatAgent::do_chat(std::span<const ChatMessage> messages) {
  Shared& s = *shared_;
  const std::string body = chat_request_body(s.spec, messages).dump();

  httplib::Headers headers;
  if (!s.spec.credential_env.empty()) {
    const char* token = std::getenv(s.spec.credential_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw AuthError("credential variable " + s.spec.credential_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  const std::string path = s.base_path + "/chat/completions";
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(s.spec.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(s.spec.timeout - seconds);

  Transient last{true, ""};
  for (int attempt = 0; attempt <= s.spec.max_network_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = backoff_delay(s.spec, attempt);
      {
        std::lock_guard lock(s.mu);
        ++s.retries;
        s.backoffs.push_back(delay);
      }
      s.sleeper(delay);
    }
    httplib::Result res = [&] {
      s.slots.acquire();
      struct Release {
        std::counting_semaphore<>& sem;
        ~Release() { sem.release(); }
      } release{s.slots};
      httplib::Client client(s.scheme_host_port);
      client.set_connection_timeout(seconds.count(), micros.count());
      client.set_read_timeout(seconds.count(), micros.count());
      client.set_write_timeout(seconds.count(), micros.count());
      return client.Post(path, headers, body, "application/json");
    }();
    if (!res) {
      last = {true, "request to " + s.scheme_host_port + path + " failed: " +
                        httplib::to_string(res.error())};
      continue;
    }
    const int status = res->status;
    if (status == 401 || status == 403) {
      throw AuthError("endpoint rejected the credential (HTTP " + std::to_string(status) + ")");
    }
    if (status == 429 || status >= 500) {
      last = {true, "endpoint returned HTTP " + std::to_string(status)};
      continue;
    }
    if (status != 200) {
      throw ProtocolError("endpoint returned HTTP " + std::to_string(status) + ": " +
                          res->body.substr(0, 200));
    }
    auto parsed = parse_completion(res->body);
    if (auto* text = std::get_if<std::string>(&parsed)) return *text;
    last = std::get<Transient>(parsed);
  }
  const std::string what = last.message + " (after " +
                           std::to_string(s.spec.max_network_retries) + " retries)";
  if (last.network) throw NetworkError(what);
  throw ProtocolError(what);
}

// ---------------------------------------------------------------------------
// Structured replies

std::optional<Json> extract_first_json_object(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        Json j = Json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (!j.is_discarded() && j.is_object()) return j;
        break;
      }
    }
  }
  return std::nullopt;
}

namespace {

std::string_view kind_name(JsonKind k) {
  switch (k) {
    case JsonKind::String: return "string";
    case JsonKind::Boolean: return "boolean";
    case JsonKind::Number: return "number";
    case JsonKind::Array: return "array";
    case JsonKind::Object: return "object";
    case JsonKind::Any: return "any value";
  }
  return "?";
}

bool has_kind(const Json& v, JsonKind k) {
  switch (k) {
    case JsonKind::String: return v.is_string();
    case JsonKind::Boolean: return v.is_boolean();
    case JsonKind::Number: return v.is_number();
    case JsonKind::Array: return v.is_array();
    case JsonKind::Object: return v.is_object();
    case JsonKind::Any: return true;
  }
  return false;
}

std::string corrective_instruction(const std::string& reason, const StructuredSchema& schema) {
  std::ostringstream out;
  out << "Your previous reply could not be used: " << reason
      << ". Reply again with only a JSON object containing the keys ";
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    if (i > 0) out << ", ";
    out << '"' << schema.fields[i].name << "\" (" << kind_name(schema.fields[i].kind)
        << (schema.fields[i].required ? "" : ", optional") << ')';
  }
  out << '.';
  return out.str();
}

}  // namespace

std::optional<std::string> schema_violation(const Json& value, const StructuredSchema& schema) {
  for (const auto& field : schema.fields) {
    auto it = value.find(field.name);
    if (it == value.end() || it->is_null()) {
      if (field.required) return "missing key \"" + field.name + "\"";
      continue;
    }
    if (!has_kind(*it, field.kind)) {
      return "key \"" + field.name + "\" must be a " + std::string(kind_name(field.kind));
    }
  }
  if (schema.check) return schema.check(value);
  return std::nullopt;
}

StructuredReply chat_structured(ChatAgent& agent, std::span<const ChatMessage> messages,
                                const StructuredSchema& schema, int max_parse_retries) {
  std::vector<ChatMessage> dialogue(messages.begin(), messages.end());
  std::vector<std::string> raws;
  std::string reason;
  for (int attempt = 0; attempt <= max_parse_retries; ++attempt) {
    std::string raw = agent.chat(dialogue);
    raws.push_back(raw);
    auto value = extract_first_json_object(raw);
    if (!value) {
      reason = "no JSON object found";
    } else if (auto violation = schema_violation(*value, schema)) {
      reason = *violation;
    } else {
      return StructuredReply{std::move(*value), std::move(raw), std::move(raws)};
    }
    dialogue.push_back({Role::Assistant, raw});
    dialogue.push_back({Role::User, corrective_instruction(reason, schema)});
  }
  throw StructuredOutputError("no usable structured reply after " +
                                  std::to_string(max_parse_retries + 1) + " attempts: " + reason,
                              std::move(raws));
}

}  // namespace interview
