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

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "interview/agents.hpp"
#include "interview/domain.hpp"
#include "interview/templates.hpp"

namespace interview {

// Asks the interviewer to hide numeric values of a deterministic-answer
// problem. Throws ValidationError when the rewrite fails check_masking.
ModifiedProblem mask_variables(const Problem& problem, ChatAgent& interviewer,
                               const TaskProfile& profile, int max_parse_retries = 2);

// Asks the interviewer for a new question answerable from the same reference
// solution. Throws ValidationError when the question is unchanged.
ModifiedProblem regenerate_question(const Problem& problem, ChatAgent& interviewer,
                                    const TaskProfile& profile, int max_parse_retries = 2);

ModificationStrategy strategy_for(TaskKind kind);

// Dispatches on the problem's task kind.
ModifiedProblem modify_problem(const Problem& problem, ChatAgent& interviewer,
                               const TaskProfile& profile, int max_parse_retries = 2);

// Numeric literals (canonical form) present in `original` but missing from
// `modified`, as a multiset.
std::vector<std::string> masked_literals(std::string_view original, std::string_view modified);

// Violations of the masking contract; empty when the rewrite is acceptable.
std::vector<std::string> check_masking(const Problem& problem, const ModifiedProblem& m);
std::vector<std::string> check_regeneration(const Problem& problem, const ModifiedProblem& m);

// Modified seeds keyed by (problem id, strategy, seed), optionally persisted
// as a JSONL sidecar. The first value stored for a key wins.
class ModificationCache {
 public:
  ModificationCache() = default;
  // Loads existing entries; damaged lines are skipped.
  explicit ModificationCache(std::filesystem::path sidecar);

  std::optional<ModifiedProblem> get(const std::string& problem_id, ModificationStrategy strategy,
                                     std::uint64_t seed) const;
  // Returns the stored value: `m` if the key was new, the earlier one otherwise.
  ModifiedProblem put(const std::string& problem_id, ModificationStrategy strategy,
                      std::uint64_t seed, const ModifiedProblem& m);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::string, ModificationStrategy, std::uint64_t>;

  std::optional<std::filesystem::path> sidecar_;
  mutable std::mutex mu_;
  std::map<Key, ModifiedProblem> entries_;
};

}  // namespace interview
