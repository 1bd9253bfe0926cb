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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "interview/analysis.hpp"
#include "interview/cli.hpp"
#include "interview/errors.hpp"
#include "interview/metrics.hpp"
#include "interview/report.hpp"
#include "interview/serialization.hpp"
#include "interview/templates.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace interview {
namespace {

std::vector<InterviewTranscript> transcripts_from(const std::string& text) {
  std::vector<InterviewTranscript> out;
  for (const json& j : json::parse(text)) out.push_back(transcript_from_json(j));
  return out;
}

std::string scores_json(const std::string& transcripts, int interactions) {
  return to_json(compute_scores(transcripts_from(transcripts), interactions)).dump();
}

std::string transcripts_json(const std::filesystem::path& path) {
  json out = json::array();
  for (const auto& t : read_transcripts(path).transcripts) out.push_back(to_json(t));
  return out.dump();
}

std::string dataset_json(const std::filesystem::path& path) {
  json out = json::array();
  for (const auto& p : load_dataset(path)) out.push_back(to_json(p));
  return out.dump();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "interview-eval");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  py::gil_scoped_release release;
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

py::tuple pearson_py(const std::vector<double>& x, const std::vector<double>& y) {
  const Correlation c = pearson(x, y);
  return py::make_tuple(c.r, c.p, c.count);
}

std::string contamination_json(const std::map<std::string, double>& judge,
                               const std::map<std::string, double>& interview,
                               const std::vector<std::string>& uncontaminated,
                               const std::vector<std::string>& contaminated) {
  const auto c = contamination_compare(judge, interview, uncontaminated, contaminated);
  return json{{"judge_uncontaminated", c.judge_uncontaminated},
              {"judge_contaminated", c.judge_contaminated},
              {"interview_uncontaminated", c.interview_uncontaminated},
              {"interview_contaminated", c.interview_contaminated},
              {"judge_gap", c.judge_gap},
              {"interview_gap", c.interview_gap}}
      .dump();
}

}  // namespace
}  // namespace interview

PYBIND11_MODULE(_core, m) {
  using namespace interview;
  m.doc() = "Native core of interview_eval";

  // Translators run newest first, so the base class is registered first.
  const auto& base = py::register_exception<Error>(m, "InterviewError");
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<EmptyInput>(m, "EmptyInput", base);
  py::register_exception<InsufficientData>(m, "InsufficientData", base);
  py::register_exception<DegenerateVariance>(m, "DegenerateVariance", base);
  py::register_exception<InsufficientRepetitions>(m, "InsufficientRepetitions", base);
  py::register_exception<KeyMismatch>(m, "KeyMismatch", base);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def("run_cli", &cli, py::arg("args"), "Runs the command line with the given arguments.");
  m.def("load_dataset_json", &dataset_json, py::arg("path"));
  m.def("read_transcripts_json", &transcripts_json, py::arg("path"));
  m.def("compute_scores_json", &scores_json, py::arg("transcripts"), py::arg("interactions"));
  m.def("pearson", &pearson_py, py::arg("x"), py::arg("y"));
  m.def("sample_std", [](const std::vector<double>& v) { return sample_std(v); }, py::arg("values"));
  m.def("student_t_two_tailed_p", &student_t_two_tailed_p, py::arg("t"), py::arg("df"));
  m.def("contamination_compare_json", &contamination_json, py::arg("judge"), py::arg("interview"),
        py::arg("uncontaminated"), py::arg("contaminated"));
  m.def("format_half_up", &format_half_up, py::arg("x"), py::arg("decimals"));
  m.def("render_template", &render_template, py::arg("template"), py::arg("variables"));
  m.def("builtin_profile_names", &builtin_profile_names);
}
