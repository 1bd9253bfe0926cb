# Copyright 2026 The Interview Eval Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Multi-turn interview evaluation of language models.

The heavy lifting happens in the native ``_core`` module; this package
exchanges data with it as plain Python dicts and lists.
"""

import json
import os
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from . import _core
from ._core import (
    ConfigError,
    DegenerateVariance,
    EmptyInput,
    InsufficientData,
    InsufficientRepetitions,
    InterviewError,
    KeyMismatch,
    ValidationError,
    builtin_profile_names,
    format_half_up,
    render_template,
    sample_std,
    student_t_two_tailed_p,
)

__all__ = [
    "ConfigError",
    "DegenerateVariance",
    "EmptyInput",
    "InsufficientData",
    "InsufficientRepetitions",
    "InterviewError",
    "KeyMismatch",
    "ValidationError",
    "builtin_profile_names",
    "compute_scores",
    "contamination_compare",
    "format_half_up",
    "load_dataset",
    "main",
    "pearson",
    "read_transcripts",
    "render_template",
    "run_cli",
    "sample_std",
    "student_t_two_tailed_p",
]


def run_cli(args: Sequence[str]) -> int:
    """Runs ``interview-eval`` with ``args`` and returns its exit code."""
    return _core.run_cli([os.fspath(a) for a in args])


def load_dataset(path: "os.PathLike[str] | str") -> List[Dict[str, Any]]:
    return json.loads(_core.load_dataset_json(os.fspath(path)))


def read_transcripts(path: "os.PathLike[str] | str") -> List[Dict[str, Any]]:
    """Parsed transcripts of a JSONL file; damaged lines are skipped."""
    return json.loads(_core.read_transcripts_json(os.fspath(path)))


def compute_scores(transcripts: Sequence[Mapping[str, Any]], interactions: int) -> Dict[str, Any]:
    return json.loads(_core.compute_scores_json(json.dumps(list(transcripts)), interactions))


def pearson(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, int]:
    """Pearson r, two-tailed p and the number of points."""
    return _core.pearson(list(x), list(y))


def contamination_compare(
    judge: Mapping[str, float],
    interview: Mapping[str, float],
    uncontaminated: Sequence[str],
    contaminated: Sequence[str],
) -> Dict[str, float]:
    return json.loads(
        _core.contamination_compare_json(dict(judge), dict(interview), list(uncontaminated), list(contaminated))
    )


def main() -> None:
    import sys

    raise SystemExit(run_cli(sys.argv[1:]))
