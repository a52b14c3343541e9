# Copyright 2026 The tempnorm Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Temporal expression normalization through slot-filling masked LMs."""

import json

from tempnorm._tempnorm import (
    NUM_SLOTS,
    DataError,
    Normalizer,
    anchor,
    decode,
    encode,
    evaluate_json,
    parse_inline,
)


def evaluate(gold, pred):
  """Scores parallel lists of JSON-line documents; returns a dict."""
  return json.loads(evaluate_json(list(gold), list(pred)))


__all__ = [
    "NUM_SLOTS",
    "DataError",
    "Normalizer",
    "anchor",
    "decode",
    "encode",
    "evaluate",
    "parse_inline",
]
