# Copyright 2026 The decolab Authors
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

"""Spectral and decoherence analysis of unital completely positive maps."""

import json as _json

from ._decolab import *  # noqa: F401,F403
from ._decolab import analyze_json as _analyze_json
from ._decolab import run_example as _run_example

__version__ = "0.1.0"


def analyze(spec):
    """Analyze an input document given as a dict or a JSON string."""
    text = spec if isinstance(spec, str) else _json.dumps(spec)
    return _json.loads(_analyze_json(text))


def example(name, **params):
    """Run a built-in example and return the report as a dict."""
    return _json.loads(_run_example(name, **params))
