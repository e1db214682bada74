# Copyright 2026 The tbvqd Authors
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
"""Tight-binding band structures via a constant three-setting measurement protocol."""

from ._core import (  # noqa: F401
    Model,
    NumericalError,
    ParseError,
    ValidationError,
    __version__,
    ansatz_amplitudes,
    ansatz_angles_for,
    band_sweep,
    correlator_trials,
    evaluate_protocol,
    exact_bands,
    execution_report,
    load_model,
    parse_model,
    qubit_hamiltonian,
    qwc_group_count,
    run_cli,
    validate,
)
