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

import os
import pathlib

import numpy as np
import pytest

import tbvqd

ROOT = pathlib.Path(os.environ.get("TBVQD_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
MODELS = ROOT / "models"


def test_version():
    assert tbvqd.__version__


def test_load_model_and_bloch_matrix():
    m = tbvqd.load_model(str(MODELS / "cuo2.toml"))
    assert m.num_orbitals == 3
    h = m.bloch_matrix([0.0, 0.0])
    assert h.shape == (3, 3)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-12)
    np.testing.assert_allclose(tbvqd.exact_bands(h), np.linalg.eigvalsh(h), atol=1e-10)


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        tbvqd.parse_model("name = 1\n[[orbitals\n")


def test_protocol_matches_rayleigh_quotient():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (a + a.conj().T) / 2
    angles = list(rng.uniform(-np.pi, np.pi, size=6))
    amps = np.array(tbvqd.ansatz_amplitudes(4, angles))
    out = tbvqd.evaluate_protocol(h, angles)
    assert out["energy"] == pytest.approx(np.real(amps.conj() @ h @ amps), abs=1e-12)
    assert len(out["settings"]) == 3
    assert out["correlators"][(0, 2)][1] == "product_rule"


def test_ansatz_round_trip():
    target = np.array([0.5, 0.5j, -0.5, 0.5])
    amps = np.array(tbvqd.ansatz_amplitudes(4, tbvqd.ansatz_angles_for(list(target))))
    assert abs(np.vdot(target, amps)) == pytest.approx(1.0, abs=1e-12)


def test_analytic_band_sweep():
    m = tbvqd.load_model(str(MODELS / "cuo2.toml"))
    r = tbvqd.band_sweep(m, analytic=True, restarts=0, points_per_segment=5)
    assert r["failures"] == 0
    assert r["max_abs_error"] < 1e-6
    assert len(r["energy_vqd"]) == len(r["path_distance"])


def test_execution_report():
    rows = tbvqd.execution_report([3], [10000])
    assert rows == [{"n_qubits": 3, "shots": 10000, "constant": 30000, "conventional": 70000}]


def test_correlator_trials_analytic():
    stats = tbvqd.correlator_trials(5, 6, [(1, 3)], trials=2, analytic=True)
    assert len(stats) == 2
    for s in stats:
        assert s["std_re"] == 0.0 and s["std_im"] == 0.0
        assert abs(s["mean"] - s["exact"]) < 1e-12


def test_validate():
    ok, table = tbvqd.validate(max_qubits=4, samples=5)
    assert ok, table
