"""Smoke test for the qsync Python extension.

Build first:  maturin develop -m crates/py/Cargo.toml --release
Run:          python -m pytest python/smoke_test.py
"""

import json
import math

import qsync

SPIN = {
    "model": {"type": "driven_spin1", "params": {"gamma_g": 1, "gamma_d": 10, "drive": 0.3}},
    "measures": [{"id": "omega_r"}, {"id": "s_coh"}, {"id": "l1_coherence"}],
}


def test_valid_config_has_no_errors():
    assert qsync.validate_config(json.dumps(SPIN)) == []


def test_invalid_config_reports_paths():
    bad = {"model": {"type": "driven_vdp", "params": {"gamma_d": -1}}}
    errors = qsync.validate_config(json.dumps(bad))
    assert any("model.params.gamma_d" in e for e in errors)


def test_steady_state_is_a_state():
    re, im, residual = qsync.steady_state(json.dumps(SPIN))
    assert len(re) == 3 and len(im) == 3
    assert math.isclose(sum(re[i][i] for i in range(3)), 1.0, abs_tol=1e-12)
    assert residual < 1e-9


def test_single_site_omega_r_is_coherence_entropy():
    values = dict(qsync.measure(json.dumps(SPIN)))
    assert math.isclose(values["omega_r"], values["s_coh"], abs_tol=1e-9)
    assert values["l1_coherence"] > 0


def test_omega_of_plus_state():
    half = [[0.5, 0.5], [0.5, 0.5]]
    zero = [[0.0, 0.0], [0.0, 0.0]]
    assert math.isclose(qsync.omega_r(half, zero, [2]), math.log(2), rel_tol=1e-9)
    assert math.isclose(qsync.omega_d(half, zero, [2]), 1.0, abs_tol=1e-6)


def test_sweep_emits_csv():
    cfg = dict(SPIN)
    cfg["sweep"] = {
        "axis1": {"param": "detuning", "min": -1, "max": 1, "count": 2},
        "axis2": {"param": "drive", "min": 0, "max": 0.5, "count": 2},
    }
    lines = qsync.run_sweep(json.dumps(cfg)).splitlines()
    assert lines[0] == "axis1,axis2,omega_r,s_coh,l1_coherence,residual,truncation_delta"
    assert len(lines) == 5
