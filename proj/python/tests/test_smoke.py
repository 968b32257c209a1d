import math

import numpy as np
import pytest

import pnorm


def test_vector_norms_and_pairing():
    assert pnorm.vector_p_norm(np.array([3, 4], dtype=complex), 2) == pytest.approx(5)
    assert pnorm.vector_p_norm(np.array([1, -2, 0.5], dtype=complex), math.inf) == 2
    assert pnorm.holder_pairing(np.array([1j, 0]), np.array([1j, 3])) == -1
    y = np.array([1 + 2j, -3, 0.5j])
    eta = pnorm.duality_map(y, 3.0)
    assert pnorm.holder_pairing(eta, y).real == pytest.approx(pnorm.vector_p_norm(y, 3.0))
    assert pnorm.vector_p_norm(eta, 1.5) == pytest.approx(1.0)


def test_norms_against_numpy():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    spectral = np.linalg.svd(a, compute_uv=False)[0]
    assert pnorm.op_norm(a, 2, method="exact")["value"] == pytest.approx(spectral, rel=1e-12)
    assert pnorm.op_norm(a, 2, method="estimate")["value"] == pytest.approx(spectral, rel=1e-8)
    assert pnorm.op_norm(a, 1)["value"] == pytest.approx(np.abs(a).sum(axis=0).max(), rel=1e-14)
    est = pnorm.op_norm(a, 1.5)
    assert est["method"] == "power_iteration"
    orc = pnorm.op_norm_oracle(a, 1.5, resolution=16)
    assert orc <= est["value"] + 1e-9
    assert est["value"] <= pnorm.oracle_upper_bound(orc, 3, 1.5, 16)
    assert pnorm.transpose_duality_residual(a, 1.5, 2.5) <= 2e-3


def test_errors():
    with pytest.raises(ValueError):
        pnorm.op_norm(np.eye(2, dtype=complex), 0.5)
    with pytest.raises(ValueError):
        pnorm.op_norm(np.eye(2, dtype=complex), 1.5, method="exact")
    with pytest.raises(ValueError):
        pnorm.op_norm(np.eye(2, dtype=complex), 1.5, restarts=0)
    with pytest.raises(pnorm.BudgetExceeded):
        pnorm.op_norm_oracle(np.eye(5, dtype=complex), 1.5, resolution=64)


def test_sd_counterexample():
    sd = pnorm.sd_counterexample()
    assert sd["reproduced"]
    assert sd["report"]["element_norm"] == 4.0
    assert abs(sd["report"]["pairing_sup"] - math.sqrt(10)) <= 1e-4
    claim = pnorm.sd_claim_oracle()
    assert abs(claim["value"] - math.sqrt(10)) <= 1e-10
    values = [c["value"] for c in claim["cases"]]
    assert values[:2] == [0.0, pytest.approx(4.0)]
    assert values[2:] == [pytest.approx(2 * math.sqrt(10), abs=1e-10)] * 2


def test_block_gap_and_upper_triangular():
    rng = np.random.default_rng(1)
    blocks = []
    for _ in range(2):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = rng.normal() + 1j * rng.normal()
        m[1:3, 1:3] = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m[3, 3] = rng.normal()
        blocks.append(m)
    x = np.vstack(blocks)
    rep = pnorm.cstar_gap(x, 1.5, composition=[1, 2, 1])
    assert rep["certified"] == "constructive"
    assert rep["cstar_like"]
    row = pnorm.cstar_gap(x.T.copy(), 2.0, side="row", composition=[1, 2, 1])
    assert row["side"] == "row" and row["gap"] <= 1e-6
    ut = pnorm.upper_triangular_example(1.5, 2)
    assert ut["pairing_sup"] == 0.0
    assert ut["gap"] == pytest.approx(2 ** (1 / 1.5))
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    again = pnorm.cstar_gap(np.vstack([e12, e12]), 1.0, basis=[e12])
    assert again["gap"] == again["element_norm"] == 2.0


def test_sweep_p2():
    rows = pnorm.sd_sweep([2.0], restarts=64)
    assert rows[0]["gap"] <= 1e-4
