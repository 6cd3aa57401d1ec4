import math

import numpy as np
import pytest

import lfree


def test_words_and_leinert():
    assert lfree.reduce_word("Z,Z", "aAb") == "b"
    assert lfree.multiply("Z,C2", "ab", "b") == "a"
    assert lfree.inverse("Z,Z", "ab") == "BA"
    v = lfree.leinert("Z,Z", ["a", "A", "b", "B"])
    assert v["status"] == "leinert" and v["method"] == "folding_exact"
    neg = lfree.leinert("Z", ["1", "a", "aa"])
    assert neg["status"] == "not_leinert"
    assert lfree.verify_witness("Z", ["1", "a", "aa"], neg["witness"])
    assert lfree.leinert("Z,Z", ["a", "b", "ab"], mode="bounded", depth=3)["status"] == "undecided"
    with pytest.raises(ValueError):
        lfree.reduce_word("Z,Z", "a c")


def test_moments():
    rows = lfree.laplacian_moments(2, 3)
    assert [r["value"] for r in rows] == ["4", "28", "232"]
    assert all(r["provenance"] == "exact" for r in rows)
    generic = lfree.moments("Z,Z", [("1", "a"), ("1", "A"), ("1", "b"), ("1", "B")], 2)
    assert [r["value"] for r in generic] == ["4", "28"]
    assert rows[-1]["running_max"] <= lfree.kesten_norm(2)


def test_closed_forms():
    assert lfree.kesten_norm(13) == pytest.approx(10)
    assert lfree.leinert_norm(5) == (pytest.approx(4), None)
    value, warning = lfree.leinert_norm(1)
    assert value == 0 and warning
    assert lfree.qpq_norm(0.5, 1 / 3) == pytest.approx(0.971405, abs=1e-6)
    assert lfree.paving_norm_bound(4) == pytest.approx(math.sqrt(3) / 2)
    assert lfree.paving_size(0.5) == 16
    with pytest.raises(ValueError):
        lfree.kesten_norm(0)


def test_matrix_model():
    u = lfree.haar_unitary(20, seed=3)
    assert np.allclose(u @ u.conj().T, np.eye(20), atol=1e-10)
    assert np.array_equal(u, lfree.haar_unitary(20, seed=3))
    assert lfree.op_norm(2 * u) == pytest.approx(2)
    x = lfree.random_contraction(12, seed=1)
    res = lfree.dilate([x, 0.5 * x], seed=2)
    big = res["unitaries"][0]
    assert big.shape == (36, 36)
    assert np.array_equal(big[:12, :12], x)
    assert res["max_unitarity_residual"] < 1e-8
    p = lfree.pave(3, x, seed=4)
    assert p["identity_residual"] < 1e-8
    assert sum(p["projections"]) == pytest.approx(np.eye(12), abs=1e-12)
    d = lfree.lfree_defect([lfree.haar_unitary(50, seed=5, stream=i) for i in range(2)], 4)
    assert d["max_abs_trace"] < 0.5


def test_reports_are_deterministic():
    a = lfree.pave_report(3, 60, 3, 7)
    b = lfree.pave_report(3, 60, 3, 7)
    assert a == b
    assert a["command"] == "pave"
    assert a["per_trial"][0]["provenance"] == "sampled(7,0)"
    assert a["targets"]["paper_value"] == pytest.approx(2 * math.sqrt(2) / 3)
    assert issubclass(lfree.AssertionFailure, ArithmeticError)
