import math
import os
from pathlib import Path

import pytest

import tsqc

DATA = Path(os.environ.get("TSQC_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


def test_three_holes_abl():
    s = tsqc.three_holes()
    m1, m2, m_full = s.candidates
    assert tsqc.abl(s.two_state, m1)["hole1"] == pytest.approx(1.0, abs=1e-12)
    assert tsqc.abl(s.two_state, m2)["hole2"] == pytest.approx(1.0, abs=1e-12)
    for p in tsqc.abl(s.two_state, m_full).values():
        assert p == pytest.approx(1 / 3, abs=1e-12)


def test_kastner_sum():
    s = tsqc.three_holes()
    weights, normalized = tsqc.kastner_rule(s.two_state, s.candidates[2])
    assert sum(weights.values()) == pytest.approx(3.0, abs=1e-12)
    assert not normalized


def test_born_and_measurement():
    r = 1 / math.sqrt(2)
    z = tsqc.Measurement.from_basis("Z", [tsqc.Ket.basis(2, 0), tsqc.Ket.basis(2, 1)], ["0", "1"])
    assert z.is_valid
    assert tsqc.born_predictive(tsqc.Ket([r, r]), z) == pytest.approx({"0": 0.5, "1": 0.5})
    lonely = tsqc.Measurement.from_partition("M", [tsqc.Ket.basis(2, 0), tsqc.Ket.basis(2, 1)], [("a", [0])])
    assert any(v["invariant"] == "completeness" for v in lonely.validation())


def test_errors_are_value_errors():
    with pytest.raises(tsqc.TsqcError, match="ZeroVector"):
        tsqc.Ket([0, 0])
    with pytest.raises(ValueError):
        tsqc.TwoState(tsqc.Ket.basis(2, 0), tsqc.Ket.basis(3, 0))


def test_report_and_files():
    s = tsqc.load_scenario(str(DATA / "three_holes.json"))
    rep = tsqc.counterfactual_report(s, trials=20000, seed=42)
    assert rep["generator"] == tsqc.generator
    assert all(c["consistent"] for c in rep["candidates"])
    with pytest.raises(tsqc.TsqcError, match="ParseError"):
        tsqc.parse_scenario("{")


def test_raffle_and_verify():
    r = tsqc.quantum_raffle(100, held=False, seed=1)
    assert r["counts"]["null"] == 100 and r["contradiction"]
    code, text = tsqc.verify(3, quick=True, scenarios=10)
    assert code == 0 and "result: PASS" in text
