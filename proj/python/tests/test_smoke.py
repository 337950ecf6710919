import json
from fractions import Fraction

import pytest

import newmc

MAXIMAL = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)],
]


def test_spec_and_support():
    spec = newmc.make_spec(3, 6, "ps")
    assert (spec.p, spec.n, spec.n0, spec.n1) == (3, 6, 3, 3)
    ev = newmc.PhiEvaluator(spec)
    rep = newmc.verify_support(ev, 4, points=60, seed=7)
    assert rep["violations"] == 0
    assert rep["points"] >= 60


def test_phi_at_identity_level():
    ev = newmc.PhiEvaluator(newmc.make_spec(5, 6, "sc-unramified"))
    assert abs(ev.phi(6, 0, 1) - 1) < 1e-12
    assert ev.is_zero(6, 0, 1, (-3, 1))


def test_fast_matches_naive():
    ev = newmc.PhiEvaluator(newmc.make_spec(3, 8, "ps"))
    for unit in (1, 2, 4, 5):
        naive = ev.phi(5, 0, unit, (-3, 1))
        fast, pairs = ev.phi_fast(5, 0, unit, (-3, 1))
        assert abs(naive - fast) <= 1e-9 * max(1.0, abs(naive))
        assert pairs >= 0


def test_decay_bound():
    ev = newmc.PhiEvaluator(newmc.make_spec(3, 6, "ps"))
    rep = newmc.verify_decay(ev, 4, samples=40, seed=3)
    assert rep["max_ratio"] <= rep["bound"]


def test_exponents_exact():
    assert newmc.supnorm_exponent(0, 1, Fraction(1, 2)) == Fraction(5, 12)
    assert newmc.depth_exponent(0, 1, Fraction(1, 2)) == Fraction(5, 24)
    eta, amp = newmc.filtration_schedule({3: 4}, 0, Fraction(1, 2))
    assert eta[3] == [Fraction(k, 8) for k in range(5)]
    assert amp == Fraction(1, 6)
    with pytest.raises(ValueError):
        newmc.supnorm_exponent(Fraction(1, 2), 1, 0)


def test_quaternion_counts():
    assert newmc.hilbert_symbol(3, -1, 3) == -1
    assert newmc.hilbert_symbol(3, -1, 5) == 1
    A = newmc.QuaternionAlgebra(3, -1)
    assert A.discriminant == 6
    assert newmc.verify_maximal_order(A, MAXIMAL)
    norms = list(range(1, 9))
    N, fp = newmc.conductor_counts(A, MAXIMAL, 1, (0.1, 1.2), 1.0, norms)
    _, box = newmc.conductor_counts(A, MAXIMAL, 1, (0.1, 1.2), 1.0, norms, enumerator="box")
    assert N == 1
    assert fp == box
    assert [fp[m] for m in norms] == [8, 8, 16, 8, 60, 16, 108, 8]


def test_run_task_exponent_and_errors():
    out = newmc.run_task(json.dumps({"task": "exponent", "eta1": "0", "delta": "1", "eta2": "1/2", "a1": {"3": 4}}))
    assert out["ok"]
    assert "5/12" in out["report"]
    with pytest.raises(newmc.ConfigError):
        newmc.run_task(json.dumps({"task": "verify-support", "p": 3, "n": 5, "family": "ps"}))
