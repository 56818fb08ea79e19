import pytest

import twistforge as tf

MODEL = {"vars": 3, "terms": [{"e": [5, 0, 0], "c": "1"}, {"e": [0, 5, 0], "c": "1"}, {"e": [1, 0, 4], "c": "1"}]}
PSI = {"m": 4, "a": [0, 0, 1]}


def test_p2_report_passes():
    r = tf.verify_paper_example("p2", m=2)
    assert r["overall"] == "PASS"
    assert r["exit_code"] == 0
    kinds = [c["kind"] for c in r["certificates"]]
    assert "non-norm" in kinds and "weil" in kinds


def test_recheck_round_trip():
    r = tf.verify_paper_example("p3", m=2)
    assert any("DISCREPANCY" in n for n in r["notes"])
    again = tf.recheck(r)
    assert again["overall"] == "PASS"


def test_diagonal_twist_over_gaussian_field():
    t = tf.diagonal_twist(MODEL, PSI, "2")
    coeffs = {tuple(term["e"]): term["c"] for term in t["twisted_form"]["terms"]}
    assert coeffs[(1, 0, 4)] == ["2", "0"]
    assert coeffs[(5, 0, 0)] == ["1", "0"]


def test_cusp_is_singular():
    cusp = {"vars": 3, "terms": [{"e": [2, 1, 0], "c": "1"}, {"e": [0, 0, 3], "c": "-1"}]}
    c = tf.certify_smooth(cusp)
    assert c["smooth"] is False and c["conclusive"] is True


def test_factor_over_q():
    unit, factors = tf.factor_over_q([-1, 0, 1])
    assert sorted(f for f, _ in factors) == [["-1", "1"], ["1", "1"]]


def test_errors_are_typed():
    with pytest.raises(tf.MalformedInput):
        tf.run_check("smooth", [{"vars": 3, "terms": [{"e": [1, 2], "c": "1"}]}])
    with pytest.raises(tf.TwistforgeError):
        tf.diagonal_twist(MODEL, PSI, "0")


def test_conditions():
    r = tf.run_check("conditions", d=5, n=2)
    assert "gcd condition met" in r["notes"]
    r = tf.run_check("conditions", d=4, n=3, field_kind="real")
    assert r["overall"] == "INCONCLUSIVE" and r["exit_code"] == 3
