from fractions import Fraction

import pytest

import dptlab


def and2():
    return dptlab.Function(2, 2, [0, 0, 0, 1])


def test_and_one_query():
    mu = dptlab.Distribution.uniform(2)
    assert dptlab.opt_success(and2(), mu, 1) == Fraction(3, 4)


def test_float_distribution():
    mu = dptlab.Distribution([0.1, 0.2, 0.3, 0.4])
    assert not mu.exact
    assert dptlab.opt_success(and2(), mu, 1) == pytest.approx(0.8)


def test_parse_round_trip():
    f = dptlab.Function.parse("n 2 B 2\n0 1 1 0\n")
    assert f.values == [0, 1, 1, 0]
    assert dptlab.Function.parse(str(f)).values == f.values


def test_shaltiel_example():
    r = dptlab.shaltiel(2, "1/4", 1, 8)
    assert r["exact"] == Fraction(5857, 16384)
    assert r["lower"] <= r["exact"] <= r["bound"]


def test_verify_report():
    report = dptlab.verify("1.1", and2(), dptlab.Distribution.uniform(2), 1, alpha="1/2", k=2)
    assert report["format_version"] == 1
    assert report["cells"][0]["oracle"] == "9/16"
    assert report["verdict"] == "holds"


def test_yao_parity():
    r = dptlab.yao(dptlab.Function(2, 2, [0, 1, 1, 0]), 1, iterations=500)
    assert r["gap"] >= 0
    assert abs(r["value"] - 0.5) < 1e-3


def test_errors_are_raised():
    with pytest.raises(dptlab.Error):
        dptlab.Distribution(["1/2", "1/4", "1/4"])
    with pytest.raises(TypeError):
        dptlab.dpt_bound(0.25, 1, 2)
