"""Smoke tests for the pycartanq bindings."""

import json

import pycartanq as cq


def test_bracket_h_e():
    # [h, e] = e for the vertical pair at n = 1
    terms = cq.bracket("[1;0;1]", "[1;0;2]", n=1)
    assert terms == [{"alpha": "[1;0;2]", "c": "1"}]


def test_bracket_modular():
    terms = cq.bracket("[1;0;1]", "[1;0;2]", n=1, p=5)
    assert terms == [{"alpha": "[1;0;2]", "c": "1"}]


def test_delta_primitive_part():
    terms = cq.delta("[0;1;0]", "vertical", n=1, p=5, q=0)
    # Delta(x) contains x (x) 1 and 1 (x) x at t-degree 0
    d0 = {(t["left"], t["right"]) for t in terms if t["t"] == 0}
    assert ("D[0;1;0]", "1") in d0
    assert ("1", "D[0;1;0]") in d0


def test_antipode_char0_vs_modular():
    t0 = cq.antipode("[0;1;0]", "vertical", n=1, tdeg=3)
    tp = cq.antipode("[0;1;0]", "vertical", n=1, p=5, q=1)
    assert t0 and tp
    # leading term is -x in both
    assert t0[0]["c"] == "-1"
    assert tp[0]["c"] == "4"


def test_dims():
    d = cq.dims(1, 5)
    assert d["lie"] == 125
    assert d["utq"] == "5^126"
    assert not d["congruence"]
    d3 = cq.dims(3, 5)
    assert d3["congruence"]
    assert d3["lie"] == 5**7 - 1


def test_verify_lie():
    rep = json.loads(cq.verify("lie", n=1))
    assert rep["suite"] == "lie"
    assert rep["checks"]
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_verify_usage_error():
    try:
        cq.verify("twist", n=1, family="horizontal")
    except ValueError:
        pass
    else:
        raise AssertionError("expected UsageError for horizontal at n=1")
