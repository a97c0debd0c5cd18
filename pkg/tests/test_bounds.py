import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trigsieve.bounds import (BoundReport, Separation, classical_bounds,
                              covering_multiplicity, overlap_count,
                              relaxed_bound, sieve_constant,
                              sieve_constant_exact)
from trigsieve.errors import DomainError, ValidationError
from trigsieve.special import cos_power_integral
from trigsieve.trigpoly import NodeSet
from trigsieve.verifier import clustered_nodes, random_separated_nodes


def test_parse_literals():
    s = Separation.parse("pi/20")
    assert s.pi_rational == (1, 20)
    assert s.value == pytest.approx(math.pi / 20)
    assert Separation.parse("3pi/40").pi_rational == (3, 40)
    assert Separation.parse("2pi").pi_rational == (2, 1)
    assert Separation.parse("pi").pi_rational == (1, 1)
    f = Separation.parse("0.5")
    assert f.pi_rational is None and f.value == 0.5
    assert Separation.parse("2pi/4").pi_rational == (1, 2)  # normalized


@pytest.mark.parametrize("bad", ["pi/0", "junk", "-1", "0", "7.0x", ""])
def test_parse_rejects(bad):
    with pytest.raises(ValidationError):
        Separation.parse(bad)


def test_separation_validation():
    with pytest.raises(DomainError):
        Separation(7.0)
    with pytest.raises(DomainError):
        Separation(0.0)
    with pytest.raises(ValidationError):
        Separation(1.0, (1, 20))  # value does not match the tag
    with pytest.raises(ValidationError):
        Separation.from_pi_fraction(1, 0)


def test_from_nodes_keeps_exactness():
    s = Separation.from_nodes(NodeSet.equispaced(20))
    assert s.pi_rational == (1, 10)
    t = Separation.from_nodes(NodeSet(np.array([-1.0, 0.5, 2.0])))
    assert t.pi_rational is None and t.value == pytest.approx(1.5)


def test_overlap_count_examples():
    assert overlap_count(Separation.parse("pi/20"), 10) == 2
    assert overlap_count(Separation.parse("pi/15"), 10) == 2  # 3/2 rounds up
    assert overlap_count(Separation(1.0), 1) == 4  # 1 + floor(pi)
    assert overlap_count(Separation.parse("2pi"), 1) == 1
    assert overlap_count(Separation.parse("pi/49"), 7) == 7


def test_overlap_count_float_snapping():
    # untagged float within 1e-9 of the integer ratio takes the exact branch
    assert overlap_count(Separation(math.pi / 20), 10) == 2
    assert overlap_count(Separation(math.pi / 20 * (1 + 1e-6)), 10) == 2
    assert overlap_count(Separation(math.pi / 20 * (1 - 1e-6)), 10) == 3


def test_sieve_constant_examples():
    assert sieve_constant(10, Separation.parse("pi/20"), 2) == pytest.approx(
        40 / math.pi, rel=1e-14)
    assert sieve_constant(5, Separation.parse("pi/5"), 1) == pytest.approx(2.5)
    # p = 4: N sigma / (3 pi / 8)
    assert sieve_constant(3, Separation.parse("pi/3"), 4) == pytest.approx(
        8 / math.pi, rel=1e-14)
    with pytest.raises(DomainError):
        sieve_constant(3, Separation(1.0), 0.5)


def test_sieve_constant_exact_matches_float():
    for N in (1, 5, 10):
        for p in range(2, 11):
            delta = Separation.parse(f"pi/{2 * N}")
            exact = sieve_constant_exact(N, delta, p)
            assert exact.value == pytest.approx(
                sieve_constant(N, delta, p), rel=1e-12)


def test_sieve_constant_exact_rendering():
    e = sieve_constant_exact(10, Separation.parse("pi/20"), 2)
    assert str(e) == "40/π"
    assert e.value == pytest.approx(40 / math.pi)
    o = sieve_constant_exact(2, Separation.parse("pi/2"), 3)
    assert o.rational == Fraction(3, 2)  # 3 N sigma / 4 with N=2, sigma=1
    with pytest.raises(DomainError):
        sieve_constant_exact(2, Separation(1.0), 1)
    with pytest.raises(DomainError):
        sieve_constant_exact(2, Separation(1.0), 2.5)


def test_relaxed_bound_branches():
    d = Separation.parse("pi/20")
    assert relaxed_bound(10, d, 2) == pytest.approx(60 / math.pi)
    f = Separation.parse("pi/15")  # fractional branch for N = 10
    assert relaxed_bound(10, f, 2) == pytest.approx(3 * (10 / math.pi + 15 / math.pi))
    assert relaxed_bound(4, Separation(1.0), 3) == pytest.approx(
        4 * (4 / math.pi + 1.0))


@pytest.mark.parametrize("N", [1, 3, 10, 64])
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0, 7.5])
@pytest.mark.parametrize("text", ["pi/20", "pi/15", "1.0", "2pi"])
def test_relaxed_strictly_dominates(N, p, text):
    delta = Separation.parse(text)
    assert sieve_constant(N, delta, p) < relaxed_bound(N, delta, p)


def test_classical_bounds_values():
    d = Separation(0.5)
    out = classical_bounds(8, d, 2)
    assert out["eq2"] == pytest.approx(8 / (2 * math.pi) + 2.0)
    factor = 3 * math.e / 2
    assert out["eq5"] == pytest.approx((8 / math.pi + 2.0) * factor)
    assert out["eq6"] == pytest.approx((9 / (2 * math.pi) + 2.0) * factor)
    assert classical_bounds(8, d, 3)["eq2"] is None


def test_covering_multiplicity_tilings():
    # disjoint tiling by 2N arcs of width pi/N
    for N in (1, 2, 5, 16):
        assert covering_multiplicity(NodeSet.equispaced(2 * N), N) == 1
    for sigma in (2, 3):
        nodes = clustered_nodes(6, sigma)
        assert covering_multiplicity(nodes, 6) == sigma
    assert covering_multiplicity(clustered_nodes(6, 1), 6) == 1


def test_covering_multiplicity_float_path_agrees():
    nodes = NodeSet.equispaced(12).rotated(0.1234)  # drops the exact tags
    assert nodes.pi_fractions is None
    assert covering_multiplicity(nodes, 6) == 1
    assert covering_multiplicity(nodes, 24) <= overlap_count(
        Separation.from_nodes(nodes), 24)


def test_covering_multiplicity_random_never_exceeds_sigma():
    for t in range(50):
        rng = np.random.default_rng([101, t])
        r = int(rng.integers(2, 40))
        nodes = random_separated_nodes(r, 0.5 * 2 * math.pi / r, rng)
        N = int(rng.integers(1, 20))
        sigma = overlap_count(Separation.from_nodes(nodes), N)
        assert covering_multiplicity(nodes, N) <= sigma


def test_bound_report_integer_branch():
    rep = BoundReport.compute(10, Separation.parse("pi/20"), 2)
    assert rep.sigma == 2
    assert rep.branch == "integer"
    assert rep.thm1 == pytest.approx(40 / math.pi)
    assert str(rep.cor2) == "40/π"
    assert rep.cor3 == pytest.approx(60 / math.pi)
    assert rep.eq2 == pytest.approx(10 / (2 * math.pi) + 20 / math.pi)
    obj = rep.to_json()
    assert obj["cor2_exact"] == "40/π"
    assert obj["branch"] == "integer"


def test_bound_report_csv_discipline():
    header = BoundReport.csv_header()
    assert header == "N,p,delta,sigma,thm1,cor2,cor3,eq2,eq5,eq6,branch"
    rep = BoundReport.compute(4, Separation(1.0), 3.5)
    row = rep.csv_row().split(",")
    assert len(row) == len(header.split(","))
    assert row[5] == "" and row[7] == ""  # no exact form, no eq2 off p=2
    assert rep.branch == "fractional"
    # every populated numeric cell round-trips through float()
    for cell in row[:-1]:
        if cell:
            float(cell)


def test_sieve_constant_consistency_with_integral():
    for p in (1.0, 2.0, 3.3, 6.0):
        c = sieve_constant(7, Separation.parse("pi/14"), p)
        assert c * cos_power_integral(p) == pytest.approx(7 * 2, rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(d1=st.floats(0.05, 2 * math.pi), d2=st.floats(0.05, 2 * math.pi),
       N=st.integers(1, 40))
def test_overlap_count_monotone(d1, d2, N):
    lo, hi = sorted((d1, d2))
    assert overlap_count(Separation(lo), N) >= overlap_count(Separation(hi), N)


@settings(max_examples=60, deadline=None)
@given(num=st.integers(1, 8), den=st.integers(4, 400))
def test_parse_round_trip(num, den):
    if math.pi * num / den > 2 * math.pi:
        return
    s = Separation.parse(f"{num}pi/{den}")
    g = math.gcd(num, den)
    assert s.pi_rational == (num // g, den // g)
    assert s.value == pytest.approx(math.pi * num / den)
