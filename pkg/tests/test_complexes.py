import random

import pytest
from hypothesis import given, settings, strategies as st

from affine_ncp.complexes import (
    Namer, build_and_verify_matching, build_xprime, canonical_nice_subcomplex, euler_characteristic, faces,
    fiber_components, fiber_navigation, in_xprime, is_simplex, kd_cells, lam, product, rho, salvetti_fvector,
    verify_nice, xprime_cells, xprime_fvector_inclusion_exclusion,
)
from affine_ncp.coxeter import build
from affine_ncp.shelling import AxialOrdering

SMALL = ["A~2[2,1]", "G~2", "C~2"]
MEDIUM = ["C~3", "B~3", "A~3[2,2]", "A~3[3,1]"]


@pytest.mark.parametrize("g", SMALL + MEDIUM + ["D~4"])
def test_xprime_two_routes(g):
    s = build(g)
    assert build_xprime(s)[1] == xprime_fvector_inclusion_exclusion(s)


def test_frozen_fvectors():
    # values cross-checked against inclusion-exclusion over standard parabolics
    assert build_xprime(build("C~3"))[1] == (1, 41, 117, 78)
    assert build_xprime(build("B~3"))[1] == (1, 40, 114, 76)
    assert build_xprime(build("A~3[3,1]"))[1] == (1, 34, 96, 64)
    assert salvetti_fvector(build("C~3")) == (1, 4, 6, 4)


def _random_cell(s, rng):
    K = sorted(canonical_nice_subcomplex(s), key=lambda c: (len(c), [x.key for x in c]))
    return rng.choice(K)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_simplicial_identities(seed):
    rng = random.Random(seed)
    s = build(rng.choice(SMALL + ["C~3"]))
    c = _random_cell(s, rng)
    fs = faces(c)
    assert len(fs) == len(c) + 1 or len(c) == 0
    for f in fs:
        assert is_simplex(s, f)
    # d_i d_j = d_{j-1} d_i for i < j
    d = len(c)
    for j in range(d + 1):
        for i in range(j):
            if d >= 2:
                assert faces(faces(c)[j])[i] == faces(faces(c)[i])[j - 1]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_navigation_consistent(seed):
    rng = random.Random(seed)
    s = build(rng.choice(SMALL))
    c = _random_cell(s, rng)
    if len(c) == 0:
        return
    nav = fiber_navigation(s, c)
    assert nav.cls in ("i", "ii")
    assert is_simplex(s, nav.rho) and is_simplex(s, nav.lam)
    # lambda and rho are mutually inverse
    assert lam(s, nav.rho) == c and rho(s, nav.lam) == c
    if nav.pi != s.w:
        assert product(s, nav.rho) == s.w


@pytest.mark.parametrize("g", SMALL + MEDIUM)
def test_nice_subcomplex(g):
    s = build(g)
    assert verify_nice(s).ok
    assert euler_characteristic(canonical_nice_subcomplex(s)) == euler_characteristic(xprime_cells(s))
    for c in xprime_cells(s):
        assert in_xprime(s, c)


def test_a2_components():
    s = build("A~2[2,1]")
    comps = fiber_components(s)
    assert sorted(c.d for c in comps if c.kind == "finite") == [1, 2]
    assert len(canonical_nice_subcomplex(s)) == 39
    assert len(kd_cells(s)) == 10


@pytest.mark.parametrize("g", SMALL + MEDIUM)
def test_matching(g):
    s = build(g)
    rep = build_and_verify_matching(s)
    assert rep.ok, rep.counterexample
    assert rep.critical_fvector == rep.xprime_fvector


@pytest.mark.parametrize("tie", ["lex", "reverse"])
def test_matching_tie_policies_g2(tie):
    s = build("G~2")
    rep = build_and_verify_matching(s, AxialOrdering(s, (-6, 7), tie))
    assert rep.ok and len(rep.pairs) == 19


def test_names():
    s = build("A~2[2,1]")
    nm = Namer(s, AxialOrdering(s))
    assert nm.element(s.w) == "w"
    assert nm.simplex(tuple(s.iso(r) for r in s.simples)) == "[a1|b|c0]"
