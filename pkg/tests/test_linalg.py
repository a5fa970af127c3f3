from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from affine_ncp import linalg as la

entries = st.integers(-4, 4)
mats = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(mats)
@settings(max_examples=100, deadline=None)
def test_rank_nullity(M):
    n = len(M[0])
    N = la.nullspace(M, n)
    assert la.rank(M) + len(N) == n
    for v in N:
        assert all(x == 0 for x in la.matvec(M, v))
    assert la.int_rank(M) == la.rank(M)


@given(mats, st.lists(entries, min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_solve(M, x):
    x = [F(v) for v in x[: len(M[0])]]
    b = la.matvec(M, x)
    y = la.solve(M, b)
    assert y is not None and list(la.matvec(M, y)) == list(b)


def test_inconsistent():
    assert la.solve([[1, 1], [2, 2]], [1, 3]) is None


@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_projection_residual_orthogonal(basis):
    if la.rank(basis) == 0:
        return
    v = (F(1), F(2), F(-3))
    p = la.project(v, basis)
    r = la.vsub(v, p)
    assert all(la.dot(r, b) == 0 for b in basis)
    assert la.in_span(p, basis)
