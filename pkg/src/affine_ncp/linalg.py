"""Small exact linear algebra over the rationals.

Matrices are lists of rows of Fractions (or ints).  Dimensions here never
exceed ~10, so plain Gaussian elimination is fine.
"""
from fractions import Fraction
from math import gcd


def frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


def matvec(M, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(M):
    return [list(r) for r in zip(*M)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rref(M):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    A = [[frac(x) for x in row] for row in M]
    if not A:
        return A, []
    nr, nc = len(A), len(A[0])
    piv = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        k = next((i for i in range(r, nr) if A[i][c] != 0), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(nr):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    return A[:r], piv


def rank(M):
    return len(rref(M)[1]) if M else 0


def int_rank(M):
    """Rank of an integer matrix by fraction-free elimination."""
    A = [list(r) for r in M]
    if not A:
        return 0
    nr, nc = len(A), len(A[0])
    r = 0
    for c in range(nc):
        k = next((i for i in range(r, nr) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        p = A[r][c]
        for i in range(r + 1, nr):
            f = A[i][c]
            if f:
                row = [p * x - f * y for x, y in zip(A[i], A[r])]
                g = gcd(*row)
                A[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == nr:
            break
    return r


def nullspace(M, ncols=None):
    """Basis of {x : Mx = 0}."""
    if not M:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, piv = rref(M)
    nc = len(M[0])
    free = [c for c in range(nc) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * nc
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(M, b):
    """One solution x of Mx = b, or None if inconsistent."""
    nc = len(M[0])
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, piv = rref(aug)
    if nc in piv:
        return None
    x = [Fraction(0)] * nc
    for row, pc in zip(R, piv):
        x[pc] = row[nc]
    return tuple(x)


def independent_rows(vectors):
    """A maximal linearly independent subset (as an rref basis of the span)."""
    if not vectors:
        return []
    R, _ = rref(vectors)
    return [tuple(r) for r in R]


def in_span(v, basis):
    if not basis:
        return all(x == 0 for x in v)
    return rank(list(basis) + [v]) == rank(list(basis))


def project(v, basis):
    """Orthogonal projection of v onto span(basis); basis need not be orthogonal."""
    if not basis:
        return tuple(Fraction(0) for _ in v)
    G = [[dot(a, b) for b in basis] for a in basis]
    c = solve(G, [dot(a, v) for a in basis])
    out = [Fraction(0)] * len(v)
    for ci, b in zip(c, basis):
        for j, x in enumerate(b):
            out[j] += ci * x
    return tuple(out)


def orth_complement(basis, n):
    """Basis of the orthogonal complement of span(basis) in Q^n."""
    return nullspace([list(b) for b in basis], n) if basis else nullspace([], n)


def primitive(v):
    """Scale a rational vector to a primitive integer vector, first nonzero positive."""
    den = 1
    for x in v:
        den = den * frac(x).denominator // gcd(den, frac(x).denominator)
    ints = [int(frac(x) * den) for x in v]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)
