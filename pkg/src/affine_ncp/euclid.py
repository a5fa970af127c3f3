"""Exact Euclidean isometries with rational coordinates.

An isometry x -> Lx + t is stored with a common denominator: linear = lin/den,
trans = tr/den with integer entries, reduced so the representation is unique.
That makes hashing and composition cheap.

Ambient.inert is a (possibly empty) set of integer vectors spanning a subspace
U that every group element fixes pointwise.  Geometry then happens in the
orthogonal complement of U: this covers the quotient R^{n+1}/<1,...,1> used for
type A~ and the embeddings of G~2, E~6, E~7 in larger coordinate spaces.
"""
from fractions import Fraction
from math import gcd

from . import linalg as la


class Ambient:
    def __init__(self, dim, inert=()):
        self.dim = dim
        self.inert = tuple(tuple(int(x) for x in v) for v in inert)
        for v in self.inert:
            if len(v) != dim or not any(v):
                raise ValueError("bad inert vector")
        self.eff_dim = dim - la.rank([list(v) for v in self.inert]) if self.inert else dim

    @property
    def quotient_dir(self):
        if len(self.inert) == 1 and len(set(self.inert[0])) == 1:
            return self.inert[0]
        return None

    def canon(self, v):
        """Project a vector (or point) onto the complement of the inert subspace."""
        v = tuple(la.frac(x) for x in v)
        if not self.inert:
            return v
        return la.vsub(v, la.project(v, self.inert))

    def __repr__(self):
        return f"Ambient({self.dim}, inert={self.inert})"


def _reduce(den, lin, tr):
    g = gcd(den, *lin, *tr)
    if den < 0:
        g = -g
    if g != 1:
        den //= g
        lin = tuple(x // g for x in lin)
        tr = tuple(x // g for x in tr)
    return den, lin, tr


def _to_scaled(rows, vec):
    den = 1
    for x in [y for r in rows for y in r] + list(vec):
        d = la.frac(x).denominator
        den = den * d // gcd(den, d)
    lin = tuple(int(la.frac(x) * den) for r in rows for x in r)
    tr = tuple(int(la.frac(x) * den) for x in vec)
    return _reduce(den, lin, tr)


class Isometry:
    """x -> linear*x + trans, with exact rational entries."""

    __slots__ = ("n", "den", "lin", "tr", "amb", "_hash", "_len", "_ell", "_mmf")

    def __init__(self, linear, trans, amb=None, check=True):
        n = len(trans)
        amb = amb or Ambient(n)
        if len(linear) != n or any(len(r) != n for r in linear):
            raise ValueError("dimension mismatch")
        trans = amb.canon(trans)
        den, lin, tr = _to_scaled(linear, trans)
        self._set(n, den, lin, tr, amb)
        if check:
            L = self.linear
            if la.matmul(la.transpose(L), L) != la.identity(n):
                raise ValueError("linear part is not orthogonal")
            for v in amb.inert:
                if la.matvec(L, v) != tuple(Fraction(x) for x in v):
                    raise ValueError("linear part moves the inert subspace")

    def _set(self, n, den, lin, tr, amb):
        self.n, self.den, self.lin, self.tr, self.amb = n, den, lin, tr, amb
        self._hash = None
        self._len = None
        self._ell = None
        self._mmf = None

    @classmethod
    def raw(cls, n, den, lin, tr, amb):
        obj = cls.__new__(cls)
        obj._set(n, den, lin, tr, amb)
        return obj

    @classmethod
    def identity(cls, amb):
        n = amb.dim
        return cls.raw(n, 1, tuple(int(i == j) for i in range(n) for j in range(n)), (0,) * n, amb)

    @classmethod
    def translation(cls, vec, amb):
        n = amb.dim
        return cls(la.identity(n), vec, amb, check=False)

    # representation
    @property
    def linear(self):
        n, d = self.n, self.den
        return tuple(tuple(Fraction(self.lin[i * n + j], d) for j in range(n)) for i in range(n))

    @property
    def trans(self):
        return tuple(Fraction(x, self.den) for x in self.tr)

    @property
    def key(self):
        return (self.den, self.lin, self.tr)

    def __eq__(self, other):
        return isinstance(other, Isometry) and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self):
        return f"Isometry(linear={[[str(x) for x in r] for r in self.linear]}, trans={[str(x) for x in self.trans]})"

    def is_identity(self):
        return self.tr == (0,) * self.n and self.den == 1 and self.lin == Isometry.identity(self.amb).lin

    def is_translation(self):
        return self.lin == tuple(self.den * int(i == j) for i in range(self.n) for j in range(self.n))

    # group operations
    def __mul__(self, other):
        return compose(self, other)

    def inv(self):
        return invert(self)

    def __call__(self, p):
        return apply(self, p)

    # geometry, cached
    def _A_int(self):
        n, d = self.n, self.den
        return [[self.lin[i * n + j] - (d if i == j else 0) for j in range(n)] for i in range(n)]

    @property
    def length(self):
        if self._len is None:
            A = self._A_int()
            r = la.int_rank(A)
            aug = [row + [t] for row, t in zip(A, self.tr)]
            self._ell = la.int_rank(aug) == r
            self._len = r if self._ell else r + 2
        return self._len

    @property
    def elliptic(self):
        self.length
        return self._ell

    def mov_min_fix(self):
        if self._mmf is None:
            self._mmf = _mov_min_fix(self)
        return self._mmf


def compose(u, v):
    """u*v = u after v."""
    if u.n != v.n:
        raise ValueError("dimension mismatch")
    n = u.n
    a, b = u.lin, v.lin
    rows = [a[i * n:(i + 1) * n] for i in range(n)]
    cols = [b[j::n] for j in range(n)]
    lin = tuple(sum(x * y for x, y in zip(r, c)) for r in rows for c in cols)
    tr = tuple(sum(x * y for x, y in zip(r, v.tr)) + v.den * t for r, t in zip(rows, u.tr))
    den, lin, tr = _reduce(u.den * v.den, lin, tr)
    return Isometry.raw(n, den, lin, tr, u.amb)


def invert(u):
    n, d = u.n, u.den
    lt = tuple(u.lin[j * n + i] for i in range(n) for j in range(n))
    tr = tuple(-sum(lt[i * n + j] * u.tr[j] for j in range(n)) for i in range(n))
    den, lin, tr = _reduce(d * d, tuple(x * d for x in lt), tr)
    return Isometry.raw(n, den, lin, tr, u.amb)


def apply(u, p):
    if len(p) != u.n:
        raise ValueError("dimension mismatch")
    n = u.n
    p = tuple(la.frac(x) for x in p)
    out = tuple((sum(u.lin[i * n + j] * p[j] for j in range(n)) + u.tr[i]) / u.den for i in range(n))
    return u.amb.canon(out) if u.amb.inert else out


def power(u, k):
    res = Isometry.identity(u.amb)
    base = u if k >= 0 else invert(u)
    for _ in range(abs(k)):
        res = compose(res, base)
    return res


def conjugate(u, g):
    """g^{-1} u g."""
    return compose(invert(g), compose(u, g))


class AffineSubspace:
    """base + span(directions); directions kept in reduced echelon form."""

    def __init__(self, base=None, directions=(), empty=False):
        self.empty = empty
        if empty:
            self.base, self.dirs = None, ()
            return
        self.base = tuple(la.frac(x) for x in base)
        self.dirs = tuple(la.independent_rows([list(d) for d in directions])) if directions else ()

    @property
    def dim(self):
        return -1 if self.empty else len(self.dirs)

    def contains_point(self, p):
        if self.empty:
            return False
        return la.in_span(la.vsub(tuple(la.frac(x) for x in p), self.base), self.dirs)

    def contains(self, other):
        """other is a subset of self."""
        if other.empty:
            return True
        if self.empty:
            return False
        return self.contains_point(other.base) and all(la.in_span(d, self.dirs) for d in other.dirs)

    def __eq__(self, other):
        return isinstance(other, AffineSubspace) and self.contains(other) and other.contains(self)

    __hash__ = None

    def span(self):
        """Linear span of the set, as a list of basis vectors."""
        if self.empty:
            return []
        vecs = list(self.dirs) + ([self.base] if any(self.base) else [])
        return la.independent_rows(vecs) if vecs else []

    def __repr__(self):
        if self.empty:
            return "AffineSubspace(empty)"
        return f"AffineSubspace(base={[str(x) for x in self.base]}, dim={self.dim})"


def _mov_min_fix(u):
    amb = u.amb
    n = u.n
    L = u.linear
    t = u.trans
    A = [[L[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    im = la.independent_rows(la.transpose(A)) if any(any(r) for r in A) else []
    mu = la.vsub(t, la.project(t, im))
    mov = AffineSubspace(t, im)
    rows = [list(r) for r in A] + [list(v) for v in amb.inert]
    rhs = list(la.vsub(mu, t)) + [0] * len(amb.inert)
    base = la.solve(rows, rhs)
    dirs = la.nullspace(rows, n)
    mn = AffineSubspace(base, dirs)
    fix = mn if not any(mu) else AffineSubspace(empty=True)
    return mov, mn, fix, mu


def mov_min_fix(u):
    """(Mov, Min, Fix) of u; Mov lives in V, Min and Fix in E."""
    mov, mn, fix, _ = u.mov_min_fix()
    return mov, mn, fix


def min_vector(u):
    return u.mov_min_fix()[3]


def reflection_length(u):
    return u.length


def leq_L(u, v):
    """u <= v in the interval order of the full isometry group."""
    return u.length + compose(invert(u), v).length == v.length


def _fix_dir(u):
    return u.mov_min_fix()[2].dirs


def leq_L_invariant(u, v):
    """Same order, decided through fixed/move sets.

    Only meaningful for u, v both below a common element (e.g. inside [1,w]),
    where the invariant map is injective.
    """
    if u.elliptic and v.elliptic:
        return u.mov_min_fix()[2].contains(v.mov_min_fix()[2])
    if not u.elliptic and v.elliptic:
        return False
    if not u.elliptic and not v.elliptic:
        return v.mov_min_fix()[0].contains(u.mov_min_fix()[0])
    amb = u.amb
    span = v.mov_min_fix()[0].span()
    perp = la.orth_complement(span + [tuple(Fraction(x) for x in z) for z in amb.inert], u.n)
    d = _fix_dir(u)
    return all(la.in_span(x, d) for x in perp)


class Reflection:
    """Orthogonal reflection in H = {<x, root> = offset}."""

    __slots__ = ("root", "offset", "_iso")

    def __init__(self, root, offset=0):
        root = tuple(la.frac(x) for x in root)
        if not any(root):
            raise ValueError("zero root")
        prim = la.primitive(root)
        # root = c * prim
        i = next(k for k, x in enumerate(prim) if x)
        c = root[i] / prim[i]
        self.root = prim
        self.offset = la.frac(offset) / c
        self._iso = None

    def __eq__(self, other):
        return isinstance(other, Reflection) and self.root == other.root and self.offset == other.offset

    def __hash__(self):
        return hash((self.root, self.offset))

    def __repr__(self):
        return f"Reflection({self.root}, {self.offset})"

    def key(self):
        return (self.root, self.offset)

    def value(self, p):
        return la.dot(self.root, p) - self.offset

    def side(self, p):
        v = self.value(p)
        return (v > 0) - (v < 0)

    def isometry(self, amb=None):
        if self._iso is None or (amb is not None and self._iso.amb is not amb):
            n = len(self.root)
            amb = amb or Ambient(n)
            a = self.root
            aa = sum(x * x for x in a)
            L = [[Fraction(int(i == j)) - Fraction(2 * a[i] * a[j], aa) for j in range(n)] for i in range(n)]
            t = [Fraction(2 * a[i]) * self.offset / aa for i in range(n)]
            self._iso = Isometry(L, t, amb, check=False)
        return self._iso

    def mirror(self, p):
        a = self.root
        aa = sum(x * x for x in a)
        c = 2 * self.value(p) / aa
        return tuple(la.frac(x) - c * y for x, y in zip(p, a))

    def apply_to(self, other):
        """The reflection r(H') for H' = other's hyperplane."""
        a = self.root
        aa = sum(x * x for x in a)
        b = other.root
        ab = la.dot(a, b)
        nb = tuple(Fraction(y) - Fraction(2 * ab, aa) * x for x, y in zip(a, b))
        # point on H': any p with <p,b> = k'; r(H') = {r(p)} has offset <r(p), nb>
        bb = sum(y * y for y in b)
        p = tuple(Fraction(y) * other.offset / bb for y in b)
        return Reflection(nb, la.dot(nb, self.mirror(p)))


def reflection_of(u):
    """The Reflection with isometry u (u must be a reflection)."""
    if u.length != 1 or not u.elliptic:
        raise ValueError("not a reflection")
    mov, _, fix, _ = u.mov_min_fix()
    root = mov.dirs[0]
    r = Reflection(root, 0)
    return Reflection(r.root, la.dot(r.root, fix.base))
