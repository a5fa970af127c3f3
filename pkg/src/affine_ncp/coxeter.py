"""Irreducible affine Coxeter groups as groups of exact Euclidean isometries.

A system carries its reflection arrangement, a Coxeter element w, the
Coxeter axis l = Min(w) with its marked points p_i, and the base chamber C0
(the axial chamber between p_0 and p_1) whose wall reflections multiply to w.
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from math import gcd

from . import linalg as la
from .euclid import Ambient, Isometry, Reflection, compose, invert, min_vector

F = Fraction


# ---------------------------------------------------------------- spec strings

@dataclass(frozen=True)
class GroupSpec:
    family: str  # A B C D E F G
    n: int
    p: int = 0
    q: int = 0

    def __str__(self):
        if self.family == "A":
            return f"A~{self.n}[{self.p},{self.q}]"
        return f"{self.family}~{self.n}"


_SPEC_RE = re.compile(r"^\s*([ABCDEFG])~?(\d+)\s*(?:\[\s*(\d+)\s*,\s*(\d+)\s*\])?\s*$")


def parse_spec(text):
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse group spec {text!r}")
    fam, n = m.group(1), int(m.group(2))
    p, q = m.group(3), m.group(4)
    if p is not None and fam != "A":
        raise ValueError("only A~n takes [p,q]")
    if fam == "A":
        p, q = (int(p), int(q)) if p is not None else (n, 1)
        if n < 1 or p < q or q < 1 or p + q != n + 1:
            raise ValueError(f"need p >= q >= 1 and p+q = n+1, got {text!r}")
        return GroupSpec("A", n, p, q)
    bounds = {"B": 3, "C": 2, "D": 4}
    if fam in bounds and n < bounds[fam]:
        raise ValueError(f"{fam}~n needs n >= {bounds[fam]}")
    if fam == "E" and n not in (6, 7, 8):
        raise ValueError("E~n needs n in 6,7,8")
    if fam == "F" and n != 4:
        raise ValueError("F~4 only")
    if fam == "G" and n != 2:
        raise ValueError("G~2 only")
    return GroupSpec(fam, n)


# ---------------------------------------------------------------- arrangements

def fgcd(a, b):
    """gcd of two nonnegative rationals (gcd(a, 0) = a)."""
    a, b = F(a), F(b)
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    d = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return F(gcd(int(a * d), int(b * d)), d)


class Arrangement:
    """Hyperplanes {<x,beta> = k0 + j*step} for each primitive direction beta.

    step None means a single hyperplane in that direction.
    """

    def __init__(self, dirs):
        self.dirs = dict(dirs)

    def __len__(self):
        return len(self.dirs)

    def contains(self, r):
        if r.root not in self.dirs:
            return False
        k0, st = self.dirs[r.root]
        if st is None:
            return r.offset == k0
        return ((r.offset - k0) / st).denominator == 1

    def index(self, beta, v):
        k0, st = self.dirs[beta]
        if st is None:
            return 0 if v < k0 else 1
        x = (v - k0) / st
        return x.numerator // x.denominator

    def on_hyperplane(self, x):
        for beta, (k0, st) in self.dirs.items():
            v = la.dot(beta, x) - k0
            if st is None:
                if v == 0:
                    return True
            elif (v / st).denominator == 1:
                return True
        return False

    def signature(self, x):
        return tuple(self.index(b, la.dot(b, x)) for b in self.dirs)

    def neighbours(self, x):
        """Hyperplanes bounding the strips that contain x."""
        out = []
        for beta, (k0, st) in self.dirs.items():
            v = la.dot(beta, x)
            if st is None:
                out.append(Reflection(beta, k0))
                continue
            i = self.index(beta, v)
            out.append(Reflection(beta, k0 + i * st))
            out.append(Reflection(beta, k0 + (i + 1) * st))
        return out

    def walls(self, x):
        """Walls of the chamber containing the generic point x."""
        if self.on_hyperplane(x):
            raise ValueError("point lies on a hyperplane")
        sig = self.signature(x)
        out = []
        for r in self.neighbours(x):
            y = r.mirror(x)
            sy = self.signature(y)
            if sum(abs(a - b) for a, b in zip(sig, sy)) == 1:
                out.append(r)
        return out


# ---------------------------------------------------------------- root data

def _e(n, *pairs):
    v = [F(0)] * n
    for i, c in pairs:
        v[i] = F(c)
    return tuple(v)


def root_closure(simples):
    """All roots generated from simple roots by simple reflections."""
    simples = [tuple(F(x) for x in a) for a in simples]
    roots = set(simples) | {tuple(-x for x in a) for a in simples}
    todo = list(roots)
    while todo:
        r = todo.pop()
        for s in simples:
            c = 2 * la.dot(r, s) / la.dot(s, s)
            if c:
                rr = tuple(x - c * y for x, y in zip(r, s))
                if rr not in roots:
                    roots.add(rr)
                    todo.append(rr)
    return roots


def _steps(roots):
    """Primitive direction -> step, for hyperplanes <x,alpha> in Z."""
    out = {}
    for a in roots:
        b = la.primitive(a)
        i = next(k for k, x in enumerate(b) if x)
        lam = abs(F(b[i]) / a[i])
        out[b] = lam
    return out


_EXC = {}


def _exceptional_data(fam, n):
    if fam == "G":
        N = 3
        simple = [(1, -1, 0), (-2, 1, 1)]
        theta = (-1, -1, 2)
        inert = [(1, 1, 1)]
    elif fam == "F":
        N = 4
        h = F(1, 2)
        simple = [(0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 0, 1), (h, -h, -h, -h)]
        theta = (1, 1, 0, 0)
        inert = []
    else:
        N = 8
        h = F(1, 2)
        a1 = (h, -h, -h, -h, -h, -h, -h, h)
        a2 = _e(8, (0, 1), (1, 1))
        rest = [_e(8, (i - 1, -1), (i, 1)) for i in range(1, 7)]
        allsimple = [a1, a2] + rest  # a1..a8
        simple = allsimple[:n]
        if n == 8:
            theta = _e(8, (6, 1), (7, 1))
            inert = []
        elif n == 7:
            theta = _e(8, (6, -1), (7, 1))
            inert = [(0, 0, 0, 0, 0, 0, 1, 1)]
        else:
            theta = (h, h, h, h, h, -h, -h, h)
            inert = [(0, 0, 0, 0, 0, 1, -1, 0), (0, 0, 0, 0, 0, 0, 1, 1)]
    simple = [tuple(F(x) for x in a) for a in simple]
    theta = tuple(F(x) for x in theta)
    return N, simple, theta, inert


def _classical_roots(fam, n):
    rs = {}
    if fam == "A":
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                v = [0] * (n + 1)
                v[i], v[j] = 1, -1
                rs[tuple(v)] = F(1)
        return rs
    for i in range(n):
        for j in range(i + 1, n):
            for sg in (1, -1):
                v = [0] * n
                v[i], v[j] = 1, sg
                rs[la.primitive(v)] = F(1)
    if fam in "BC":
        for i in range(n):
            v = [0] * n
            v[i] = 1
            rs[tuple(v)] = F(1) if fam == "B" else F(1, 2)
    return rs


def _perm_affine(N, src, shift, sign=None):
    """Isometry x -> y with y[i] = sign[i]*x[src[i]] + shift[i]."""
    sign = sign or [1] * N
    L = [[F(0)] * N for _ in range(N)]
    for i in range(N):
        L[i][src[i]] = F(sign[i])
    return L, [F(s) for s in shift]


def _classical_w(spec):
    fam, n = spec.family, spec.n
    if fam == "A":
        p, q = spec.p, spec.q
        N = n + 1
        src = [p - 1] + list(range(p - 1)) + [p + q - 1] + list(range(p, p + q - 1))
        shift = [1] + [0] * (p - 1) + [-1] + [0] * (q - 1)
        return _perm_affine(N, src, shift)
    if fam == "C":
        src = [n - 1] + list(range(n - 1))
        return _perm_affine(n, src, [-1] + [0] * (n - 1))
    if fam == "B":
        src = [n - 2] + list(range(n - 2)) + [n - 1]
        sign = [1] * (n - 1) + [-1]
        return _perm_affine(n, src, [-1] + [0] * (n - 2) + [1], sign)
    if fam == "D":
        src = [0, n - 2] + list(range(1, n - 2)) + [n - 1]
        sign = [-1] + [1] * (n - 2) + [-1]
        return _perm_affine(n, src, [0, -1] + [0] * (n - 3) + [1], sign)
    raise ValueError(fam)


def _classical_axis_point(spec):
    fam, n = spec.family, spec.n
    if fam == "A":
        p, q = spec.p, spec.q
        return [F(p - 1 - i, p) for i in range(p)] + [F(j, q) for j in range(q)]
    if fam == "C":
        return [F(i, n) for i in range(n)]
    if fam == "B":
        return [F(i, n - 1) for i in range(n - 1)] + [F(1, 2)]
    if fam == "D":
        return [F(0)] + [F(i, n - 2) for i in range(n - 2)] + [F(1, 2)]
    raise ValueError(fam)


def appendix_walls(spec):
    """Walls of the coordinate chamber used to write w in the classical cases, in product order."""
    fam, n = spec.family, spec.n
    e = lambda *p: _e(n, *p)
    if fam == "C":
        ws = [Reflection(e((0, 1)), 0)]
        ws += [Reflection(e((i, 1), (i + 1, -1)), 0) for i in range(n - 1)]
        ws += [Reflection(e((n - 1, 1)), F(1, 2))]
        return ws
    if fam == "B":
        ws = [Reflection(e((0, 1)), 0)]
        ws += [Reflection(e((i, 1), (i + 1, -1)), 0) for i in range(n - 1)]
        ws += [Reflection(e((n - 2, 1), (n - 1, 1)), 1)]
        return ws
    if fam == "D":
        ws = [Reflection(e((0, 1), (1, 1)), 0)]
        ws += [Reflection(e((i, 1), (i + 1, -1)), 0) for i in range(n - 1)]
        ws += [Reflection(e((n - 2, 1), (n - 1, 1)), 1)]
        return ws
    raise ValueError("no coordinate chamber for this family")


# ---------------------------------------------------------------- the system

@dataclass
class Chamber:
    walls: list
    sample_point: tuple

    def vertices(self, amb):
        """Vertex opposite to each wall (same order as walls)."""
        out = []
        for i in range(len(self.walls)):
            rows = [list(r.root) for j, r in enumerate(self.walls) if j != i]
            rhs = [r.offset for j, r in enumerate(self.walls) if j != i]
            rows += [list(v) for v in amb.inert]
            rhs += [0] * len(amb.inert)
            out.append(la.solve(rows, rhs))
        return out


@dataclass
class AxialFrame:
    base_point: tuple  # p_0
    mu: tuple
    spacing: Fraction
    index_of_base: int = 0

    def point(self, i):
        c = (i - self.index_of_base) * self.spacing
        return tuple(b + c * m for b, m in zip(self.base_point, self.mu))

    def theta(self, x):
        """Position of the projection of x on l, in units of mu, measured from p_0."""
        d = la.vsub(tuple(F(v) for v in x), self.base_point)
        return la.dot(d, self.mu) / la.dot(self.mu, self.mu)


class CoxeterSystem:
    def __init__(self, spec):
        self.spec = spec
        fam, n = spec.family, spec.n
        self.n = n
        if fam in "ABCD":
            roots = _classical_roots(fam, n)
            N = n + 1 if fam == "A" else n
            inert = [(1,) * N] if fam == "A" else []
            self.amb = Ambient(N, inert)
            L, t = _classical_w(spec)
            self.w = Isometry(L, t, self.amb)
            self.finite_simple = None
        else:
            N, simple, theta, inert = _exceptional_data(fam, n)
            self.amb = Ambient(N, inert)
            allroots = root_closure(simple)
            roots = _steps(allroots)
            self.finite_simple = simple
            self.highest_root = theta
            self._finite_roots = allroots
        self.N = self.amb.dim
        self.steps = roots
        self.arr = Arrangement({b: (F(0), s) for b, s in roots.items()})
        self.mu = min_vector(self.w) if fam in "ABCD" else None
        if fam in "ABCD":
            self._setup_classical()
        else:
            self._setup_bipartite()
        self.w_inv = invert(self.w)

    # --- construction helpers
    def _setup_classical(self):
        spec = self.spec
        p0 = self.amb.canon(_classical_axis_point(spec))
        if spec.family == "A":
            g = gcd(spec.p, spec.q)
            s = F(g, spec.p + spec.q)
        else:
            s = F(1, 2)
        self.frame = AxialFrame(p0, self.mu, s)
        mid = self.frame.point(F(1, 2))
        walls = self.arr.walls(mid)
        self.c0 = Chamber(walls, mid)
        order = self.three_block(self.w, walls, mid)
        if order is None:
            raise AssertionError("walls of C0 do not multiply to w")
        self.simples = order

    def _setup_bipartite(self):
        simple = self.finite_simple
        theta = self.highest_root
        nodes = [theta] + simple  # node 0 is the affine node
        walls = [Reflection(theta, 1)] + [Reflection(a, 0) for a in simple]
        adj = {i: [j for j in range(len(nodes)) if j != i and la.dot(nodes[i], nodes[j]) != 0]
               for i in range(len(nodes))}
        color = {0: 1}
        todo = [0]
        while todo:
            i = todo.pop(0)
            for j in adj[i]:
                if j not in color:
                    color[j] = 1 - color[i]
                    todo.append(j)
        s1 = [walls[i] for i in range(len(nodes)) if color[i] == 1]
        s0 = [walls[i] for i in range(len(nodes)) if color[i] == 0]
        self.bipartition = (s0, s1)
        w = Isometry.identity(self.amb)
        for r in s1 + s0:
            w = compose(w, r.isometry(self.amb))
        self.w = w
        self.mu = min_vector(w)
        _, mn, _ = w.mov_min_fix()[:3]
        base = mn.base

        def cross(r):
            return (r.offset - la.dot(r.root, base)) / la.dot(r.root, self.mu)

        t0 = {cross(r) for r in s0}
        t1 = {cross(r) for r in s1}
        if len(t0) != 1 or len(t1) != 1:
            raise AssertionError("bipartite walls do not meet the axis in two points")
        t0, t1 = t0.pop(), t1.pop()
        if t1 - t0 != F(1, 2):
            raise AssertionError("S1 walls are not half a step above S0 walls")
        p0 = tuple(b + t0 * m for b, m in zip(base, self.mu))
        self.frame = AxialFrame(p0, self.mu, F(1, 2))
        mid = self.frame.point(F(1, 2))
        self.c0 = Chamber(self.arr.walls(mid), mid)
        if set(self.c0.walls) != set(walls):
            raise AssertionError("alcove is not the axial chamber above p0")
        self.simples = s1 + s0

    # --- basic queries
    def iso(self, r):
        return r.isometry(self.amb)

    def product(self, refls):
        u = Isometry.identity(self.amb)
        for r in refls:
            u = compose(u, self.iso(r))
        return u

    def identity(self):
        return Isometry.identity(self.amb)

    def is_vertical(self, r):
        return la.dot(r.root, self.mu) != 0

    def crossing(self, r, a=None):
        """Parameter theta (in units of mu) where Fix(r) meets the line a + theta*mu."""
        a = self.frame.base_point if a is None else a
        return (r.offset - la.dot(r.root, a)) / la.dot(r.root, self.mu)

    def axis_index(self, r):
        """Index i with Fix(r) meeting l at p_i (vertical r only)."""
        x = self.crossing(r) / self.frame.spacing
        if x.denominator != 1:
            raise ValueError("reflection does not meet the axis at a marked point")
        return int(x)

    def in_group(self, r):
        return self.arr.contains(r)

    def three_block(self, target, walls, a, direction=None):
        """Order walls as (verticals above a by height, horizontals, verticals below a by height).

        Returns the ordered list if the product is target, else None.  Ties in
        height and the horizontal block are searched over permutations.
        """
        mu = self.mu if direction is None else direction
        hor = [r for r in walls if la.dot(r.root, mu) == 0]
        ver = [(((r.offset - la.dot(r.root, a)) / la.dot(r.root, mu)), r) for r in walls if la.dot(r.root, mu) != 0]
        above = sorted([x for x in ver if x[0] > 0], key=lambda x: (x[0], x[1].root))
        below = sorted([x for x in ver if x[0] < 0], key=lambda x: (x[0], x[1].root))

        def tie_orders(block):
            groups = []
            for th, r in block:
                if groups and groups[-1][0] == th:
                    groups[-1][1].append(r)
                else:
                    groups.append((th, [r]))
            choices = [list(permutations(g)) for _, g in groups]
            for combo in product(*choices):
                yield [r for g in combo for r in g]

        for up in tie_orders(above):
            pu = self.product(up)
            for dn in tie_orders(below):
                pd = self.product(dn)
                for h in permutations(hor):
                    if compose(pu, compose(self.product(h), pd)) == target:
                        return list(up) + list(h) + list(dn)
        return None

    def __repr__(self):
        return f"CoxeterSystem({self.spec})"


_CACHE = {}


def build(spec):
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if spec not in _CACHE:
        _CACHE[spec] = CoxeterSystem(spec)
    return _CACHE[spec]


# ---------------------------------------------------------------- classification

HORIZONTAL = "Horizontal"
VERTICAL = "Vertical"


def classify_reflection(sys, r):
    if not sys.in_group(r):
        raise ValueError(f"{r} is not a reflection of {sys.spec}")
    return VERTICAL if sys.is_vertical(r) else HORIZONTAL


def as_window(window):
    """(lo, hi) inclusive, from a pair, a range or a 'lo..hi' string."""
    if isinstance(window, str):
        lo, hi = window.split("..")
        return int(lo), int(hi)
    if isinstance(window, range):
        return window.start, window.stop - 1
    lo, hi = window
    return int(lo), int(hi)


def horizontal_roots(sys):
    return [b for b in sys.steps if la.dot(b, sys.mu) == 0]


def vertical_roots(sys):
    return [b for b in sys.steps if la.dot(b, sys.mu) != 0]


@dataclass
class WindowReflections:
    verticals_by_axis_point: dict
    horizontals: list

    @property
    def verticals(self):
        return [r for i in sorted(self.verticals_by_axis_point) for r in self.verticals_by_axis_point[i]]

    def all(self):
        return self.verticals + list(self.horizontals)


def verticals_at(sys, i):
    p = sys.frame.point(i)
    out = []
    for b in vertical_roots(sys):
        k = la.dot(b, p)
        if (k / sys.steps[b]).denominator == 1:
            out.append(Reflection(b, k))
    return sorted(out, key=lambda r: r.root)


def adjacent_horizontals(sys):
    """For each horizontal direction, the two hyperplanes whose strip contains l."""
    out = []
    p = sys.frame.base_point
    for b in sorted(horizontal_roots(sys)):
        st = sys.steps[b]
        v = la.dot(b, p) / st
        if v.denominator == 1:
            raise AssertionError("axis lies in a horizontal hyperplane")
        f = v.numerator // v.denominator
        out += [Reflection(b, f * st), Reflection(b, (f + 1) * st)]
    return out


def interval_reflections(sys, window):
    lo, hi = as_window(window)
    return WindowReflections({i: verticals_at(sys, i) for i in range(lo, hi + 1)}, adjacent_horizontals(sys))


# ---------------------------------------------------------------- axial cells

def w_power(sys, k):
    cache = sys.__dict__.setdefault("_wpow", {0: sys.identity()})
    if k not in cache:
        step = sys.w if k > 0 else sys.w_inv
        prev = k - 1 if k > 0 else k + 1
        cache[k] = compose(w_power(sys, prev), step)
    return cache[k]


def c0_vertices(sys):
    """Vertices of C0, vertex k opposite the wall sys.simples[k]."""
    if "_c0v" not in sys.__dict__:
        ch = Chamber(list(sys.simples), sys.c0.sample_point)
        sys._c0v = ch.vertices(sys.amb)
    return sys._c0v


def axial_chamber(sys, i):
    """The axial chamber containing the open segment (p_i, p_{i+1})."""
    mid = sys.frame.point(F(2 * i + 1, 2))
    return Chamber(sys.arr.walls(mid), mid)


def vertex_orbit(sys, b):
    """(k, j) with b = w^j(vertex k of C0), or None if b is not an axial vertex."""
    b = sys.amb.canon(b)
    tb = sys.frame.theta(b)
    for k, b0 in enumerate(c0_vertices(sys)):
        d = tb - sys.frame.theta(b0)
        if d.denominator == 1 and w_power(sys, int(d))(b0) == b:
            return k, int(d)
    return None


@dataclass
class AxialCells:
    points: list
    chambers: list
    vertices: list
    orbit_id: dict


def axial_cells(sys, window):
    lo, hi = as_window(window)
    pts = [sys.frame.point(i) for i in range(lo, hi + 1)]
    chambers, verts, orbit = [], [], {}
    for i in range(lo, hi):
        ch = axial_chamber(sys, i)
        chambers.append(ch)
        for v in ch.vertices(sys.amb):
            if v not in orbit:
                o = vertex_orbit(sys, v)
                if o is None:
                    raise AssertionError("axial vertex outside every w-orbit of C0 vertices")
                orbit[v] = o[0]
                verts.append(v)
    return AxialCells(pts, chambers, verts, orbit)


def parabolic_coxeter_element(sys, b):
    """w_b for an axial vertex b, via w^j w_{b0} w^-j."""
    o = vertex_orbit(sys, b)
    if o is None:
        raise ValueError("not an axial vertex")
    k, j = o
    wb0 = sys.product([r for i, r in enumerate(sys.simples) if i != k])
    return compose(w_power(sys, j), compose(wb0, w_power(sys, -j)))


def parabolic_coxeter_element_direct(sys, b, i=None):
    """w_b by deleting one wall from the wall factorization of an axial chamber at b."""
    b = sys.amb.canon(b)
    if i is None:
        t = sys.frame.theta(b) / sys.frame.spacing
        i0 = t.numerator // t.denominator
        cand = range(i0 - 2 * (sys.n + 2), i0 + 2 * (sys.n + 2))
    else:
        cand = [i]
    for i in cand:
        ch = axial_chamber(sys, i)
        if not any(v == b for v in ch.vertices(sys.amb)):
            continue
        order = sys.three_block(sys.w, ch.walls, ch.sample_point)
        keep = [r for r in order if r.value(b) == 0]
        if len(keep) != len(order) - 1:
            raise AssertionError("vertex lies on too few walls")
        return sys.product(keep)
    raise ValueError("not an axial vertex in the searched range")


# ---------------------------------------------------------------- finite parabolics

def reflections_containing(sys, sub):
    """Reflections of W whose hyperplane contains the affine subspace sub."""
    out = []
    for b, st in sys.steps.items():
        if any(la.dot(b, d) != 0 for d in sub.dirs):
            continue
        k = la.dot(b, sub.base)
        if (k / st).denominator == 1:
            out.append(Reflection(b, k))
    return sorted(out, key=lambda r: (r.root, r.offset))


@dataclass
class FiniteInterval:
    top: Isometry
    elements: list  # in BFS order, elements[0] = identity
    covers: list  # (i, j, Reflection) with elements[j] = elements[i] * r
    reflections: list

    @cached_property
    def index(self):
        return {e: i for i, e in enumerate(self.elements)}


def elliptic_interval(sys, u):
    """[1,u] for elliptic u in W, by BFS inside the finite parabolic fixing Fix(u)."""
    cache = sys.__dict__.setdefault("_eint", {})
    if u in cache:
        return cache[u]
    if not u.elliptic:
        raise ValueError("u is not elliptic")
    fix = u.mov_min_fix()[2]
    refl = [r for r in reflections_containing(sys, fix) if leq_len(sys.iso(r), u)]
    one = sys.identity()
    elems, idx, covers = [one], {one: 0}, []
    level = [one]
    lu = u.length
    for ln in range(lu):
        nxt = []
        for x in level:
            for r in refl:
                y = compose(x, sys.iso(r))
                if y.length != ln + 1 or not leq_len(y, u):
                    continue
                if y not in idx:
                    idx[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
                covers.append((idx[x], idx[y], r))
        level = nxt
    res = FiniteInterval(u, elems, covers, refl)
    cache[u] = res
    return res


def leq_len(u, v):
    return u.length + compose(invert(u), v).length == v.length


# ---------------------------------------------------------------- appendix lemmas

def lemma_point(sys, rng):
    """Random generic point satisfying the hypotheses of the product lemma of the family."""
    fam, n = sys.spec.family, sys.n

    def sorted_in(lo, k):
        vals = set()
        while len(vals) < k:
            vals.add(lo + F(rng.randrange(1, 997), 997))
        return sorted(vals)

    while True:
        base = F(rng.randrange(-2000, 2000), 211)
        if fam == "A":
            p, q = sys.spec.p, sys.spec.q
            xs = [base] + sorted_in(base, p - 1)  # x_p < x_{p-1} < ... < x_1
            x = list(reversed(xs))
            yb = F(rng.randrange(-2000, 2000), 223)
            y = [yb] + sorted_in(yb, q - 1)
            pt = x + y
        elif fam == "C":
            pt = [base] + sorted_in(base, n - 1)
        elif fam == "B":
            pt = [base] + sorted_in(base, n - 2) + [F(1, 2)]
        elif fam == "D":
            pt = [F(0), base] + sorted_in(base, n - 3) + [F(1, 2)]
        else:
            raise ValueError("product lemmas are stated for classical families only")
        pt = sys.amb.canon(pt)
        if not sys.arr.on_hyperplane(pt):
            return pt


@dataclass
class ProductLemmaReport:
    point: tuple
    upper: list
    horizontal: list
    lower: list
    upper_commute: bool
    lower_commute: bool
    product_ok: bool
    order: list = field(default_factory=list)

    @property
    def ok(self):
        return self.upper_commute and self.lower_commute and self.product_ok


def commute(sys, r, s):
    a, b = sys.iso(r), sys.iso(s)
    return compose(a, b) == compose(b, a)


def pairwise_commute(sys, refls):
    return all(commute(sys, r, s) for i, r in enumerate(refls) for s in refls[i + 1:])


def product_lemma_check(sys, a):
    walls = sys.arr.walls(a)
    up = [r for r in walls if sys.is_vertical(r) and sys.crossing(r, a) > 0]
    dn = [r for r in walls if sys.is_vertical(r) and sys.crossing(r, a) < 0]
    hor = [r for r in walls if not sys.is_vertical(r)]
    order = sys.three_block(sys.w, walls, a)
    return ProductLemmaReport(a, up, hor, dn, pairwise_commute(sys, up), pairwise_commute(sys, dn),
                              order is not None, order or [])


# ---------------------------------------------------------------- reflection subgroups

def _merge(prog, k, st):
    """Merge offsets k + st*Z (st None: just k) into a progression (k0, step)."""
    if prog is None:
        return (k, st)
    k0, s0 = prog
    g = s0 or F(0)
    if st:
        g = fgcd(g, st)
    g = fgcd(g, k - k0)
    if g == 0:
        return (k0, None)
    return (k0 % g, g)


def subgroup_arrangement(sys, refls):
    """Arrangement of the reflection subgroup generated by refls.

    Offsets in each direction form k0 + step*Z; the generated set is closed
    under reflecting every progression in every other one.
    """
    dirs = {}
    for r in refls:
        dirs[r.root] = _merge(dirs.get(r.root), r.offset, None)
    changed = True
    while changed:
        changed = False
        for a, (ka, sa) in list(dirs.items()):
            ra = Reflection(a, ka)
            ra2 = Reflection(a, ka + sa) if sa else None
            for b, (kb, sb) in list(dirs.items()):
                img = ra.apply_to(Reflection(b, kb))
                deltas = []
                if sb:
                    deltas.append(abs(ra.apply_to(Reflection(b, kb + sb)).offset - img.offset))
                if ra2 is not None:
                    deltas.append(abs(ra2.apply_to(Reflection(b, kb)).offset - img.offset))
                st = None
                for d in deltas:
                    st = d if st is None else fgcd(st, d)
                old = dirs.get(img.root)
                new = _merge(old, img.offset, st)
                if new != old:
                    dirs[img.root] = new
                    changed = True
    return Arrangement(dirs)


def scaled_roots(arr):
    """Roots alpha = beta/step, so that the hyperplanes are <x, alpha> in k0/step + Z."""
    out = []
    for b, (k0, st) in arr.dirs.items():
        if st is None:
            raise ValueError("finite direction in an affine arrangement")
        out.append(tuple(F(x) / st for x in b))
    return out


def root_system_name(roots):
    """Cartan type of a finite root system given by its positive roots, e.g. 'A2' or 'A1 x B3'."""
    from .interval import root_components
    comps = root_components(list(roots))
    if len(comps) > 1:
        return " x ".join(sorted(root_system_name(c) for c in comps))
    roots = list(roots)
    r = la.rank([list(v) for v in roots])
    m = len(roots)
    special = {(2, 6): "G2", (4, 24): "F4", (6, 36): "E6", (7, 63): "E7", (8, 120): "E8"}
    if (r, m) in special:
        return special[(r, m)]
    if m == r * (r + 1) // 2:
        return f"A{r}"
    if m == r * r:
        if r == 2:
            return "B2"
        lens = sorted({la.dot(v, v) for v in roots})
        n_short = sum(1 for v in roots if la.dot(v, v) == lens[0])
        return f"B{r}" if n_short == r else f"C{r}"
    if m == r * (r - 1):
        return f"D{r}"
    return f"?{r}:{m}"


def affine_type_name(arr):
    f = root_system_name(scaled_roots(arr))
    if f == "B2":
        return "C~2"
    return f[0] + "~" + f[1:]


# ---------------------------------------------------------------- horizontal components

@dataclass
class HorizontalComponent:
    roots: list
    rank: int
    name: str
    prism_walls: list
    maximal: list


@dataclass
class HorizontalComponents:
    components: list
    t: Isometry
    h_factors: list

    @property
    def h(self):
        u = None
        for x in self.h_factors:
            u = x if u is None else compose(u, x)
        return u


def horizontal_root_components(sys):
    from .interval import root_components
    return root_components(horizontal_roots(sys))


def horizontal_components(sys, window=None):
    from .interval import horizontal_part, structure
    S = structure(sys)
    hp = horizontal_part(sys)
    comps = []
    for roots, mx in zip(hp.components, hp.maximal):
        sub = Arrangement({b: (F(0), sys.steps[b]) for b in roots})
        walls = sub.walls(sys.frame.point(F(1, 2)))
        m = la.rank([list(r) for r in roots])
        lin = {x.lin for x in mx}
        if len(lin) != 1 or len(mx) != m + 1:
            raise AssertionError("maximal horizontal elements do not share a linear part")
        # order maximal elements as phi^p(h_i)
        start = mx[0]
        orbit = [start]
        while len(orbit) <= m:
            orbit.append(S.phi(orbit[-1]))
        if set(orbit) != set(mx) or S.phi(orbit[-1]) != start:
            raise AssertionError("maximal elements are not one phi-orbit")
        comps.append(HorizontalComponent(list(roots), m, root_system_name(roots), walls, orbit))
    t, hf = horizontal_factorization(sys, window)
    return HorizontalComponents(comps, t, hf)


def max_parallel_gap(sys):
    """Largest number of axis points between consecutive parallel vertical hyperplanes."""
    g = 0
    for b in vertical_roots(sys):
        x = sys.steps[b] / abs(la.dot(b, sys.mu)) / sys.frame.spacing
        g = max(g, int(x))
    return g


def horizontal_factorization(sys, window=None):
    """First w = t h with t = r r' (parallel verticals in the window) a translation in [1,w]."""
    from .interval import horizontal_part, structure
    S = structure(sys)
    hp = horizontal_part(sys)
    if window is None:
        g = max_parallel_gap(sys) + 1
        window = (-g, g)
    ver = interval_reflections(sys, window).verticals
    for r in ver:
        for r2 in ver:
            if r2.root != r.root or r2 == r:
                continue
            t = compose(sys.iso(r), sys.iso(r2))
            if t.length != 2 or not S.in_interval(t):
                continue
            h = compose(invert(t), sys.w)
            if h not in S.horizontal_set or h.length != sys.n - 1:
                continue
            return t, list(hp.decomposition[h])
    raise AssertionError("no horizontal factorization found")


# ---------------------------------------------------------------- hyperbolic Coxeter elements

@dataclass
class HyperbolicCoxeterReport:
    u: Isometry
    points_checked: int
    ok: bool
    failures: list
    noncommuting: list  # (a, upper walls) with non-commuting upper vertical walls


def hyperbolic_coxeter_check(sys, u, window=None, spread=None):
    """Wall census and three-block product for the A_u-chambers at axis points."""
    from .interval import structure, _period_window
    S = structure(sys)
    window = window or _period_window(sys)
    below = S.reflections_below(u, window)
    arr = subgroup_arrangement(sys, below)
    lo, hi = as_window(window)
    spread = spread or (hi - lo) // 2
    # crossings of A_u with the axis, in units of mu from p_0
    ths = set()
    for b, (k0, st) in arr.dirs.items():
        d = la.dot(b, sys.mu)
        if d == 0:
            continue
        c0 = (k0 - la.dot(b, sys.frame.base_point)) / d
        stp = abs(st / d)
        j = ((-spread * sys.frame.spacing - c0) / stp)
        j = j.numerator // j.denominator
        while c0 + j * stp <= spread * sys.frame.spacing:
            ths.add(c0 + j * stp)
            j += 1
    L = spread * sys.frame.spacing
    ths = sorted(t for t in ths if -L <= t <= L)
    fails, nonc, n = [], [], 0
    for t0, t1 in zip(ths, ths[1:]):
        a = sys.frame.point((t0 + t1) / 2 / sys.frame.spacing)
        walls = arr.walls(a)
        n += 1
        if len(walls) != u.length:
            fails.append((a, "walls", len(walls)))
            continue
        order = sys.three_block(u, walls, a)
        if order is None:
            fails.append((a, "product", walls))
            continue
        up = [r for r in walls if sys.is_vertical(r) and sys.crossing(r, a) > 0]
        if not pairwise_commute(sys, up):
            nonc.append((a, up))
    return HyperbolicCoxeterReport(u, n, not fails, fails, nonc)
