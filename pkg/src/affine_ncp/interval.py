"""Windowed noncrossing partition posets [1,w] in affine Coxeter groups.

Two independent routes:

* NCStructure decides membership in [1,w] from geometry: elliptic elements
  live below some w_b (b an axial vertex in their fixed set), hyperbolic ones
  are the left complements of the finitely many horizontal elements.
* build_poset runs the Hurwitz action on minimal factorizations of w, keeping
  only factorizations whose vertical reflections meet the axis inside a window.
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from . import linalg as la
from .coxeter import (
    as_window, c0_vertices, elliptic_interval, interval_reflections, leq_len, max_parallel_gap,
    reflections_containing, w_power,
)
from .euclid import compose, invert, leq_L

F = Fraction


def is_horizontal(sys, u):
    """Elliptic and moving points orthogonally to mu (so L mu = mu)."""
    if not u.elliptic:
        return False
    return la.matvec(u.linear, sys.mu) == tuple(sys.mu)


def element_class(sys, u):
    if not u.elliptic:
        return "hyperbolic"
    return "horizontal" if is_horizontal(sys, u) else "vertical"


# ---------------------------------------------------------------- structure oracle

class NCStructure:
    def __init__(self, sys):
        self.sys = sys
        n = sys.n
        self.v0 = c0_vertices(sys)
        self.theta0 = [sys.frame.theta(b) for b in self.v0]
        self.wb0 = [sys.product([r for i, r in enumerate(sys.simples) if i != k]) for k in range(n + 1)]
        H = set()
        for k in range(n + 1):
            for x in elliptic_interval(sys, self.wb0[k]).elements:
                if is_horizontal(sys, x):
                    H.add(x)
        todo = list(H)
        while todo:
            x = todo.pop()
            for y in (self.phi(x), self.phi_inv(x)):
                if y not in H:
                    H.add(y)
                    todo.append(y)
        self.horizontal = sorted(H, key=lambda x: (x.length, x.key))
        self.horizontal_set = set(H)
        hyp = {}
        for h in self.horizontal:
            u = compose(sys.w, invert(h))
            if u.elliptic or u.length + h.length != n + 1:
                raise AssertionError("left complement of a horizontal element is not hyperbolic")
            hyp[u] = h
        self.hyperbolic = sorted(hyp, key=lambda x: (x.length, x.key))
        self.hyperbolic_set = set(hyp)
        self._reach = self._vertex_reach()
        self._mem = {}

    def phi(self, u):
        s = self.sys
        return compose(s.w_inv, compose(u, s.w))

    def phi_inv(self, u):
        s = self.sys
        return compose(s.w, compose(u, s.w_inv))

    def _vertex_reach(self):
        """Max squared distance from an axial vertex to the axis."""
        s = self.sys
        m = F(0)
        mu = s.mu
        for k in range(len(self.v0)):
            for b in self._fundamental_vertices():
                d = la.vsub(b, s.frame.base_point)
                perp = la.vsub(d, la.vscale(la.dot(d, mu) / la.dot(mu, mu), mu))
                m = max(m, la.dot(perp, perp))
        return m

    def _fundamental_vertices(self):
        from .coxeter import axial_chamber
        s = self.sys
        per = int(1 / s.frame.spacing) + 1
        out = []
        for i in range(per):
            out += axial_chamber(s, i).vertices(s.amb)
        return out

    def axial_vertices_in(self, fix):
        """(b, k, j) for the axial vertices b = w^j(b0_k) lying in the affine subspace fix."""
        s = self.sys
        mu = s.mu
        D = list(fix.dirs)
        mperp = la.vsub(mu, la.project(mu, D))
        mm = la.dot(mperp, mperp)
        if mm == 0:
            raise ValueError("fixed set is parallel to the axis")
        # closest approach of fix and the axis
        rows = [list(d) for d in D] + [list(la.vscale(-1, mu))]
        G = [[la.dot(a, b) for b in rows] for a in rows]
        rhs = [la.dot(a, la.vsub(s.frame.base_point, fix.base)) for a in rows]
        c = la.solve(G, rhs)
        th = c[-1]
        p = fix.base
        for ci, d in zip(c[:-1], D):
            p = la.vadd(p, la.vscale(ci, d))
        q = la.vadd(s.frame.base_point, la.vscale(th, mu))
        gap = la.vsub(p, q)
        g2 = la.dot(gap, gap)
        # |theta - th|^2 * mm <= (sqrt(reach) + sqrt(g2))^2 <= 2 (reach + g2)
        bound2 = 2 * (self._reach + g2) / mm
        out = []
        for k, b0 in enumerate(self.v0):
            base = th - self.theta0[k]
            j = base.numerator // base.denominator - 1
            while (j - base) ** 2 > bound2 and j < base:
                j += 1
            while (j - base) ** 2 <= bound2 or j <= base:
                b = w_power(s, j)(b0)
                if fix.contains_point(b):
                    out.append((b, k, j))
                j += 1
        return out

    def wb(self, k, j):
        return compose(w_power(self.sys, j), compose(self.wb0[k], w_power(self.sys, -j)))

    def in_interval(self, x):
        if x in self._mem:
            return self._mem[x]
        if not x.elliptic:
            res = x in self.hyperbolic_set
        elif is_horizontal(self.sys, x):
            res = x in self.horizontal_set
        elif x.length > self.sys.n:
            res = False
        else:
            fix = x.mov_min_fix()[2]
            res = any(leq_len(x, self.wb(k, j)) for _, k, j in self.axial_vertices_in(fix))
        self._mem[x] = res
        return res

    def leq(self, x, v):
        """x <= v, for x, v in [1,w]."""
        d = compose(invert(x), v)
        return x.length + d.length == v.length and self.in_interval(d)

    def reflections_below(self, u, window):
        """Reflections r <= u, with verticals restricted to the window."""
        s = self.sys
        lo, hi = as_window(window)
        if u.elliptic:
            fix = u.mov_min_fix()[2]
            out = []
            for r in reflections_containing(s, fix):
                if not leq_len(s.iso(r), u):
                    continue
                if s.is_vertical(r) and not lo <= s.axis_index(r) <= hi:
                    continue
                out.append(r)
            return out
        cand = interval_reflections(s, window).all()
        return [r for r in cand if self.leq(s.iso(r), u)]

    def all_reflections_below_in_window(self, u, window):
        """For elliptic u: are all reflections below u inside the window?"""
        s = self.sys
        lo, hi = as_window(window)
        fix = u.mov_min_fix()[2]
        for r in reflections_containing(s, fix):
            if s.is_vertical(r) and leq_len(s.iso(r), u) and not lo <= s.axis_index(r) <= hi:
                return False
        return True


def structure(sys):
    if "_ncs" not in sys.__dict__:
        sys._ncs = NCStructure(sys)
    return sys._ncs


# ---------------------------------------------------------------- factorizations

@dataclass(frozen=True)
class Factorization:
    factors: tuple

    def __len__(self):
        return len(self.factors)

    def product(self, sys):
        return sys.product(self.factors)

    def is_minimal(self, sys):
        return self.product(sys).length == len(self.factors)


def hurwitz_move(f, i, direction):
    """Hurwitz move at positions i, i+1 (1-based)."""
    fs = list(f.factors if isinstance(f, Factorization) else f)
    if not 1 <= i < len(fs):
        raise IndexError("move index out of range")
    a, b = fs[i - 1], fs[i]
    if direction == "left":
        fs[i - 1], fs[i] = b, b.apply_to(a)
    elif direction == "right":
        fs[i - 1], fs[i] = a.apply_to(b), a
    else:
        raise ValueError("direction is left or right")
    return Factorization(tuple(fs))


class _Registry:
    """Reflection ids with memoized conjugation r_i(H_j)."""

    def __init__(self, sys, window):
        self.sys = sys
        self.lo, self.hi = as_window(window) if window is not None else (None, None)
        self.refl, self.ids, self.inwin, self._conj = [], {}, [], {}

    def id(self, r):
        i = self.ids.get(r)
        if i is None:
            i = len(self.refl)
            self.ids[r] = i
            self.refl.append(r)
            s = self.sys
            self.inwin.append(self.lo is None or (not s.is_vertical(r)) or self.lo <= s.axis_index(r) <= self.hi)
        return i

    def conj(self, a, b):
        """id of r_a(H_b)."""
        key = (a, b)
        c = self._conj.get(key)
        if c is None:
            c = self.id(self.refl[a].apply_to(self.refl[b]))
            self._conj[key] = c
        return c


def hurwitz_orbit(sys, seed, window, limit=None):
    """All windowed factorizations reachable from seed (tuple of Reflection) by Hurwitz moves."""
    reg = _Registry(sys, window)
    start = tuple(reg.id(r) for r in seed)
    if not all(reg.inwin[i] for i in start):
        raise ValueError("window too small for the seed factorization")
    seen = {start}
    order = [start]
    todo = deque([start])
    m = len(start)
    while todo:
        f = todo.popleft()
        for i in range(m - 1):
            a, b = f[i], f[i + 1]
            for x, y in ((b, reg.conj(b, a)), (reg.conj(a, b), a)):
                if not (reg.inwin[x] and reg.inwin[y]):
                    continue
                g = f[:i] + (x, y) + f[i + 2:]
                if g not in seen:
                    seen.add(g)
                    order.append(g)
                    todo.append(g)
        if limit and len(order) > limit:
            raise RuntimeError("factorization limit exceeded")
    return reg, order


# ---------------------------------------------------------------- posets

@dataclass
class IntervalPoset:
    sys: object
    window: tuple
    elements: list
    covers: list  # (uid, vid, Reflection)
    complete: list
    factorizations: int = 0
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {u: i for i, u in enumerate(self.elements)}
        self._down = None

    def __contains__(self, u):
        return u in self.index

    def __len__(self):
        return len(self.elements)

    def rank_sizes(self):
        out = {}
        for u in self.elements:
            out[u.length] = out.get(u.length, 0) + 1
        return out

    def of_rank(self, k):
        return [u for u in self.elements if u.length == k]

    def lower_covers(self, vid):
        if self._down is None:
            self._down = {}
            for a, b, r in self.covers:
                self._down.setdefault(b, []).append((a, r))
        return self._down.get(vid, [])

    def below(self, v):
        """Elements of the windowed poset below v (down-closure along covers)."""
        vid = self.index[v]
        seen = {vid}
        todo = [vid]
        while todo:
            x = todo.pop()
            for a, _ in self.lower_covers(x):
                if a not in seen:
                    seen.add(a)
                    todo.append(a)
        return [self.elements[i] for i in sorted(seen)]

    def is_complete(self, u):
        return self.complete[self.index[u]]

    def to_text(self):
        from .cli import iso_json
        lines = [f"# poset {self.sys.spec} window {self.window[0]}..{self.window[1]}"]
        lines.append(f"elements {len(self.elements)}")
        for i, u in enumerate(self.elements):
            d = iso_json(u)
            lines.append(f"e {i} {d['matrix']} {d['translation']} {u.length} {element_class(self.sys, u)}")
        lines.append(f"covers {len(self.covers)}")
        for a, b, r in self.covers:
            lines.append(f"c {a} {b} {list(r.root)} {r.offset}")
        return "\n".join(lines) + "\n"


def build_poset(sys, window, limit=None):
    lo, hi = as_window(window)
    reg, facts = hurwitz_orbit(sys, sys.simples, (lo, hi), limit)
    one = sys.identity()
    elements, index = [one], {one: 0}
    covers = set()
    prefix = {(): 0}
    isos = {}

    def iso(i):
        if i not in isos:
            isos[i] = sys.iso(reg.refl[i])
        return isos[i]

    for f in facts:
        for j in range(1, len(f) + 1):
            key = f[:j]
            if key in prefix:
                continue
            a = prefix[f[:j - 1]]
            u = compose(elements[a], iso(f[j - 1]))
            if u not in index:
                index[u] = len(elements)
                elements.append(u)
            prefix[key] = index[u]
            covers.add((a, index[u], f[j - 1]))
    covers = sorted(covers)
    covers = [(a, b, reg.refl[r]) for a, b, r in covers]
    P = IntervalPoset(sys, (lo, hi), elements, covers, [False] * len(elements), len(facts))
    S = structure(sys)
    for i, u in enumerate(elements):
        if u.elliptic and S.all_reflections_below_in_window(u, (lo, hi)):
            P.complete[i] = all(x in index for x in elliptic_interval(sys, u).elements)
    return P


# ---------------------------------------------------------------- order

def some_factorization(sys, v, window=None):
    """A minimal reflection factorization of v in [1,w] using only in-window verticals."""
    lo, hi = as_window(window or (-2 * (sys.n + 2), 2 * (sys.n + 2)))

    def ok(r):
        return not sys.is_vertical(r) or lo <= sys.axis_index(r) <= hi

    if v.elliptic:
        I = elliptic_interval(sys, v)
        down = {}
        for a, b, r in I.covers:
            if ok(r):
                down.setdefault(b, []).append((a, r))

        def walk(x):
            if x == 0:
                return ()
            for a, r in down.get(x, []):
                rest = walk(a)
                if rest is not None:
                    return rest + (r,)
            return None

        out = walk(I.index[v])
        if out is None:
            raise ValueError("no windowed factorization")
        return out
    S = structure(sys)
    for r in interval_reflections(sys, (lo, hi)).all():
        rest = compose(sys.iso(r), v)
        if rest.length == v.length - 1 and S.in_interval(rest):
            try:
                return (r,) + some_factorization(sys, rest, (lo, hi))
            except ValueError:
                continue
    raise ValueError("no windowed factorization")


def prefix_set(sys, v, window):
    """All prefix products of minimal factorizations of v.

    For elliptic v the Hurwitz orbit is finite and is explored in full; for
    hyperbolic v only windowed factorizations are kept.
    """
    if v.elliptic:
        window = None
    cache = sys.__dict__.setdefault("_prefix", {})
    key = (v, as_window(window) if window is not None else None)
    if key in cache:
        return cache[key]
    seed = some_factorization(sys, v, window) if window is not None else some_factorization(sys, v, (-10**9, 10**9))
    reg, facts = hurwitz_orbit(sys, seed, window)
    out = {sys.identity()}
    pre = {(): sys.identity()}
    for f in facts:
        for j in range(1, len(f) + 1):
            k = f[:j]
            if k not in pre:
                pre[k] = compose(pre[f[:j - 1]], sys.iso(reg.refl[f[j - 1]]))
                out.add(pre[k])
    cache[key] = out
    return out


def leq_W(sys, u, v, window=None, poset=None, path="auto"):
    if poset is not None:
        if u not in poset or v not in poset:
            raise ValueError("element not in windowed poset")
        window = window or poset.window
    if path == "fast" or (path == "auto" and u.elliptic and v.elliptic):
        if not (u.elliptic and v.elliptic):
            raise ValueError("fast path needs elliptic elements")
        return u.mov_min_fix()[2].contains(v.mov_min_fix()[2]) and leq_L(u, v)
    if window is None:
        raise ValueError("prefix path needs a window")
    return u in prefix_set(sys, v, window)


def complements_phi(sys, u):
    return {
        "right": compose(invert(u), sys.w),
        "left": compose(sys.w, invert(u)),
        "phi": compose(sys.w_inv, compose(u, sys.w)),
        "phi_inv": compose(sys.w, compose(u, sys.w_inv)),
    }


# ---------------------------------------------------------------- lattice defects

def lattice_defect_search(poset):
    """A bowtie (x, y, {z1, z2}) with two minimal common upper bounds, or None.

    Only pairs whose common upper bounds are forced to be hyperbolic are
    searched (disjoint fixed sets, or a hyperbolic member): there the set of
    upper bounds is a subset of the finite, exactly known hyperbolic part, so
    a returned witness is a certificate and not a truncation artifact.
    """
    sys = poset.sys
    S = structure(sys)
    hyp = S.hyperbolic
    cand = [u for u in poset.elements if not u.is_identity() and u != sys.w]
    cand.sort(key=lambda u: (u.length, poset.index[u]))
    ups = {}

    def upper(x):
        if x not in ups:
            ups[x] = frozenset(z for z in hyp if S.leq(x, z))
        return ups[x]

    for x, y in combinations(cand, 2):
        if x.elliptic and y.elliptic:
            fx, fy = x.mov_min_fix()[2], y.mov_min_fix()[2]
            if _meet(fx, fy):
                continue
        if S.leq(x, y) or S.leq(y, x):
            continue
        common = upper(x) & upper(y)
        mins = [z for z in common if not any(v != z and S.leq(v, z) for v in common)]
        if len(mins) >= 2:
            mins.sort(key=lambda z: (z.length, z.key))
            return x, y, (mins[0], mins[1])
    return None


def _meet(A, B):
    """Do two affine subspaces intersect?"""
    rows = [list(d) for d in A.dirs] + [list(la.vscale(-1, d)) for d in B.dirs]
    if not rows:
        return A.base == B.base
    M = la.transpose(rows)
    return la.solve(M, list(la.vsub(B.base, A.base))) is not None


def verify_bowtie(sys, x, y, zs):
    """Independent check: x, y below both z's, and no common upper bound strictly below either."""
    S = structure(sys)
    z1, z2 = zs
    if z1 == z2 or not all(S.leq(a, z) for a in (x, y) for z in zs):
        return False
    for z in zs:
        if z.elliptic:
            below = elliptic_interval(sys, z).elements
        else:
            below = [v for v in S.hyperbolic if S.leq(v, z)]
            if x.elliptic and y.elliptic and _meet(x.mov_min_fix()[2], y.mov_min_fix()[2]):
                return False  # elliptic upper bounds possible; not certified here
        for v in below:
            if v != z and S.leq(x, v) and S.leq(y, v) and (S.leq(v, z1) and S.leq(v, z2)):
                return False
    return True


# ---------------------------------------------------------------- horizontal part

def root_components(roots):
    """Connected components under non-orthogonality."""
    roots = list(roots)
    comp = []
    seen = set()
    for r in roots:
        if r in seen:
            continue
        block = [r]
        seen.add(r)
        i = 0
        while i < len(block):
            a = block[i]
            for b in roots:
                if b not in seen and la.dot(a, b) != 0:
                    seen.add(b)
                    block.append(b)
            i += 1
        comp.append(sorted(block))
    return sorted(comp, key=lambda c: (la.rank([list(v) for v in c]), c[0]))


@dataclass
class HorizontalPart:
    elements: list
    components: list  # list of lists of primitive roots
    factors: list  # per component: list of elements supported there
    maximal: list  # per component: maximal elements
    decomposition: dict  # element -> tuple of component factors


def _support_in(u, span):
    mov = u.mov_min_fix()[0]
    return all(la.in_span(d, span) for d in mov.dirs)


def horizontal_part(sys):
    if "_hpart" in sys.__dict__:
        return sys._hpart
    from .coxeter import horizontal_roots
    S = structure(sys)
    comps = root_components(horizontal_roots(sys))
    spans = [la.independent_rows([list(r) for r in c]) for c in comps]
    factors = [[h for h in S.horizontal if _support_in(h, sp)] for sp in spans]
    maximal = []
    for c, fac in zip(comps, factors):
        m = la.rank([list(r) for r in c])
        maximal.append([h for h in fac if h.length == m])
    dec = {}
    for combo in product(*factors):
        u = sys.identity()
        for x in combo:
            u = compose(u, x)
        if u in dec:
            raise AssertionError("horizontal part is not a product")
        dec[u] = combo
    if set(dec) != S.horizontal_set:
        raise AssertionError("horizontal part is not the product of its components")
    sys._hpart = HorizontalPart(S.horizontal, comps, factors, maximal, dec)
    return sys._hpart


# ---------------------------------------------------------------- hyperbolic elements

def hyperbolic_horizontal_decomposition(sys, u, window=None):
    if u.elliptic:
        raise ValueError("u is not hyperbolic")
    S = structure(sys)
    if u not in S.hyperbolic_set:
        raise ValueError("u is not in [1,w]")
    window = window or _period_window(sys)
    below = S.reflections_below(u, window)
    comps = root_components({r.root for r in below})
    vert = [c for c in comps if any(la.dot(b, sys.mu) != 0 for b in c)]
    if len(vert) != 1:
        raise AssertionError("expected exactly one component with vertical roots")
    hor = [b for c in comps if c is not vert[0] for b in c]
    span = la.independent_rows([list(b) for b in hor]) if hor else []
    target = len(span)
    hs = [h for h in S.horizontal if h.length == target and _support_in(h, span) and S.leq(h, u)]
    if target == 0:
        hs = [sys.identity()]
    if len(hs) != 1:
        raise AssertionError(f"{len(hs)} candidates for the horizontal factor")
    h = hs[0]
    up = compose(u, invert(h))
    if up.elliptic or up.length + h.length != u.length or not S.leq(up, u):
        raise AssertionError("bad hyperbolic-horizontal decomposition")
    return up, h


def _period_window(sys):
    """Window of axis points covering one period of the verticals below any hyperbolic element."""
    from math import lcm
    hp = horizontal_part(sys)
    per = 1
    for mx in hp.maximal:
        per = lcm(per, max(1, len(mx)))
    shift = int(1 / sys.frame.spacing)  # axis points per application of w
    gap = max_parallel_gap(sys) + 1
    r = max(per * shift, gap) + 2 * (sys.n + 1)
    return (-r, r)


def wu_type(sys, u, window=None):
    """Name of the Coxeter type of W_u for hyperbolic u, e.g. 'A~1 x A1' or 'C~2'."""
    from .coxeter import affine_type_name, root_system_name, subgroup_arrangement
    up, h = hyperbolic_horizontal_decomposition(sys, u, window)
    S = structure(sys)
    window = window or _period_window(sys)
    name = [affine_type_name(subgroup_arrangement(sys, S.reflections_below(up, window)))]
    if not h.is_identity():
        hr = [r for r in reflections_containing(sys, h.mov_min_fix()[2]) if leq_len(sys.iso(r), h)]
        for c in root_components(subgroup_arrangement(sys, hr).dirs):
            name.append(root_system_name(c))
    return " x ".join(name)


def hyperbolic_census(sys):
    S = structure(sys)
    out = {"translations": 0, "by_length": {}, "types": {}}
    for u in S.hyperbolic:
        out["by_length"][u.length] = out["by_length"].get(u.length, 0) + 1
        if u.is_translation():
            out["translations"] += 1
        t = wu_type(sys, u)
        out["types"].setdefault(u.length, {})
        out["types"][u.length][t] = out["types"][u.length].get(t, 0) + 1
    return out
