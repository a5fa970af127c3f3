"""Reflection orderings, axial orderings of R_0 and EL-labeling checks."""
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .coxeter import (
    Arrangement, horizontal_components, reflections_containing, verticals_at, adjacent_horizontals,
    elliptic_interval, leq_len, w_power, c0_vertices,
)
from .euclid import Reflection, compose, invert

F = Fraction


# ---------------------------------------------------------------- line orderings

def _as_poly(direction):
    """A direction is a vector or a list of vectors d0 + eps d1 + eps^2 d2 + ..."""
    if direction and isinstance(direction[0], (list, tuple)):
        return [tuple(F(x) for x in d) for d in direction]
    return [tuple(F(x) for x in direction)]


def line_reflection_ordering(refls, origin, a, direction):
    """Order reflections through origin along the line a + theta*direction.

    Above-a crossings come first, then below-a ones, each from bottom to top.
    With roots normalized by <a - origin, alpha> = 1 this is the ascending
    order of <direction, alpha>, compared as polynomials in a small eps.
    """
    dirs = _as_poly(direction)
    if all(not any(d) for d in dirs):
        raise ValueError("zero direction")
    rel = la.vsub(tuple(F(x) for x in a), tuple(F(x) for x in origin))
    keys = {}
    for r in refls:
        s = la.dot(rel, r.root)
        if s == 0:
            raise ValueError("basepoint lies on a hyperplane")
        keys[r] = tuple(la.dot(d, r.root) / s for d in dirs)
    # deterministic perturbation for non-generic lines
    n = len(rel)
    extra = 0
    while len(set(keys.values())) < len(keys) and extra < n:
        e = tuple(F(int(i == extra)) for i in range(n))
        for r in refls:
            keys[r] = keys[r] + (la.dot(e, r.root) / la.dot(rel, r.root),)
        extra += 1
    if len(set(keys.values())) < len(keys):
        raise ValueError("could not make the line generic")
    return sorted(refls, key=lambda r: keys[r])


def positive_roots_at(refls, point):
    """Orient each root so that <point - H, alpha> > 0."""
    out = {}
    for r in refls:
        s = la.dot(point, r.root) - r.offset
        out[r] = r.root if s > 0 else tuple(-x for x in r.root)
    return out


def reflection_ordering_ok(order, point):
    """Betweenness check with positive roots taken relative to a chamber point."""
    pr = positive_roots_at(order, point)
    pos = {r: i for i, r in enumerate(order)}
    rs = list(order)
    for i, r1 in enumerate(rs):
        for r2 in rs[i + 1:]:
            M = [[pr[r1][k], pr[r2][k]] for k in range(len(point))]
            for r in rs:
                if r is r1 or r is r2:
                    continue
                sol = la.solve(M, list(pr[r]))
                if sol is None or not (sol[0] > 0 and sol[1] > 0):
                    continue
                lo, hi = sorted((pos[r1], pos[r2]))
                if not lo < pos[r] < hi:
                    return False
    return True


# ---------------------------------------------------------------- horizontal ordering

def image_reflection(g, r):
    """The reflection in g(H) for an isometry g."""
    L = g.linear
    beta = la.matvec(L, r.root)
    bb = la.dot(r.root, r.root)
    p = tuple(F(x) * r.offset / bb for x in r.root)
    return Reflection(beta, la.dot(beta, g(p)))


def _coxeter_path(sys, h, at=None):
    """Simple roots s_1..s_m of W_h (oriented at a chamber) with h = s_1 ... s_m along an A_m path.

    With at given, only the chamber of W_h containing that point is tried.
    """
    fix = h.mov_min_fix()[2]
    refl = reflections_containing(sys, fix)
    arr = Arrangement({r.root: (r.offset, None) for r in refl})
    if at is not None:
        for order in _path_orders(arr.walls(at)):
            if sys.product(order) == h:
                return order, at
        return None, at
    # chambers of the finite arrangement, reached by reflecting a generic point
    base = fix.base
    x0 = base
    k = 1
    while arr.on_hyperplane(x0):
        x0 = tuple(b + F(1, 7 ** k) * F(i + 1) ** 2 / (1 + k) for i, b in enumerate(base))
        k += 1
    seen = {arr.signature(x0)}
    todo = [x0]
    while todo:
        x = todo.pop()
        walls = arr.walls(x)
        for order in _path_orders(walls):
            if sys.product(order) == h:
                return order, x
        for wl in walls:
            y = wl.mirror(x)
            sg = arr.signature(y)
            if sg not in seen:
                seen.add(sg)
                todo.append(y)
    raise AssertionError("no chamber of W_h realizes h as a path product")


def _path_orders(walls):
    """Orderings of walls following the Dynkin path (both directions)."""
    m = len(walls)
    if m == 1:
        return [list(walls)]
    adj = {w: [v for v in walls if v is not w and la.dot(w.root, v.root) != 0] for w in walls}
    ends = [w for w in walls if len(adj[w]) == 1]
    out = []
    for e in ends:
        path = [e]
        while len(path) < m:
            nxt = [v for v in adj[path[-1]] if v not in path]
            if not nxt:
                break
            path.append(nxt[0])
        if len(path) == m:
            out.append(path)
    return out


def horizontal_order(sys):
    """The total order on R_hor: per component the lex order of root pairs, translates adjacent."""
    cache = sys.__dict__.get("_hor_order")
    if cache is not None:
        return cache
    hc = horizontal_components(sys)
    adj = adjacent_horizontals(sys)
    c0_walls = set(sys.simples)
    order = []
    for comp, h in zip(hc.components, hc.h_factors):
        path, x = _coxeter_path(sys, h, sys.frame.point(F(1, 2)))
        if path is None:
            raise AssertionError("h_i is not a path product in the chamber of the axis basepoint")
        m = len(path)
        # orient simple roots positively at x
        sroots = []
        for r in path:
            s = la.dot(x, r.root) - r.offset
            a = tuple(F(v) / sys.steps[r.root] for v in r.root)  # equal lengths inside a component
            sroots.append(a if s > 0 else tuple(-v for v in a))
        pairs = []
        for j in range(m):
            for k in range(j + 1, m + 1):
                v = [F(0)] * len(x)
                for t in range(j, k):
                    v = [a + b for a, b in zip(v, sroots[t])]
                pairs.append(((j, k), la.primitive(v)))
        pairs.sort()
        for _, root in pairs:
            trans = [r for r in adj if r.root == root]
            trans.sort(key=lambda r: (r not in c0_walls, r.offset))
            order += trans
    if set(order) != set(adj):
        raise AssertionError("horizontal order does not cover R_hor")
    sys._hor_order = order
    return order


# ---------------------------------------------------------------- axial ordering

def fundamental_period(sys):
    """Number of axis points moved by one application of w."""
    x = 1 / sys.frame.spacing
    if x.denominator != 1:
        raise AssertionError("w does not move the axis by whole points")
    return int(x)


class AxialOrdering:
    def __init__(self, sys, window=(-6, 7), tie_policy="lex"):
        if tie_policy not in ("lex", "reverse"):
            raise ValueError("tie policy is lex or reverse")
        self.sys = sys
        self.window = window
        self.tie_policy = tie_policy
        self.horizontals = horizontal_order(sys)
        self.hpos = {r: i for i, r in enumerate(self.horizontals)}
        self.P = fundamental_period(sys)
        self._fund = {}
        for i in range(1, self.P + 1):
            rs = sorted(verticals_at(sys, i), key=lambda r: r.root, reverse=(tie_policy == "reverse"))
            self._fund[i] = {r: t for t, r in enumerate(rs)}
        self._keys = {}

    def tie(self, r, i):
        j = (i - 1) // self.P  # r sits at i = i0 + j*P with i0 in 1..P
        i0 = i - j * self.P
        r0 = image_reflection(w_power(self.sys, -j), r) if j else r
        t = self._fund[i0].get(r0)
        if t is None:
            raise AssertionError("tie transport left the fundamental points")
        return t

    def key(self, r):
        k = self._keys.get(r)
        if k is not None:
            return k
        s = self.sys
        if s.is_vertical(r):
            i = s.axis_index(r)
            k = (0 if i >= 1 else 2, i, self.tie(r, i))
        else:
            if r not in self.hpos:
                raise ValueError(f"{r} is not in R_hor")
            k = (1, self.hpos[r], 0)
        self._keys[r] = k
        return k

    def less(self, r, s):
        return self.key(r) < self.key(s)

    def sort(self, refls):
        return sorted(refls, key=self.key)

    def word_key(self, word):
        return tuple(self.key(r) for r in word)

    def positive_verticals(self):
        lo, hi = self.window
        return self.sort([r for i in range(max(1, lo), hi + 1) for r in verticals_at(self.sys, i)])

    def negative_verticals(self):
        lo, hi = self.window
        return self.sort([r for i in range(lo, min(0, hi) + 1) for r in verticals_at(self.sys, i)])

    def windowed(self):
        return self.positive_verticals() + list(self.horizontals) + self.negative_verticals()


def axial_ordering(sys, window=(-6, 7), tie_policy="lex"):
    return AxialOrdering(sys, window, tie_policy)


def phi_compatible(ordering):
    """r < r' at the same axis point implies phi(r) < phi(r') (checked on the window)."""
    s = ordering.sys
    lo, hi = ordering.window
    for i in range(lo, hi + 1):
        rs = verticals_at(s, i)
        for r in rs:
            for r2 in rs:
                if r != r2 and ordering.less(r, r2):
                    a = image_reflection(s.w_inv, r)
                    b = image_reflection(s.w_inv, r2)
                    if not ordering.less(a, b):
                        return False
    return True


# ---------------------------------------------------------------- factorizations and EL

def reflections_below(sys, u, ordering):
    from .interval import structure
    S = structure(sys)
    if u.elliptic:
        fix = u.mov_min_fix()[2]
        return [r for r in reflections_containing(sys, fix) if leq_len(sys.iso(r), u)]
    return S.reflections_below(u, ordering.window)


def increasing_factorization(sys, u, ordering):
    """The strictly increasing minimal factorization, built greedily from the smallest reflection."""
    out = []
    cur = u
    while not cur.is_identity():
        below = reflections_below(sys, cur, ordering)
        if not below:
            raise ValueError("incomplete interval")
        r = min(below, key=ordering.key)
        if out and not ordering.less(out[-1], r):
            raise AssertionError("greedy factorization is not increasing")
        out.append(r)
        cur = compose(sys.iso(r), cur)
    return out


@dataclass
class ELReport:
    rank: int
    chain_count: int
    increasing_count: int
    lex_ok: bool
    colex_ok: bool
    caveat: bool = False

    @property
    def ok(self):
        return self.increasing_count == 1 and self.lex_ok and self.colex_ok


class FiniteLabeledPoset:
    """Cover graph of a finite interval with reflection labels, for chain enumeration."""

    def __init__(self, sys, top):
        I = elliptic_interval(sys, top)
        self.sys = sys
        self.I = I
        self.up = {}
        for a, b, r in I.covers:
            self.up.setdefault(a, []).append((b, r))
        self._leq = {}
        self._words = {}

    def leq(self, i, j):
        k = (i, j)
        if k not in self._leq:
            e = self.I.elements
            self._leq[k] = leq_len(e[i], e[j])
        return self._leq[k]

    def words(self, i, j):
        k = (i, j)
        if k in self._words:
            return self._words[k]
        if i == j:
            res = [()]
        else:
            res = []
            for b, r in self.up.get(i, []):
                if self.leq(b, j):
                    res += [(r,) + wd for wd in self.words(b, j)]
        self._words[k] = res
        return res


def check_words(words, ordering):
    keys = [ordering.word_key(w) for w in words]
    inc = [k for k in keys if all(a < b for a, b in zip(k, k[1:]))]
    rank = len(words[0]) if words else 0
    if len(inc) != 1:
        return ELReport(rank, len(words), len(inc), False, False)
    lex_ok = inc[0] == min(keys)
    colex_ok = tuple(reversed(inc[0])) == max(tuple(reversed(k)) for k in keys)
    return ELReport(rank, len(words), 1, lex_ok, colex_ok)


def verify_el_interval(sys, u, v, ordering, poset=None):
    """EL checks on [u,v] through the label-preserving shift to [1, u^-1 v]."""
    x = compose(invert(u), v)
    if x.is_identity():
        return ELReport(0, 1, 1, True, True)
    if x.elliptic:
        P = FiniteLabeledPoset(sys, x)
        top = P.I.index[x]
        return check_words(P.words(0, top), ordering)
    if poset is None:
        raise ValueError("hyperbolic interval needs a windowed poset")
    words = _windowed_words(poset, x)
    rep = check_words(words, ordering)
    rep.caveat = True
    return rep


def _windowed_words(poset, x):
    """Label words of maximal chains 1 -> x inside a windowed poset."""
    vid = poset.index[x]
    memo = {}

    def go(i):
        if i == 0:
            return [()]
        if i in memo:
            return memo[i]
        res = []
        for a, r in poset.lower_covers(i):
            res += [wd + (r,) for wd in go(a)]
        memo[i] = res
        return res

    return go(vid)


def el_suite_parabolic(sys, top, ordering, sample=None, rng=None, max_rank=None):
    """EL checks on every interval [x,y] inside the finite interval [1,top] (or a random sample)."""
    P = FiniteLabeledPoset(sys, top)
    els = P.I.elements
    n = len(els)
    pairs = [(i, j) for i in range(n) for j in range(n) if P.leq(i, j)]
    if max_rank is not None:
        pairs = [(i, j) for i, j in pairs if els[j].length - els[i].length <= max_rank]
    if sample is not None and sample < len(pairs):
        pairs = rng.sample(pairs, sample)
    fails = []
    for i, j in pairs:
        rep = check_words(P.words(i, j), ordering)
        if not rep.ok:
            fails.append((i, j, rep))
    return len(pairs), fails


def compatible_with(order, top, point):
    """Rank-2 compatibility: simple roots a, b of an irreducible induced subsystem with r_a r_b <= top give r_a before r_b."""
    pr = positive_roots_at(order, point)
    pos = {r: i for i, r in enumerate(order)}
    rs = list(order)
    amb = top.amb
    for i, r1 in enumerate(rs):
        for r2 in rs[i + 1:]:
            span = [pr[r1], pr[r2]]
            sub = [r for r in rs if la.in_span(pr[r], span)]
            if len(sub) < 3:  # reducible rank 2
                continue
            # simple roots of the rank-2 subsystem: the two not positively decomposable
            simple = []
            for r in sub:
                dec = False
                for a in sub:
                    for b in sub:
                        if a is r or b is r or a is b:
                            continue
                        c = la.solve([list(x) for x in zip(pr[a], pr[b])], list(pr[r]))
                        if c is not None and c[0] > 0 and c[1] > 0:
                            dec = True
                if not dec:
                    simple.append(r)
            if len(simple) != 2 or set(simple) != {r1, r2}:
                continue
            a, b = simple
            for x, y in ((a, b), (b, a)):
                u = compose(x.isometry(amb), y.isometry(amb))
                if leq_len(u, top) and not pos[x] < pos[y]:
                    return False
    return True


def horizontal_el_suite(sys, ordering):
    """EL checks on every interval between horizontal elements of [1,w]."""
    from .interval import horizontal_part
    hp = horizontal_part(sys)
    els = list(hp.elements)
    n = 0
    fails = []
    for x in els:
        for y in els:
            if x != y and leq_len(x, y):
                n += 1
                rep = verify_el_interval(sys, x, y, ordering)
                if not rep.ok:
                    fails.append((x, y, rep))
    return n, fails


def smallest_reflections(sys, ordering):
    """The n+1 smallest reflections of R_0, and whether each right complement fixes a vertex of C_0."""
    cand = ordering.positive_verticals()[: sys.n + 1]
    if len(cand) < sys.n + 1:
        raise ValueError("window too small")
    # horizontals and negative verticals come after every positive vertical
    verts = c0_vertices(sys)
    out = []
    for r in cand:
        x = compose(sys.iso(r), sys.w)
        fixes = x.elliptic and any(x(v) == sys.amb.canon(v) for v in verts)
        out.append((r, fixes))
    return out


def all_factorizations(sys, u):
    """All minimal reflection factorizations of an elliptic u (brute force over [1,u])."""
    I = elliptic_interval(sys, u)
    up = {}
    for a, b, r in I.covers:
        up.setdefault(a, []).append((b, r))
    top = I.index[u]
    out = []

    def go(i, word):
        if i == top:
            out.append(tuple(word))
            return
        for b, r in up.get(i, []):
            go(b, word + [r])

    go(0, [])
    return out


def _component_direction(sys, ui, a):
    """Polynomial direction d_0 + eps d_1 + ... in Span(Phi_i) realizing the (j,k)-lex line order for u_i."""
    path, x = _coxeter_path(sys, ui, a)
    if path is None:
        raise AssertionError("u_i is not a path product in the chamber of the basepoint")
    sig = []
    for r in path:
        a = tuple(F(v) / sys.steps[r.root] for v in r.root)
        sig.append(a if la.dot(x, r.root) - r.offset > 0 else tuple(-v for v in a))
    m = len(sig)
    G = [[la.dot(a, b) for b in sig] for a in sig]
    out = []
    # sig_j = e_{j+1} - e_j is positive at the basepoint; <d, sig_j> = x_{j+1} - x_j with x = (1, eps, eps^2, ...)
    for k in range(m + 1):
        rhs = [F(int(j + 1 == k)) - F(int(j == k)) for j in range(m)]
        c = la.solve(G, rhs)
        d = [F(0)] * len(x)
        for cj, a in zip(c, sig):
            d = [u + cj * v for u, v in zip(d, a)]
        out.append(tuple(d))
    return out


def parabolic_line_ordering(sys, u):
    """The perturbed-axis line ordering of the reflections of W_u, for elliptic u in [1,w]."""
    fix = u.mov_min_fix()[2]
    refl = reflections_containing(sys, fix)
    hc = horizontal_components(sys)
    a = sys.frame.point(F(1, 2))
    dirs = [tuple(F(v) for v in sys.mu)]
    extra = []
    for comp in hc.components:
        mine = [r for r in refl if r.root in comp.roots]
        if not mine:
            continue
        ui = next((m for m in comp.maximal if all(leq_len(sys.iso(r), m) for r in mine if leq_len(sys.iso(r), u))), None)
        if ui is None:
            raise AssertionError("no maximal horizontal element above [1,u] in this component")
        extra.append(_component_direction(sys, ui, a))
    n = len(dirs[0])
    for k in range(max((len(e) for e in extra), default=0)):
        v = [F(0)] * n
        for e in extra:
            if k < len(e):
                v = [a + b for a, b in zip(v, e[k])]
        dirs.append(tuple(v))
    return line_reflection_ordering(refl, fix.base, a, dirs)
