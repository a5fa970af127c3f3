"""Interval complex cells, fiber components, the canonical nice subcomplex and the Morse matching."""
from dataclasses import dataclass, field
from itertools import combinations

from .coxeter import c0_vertices, parabolic_coxeter_element, elliptic_interval, leq_len, verticals_at, max_parallel_gap
from .euclid import compose, invert, reflection_of
from .interval import structure, is_horizontal
from .shelling import AxialOrdering, horizontal_order


# ---------------------------------------------------------------- simplices

def product(sys, parts):
    u = sys.identity()
    for x in parts:
        u = compose(u, x)
    return u


def is_simplex(sys, parts):
    if any(x.is_identity() for x in parts):
        return False
    u = product(sys, parts)
    if sum(x.length for x in parts) != u.length:
        return False
    return structure(sys).in_interval(u)


def check_simplex(sys, parts):
    if not is_simplex(sys, parts):
        raise ValueError("not a simplex of the interval complex")


def faces(parts):
    """The d+1 faces d_0, ..., d_d of [x_1|...|x_d]."""
    d = len(parts)
    if d == 0:
        return []
    out = [parts[1:]]
    for i in range(d - 1):
        out.append(parts[:i] + (compose(parts[i], parts[i + 1]),) + parts[i + 2:])
    out.append(parts[:-1])
    return out


def fixes_c0_vertex(sys, u):
    return u.elliptic and any(u(b) == sys.amb.canon(b) for b in c0_vertices(sys))


def in_xprime(sys, parts):
    return fixes_c0_vertex(sys, product(sys, parts))


def pi(sys, parts):
    return product(sys, parts)


def lam(sys, parts):
    u = product(sys, parts)
    if u == sys.w:
        return parts[:-1]
    return (compose(sys.w, invert(u)),) + parts


def rho(sys, parts):
    u = product(sys, parts)
    if u == sys.w:
        return parts[1:]
    return parts + (compose(invert(u), sys.w),)


def simplex_class(sys, parts):
    """'i' if every part is elliptic and one is vertical, else 'ii'."""
    if all(x.elliptic for x in parts) and any(not is_horizontal(sys, x) for x in parts):
        return "i"
    return "ii"


@dataclass
class Navigation:
    pi: object
    lam: tuple
    rho: tuple
    kappa: tuple
    cls: str


def fiber_navigation(sys, parts):
    parts = tuple(parts)
    check_simplex(sys, parts)
    u = product(sys, parts)
    l, r = lam(sys, parts), rho(sys, parts)
    return Navigation(u, l, r, parts if u == sys.w else l, simplex_class(sys, parts))


# ---------------------------------------------------------------- X'_W and the Salvetti count

def xprime_cells(sys):
    """All simplices whose product is elliptic and fixes a vertex of C_0."""
    if "_xprime" in sys.__dict__:
        return sys._xprime
    cells = set()
    for b in c0_vertices(sys):
        I = elliptic_interval(sys, parabolic_coxeter_element(sys, b))
        els = I.elements
        up = {i: [j for j in range(len(els)) if j != i and leq_len(els[i], els[j])] for i in range(len(els))}

        def chains(i, acc):
            cells.add(tuple(acc))
            for j in up[i]:
                chains(j, acc + [compose(invert(els[i]), els[j])])

        chains(0, [])
    sys._xprime = cells
    return cells


def f_vector(cells):
    top = max(len(c) for c in cells)
    f = [0] * (top + 1)
    for c in cells:
        f[len(c)] += 1
    return tuple(f)


def build_xprime(sys):
    cells = xprime_cells(sys)
    return cells, f_vector(cells)


def salvetti_fvector(sys):
    """Counts of subsets T of the simple reflections with W_T finite (w_T elliptic)."""
    S = list(sys.simples)
    f = []
    for k in range(len(S) + 1):
        c = sum(1 for T in combinations(S, k) if sys.product(list(T)).elliptic)
        if c:
            f.append(c)
    return tuple(f)


def _chain_counts(sys, u):
    """Number of d-simplices of the interval complex of [1,u], for each d."""
    I = elliptic_interval(sys, u)
    els = I.elements
    n = len(els)
    lt = [[j for j in range(n) if j != i and leq_len(els[i], els[j])] for i in range(n)]
    # ways[d][i]: strict chains of length d from 1 ending at element i
    ways = [[0] * n for _ in range(u.length + 1)]
    ways[0][0] = 1
    for d in range(u.length):
        for i in range(n):
            if ways[d][i]:
                for j in lt[i]:
                    ways[d + 1][j] += ways[d][i]
    return [sum(row) for row in ways]


def xprime_fvector_inclusion_exclusion(sys):
    """f(X'_W) from the subcomplexes of the standard parabolic intervals [1,w_T], T a maximal proper subset.

    Intersections of the [1,w_T] are the [1,w_{T cap T'}], so inclusion-exclusion runs over subsets of S.
    """
    S = list(sys.simples)
    m = len(S)
    maximal = [tuple(i for i in range(m) if i != k) for k in range(m)]
    total = [0] * m
    for size in range(1, m + 1):
        for fam in combinations(maximal, size):
            T = set(range(m))
            for t in fam:
                T &= set(t)
            u = sys.product([S[i] for i in sorted(T)])
            sign = 1 if size % 2 else -1
            for d, c in enumerate(_chain_counts(sys, u)):
                total[d] += sign * c
    while total and total[-1] == 0:
        total.pop()
    return tuple(total)


# ---------------------------------------------------------------- fiber components

@dataclass
class FiberComponent:
    d: int
    kind: str  # finite | infinite
    seq: tuple  # x_1..x_d with x_{i+d} = phi(x_i)
    cells: list  # finite: the whole cycle; infinite: the K' segment
    xprime: list
    lo: int = 0  # infinite: first and last positions of X' cells
    hi: int = 0
    guards: tuple = ()

    def x(self, sys, i):
        """x_i for any integer i."""
        S = structure(sys)
        q, r = divmod(i - 1, self.d)
        u = self.seq[r]
        step = S.phi if q > 0 else S.phi_inv
        for _ in range(abs(q)):
            u = step(u)
        return u

    def tau(self, sys, i):
        return tuple(self.x(sys, j) for j in range(i, i + self.d - 1))

    def sigma(self, sys, i):
        return tuple(self.x(sys, j) for j in range(i, i + self.d))


def _walk_finite(sys, seed, cap=100000):
    cyc = [seed]
    cur = rho(sys, seed)
    while cur != seed:
        cyc.append(cur)
        cur = rho(sys, cur)
        if len(cyc) > cap:
            raise RuntimeError("fiber component walk did not close")
    return cyc


def _xprime_offsets(sys, u):
    """Integers k with phi^k(u) fixing a vertex of C_0."""
    if not u.elliptic:
        return []
    fix = u.mov_min_fix()[2]
    if is_horizontal(sys, u):
        raise AssertionError("horizontal product inside an infinite component")
    return sorted({j for _, _, j in structure(sys).axial_vertices_in(fix)})


def fiber_components(sys):
    if "_fibers" in sys.__dict__:
        return sys._fibers
    X = xprime_cells(sys)
    owner = {}
    comps = []
    for tau in sorted(X, key=lambda c: (len(c), [x.key for x in c])):
        if tau in owner:
            continue
        d = len(tau) + 1
        seq = tau + (compose(invert(product(sys, tau)), sys.w),)
        inf = any(x.elliptic and not is_horizontal(sys, x) for x in seq)
        if not inf:
            cells = _walk_finite(sys, tau)
            xp = [c for c in cells if c in X]
            comp = FiberComponent(d, "finite", seq, cells, xp)
        else:
            comp = FiberComponent(d, "infinite", seq, [], [])
            pos = []
            for i in range(1, d + 1):
                u = product(sys, comp.tau(sys, i))
                pos += [i + k * d for k in _xprime_offsets(sys, u)]
            lo, hi = min(pos), max(pos)
            cells = []
            for i in range(lo, hi + 1):
                cells.append(comp.tau(sys, i))
                if i < hi:
                    cells.append(comp.sigma(sys, i))
            comp.cells = cells
            comp.xprime = [c for c in cells if c in X]
            comp.lo, comp.hi = lo, hi
            comp.guards = (comp.sigma(sys, lo - 1), comp.sigma(sys, hi))
            if set(comp.xprime) != {comp.tau(sys, i) for i in set(pos)}:
                raise AssertionError("X' positions disagree with the enumerated X' cells")
        for c in comp.xprime:
            if c in owner:
                raise AssertionError("X' cell in two fiber components")
            owner[c] = len(comps)
        comps.append(comp)
    if set(owner) != X:
        raise AssertionError("some X' cell was not reached")
    sys._fibers = comps
    return comps


def kd_cells(sys):
    """K_D as the union of the finite fiber components."""
    return {c for comp in fiber_components(sys) if comp.kind == "finite" for c in comp.cells}


def canonical_nice_subcomplex(sys):
    if "_kprime" not in sys.__dict__:
        cells = set()
        for comp in fiber_components(sys):
            cells.update(comp.cells)
        sys._kprime = cells
    return sys._kprime


@dataclass
class NiceReport:
    face_closed: bool
    xprime_face_closed: bool
    finite_contained: bool
    segments_ok: bool
    meets_xprime: bool

    @property
    def ok(self):
        return self.face_closed and self.xprime_face_closed and self.finite_contained and self.segments_ok \
            and self.meets_xprime


def verify_nice(sys):
    K = canonical_nice_subcomplex(sys)
    X = xprime_cells(sys)
    comps = fiber_components(sys)
    face_closed = all(f in K for c in K for f in faces(c))
    xface = all(f in X for c in X for f in faces(c))
    fin = all(set(comp.cells) <= K for comp in comps if comp.kind == "finite")
    seg = True
    meets = True
    for comp in comps:
        if comp.kind != "infinite":
            continue
        meets = meets and bool(comp.xprime)
        # consecutive cells are adjacent in the fiber and the guards lie outside K'
        for a, b in zip(comp.cells, comp.cells[1:]):
            seg = seg and rho(sys, a) == b and lam(sys, b) == a
        lo_guard, hi_guard = comp.guards
        seg = seg and lo_guard not in K and hi_guard not in K
        seg = seg and comp.cells[0] in X and comp.cells[-1] in X
    return NiceReport(face_closed, xface, fin, seg, meets)


def euler_characteristic(cells):
    return sum((-1) ** len(c) for c in cells)


# ---------------------------------------------------------------- depth, matching, xi

def min_reflection_below(sys, u, ordering, reach=None):
    """The smallest reflection of R_0 below u in [1,w]."""
    S = structure(sys)
    if u.elliptic:
        from .coxeter import reflections_containing
        fix = u.mov_min_fix()[2]
        cand = [r for r in reflections_containing(sys, fix) if leq_len(sys.iso(r), u)]
        return min(cand, key=ordering.key)
    # positive verticals precede everything else and any vertical family repeats within the parallel gap
    reach = reach or 4 * (max_parallel_gap(sys) + sys.n + 2)
    for i in range(1, reach + 1):
        below = [r for r in verticals_at(sys, i) if S.leq(sys.iso(r), u)]
        if below:
            return min(below, key=ordering.key)
    raise RuntimeError("no positive vertical reflection below a hyperbolic element")


def increasing_word(sys, u, ordering):
    cache = ordering.__dict__.setdefault("_incw", {})
    if u in cache:
        return cache[u]
    out = []
    cur = u
    while not cur.is_identity():
        r = min_reflection_below(sys, cur, ordering)
        if out and not ordering.less(out[-1], r):
            raise AssertionError("greedy factorization is not increasing")
        out.append(r)
        cur = compose(sys.iso(r), cur)
    cache[u] = tuple(out)
    return cache[u]


INF = float("inf")


def depth(sys, parts, ordering):
    if product(sys, parts) != sys.w:
        raise ValueError("depth needs a product-w simplex")
    d = len(parts)
    for i, x in enumerate(parts):
        if x.length >= 2:
            return i + 1
        if i < d - 1:
            r = reflection_of(x)
            if ordering.less(r, min_reflection_below(sys, parts[i + 1], ordering)):
                return i + 1
    return INF


def matching_case(sys, parts, ordering):
    """(case number, mu(sigma)) for sigma in K' minus X'."""
    parts = tuple(parts)
    if in_xprime(sys, parts):
        raise ValueError("critical simplex")
    if product(sys, parts) != sys.w:
        return 1, lam(sys, parts)
    r = rho(sys, parts)
    if not in_xprime(sys, r):
        return 2, r
    dl = depth(sys, parts, ordering)
    if dl == INF:
        raise AssertionError("infinite depth for a K' simplex")
    i = dl - 1
    x = parts[i]
    if x.length >= 2:
        y = min_reflection_below(sys, x, ordering)
        yi = sys.iso(y)
        return 3, parts[:i] + (yi, compose(yi, x)) + parts[i + 1:]
    return 4, parts[:i] + (compose(x, parts[i + 1]),) + parts[i + 2:]


def matching_mu(sys, parts, ordering):
    return matching_case(sys, parts, ordering)[1]


def kappa(sys, parts):
    return parts if product(sys, parts) == sys.w else lam(sys, parts)


def xi(sys, parts, ordering):
    word = ()
    for x in kappa(sys, tuple(parts)):
        word += increasing_word(sys, x, ordering)
    return word


def xi_key(word, ordering):
    """Sort key realizing the order on factorizations of w (smaller key = smaller)."""
    keys = [ordering.key(r) for r in word]
    top = max(keys)
    k = keys.index(top) + 1
    return (tuple(-v for v in top), -k, tuple(keys))


def compare_xi(a, b, ordering):
    ka, kb = xi_key(a, ordering), xi_key(b, ordering)
    return (ka > kb) - (ka < kb)


@dataclass
class MorseReport:
    pairs: list
    critical: set
    critical_fvector: tuple
    xprime_fvector: tuple
    involution_ok: bool
    depth_ok: bool
    critical_ok: bool
    lemma_matching1_ok: bool
    acyclic_ok: bool
    xi_certificate_ok: bool
    counterexample: object = None
    cases: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.involution_ok and self.depth_ok and self.critical_ok and self.lemma_matching1_ok \
            and self.acyclic_ok and self.xi_certificate_ok


def _has_cycle(nodes, edges):
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
    color = dict.fromkeys(nodes, 0)
    for s in nodes:
        if color[s]:
            continue
        stack = [(s, iter(adj[s]))]
        color[s] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
            elif color[nxt] == 1:
                return True
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(adj[nxt])))
    return False


def build_and_verify_matching(sys, ordering=None):
    ordering = ordering or AxialOrdering(sys)
    K = canonical_nice_subcomplex(sys)
    X = xprime_cells(sys)
    mu, case = {}, {}
    for s in K - X:
        c, m = matching_case(sys, s, ordering)
        mu[s], case[s] = m, c
    bad = None
    inv = True
    for s, m in mu.items():
        if m not in mu or mu[m] != s:
            inv, bad = False, ("involution", s, m)
            break
    dep = all(depth(sys, s, ordering) == depth(sys, mu[s], ordering) for s in mu if case[s] in (3, 4))
    pairs = sorted({(m, s) for s, m in mu.items() if len(m) == len(s) - 1 and m in faces(s)},
                   key=lambda p: (len(p[1]), [x.key for x in p[1]]))
    matched = {c for p in pairs for c in p}
    critical = K - matched
    crit_ok = critical == X and len(matched) == 2 * len(pairs) and len(matched) == len(mu)
    m1 = True
    for s in mu:
        if product(sys, s) == sys.w and rho(sys, s) in X:
            m1 = m1 and rho(sys, mu[s]) in X
    # (a) graph search on the modified Hasse diagram
    M = set(pairs)
    edges = set()
    for s in K:
        for f in set(faces(s)):
            edges.add((f, s) if (f, s) in M else (s, f))
    acyc = not _has_cycle(list(K), edges)
    # (b) xi certificate
    cert = True
    for s, m in mu.items():
        if xi(sys, s, ordering) != xi(sys, m, ordering):
            cert, bad = False, ("xi", s, m)
    for s in mu:
        if product(sys, s) != sys.w:
            continue
        xs = xi(sys, s, ordering)
        l = lam(sys, s)
        for f in set(faces(s)):
            if f not in mu:
                continue
            c = compare_xi(xi(sys, f, ordering), xs, ordering)
            if c > 0 or (f == l and c >= 0):
                cert, bad = False, ("xi-order", s, f)
    cf = f_vector(critical) if critical else ()
    return MorseReport(pairs, critical, cf, f_vector(X), inv, dep, crit_ok, m1, acyc, cert, bad,
                       {c: sum(1 for v in case.values() if v == c) for c in (1, 2, 3, 4)})


# ---------------------------------------------------------------- naming

_VLETTERS = "acdefgijklmnopqrstuvxyz"


class Namer:
    """Short names: verticals by root direction letter and axis index, horizontals b, b' (or h1, h1', ...)."""

    def __init__(self, sys, ordering):
        self.sys = sys
        self.ordering = ordering
        self.vdir = {}
        for i in range(1, 4 * (sys.n + 2)):
            for r in ordering.sort(verticals_at(sys, i)):
                self.vdir.setdefault(r.root, _VLETTERS[len(self.vdir) % len(_VLETTERS)])
        hor = horizontal_order(sys)
        dirs = []
        for r in hor:
            if r.root not in dirs:
                dirs.append(r.root)
        self.hname = {}
        for r in hor:
            k = dirs.index(r.root)
            base = "b" if len(dirs) == 1 else f"h{k + 1}"
            first = next(s for s in hor if s.root == r.root)
            self.hname[r] = base if r == first else base + "'"

    def reflection(self, r):
        if self.sys.is_vertical(r):
            if r.root not in self.vdir:
                self.vdir[r.root] = _VLETTERS[len(self.vdir) % len(_VLETTERS)]
            return f"{self.vdir[r.root]}{self.sys.axis_index(r)}"
        return self.hname.get(r, f"h[{r.root},{r.offset}]")

    def element(self, u):
        if u == self.sys.w:
            return "w"
        return "".join(self.reflection(r) for r in increasing_word(self.sys, u, self.ordering))

    def simplex(self, parts):
        return "[" + "|".join(self.element(x) for x in parts) + "]"
