"""Command line: build a group, run checks, write JSON/table reports and rank-2 SVG pictures."""

import argparse
import json
import math
import random
import sys as _sys
from fractions import Fraction as F

from . import linalg as la
from .coxeter import (
    adjacent_horizontals, as_window, axial_chamber, build, c0_vertices, horizontal_components,
    parabolic_coxeter_element, parse_spec, vertex_orbit, verticals_at,
)

SCHEMA = 1
TASKS = ("info", "interval", "shell", "complex", "morse", "render")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- serialization

def q(x):
    x = F(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec_json(v):
    return [q(x) for x in v]


def iso_json(u):
    return {"matrix": [vec_json(row) for row in u.linear], "translation": vec_json(u.trans)}


def refl_json(r, namer=None):
    d = {"root": vec_json(r.root), "offset": q(r.offset)}
    if namer is not None:
        d["name"] = namer.reflection(r)
    return d


def parse_window(text):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"window must look like lo..hi, got {text!r}")
    if lo >= hi:
        raise UsageError("window needs lo < hi")
    return lo, hi


def default_window(sys):
    r = 2 * (sys.n + 1)
    return (-r, r)


# ---------------------------------------------------------------- tasks

def task_info(sys, cfg):
    from .interval import structure
    hc = horizontal_components(sys)
    S = structure(sys)
    lo, hi = cfg.window
    return {
        "rank": sys.n,
        "w": iso_json(sys.w),
        "mu": vec_json(sys.mu),
        "spacing": q(sys.frame.spacing),
        "simples": [refl_json(r) for r in sys.simples],
        "c0_vertices": [vec_json(sys.amb.canon(b)) for b in c0_vertices(sys)],
        "horizontal_components": [{"type": c.name, "rank": c.rank} for c in hc.components],
        "verticals_per_axis_point": {str(i): len(verticals_at(sys, i)) for i in range(lo, hi + 1)},
        "horizontal_elements": len(S.horizontal),
        "hyperbolic_elements": len(S.hyperbolic),
        "checks": {"w_is_simple_product": sys.product(sys.simples) == sys.w},
    }


def task_interval(sys, cfg):
    from .interval import build_poset, element_class, hyperbolic_census, lattice_defect_search, verify_bowtie
    P = build_poset(sys, cfg.window)
    classes = {}
    for u in P.elements:
        c = element_class(sys, u)
        classes[c] = classes.get(c, 0) + 1
    out = {
        "elements": len(P),
        "rank_sizes": {str(k): v for k, v in sorted(P.rank_sizes().items())},
        "covers": len(P.covers),
        "factorizations": P.factorizations,
        "complete_elements": sum(P.complete),
        "classes": dict(sorted(classes.items())),
        "checks": {},
    }
    if cfg.census:
        c = hyperbolic_census(sys)
        out["census"] = {
            "translations": c["translations"],
            "by_length": {str(k): v for k, v in sorted(c["by_length"].items())},
            "types": {str(k): dict(sorted(v.items())) for k, v in sorted(c["types"].items())},
        }
    if cfg.lattice:
        hit = lattice_defect_search(P)
        if hit is None:
            out["lattice_defect"] = None
        else:
            x, y, zs = hit
            ok = verify_bowtie(sys, x, y, zs)
            out["lattice_defect"] = {"x": iso_json(x), "y": iso_json(y), "z": [iso_json(z) for z in zs],
                                     "verified": ok}
            out["checks"]["bowtie_verified"] = ok
    return out


def task_shell(sys, cfg):
    from .shelling import (
        AxialOrdering, all_factorizations, compatible_with, el_suite_parabolic, horizontal_el_suite,
        increasing_factorization, parabolic_line_ordering, phi_compatible, smallest_reflections,
    )
    from .complexes import Namer
    o = AxialOrdering(sys, cfg.window, cfg.tie_policy)
    namer = Namer(sys, o)
    rng = random.Random(0)
    checks, witnesses, parabolics = {}, [], []
    checks["phi_compatible"] = phi_compatible(o)
    small = smallest_reflections(sys, o)
    checks["smallest_complements_fix_c0_vertex"] = all(f for _, f in small)
    el_total = el_fail = 0
    inc_ok = compat_ok = True
    for k, b in enumerate(c0_vertices(sys)):
        wb = parabolic_coxeter_element(sys, b)
        n, fails = el_suite_parabolic(sys, wb, o, sample=cfg.sample, rng=rng, max_rank=cfg.max_el_rank)
        el_total += n
        el_fail += len(fails)
        for i, j, rep in fails[:3]:
            witnesses.append({"vertex": k, "interval": [i, j], "chains": rep.chain_count,
                              "increasing": rep.increasing_count})
        inc = increasing_factorization(sys, wb, o)
        lexmin = min(all_factorizations(sys, wb), key=o.word_key)
        inc_ok = inc_ok and tuple(inc) == tuple(lexmin)
        comp = compatible_with(parabolic_line_ordering(sys, wb), wb, sys.c0.sample_point)
        compat_ok = compat_ok and comp
        parabolics.append({"vertex": k, "intervals": n, "failures": len(fails),
                           "increasing_factorization": [namer.reflection(r) for r in inc],
                           "line_ordering_compatible": comp})
    hn, hf = horizontal_el_suite(sys, o)
    checks["el_parabolic"] = el_fail == 0
    checks["el_horizontal"] = not hf
    checks["increasing_is_lex_first"] = inc_ok
    checks["line_orderings_compatible"] = compat_ok
    out = {
        "tie_policy": cfg.tie_policy,
        "order_head": [namer.reflection(r) for r in o.windowed()[: 3 * (sys.n + 1)]],
        "horizontal_order": [namer.reflection(r) for r in o.horizontals],
        "smallest": [{"reflection": namer.reflection(r), "complement_fixes_c0_vertex": f} for r, f in small],
        "parabolic": parabolics,
        "el_intervals": el_total,
        "horizontal_intervals": hn,
        "checks": checks,
    }
    if witnesses:
        out["counterexample"] = witnesses
    return out


def task_complex(sys, cfg):
    from .complexes import (
        Namer, build_xprime, canonical_nice_subcomplex, euler_characteristic, fiber_components, kd_cells,
        salvetti_fvector, verify_nice, xprime_fvector_inclusion_exclusion, xprime_cells,
    )
    from .shelling import AxialOrdering
    namer = Namer(sys, AxialOrdering(sys, cfg.window, cfg.tie_policy))
    _, fx = build_xprime(sys)
    fie = xprime_fvector_inclusion_exclusion(sys)
    comps = fiber_components(sys)
    K = canonical_nice_subcomplex(sys)
    rep = verify_nice(sys)
    X = xprime_cells(sys)
    chi_k, chi_x = euler_characteristic(K), euler_characteristic(X)
    return {
        "xprime_fvector": list(fx),
        "salvetti_fvector": list(salvetti_fvector(sys)),
        "components": {
            "total": len(comps),
            "finite": sum(c.kind == "finite" for c in comps),
            "infinite": sum(c.kind == "infinite" for c in comps),
            "finite_cells": sorted(sorted(namer.simplex(s) for s in c.cells) for c in comps if c.kind == "finite"),
        },
        "kd_cells": len(kd_cells(sys)),
        "kprime_cells": len(K),
        "euler": {"kprime": chi_k, "xprime": chi_x},
        "checks": {
            "xprime_inclusion_exclusion": tuple(fie) == tuple(fx),
            "nice_face_closed": rep.face_closed,
            "nice_xprime_face_closed": rep.xprime_face_closed,
            "nice_finite_contained": rep.finite_contained,
            "nice_segments": rep.segments_ok,
            "nice_meets_xprime": rep.meets_xprime,
            "euler_equal": chi_k == chi_x,
        },
    }


def task_morse(sys, cfg):
    from .complexes import Namer, build_and_verify_matching
    from .shelling import AxialOrdering
    o = AxialOrdering(sys, cfg.window, cfg.tie_policy)
    namer = Namer(sys, o)
    rep = build_and_verify_matching(sys, o)
    out = {
        "pairs": [[namer.simplex(a), namer.simplex(b)] for a, b in rep.pairs],
        "pair_count": len(rep.pairs),
        "cases": {str(k): v for k, v in sorted(rep.cases.items())},
        "critical_fvector": list(rep.critical_fvector),
        "xprime_fvector": list(rep.xprime_fvector),
        "acyclic": rep.acyclic_ok and rep.xi_certificate_ok,
        "checks": {
            "involution": rep.involution_ok,
            "depth_preserved": rep.depth_ok,
            "critical_is_xprime": rep.critical_ok,
            "matching_lemma": rep.lemma_matching1_ok,
            "acyclic_graph_search": rep.acyclic_ok,
            "acyclic_xi_certificate": rep.xi_certificate_ok,
        },
    }
    if rep.counterexample is not None:
        kind, s, m = rep.counterexample
        out["counterexample"] = {"kind": kind, "cell": namer.simplex(s), "partner": namer.simplex(m)}
    return out


def task_render(sys, cfg):
    svg = render_rank2(sys, cfg.window, cfg.section)
    if cfg.svg:
        with open(cfg.svg, "w") as fh:
            fh.write(svg)
    return {"svg": cfg.svg, "bytes": len(svg.encode()), "checks": {}}


# ---------------------------------------------------------------- rendering

_ORBIT_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


class _Plane:
    """An affine plane base + s*e1 + t*e2 with e1, e2 orthogonal rational vectors."""

    def __init__(self, base, dirs):
        es = []
        for d in dirs:
            v = tuple(F(x) for x in d)
            for e in es:
                v = la.vsub(v, la.vscale(la.dot(v, e) / la.dot(e, e), e))
            if any(v):
                es.append(v)
        if len(es) != 2:
            raise UsageError("section is not a plane")
        self.base = tuple(F(x) for x in base)
        self.e = es
        self.norm = [math.sqrt(la.dot(e, e)) for e in es]

    def coords(self, x):
        d = la.vsub(tuple(F(v) for v in x), self.base)
        return tuple(la.dot(d, e) / la.dot(e, e) for e in self.e)

    def line(self, root, c):
        """(a1, a2, rhs) with a1 s + a2 t = rhs describing <root, x> = c on the plane."""
        return (la.dot(root, self.e[0]), la.dot(root, self.e[1]), F(c) - la.dot(root, self.base))


def _clip(a1, a2, rhs, box):
    """Segment of a1 s + a2 t = rhs inside the box (s0, s1, t0, t1), exact."""
    s0, s1, t0, t1 = box
    pts = []
    if a2 != 0:
        for s in (s0, s1):
            t = (rhs - a1 * s) / a2
            if t0 <= t <= t1:
                pts.append((s, t))
    if a1 != 0:
        for t in (t0, t1):
            s = (rhs - a2 * t) / a1
            if s0 <= s <= s1:
                pts.append((s, t))
    pts = sorted(set(pts))
    return (pts[0], pts[-1]) if len(pts) >= 2 and pts[0] != pts[-1] else None


def _hyperplane_segments(sys, plane, box, roots):
    out = []
    corners = [(s, t) for s in box[:2] for t in box[2:]]
    for b in sorted(roots):
        a1, a2 = la.dot(b, plane.e[0]), la.dot(b, plane.e[1])
        if a1 == 0 and a2 == 0:
            continue
        base = la.dot(b, plane.base)
        vals = [base + a1 * s + a2 * t for s, t in corners]
        st = sys.steps[b]
        k0 = math.floor(min(vals) / st)
        k1 = math.ceil(max(vals) / st)
        for k in range(k0, k1 + 1):
            seg = _clip(*plane.line(b, k * st), box)
            if seg:
                out.append((b, k * st, seg))
    return out


def render_rank2(sys, window=None, section=None):
    """SVG of the Coxeter complex of a rank-2 group, or of a rank-2 horizontal section."""
    lo, hi = as_window(window or default_window(sys))
    amb = sys.amb
    ambient_rank = amb.dim - len(amb.inert)
    if section is None and ambient_rank != 2:
        raise UsageError("rank > 2 needs --section K (a rank-2 horizontal component)")
    if section is None:
        free = la.nullspace([list(v) for v in amb.inert]) if amb.inert else [
            tuple(int(i == j) for j in range(amb.dim)) for i in range(amb.dim)]
        plane = _Plane(tuple(F(0) for _ in range(amb.dim)), free)
        roots = list(sys.steps)
    else:
        comps = horizontal_components(sys).components
        if not 0 <= section < len(comps) or comps[section].rank != 2:
            raise UsageError(f"section {section} is not a rank-2 horizontal component")
        comp = comps[section]
        plane = _Plane(sys.frame.point(F(1, 2)), comp.roots)
        roots = list(comp.roots)

    def P(x):
        return plane.coords(x)

    if section is None:
        chambers = [axial_chamber(sys, i) for i in range(lo, hi)]
        polys = [[P(v) for v in ch.vertices(amb)] for ch in chambers]
        pts = [p for poly in polys for p in poly]
    else:
        chambers, polys = [], []
        thick = [r for r in adjacent_horizontals(sys) if r.root in comp.roots]
        pts = []
        for r1 in thick:
            for r2 in thick:
                if la.rank([list(r1.root), list(r2.root)]) == 2:
                    sol = la.solve([[plane.line(r.root, r.offset)[0], plane.line(r.root, r.offset)[1]] for r in (r1, r2)],
                                   [plane.line(r.root, r.offset)[2] for r in (r1, r2)])
                    pts.append(tuple(sol))
    s_lo, s_hi = min(p[0] for p in pts), max(p[0] for p in pts)
    t_lo, t_hi = min(p[1] for p in pts), max(p[1] for p in pts)
    ms, mt = (s_hi - s_lo) / 8 + F(1, 4), (t_hi - t_lo) / 8 + F(1, 4)
    box = (s_lo - ms, s_hi + ms, t_lo - mt, t_hi + mt)
    width = 800
    sx = plane.norm[0] * float(box[1] - box[0])
    sy = plane.norm[1] * float(box[3] - box[2])
    scale = width / max(sx, sy)
    W, H = round(sx * scale), round(sy * scale)

    def xy(p):
        return (round(plane.norm[0] * float(p[0] - box[0]) * scale, 2),
                round(plane.norm[1] * float(box[3] - p[1]) * scale, 2))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f'<rect width="{W}" height="{H}" fill="white"/>']
    for poly in polys:
        c = [xy(p) for p in poly]
        cx, cy = sum(p[0] for p in c) / len(c), sum(p[1] for p in c) / len(c)
        c.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        out.append('<polygon points="%s" fill="#f2d98c" stroke="none"/>' % " ".join(f"{x},{y}" for x, y in c))
    thick_set = set()
    if section is not None:
        thick_set = {(r.root, r.offset) for r in thick}
    for b, c, (p0, p1) in _hyperplane_segments(sys, plane, box, roots):
        (x0, y0), (x1, y1) = xy(p0), xy(p1)
        sw = 3 if (b, c) in thick_set else 1
        out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="#444" stroke-width="{sw}"/>')
    if section is None:
        a, m = P(sys.frame.base_point), P(la.vadd(sys.frame.base_point, sys.mu))
        seg = _clip(m[1] - a[1], a[0] - m[0], (m[1] - a[1]) * a[0] + (a[0] - m[0]) * a[1], box)
        if seg:
            (x0, y0), (x1, y1) = xy(seg[0]), xy(seg[1])
            out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="black" stroke-width="2" '
                       'stroke-dasharray="8,5"/>')
        seen = {}
        for ch in chambers:
            for v in ch.vertices(amb):
                v = amb.canon(v)
                if v not in seen:
                    seen[v] = vertex_orbit(sys, v)[0]
        for v, k in sorted(seen.items(), key=lambda kv: (kv[1], P(kv[0]))):
            x, y = xy(P(v))
            out.append(f'<circle cx="{x}" cy="{y}" r="5" fill="{_ORBIT_COLORS[k % len(_ORBIT_COLORS)]}"/>')
    else:
        x, y = xy(P(sys.frame.point(F(1, 2))))
        out.append(f'<circle cx="{x}" cy="{y}" r="5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- driver

RUNNERS = {"info": task_info, "interval": task_interval, "shell": task_shell, "complex": task_complex,
           "morse": task_morse, "render": task_render}


def run(cfg):
    """Run the configured tasks; returns (exit status, report dict)."""
    sys = build(cfg.spec)
    if cfg.window is None:
        cfg.window = default_window(sys)
    report = {"schema": SCHEMA, "group": str(cfg.spec), "window": list(cfg.window), "tasks": {}}
    status = 0
    for t in cfg.tasks:
        res = RUNNERS[t](sys, cfg)
        res["ok"] = all(res["checks"].values())
        if not res["ok"]:
            status = 1
        report["tasks"][t] = res
    report["ok"] = status == 0
    return status, report


def to_table(report):
    lines = [f"group {report['group']}  window {report['window'][0]}..{report['window'][1]}"]

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else str(k), x)
        elif isinstance(v, list) and v and all(isinstance(x, (list, dict)) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append(f"{prefix:<48} {json.dumps(v) if not isinstance(v, str) else v}")

    for t, res in report["tasks"].items():
        lines.append(f"== {t}")
        walk("", res)
    lines.append(f"ok {json.dumps(report['ok'])}")
    return "\n".join(lines) + "\n"


def _fix_negative_window(argv):
    """Let "--window -4..6" through argparse, which would read -4..6 as an option."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--window={nxt}")
        else:
            out.append(a)
    return out


def make_parser():
    p = argparse.ArgumentParser(prog="affine-ncp", description="Noncrossing partitions of affine Coxeter groups.")
    p.add_argument("group", help="group spec, e.g. A~2[2,1], C~3, G~2")
    p.add_argument("tasks", nargs="+", choices=TASKS, help="tasks to run in order")
    p.add_argument("--window", help="axis points lo..hi (default -2(n+1)..2(n+1))")
    p.add_argument("--tie-policy", choices=("lex", "reverse"), default="lex")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--svg", help="SVG output path for render")
    p.add_argument("--census", action="store_true", help="hyperbolic census in interval")
    p.add_argument("--lattice", action="store_true", help="bowtie search in interval")
    p.add_argument("--max-el-rank", type=int, help="only EL-check intervals of rank <= K")
    p.add_argument("--sample", type=int, help="EL-check a random sample of intervals per parabolic")
    p.add_argument("--section", type=int, help="render the rank-2 horizontal component with this index")
    return p


def main(argv=None):
    argv = _fix_negative_window(list(_sys.argv[1:] if argv is None else argv))
    cfg = make_parser().parse_args(argv)
    try:
        cfg.spec = parse_spec(cfg.group)
        cfg.window = parse_window(cfg.window) if cfg.window else None
    except (UsageError, ValueError) as e:
        print(f"affine-ncp: {e}", file=_sys.stderr)
        return 2
    try:
        status, report = run(cfg)
    except UsageError as e:
        print(f"affine-ncp: {e}", file=_sys.stderr)
        return 2
    text = json.dumps(report, indent=2) + "\n" if cfg.format == "json" else to_table(report)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)
    return status


if __name__ == "__main__":
    _sys.exit(main())
