"""Closed formulas used as independent oracles for finite parabolic data."""
import re
from fractions import Fraction
from math import factorial, prod

DEGREES = {
    "E6": (2, 5, 6, 8, 9, 12), "E7": (2, 6, 8, 10, 12, 14, 18), "E8": (2, 8, 12, 14, 18, 20, 24, 30),
    "F4": (2, 6, 8, 12), "G2": (2, 6),
}


def degrees(name):
    if name in DEGREES:
        return DEGREES[name]
    fam, n = re.fullmatch(r"([ABCD])(\d+)", name).groups()
    n = int(n)
    if fam == "A":
        return tuple(range(2, n + 2))
    if fam in "BC":
        return tuple(range(2, 2 * n + 1, 2))
    return tuple(range(2, 2 * n - 1, 2)) + (n,)


def parts(name):
    return name.split(" x ")


def catalan(name):
    """|NC(W)| = prod (h + d_i) / d_i, multiplied over irreducible factors."""
    out = 1
    for p in parts(name):
        d = degrees(p)
        h = max(d)
        out *= prod(Fraction(h + x, x) for x in d)
    return int(out)


def coxeter_factorizations(name):
    """Number of minimal reflection factorizations of a Coxeter element."""
    ds = [degrees(p) for p in parts(name)]
    n = sum(len(d) for d in ds)
    out = Fraction(factorial(n))
    for d in ds:
        out *= Fraction(max(d) ** len(d), prod(d))
    return int(out)
