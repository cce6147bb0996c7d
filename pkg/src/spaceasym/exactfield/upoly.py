"""Dense univariate polynomials over an exact field.

A polynomial is a list of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is the empty list.  Coefficients may be
``Fraction`` or ``AlgebraicNumber`` (anything closed under + - * / that
compares equal to 0 when zero).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

Poly = list

ONE = Fraction(1)
ZERO = Fraction(0)


def lift(c: Any) -> Any:
    """Promote Python ints to Fraction so that '/' stays exact."""
    return Fraction(c) if isinstance(c, int) else c


def trim(p: Sequence) -> Poly:
    out = [lift(c) for c in p]
    while out and not out[-1]:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    return len(p) - 1


def lc(p: Sequence):
    return p[-1]


def add(a: Sequence, b: Sequence) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out)


def neg(a: Sequence) -> Poly:
    return [-c for c in a]


def sub(a: Sequence, b: Sequence) -> Poly:
    return add(a, neg(b))


def scale(a: Sequence, c) -> Poly:
    if not c:
        return []
    return trim([x * c for x in a])


def mul(a: Sequence, b: Sequence) -> Poly:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return trim(out)


def shift(a: Sequence, n: int) -> Poly:
    """Multiply by x^n."""
    return [ZERO] * n + list(a) if a else []


def divmod_poly(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = degree(b)
    inv = ONE / lift(b[-1])
    q = [ZERO] * max(len(a) - db, 0)
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        f = r[-1] * inv
        q[k] = f
        for i, c in enumerate(b):
            r[k + i] = r[k + i] - f * c
        r = trim(r[:-1]) if len(r) > 0 else r
    return trim(q), trim(r)


def rem(a: Sequence, b: Sequence) -> Poly:
    return divmod_poly(a, b)[1]


def quo(a: Sequence, b: Sequence) -> Poly:
    return divmod_poly(a, b)[0]


def monic(a: Sequence) -> Poly:
    if not a:
        return []
    inv = ONE / lift(a[-1])
    return [c * inv for c in a]


def gcd(a: Sequence, b: Sequence) -> Poly:
    """Monic greatest common divisor."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(a: Sequence, b: Sequence) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [ONE], []
    t0, t1 = [], [ONE]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], [], []
    inv = ONE / lift(r0[-1])
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def derivative(a: Sequence) -> Poly:
    return trim([a[i] * i for i in range(1, len(a))])


def evaluate(a: Sequence, x):
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def compose(a: Sequence, b: Sequence) -> Poly:
    """a(b(x))."""
    out: Poly = []
    for c in reversed(a):
        out = add(mul(out, b), [c])
    return out


def taylor_shift(a: Sequence, c) -> Poly:
    """a(x + c)."""
    return compose(a, trim([c, ONE]))


def is_squarefree(a: Sequence) -> bool:
    return degree(gcd(a, derivative(a))) == 0


def squarefree_decomposition(a: Sequence) -> list[tuple[Poly, int]]:
    """Yun's algorithm over a field of characteristic zero."""
    a = monic(trim(a))
    out = []
    if degree(a) < 1:
        return out
    da = derivative(a)
    g = gcd(a, da)
    b = quo(a, g)
    c = quo(da, g)
    d = sub(c, derivative(b))
    i = 1
    while degree(b) > 0:
        g = gcd(b, d)
        b = quo(b, g)
        c = quo(d, g)
        if degree(g) > 0:
            out.append((g, i))
        d = sub(c, derivative(b))
        i += 1
    return out


def resultant(a: Sequence, b: Sequence):
    """Resultant over a field by the Euclidean recursion."""
    a, b = trim(a), trim(b)
    if not a or not b:
        return ZERO
    da, db = degree(a), degree(b)
    if db == 0:
        return lift(b[0]) ** da
    if da == 0:
        return lift(a[0]) ** db
    r = rem(a, b)
    if not r:
        return ZERO
    dr = degree(r)
    sign = -1 if (da * db) % 2 else 1
    return sign * lift(b[-1]) ** (da - dr) * resultant(b, r)


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Newton interpolation through the points (xs[i], ys[i])."""
    n = len(xs)
    coef = [lift(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out: Poly = []
    for i in range(n - 1, -1, -1):
        out = add(mul(out, [-lift(xs[i]), ONE]), [coef[i]])
    return out
