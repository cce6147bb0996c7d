"""Multivariate gcd over Q by recursive primitive remainder sequences."""

from __future__ import annotations

from .multipoly import MultiPoly
from .resultant import pseudo_remainder


def _main_variable(*polys: MultiPoly) -> str | None:
    """The variable of smallest positive degree, which keeps remainders short."""
    best = None
    for v in polys[0].variables:
        degs = [p.degree_in(v) for p in polys]
        if max(degs) <= 0:
            continue
        key = (min(d for d in degs if d >= 0), max(degs))
        if best is None or key < best[0]:
            best = (key, v)
    return None if best is None else best[1]


def content_in(f: MultiPoly, name: str) -> MultiPoly:
    """gcd of the coefficients of f viewed as a polynomial in ``name``."""
    g = MultiPoly({}, f.variables)
    for c in f.coeffs_in(name).values():
        g = poly_gcd(g, c)
        if g.is_constant() and g:
            break
    return g


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Normalized gcd (integer-primitive, positive leading coefficient)."""
    f, g = f._align(g)
    if not f:
        return g.normalized()
    if not g:
        return f.normalized()
    name = _main_variable(f, g)
    if name is None:
        return MultiPoly.constant(1, f.variables)
    if f.degree_in(name) == 0 and g.degree_in(name) == 0:
        # both free of this variable: recurse on the rest
        rest = tuple(v for v in f.variables if v != name)
        return poly_gcd(f.with_variables(rest), g.with_variables(rest)).with_variables(f.variables)
    cf, cg = content_in(f, name), content_in(g, name)
    c = poly_gcd(cf, cg)
    a = f.exact_divide(cf)
    b = g.exact_divide(cg)
    if a.degree_in(name) < b.degree_in(name):
        a, b = b, a
    while b and b.degree_in(name) > 0:
        r = pseudo_remainder(a, b, name)
        a, b = b, (r.exact_divide(content_in(r, name)).normalized() if r else r)
    if b:  # remainder of degree 0 in name: coprime primitive parts
        return c.normalized()
    a = a.exact_divide(content_in(a, name))
    return (c * a).normalized()


def squarefree_part(f: MultiPoly) -> MultiPoly:
    """f divided by gcd(f, all its partial derivatives), normalized."""
    g = f
    for v in f.used_variables():
        g = poly_gcd(g, f.derivative(v))
        if g.is_constant():
            return f.normalized()
    return f.exact_divide(g).normalized()


def is_coprime(f: MultiPoly, g: MultiPoly) -> bool:
    return poly_gcd(f, g).is_constant()


def rational_normal(f: MultiPoly) -> MultiPoly:
    """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
    return f.normalized()

