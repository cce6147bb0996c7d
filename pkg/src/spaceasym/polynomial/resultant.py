"""Resultants: subresultant remainder sequences and Sylvester determinants."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidElimination
from .multipoly import MultiPoly


def pseudo_remainder(a: MultiPoly, b: MultiPoly, name: str) -> MultiPoly:
    """lc(b)^(deg a - deg b + 1) * a  mod  b, with respect to ``name``."""
    a, b = a._align(b)
    db = b.degree_in(name)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    x = MultiPoly.var(name, a.variables)
    lcb = b.leading_coeff_in(name)
    r = a
    steps = a.degree_in(name) - db + 1
    if steps <= 0:
        return a
    used = 0
    while r and r.degree_in(name) >= db:
        dr = r.degree_in(name)
        r = r * lcb - r.leading_coeff_in(name) * x ** (dr - db) * b
        used += 1
    if used < steps:
        r = r * lcb ** (steps - used)
    return r


@dataclass(frozen=True)
class PrsSequence:
    """Subresultant remainder sequence with respect to ``variable``."""

    variable: str
    elements: tuple
    # resultant up to sign; differs from the last element when its predecessor has degree > 1
    final: MultiPoly | None = None

    def degrees(self) -> list[int]:
        return [p.degree_in(self.variable) for p in self.elements]

    def of_degree(self, d: int) -> MultiPoly | None:
        for p in self.elements:
            if p.degree_in(self.variable) == d:
                return p
        return None

    @property
    def last(self) -> MultiPoly:
        return self.elements[-1]

    @property
    def degenerate(self) -> bool:
        """True when the inputs share a factor involving the variable."""
        return self.last.degree_in(self.variable) > 0

    def resultant(self) -> MultiPoly:
        if self.degenerate:
            return MultiPoly({}, self.last.variables)
        return self.last if self.final is None else self.final


def subresultant_prs(f: MultiPoly, g: MultiPoly, name: str) -> PrsSequence:
    """Brown-Collins subresultant PRS of f and g in ``name``."""
    if not g:
        raise ValueError("second polynomial must be nonzero")
    f, g = f._align(g)
    n, m = f.degree_in(name), g.degree_in(name)
    if n < m:
        f, g, n, m = g, f, m, n
    seq = [f, g]
    d = n - m
    b = MultiPoly.constant((-1) ** (d + 1), f.variables)
    h = pseudo_remainder(f, g, name) * b
    lc = g.leading_coeff_in(name)
    c = -(lc ** d)
    if m == 0:
        return PrsSequence(name, tuple(seq), lc ** n)
    while h:
        k = h.degree_in(name)
        seq.append(h)
        f, g, m, d = g, h, k, m - k
        b = -lc * c ** d
        h = pseudo_remainder(f, g, name).exact_divide(b)
        lc = g.leading_coeff_in(name)
        if d > 1:
            c = ((-lc) ** d).exact_divide(c ** (d - 1))
        else:
            c = -lc
        if k == 0:
            return PrsSequence(name, tuple(seq), c)
    return PrsSequence(name, tuple(seq))


def bareiss_determinant(matrix: list[list[MultiPoly]]) -> MultiPoly:
    """Fraction-free Gaussian elimination with exact divisions."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return MultiPoly.constant(1)
    variables = m[0][0].variables
    sign = 1
    prev = MultiPoly.constant(1, variables)
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return MultiPoly({}, variables)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_divide(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(f: MultiPoly, g: MultiPoly, name: str) -> list[list[MultiPoly]]:
    f, g = f._align(g)
    n, m = f.degree_in(name), g.degree_in(name)
    fc = list(reversed(f.as_univariate(name)))
    gc = list(reversed(g.as_univariate(name)))
    zero = MultiPoly({}, f.variables)
    size = n + m
    rows = []
    for i in range(m):
        rows.append([zero] * i + fc + [zero] * (size - i - len(fc)))
    for i in range(n):
        rows.append([zero] * i + gc + [zero] * (size - i - len(gc)))
    return rows


def sylvester_resultant(f: MultiPoly, g: MultiPoly, name: str) -> MultiPoly:
    """Determinant of the Sylvester matrix, rows of f first."""
    if f.degree_in(name) < 1 or g.degree_in(name) < 1:
        raise InvalidElimination(f"both polynomials must involve {name}")
    return bareiss_determinant(sylvester_matrix(f, g, name))


def resultant(f: MultiPoly, g: MultiPoly, name: str) -> MultiPoly:
    """Resultant via the subresultant PRS (same value as the Sylvester determinant up to sign)."""
    if f.degree_in(name) < 1 or g.degree_in(name) < 1:
        raise InvalidElimination(f"both polynomials must involve {name}")
    prs = subresultant_prs(f, g, name)
    return prs.resultant()
