"""Projection along x3, lift functions, and lifting plane branches to space."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..errors import (
    NeedsCoordinateChange,
    NeedsMoreTerms,
    NotACurve,
    NoValidDirection,
)
from ..exactfield.series import PuiseuxTruncation
from ..planecurve import PlaneBranch, check_no_vertical_branches
from ..polynomial import MultiPoly, determinant, poly_gcd, split_linear, squarefree_part, subresultant_prs

X1, X2, X3 = "x1", "x2", "x3"
SPACE = (X1, X2, X3)


@dataclass(frozen=True)
class LiftFunction:
    """x3 = h1/h2 on the projected curve; f3 = x3*h2 - h1."""

    h1: MultiPoly
    h2: MultiPoly

    @property
    def f3(self) -> MultiPoly:
        x3 = MultiPoly.var(X3, SPACE)
        return x3 * self.h2.with_variables(SPACE) - self.h1.with_variables(SPACE)

    @classmethod
    def from_linear(cls, f3: MultiPoly) -> "LiftFunction":
        h2, h1 = split_linear(f3.with_variables(SPACE), X3)
        return cls(h1, h2)


@dataclass(frozen=True)
class Projection:
    """Plane projection of the space curve in the (possibly changed) coordinates.

    ``transform`` is the matrix M with original = M · working coordinates, or
    None when the input coordinates were used directly.
    """

    f1: MultiPoly
    f2: MultiPoly
    fp: MultiPoly
    lift: LiftFunction
    transform: tuple | None = None
    attempts: int = 1
    notes: tuple = ()


@dataclass(frozen=True)
class SpaceBranch:
    """Infinity branch (z, r2(z), r3(z)) of the space curve."""

    plane: PlaneBranch
    r2: PuiseuxTruncation
    r3: PuiseuxTruncation

    @property
    def point(self) -> tuple:
        """(m2, m3) of the point (1:m2:m3:0); m2 is None when r2 grows faster than z."""
        return (_slope(self.r2), _slope(self.r3))

    @property
    def degree(self) -> int:
        return lcm(self.r2.nonnegative_part().ramification, self.r3.nonnegative_part().ramification)


def _slope(s: PuiseuxTruncation):
    if s.terms and s.leading_exponent > 1:
        return None
    return s.coefficient(1) if s.order_bound is None or s.order_bound < 1 else None


def _random_matrix(rng: random.Random) -> tuple:
    choices = [-2, -1, 0, 1, 2]
    while True:
        m = [[Fraction(rng.choice(choices)) for _ in range(3)] for _ in range(3)]
        for i in range(3):
            m[i][i] = Fraction(1)
        if determinant(m) != 0:
            return tuple(tuple(row) for row in m)


def _sign_like(p: MultiPoly, reference: MultiPoly) -> MultiPoly:
    """Scale the normalized p so its lex-leading sign matches the reference."""
    _, lead_p = p.leading_term()
    _, lead_r = reference.leading_term()
    if isinstance(lead_p, Fraction) and isinstance(lead_r, Fraction) and (lead_p < 0) != (lead_r < 0):
        return -p
    return p


def _try_direction(g1: MultiPoly, g2: MultiPoly) -> tuple[MultiPoly, LiftFunction]:
    d1, d2 = g1.degree_in(X3), g2.degree_in(X3)
    if d1 < 1 and d2 < 1:
        raise NeedsCoordinateChange("neither polynomial involves x3")
    if d1 < 1 or d2 < 1:
        plane, other = (g1, g2) if d1 < 1 else (g2, g1)
        if other.degree_in(X3) != 1:
            raise NeedsCoordinateChange("no x3-linear element available for the lift")
        fp = _sign_like(squarefree_part(plane), plane)
        f3 = other
    else:
        prs = subresultant_prs(g1, g2, X3)
        res = prs.resultant()
        if not res:
            raise NotACurve("the two polynomials share a common factor")
        fp = _sign_like(squarefree_part(res), res)
        f3 = prs.of_degree(1)
        if f3 is None:
            raise NeedsCoordinateChange("the remainder sequence has no x3-linear element")
        if f3 != g1 and f3 != g2:
            groups = f3.coeffs_in(X3)
            common = poly_gcd(groups.get(1, MultiPoly({}, f3.variables)), groups.get(0, MultiPoly({}, f3.variables)))
            f3 = f3.exact_divide(common).normalized()
    lift = LiftFunction.from_linear(f3)
    fp = fp.with_variables(SPACE).drop_unused().with_variables((X1, X2))
    if not poly_gcd(lift.h2.with_variables((X1, X2, X3)), fp.with_variables(SPACE)).is_constant():
        raise NeedsCoordinateChange("the lift denominator vanishes on a component of the projection")
    check_no_vertical_branches(fp)
    return fp, lift


def project(f1: MultiPoly, f2: MultiPoly, seed: int = 0, max_retries: int = 5) -> Projection:
    """Projection along x3 with a lift function, changing coordinates when needed."""
    f1, f2 = f1.with_variables(SPACE), f2.with_variables(SPACE)
    if f1.is_constant() or f2.is_constant():
        raise NotACurve("both polynomials must be nonconstant")
    if not poly_gcd(f1, f2).is_constant():
        raise NotACurve("the two polynomials share a common factor")
    notes = []
    try:
        fp, lift = _try_direction(f1, f2)
        return Projection(f1, f2, fp, lift, None, 1, ())
    except NeedsCoordinateChange as exc:
        notes.append(str(exc))
    rng = random.Random(seed)
    for attempt in range(max_retries):
        M = _random_matrix(rng)
        g1, g2 = f1.linear_change(M), f2.linear_change(M)
        try:
            fp, lift = _try_direction(g1, g2)
            return Projection(g1, g2, fp, lift, M, attempt + 2, tuple(notes))
        except NeedsCoordinateChange as exc:
            notes.append(str(exc))
    raise NoValidDirection("no valid projection direction found: " + "; ".join(notes))


def lift_function(f1: MultiPoly, f2: MultiPoly, fp: MultiPoly | None = None) -> LiftFunction:
    """Lift function from the x3-linear element of the remainder sequence."""
    _, lift = _try_direction(f1.with_variables(SPACE), f2.with_variables(SPACE))
    return lift


def _series_at(poly: MultiPoly, z: PuiseuxTruncation, r2: PuiseuxTruncation) -> PuiseuxTruncation:
    return poly.evaluate({X1: z, X2: r2}, PuiseuxTruncation.constant(Fraction(1)))


def lift_branch(b: PlaneBranch, L: LiftFunction, order=0, max_rounds: int = 12) -> SpaceBranch:
    """r3 = h1(z, r2)/h2(z, r2), with every exponent >= -order known."""
    order = Fraction(order)
    depth = max(order + 1, Fraction(1))
    z = PuiseuxTruncation.monomial(Fraction(1), 1)
    for _ in range(max_rounds):
        bb = b.deepen(depth)
        H1 = _series_at(L.h1, z, bb.r2)
        H2 = _series_at(L.h2, z, bb.r2)
        if H2.terms:
            try:
                r3 = H1.divide(H2, bound=-order - 1 if H1.is_exact and H2.is_exact else None)
            except NeedsMoreTerms:
                r3 = None
            if r3 is not None and (r3.order_bound is None or r3.order_bound < -order):
                return SpaceBranch(bb, bb.r2, r3)
        elif H2.is_exact:
            raise NeedsMoreTerms("lift denominator vanishes identically on the branch")
        if bb.r2.is_exact:
            raise NeedsMoreTerms("exact branch cannot be refined further")
        depth = depth + 2
    raise NeedsMoreTerms("lift denominator vanishes to the available order")


def space_residuals(f_list: Sequence[MultiPoly], sb: SpaceBranch) -> list[PuiseuxTruncation]:
    """Each f evaluated at (z, r2, r3) with truncated series arithmetic."""
    z = PuiseuxTruncation.monomial(Fraction(1), 1)
    one = PuiseuxTruncation.constant(Fraction(1))
    return [f.with_variables(SPACE).evaluate({X1: z, X2: sb.r2, X3: sb.r3}, one) for f in f_list]


__all__ = [
    "LiftFunction",
    "Projection",
    "SpaceBranch",
    "lift_branch",
    "lift_function",
    "project",
    "space_residuals",
]
