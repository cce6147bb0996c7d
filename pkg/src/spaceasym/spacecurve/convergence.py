"""Checking that an asymptote approaches its branch: exactly, and at sample points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import mpmath

from ..exactfield.numberfield import AlgebraicNumber
from ..exactfield.series import PuiseuxTruncation
from ..planecurve import branches_convergent
from .asymptotes import AsymptoteParam, asymptote_branch
from .lift import SpaceBranch

DEFAULT_SAMPLES = (100, 1000, 10000)
WORKING_DPS = 50
RENDER_DIGITS = 30


@dataclass(frozen=True)
class SamplePoint:
    magnitude: Fraction
    distance: object  # mpmath number
    exact: bool  # every value was formed in exact rational arithmetic

    @property
    def rendered(self) -> str:
        return render(self.distance)


@dataclass(frozen=True)
class ConvergenceReport:
    exact_match: bool
    samples: tuple
    decreasing: bool

    @property
    def passed(self) -> bool:
        return self.exact_match and self.decreasing

    def distances(self) -> list[str]:
        return [s.rendered for s in self.samples]


def render(x) -> str:
    with mpmath.workdps(WORKING_DPS):
        return mpmath.nstr(x, RENDER_DIGITS)


def embedding_root(minpoly: Sequence) -> object:
    """The numeric root used for λ: the smallest real root, else the first complex one."""
    with mpmath.workdps(WORKING_DPS):
        coeffs = [mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator for c in reversed(minpoly)]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
        real = sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-40))
        if real:
            return real[0]
        return sorted(roots, key=lambda r: (mpmath.re(r), mpmath.im(r)))[0]


def _numeric(c, root):
    if isinstance(c, AlgebraicNumber):
        if c.is_rational():
            c = c.rational_value()
        else:
            total = mpmath.mpf(0)
            for i, r in enumerate(c.rep):
                total += _numeric(r, root) * root**i
            return total
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def _is_rational(c) -> bool:
    return not isinstance(c, AlgebraicNumber) or c.is_rational()


def _exact_value(s: PuiseuxTruncation, t: Fraction, k: int) -> Fraction:
    total = Fraction(0)
    for e, c in s.terms:
        total += Fraction(c.rational_value() if isinstance(c, AlgebraicNumber) else c) * t ** int(e * k)
    return total


def _numeric_value(s: PuiseuxTruncation, t, k: int, root):
    total = mpmath.mpf(0)
    for e, c in s.terms:
        total += _numeric(c, root) * t ** int(e * k)
    return total


def _common_ramification(*series: PuiseuxTruncation) -> int:
    k = 1
    for s in series:
        for e, _ in s.terms:
            k = lcm(k, e.denominator)
    return k


def sample_distance(branch: SpaceBranch, target: SpaceBranch, magnitude, minpoly=None) -> SamplePoint:
    """Euclidean distance between the two branches at the same z with |z| = magnitude, z > 0."""
    magnitude = Fraction(magnitude)
    parts = (branch.r2, branch.r3, target.r2, target.r3)
    k = _common_ramification(*parts)
    coeffs = [c for s in parts for _, c in s.terms]
    t_exact = None
    if k == 1:
        t_exact = magnitude
    else:
        with mpmath.workdps(WORKING_DPS):
            approx = mpmath.root(mpmath.mpf(magnitude.numerator) / magnitude.denominator, k)
            guess = Fraction(int(mpmath.nint(approx)))
            if guess > 0 and guess**k == magnitude:
                t_exact = guess
    with mpmath.workdps(WORKING_DPS):
        if t_exact is not None and all(_is_rational(c) for c in coeffs):
            d2 = _exact_value(branch.r2, t_exact, k) - _exact_value(target.r2, t_exact, k)
            d3 = _exact_value(branch.r3, t_exact, k) - _exact_value(target.r3, t_exact, k)
            sq = d2 * d2 + d3 * d3
            dist = mpmath.sqrt(mpmath.mpf(sq.numerator) / sq.denominator)
            return SamplePoint(magnitude, dist, True)
        root = embedding_root(minpoly) if minpoly is not None else None
        t = mpmath.root(mpmath.mpf(magnitude.numerator) / magnitude.denominator, k)
        d2 = _numeric_value(branch.r2, t, k, root) - _numeric_value(target.r2, t, k, root)
        d3 = _numeric_value(branch.r3, t, k, root) - _numeric_value(target.r3, t, k, root)
        dist = mpmath.sqrt(abs(d2) ** 2 + abs(d3) ** 2)
        return SamplePoint(magnitude, dist, False)


def _field_modulus(branch: SpaceBranch, a: AsymptoteParam):
    if a.minpoly is not None:
        return a.minpoly
    for s in (branch.r2, branch.r3):
        for _, c in s.terms:
            if isinstance(c, AlgebraicNumber) and not c.is_rational():
                return c.field.modulus
    return None


def verify_convergence(a: AsymptoteParam, branch: SpaceBranch, samples: Sequence = DEFAULT_SAMPLES) -> ConvergenceReport:
    """Exact agreement of non-negative parts, then distances at growing |z|.

    Distances that are identically zero (an exact branch equal to its
    asymptote) count as decreasing.
    """
    target = asymptote_branch(a)
    if target is None:
        raise ValueError("asymptote must be in working coordinates with x1 = t^k")
    exact_match = branches_convergent(branch, target)
    minpoly = _field_modulus(branch, a)
    points = tuple(sample_distance(branch, target, m, minpoly) for m in samples)
    values = [p.distance for p in points]
    all_zero = all(v == 0 for v in values)
    decreasing = all_zero or all(x > y for x, y in zip(values, values[1:]))
    return ConvergenceReport(exact_match, points, decreasing)
