"""Infinity branches of plane algebraic curves.

Branches with x1 = z → ∞ are computed from G(w, y) = w^d · f(1/w, y),
w = 1/z, by rational Newton–Puiseux expansion: each Newton polygon edge is
resolved over the smallest field containing a root of its edge polynomial,
so one conjugacy class of branches is carried by one representative over a
number field.  Once the root in hand is simple, further terms come from
one-term-at-a-time linear solves (the regular stage).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Sequence

from .errors import NeedsCoordinateChange, NeedsMoreTerms
from .exactfield import upoly
from .exactfield.numberfield import (
    AlgebraicNumber,
    Embedding,
    NumberField,
    adjoin_root,
    cyclotomic,
    factor_over,
    field_degree,
    nth_root,
    sort_key,
)
from .exactfield.series import PuiseuxTruncation
from .polynomial import MultiPoly

Bivariate = dict  # {(t_exponent, y_exponent): coefficient}


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class InfinityPointPlane:
    """A point at infinity of the plane curve, up to conjugation.

    ``m2`` is the slope for points (1:m2:0); for branches escaping faster than
    z (point (0:1:0) reached with x1 → ∞) ``m2`` is None and ``lead`` holds the
    root of the edge polynomial, the leading coefficient raised to the power
    ``exponent.denominator``.
    """

    m2: object
    multiplicity: int
    exponent: Fraction = Fraction(1)
    lead: object = None

    @property
    def minpoly(self):
        value = self.m2 if self.m2 is not None else self.lead
        return value.minpoly if isinstance(value, AlgebraicNumber) else None

    @property
    def is_steep(self) -> bool:
        return self.m2 is None

    def projective(self) -> str:
        if self.m2 is None:
            return "(0:1:0)"
        return f"(1:{self.m2}:0)"

    def key(self) -> tuple:
        return (
            self.m2 is None,
            self.exponent,
            sort_key(self.m2 if self.m2 is not None else self.lead),
        )


@dataclass
class _Leaf:
    """One class of branches at the start of its regular stage."""

    field: NumberField | None
    base_degree: int  # [K:Q] before adjoining ρ
    e: int
    gamma: object
    F: Bivariate
    P: dict
    c: object
    s: int
    exact: bool
    point: InfinityPointPlane
    rho: object = None
    _cache: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def series(self, order) -> PuiseuxTruncation:
        """r2 with every exponent >= -order known."""
        target = max(int(Fraction(order) * self.e), 0)
        with self._lock:
            # keyed by target so the result never depends on earlier calls
            for key in (float("inf"), target):
                if key in self._cache:
                    return self._cache[key]
            P, s, exact = _regular_expand(self.F, self.P, self.c, self.s, target)
            terms = {}
            for i, coeff in P.items():
                value = coeff * self.rho ** i if i else coeff
                if value:
                    terms[Fraction(-i, self.e)] = value
            bound = None if exact else Fraction(-(s + 1), self.e)
            result = PuiseuxTruncation(terms, bound)
            self._cache[target if not exact else float("inf")] = result
            return result


@dataclass(frozen=True)
class PlaneBranch:
    """Representative of a conjugacy class of branches at infinity."""

    point: InfinityPointPlane
    r2: PuiseuxTruncation
    k: int
    conjugacy_minpoly: tuple | None
    count: int
    leaf: _Leaf | None = field(default=None, compare=False, repr=False)

    @property
    def field(self) -> NumberField | None:
        return self.leaf.field if self.leaf is not None else None

    def deepen(self, order) -> "PlaneBranch":
        """Same branch with every exponent >= -order known."""
        if self.r2.order_bound is None or self.r2.order_bound < -order:
            return self
        if self.leaf is None:
            raise NeedsMoreTerms("branch cannot be extended")
        return PlaneBranch(self.point, self.leaf.series(order), self.k, self.conjugacy_minpoly, self.count, self.leaf)

    def key(self) -> tuple:
        coeffs = tuple(
            (-e, sort_key(c)) for e, c in self.r2.nonnegative_part().terms
        ) if self.r2.order_bound is None or self.r2.order_bound < 0 else ()
        return (self.point.key(), coeffs)


# ---------------------------------------------------------------------------
# Newton polygon machinery


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lower convex hull of (y_exponent, t_exponent) points, left to right."""
    hull: list[tuple[int, int]] = []
    for p in sorted(points):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross <= 0:
                hull.pop()
            else:
                break
        if hull and hull[-1][0] == p[0]:
            continue
        hull.append(p)
    return hull


@dataclass(frozen=True)
class _Edge:
    m: int  # valuation m/q of the roots in the current local variable
    q: int
    j_start: int
    i_start: int
    length: int  # in y-exponent units

    def polynomial(self, F: Bivariate) -> list:
        out = []
        for s in range(self.length // self.q + 1):
            out.append(F.get((self.i_start - self.m * s, self.j_start + self.q * s), Fraction(0)))
        return upoly.trim(out)


def _edges(F: Bivariate, positive_only: bool) -> list[_Edge]:
    best: dict[int, int] = {}
    for (i, j) in F:
        if j not in best or i < best[j]:
            best[j] = i
    hull = _lower_hull([(j, i) for j, i in best.items()])
    edges = []
    for (j0, i0), (j1, i1) in zip(hull, hull[1:]):
        dj, di = j1 - j0, i0 - i1
        g = gcd(dj, abs(di)) or 1
        m, q = di // g, dj // g
        if positive_only and m <= 0:
            break
        edges.append(_Edge(m, q, j0, i0, dj))
    return edges


def _bezout(q: int, m: int) -> tuple[int, int]:
    """(u, w) with u*q - w*m == 1 and 0 <= w < q."""
    def egcd(a, b):
        if b == 0:
            return (a, 1, 0) if a >= 0 else (-a, -1, 0)
        g, x, y = egcd(b, a % b)
        return g, y, x - (a // b) * y

    g, x, y = egcd(q, -m)
    if g != 1:
        raise ValueError("edge slope not in lowest terms")
    u, w = x, y
    shift = -(w // q)
    return u + m * shift, w + q * shift


def _map_bivariate(F: Bivariate, emb: Embedding) -> Bivariate:
    return {k: emb(v) for k, v in F.items()}


def _power_table(x, exponents) -> dict:
    return {e: (x ** e if e else Fraction(1)) for e in exponents}


def _substitute(F: Bivariate, xi, m: int, q: int, u: int, w: int, limit: int | None = None) -> Bivariate:
    """F(ξ^w T^q, T^m (ξ^u + Y)) / T^L with L the minimal T-exponent."""
    L = min(q * i + m * j for (i, j) in F)
    max_j = max(j for _, j in F)
    xi_u = _power_table(xi, range(0, max_j + 1)) if u == 1 else None
    xi_pows: dict = {}

    def xpow(e):
        if e not in xi_pows:
            xi_pows[e] = xi ** e if e else Fraction(1)
        return xi_pows[e]

    out: dict = {}
    for (i, j), a in F.items():
        t = q * i + m * j - L
        if limit is not None and t > limit:
            continue
        base = a * xpow(w * i) if w * i else a
        for l in range(j + 1):
            pw = u * (j - l)
            coef = base * comb(j, l)
            if pw:
                coef = coef * (xi_u[j - l] if xi_u is not None else xpow(pw))
            key = (t, l)
            out[key] = out[key] + coef if key in out else coef
    return {k: v for k, v in out.items() if v}


def _regular_expand(F: Bivariate, P: dict, c, s: int, target: int):
    """Extend Y = P + c T^s Y' with Y' the unique root of positive valuation.

    Returns (P, s, exact): every term of Y up to T^s is known, and ``exact``
    says the terms in P are the whole series.  ``limit`` tracks the largest
    T-exponent of F that survived truncation (None while F is complete).
    """
    P = dict(P)
    limit = None
    while True:
        zeros = [i for (i, j) in F if j == 0]
        if not zeros and limit is None:
            return P, s, True
        if s >= target:
            return P, s, False
        ones = [i for (i, j) in F if j == 1]
        if not ones:
            raise NeedsMoreTerms("regular stage lost its simple root")
        a = min(ones)
        if not zeros:
            # A0 vanishes through T^limit, so Y' vanishes through T^(limit - a)
            return P, max(s, s + limit - a), False
        i0 = min(zeros)
        m = i0 - a
        if m <= 0:
            raise NeedsMoreTerms("regular stage expected a positive valuation")
        xi = -F[(i0, 0)] / F[(a, 1)]
        P[s + m] = P.get(s + m, 0) + c * xi
        s = s + m
        keep = a + (target - s) + m
        if any(i > keep for (i, _) in F):
            F = {k: v for k, v in F.items() if k[0] <= keep}
            limit = keep if limit is None else min(limit, keep)
        F = _substitute(F, xi, m, 1, 1, 0)
        if limit is not None:
            # terms above the trusted exponent may be missing contributions
            limit -= i0
            F = {k: v for k, v in F.items() if k[0] <= limit}


# ---------------------------------------------------------------------------
# driver


def _branch_polynomial(fp: MultiPoly) -> tuple[Bivariate, int]:
    x1 = fp.variables[0]
    x2 = fp.variables[1]
    used = set(fp.used_variables()) - {x1, x2}
    if used:
        raise ValueError("plane curve polynomial must only involve its first two variables")
    d1 = fp.degree_in(x1)
    i1, i2 = fp.variables.index(x1), fp.variables.index(x2)
    G = {}
    for e, c in fp.terms.items():
        G[(d1 - e[i1], e[i2])] = c
    return G, d1


def check_no_vertical_branches(fp: MultiPoly) -> None:
    """Branches with bounded x1 cannot be parametrized by x1 = z."""
    x2 = fp.variables[1]
    if fp.degree_in(x2) < 1:
        raise NeedsCoordinateChange("curve is a union of vertical lines")
    if not fp.leading_coeff_in(x2).is_constant():
        raise NeedsCoordinateChange("curve has branches with bounded x1 (vertical asymptotes)")


_CLASS_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def _fp_key(fp: MultiPoly) -> tuple:
    return (fp.variables, tuple(sorted(fp.terms.items())))


def _branch_classes(fp: MultiPoly) -> list[_Leaf]:
    key = _fp_key(fp)
    with _CACHE_LOCK:
        if key in _CLASS_CACHE:
            return _CLASS_CACHE[key]
    check_no_vertical_branches(fp)
    G, _ = _branch_polynomial(fp)
    leaves: list[_Leaf] = []
    jmin = min(j for _, j in G)
    zero_point = None
    if jmin > 0:
        G = {(i, j - jmin): v for (i, j), v in G.items()}
    origin_mult = jmin + sum(e.length for e in _edges(G, False) if Fraction(-e.m, e.q) < 1)
    if origin_mult:
        zero_point = InfinityPointPlane(Fraction(0), origin_mult)
    if jmin > 0:
        leaves.append(_Leaf(None, 1, 1, Fraction(1), {}, {}, Fraction(1), 0, True, zero_point, Fraction(1)))
    steep_mult = sum(e.length for e in _edges(G, False) if Fraction(-e.m, e.q) > 1)
    for edge in _edges(G, False):
        alpha = Fraction(-edge.m, edge.q)
        phi = edge.polynomial(G)
        for psi, mult in factor_over(None, phi):
            K, emb, xi = adjoin_root(None, psi)
            if alpha == 1:
                point = InfinityPointPlane(xi, mult)
            elif alpha < 1:
                point = zero_point
            else:
                point = InfinityPointPlane(None, steep_mult, alpha, xi)
            state = (K, Fraction(1), 1, {}, Fraction(1), 0)
            _descend(_map_bivariate(G, emb), edge, xi, mult, state, point, leaves)
    for leaf in leaves:
        _attach_rho(leaf)
    with _CACHE_LOCK:
        _CLASS_CACHE[key] = leaves
    return leaves


def _descend(F: Bivariate, edge: _Edge, xi, mult: int, state, point, leaves: list[_Leaf]) -> None:
    K, gamma, e, P, c, s = state
    m, q = edge.m, edge.q
    u, w = _bezout(q, m)
    F1 = _substitute(F, xi, m, q, u, w)
    xw = xi ** w if w else Fraction(1)
    gamma = gamma * xw ** e
    newP = {q * i: v * xw ** i if i else v for i, v in P.items()}
    lead = c * (xw ** s if s else Fraction(1)) * (xi ** u if u else Fraction(1))
    newP[q * s + m] = newP.get(q * s + m, 0) + lead
    c = c * (xw ** s if s else Fraction(1))
    e, s = e * q, q * s + m
    base = field_degree(K)
    jmin = min(j for _, j in F1)
    if jmin > 0:
        leaves.append(_Leaf(K, base, e, gamma, {}, newP, c, s, True, point))
        F1 = {(i, j - jmin): v for (i, j), v in F1.items()}
        if mult == jmin:
            return
    if mult == 1:
        leaves.append(_Leaf(K, base, e, gamma, F1, newP, c, s, False, point))
        return
    for sub in _edges(F1, True):
        phi = sub.polynomial(F1)
        for psi, mu in factor_over(K, phi):
            L, emb, xi2 = adjoin_root(K, psi)
            mapped = _map_bivariate(F1, emb) if L is not K else F1
            mP = {i: emb(v) for i, v in newP.items()} if L is not K else newP
            state2 = (L, emb(gamma), e, mP, emb(c), s)
            _descend(mapped, sub, xi2, mu, state2, point, leaves)


def _attach_rho(leaf: _Leaf) -> None:
    """Pick ρ with ρ^e = 1/γ so that T = ρ z^(-1/e); may enlarge the field."""
    if leaf.rho is not None:
        return
    inv_gamma = 1 / leaf.gamma
    L, emb, rho = nth_root(leaf.field, inv_gamma, leaf.e)
    if L is not leaf.field and L != leaf.field:
        leaf.F = _map_bivariate(leaf.F, emb)
        leaf.P = {i: emb(v) for i, v in leaf.P.items()}
        leaf.c = emb(leaf.c)
        leaf.gamma = emb(leaf.gamma)
        leaf.field = L
    leaf.rho = rho


# ---------------------------------------------------------------------------
# public operations


def reduce_fp(fp: MultiPoly) -> MultiPoly:
    """Restrict to the variables (x1, x2) of a plane curve polynomial."""
    if len(fp.variables) == 2:
        return fp
    return fp.with_variables(fp.variables[:2])


def infinity_points(fp: MultiPoly) -> list[InfinityPointPlane]:
    """Points at infinity reached with x1 → ∞, one per conjugacy class."""
    seen = []
    for leaf in _branch_classes(reduce_fp(fp)):
        if leaf.point not in seen:
            seen.append(leaf.point)
    return sorted(seen, key=InfinityPointPlane.key)


def _leaf_branch(leaf: _Leaf, order) -> PlaneBranch:
    r2 = leaf.series(order)
    minpoly = leaf.field.modulus if leaf.field is not None else None
    return PlaneBranch(leaf.point, r2, leaf.e, minpoly, leaf.e * leaf.base_degree, leaf)


def expand_branch(fp: MultiPoly, point: InfinityPointPlane, order=2) -> list[PlaneBranch]:
    """Branches at ``point`` with every exponent >= -order known."""
    out = [_leaf_branch(leaf, order) for leaf in _branch_classes(reduce_fp(fp)) if leaf.point == point]
    return sorted(out, key=PlaneBranch.key)


def plane_branches(fp: MultiPoly, order=2) -> list[PlaneBranch]:
    """All branch classes of the curve at x1 → ∞, in deterministic order."""
    out = [_leaf_branch(leaf, order) for leaf in _branch_classes(reduce_fp(fp))]
    return sorted(out, key=PlaneBranch.key)


def branch_degree(b: PlaneBranch) -> int:
    """Least common denominator of the exponents of the non-negative part of r2."""
    return b.r2.nonnegative_part().ramification


def plane_asymptote(b: PlaneBranch) -> tuple[int, list]:
    """(n, q2) with q2(t) = the non-negative part of r2 at z = t^n."""
    n = branch_degree(b)
    part = b.r2.nonnegative_part().substitute_power(n)
    top = int(part.leading_exponent) if part.terms else 0
    coeffs = [Fraction(0)] * (top + 1)
    for e, c in part.terms:
        coeffs[int(e)] = c
    return n, upoly.trim(coeffs)


def conjugate_orbit(b: PlaneBranch) -> list[PlaneBranch]:
    """The N conjugates of a branch obtained from the N-th roots of unity."""
    N = b.r2.ramification
    if b.r2.order_bound is not None:
        N = max(N, b.k)
    if N == 1:
        return [b]
    K = b.field
    if N == 2:
        eps, L, emb = Fraction(-1), K, Embedding.identity(K)
    else:
        factors = factor_over(K, list(cyclotomic(N)))
        factors.sort(key=lambda fm: upoly.degree(fm[0]))
        L, emb, eps = adjoin_root(K, factors[0][0])
    base = b.r2.map_coefficients(emb) if L is not K else b.r2
    out = []
    minpoly = L.modulus if L is not None else None
    for j in range(N):
        out.append(PlaneBranch(b.point, base.conjugate(eps ** j if j else Fraction(1), N), b.k, minpoly, b.count, None))
    return out


def branches_convergent(b1, b2) -> bool:
    """True when the non-negative exponent parts agree componentwise."""
    return all(s1.nonnegative_part() == s2.nonnegative_part() for s1, s2 in zip(_components(b1), _components(b2)))


def _components(b) -> Sequence[PuiseuxTruncation]:
    if isinstance(b, PlaneBranch):
        return (b.r2,)
    return (b.r2, b.r3)


def residual(fp: MultiPoly, r2: PuiseuxTruncation) -> PuiseuxTruncation:
    """fp(z, r2(z)) computed with truncated series arithmetic."""
    fp = reduce_fp(fp)
    z = PuiseuxTruncation.monomial(Fraction(1), 1)
    return fp.evaluate({fp.variables[0]: z, fp.variables[1]: r2}, PuiseuxTruncation.constant(Fraction(1)))


def residual_vanishes(fp: MultiPoly, b: PlaneBranch) -> bool:
    """No term survives above the guaranteed order of the substituted series."""
    return not residual(fp, b.r2).terms
