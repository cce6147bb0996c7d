"""The triangular Λ-system giving the third asymptote component directly.

With x1 = t^k, x2 = the truncated plane branch r2*(t^k) and
x3 = b0 t^D + b1 t^(D-1) + ..., the Laurent expansion of f3 = x3 h2 - h1 has
top coefficients Λ0, Λ1, ... where Λj is affine in bj with the common
coefficient ρ (the top coefficient of h2 along the branch) and involves only
b0..bj.  Solving Λj = 0 one at a time yields q3.

Which terms of r2 matter is decided by a placeholder v put at the first
omitted position of r2*: every coefficient we read must be free of v.  The
Taylor expansion of f3 in x2 around r2* shows this is exactly the condition
for the truncation not to affect those coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import InternalInconsistency, NeedsMoreTerms
from ..exactfield.series import PuiseuxTruncation
from ..planecurve import PlaneBranch
from ..polynomial import MultiPoly
from .lift import X1, X2, LiftFunction, SpaceBranch

PROBE = "v"


def unknown_names(count: int) -> tuple[str, ...]:
    return tuple(f"b{j}" for j in range(count))


@dataclass(frozen=True)
class LambdaSystem:
    """Top Laurent coefficients Λ0..Λ_{count-1} in the unknowns b0, b1, ...

    ``top`` is the t-exponent of Λ0, ``D`` the t-degree given to q3 and
    ``mu`` the spread between the top and bottom exponents of the expansion.
    """

    k: int
    D: int
    coefficients: tuple
    rho: object
    mu: int
    top: int
    n_used: int
    r_used: int | None
    unknowns: tuple

    @property
    def size(self) -> int:
        return len(self.coefficients)


def _truncated_x2(b: PlaneBranch, k: int, n: int) -> PuiseuxTruncation:
    """r2*(t^k): every term of r2(t^k) with t-exponent >= -n, as an exact series."""
    b = b.deepen(Fraction(n, k))
    s = b.r2.substitute_power(k)
    return PuiseuxTruncation([(e, c) for e, c in s.terms if e >= -n])


def _probe_poly(names: Sequence[str]) -> MultiPoly:
    return MultiPoly.var(PROBE, tuple(names) + (PROBE,))


def _expansions(L: LiftFunction, x1: PuiseuxTruncation, x2: PuiseuxTruncation):
    one = PuiseuxTruncation.constant(Fraction(1))
    values = {X1: x1, X2: x2}
    return L.h1.evaluate(values, one), L.h2.evaluate(values, one)


def _free_of(p, name: str) -> bool:
    return not isinstance(p, MultiPoly) or p.degree_in(name) <= 0


def _as_poly(c, variables) -> MultiPoly:
    return c.with_variables(variables) if isinstance(c, MultiPoly) else MultiPoly.constant(c, variables)


def _attempt(L: LiftFunction, b: PlaneBranch, k: int, n: int, count_extra: int, D_min: int | None):
    """One Λ computation; returns (system pieces) or None when n is too small."""
    base = _truncated_x2(b, k, n)
    exact_tail = b.deepen(Fraction(n, k)).r2.is_exact
    x1 = PuiseuxTruncation.monomial(Fraction(1), k)
    if exact_tail:
        x2 = base
    else:
        probe = PuiseuxTruncation.monomial(_probe_poly(()), -(n + 1))
        x2 = base + probe
    H1, H2 = _expansions(L, x1, x2)
    if not H2.terms:
        return None
    sigma, rho = H2.terms[0]
    if not _free_of(rho, PROBE):
        return None
    tau = H1.terms[0][0] if H1.terms else None
    D = max(k, int(x2.terms[0][0]) if base.terms else 0)
    if D_min is not None:
        D = max(D, D_min)
    if tau is not None and tau - sigma > D:
        D = int(tau - sigma)
    count = D + 1 + count_extra
    names = unknown_names(count)
    variables = names + (PROBE,)
    x3 = PuiseuxTruncation([(D - j, MultiPoly.var(nm, variables)) for j, nm in enumerate(names)])
    E = x3 * H2 - H1
    top = D + sigma
    coeffs = []
    emap = dict(E.terms)
    for j in range(count):
        c = emap.get(top - j, 0)
        c = _as_poly(c, variables)
        if not _free_of(c, PROBE):
            return None
        coeffs.append(c.with_variables(names))
    if any(e > top for e in emap):
        raise InternalInconsistency("expansion has terms above the expected top exponent")
    bottom = min(e for e in emap) if emap else top
    rho_value = rho.constant_value() if isinstance(rho, MultiPoly) else rho
    return D, tuple(coeffs), rho_value, int(top - bottom), int(top), names


def lambda_coefficients(
    L: LiftFunction,
    b: PlaneBranch,
    k: int | None = None,
    n: int | None = None,
    extra: int = 0,
    D: int | None = None,
    max_n: int = 64,
) -> LambdaSystem:
    """Λ0..Λ_{D+extra} for branch b, raising n until the truncation is sound."""
    k = b.k if k is None else k
    r_used = None
    if n is None:
        r_used, n = determine_truncation_params(L, b, k)
    while n <= max_n:
        got = _attempt(L, b, k, n, extra, D)
        if got is not None:
            D_used, coeffs, rho, mu, top, names = got
            S = LambdaSystem(k, D_used, coeffs, rho, mu, top, n, r_used, names)
            check_triangular(S)
            return S
        n += 1
    raise NeedsMoreTerms(f"Λ-system still depends on omitted terms at n = {max_n}")


def check_triangular(S: LambdaSystem) -> None:
    """Λj involves only b0..bj and is affine in bj with coefficient ρ ≠ 0."""
    if not S.rho:
        raise InternalInconsistency("leading multiplier ρ vanishes")
    for j, lam in enumerate(S.coefficients):
        for i in range(j + 1, len(S.unknowns)):
            if lam.degree_in(S.unknowns[i]) > 0:
                raise InternalInconsistency(f"Λ{j} depends on b{i}")
        bj = S.unknowns[j]
        if lam.degree_in(bj) != 1:
            raise InternalInconsistency(f"Λ{j} is not linear in b{j}")
        slope = lam.coeffs_in(bj)[1]
        if not slope.is_constant() or slope.constant_value() != S.rho:
            raise InternalInconsistency(f"coefficient of b{j} in Λ{j} differs from ρ")


def solve_triangular(S: LambdaSystem) -> list:
    """Forward substitution through Λ0 = 0, Λ1 = 0, ..."""
    solution: list = []
    for j, lam in enumerate(S.coefficients):
        bj = S.unknowns[j]
        known = {S.unknowns[i]: solution[i] for i in range(j)}
        reduced = lam.substitute(known) if known else lam
        const = reduced.substitute({bj: Fraction(0)})
        value = const.constant_value() if const else Fraction(0)
        solution.append(-value / S.rho)
    return solution


def residual_after_solving(L: LiftFunction, b: PlaneBranch, S: LambdaSystem, solution: Sequence) -> PuiseuxTruncation:
    """f3(t^k, r2*(t^k), q3(t)) with the solved coefficients, as a Laurent polynomial."""
    x1 = PuiseuxTruncation.monomial(Fraction(1), S.k)
    x2 = _truncated_x2(b, S.k, S.n_used)
    x3 = PuiseuxTruncation([(S.D - j, c) for j, c in enumerate(solution)])
    H1, H2 = _expansions(L, x1, x2)
    return x3 * H2 - H1


def _probe_top(L: LiftFunction, x2: PuiseuxTruncation, k: int, D: int) -> bool:
    """Does the top coefficient of the expansion involve the placeholder?"""
    names = unknown_names(D + 1)
    variables = names + (PROBE,)
    x1 = PuiseuxTruncation.monomial(Fraction(1), k)
    H1, H2 = _expansions(L, x1, x2)
    x3 = PuiseuxTruncation([(D - j, MultiPoly.var(nm, variables)) for j, nm in enumerate(names)])
    E = x3 * H2 - H1
    if not E.terms:
        return False
    return not _free_of(_as_poly(E.terms[0][1], variables), PROBE)


def determine_truncation_params(L: LiftFunction, b: PlaneBranch, k: int | None = None) -> tuple[int, int]:
    """(r, n): r from placeholder probing of the top coefficient, n = max(r, k - ℓ).

    a_j denotes the coefficient of t^(k-j) in r2(t^k) (a_0 multiplies t^k);
    ℓ counts the vanishing coefficients among a_1..a_k.
    """
    k = b.k if k is None else k
    full = b.deepen(Fraction(k + 2, k)).r2.substitute_power(k)
    coeff = dict(full.terms)
    top_exp = max(k, int(full.terms[0][0])) if full.terms else k
    D = top_exp
    r = 0
    for j in range(1, k + 64):
        cut = k - j
        if full.order_bound is not None and cut <= full.order_bound:
            full = b.deepen(Fraction(j + 2, k)).r2.substitute_power(k)
            coeff = dict(full.terms)
        kept = PuiseuxTruncation([(e, c) for e, c in coeff.items() if e > cut])
        probe = PuiseuxTruncation.monomial(_probe_poly(unknown_names(D + 1)), cut)
        if not _probe_top(L, kept + probe, k, D):
            break
        r = j
        if full.is_exact and all(e > cut for e in coeff):
            break
    ell = sum(1 for j in range(1, k + 1) if not coeff.get(Fraction(k - j), 0))
    return r, max(r, k - ell)


def extend_branch(L: LiftFunction, b: PlaneBranch, m: int, n: int | None = None) -> SpaceBranch:
    """r3 through m terms below the constant, from the enlarged Λ-system."""
    S = lambda_coefficients(L, b, extra=m, n=n)
    sol = solve_triangular(S)
    k = S.k
    r3 = PuiseuxTruncation([(Fraction(S.D - j, k), c) for j, c in enumerate(sol)], Fraction(-(m + 1), k))
    bb = b.deepen(Fraction(m, k))
    return SpaceBranch(bb, bb.r2, r3)
