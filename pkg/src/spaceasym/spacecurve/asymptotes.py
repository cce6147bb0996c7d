"""Generalized asymptotes: the Puiseux-truncation route and the Λ-system route."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

from ..exactfield import upoly
from ..exactfield.numberfield import AlgebraicNumber, field_of, sort_key
from ..exactfield.series import PuiseuxTruncation
from ..planecurve import PlaneBranch, plane_branches
from ..polynomial import MultiPoly, resultant, squarefree_part
from .lambda_system import LambdaSystem, lambda_coefficients, solve_triangular
from .lift import Projection, SpaceBranch, lift_branch, project

T = "t"
LAMBDA = "lam"


def _plain(c):
    if isinstance(c, AlgebraicNumber) and c.is_rational():
        return c.rational_value()
    return c


def _trimmed(coeffs: Sequence) -> tuple:
    return tuple(_plain(c) for c in upoly.trim(list(coeffs)))


@dataclass(frozen=True)
class AsymptoteParam:
    """Polynomial parametrization t ↦ (x1(t), x2(t), x3(t)).

    Each component is a coefficient tuple, constant term first.  In the
    working coordinates x1(t) = t^k; after undoing a coordinate change the
    components are general polynomials and ``k`` is None.
    """

    components: tuple
    proper: bool = False
    minpoly: tuple | None = None
    repaired_from: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(_trimmed(c) for c in self.components))

    @classmethod
    def standard(cls, k: int, q2: Sequence, q3: Sequence, **kw) -> "AsymptoteParam":
        x1 = [Fraction(0)] * k + [Fraction(1)]
        values = list(q2) + list(q3)
        K = field_of(values)
        return cls((tuple(x1), tuple(q2), tuple(q3)), minpoly=K.modulus if K is not None else None, **kw)

    @property
    def k(self) -> int | None:
        x1 = self.components[0]
        if x1 and x1[-1] == 1 and not any(x1[:-1]):
            return len(x1) - 1
        return None

    @property
    def q2(self) -> tuple:
        return self.components[1]

    @property
    def q3(self) -> tuple:
        return self.components[2]

    def exponent_gcd(self) -> int:
        g = 0
        for comp in self.components:
            for e, c in enumerate(comp):
                if c and e:
                    g = gcd(g, e)
        return g or 1

    def evaluate(self, t) -> tuple:
        return tuple(upoly.evaluate(list(c), t) if c else Fraction(0) for c in self.components)

    def transformed(self, M) -> "AsymptoteParam":
        """Components in original coordinates, original = M · working."""
        if M is None:
            return self
        comps = []
        for row in M:
            acc: list = []
            for coeff, comp in zip(row, self.components):
                if coeff:
                    acc = upoly.add(acc, upoly.scale(list(comp), Fraction(coeff)))
            comps.append(tuple(acc))
        return AsymptoteParam(tuple(comps), self.proper, self.minpoly, self.repaired_from)

    def key(self) -> tuple:
        return (
            self.minpoly or (),
            tuple(tuple(sort_key(c) for c in comp) for comp in self.components),
        )


def make_proper(a: AsymptoteParam) -> AsymptoteParam:
    """Replace t by t^(1/d) where d is the gcd of all exponents in use."""
    d = a.exponent_gcd()
    if d == 1:
        return AsymptoteParam(a.components, True, a.minpoly, a.repaired_from)
    comps = tuple(tuple(c for e, c in enumerate(comp) if e % d == 0) for comp in a.components)
    return AsymptoteParam(comps, True, a.minpoly, a.k if a.k is not None else a.repaired_from)


def _series_poly(s: PuiseuxTruncation, n: int) -> tuple:
    """Non-negative part of s at z = t^n, as coefficients."""
    part = s.nonnegative_part().substitute_power(n)
    if not part.terms:
        return ()
    top = int(part.terms[0][0])
    out = [Fraction(0)] * (top + 1)
    for e, c in part.terms:
        out[int(e)] = c
    return tuple(out)


def asymptote_from_space_branch(sb: SpaceBranch, k: int | None = None) -> AsymptoteParam:
    """Drop negative exponents and substitute z = t^n, then reduce to a proper form.

    n defaults to the branch degree; passing the ramification index of the
    plane branch reproduces the possibly improper t^k form first.
    """
    n = sb.degree if k is None else k
    return make_proper(AsymptoteParam.standard(n, _series_poly(sb.r2, n), _series_poly(sb.r3, n)))


def asymptote_branch(a: AsymptoteParam) -> SpaceBranch | None:
    """The asymptote itself written as a branch (z, r2(z), r3(z)), z = t^k."""
    k = a.k
    if k is None:
        return None
    comps = []
    for comp in (a.q2, a.q3):
        comps.append(PuiseuxTruncation({Fraction(e, k): c for e, c in enumerate(comp) if c}))
    return SpaceBranch(None, comps[0], comps[1])


@dataclass
class BranchRecord:
    """Everything computed for one branch class."""

    plane: PlaneBranch
    space: SpaceBranch | None = None
    asymptote: AsymptoteParam | None = None
    system: LambdaSystem | None = None
    solution: tuple | None = None


@dataclass
class AsymptoteResult:
    method: str
    projection: Projection
    records: list
    asymptotes: list  # deduplicated, working coordinates
    branch_map: list  # record index -> asymptote index

    @property
    def transform(self):
        return self.projection.transform

    def original_asymptotes(self) -> list[AsymptoteParam]:
        return [a.transformed(self.transform) for a in self.asymptotes]

    def branches_of(self, index: int) -> list[int]:
        return [i for i, j in enumerate(self.branch_map) if j == index]


def _basic_record(plane: PlaneBranch, proj: Projection) -> BranchRecord:
    sb = lift_branch(plane, proj.lift, order=0)
    return BranchRecord(plane, sb, asymptote_from_space_branch(sb, plane.k))


def _improved_record(plane: PlaneBranch, proj: Projection) -> BranchRecord:
    S = lambda_coefficients(proj.lift, plane)
    sol = solve_triangular(S)
    q2 = _series_poly(plane.deepen(Fraction(S.n_used, S.k)).r2, S.k)
    q3 = [Fraction(0)] * (S.D + 1)
    for j, c in enumerate(sol):
        q3[S.D - j] = c
    raw = AsymptoteParam.standard(S.k, q2, q3)
    return BranchRecord(plane, None, make_proper(raw), S, tuple(sol))


def _assemble(method: str, proj: Projection, records: list[BranchRecord]) -> AsymptoteResult:
    asymptotes: list[AsymptoteParam] = []
    branch_map = []
    for rec in records:
        a = rec.asymptote
        found = next((i for i, b in enumerate(asymptotes) if b.components == a.components), None)
        if found is None:
            asymptotes.append(a)
            found = len(asymptotes) - 1
        branch_map.append(found)
    return AsymptoteResult(method, proj, records, asymptotes, branch_map)


def _run(method: str, f1: MultiPoly, f2: MultiPoly, seed: int, parallel: bool, depth) -> AsymptoteResult:
    proj = project(f1, f2, seed=seed)
    planes = plane_branches(proj.fp, order=depth)
    build: Callable = _basic_record if method == "basic" else _improved_record
    if parallel and len(planes) > 1:
        with ThreadPoolExecutor() as pool:
            records = list(pool.map(lambda b: build(b, proj), planes))
    else:
        records = [build(b, proj) for b in planes]
    return _assemble(method, proj, records)


def compute_asymptotes(f1: MultiPoly, f2: MultiPoly, method: str = "improved", seed: int = 0,
                       parallel: bool = False, depth=2) -> AsymptoteResult:
    if method not in ("basic", "improved"):
        raise ValueError(f"unknown method {method!r}")
    return _run(method, f1, f2, seed, parallel, depth)


def space_asymptotes_basic(f1: MultiPoly, f2: MultiPoly, seed: int = 0) -> list[AsymptoteParam]:
    """One asymptote per branch class from the truncated lifted branches."""
    return compute_asymptotes(f1, f2, "basic", seed).original_asymptotes()


def space_asymptotes_improved(f1: MultiPoly, f2: MultiPoly, seed: int = 0) -> list[AsymptoteParam]:
    """One asymptote per branch class from the triangular Λ-systems."""
    return compute_asymptotes(f1, f2, "improved", seed).original_asymptotes()


# ---------------------------------------------------------------------------
# implicit equations


def _component_poly(comp: Sequence, target: str, minpoly) -> MultiPoly:
    """target - X(t), with algebraic coefficients written as polynomials in λ."""
    variables = ("x1", "x2", "x3", T, LAMBDA)
    terms: dict = {}
    ti, li, xi = variables.index(T), variables.index(LAMBDA), variables.index(target)

    def put(exp_t, exp_l, c):
        e = [0] * len(variables)
        e[ti], e[li] = exp_t, exp_l
        key = tuple(e)
        terms[key] = terms.get(key, Fraction(0)) - c

    for et, c in enumerate(comp):
        if isinstance(c, AlgebraicNumber):
            for el, r in enumerate(c.rep):
                if r:
                    put(et, el, r)
        elif c:
            put(et, 0, Fraction(c))
    e = [0] * len(variables)
    e[xi] = 1
    terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + 1
    return MultiPoly(terms, variables)


def eliminate_lambda(a: AsymptoteParam) -> tuple[MultiPoly, MultiPoly]:
    """Implicit equations g_i(x1, x_i) = 0 (i = 2, 3) of the asymptote and its conjugates."""
    variables = ("x1", "x2", "x3", T, LAMBDA)
    m_poly = None
    if a.minpoly is not None:
        m_poly = MultiPoly.from_univariate(list(a.minpoly), LAMBDA, variables)

    def eliminate_lam(p: MultiPoly) -> MultiPoly:
        if m_poly is not None and p.degree_in(LAMBDA) > 0:
            return resultant(m_poly, p, LAMBDA)
        return p

    p1 = eliminate_lam(_component_poly(a.components[0], "x1", a.minpoly))
    out = []
    for idx, name in ((1, "x2"), (2, "x3")):
        pi = eliminate_lam(_component_poly(a.components[idx], name, a.minpoly))
        if pi.degree_in(T) > 0 and p1.degree_in(T) > 0:
            g = resultant(p1, pi, T)
        else:
            g = pi if pi.degree_in(T) == 0 else p1
        g = squarefree_part(g).with_variables(variables).drop_unused()
        out.append(g.with_variables(("x1", "x2", "x3")))
    return out[0], out[1]


def substitute_parametrization(g: MultiPoly, a: AsymptoteParam) -> list:
    """g(x1(t), x2(t), x3(t)) as a coefficient list in t, computed over the asymptote's field."""
    values = {name: list(comp) for name, comp in zip(("x1", "x2", "x3"), a.components)}
    total: list = []
    for e, c in g.terms.items():
        term = [Fraction(c)]
        for name, k in zip(g.variables, e):
            for _ in range(k):
                term = upoly.mul(term, values[name])
        total = upoly.add(total, term)
    return total
