"""Sparse multivariate polynomials over exact fields."""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd, lcm as ilcm
from typing import Callable, Iterable, Mapping, Sequence

from ..errors import InvalidTransform, NotDivisible
from ..exactfield.numberfield import AlgebraicNumber, format_rational

DEFAULT_VARIABLES = ("x1", "x2", "x3")


def _scalar(c):
    return Fraction(c) if isinstance(c, int) else c


def _is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, AlgebraicNumber))


class MultiPoly:
    """A polynomial stored as {exponent tuple: nonzero coefficient}."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), variables: Sequence[str] = DEFAULT_VARIABLES):
        self.variables = tuple(variables)
        n = len(self.variables)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for exp, c in items:
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            c = _scalar(c)
            acc[exp] = acc[exp] + c if exp in acc else c
        self.terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    # constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c, variables: Sequence[str] = DEFAULT_VARIABLES) -> "MultiPoly":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name: str, variables: Sequence[str] = DEFAULT_VARIABLES) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            variables = variables + (name,)
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls({exp: Fraction(1)}, variables)

    @classmethod
    def from_univariate(cls, coeffs: Sequence, name: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        """Build sum c_i name^i; coefficients may themselves be MultiPoly."""
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        idx = variables.index(name)
        out: dict = {}
        for i, c in enumerate(coeffs):
            if isinstance(c, MultiPoly):
                c = c.with_variables(variables)
                for e, v in c.terms.items():
                    e2 = list(e)
                    e2[idx] += i
                    key = tuple(e2)
                    out[key] = out[key] + v if key in out else v
            elif c:
                key = tuple(i if j == idx else 0 for j in range(len(variables)))
                out[key] = out[key] + _scalar(c) if key in out else _scalar(c)
        return cls(out, variables)

    # variable bookkeeping ---------------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over a variable list that contains every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = []
        for i, v in enumerate(self.variables):
            if v in variables:
                pos.append(variables.index(v))
            else:
                if any(e[i] for e in self.terms):
                    raise ValueError(f"variable {v} is used and cannot be dropped")
                pos.append(None)
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for i, p in enumerate(pos):
                if p is not None:
                    new[p] = e[i]
            out[tuple(new)] = c
        return MultiPoly(out, variables)

    def _align(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        if self.variables == other.variables:
            return self, other
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(merged), other.with_variables(merged)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms))

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            return -1

    # ring structure --------------------------------------------------------

    def _lift(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            return other
        if _is_scalar(other):
            return MultiPoly.constant(other, self.variables)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiPoly(out, a.variables)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, c) -> "MultiPoly":
        c = _scalar(c)
        if not c:
            return MultiPoly({}, self.variables)
        return MultiPoly({e: v * c for e, v in self.terms.items()}, self.variables)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return MultiPoly(out, a.variables)

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            return self.scale(1 / _scalar(other))
        if isinstance(other, MultiPoly):
            return self.exact_divide(other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            a, b = self._align(other)
            return a.terms == b.terms
        if _is_scalar(other):
            if not other:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            used = self.used_variables()
            self._hash = hash(frozenset(self.with_variables(used).terms.items()) | {used})
        return self._hash

    # inspection ---------------------------------------------------------------

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values())) if self.terms else Fraction(0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        if not self.terms:
            return -1
        if i < 0:
            return 0
        return max(e[i] for e in self.terms)

    def min_degree_in(self, name: str) -> int:
        i = self._index(name)
        if i < 0 or not self.terms:
            return 0
        return min(e[i] for e in self.terms)

    def coeffs_in(self, name: str) -> dict[int, "MultiPoly"]:
        """Coefficients as polynomials in the remaining variables (same variable list)."""
        i = self._index(name)
        if i < 0:
            return {0: self} if self.terms else {}
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            groups.setdefault(k, {})[rest] = c
        return {k: MultiPoly(t, self.variables) for k, t in groups.items()}

    def as_univariate(self, name: str) -> list["MultiPoly"]:
        groups = self.coeffs_in(name)
        if not groups:
            return []
        zero = MultiPoly({}, self.variables)
        return [groups.get(k, zero) for k in range(max(groups) + 1)]

    def leading_coeff_in(self, name: str) -> "MultiPoly":
        groups = self.coeffs_in(name)
        if not groups:
            return MultiPoly({}, self.variables)
        return groups[max(groups)]

    def leading_term(self) -> tuple[tuple, object]:
        """Lexicographically largest exponent with its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def coefficients(self) -> list:
        return list(self.terms.values())

    def map_coefficients(self, f: Callable) -> "MultiPoly":
        return MultiPoly({e: f(c) for e, c in self.terms.items()}, self.variables)

    # calculus and substitution --------------------------------------------------

    def derivative(self, name: str) -> "MultiPoly":
        i = self._index(name)
        if i < 0:
            return MultiPoly({}, self.variables)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MultiPoly(out, self.variables)

    def evaluate(self, values: Mapping[str, object], one=Fraction(1)):
        """Evaluate with every variable bound, in any ring containing the values."""
        powers: dict = {}

        def power(name, k):
            key = (name, k)
            if key not in powers:
                if k == 0:
                    powers[key] = one
                elif k == 1:
                    powers[key] = values[name]
                else:
                    half = power(name, k // 2)
                    sq = half * half
                    powers[key] = sq * values[name] if k % 2 else sq
            return powers[key]

        total = None
        for e, c in self.terms.items():
            term = None
            for name, k in zip(self.variables, e):
                if k:
                    p = power(name, k)
                    term = p if term is None else term * p
            term = one * c if term is None else term * c
            total = term if total is None else total + term
        return total if total is not None else one * 0

    def substitute(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Replace some variables by scalars or polynomials."""
        keep = tuple(v for v in self.variables if v not in mapping)
        targets = [m for m in mapping.values() if isinstance(m, MultiPoly)]
        variables = keep
        for t in targets:
            variables = variables + tuple(v for v in t.variables if v not in variables)
        values = {}
        for v in self.variables:
            if v in mapping:
                m = mapping[v]
                values[v] = m.with_variables(variables) if isinstance(m, MultiPoly) else MultiPoly.constant(m, variables)
            else:
                values[v] = MultiPoly.var(v, variables)
        return self.evaluate(values, MultiPoly.constant(1, variables))

    def drop_unused(self, keep: Sequence[str] = ()) -> "MultiPoly":
        used = set(self.used_variables()) | set(keep)
        return self.with_variables(tuple(v for v in self.variables if v in used))

    # division -------------------------------------------------------------------

    def divmod_lex(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        """Lexicographic division; the quotient is exact when other divides self."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        a, b = self._align(other)
        lt_e, lt_c = b.leading_term()
        inv = 1 / lt_c
        rem = dict(a.terms)
        quo: dict = {}
        left: dict = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if all(x >= y for x, y in zip(e, lt_e)):
                qe = tuple(x - y for x, y in zip(e, lt_e))
                qc = c * inv
                quo[qe] = qc
                for be, bc in b.terms.items():
                    key = tuple(x + y for x, y in zip(qe, be))
                    v = rem.get(key, 0) - qc * bc
                    if v:
                        rem[key] = v
                    else:
                        rem.pop(key, None)
            else:
                left[e] = c
                del rem[e]
        return MultiPoly(quo, a.variables), MultiPoly(left, a.variables)

    def exact_divide(self, other: "MultiPoly") -> "MultiPoly":
        q, r = self.divmod_lex(other)
        if r:
            raise NotDivisible("nonzero remainder in exact division")
        return q

    def divides(self, other: "MultiPoly") -> bool:
        return not other.divmod_lex(self)[1]

    # normalization ------------------------------------------------------------------

    def rational_content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        coeffs = list(self.terms.values())
        if not all(isinstance(c, Fraction) for c in coeffs):
            return Fraction(1)
        num = 0
        den = 1
        for c in coeffs:
            num = igcd(num, c.numerator)
            den = ilcm(den, c.denominator)
        return Fraction(num, den)

    def normalized(self) -> "MultiPoly":
        """Integer-primitive form with positive lexicographic leading coefficient."""
        if not self.terms:
            return self
        c = self.rational_content()
        p = self.scale(1 / c)
        _, lead = p.leading_term()
        if isinstance(lead, Fraction) and lead < 0:
            p = -p
        return p

    def primitive_part(self, name: str | None = None) -> "MultiPoly":
        if name is None:
            return self.normalized()
        from .gcd import content_in

        return self.exact_divide(content_in(self, name)).normalized()

    def content(self, name: str | None = None):
        if name is None:
            return self.rational_content()
        from .gcd import content_in

        return content_in(self, name)

    # homogenization ---------------------------------------------------------------

    def homogenize(self, new_var: str) -> "MultiPoly":
        d = self.total_degree()
        p = self.with_variables(self.variables + (new_var,)) if new_var not in self.variables else self
        i = p.variables.index(new_var)
        out = {}
        for e, c in p.terms.items():
            e2 = list(e)
            e2[i] += d - (sum(e) - e[i])
            out[tuple(e2)] = c
        return MultiPoly(out, p.variables)

    def dehomogenize(self, name: str, value=1) -> "MultiPoly":
        p = self.substitute({name: value})
        return p.with_variables(tuple(v for v in self.variables if v != name))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    # linear changes -------------------------------------------------------------------

    def linear_change(self, matrix: Sequence[Sequence], names: Sequence[str] | None = None) -> "MultiPoly":
        """Substitute x_i -> sum_j M[i][j] x_j for the named variables."""
        names = tuple(names) if names is not None else self.variables
        if len(matrix) != len(names) or any(len(row) != len(names) for row in matrix):
            raise InvalidTransform("matrix size does not match the variable list")
        if determinant(matrix) == 0:
            raise InvalidTransform("singular coordinate change")
        variables = self.variables + tuple(v for v in names if v not in self.variables)
        gens = [MultiPoly.var(v, variables) for v in names]
        mapping = {}
        for i, name in enumerate(names):
            acc = MultiPoly({}, variables)
            for j, g in enumerate(gens):
                if matrix[i][j]:
                    acc = acc + g.scale(Fraction(matrix[i][j]))
            mapping[name] = acc
        return self.substitute(mapping).with_variables(variables)

    # output ---------------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms by descending total degree, then lexicographically."""
        return sorted(self.terms.items(), key=lambda ec: (-sum(ec[0]), tuple(-x for x in ec[0])))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)})"


def format_poly(p: MultiPoly) -> str:
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(p.variables, e) if k
        )
        if isinstance(c, Fraction):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = format_rational(a)
            else:
                body = mono if a == 1 else f"{format_rational(a)}*{mono}"
        else:
            sign = "+"
            body = f"({c})" + (f"*{mono}" if mono else "")
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def inverse_matrix(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            raise InvalidTransform("singular coordinate change")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def linear_change(f: MultiPoly, matrix: Sequence[Sequence], names: Sequence[str] | None = None) -> MultiPoly:
    return f.linear_change(matrix, names)


def inverse_linear_change(f: MultiPoly, matrix: Sequence[Sequence], names: Sequence[str] | None = None) -> MultiPoly:
    return f.linear_change(inverse_matrix(matrix), names)


def homogenize(f: MultiPoly, new_var: str) -> MultiPoly:
    return f.homogenize(new_var)


def dehomogenize(F: MultiPoly, var: str, value=1) -> MultiPoly:
    return F.dehomogenize(var, value)


def split_linear(f: MultiPoly, name: str) -> tuple[MultiPoly, MultiPoly]:
    """For f = name*H2 - H1 of degree 1 in name, return (H2, H1)."""
    if f.degree_in(name) != 1:
        raise ValueError(f"polynomial is not linear in {name}")
    groups = f.coeffs_in(name)
    zero = MultiPoly({}, f.variables)
    return groups.get(1, zero), -groups.get(0, zero)
