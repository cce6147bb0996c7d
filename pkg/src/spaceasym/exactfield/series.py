"""Truncated Puiseux series in a variable z, expanded at z = ∞.

A truncation stores finitely many terms c·z^e together with an explicit
``order_bound`` β: every coefficient with exponent > β is exact, everything at
or below β is unknown.  ``order_bound = None`` means the stored terms are the
whole series.  Coefficients may come from any exact ring (rationals,
algebraic numbers, or polynomials in auxiliary unknowns).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Mapping

from ..errors import NeedsMoreTerms


def _frac(e) -> Fraction:
    return e if isinstance(e, Fraction) else Fraction(e)


def _max_bound(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


class PuiseuxTruncation:
    __slots__ = ("terms", "order_bound")

    def __init__(self, terms: Mapping | Iterable = (), order_bound=None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        bound = None if order_bound is None else _frac(order_bound)
        acc: dict = {}
        for e, c in items:
            e = _frac(e)
            if bound is not None and e <= bound:
                continue
            acc[e] = acc[e] + c if e in acc else c
        self.terms = tuple(sorted(((e, c) for e, c in acc.items() if c), key=lambda ec: -ec[0]))
        self.order_bound = bound

    # construction helpers -------------------------------------------------

    @classmethod
    def monomial(cls, c, e=1, order_bound=None) -> "PuiseuxTruncation":
        return cls({_frac(e): c}, order_bound)

    @classmethod
    def constant(cls, c) -> "PuiseuxTruncation":
        return cls({Fraction(0): c})

    @classmethod
    def zero(cls, order_bound=None) -> "PuiseuxTruncation":
        return cls((), order_bound)

    # inspection ------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.order_bound is None

    @property
    def ramification(self) -> int:
        return lcm(1, *(e.denominator for e, _ in self.terms))

    @property
    def leading_exponent(self):
        return self.terms[0][0] if self.terms else None

    @property
    def leading_coefficient(self):
        return self.terms[0][1] if self.terms else 0

    def coefficient(self, e):
        e = _frac(e)
        if self.order_bound is not None and e <= self.order_bound:
            raise NeedsMoreTerms(f"coefficient of z^{e} lies below the truncation bound {self.order_bound}")
        for ex, c in self.terms:
            if ex == e:
                return c
        return 0

    def as_dict(self) -> dict:
        return dict(self.terms)

    def _top(self):
        """Largest exponent that may carry a nonzero coefficient."""
        if self.terms:
            return self.terms[0][0]
        return self.order_bound

    def __bool__(self):
        return bool(self.terms) or self.order_bound is not None

    def __eq__(self, other):
        if not isinstance(other, PuiseuxTruncation):
            if other == 0:
                return not self.terms and self.order_bound is None
            return NotImplemented
        return self.terms == other.terms and self.order_bound == other.order_bound

    def __hash__(self):
        return hash((self.terms, self.order_bound))

    # ring operations --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PuiseuxTruncation):
            return other
        return PuiseuxTruncation.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        bound = _max_bound(self.order_bound, other.order_bound)
        return PuiseuxTruncation(list(self.terms) + list(other.terms), bound)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxTruncation([(e, -c) for e, c in self.terms], self.order_bound)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "PuiseuxTruncation":
        if not c:
            return PuiseuxTruncation((), self.order_bound)
        return PuiseuxTruncation([(e, x * c) for e, x in self.terms], self.order_bound)

    def mul_monomial(self, c, e) -> "PuiseuxTruncation":
        e = _frac(e)
        bound = None if self.order_bound is None else self.order_bound + e
        return PuiseuxTruncation([(x + e, y * c) for x, y in self.terms], bound)

    def __mul__(self, other):
        if not isinstance(other, PuiseuxTruncation):
            if isinstance(other, (int, Fraction)) or hasattr(other, "field") or hasattr(other, "variables"):
                return PuiseuxTruncation([(e, c * other) for e, c in self.terms], self.order_bound)
            return NotImplemented
        a, b = self, other
        if (not a.terms and a.order_bound is None) or (not b.terms and b.order_bound is None):
            return PuiseuxTruncation()
        bound = None
        if a.order_bound is not None:
            bound = a.order_bound + b._top()
        if b.order_bound is not None:
            bound = _max_bound(bound, b.order_bound + a._top())
        acc: dict = {}
        for e1, c1 in a.terms:
            for e2, c2 in b.terms:
                e = e1 + e2
                if bound is not None and e <= bound:
                    continue
                p = c1 * c2
                acc[e] = acc[e] + p if e in acc else p
        return PuiseuxTruncation(acc, bound)

    def __rmul__(self, other):
        return PuiseuxTruncation([(e, other * c) for e, c in self.terms], self.order_bound)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = PuiseuxTruncation.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, bound) -> "PuiseuxTruncation":
        """Drop every term with exponent <= bound."""
        bound = _frac(bound)
        return PuiseuxTruncation(self.terms, _max_bound(self.order_bound, bound))

    def inverse(self, bound=None) -> "PuiseuxTruncation":
        """Reciprocal series; ``bound`` limits the expansion of exact inputs."""
        if not self.terms:
            raise NeedsMoreTerms("leading term of the divisor is not known")
        e0, c0 = self.terms[0]
        inv_c = 1 / c0
        # 1/s = c0^{-1} z^{-e0} / (1 + u) with u of negative exponents
        if self.order_bound is not None:
            target = self.order_bound - 2 * e0
            bound = target if bound is None else max(bound, target)
        elif len(self.terms) == 1:
            return PuiseuxTruncation({-e0: inv_c})
        elif bound is None:
            raise NeedsMoreTerms("an exact multi-term divisor needs an explicit truncation bound")
        ubound = bound + e0  # precision needed for 1/(1+u) in relative exponents
        u = PuiseuxTruncation([(e - e0, c * inv_c) for e, c in self.terms[1:]],
                              None if self.order_bound is None else self.order_bound - e0)
        u = u.truncate(ubound) if u.order_bound is None or u.order_bound < ubound else u
        acc = PuiseuxTruncation.constant(1).truncate(ubound)
        power = PuiseuxTruncation.constant(1)
        neg_u = -u
        while True:
            power = (power * neg_u).truncate(ubound)
            if not power.terms:
                break
            acc = acc + power
        acc = acc + PuiseuxTruncation((), power.order_bound)
        return acc.mul_monomial(inv_c, -e0)

    def divide(self, other: "PuiseuxTruncation", bound=None) -> "PuiseuxTruncation":
        """self / other, truncated at ``bound`` when both inputs are exact."""
        if not other.terms:
            raise NeedsMoreTerms("leading term of the divisor is not known")
        if other.is_exact and len(other.terms) == 1:
            e0, c0 = other.terms[0]
            return self.mul_monomial(1 / c0, -e0)
        inv_bound = None
        if bound is not None:
            inv_bound = _frac(bound) - (self._top() if self._top() is not None else 0)
        elif other.is_exact and self.order_bound is not None:
            # the quotient is only known through order_bound - e0 anyway
            top = self._top() if self._top() is not None else self.order_bound
            inv_bound = self.order_bound - other.terms[0][0] - top
        result = self * other.inverse(inv_bound)
        if bound is not None:
            result = result.truncate(bound)
        return result

    def __truediv__(self, other):
        if isinstance(other, PuiseuxTruncation):
            return self.divide(other)
        return PuiseuxTruncation([(e, c / other) for e, c in self.terms], self.order_bound)

    # transformations -----------------------------------------------------------

    def substitute_power(self, k: int) -> "PuiseuxTruncation":
        """Replace z by t^k."""
        if k < 1:
            raise ValueError("k must be a positive integer")
        bound = None if self.order_bound is None else self.order_bound * k
        return PuiseuxTruncation([(e * k, c) for e, c in self.terms], bound)

    def map_coefficients(self, f: Callable) -> "PuiseuxTruncation":
        return PuiseuxTruncation([(e, f(c)) for e, c in self.terms], self.order_bound)

    def nonnegative_part(self) -> "PuiseuxTruncation":
        """The exact terms with exponent >= 0; fails if any of them is unknown."""
        if self.order_bound is not None and self.order_bound >= 0:
            raise NeedsMoreTerms("non-negative exponents are not all known")
        return PuiseuxTruncation([(e, c) for e, c in self.terms if e >= 0])

    def conjugate(self, root_of_unity, n: int) -> "PuiseuxTruncation":
        """Replace z^{1/n} by ε z^{1/n} for the given n-th root of unity ε."""
        out = []
        for e, c in self.terms:
            power = int(e * n) % n
            out.append((e, c * root_of_unity ** power if power else c))
        return PuiseuxTruncation(out, self.order_bound)

    def evaluate(self, z, coefficient_value: Callable = complex, power: Callable | None = None):
        """Numeric value of the stored terms at z (principal branch for roots)."""
        total = 0
        for e, c in self.terms:
            zp = power(z, e) if power is not None else z ** float(e)
            total += coefficient_value(c) * zp
        return total

    def __repr__(self):
        return f"PuiseuxTruncation({format_series(self)})"

    def __str__(self):
        return format_series(self)


def format_exponent(var: str, e: Fraction) -> str:
    if e == 1:
        return var
    if e.denominator == 1:
        return f"{var}^{e.numerator}"
    return f"{var}^({e.numerator}/{e.denominator})"


def format_coefficient(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def format_series(s: PuiseuxTruncation, var: str = "z") -> str:
    parts = []
    for e, c in s.terms:
        is_rational = isinstance(c, (int, Fraction)) or (hasattr(c, "is_rational") and c.is_rational())
        if is_rational:
            value = Fraction(c) if isinstance(c, (int, Fraction)) else c.rational_value()
            sign = "-" if value < 0 else "+"
            mag = abs(value)
            coeff = format_coefficient(mag)
            if e == 0:
                body = coeff
            else:
                body = format_exponent(var, e) if mag == 1 else f"{coeff}*{format_exponent(var, e)}"
        else:
            sign = "+"
            body = f"({format_coefficient(c)})" + ("" if e == 0 else f"*{format_exponent(var, e)}")
        parts.append((sign, body))
    if not parts:
        text = "0"
    else:
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
    if s.order_bound is not None:
        text += f" + O({format_exponent(var, s.order_bound)})" if s.order_bound != 0 else " + O(1)"
    return text
