"""Simple algebraic extensions Q(λ) = Q[x]/(m) and factorization over them.

Elements are residues modulo an irreducible monic m.  Factoring over Q is
delegated to sympy; factoring over Q(λ) and building primitive elements for
towers of extensions use Trager's norm method on top of it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import count
from typing import Sequence

import sympy

from ..errors import IncompatibleExtension, InternalInconsistency, ReducibleModulus
from . import upoly

Scalar = object  # Fraction | AlgebraicNumber


@lru_cache(maxsize=4096)
def _factor_rational_cached(coeffs: tuple) -> tuple:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        out.append((tuple(upoly.monic(cs)), mult))
    out.sort(key=lambda fm: (len(fm[0]), fm[0], fm[1]))
    return tuple(out)


def factor_rational(p: Sequence) -> list[tuple[list, int]]:
    """Monic irreducible factors of p over Q with multiplicities, in a fixed order."""
    p = upoly.trim(p)
    if upoly.degree(p) < 1:
        return []
    return [(list(f), m) for f, m in _factor_rational_cached(tuple(p))]


class NumberField:
    """The field Q[x]/(m) for an irreducible monic m of degree >= 2."""

    __slots__ = ("modulus", "degree", "_table", "_hash", "__weakref__")
    _registry: dict = {}

    def __new__(cls, minpoly: Sequence, check: bool = True):
        m = tuple(upoly.monic(upoly.trim(minpoly)))
        cached = cls._registry.get(m)
        if cached is not None:
            return cached
        if len(m) < 3:
            raise ValueError("an extension needs a minimal polynomial of degree >= 2")
        if check:
            facs = factor_rational(m)
            if len(facs) != 1 or facs[0][1] != 1:
                raise ReducibleModulus(f"{list(m)} is reducible over Q")
        self = object.__new__(cls)
        self.modulus = m
        self.degree = len(m) - 1
        self._hash = hash(("NumberField", m))
        self._table = self._reduction_table()
        cls._registry[m] = self
        return self

    def _reduction_table(self) -> list[list[Fraction]]:
        # x^(d+i) mod m for i = 0 .. d-2, as coefficient rows of length d
        d = self.degree
        row = [-c for c in self.modulus[:-1]]
        table = [row]
        for _ in range(d - 2):
            prev = table[-1]
            nxt = [Fraction(0)] + prev[:-1]
            top = prev[-1]
            if top:
                nxt = [a + top * b for a, b in zip(nxt, row)]
            table.append(nxt)
        return table

    def __eq__(self, other):
        return self is other or (isinstance(other, NumberField) and self.modulus == other.modulus)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"NumberField({format_upoly(self.modulus, 'λ')})"

    @property
    def gen(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, (Fraction(0), Fraction(1)))

    def __call__(self, rep: Sequence) -> "AlgebraicNumber":
        return AlgebraicNumber(self, rep)

    def reduce(self, coeffs: Sequence) -> tuple:
        d = self.degree
        low = list(coeffs[:d]) + [Fraction(0)] * max(0, d - len(coeffs))
        for i, c in enumerate(coeffs[d:]):
            if c:
                for j, t in enumerate(self._table[i]):
                    if t:
                        low[j] += c * t
        while low and not low[-1]:
            low.pop()
        return tuple(low)

    def reduce_poly(self, p: Sequence) -> tuple:
        """Reduce an arbitrary-degree polynomial in the generator."""
        p = list(p)
        if len(p) <= 2 * self.degree - 1:
            return self.reduce(p)
        return tuple(upoly.rem(p, list(self.modulus)))


class AlgebraicNumber:
    """A residue class modulo the field's minimal polynomial."""

    __slots__ = ("field", "rep", "_hash")

    def __init__(self, field: NumberField, rep: Sequence):
        self.field = field
        rep = [Fraction(c) for c in rep]
        if len(rep) >= field.degree:
            self.rep = field.reduce_poly(rep)
        else:
            while rep and not rep[-1]:
                rep.pop()
            self.rep = tuple(rep)
        self._hash = None

    @property
    def minpoly(self) -> tuple:
        return self.field.modulus

    def is_rational(self) -> bool:
        return len(self.rep) <= 1

    def rational_value(self) -> Fraction:
        if len(self.rep) > 1:
            raise ValueError("not a rational number")
        return self.rep[0] if self.rep else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field and other.field != self.field:
                raise IncompatibleExtension("operands belong to different extensions")
            return other.rep
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) if other else ()
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.rep, o
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return AlgebraicNumber(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, [-c for c in self.rep])

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + AlgebraicNumber(self.field, [-c for c in o])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicNumber(self.field, o) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.rep, o
        if not a or not b:
            return AlgebraicNumber(self.field, ())
        if len(b) == 1:
            return AlgebraicNumber(self.field, [c * b[0] for c in a])
        if len(a) == 1:
            return AlgebraicNumber(self.field, [c * a[0] for c in b])
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return AlgebraicNumber(self.field, self.field.reduce(out))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if not self.rep:
            raise ZeroDivisionError("inverse of zero in an algebraic extension")
        if len(self.rep) == 1:
            return AlgebraicNumber(self.field, (1 / self.rep[0],))
        g, s, _ = upoly.xgcd(list(self.rep), list(self.field.modulus))
        if len(g) != 1:
            raise InternalInconsistency("minimal polynomial is not irreducible")
        return AlgebraicNumber(self.field, s)

    def __truediv__(self, other):
        if isinstance(other, AlgebraicNumber):
            self._coerce(other)
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return AlgebraicNumber(self.field, [c / other for c in self.rep])
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self
        if n < 0:
            base, n = self.inverse(), -n
        result = AlgebraicNumber(self.field, (Fraction(1),))
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.rep)

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, (int, Fraction)):
            return self.rep == ((Fraction(other),) if other else ())
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if len(self.rep) <= 1:
                self._hash = hash(self.rep[0] if self.rep else Fraction(0))
            else:
                self._hash = hash((self.field, self.rep))
        return self._hash

    def __repr__(self):
        return f"AlgebraicNumber({format_upoly(self.rep, 'λ')} mod {format_upoly(self.field.modulus, 'λ')})"

    def __str__(self):
        return format_upoly(self.rep, "λ")


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_upoly(coeffs: Sequence, var: str) -> str:
    """Human-readable form, highest degree first."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = format_rational(a)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            body = mon if a == 1 else f"{format_rational(a)}*{mon}"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def field_of(values) -> NumberField | None:
    """The common extension of a collection of scalars, or None for Q."""
    found = None
    for v in values:
        if isinstance(v, AlgebraicNumber):
            if found is None:
                found = v.field
            elif v.field != found:
                raise IncompatibleExtension("scalars from different extensions")
    return found


def field_degree(K: NumberField | None) -> int:
    return 1 if K is None else K.degree


class Embedding:
    """Field homomorphism K -> L fixed by the image of K's generator."""

    def __init__(self, source: NumberField | None, target: NumberField | None, image=None):
        self.source = source
        self.target = target
        self.image = image

    def __call__(self, x):
        if isinstance(x, AlgebraicNumber):
            if self.source is None or x.field != self.source:
                raise IncompatibleExtension("element is not in the embedding's source field")
            if self.source == self.target:
                return x
            acc = Fraction(0)
            for c in reversed(x.rep):
                acc = acc * self.image + c
            return acc
        return Fraction(x)

    def compose(self, after: "Embedding") -> "Embedding":
        """Apply self, then ``after``."""
        if self.source is None:
            return Embedding(None, after.target)
        return Embedding(self.source, after.target, after(self.image))

    @staticmethod
    def identity(K: NumberField | None) -> "Embedding":
        return Embedding(K, K, K.gen if K is not None else None)


def _gen_poly(x, K: NumberField) -> list[Fraction]:
    """Representation of a K-scalar as a polynomial in K's generator."""
    if isinstance(x, AlgebraicNumber):
        return list(x.rep)
    return upoly.trim([x])


def norm_poly(K: NumberField, p: Sequence) -> list[Fraction]:
    """Res_λ(m(λ), p(λ, y)) for p with coefficients in K, as a polynomial in y over Q."""
    reps = [_gen_poly(c, K) for c in p]
    n = K.degree * upoly.degree(p)
    xs = [Fraction(i) for i in range(n + 1)]
    ys = []
    m = list(K.modulus)
    for x0 in xs:
        acc: list = []
        power = Fraction(1)
        for rep in reps:
            if rep:
                acc = upoly.add(acc, upoly.scale(rep, power))
            power *= x0
        ys.append(upoly.resultant(m, acc))
    return upoly.interpolate(xs, ys)


def _shifts():
    yield 0
    for s in count(1):
        yield s
        yield -s


def _embed_poly(p: Sequence, emb) -> list:
    return upoly.trim([emb(c) for c in p])


def _squarefree_over(K: NumberField | None, p: Sequence) -> list[tuple[list, int]]:
    return upoly.squarefree_decomposition(p)


def factor_over(K: NumberField | None, p: Sequence) -> list[tuple[list, int]]:
    """Monic irreducible factors of p over K with multiplicities."""
    p = upoly.trim(p)
    if K is None:
        if any(isinstance(c, AlgebraicNumber) for c in p):
            p = [c.rational_value() if isinstance(c, AlgebraicNumber) else c for c in p]
        return factor_rational(p)
    p = [c if isinstance(c, AlgebraicNumber) else K([c]) for c in p]
    out = []
    theta = K.gen
    for part, mult in _squarefree_over(K, p):
        if upoly.degree(part) == 1:
            out.append((part, mult))
            continue
        for s in _shifts():
            shifted = upoly.taylor_shift(part, -s * theta)
            N = norm_poly(K, shifted)
            if upoly.is_squarefree(N):
                break
        for Ni, _ in factor_rational(N):
            g = upoly.gcd(shifted, [K([c]) for c in Ni])
            if upoly.degree(g) >= 1:
                out.append((upoly.monic(upoly.taylor_shift(g, s * theta)), mult))
    return out


def adjoin_root(K: NumberField | None, psi: Sequence):
    """Adjoin a root ξ of the K-irreducible polynomial psi.

    Returns (L, embedding K -> L, ξ in L) with L a simple extension of Q.
    """
    psi = upoly.monic(upoly.trim(psi))
    if upoly.degree(psi) == 1:
        return K, Embedding.identity(K), -psi[0]
    if K is None:
        rational = [c.rational_value() if isinstance(c, AlgebraicNumber) else c for c in psi]
        L = NumberField(rational, check=False)
        return L, Embedding(None, L), L.gen
    psi = [c if isinstance(c, AlgebraicNumber) else K([c]) for c in psi]
    theta = K.gen
    for s in _shifts():
        shifted = upoly.taylor_shift(psi, -s * theta)
        N = norm_poly(K, shifted)
        if not upoly.is_squarefree(N):
            continue
        L = NumberField(N, check=False)
        eta = L.gen
        # shifted(λ := X, y := η) as a polynomial in X over L
        cols: dict[int, object] = {}
        power = L([1])
        for coeff in shifted:
            for a, c in enumerate(_gen_poly(coeff, K)):
                if c:
                    cols[a] = cols.get(a, Fraction(0)) + power * c
            power = power * eta
        G = upoly.trim([cols.get(a, Fraction(0)) for a in range(max(cols) + 1)]) if cols else []
        g = upoly.gcd([L([c]) for c in K.modulus], G)
        if upoly.degree(g) != 1:
            continue
        theta_L = -g[0]
        emb = Embedding(K, L, theta_L)
        return L, emb, eta - s * theta_L
    raise InternalInconsistency("no primitive element found")


@lru_cache(maxsize=64)
def cyclotomic(n: int) -> tuple:
    """The n-th cyclotomic polynomial over Q."""
    p = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            p = upoly.quo(p, list(cyclotomic(d)))
    return tuple(p)


def nth_root(K: NumberField | None, a, n: int, prefer_positive: bool = True):
    """A root ρ of X^n = a, in K when possible, otherwise in an extension.

    Returns (L, embedding K -> L, ρ).
    """
    a = Fraction(a) if isinstance(a, int) else a
    if n == 1:
        return K, Embedding.identity(K), a
    target = [-a] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    factors = factor_over(K, target)
    linear = [-f[0] for f, _ in factors if upoly.degree(f) == 1]
    if linear:
        if prefer_positive:
            rational = [r for r in linear if not isinstance(r, AlgebraicNumber) or r.is_rational()]
            rational = [r.rational_value() if isinstance(r, AlgebraicNumber) else r for r in rational]
            positive = sorted(r for r in rational if r > 0)
            if positive:
                return K, Embedding.identity(K), positive[0]
        return K, Embedding.identity(K), linear[0]
    factors.sort(key=lambda fm: upoly.degree(fm[0]))
    return adjoin_root(K, factors[0][0])


def sort_key(x) -> tuple:
    """Total order on scalars used for deterministic output."""
    if isinstance(x, AlgebraicNumber):
        return (x.field.modulus, x.rep)
    return ((), (Fraction(x),) if x else ())
