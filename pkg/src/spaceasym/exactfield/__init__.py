"""Exact scalars (rationals and algebraic numbers) and truncated Puiseux series."""

from fractions import Fraction as Rational

from . import upoly
from .numberfield import (
    AlgebraicNumber,
    Embedding,
    NumberField,
    adjoin_root,
    cyclotomic,
    factor_over,
    factor_rational,
    field_degree,
    field_of,
    format_rational,
    format_upoly,
    nth_root,
    sort_key,
)
from .series import PuiseuxTruncation, format_series


def algebraic_add(a, b):
    return a + b


def algebraic_mul(a, b):
    return a * b


def algebraic_inv(a):
    if isinstance(a, AlgebraicNumber):
        return a.inverse()
    if not a:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Rational(a)


def series_add(s: PuiseuxTruncation, t: PuiseuxTruncation) -> PuiseuxTruncation:
    return s + t


def series_mul(s: PuiseuxTruncation, t: PuiseuxTruncation) -> PuiseuxTruncation:
    return s * t


def series_truncate(s: PuiseuxTruncation, bound) -> PuiseuxTruncation:
    return s.truncate(bound)


def substitute_power(s: PuiseuxTruncation, k: int) -> PuiseuxTruncation:
    return s.substitute_power(k)


__all__ = [
    "AlgebraicNumber",
    "Embedding",
    "NumberField",
    "PuiseuxTruncation",
    "Rational",
    "adjoin_root",
    "algebraic_add",
    "algebraic_inv",
    "algebraic_mul",
    "cyclotomic",
    "factor_over",
    "factor_rational",
    "field_degree",
    "field_of",
    "format_rational",
    "format_series",
    "format_upoly",
    "nth_root",
    "series_add",
    "series_mul",
    "series_truncate",
    "sort_key",
    "substitute_power",
    "upoly",
]
