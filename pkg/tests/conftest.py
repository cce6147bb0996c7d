import random
from fractions import Fraction

import pytest

from spaceasym.polynomial import MultiPoly, parse_poly

# Example curves used across the suite, keyed by a short name.
CURVES = {
    "four_lines": (
        "-x3^2 + 2*x1*x2 + x1*x3 - x2 + 2",
        "x3 - x1*x2 + x2^2",
    ),
    "cylinder": (
        "x1*x2^4 - x2^5 - 2*x1^2*x2^2 + 4*x1*x2^3 - 2*x2^4 + x1^3 - 3*x1^2*x2"
        " + 3*x1*x2^2 - x2^3 - 4*x1*x2 + 4*x2^2 - 1",
        "x1^2*x2 + 2*x1*x2*x3 - x2^2*x3 + x2^2 + x1 - x2 + x3",
    ),
    "cubic_field": (
        "2*x1^3 + x1*x3^2 + x3^3 + 4*x3",
        "-x1^2 - x3^2 + x2",
    ),
}

SPACE = ("x1", "x2", "x3")


def curve(name):
    a, b = CURVES[name]
    return parse_poly(a), parse_poly(b)


@pytest.fixture(params=sorted(CURVES))
def named_curve(request):
    return request.param, curve(request.param)


def random_poly(rng, degree, variables=SPACE, use=None, nterms=4, coeffs=(-3, -2, -1, 1, 2, 3)):
    """Random sparse polynomial with at most ``nterms`` monomials of total degree <= degree."""
    use = use or variables
    n = len(variables)
    mons = []

    def walk(prefix, left):
        if len(prefix) == n:
            mons.append(tuple(prefix))
            return
        name = variables[len(prefix)]
        top = left if name in use else 0
        for k in range(top + 1):
            walk(prefix + [k], left - k)

    walk([], degree)
    terms = {m: Fraction(rng.choice(coeffs)) for m in rng.sample(mons, min(nterms, len(mons)))}
    return MultiPoly(terms, variables)


def random_curve(rng):
    """f1 of degree <= 3, f2 = x3*a(x1, x2) - b(x1, x2) of total degree <= 4."""
    f1 = random_poly(rng, rng.choice([2, 3]), nterms=rng.randint(3, 5))
    a = random_poly(rng, rng.choice([0, 1, 2]), use=("x1", "x2"), nterms=rng.randint(1, 2))
    b = random_poly(rng, rng.choice([1, 2, 3]), use=("x1", "x2"), nterms=rng.randint(2, 4))
    return f1, MultiPoly.var("x3", SPACE) * a - b


def random_graph_curve(rng):
    """x3 = p(x1, x2) over a random plane curve: f1 free of x3, f2 = x3 - p."""
    while True:
        f1 = random_poly(rng, rng.choice([2, 3]), use=("x1", "x2"), nterms=rng.randint(3, 5))
        if f1.degree_in("x2") >= 1 and f1.degree_in("x1") >= 1:
            break
    p = random_poly(rng, rng.choice([1, 2]), use=("x1", "x2"), nterms=rng.randint(1, 3))
    return f1, MultiPoly.var("x3", SPACE) - p


@pytest.fixture
def rng():
    return random.Random(20240611)
