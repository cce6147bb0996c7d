from fractions import Fraction

import mpmath
import pytest

from conftest import curve, random_curve
from spaceasym.errors import AsymptoteError, NeedsCoordinateChange
from spaceasym.exactfield import NumberField
from spaceasym.exactfield.numberfield import AlgebraicNumber
from spaceasym import planecurve
from spaceasym.planecurve import (
    branch_degree,
    branches_convergent,
    conjugate_orbit,
    expand_branch,
    infinity_points,
    plane_asymptote,
    plane_branches,
    residual,
    residual_vanishes,
)
from spaceasym.polynomial import parse_poly
from spaceasym.spacecurve import embedding_root, project

F = Fraction
P = parse_poly


def fp_of(name):
    return project(*curve(name)).fp


def nonneg(b):
    return {e: c for e, c in b.r2.nonnegative_part().terms}


def numeric(c, root):
    if isinstance(c, AlgebraicNumber):
        return sum(mpmath.mpf(F(r).numerator) / F(r).denominator * root**i for i, r in enumerate(c.rep))
    c = F(c)
    return mpmath.mpf(c.numerator) / c.denominator


def numeric_branch_error(fp, b, z):
    """|x2_true(z) - r2(z)| where x2_true is the root of fp(z, .) nearest the series."""
    with mpmath.workdps(160):
        root = None
        if b.conjugacy_minpoly:
            m = [numeric(c, None) for c in reversed(b.conjugacy_minpoly)]
            root = mpmath.findroot(lambda x: mpmath.polyval(m, x), embedding_root(b.conjugacy_minpoly))
        z = mpmath.mpf(z)
        guess = sum(numeric(c, root) * z ** (mpmath.mpf(e.numerator) / e.denominator) for e, c in b.r2.terms)
        coeffs = {}
        for e, c in fp.terms.items():
            coeffs[e[1]] = coeffs.get(e[1], 0) + numeric(c, None) * z ** e[0]
        poly = [coeffs.get(j, 0) for j in range(max(coeffs), -1, -1)]
        roots = mpmath.polyroots(poly, maxsteps=800, extraprec=800)
        return min(abs(r - guess) for r in roots)


# ---------------------------------------------------------------- examples


def test_four_line_branches():
    bs = plane_branches(fp_of("four_lines"), order=3)
    assert [b.k for b in bs] == [1, 1, 1, 1]
    parts = sorted((sorted(nonneg(b).items()) for b in bs), key=repr)
    assert parts == sorted([[], [(0, 1)], [(0, -2), (1, 1)], [(0, 1), (1, 1)]], key=repr)
    by_part = {tuple(sorted(nonneg(b).items())): b for b in bs}
    b3 = by_part[((F(0), F(-2)), (F(1), F(1)))]
    assert b3.r2.coefficient(-1) == F(-7, 3)
    assert b3.r2.coefficient(-2) == F(-221, 27)
    b0 = by_part[()]
    assert b0.r2.coefficient(-2) == -2 and b0.r2.coefficient(-3) == 4


def test_four_line_infinity_points():
    pts = infinity_points(fp_of("four_lines"))
    assert [(p.m2, p.multiplicity) for p in pts] == [(0, 2), (1, 2)]
    assert [p.projective() for p in pts] == ["(1:0:0)", "(1:1:0)"]


def test_cylinder_ramified_branch():
    bs = plane_branches(fp_of("cylinder"), order=2)
    ram = [b for b in bs if b.k == 4]
    assert len(ram) == 1
    b = ram[0]
    assert b.r2.coefficient(F(1, 2)) == 1
    assert b.r2.coefficient(0) == F(-1, 2)
    assert b.r2.coefficient(F(-1, 4)) == 1
    assert b.r2.coefficient(F(1, 4)) == 0
    assert branch_degree(b) == 2
    assert plane_asymptote(b) == (2, [F(-1, 2), F(1)])
    assert len(conjugate_orbit(b)) == 4


def test_cubic_field_steep_branch():
    bs = plane_branches(fp_of("cubic_field"), order=2)
    assert len(bs) == 1
    b = bs[0]
    assert b.point.is_steep and b.point.exponent == 2
    assert b.conjugacy_minpoly == (F(-2), F(1), F(-4), F(1))
    lam = NumberField([-2, 1, -4, 1]).gen
    assert b.r2.coefficient(2) == lam
    assert b.r2.coefficient(0) == 4 * lam**2 / 29 - 36 * lam / 29 - F(48, 29)
    assert b.count == 3 and b.k == 1


def test_branch_counts_add_up(named_curve):
    _, (f1, f2) = named_curve
    fp = project(f1, f2).fp
    assert sum(b.count for b in plane_branches(fp)) == fp.degree_in("x2")


def test_residuals_vanish(named_curve):
    _, (f1, f2) = named_curve
    fp = project(f1, f2).fp
    for order in (0, 1, 2, 3):
        for b in plane_branches(fp, order=order):
            assert residual_vanishes(fp, b)


def test_line_gives_exact_series():
    bs = plane_branches(P("x2 - x1"), order=3)
    assert len(bs) == 1
    assert bs[0].r2.is_exact
    assert nonneg(bs[0]) == {F(1): F(1)}


def test_vertical_asymptote_rejected():
    with pytest.raises(NeedsCoordinateChange):
        plane_branches(P("x1*x2 - 1"))
    assert issubclass(NeedsCoordinateChange, AsymptoteError)


def test_plane_asymptote_examples():
    bs = plane_branches(fp_of("four_lines"))
    got = sorted(plane_asymptote(b)[1] for b in bs)
    assert got == sorted([[], [F(1)], [F(-2), F(1)], [F(1), F(1)]])


def test_conjugates_are_branches():
    fp = fp_of("cylinder")
    b = [b for b in plane_branches(fp, order=2) if b.k == 4][0]
    orbit = conjugate_orbit(b)
    for c in orbit:
        assert not residual(fp, c.r2).terms
    # the conjugates are distinct series
    assert len({repr(c.r2.terms) for c in orbit}) == 4


def test_convergent_only_with_equal_parts():
    bs = plane_branches(fp_of("four_lines"))
    assert branches_convergent(bs[0], bs[0])
    assert not branches_convergent(bs[0], bs[1])
    assert not branches_convergent(bs[2], bs[3])


def test_expand_branch_at_point():
    fp = fp_of("four_lines")
    pt = infinity_points(fp)[1]
    bs = expand_branch(fp, pt, order=1)
    assert len(bs) == 2
    assert all(b.point == pt for b in bs)


# ---------------------------------------------------------------- oracles


@pytest.mark.parametrize("name", ["four_lines", "cylinder", "cubic_field"])
def test_series_match_numeric_roots(name):
    # a wrong coefficient above the bound would make the scaled error grow with z;
    # large z keeps lower-order terms from cancelling the leading error term
    fp = fp_of(name)
    for b in plane_branches(fp, order=3):
        bound = b.r2.order_bound
        power = mpmath.mpf(bound.numerator) / bound.denominator
        scaled = [numeric_branch_error(fp, b, z) / mpmath.mpf(z) ** power for z in (10**6, 10**10)]
        assert scaled[1] < 2 * scaled[0] + mpmath.mpf(10) ** -20
        assert scaled[0] < 10**4


def test_deeper_orders_extend_shallower(named_curve):
    _, (f1, f2) = named_curve
    fp = project(f1, f2).fp
    deep = plane_branches(fp, order=5)
    for order in (0, 1, 2, 3, 4):
        for s, d in zip(plane_branches(fp, order=order), deep):
            bound = s.r2.order_bound
            if bound is None:
                assert s.r2 == d.r2
                continue
            assert s.r2.terms == d.r2.truncate(bound).terms
            assert bound < -order


def test_random_curves_prefix_stable_and_residual_free(rng):
    done = 0
    while done < 8:
        f1, f2 = random_curve(rng)
        try:
            fp = project(f1, f2).fp
            deep = plane_branches(fp, order=4)
        except AsymptoteError:
            continue
        for order in (1, 2):
            for s, d in zip(plane_branches(fp, order=order), deep):
                if s.r2.order_bound is not None:
                    assert s.r2.terms == d.r2.truncate(s.r2.order_bound).terms
        for b in deep:
            assert residual_vanishes(fp, b)
        done += 1


def test_result_independent_of_earlier_orders():
    fp = fp_of("cylinder")
    fresh = [b.r2 for b in plane_branches(fp, order=1)]
    planecurve._CLASS_CACHE.clear()
    plane_branches(fp, order=4)
    assert [b.r2 for b in plane_branches(fp, order=1)] == fresh
