from fractions import Fraction

import pytest
import sympy

from conftest import curve, random_curve, random_graph_curve
from oracles import lambda_oracle, minpoly_expr, parse_lambda, poly_to_sympy, proportional_mod, reduce_mod
from spaceasym.errors import AsymptoteError, InternalInconsistency, NotACurve
from spaceasym.exactfield import NumberField
from spaceasym.planecurve import plane_branches, residual_vanishes
from spaceasym.polynomial import parse_poly
from spaceasym.spacecurve import (
    AsymptoteParam,
    LambdaSystem,
    check_triangular,
    compute_asymptotes,
    determine_truncation_params,
    eliminate_lambda,
    extend_branch,
    lambda_coefficients,
    lift_branch,
    make_proper,
    project,
    residual_after_solving,
    solve_triangular,
    space_asymptotes_basic,
    space_asymptotes_improved,
    space_residuals,
    substitute_parametrization,
    verify_convergence,
)

F = Fraction
P = parse_poly
M3 = NumberField([-2, 1, -4, 1])
LAMBDA = M3.gen


def branches(name, order=2):
    proj = project(*curve(name))
    return proj, plane_branches(proj.fp, order=order)


def branch_by_part(name, part):
    """The branch whose r2 has the given non-negative part {exponent: coeff}."""
    proj, bs = branches(name)
    for b in bs:
        if dict(b.r2.nonnegative_part().terms) == part:
            return proj, b
    raise KeyError(part)


def sym_lambda(S):
    return [poly_to_sympy(c, S.unknowns) for c in S.coefficients]


# ---------------------------------------------------------------- projection and lift


def test_four_line_projection_and_lift():
    proj = project(*curve("four_lines"))
    assert proj.transform is None
    assert proj.fp.normalized() == P(
        "-x1^2*x2^2 + 2*x1*x2^3 - x2^4 + x1^2*x2 - x1*x2^2 + 2*x1*x2 - x2 + 2"
    ).normalized()
    h = proj.lift.h1.with_variables(("x1", "x2", "x3"))
    h2 = proj.lift.h2.with_variables(("x1", "x2", "x3"))
    assert h2.is_constant()
    assert h * (1 / h2.constant_value()) == P("x1*x2 - x2^2")


def test_cubic_field_lift():
    proj = project(*curve("cubic_field"))
    assert proj.transform is None
    f3 = proj.lift.f3
    expected = P("(-x1^2 + x2 + 4)*x3 + x1^3 + x1*x2")
    ratio = f3.leading_term()[1] / expected.leading_term()[1]
    assert f3 == expected * ratio


def test_common_factor_rejected():
    with pytest.raises(NotACurve):
        project(P("(x1 - x3)*(x2 + 1)"), P("(x1 - x3)*x2"))


def test_lifted_branch_values():
    proj, b = branch_by_part("four_lines", {F(1): F(1), F(0): F(-2)})
    sb = lift_branch(b, proj.lift, order=1)
    assert [(e, c) for e, c in sb.r3.terms if e >= -1] == [(1, 2), (0, F(-5, 3)), (-1, F(-31, 27))]
    proj, b = branch_by_part("four_lines", {})
    sb = lift_branch(b, proj.lift, order=3)
    assert [(e, c) for e, c in sb.r3.terms if e >= -3] == [(-1, -2), (-2, 4), (-3, -6)]
    assert sb.point == (0, 0)


def test_space_residuals_vanish(named_curve):
    _, (f1, f2) = named_curve
    proj = project(f1, f2)
    for b in plane_branches(proj.fp, order=2):
        sb = lift_branch(b, proj.lift, order=2)
        for r in space_residuals([proj.f1, proj.f2], sb):
            assert not r.terms


# ---------------------------------------------------------------- Λ-systems


@pytest.mark.parametrize(
    "part,expected",
    [
        ({F(1): F(1), F(0): F(-2)}, ["b0 - 2", "b1 + 5/3"]),
        ({F(1): F(1), F(0): F(1)}, ["b0 + 1", "b1 + 1/3"]),
        ({}, ["b0", "b1"]),
        ({F(0): F(1)}, ["b0 - 1", "b1 - 2"]),
    ],
)
def test_four_line_lambda_pairs(part, expected):
    proj, b = branch_by_part("four_lines", part)
    S = lambda_coefficients(proj.lift, b)
    assert (S.k, S.D, S.n_used) == (1, 1, 1)
    assert determine_truncation_params(proj.lift, b) == (1, 1)
    assert [sympy.expand(x) for x in sym_lambda(S)] == [parse_lambda(e) for e in expected]


def test_cylinder_lambda_systems():
    proj, b1 = branch_by_part("cylinder", {F(1): F(1)})
    S1 = lambda_coefficients(proj.lift, b1)
    assert determine_truncation_params(proj.lift, b1) == (0, 0)
    assert [sympy.expand(x) for x in sym_lambda(S1)] == [parse_lambda("b0 + 1"), parse_lambda("b1 + 1")]
    assert solve_triangular(S1) == [-1, -1]

    proj, b2 = branch_by_part("cylinder", {F(1, 2): F(1), F(0): F(-1, 2)})
    S2 = lambda_coefficients(proj.lift, b2)
    assert determine_truncation_params(proj.lift, b2) == (2, 2)
    assert (S2.k, S2.D) == (4, 4)
    # the reference values are 4 times these for Λ0..Λ2
    reference = ["8*b0 + 4", "8*b1", "8*b2 - 8*b0 - 2"]
    for ours, theirs in zip(sym_lambda(S2), reference):
        assert sympy.expand(4 * ours - parse_lambda(theirs)) == 0
    sol = solve_triangular(S2)
    assert sol == [F(-1, 2), 0, F(-1, 4), 0, 0]


def test_cubic_field_lambda_system():
    proj, bs = branches("cubic_field")
    S = lambda_coefficients(proj.lift, bs[0])
    assert (S.k, S.D) == (1, 2)
    assert S.rho == LAMBDA - 1
    m = minpoly_expr(M3.modulus)
    reference = [
        "29*b0*λ - 29*b0",
        "29*b1*λ - 29*b1 + 29*λ + 29",
        "4*b0*λ^2 - 36*b0*λ + 29*b2*λ + 68*b0 - 29*b2",
    ]
    for ours, theirs in zip(sym_lambda(S), reference):
        assert reduce_mod(29 * ours - parse_lambda(theirs.replace("^", "**")), m) == 0
    sol = solve_triangular(S)
    assert sol[0] == 0 and sol[2] == 0
    assert sol[1] == -(LAMBDA + 1) / (LAMBDA - 1)
    assert sol[1] == -LAMBDA**2 / 2 + 3 * LAMBDA / 2


@pytest.mark.parametrize("name", ["four_lines", "cylinder", "cubic_field"])
def test_lambda_matches_sympy_numerator(name):
    proj, bs = branches(name)
    for b in bs:
        S = lambda_coefficients(proj.lift, b)
        x2 = b.deepen(F(S.n_used, S.k)).r2.substitute_power(S.k)
        x2_terms = [(e, c) for e, c in x2.terms if e >= -S.n_used]
        theirs, bsyms = lambda_oracle(proj.lift.h1, proj.lift.h2, S.k, x2_terms, S.D, S.size, b.conjugacy_minpoly)
        ours = [x.subs({sympy.Symbol(n): bsyms[i] for i, n in enumerate(S.unknowns)}) for x in sym_lambda(S)]
        assert proportional_mod(ours, theirs, minpoly_expr(b.conjugacy_minpoly), bsyms[0]) is not None


def test_extend_branch_matches_lift():
    proj, b = branch_by_part("four_lines", {F(1): F(1), F(0): F(-2)})
    sb = extend_branch(proj.lift, b, 1)
    assert sb.r3.coefficient(-1) == F(-31, 27)
    sb3 = extend_branch(proj.lift, b, 3)
    lifted = lift_branch(b, proj.lift, order=3)
    assert sb3.r3.terms == lifted.r3.truncate(sb3.r3.order_bound).terms


def test_triangularity_violation_detected():
    names = ("b0", "b1")
    bad = LambdaSystem(1, 1, (P("b0 + b1", names), P("b1", names)), F(1), 2, 1, 1, 1, names)
    with pytest.raises(InternalInconsistency):
        check_triangular(bad)
    zero_rho = LambdaSystem(1, 1, (P("1", names), P("1", names)), F(0), 2, 1, 1, 1, names)
    with pytest.raises(InternalInconsistency):
        check_triangular(zero_rho)


# ---------------------------------------------------------------- properties on examples and random curves


def systems_for(f1, f2):
    proj = project(f1, f2)
    for b in plane_branches(proj.fp, order=2):
        yield proj, b, lambda_coefficients(proj.lift, b)


def random_systems(rng, count):
    done = 0
    while done < count:
        f1, f2 = random_curve(rng)
        try:
            found = list(systems_for(f1, f2))
        except AsymptoteError:
            continue
        yield from found
        done += 1


def check_system(proj, b, S):
    check_triangular(S)
    assert S.rho != 0
    sol = solve_triangular(S)
    res = residual_after_solving(proj.lift, b, S, sol)
    # Λ0..Λ_{size-1} vanish, so the top surviving exponent drops by at least size
    assert not res.terms or res.leading_exponent <= S.top - S.size
    sb = lift_branch(b, proj.lift, order=0)
    # b0 multiplies t^D, i.e. z^(D/k); for D = k it is the slope m3
    assert sb.r3.coefficient(F(S.D, S.k)) == sol[0]
    if S.D == S.k and sb.point[0] is not None:
        assert sb.point[1] == sol[0]


def test_properties_on_examples(named_curve):
    _, (f1, f2) = named_curve
    for proj, b, S in systems_for(f1, f2):
        check_system(proj, b, S)


def test_properties_on_random_curves(rng):
    for proj, b, S in random_systems(rng, 8):
        check_system(proj, b, S)
        assert residual_vanishes(proj.fp, b)


def test_extend_branch_agrees_with_lift_on_graph_curves(rng):
    done = 0
    while done < 20:
        f1, f2 = random_graph_curve(rng)
        try:
            proj = project(f1, f2)
            bs = plane_branches(proj.fp, order=2)
        except AsymptoteError:
            continue
        for b in bs:
            ext = extend_branch(proj.lift, b, 2)
            lifted = lift_branch(b, proj.lift, order=3)
            assert ext.r3.terms == lifted.r3.truncate(ext.r3.order_bound).terms
        done += 1


# ---------------------------------------------------------------- asymptotes


def comps(asymptotes):
    return sorted(repr(a.components) for a in asymptotes)


def test_make_proper_examples():
    a = AsymptoteParam.standard(4, [F(-1, 2), 0, 1], [0, 0, F(-1, 4), 0, F(-1, 2)])
    p = make_proper(a)
    assert p.proper and p.repaired_from == 4
    assert p.components == ((0, 0, 1), (F(-1, 2), 1), (0, F(-1, 4), F(-1, 2)))
    q = make_proper(AsymptoteParam.standard(1, [1, 1], [0]))
    assert q.repaired_from is None and q.k == 1


def test_make_proper_idempotent(rng):
    for _ in range(30):
        k = rng.choice([1, 2, 3, 4, 6])
        d = rng.choice([1, 2, 3])
        q2 = [F(rng.randint(-3, 3)) if i % d == 0 else 0 for i in range(rng.randint(1, 7))]
        q3 = [F(rng.randint(-3, 3)) if i % d == 0 else 0 for i in range(rng.randint(1, 7))]
        p = make_proper(AsymptoteParam.standard(k, q2, q3))
        assert make_proper(p).components == p.components
        assert p.exponent_gcd() == 1


def test_four_line_asymptotes_both_methods():
    expected = [
        AsymptoteParam.standard(1, [], []),
        AsymptoteParam.standard(1, [1], [2, 1]),
        AsymptoteParam.standard(1, [-2, 1], [F(-5, 3), 2]),
        AsymptoteParam.standard(1, [1, 1], [F(-1, 3), -1]),
    ]
    f1, f2 = curve("four_lines")
    assert comps(space_asymptotes_basic(f1, f2)) == comps(expected)
    assert comps(space_asymptotes_improved(f1, f2)) == comps(expected)


def test_cylinder_asymptotes():
    f1, f2 = curve("cylinder")
    for method in ("basic", "improved"):
        result = compute_asymptotes(f1, f2, method)
        got = {a.components: a for a in result.original_asymptotes()}
        ram = got[((0, 0, 1), (F(-1, 2), 1), (0, F(-1, 4), F(-1, 2)))]
        assert ram.repaired_from == 4
        assert ((0, 1), (0, 1), (-1, -1)) in got


def test_cubic_field_asymptote_and_implicit_equations():
    f1, f2 = curve("cubic_field")
    (a,) = space_asymptotes_improved(f1, f2)
    assert a.components[0] == (0, 1)
    assert a.components[1] == (4 * LAMBDA**2 / 29 - 36 * LAMBDA / 29 - F(48, 29), 0, LAMBDA)
    assert a.components[2] == (0, -(LAMBDA + 1) / (LAMBDA - 1))
    assert a.minpoly == M3.modulus
    g1, g2 = eliminate_lambda(a)
    reference_g1 = P(
        "48778*x1^6 - 24389*x1^4*x2 - 195112*x1^4 + 97556*x1^2*x2^2 + 390224*x1^2*x2 - 24389*x2^3"
        " + 538240*x1^2 - 195112*x2^2 - 484416*x2 - 430592"
    )
    assert g1.normalized() == reference_g1.normalized()
    assert g2.normalized() == P("8*x1^3 + 4*x1*x3^2 + 4*x3^3").normalized()
    assert substitute_parametrization(g1, a) == []
    assert substitute_parametrization(g2, a) == []


def test_eliminate_rational_asymptote():
    a = AsymptoteParam.standard(2, [F(-1, 2), 1], [0, F(-1, 4), F(-1, 2)])
    g1, g2 = eliminate_lambda(a)
    assert substitute_parametrization(g1, a) == []
    assert substitute_parametrization(g2, a) == []
    assert g1.degree_in("x2") == 2 and g1.degree_in("x1") == 1


def test_line_curve_has_itself_as_asymptote():
    f1, f2 = P("x2 - x1"), P("x3 - x1")
    for method in ("basic", "improved"):
        (a,) = compute_asymptotes(f1, f2, method).original_asymptotes()
        assert a.components == ((0, 1), (0, 1), (0, 1))


def test_transform_recorded_for_vertical_direction():
    f1, f2 = P("x1*x2 - 1"), P("x3 - x2")
    result = compute_asymptotes(f1, f2, "improved")
    assert result.transform is not None
    basic = compute_asymptotes(f1, f2, "basic")
    assert comps(result.original_asymptotes()) == comps(basic.original_asymptotes())
    # the asymptotes are the lines (s, 0, 0) and (0, s, s), in some parametrization
    directions = set()
    for a in result.original_asymptotes():
        assert all(len(c) <= 2 and (not c or c[0] == 0) for c in a.components)
        slope = [c[1] if len(c) == 2 else 0 for c in a.components]
        directions.add(tuple(x / next(v for v in slope if v) for x in slope))
    assert directions == {(1, 0, 0), (0, 1, 1)}


def test_parallel_matches_serial():
    f1, f2 = curve("four_lines")
    a = compute_asymptotes(f1, f2, "improved", parallel=True)
    b = compute_asymptotes(f1, f2, "improved")
    assert comps(a.asymptotes) == comps(b.asymptotes)
    assert a.branch_map == b.branch_map


# ---------------------------------------------------------------- convergence


def test_convergence_on_examples(named_curve):
    _, (f1, f2) = named_curve
    result = compute_asymptotes(f1, f2, "improved")
    for i, rec in enumerate(result.records):
        sb = lift_branch(rec.plane, result.projection.lift, order=3)
        report = verify_convergence(result.asymptotes[result.branch_map[i]], sb)
        assert report.exact_match and report.decreasing
        assert len(report.distances()) == 3


def test_convergence_detects_wrong_asymptote():
    proj, b = branch_by_part("four_lines", {F(1): F(1), F(0): F(-2)})
    sb = lift_branch(b, proj.lift, order=3)
    wrong = AsymptoteParam.standard(1, [-2, 1], [0, 2])
    report = verify_convergence(wrong, sb)
    assert not report.exact_match
    assert not report.passed


def test_exact_branch_distance_zero():
    f1, f2 = P("x2 - x1"), P("x3 - x1")
    result = compute_asymptotes(f1, f2, "improved")
    sb = lift_branch(result.records[0].plane, result.projection.lift, order=2)
    report = verify_convergence(result.asymptotes[0], sb)
    assert report.passed
    assert all(s.distance == 0 for s in report.samples)
