"""Command-line front end: project, branches, asymptotes, plotdata."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import AsymptoteError, ParseError
from .exactfield.numberfield import AlgebraicNumber, NumberField
from .exactfield.series import PuiseuxTruncation, format_series
from .planecurve import PlaneBranch, plane_branches
from .polynomial import parse_input_file, parse_poly
from .spacecurve import (
    AsymptoteParam,
    SpaceBranch,
    compute_asymptotes,
    eliminate_lambda,
    lift_branch,
    project,
    verify_convergence,
)
from .spacecurve.convergence import embedding_root

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_COMPUTATION = 3


@dataclass
class JobConfig:
    f1: str
    f2: str
    command: str
    method: str = "improved"
    depth: int = 2
    samples: tuple = (100, 1000, 10000)
    format: str = "text"
    seed: int = 0
    deterministic: bool = False
    output: str | None = None
    precision: int = 30

    def __post_init__(self):
        if any(s <= 0 for s in self.samples):
            raise ValueError("sample magnitudes must be positive")
        if any(a >= b for a, b in zip(self.samples, self.samples[1:])):
            raise ValueError("sample magnitudes must be strictly increasing")


# ---------------------------------------------------------------------------
# encoding


def rational_text(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def encode_scalar(c):
    if isinstance(c, AlgebraicNumber):
        if c.is_rational():
            return rational_text(c.rational_value())
        return {"coeffs": [rational_text(r) for r in c.rep], "minpoly": [rational_text(r) for r in c.field.modulus]}
    return rational_text(c)


def decode_scalar(obj):
    if isinstance(obj, dict):
        K = NumberField([Fraction(s) for s in obj["minpoly"]])
        return K([Fraction(s) for s in obj["coeffs"]])
    return Fraction(obj)


def encode_series(s: PuiseuxTruncation) -> dict:
    return {
        "terms": [[rational_text(e), encode_scalar(c)] for e, c in s.terms],
        "order_bound": None if s.order_bound is None else rational_text(s.order_bound),
        "text": format_series(s),
    }


def encode_asymptote(a: AsymptoteParam) -> dict:
    out = {
        "k": a.k,
        "x1": [encode_scalar(c) for c in a.components[0]],
        "q2": [encode_scalar(c) for c in a.q2],
        "q3": [encode_scalar(c) for c in a.q3],
        "proper": a.proper,
    }
    if a.repaired_from is not None:
        out["repaired_from"] = a.repaired_from
    if a.minpoly is not None:
        out["minpoly"] = [rational_text(c) for c in a.minpoly]
    return out


def decode_asymptote(obj: dict) -> AsymptoteParam:
    comps = tuple(tuple(decode_scalar(c) for c in obj[name]) for name in ("x1", "q2", "q3"))
    minpoly = tuple(Fraction(c) for c in obj["minpoly"]) if "minpoly" in obj else None
    if minpoly is not None:
        NumberField(list(minpoly))
    return AsymptoteParam(comps, obj["proper"], minpoly, obj.get("repaired_from"))


def load_asymptotes(text: str) -> list[AsymptoteParam]:
    """Asymptote set from a structured document."""
    return [decode_asymptote(a) for a in json.loads(text)["asymptotes"]]


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


# ---------------------------------------------------------------------------
# text rendering


def format_scalar(c) -> str:
    if isinstance(c, AlgebraicNumber) and not c.is_rational():
        return f"({c})"
    if isinstance(c, AlgebraicNumber):
        c = c.rational_value()
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_component(coeffs: Sequence, var: str = "t") -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        rational = not isinstance(c, AlgebraicNumber) or c.is_rational()
        if rational:
            c = c.rational_value() if isinstance(c, AlgebraicNumber) else Fraction(c)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = format_scalar(a)
            else:
                body = mono if a == 1 else f"{format_scalar(a)}*{mono}"
        else:
            sign = "+"
            body = format_scalar(c) + (f"*{mono}" if mono else "")
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def format_asymptote(a: AsymptoteParam) -> str:
    return "(" + ", ".join(format_component(c) for c in a.components) + ")"


def format_minpoly(m: Sequence) -> str:
    return format_component([Fraction(c) for c in m], "λ")


def format_matrix(M) -> str:
    return "[" + "; ".join(" ".join(format_scalar(x) for x in row) for row in M) + "]"


def format_point(b: PlaneBranch) -> str:
    p = b.point
    if p.m2 is None:
        return "(0:1:0)"
    return f"(1:{format_scalar(p.m2)}:0)"


# ---------------------------------------------------------------------------
# commands


def _projection_doc(cfg: JobConfig, proj) -> dict:
    return {
        "input": {"f1": cfg.f1, "f2": cfg.f2},
        "projection": {
            "fp": str(proj.fp),
            "transform": None if proj.transform is None else [[rational_text(x) for x in row] for row in proj.transform],
        },
        "lift": {"h1": str(proj.lift.h1), "h2": str(proj.lift.h2)},
    }


def cmd_project(cfg: JobConfig, out) -> int:
    f1, f2 = parse_poly(cfg.f1, line=1), parse_poly(cfg.f2, line=2)
    proj = project(f1, f2, seed=cfg.seed)
    if cfg.format == "structured":
        out.write(dump_document(_projection_doc(cfg, proj)) + "\n")
        return EXIT_OK
    out.write(f"fp = {proj.fp}\n")
    h2 = proj.lift.h2
    if h2.is_constant() and h2.constant_value() == 1:
        out.write(f"h = {proj.lift.h1}\n")
    else:
        out.write(f"h = ({proj.lift.h1}) / ({h2})\n")
    if proj.transform is None:
        out.write("coordinate change: none\n")
    else:
        out.write(f"coordinate change: original = M * working, M = {format_matrix(proj.transform)}\n")
    return EXIT_OK


def _branch_rows(cfg: JobConfig, proj):
    rows = []
    for b in plane_branches(proj.fp, order=cfg.depth):
        sb = lift_branch(b, proj.lift, order=cfg.depth)
        # show exactly the exponents >= -depth
        cut = Fraction(-cfg.depth) - Fraction(1, b.k)
        r2 = sb.r2 if sb.r2.is_exact and all(e > cut for e, _ in sb.r2.terms) else sb.r2.truncate(cut)
        r3 = sb.r3 if sb.r3.is_exact and all(e > cut for e, _ in sb.r3.terms) else sb.r3.truncate(cut)
        rows.append((b, SpaceBranch(b, r2, r3)))
    return rows


def cmd_branches(cfg: JobConfig, out) -> int:
    f1, f2 = parse_poly(cfg.f1, line=1), parse_poly(cfg.f2, line=2)
    proj = project(f1, f2, seed=cfg.seed)
    rows = _branch_rows(cfg, proj)
    if cfg.format == "structured":
        doc = _projection_doc(cfg, proj)
        doc["branches"] = [
            {
                "point": None if b.point.m2 is None else encode_scalar(b.point.m2),
                "r2": encode_series(sb.r2),
                "r3": encode_series(sb.r3),
                "degree": sb.degree,
                "ramification": b.k,
                "count": b.count,
                "minpoly": None if b.conjugacy_minpoly is None else [rational_text(c) for c in b.conjugacy_minpoly],
            }
            for b, sb in rows
        ]
        out.write(dump_document(doc) + "\n")
        return EXIT_OK
    for i, (b, sb) in enumerate(rows, start=1):
        out.write(f"branch {i}: point {format_point(b)}, degree {sb.degree}, {b.count} conjugate branch(es)\n")
        if b.conjugacy_minpoly is not None:
            out.write(f"  where m(λ) = {format_minpoly(b.conjugacy_minpoly)} = 0\n")
        out.write(f"  r2 = {sb.r2}\n")
        out.write(f"  r3 = {sb.r3}\n")
    return EXIT_OK


def _method_results(cfg: JobConfig, f1, f2):
    methods = ("basic", "improved") if cfg.method == "both" else (cfg.method,)
    parallel = not cfg.deterministic
    return {m: compute_asymptotes(f1, f2, m, seed=cfg.seed, parallel=parallel, depth=cfg.depth) for m in methods}


def _checks(results) -> list[dict]:
    checks = []
    for method, res in results.items():
        for i, rec in enumerate(res.records):
            sb = lift_branch(rec.plane, res.projection.lift, order=3)
            report = verify_convergence(rec.asymptote, sb)
            checks.append({
                "name": f"convergence/{method}/branch{i + 1}",
                "passed": report.passed,
                "exact": report.exact_match,
                "distances": report.distances(),
            })
    if len(results) == 2:
        a = [x.components for x in results["basic"].asymptotes]
        b = [x.components for x in results["improved"].asymptotes]
        checks.append({"name": "methods agree", "passed": sorted(map(repr, a)) == sorted(map(repr, b))})
    return checks


def cmd_asymptotes(cfg: JobConfig, out) -> int:
    f1, f2 = parse_poly(cfg.f1, line=1), parse_poly(cfg.f2, line=2)
    results = _method_results(cfg, f1, f2)
    main = results["improved"] if "improved" in results else results["basic"]
    asymptotes = main.original_asymptotes()
    checks = _checks(results)
    ok = all(c["passed"] for c in checks)
    if cfg.format == "structured":
        doc = _projection_doc(cfg, main.projection)
        entries = []
        for idx, a in enumerate(asymptotes):
            entry = encode_asymptote(a)
            entry["branches"] = [i + 1 for i in main.branches_of(idx)]
            if a.minpoly is not None:
                g1, g2 = eliminate_lambda(a)
                entry["implicit"] = [str(g1), str(g2)]
            entries.append(entry)
        doc["asymptotes"] = entries
        doc["checks"] = checks
        out.write(dump_document(doc) + "\n")
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    if main.transform is not None:
        out.write(f"coordinate change: original = M * working, M = {format_matrix(main.transform)}\n")
    for idx, a in enumerate(asymptotes):
        branches = ", ".join(str(i + 1) for i in main.branches_of(idx))
        out.write(f"asymptote {idx + 1} (branches {branches}): {format_asymptote(a)}\n")
        if a.repaired_from is not None:
            out.write(f"  proper: yes, reparametrized from the t^{a.repaired_from} form\n")
        else:
            out.write(f"  proper: {'yes' if a.proper else 'no'}\n")
        if a.minpoly is not None:
            out.write(f"  where m(λ) = {format_minpoly(a.minpoly)} = 0\n")
            g1, g2 = eliminate_lambda(a)
            out.write(f"  implicit: g1 = {g1}\n")
            out.write(f"            g2 = {g2}\n")
    for c in checks:
        if c["name"] == "methods agree":
            out.write("methods agree\n" if c["passed"] else "METHODS DISAGREE\n")
        elif not c["passed"]:
            out.write(f"check failed: {c['name']}\n")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _number(c, root):
    if isinstance(c, AlgebraicNumber) and not c.is_rational():
        return sum(_number(r, root) * root**i for i, r in enumerate(c.rep))
    c = c.rational_value() if isinstance(c, AlgebraicNumber) else Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def _evaluate_series(s: PuiseuxTruncation, t, k: int, root):
    return sum((_number(c, root) * t ** int(e * k) for e, c in s.terms), mpmath.mpf(0))


def _evaluate_component(coeffs: Sequence, s, root):
    return sum((_number(c, root) * s**i for i, c in enumerate(coeffs) if c), mpmath.mpf(0))


def _apply(M, point):
    if M is None:
        return point
    return tuple(sum(mpmath.mpf(Fraction(m).numerator) / Fraction(m).denominator * p for m, p in zip(row, point)) for row in M)


def cmd_plotdata(cfg: JobConfig, out) -> int:
    f1, f2 = parse_poly(cfg.f1, line=1), parse_poly(cfg.f2, line=2)
    res = compute_asymptotes(f1, f2, "improved" if cfg.method == "both" else cfg.method, seed=cfg.seed,
                             parallel=not cfg.deterministic, depth=cfg.depth)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["object", "z", "x1", "x2", "x3", "dist_to_asymptote"])
    skipped = 0
    with mpmath.workdps(50):
        for i, rec in enumerate(res.records):
            sb = lift_branch(rec.plane, res.projection.lift, order=max(cfg.depth, 1))
            a = rec.asymptote
            k = rec.plane.k
            minpoly = a.minpoly or rec.plane.conjugacy_minpoly
            root = embedding_root(minpoly) if minpoly is not None else None
            real_root = root is None or not isinstance(root, mpmath.mpc)
            ak = a.k
            for m in cfg.samples:
                for sign in (1, -1):
                    z = sign * mpmath.mpf(Fraction(m).numerator) / Fraction(m).denominator
                    if not real_root or (sign < 0 and k % 2 == 0):
                        skipped += 2
                        continue
                    t = mpmath.root(abs(z), k) * (1 if sign > 0 else -1)
                    branch_pt = _apply(res.transform, (z, _evaluate_series(sb.r2, t, k, root), _evaluate_series(sb.r3, t, k, root)))
                    # the asymptote parameter s satisfies s^ak = z
                    if sign < 0 and ak % 2 == 0:
                        skipped += 1
                        asym_pt = None
                    else:
                        s = mpmath.root(abs(z), ak) * (1 if sign > 0 else -1)
                        values = tuple(_evaluate_component(comp, s, root) for comp in a.components)
                        asym_pt = _apply(res.transform, values)
                    dist = ""
                    if asym_pt is not None:
                        dist = mpmath.nstr(mpmath.sqrt(sum((p - q) ** 2 for p, q in zip(branch_pt, asym_pt))), cfg.precision)
                    writer.writerow([f"branch{i + 1}", mpmath.nstr(z, cfg.precision)]
                                    + [mpmath.nstr(x, cfg.precision) for x in branch_pt] + [dist])
                    if asym_pt is not None:
                        writer.writerow([f"asymptote{i + 1}", mpmath.nstr(z, cfg.precision)]
                                        + [mpmath.nstr(x, cfg.precision) for x in asym_pt] + [""])
    out.write(f"# skipped {skipped} non-real samples\n")
    return EXIT_OK


COMMANDS = {
    "project": cmd_project,
    "branches": cmd_branches,
    "asymptotes": cmd_asymptotes,
    "plotdata": cmd_plotdata,
}


# ---------------------------------------------------------------------------
# argument handling


def _samples(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(Fraction(s.strip()) for s in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid sample list: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spaceasym", description="Infinity branches and generalized asymptotes of space curves.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f1", help="first polynomial in x1, x2, x3")
    common.add_argument("--f2", help="second polynomial in x1, x2, x3")
    common.add_argument("--input", help="file with the two polynomials, one per line")
    common.add_argument("--method", choices=("basic", "improved", "both"), default="improved")
    common.add_argument("--depth", type=int, default=2, help="branch truncation depth")
    common.add_argument("--samples", type=_samples, default=(Fraction(100), Fraction(1000), Fraction(10000)),
                        help="comma-separated sample magnitudes")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for coordinate-change retries")
    common.add_argument("--deterministic", action="store_true", help="sequential, reproducible ordering")
    common.add_argument("--output", help="write to this file instead of standard output")
    common.add_argument("--precision", type=int, default=30, help="digits in plot data")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    if args.input is not None:
        if args.f1 is not None or args.f2 is not None:
            raise ValueError("use either --input or --f1/--f2")
        with open(args.input, encoding="utf-8") as fh:
            content = fh.read()
        parse_input_file(content)  # reports errors with the file's line numbers
        lines = [raw.split("#", 1)[0] for raw in content.splitlines()]
        f1, f2 = [s.strip() for s in lines if s.strip()]
    else:
        if args.f1 is None or args.f2 is None:
            raise ValueError("both --f1 and --f2 are required")
        f1, f2 = args.f1, args.f2
    if args.depth < 0:
        raise ValueError("--depth must be non-negative")
    return JobConfig(f1, f2, args.command, args.method, args.depth, tuple(args.samples), args.format,
                     args.seed, args.deterministic, args.output, args.precision)


def run(cfg: JobConfig, out) -> int:
    return COMMANDS[cfg.command](cfg, out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    buffer = io.StringIO()
    try:
        code = run(cfg, buffer)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AsymptoteError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
