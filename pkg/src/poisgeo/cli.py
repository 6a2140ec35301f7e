"""Command-line verifier.

Subcommands:

    check        full identity pipeline on a manifold spec
    christoffel  print the contravariant Christoffel table
    foliation    frames, leafwise symplectic form, invariance report
    construct    build (pi, cometric) from a foliation spec
    cohomology   truncated Betti numbers (polynomial bivectors only)
    report       machine-readable JSON combining check + foliation + table

Exit codes: 0 all requested verdicts pass, 1 at least one mathematical
verdict fails, 2 unreadable input (file, JSON schema, or expression error).
"""

import argparse
import json
import sys
import time

from . import __version__
from .cohomology import thm31_cochain_report, truncated_betti
from .connection import (
    levi_civita,
    metric_defect,
    riemann_poisson_defect,
    torsion_defect,
)
from .errors import (
    ExprSyntaxError,
    Inconclusive,
    NonPolynomialBivector,
    NotPositiveDefiniteAt,
    PoisgeoError,
    RankNotConstant,
    RankOdd,
    SingularLeafwiseForm,
    SpecFileError,
)
from .foliation import (
    bundle_like_report,
    foliate_report,
    induced_tangent_metric,
    invariance_report,
    leaf_connection,
    leafwise_symplectic,
    parallel_omega_residuals,
    split_cotangent,
)
from .reconstruct import build_structure, validate_input
from .specfile import ManifoldSpec, load_samples_file, load_spec_file
from .tensor import OneForm


class Check:
    """One verdict line of a report."""

    def __init__(self, name, status, witness=None, witness_nonzero_at=None, detail=None):
        self.name = name
        self.status = status
        self.witness = witness
        self.witness_nonzero_at = witness_nonzero_at
        self.detail = detail

    def as_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "witness": self.witness,
            "witness_nonzero_at": self.witness_nonzero_at,
            "detail": self.detail,
        }


def _sample_str(point):
    out = []
    for c in point:
        out.append(str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
    return out


def _witness_sample(field, samples):
    """A sample where the witness expression evaluates to a nonzero rational."""
    for p in samples:
        try:
            if field.eval_at(p) != 0:
                return _sample_str(p)
        except PoisgeoError:
            continue
    return None


def _fail(name, witness_field, samples, detail=None):
    return Check(
        name,
        "fail",
        witness=str(witness_field) if witness_field is not None else None,
        witness_nonzero_at=_witness_sample(witness_field, samples)
        if witness_field is not None
        else None,
        detail=detail,
    )


def run_check_pipeline(spec):
    """The full verdict list for a manifold spec, plus reusable context."""
    checks = []
    ctx = {"spec": spec}
    chart = spec.chart
    n = chart.dim
    pi, g, samples = spec.pi, spec.cometric, spec.samples

    checks.append(Check("cometric_symmetric", "pass"))
    try:
        g.validate(samples)
        checks.append(Check("cometric_positive_definite", "pass"))
        metric_ok = True
    except NotPositiveDefiniteAt as exc:
        minor = g.leading_minor(exc.minor_index + 1)
        checks.append(
            _fail("cometric_positive_definite", minor, samples, detail=str(exc))
        )
        metric_ok = False

    poisson = pi.is_poisson()
    if poisson:
        checks.append(Check("poisson_jacobi", "pass"))
    else:
        (i, j, k), val = pi.jacobi_witness()
        names = chart.names
        checks.append(
            _fail(
                "poisson_jacobi",
                val,
                samples,
                detail=f"jacobiator({names[i]},{names[j]},{names[k]}) is nonzero",
            )
        )
    ctx["poisson"] = poisson

    split = None
    if metric_ok:
        try:
            split = split_cotangent(pi, g, spec.declared_rank, samples)
            checks.append(Check("rank_constant", "pass"))
        except (RankNotConstant, RankOdd) as exc:
            witness = _rank_witness(pi, spec.declared_rank)
            checks.append(_fail("rank_constant", witness, samples, detail=str(exc)))
    else:
        checks.append(Check("rank_constant", "skip", detail="cometric invalid"))
    ctx["split"] = split

    D = None
    if metric_ok:
        D = levi_civita(pi, g)
        coords = [OneForm.basis(chart, i) for i in range(n)]
        torsion_ok = all(
            torsion_defect(D, pi, a, b).is_zero for a in coords for b in coords
        )
        metric_compat_ok = all(
            metric_defect(D, g, pi, a, b, c).is_zero
            for a in coords
            for b in coords
            for c in coords
        )
        checks.append(Check("connection_torsion_free", "pass" if torsion_ok else "fail"))
        checks.append(Check("connection_metric", "pass" if metric_compat_ok else "fail"))
        defect = riemann_poisson_defect(pi, g, D)
        if poisson and defect is None:
            checks.append(Check("riemann_poisson", "pass"))
            ctx["riemann_poisson"] = True
        elif defect is not None:
            (i, j, k), val = defect
            names = chart.names
            checks.append(
                _fail(
                    "riemann_poisson",
                    val,
                    samples,
                    detail=f"Dpi(d{names[i]},d{names[j]},d{names[k]}) is nonzero",
                )
            )
            ctx["riemann_poisson"] = False
        else:
            # Dpi vanished but Jacobi failed (the cyclic identity makes this
            # unreachable); report the Jacobi witness for self-validation
            _, val = pi.jacobi_witness()
            checks.append(
                _fail("riemann_poisson", val, samples, detail="bivector is not Poisson")
            )
            ctx["riemann_poisson"] = False
    else:
        checks.append(Check("connection_torsion_free", "skip", detail="cometric invalid"))
        checks.append(Check("connection_metric", "skip", detail="cometric invalid"))
        checks.append(Check("riemann_poisson", "skip", detail="cometric invalid"))
        ctx["riemann_poisson"] = False
    ctx["connection"] = D

    rp = ctx.get("riemann_poisson", False)
    if split is None:
        for name in (
            "leafwise_symplectic_nondegenerate",
            "induced_metric_positive",
            "bracket_vs_lie_on_frames",
            "perp_invariance",
            "foliate_predicates",
            "bundle_like",
            "leaf_connection_parallel",
        ):
            checks.append(Check(name, "skip", detail="no cotangent splitting"))
        return checks, ctx

    try:
        omega = leafwise_symplectic(pi, split)
        checks.append(Check("leafwise_symplectic_nondegenerate", "pass"))
        ctx["leafwise"] = omega
    except SingularLeafwiseForm as exc:
        checks.append(
            Check("leafwise_symplectic_nondegenerate", "fail", detail=str(exc))
        )
        omega = None

    try:
        tangent = induced_tangent_metric(pi, g, split)
        tangent.validate(samples)
        checks.append(Check("induced_metric_positive", "pass"))
        ctx["tangent_metric"] = tangent
    except NotPositiveDefiniteAt as exc:
        checks.append(Check("induced_metric_positive", "fail", detail=str(exc)))

    inv = invariance_report(pi, g, split, rp)
    coord_note = (
        "coordinate-pair residuals vanish too"
        if inv["coordinate_bracket_ok"]
        else "coordinate-pair residuals are nonzero (expected off constant frames)"
    )
    if inv["bracket_vs_lie_ok"]:
        checks.append(Check("bracket_vs_lie_on_frames", "pass", detail=coord_note))
    else:
        witness = next(res for _, res in inv["bracket_vs_lie_residuals"] if not res.is_zero)
        checks.append(_fail("bracket_vs_lie_on_frames", witness, samples, detail=coord_note))
    if rp:
        if inv["perp_invariance_ok"]:
            checks.append(Check("perp_invariance", "pass"))
        else:
            witness = next(r for r in inv["perp_invariance_residuals"] if not r.is_zero)
            checks.append(_fail("perp_invariance", witness, samples))
    else:
        residual = next(
            (r for r in inv["perp_invariance_residuals"] if not r.is_zero), None
        )
        checks.append(
            Check(
                "perp_invariance",
                "skip",
                detail="asserted only on structures with vanishing Dpi"
                + (f"; observed residual {residual}" if residual is not None else ""),
            )
        )
    ctx["invariance"] = inv

    if rp:
        agree = True
        for kappa in split.kernel_frame:
            rep = foliate_report(pi, g, split, kappa, D)
            if len(set(rep.values())) != 1 or not rep["basic"]:
                agree = False
        checks.append(Check("foliate_predicates", "pass" if agree else "fail"))
        try:
            bl = bundle_like_report(pi, g, split)
            checks.append(Check("bundle_like", "pass" if bl["ok"] else "fail"))
        except Inconclusive as exc:
            checks.append(Check("bundle_like", "skip", detail=str(exc)))
        nabla = leaf_connection(D, pi, split)
        residuals = parallel_omega_residuals(pi, split, nabla, omega)
        parallel_ok = all(v.is_zero for v in residuals.values())
        checks.append(
            Check("leaf_connection_parallel", "pass" if parallel_ok else "fail")
        )
    else:
        note = "requires a Riemann-Poisson structure"
        checks.append(Check("foliate_predicates", "skip", detail=note))
        checks.append(Check("bundle_like", "skip", detail=note))
        checks.append(Check("leaf_connection_parallel", "skip", detail=note))
    return checks, ctx


def _rank_witness(pi, declared_rank):
    """A minor of the bivector matrix that is not identically zero."""
    from itertools import combinations

    from .linalg import FieldMatrix

    n = pi.chart.dim
    for size in (declared_rank, 2, 1):
        if size < 1 or size > n:
            continue
        for rows in combinations(range(n), size):
            for cols in combinations(range(n), size):
                sub = [[pi.entry(i, j) for j in cols] for i in rows]
                det = FieldMatrix(pi.chart, sub).det()
                if not det.is_zero:
                    return det
    return None


def exit_code_from(checks):
    return 1 if any(c.status == "fail" for c in checks) else 0


def make_report(spec, checks, path, digest, started, extra=None):
    report = {
        "tool": "poisgeo",
        "version": __version__,
        "input": str(path),
        "input_sha256": digest,
        "spec_name": spec.name,
        "checks": [c.as_dict() for c in checks],
    }
    if extra:
        report.update(extra)
    report["timing_s"] = round(time.monotonic() - started, 6)
    return report


def _print_text_report(spec, checks, stream):
    print(f"spec: {spec.name}", file=stream)
    for c in checks:
        line = f"{c.name}: {c.status}"
        if c.status == "fail" and c.witness:
            line += f"  [witness {c.witness}"
            if c.witness_nonzero_at:
                line += f" != 0 at {c.witness_nonzero_at}"
            line += "]"
        if c.detail and c.status != "pass":
            line += f"  ({c.detail})"
        print(line, file=stream)


def _load_manifold(path, samples_path=None):
    kind, spec, digest = load_spec_file(path)
    if kind != "manifold":
        raise SpecFileError(f"{path}: expected a manifold spec (with a 'pi' entry)")
    if samples_path:
        samples = load_samples_file(samples_path, spec.chart)
        spec = ManifoldSpec(
            spec.name, spec.chart, spec.pi, spec.cometric, spec.declared_rank, samples
        )
    return spec, digest


def cmd_check(args):
    started = time.monotonic()
    spec, digest = _load_manifold(args.spec, args.samples)
    checks, _ = run_check_pipeline(spec)
    if args.json:
        report = make_report(spec, checks, args.spec, digest, started)
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _print_text_report(spec, checks, sys.stdout)
    return exit_code_from(checks)


def _gamma_strings(spec, D):
    names = spec.chart.names
    n = spec.chart.dim
    table = []
    for i in range(n):
        for j in range(n):
            form = D.basis_derivative(i, j)
            terms = [
                f"({form.comps[k]})*d{names[k]}"
                for k in range(n)
                if not form.comps[k].is_zero
            ]
            table.append(
                {
                    "along": f"d{names[i]}",
                    "of": f"d{names[j]}",
                    "value": " + ".join(terms) if terms else "0",
                }
            )
    return table


def cmd_christoffel(args):
    started = time.monotonic()
    spec, digest = _load_manifold(args.spec, args.samples)
    D = levi_civita(spec.pi, spec.cometric)
    table = _gamma_strings(spec, D)
    if args.json:
        report = make_report(spec, [], args.spec, digest, started, extra={"christoffel": table})
        del report["checks"]
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(f"spec: {spec.name}")
        for row in table:
            print(f"D[{row['along']}][{row['of']}] = {row['value']}")
    return 0


def _foliation_details(spec, ctx):
    split = ctx.get("split")
    if split is None:
        return None
    names = spec.chart.names
    omega = ctx.get("leafwise")

    def form_str(form):
        terms = [
            f"({c})*d{names[i]}" for i, c in enumerate(form.comps) if not c.is_zero
        ]
        return " + ".join(terms) if terms else "0"

    def vec_str(vec):
        terms = [
            f"({c})*dd_{names[i]}" for i, c in enumerate(vec.comps) if not c.is_zero
        ]
        return " + ".join(terms) if terms else "0"

    details = {
        "rank": split.rank,
        "kernel_frame": [form_str(k) for k in split.kernel_frame],
        "perp_frame": [form_str(p) for p in split.perp_frame],
        "ts_frame": [vec_str(t) for t in split.ts_frame],
        "h_frame": [vec_str(h) for h in split.h_frame],
    }
    if omega is not None:
        details["leafwise_symplectic"] = {
            f"({i},{j})": str(omega.component((i, j)))
            for i, j in omega.comps
        }
    return details


def cmd_foliation(args):
    started = time.monotonic()
    spec, digest = _load_manifold(args.spec, args.samples)
    checks, ctx = run_check_pipeline(spec)
    wanted = {
        "rank_constant",
        "leafwise_symplectic_nondegenerate",
        "induced_metric_positive",
        "bracket_vs_lie_on_frames",
        "perp_invariance",
        "foliate_predicates",
        "bundle_like",
        "leaf_connection_parallel",
    }
    subset = [c for c in checks if c.name in wanted]
    details = _foliation_details(spec, ctx)
    if args.json:
        report = make_report(
            spec, subset, args.spec, digest, started, extra={"foliation": details}
        )
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _print_text_report(spec, subset, sys.stdout)
        if details:
            print(f"rank: {details['rank']}")
            for key in ("kernel_frame", "perp_frame", "ts_frame", "h_frame"):
                print(f"{key}: {details[key]}")
            if "leafwise_symplectic" in details:
                print(f"leafwise_symplectic: {details['leafwise_symplectic']}")
    return exit_code_from(subset)


def cmd_construct(args):
    started = time.monotonic()
    kind, spec, digest = load_spec_file(args.spec)
    if kind != "foliation":
        raise SpecFileError(f"{args.spec}: expected a foliation spec (with a 'frame' entry)")
    if args.samples:
        samples = load_samples_file(args.samples, spec.chart)
        from .specfile import FoliationSpec

        spec = FoliationSpec(
            spec.name, spec.chart, spec.frame, spec.tangent_metric, spec.omega, samples
        )
    inp = spec.foliation_input()
    try:
        validate_input(inp)
    except PoisgeoError as exc:
        print(f"validation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    pi, cometric = build_structure(inp)
    manifold = ManifoldSpec(
        f"{spec.name}-constructed", spec.chart, pi, cometric, inp.rank, spec.samples
    )
    print(json.dumps(manifold.to_dict(), sort_keys=True, indent=2))
    if args.verify:
        checks, _ = run_check_pipeline(manifold)
        _print_text_report(manifold, checks, sys.stderr)
        return exit_code_from(checks)
    return 0


def cmd_cohomology(args):
    started = time.monotonic()
    spec, digest = _load_manifold(args.spec, args.samples)
    if not spec.pi.is_polynomial():
        raise NonPolynomialBivector(
            f"{args.spec}: cohomology windows need polynomial bivector entries"
        )
    result = truncated_betti(spec.pi, args.p, args.degree)
    extra = {"betti": result}
    lines = [
        f"b{args.p}(window d={args.degree}) = {result['betti']}  "
        f"[kernel {result['kernel_dim']}, image {result['image_rank']}, "
        f"preimage degree {result['preimage_degree']}]"
    ]
    if args.thm31:
        split = split_cotangent(spec.pi, spec.cometric, spec.declared_rank, spec.samples)
        rep = thm31_cochain_report(spec.pi, spec.cometric, split, args.p, args.degree)
        extra["thm31"] = rep
        lines.append(
            "degree-splitting report: "
            f"basic_forms_closed={rep['basic_forms_closed']} "
            f"pushforwards_closed={rep['pushforwards_closed']} "
            f"dimension_match={rep['dimension_match']}"
        )
    if args.json:
        report = make_report(spec, [], args.spec, digest, started, extra=extra)
        del report["checks"]
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(f"spec: {spec.name}")
        for line in lines:
            print(line)
    if args.thm31:
        rep = extra["thm31"]
        verdicts = (
            rep["basic_forms_closed"],
            rep["pushforwards_closed"],
            rep["dimension_match"] is not False,
        )
        if not all(verdicts):
            return 1
    return 0


def cmd_report(args):
    started = time.monotonic()
    spec, digest = _load_manifold(args.spec, args.samples)
    checks, ctx = run_check_pipeline(spec)
    extra = {"foliation": _foliation_details(spec, ctx)}
    if ctx.get("connection") is not None:
        extra["christoffel"] = _gamma_strings(spec, ctx["connection"])
    report = make_report(spec, checks, args.spec, digest, started, extra=extra)
    print(json.dumps(report, sort_keys=True, indent=2))
    return exit_code_from(checks)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="poisgeo",
        description="Exact symbolic checks for Poisson bivectors with cotangent metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("spec", help="path to a JSON spec file")
        p.add_argument("--samples", help="path to a JSON sample-point override")
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    p = sub.add_parser("check", help="run the full identity pipeline")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("christoffel", help="print the contravariant Christoffel table")
    add_common(p)
    p.set_defaults(func=cmd_christoffel)

    p = sub.add_parser("foliation", help="frames, leafwise form, invariance checks")
    add_common(p)
    p.set_defaults(func=cmd_foliation)

    p = sub.add_parser("construct", help="build (pi, cometric) from a foliation spec")
    p.add_argument("spec", help="path to a foliation JSON spec")
    p.add_argument("--samples", help="path to a JSON sample-point override")
    p.add_argument("--verify", action="store_true", help="re-check the constructed output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("cohomology", help="truncated Betti numbers")
    add_common(p)
    p.add_argument("--p", type=int, required=True, help="multivector degree")
    p.add_argument("--degree", type=int, required=True, help="coefficient degree window")
    p.add_argument("--thm31", action="store_true", help="also run the splitting report")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("report", help="full JSON report")
    p.add_argument("spec", help="path to a JSON spec file")
    p.add_argument("--samples", help="path to a JSON sample-point override")
    p.add_argument(
        "--json", action="store_true", help="accepted for symmetry; report is always JSON"
    )
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecFileError, ExprSyntaxError, NonPolynomialBivector) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except PoisgeoError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
