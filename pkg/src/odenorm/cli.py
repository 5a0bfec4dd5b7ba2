"""Command-line front end.

Step functions are JSON files ``{"partition": [...], "values": [...]}``;
wherever an exponent or function is expected a bare number stands for the
constant function.  Output is JSON, except ``curve`` which prints CSV.

Exit codes: 0 ok, 1 property failure, 2 usage or validation error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verify
from .duality import (
    conjugate,
    exact_norming_pairing,
    holder_check,
    norming_pairing,
    special_variation,
    truncation_ladder,
)
from .errors import NonConvergenceError, ValidationError
from .function_model import Density, Exponent, StepFunction
from .nakano import ModularKind, nakano_norm
from .phi_solver import norm, phi_stabilized
from .sequence_space import (
    VarExpSequence,
    mixed_norm,
    seq_norm,
    seq_norm_left,
    transpose_contraction_check,
)
from .weighted_embedding import (
    BUILTIN_EXPONENTS,
    WeightedSpec,
    build_embedding,
    embed_isometry_check,
    weight_isometry_check,
    weighted_norm,
)

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

GLOBAL_DEFAULTS = {"tol": 1e-10, "grid": 1024, "seed": 0, "cases": 1000, "replay": None}


def _step_arg(kind=StepFunction):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            pass
        else:
            try:
                return kind.constant(value)
            except ValidationError as exc:
                raise argparse.ArgumentTypeError(str(exc)) from None
        path = Path(text)
        if not path.is_file():
            raise argparse.ArgumentTypeError(f"{text!r} is neither a number nor a readable file")
        try:
            return kind.from_json(path.read_text())
        except ValidationError as exc:
            raise argparse.ArgumentTypeError(f"{text}: {exc}") from None

    return parse


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def _global_flags(parser, suppress):
    d = (lambda k: argparse.SUPPRESS) if suppress else GLOBAL_DEFAULTS.get
    parser.add_argument("--tol", type=float, default=d("tol"), help="solver tolerance")
    parser.add_argument("--grid", type=int, default=d("grid"), help="tabulation nodes per piece")
    parser.add_argument("--seed", type=int, default=d("seed"), help="generator seed")
    parser.add_argument("--cases", type=int, default=d("cases"), help="cases per suite")
    parser.add_argument("--replay", metavar="FILE", default=d("replay"),
                        help="re-run failures recorded by verify")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    parser = argparse.ArgumentParser(prog="odenorm", description=__doc__.split("\n")[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    exp = _step_arg(Exponent)
    step = _step_arg()

    p = cmd("norm", "norm of f in L^p")
    p.add_argument("--f", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)

    p = cmd("curve", "accumulation curve as CSV")
    p.add_argument("--f", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)

    p = cmd("nakano", "Luxemburg-type norm and its ratio to the ODE norm")
    p.add_argument("--f", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)
    p.add_argument("--kind", choices=[k.value for k in ModularKind], default="psi")

    p = cmd("holder", "both sides of Hölder's inequality")
    p.add_argument("--f", type=step, required=True)
    p.add_argument("--g", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)

    p = cmd("pair", "pairing of x with J_p(x) and with the norming functional")
    p.add_argument("--x", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)

    p = cmd("seqnorm", "varying-exponent sequence norm")
    p.add_argument("--values", type=_floats, required=True)
    p.add_argument("--exponents", type=_floats, required=True)

    p = cmd("mixed", "mixed l^r(l^p) norm of a non-negative matrix")
    p.add_argument("--matrix", type=Path, required=True, help="JSON list of rows")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)

    p = cmd("variation", "dual variation of g' dm")
    p.add_argument("--g", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)

    p = cmd("extnorm", "truncation ladder and extended norm")
    p.add_argument("--f", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)

    p = cmd("weighted", "weighted norm and the density-change isometry")
    p.add_argument("--f", type=step, required=True)
    p.add_argument("--p", type=exp, required=True)
    p.add_argument("--w", type=_step_arg(Density), required=True)

    p = cmd("embed-demo", "embed a built-in exponent into L^p0")
    p.add_argument("--exponent", choices=sorted(BUILTIN_EXPONENTS), default="affine")
    p.add_argument("--f", type=step, default=StepFunction.constant(1.0))

    p = cmd("verify", "run a property suite")
    p.add_argument("suite", nargs="?", default="all", help=f"{', '.join(verify.SUITES)} or all")
    return parser


def _run_config(args):
    return verify.RunConfig(tol=args.tol, grid=args.grid, seed=args.seed, cases=args.cases)


def _dispatch(args, out):
    rc = _run_config(args)
    cfg = rc.solve_config()
    c = args.command

    if c == "verify" and args.replay:
        try:
            record = json.loads(Path(args.replay).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read replay file: {exc}") from None
        result = verify.replay(record, rc)
        _emit(result, out)
        return EXIT_PROPERTY if any(r["reproduced"] for r in result["results"]) else EXIT_OK

    if c == "verify":
        report = verify.run(args.suite, rc)
        _emit(report, out)
        reports = report.get("reports", [report])
        return EXIT_PROPERTY if any(r["failures"] for r in reports) else EXIT_OK

    if c == "norm":
        curve = phi_stabilized(args.f, args.p, cfg)
        _emit({"norm": curve.value, "ladder_steps": curve.ladder_steps,
               "converged": curve.converged}, out)
    elif c == "curve":
        out.write(phi_stabilized(args.f, args.p, cfg).to_csv())
    elif c == "nakano":
        value = nakano_norm(args.f, args.p, args.kind)
        ode = norm(args.f, args.p, cfg)
        _emit({"nakano_norm": value, "kind": args.kind, "ode_norm": ode,
               "ratio": ode / value if value > 0 else None}, out)
    elif c == "holder":
        rep = holder_check(args.f, args.g, conjugate(args.p), cfg)
        _emit({"lhs": rep.lhs, "rhs": rep.rhs, "slack": rep.slack,
               "holds": rep.holds(verify.HOLDER_TOL)}, out)
        return EXIT_OK if rep.holds(verify.HOLDER_TOL) else EXIT_PROPERTY
    elif c == "pair":
        literal = norming_pairing(args.x, args.p, cfg)
        exact = exact_norming_pairing(args.x, args.p, cfg)
        _emit({
            "duality_map": dict(literal._asdict(), relative_defect=literal.relative_defect),
            "norming_functional": dict(exact._asdict(), relative_defect=exact.relative_defect),
        }, out)
    elif c == "seqnorm":
        x = VarExpSequence(args.values, args.exponents)
        _emit({"norm": seq_norm(x), "right_fold": seq_norm_left(x)}, out)
    elif c == "mixed":
        try:
            a = json.loads(args.matrix.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read matrix: {exc}") from None
        result = {"mixed_norm": mixed_norm(a, args.p, args.r)}
        status = EXIT_OK
        if args.p <= args.r:
            rep = transpose_contraction_check(a, args.p, args.r)
            result["transpose"] = {"lhs": rep.lhs, "rhs": rep.rhs, "slack": rep.slack}
            status = EXIT_OK if rep.slack >= -verify.MIXED_TOL else EXIT_PROPERTY
        _emit(result, out)
        return status
    elif c == "variation":
        rep = special_variation(args.g, conjugate(args.p), cfg)
        _emit(rep._asdict(), out)
    elif c == "extnorm":
        ladder = truncation_ladder(args.f, args.p, cfg)
        _emit({"extended_norm": max(v for _, v in ladder),
               "ladder": [[n, v] for n, v in ladder]}, out)
    elif c == "weighted":
        spec = WeightedSpec(args.p, args.w)
        rep = weight_isometry_check(args.f, spec, cfg)
        _emit({"weighted_norm": weighted_norm(args.f, spec, cfg),
               "isometry": dict(rep._asdict(), defect=rep.defect)}, out)
        return EXIT_OK if rep.defect <= verify.ISOMETRY_TOL else EXIT_PROPERTY
    elif c == "embed-demo":
        p, dp = BUILTIN_EXPONENTS[args.exponent]
        emap = build_embedding(p, dp, nodes=args.grid)
        rep = embed_isometry_check(args.f, emap, cfg)
        _emit({"exponent": args.exponent, "nodes": args.grid, "pieces": emap.summary(),
               "max_residual": emap.max_residual, **rep._asdict(), "defect": rep.defect}, out)
    return EXIT_OK


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args, out)
    except SystemExit as exc:  # argparse reports usage errors this way
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except ValidationError as exc:
        print(f"odenorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergenceError as exc:
        print(f"odenorm: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
