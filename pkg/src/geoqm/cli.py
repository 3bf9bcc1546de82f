"""Command line front end.

    geoqm to-function  STATE_OR_OBSERVABLE.json [--kind state|observable]
    geoqm to-operator  STATE.json
    geoqm purity       STATE.json
    geoqm entanglement STATE.json --dims n,m
    geoqm witness      STATE.json --dims n,m
    geoqm check        [--dims n,m ...]

Exit status: 0 success, 2 invalid input, 3 invariant-suite failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from . import entanglement as ent
from . import frame as fr
from . import invariants
from . import requant as rq
from .io import dump, load_matrix, matrix_to_json
from .linalg import ValidationError, check_density, check_hermitian
from .projective import haar_vectors, make_rng

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT = 0, 2, 3

DEFAULT_TOLERANCES = {
    "purity": fr.PURITY_TOL,
    "sigma": 3.0,
}
DEFAULT_CHECK_DIMS = [(3, 3), (3, 4), (4, 4)]


def _dims(text):
    try:
        n, m = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n,m, got {text!r}") from None
    return n, m


def _tolerance(text):
    key, sep, val = text.partition("=")
    if not sep or key not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"expected key=value with key in {sorted(DEFAULT_TOLERANCES)}, got {text!r}")
    try:
        return key, float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric tolerance {val!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa", type=float, default=None, help="quantization parameter (default n+1)")
    common.add_argument("--samples", type=int, default=100_000, help="Monte Carlo sample count")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for every random stream")
    common.add_argument("--dims", type=_dims, action="append", default=None,
                        help="bipartite factor dims n,m (repeatable for check)")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--tolerance", type=_tolerance, action="append", default=[],
                        metavar="KEY=VALUE")

    parser = argparse.ArgumentParser(prog="geoqm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("to-function", parents=[common], help="forward quantization maps")
    p.add_argument("input")
    p.add_argument("--kind", choices=["state", "observable"], default="state")
    p.add_argument("--points", type=int, default=5, help="number of sampled evaluation points")
    for name, helptext in [("to-operator", "Monte Carlo re-quantization of S(sigma)"),
                           ("purity", "pure/mixed verdict from the L2 norm"),
                           ("entanglement", "full entanglement report"),
                           ("witness", "construct and evaluate the Schmidt witness")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input")
    sub.add_parser("check", parents=[common], help="run the invariant suites")
    return parser


def _validate(args):
    if args.samples < 1:
        raise ValidationError("--samples must be >= 1")
    if args.kappa is not None and not args.kappa > 0:
        raise ValidationError("--kappa must be positive")
    for n, m in args.dims or []:
        if n <= 2 or m <= 2:
            raise ValidationError(f"--dims {n},{m}: every factor needs dimension n > 2")


def _load(args, kind="state", need_dims=False):
    mat, dims = load_matrix(args.input)
    if args.dims:
        dims = args.dims[0]
        if dims[0] * dims[1] != mat.shape[0]:
            raise ValidationError(f"--dims {dims} do not match matrix dim {mat.shape[0]}")
    if mat.shape[0] <= 2:
        raise ValidationError(f"dim {mat.shape[0]}: the operator/function correspondence needs n > 2")
    if need_dims:
        if dims is None:
            raise ValidationError("bipartite input needs dims (JSON 'dims' field or --dims n,m)")
        if min(dims) <= 2:
            raise ValidationError(f"dims {list(dims)}: every factor needs dimension n > 2")
    if kind == "state":
        check_density(mat)
    else:
        check_hermitian(mat)
    return mat, dims


def cmd_to_function(args, tol):
    mat, _ = _load(args, args.kind)
    n = mat.shape[0]
    if args.kind == "state":
        f = fr.state_to_density(mat, args.kappa)
    else:
        f = fr.observable_to_function(mat, args.kappa)
    pts = haar_vectors(n, args.points, make_rng(args.seed))
    return {"kind": args.kind, "kappa": f.kappa, "backing_operator": matrix_to_json(f.operator),
            "frame_weight": float(f.frame_weight.real),
            "samples": [{"psi": {"re": v.real.tolist(), "im": v.imag.tolist()}, "value": float(f(v))}
                        for v in pts]}


def cmd_to_operator(args, tol):
    sigma, _ = _load(args)
    rho = fr.state_to_density(sigma)
    rec = rq.mc_reconstruct_state(rho, args.samples, args.seed)
    err = float(np.linalg.norm(rec.estimate - sigma))
    bound = tol["sigma"] * rec.hs_error_scale
    return {"reconstruction": rec.to_json(), "hs_error": err, "hs_error_bound": bound,
            "within_bound": err <= bound}


def cmd_purity(args, tol):
    sigma, _ = _load(args)
    rep = fr.purity_check(fr.state_to_density(sigma), args.samples, args.seed)
    out = rep.to_json()
    out["pure"] = abs(rep.squared_norm - rep.target) <= tol["purity"]
    out["verdict"] = "pure" if out["pure"] else "mixed"
    return out


def cmd_entanglement(args, tol):
    sigma, dims = _load(args, need_dims=True)
    return ent.entanglement_report(sigma, dims, args.samples, args.seed)


def cmd_witness(args, tol):
    sigma, dims = _load(args, need_dims=True)
    w = ent.witness_construct(sigma, dims)
    ev = ent.witness_evaluate(w, sigma, args.samples, args.seed, dims)
    screen = ent.product_expectation_min(w.operator, dims, 1000, args.seed)
    return {"witness_operator": matrix_to_json(w.operator, dims), "evaluation": ev.to_json(),
            "product_state_min": screen}


def cmd_check(args, tol):
    results = []
    for dims in args.dims or DEFAULT_CHECK_DIMS:
        for r in invariants.run_all(dims, args.seed, args.samples):
            d = r.to_json()
            d["dims"] = list(dims)
            results.append(d)
    return {"results": results, "passed": all(r["passed"] for r in results)}


COMMANDS = {
    "to-function": cmd_to_function,
    "to-operator": cmd_to_operator,
    "purity": cmd_purity,
    "entanglement": cmd_entanglement,
    "witness": cmd_witness,
    "check": cmd_check,
}


def _text(report, prefix=""):
    lines = []
    for key, val in report.items():
        if isinstance(val, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_text(val, prefix + "  "))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{prefix}{key}:")
            for item in val:
                lines.append(prefix + "  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{prefix}{key}: {val}")
    return lines


def dispatch(args) -> tuple[int, dict]:
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(dict(args.tolerance))
    report = {"command": args.command, "version": __version__, "seed": args.seed,
              "samples": args.samples}
    try:
        _validate(args)
        report["result"] = COMMANDS[args.command](args, tol)
    except (ValidationError, OSError) as exc:
        report["error"] = str(exc)
        return EXIT_INVALID, report
    if args.command == "check" and not report["result"]["passed"]:
        return EXIT_INVARIANT, report
    return EXIT_OK, report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status, report = dispatch(args)
    if args.format == "json":
        text = dump(report)
    else:
        text = "\n".join(_text(report))
    stream = sys.stderr if status == EXIT_INVALID else sys.stdout
    print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
