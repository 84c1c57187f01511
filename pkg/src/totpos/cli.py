"""Command-line front end.

Usage::

    totpos classify MATRIX [--k K]
    totpos compound MATRIX --j J
    totpos spectrum MATRIX
    totpos verify-gk MATRIX [--samples N] [--seed S]
    totpos verify-vdp MATRIX [--trials N] [--seed S] [--mode strict|sr]
    totpos cone CONE_JSON --op contains|adjoint|angle|t [--vector ...] [--j J]
    totpos generate SPEC_JSON [--output FILE]

Matrix files hold one row per line, whitespace separated; lines starting
with ``#`` are ignored.  Reports go to stdout as JSON (``--format table``
for a plain listing).  Exit status: 0 success, 1 a verification failed,
2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import cones as cones_mod
from .classify import classify
from .errors import ClassificationError, InputError, ResourceError, TotposError
from .exterior import DEFAULT_TOL, compound, subsets
from .generators import generate
from .spectral import SPECTRAL_TOL, eigen, gk_verify, vdp_check

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split()])
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise InputError("matrix file has no rows")
    if len({len(r) for r in rows}) != 1:
        raise InputError("rows have different lengths")
    M = np.array(rows)
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    return M


def format_matrix(M: np.ndarray) -> str:
    return "\n".join(" ".join(repr(float(v)) for v in row) for row in M) + "\n"


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json_arg(arg: str) -> tuple[object, bytes]:
    """JSON given inline or as a file path."""
    raw = arg.encode() if arg.lstrip().startswith(("{", "[")) else _read(arg)
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.replace(",", " ").split()])
    except ValueError as exc:
        raise InputError(f"bad vector {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# Commands; each returns (report fields, exit code)


def cmd_classify(args, M):
    cls = classify(M, k=args.k, tol=args.tol)
    return {"classification": cls.to_dict(), "verdict": "ok"}, EXIT_OK


def cmd_compound(args, M):
    C = compound(M, args.j)
    return {"j": args.j, "n": C.n, "basis": [list(s) for s in subsets(C.n, args.j)],
            "compound": C.body.tolist(), "verdict": "ok"}, EXIT_OK


def cmd_spectrum(args, M):
    eig = eigen(M)
    return {"eigenvalues": [[float(z.real), float(z.imag)] for z in eig.values],
            "verdict": "ok"}, EXIT_OK


def cmd_verify_gk(args, M):
    try:
        report = gk_verify(M, tol=args.tol, combo_samples=args.samples, seed=args.seed)
    except ClassificationError as exc:
        return {"verdict": "fail", "error": str(exc)}, EXIT_FAIL
    out = report.to_dict()
    return out, EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify_vdp(args, M):
    try:
        report = vdp_check(M, trials=args.trials, seed=args.seed, mode=args.mode, entry_tol=args.tol)
    except ClassificationError as exc:
        return {"verdict": "fail", "error": str(exc)}, EXIT_FAIL
    return report.to_dict(), EXIT_OK if report.passed else EXIT_FAIL


def cmd_cone(args, spec):
    chain = isinstance(spec, list)
    if args.op == "t":
        if args.vector is None:
            raise InputError("--vector is required for --op t")
        x = _parse_vector(args.vector)
        if chain:
            Ks = [cones_mod.cone_from_json(s) for s in spec]
            res = cones_mod.t_chain_membership(x, Ks, budget=args.budget, seed=args.seed,
                                               method=args.method, tol=args.tol)
        else:
            K = cones_mod.cone_from_json(spec)
            res = cones_mod.t_membership(x, K, j=args.j, budget=args.budget, seed=args.seed,
                                         method=args.method, tol=args.tol)
        return {"result": res.to_dict(), "verdict": res.verdict}, EXIT_OK
    if chain:
        raise InputError(f"--op {args.op} takes a single cone, not a list")
    K = cones_mod.cone_from_json(spec)
    if args.op == "contains":
        if args.vector is None:
            raise InputError("--vector is required for --op contains")
        region = cones_mod.contains(K, _parse_vector(args.vector), tol=args.tol)
        return {"region": region.value, "verdict": region.value}, EXIT_OK
    if args.op == "adjoint":
        return {"adjoint": cones_mod.cone_to_json(cones_mod.adjoint(K)), "verdict": "ok"}, EXIT_OK
    angle, exact = cones_mod.max_angle(K, samples=args.budget, seed=args.seed)
    return {"max_angle": angle, "exact": exact, "verdict": "ok"}, EXIT_OK


def cmd_generate(args, spec):
    M = generate(spec)
    if args.output:
        Path(args.output).write_text(format_matrix(M))
    return {"matrix": M.tolist(), "verdict": "ok"}, EXIT_OK


MATRIX_COMMANDS = {
    "classify": cmd_classify,
    "compound": cmd_compound,
    "spectrum": cmd_spectrum,
    "verify-gk": cmd_verify_gk,
    "verify-vdp": cmd_verify_vdp,
}
JSON_COMMANDS = {"cone": cmd_cone, "generate": cmd_generate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="totpos", description="Total positivity toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="positivity class of a matrix")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("compound", parents=[common], help="j-th compound matrix")
    p.add_argument("input")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues by descending modulus")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=SPECTRAL_TOL)

    p = sub.add_parser("verify-gk", parents=[common], help="Gantmacher-Krein checks")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=SPECTRAL_TOL)
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("verify-vdp", parents=[common], help="variation-diminishing checks")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--mode", choices=["strict", "sr"], default="strict")

    p = sub.add_parser("cone", parents=[common], help="cone membership, duality, angle, T-sets")
    p.add_argument("input", help="cone JSON (inline or file); a list means a cone chain")
    p.add_argument("--op", choices=["contains", "adjoint", "angle", "t"], default="t")
    p.add_argument("--vector")
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--budget", type=int, default=cones_mod.DEFAULT_BUDGET)
    p.add_argument("--method", choices=["auto", "exact", "search"], default="auto")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("generate", parents=[common], help="build a test matrix from a spec")
    p.add_argument("input", help="generator JSON (inline or file)")
    p.add_argument("--output")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return parser


def _to_jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    return obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_to_jsonable(report), sort_keys=True, indent=2)
    width = max(len(k) for k in report)
    return "\n".join(f"{k:<{width}}  {json.dumps(_to_jsonable(v))}" for k, v in sorted(report.items()))


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command in MATRIX_COMMANDS:
            raw = _read(args.input)
            M = parse_matrix(raw.decode(errors="replace"))
            fields, code = MATRIX_COMMANDS[args.command](args, M)
        else:
            payload, raw = _load_json_arg(args.input)
            fields, code = JSON_COMMANDS[args.command](args, payload)
    except (InputError, ResourceError) as exc:
        print(f"totpos {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TotposError as exc:
        print(f"totpos {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = {"command": args.command, "input_digest": _digest(raw),
              "tol": args.tol, "seed": args.seed}
    report.update(fields)
    print(render(report, args.format))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
