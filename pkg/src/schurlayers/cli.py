"""Command-line front end.

Every command prints one JSON document on stdout. Exit codes: 0 ok,
1 verification failure, 2 usage or input error. Randomized commands default
to ``--seed 0``.

    schurlayers decompose --kind graph --n 4 --in A.json
    schurlayers basis-dim --spec spec.json [--spec-out out.json] [--emit-basis basis.json]
    schurlayers count --kind {ign,dws,wreath,deepsets} [--n N] [--dims a,b,c] [--k K] [--base spec.json] [--oracle]
    schurlayers verify --spec spec.json --layer layer.json [--trials 100] [--seed 0] [--tol 1e-9]
    schurlayers report
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .exceptions import SchurLayersError
from .groups import (
    ActionSpec,
    MatrixConj,
    Permutation,
    VectorPerm,
    WeightSpace,
    WeightSpacePoint,
    WreathTuple,
    spec_from_json,
)
from .oracle import check_equivariance, equivariant_basis
from .schur import SchurCoefficients

__all__ = ["CommandResult", "run", "main", "DEFAULT_SEED"]

DEFAULT_SEED = 0
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class CommandResult:
    status: str
    payload: dict
    diagnostics: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    def __post_init__(self):
        if (self.status == "ok") != (self.exit_code == EXIT_OK):
            raise ValueError("exit code 0 iff status ok")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ok(payload) -> CommandResult:
    return CommandResult("ok", payload)


def _dims(text: str | None) -> tuple[int, ...]:
    if not text:
        raise UsageError("--dims is required, e.g. --dims 2,3,2")
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--dims must be comma-separated integers, got {text!r}") from None


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this kind")
    return value


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _read_input(path: str | None):
    if path is None or path == "-":
        return json.load(sys.stdin)
    return _load_json(path)


def _json_spec(value) -> ActionSpec:
    data = _load_json(value) if isinstance(value, str) else value
    return spec_from_json(data)


# decompose ---------------------------------------------------------------

def _cmd_decompose(args) -> CommandResult:
    data = _read_input(args.input)
    if args.kind == "vector":
        from .deepsets import decompose_vector

        x = np.asarray(data, dtype=float)
        if args.n is not None and x.shape != (args.n,):
            raise UsageError(f"expected a vector of length {args.n}, got shape {x.shape}")
        dec = decompose_vector(x)
        resid = {"reconstruction": float(np.abs(dec.reconstruct() - x).max()),
                 "residual_sum": float(abs(dec.residual.sum()))}
        return _ok({"kind": "vector", "components": {"mean": dec.mean, "mean_part": dec.mean_part.tolist(),
                                                      "residual": dec.residual.tolist()}, "residuals": resid})
    if args.kind == "graph":
        from .graph import constraint_residuals, decompose_matrix, decompose_matrix_n2

        A = np.asarray(data, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise UsageError(f"expected a square matrix, got shape {A.shape}")
        if args.n is not None and A.shape[0] != args.n:
            raise UsageError(f"expected a {args.n}x{args.n} matrix, got shape {A.shape}")
        dec = decompose_matrix_n2(A) if A.shape[0] == 2 else decompose_matrix(A)
        comps = {f"v{i}": p.tolist() for i, p in enumerate(dec.parts())}
        return _ok({"kind": "graph", "components": comps, "residuals": constraint_residuals(dec, A)})
    from .weight_space import decompose_weightspace

    v = WeightSpacePoint.from_json(data) if isinstance(data, dict) else None
    if v is None:
        v = WeightSpacePoint.from_flat(_dims(args.dims), np.asarray(data, dtype=float))
    elif args.dims and _dims(args.dims) != v.dims:
        raise UsageError(f"--dims {args.dims} does not match the input dims {v.dims}")
    dec = decompose_weightspace(v)
    flat = v.flatten()
    comps = [{"label": c.label.to_json(), "slot": c.slot, "where": c.where, "coords": c.coords.tolist()}
             for c in dec]
    scale = max(float(np.abs(flat).max()), 1e-12)
    resid = {"reconstruction": float(np.abs(dec.reconstruct() - flat).max()) / scale}
    return _ok({"kind": "dws", "dims": list(v.dims), "components": comps, "residuals": resid})


# basis-dim ---------------------------------------------------------------

def _cmd_basis_dim(args) -> CommandResult:
    spec_in = _json_spec(_need(args.spec, "--spec"))
    spec_out = _json_spec(args.spec_out) if args.spec_out else "same"
    basis = equivariant_basis(spec_in, spec_out)
    if args.emit_basis:
        with open(args.emit_basis, "w") as fh:
            json.dump(basis.to_json(), fh)
    return _ok({"dim": basis.dim})


# count -------------------------------------------------------------------

def _count_payload(closed: int, spec: ActionSpec | None, oracle: bool, spec_out="same", extra=None) -> dict:
    payload = dict(extra or {})
    if not oracle:
        payload["dim"] = closed
        return payload
    dim = equivariant_basis(spec, spec_out).dim
    payload.update(closed_form=closed, oracle=dim, match=closed == dim)
    return payload


def _cmd_count(args) -> CommandResult:
    kind = args.kind
    if kind == "deepsets":
        n = _need(args.n, "--n")
        payload = _count_payload(2 if n >= 2 else 1, VectorPerm(n), args.oracle)
    elif kind == "ign":
        from .graph import ign_basis_dim

        n = _need(args.n, "--n")
        payload = _count_payload(ign_basis_dim(n), MatrixConj(n), args.oracle)
    elif kind == "dws":
        from .weight_space import dws_multiplicities

        dims = _dims(args.dims)
        mult = dws_multiplicities(dims)
        extra = {"multiplicities": mult.to_json()} if args.verbose else None
        payload = _count_payload(mult.param_count, WeightSpace(dims), args.oracle, extra=extra)
    else:
        from .wreath import wreath_counts

        k = _need(args.k, "--k")
        if args.base:
            base = _json_spec(args.base)
        elif args.n is not None:
            base = VectorPerm(args.n)
        elif args.dims:
            base = WeightSpace(_dims(args.dims))
        else:
            raise UsageError("wreath counts need --base FILE, --n (deepsets base) or --dims (weight-space base)")
        outer = None
        if args.outer:
            outer = tuple(Permutation(tuple(p)) for p in json.loads(args.outer))
        spec = WreathTuple(base, k, outer)
        counts = wreath_counts(spec)
        payload = _count_payload(counts["total"], spec, args.oracle, extra=counts)
    if payload.get("match") is False:
        return CommandResult("fail", payload, ["closed form and oracle disagree"], EXIT_FAIL)
    return _ok(payload)


# verify ------------------------------------------------------------------

def _layer_from_json(spec: ActionSpec, data: dict):
    if "matrix" in data:
        L = np.asarray(data["matrix"], dtype=float)
        if L.shape != (spec.dim, spec.dim):
            raise UsageError(f"layer matrix has shape {L.shape}, expected {(spec.dim, spec.dim)}")
        return lambda x: spec.unflatten(L @ spec.flatten(x))
    if isinstance(spec, WreathTuple) and "a" in data:
        from .wreath import WreathCoefficients, fixed_basis, wreath_layer

        coeffs = WreathCoefficients.from_json(data)
        basis = fixed_basis(spec.base)
        return lambda t: wreath_layer(coeffs, t, basis)
    if "coefficients" in data:
        from .spaces import layout, schur_layer

        coeffs = SchurCoefficients.from_json(data["coefficients"])
        coeffs.validate(layout(spec))
        return lambda x: schur_layer(spec, coeffs, x)
    raise UsageError('layer JSON needs "matrix", "coefficients" or (for tuples) "a"')


def _cmd_verify(args) -> CommandResult:
    spec = _json_spec(_need(args.spec, "--spec"))
    layer = _layer_from_json(spec, _load_json(_need(args.layer, "--layer")))
    report = check_equivariance(layer, spec, trials=args.trials, tol=args.tol, seed=args.seed)
    if report.passed:
        return _ok(report.to_json())
    return CommandResult("fail", report.to_json(), [f"max relative violation {report.max_relative_violation:.3e} "
                                                     f"exceeds tol {args.tol:g}"], EXIT_FAIL)


# report ------------------------------------------------------------------

def _cmd_report(args) -> CommandResult:
    from .acceptance import CRITERIA, CriterionResult, summary

    results, diagnostics = [], []
    for number, check in enumerate(CRITERIA, start=1):
        try:
            results.append(check())
        except Exception as exc:  # keep the report valid JSON
            diagnostics.append(f"criterion {number} raised {type(exc).__name__}: {exc}")
            results.append(CriterionResult(number, check.__name__, False, 0.0,
                                           [{"case": "error", "error": str(exc), "pass": False}]))
    payload = summary(results)
    diagnostics += [r.line() for r in results]
    if payload["pass"]:
        return CommandResult("ok", payload, diagnostics)
    return CommandResult("fail", payload, diagnostics, EXIT_FAIL)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schurlayers", description="Equivariant layers via irreducible decompositions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="split a vector, matrix or weight-space point into irreducible parts")
    p.add_argument("--kind", required=True, choices=["vector", "graph", "dws"])
    p.add_argument("--n", type=int)
    p.add_argument("--dims")
    p.add_argument("--in", dest="input", metavar="FILE", help="JSON input (default: stdin)")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("basis-dim", help="oracle dimension of the equivariant maps of a spec")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("--spec-out", metavar="FILE")
    p.add_argument("--emit-basis", metavar="FILE")
    p.set_defaults(func=_cmd_basis_dim)

    p = sub.add_parser("count", help="closed-form parameter counts, optionally checked by the oracle")
    p.add_argument("--kind", required=True, choices=["ign", "dws", "wreath", "deepsets"])
    p.add_argument("--n", type=int)
    p.add_argument("--dims")
    p.add_argument("--k", type=int)
    p.add_argument("--base", metavar="FILE", help="base-space spec JSON for wreath counts")
    p.add_argument("--outer", help="JSON list of slot permutations generating H (default: S_k)")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--verbose", action="store_true", help="include multiplicities for dws")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("verify", help="randomized equivariance check of a layer")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("--layer", required=True, metavar="FILE")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="run the acceptance suite")
    p.set_defaults(func=_cmd_report)
    return parser


def run(argv: list[str]) -> CommandResult:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return CommandResult("fail", {"error": str(exc)}, [f"usage: {exc}"], EXIT_USAGE)
    except json.JSONDecodeError as exc:
        return CommandResult("fail", {"error": f"malformed JSON: {exc}"}, [f"malformed JSON: {exc}"], EXIT_USAGE)
    except (OSError, SchurLayersError, ValueError, KeyError, TypeError) as exc:
        msg = f"{type(exc).__name__}: {exc}"
        return CommandResult("fail", {"error": msg}, [msg], EXIT_USAGE)


def main(argv: list[str] | None = None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    print(json.dumps(result.payload))
    for line in result.diagnostics:
        print(line, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
