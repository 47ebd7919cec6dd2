"""Acceptance suite shared by ``tests/test_acceptance.py`` and ``schurlayers report``.

Each check returns one :class:`CriterionResult` per criterion; individual
cases are listed in ``details`` so a failure says which case broke.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .deepsets import deepsets_layer
from .graph import constraint_residuals, decompose_matrix, graph_decomposition, ign_basis_dim, ign_layer
from .groups import MatrixConj, Permutation, Trivial, VectorPerm, WeightSpace, WeightSpacePoint, WreathTuple
from .linalg import rank
from .oracle import basis_rank, check_equivariance, equivariant_basis
from .schur import SchurCoefficients
from .spaces import layout
from .weight_space import (
    ArchSpec,
    decompose_weightspace,
    dws_layer,
    dws_multiplicities,
    dws_param_count,
    total_irrep_dimension,
)
from .wreath import WreathCoefficients, fixed_basis, subgroup_h, wreath_basis_layers, wreath_counts, wreath_layer

__all__ = ["CriterionResult", "CRITERIA", "run_all", "summary"]

ORACLE_SECONDS = 5.0
ROUNDTRIP_SECONDS = 10.0
ROUNDTRIP_TOL = 1e-10
EQUIVARIANCE_TOL = 1e-9
BROKEN_THRESHOLD = 1e-2


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    details: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [d for d in self.details if not d.get("pass", True)]
        extra = f"; failing: {failed}" if failed else ""
        return f"[{status}] criterion {self.number}: {self.name} ({len(self.details)} cases, {self.seconds:.2f}s){extra}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "pass": bool(self.passed),
                "seconds": round(self.seconds, 4), "details": _plain(self.details)}


def _plain(obj):
    """Replace numpy scalars so the result is accepted by ``json.dumps``."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _timed_dim(spec_in, spec_out="same"):
    t0 = time.perf_counter()
    dim = equivariant_basis(spec_in, spec_out).dim
    return dim, time.perf_counter() - t0


def _case(name, got, expected, seconds=None, limit=None) -> dict:
    ok = got == expected and (limit is None or seconds < limit)
    d = {"case": name, "got": got, "expected": expected, "pass": bool(ok)}
    if seconds is not None:
        d["seconds"] = round(seconds, 4)
    return d


def _result(number, name, t0, details) -> CriterionResult:
    return CriterionResult(number, name, all(d["pass"] for d in details), time.perf_counter() - t0, details)


WS_ARCHS = [(2, 3, 2), (2, 3, 4, 2), (3, 4, 4, 4, 3)]


def criterion_1() -> CriterionResult:
    t0 = time.perf_counter()
    details = []
    for n in range(2, 9):
        dim, sec = _timed_dim(VectorPerm(n))
        details.append(_case(f"S_{n} on R^{n}", dim, 2, sec, ORACLE_SECONDS))
    for n in (2, 3, 4, 5, 6):
        dim, sec = _timed_dim(MatrixConj(n))
        details.append(_case(f"S_{n} on R^{n}x{n}", dim, ign_basis_dim(n), sec, ORACLE_SECONDS))
    for dims in WS_ARCHS:
        spec = WeightSpace(dims)
        dim, sec = _timed_dim(spec)
        details.append(_case(f"weight space {dims}", dim, dws_param_count(dims), sec, ORACLE_SECONDS))
        dim, sec = _timed_dim(spec, Trivial(1))
        details.append(_case(f"invariant maps {dims}", dim, dws_multiplicities(dims).alpha, sec, ORACLE_SECONDS))
    return _result(1, "commutant dimensions match closed forms", t0, details)


def _wreath_total(spec: WreathTuple, name: str) -> dict:
    dim, sec = _timed_dim(spec)
    counts = wreath_counts(spec)
    d = _case(name, dim, counts["siamese"] + counts["nonsiamese"])
    d.update(siamese=counts["siamese"], nonsiamese=counts["nonsiamese"], seconds=round(sec, 4))
    return d


def criterion_2() -> CriterionResult:
    t0 = time.perf_counter()
    details = [
        _wreath_total(WreathTuple(VectorPerm(3), 2), "deepsets n=3, k=2"),
        _wreath_total(WreathTuple(VectorPerm(3), 3), "deepsets n=3, k=3"),
        _wreath_total(WreathTuple(MatrixConj(4), 2), "graphs n=4, k=2"),
        _wreath_total(WreathTuple(WeightSpace((2, 2, 2)), 2), "weight space (2,2,2), k=2"),
    ]
    expected = {"deepsets n=3, k=2": 3, "deepsets n=3, k=3": 3, "graphs n=4, k=2": 19}
    for d in details:
        if d["case"] in expected and d["got"] != expected[d["case"]]:
            d["pass"] = False
    alpha = dws_multiplicities((2, 2, 2)).alpha
    details.append(_case("alpha for (2,2,2)", alpha, 7))
    details[3]["pass"] = details[3]["pass"] and details[3]["nonsiamese"] == alpha ** 2
    return _result(2, "wreath totals equal Siamese + s^2", t0, details)


def _cyclic(k):
    return [Permutation.cycle(k)]


def _dihedral(k):
    return [Permutation.cycle(k), Permutation(tuple((-i) % k for i in range(k)))]


def criterion_3() -> CriterionResult:
    t0 = time.perf_counter()
    details = [
        _case("h for S_4", subgroup_h([Permutation.transposition(4), Permutation.cycle(4)], 4), 2),
        _case("h for C_4", subgroup_h(_cyclic(4), 4), 4),
        _case("h for D_4", subgroup_h(_dihedral(4), 4), 3),
    ]
    spec = WreathTuple(VectorPerm(3), 4, tuple(_cyclic(4)))
    dim, sec = _timed_dim(spec)
    details.append(_case("deepsets n=3 wr C_4", dim, 5, sec, ORACLE_SECONDS))
    details.append(_case("closed-form total for C_4", wreath_counts(spec)["total"], 5))
    return _result(3, "subgroup h and total beyond S_k", t0, details)


def _ws_residuals(v: WeightSpacePoint) -> tuple[float, float]:
    dec = decompose_weightspace(v)
    flat = v.flatten()
    scale = max(np.abs(flat).max(), 1e-12)
    recon = float(np.abs(dec.reconstruct() - flat).max()) / scale
    worst = 0.0
    for comp in dec:
        if comp.label.tag == "Vec":
            worst = max(worst, abs(comp.coords.sum()))
        elif comp.label.tag == "Mat":
            _, rows, cols = comp.label.params
            C = comp.coords.reshape(rows, cols)
            worst = max(worst, np.abs(C.sum(axis=0)).max(), np.abs(C.sum(axis=1)).max())
    return recon, float(worst) / scale


def criterion_4(samples: int = 200, seed: int = 0) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    details = []
    for n in range(3, 9):
        worst_r = worst_c = 0.0
        for _ in range(samples):
            A = rng.standard_normal((n, n))
            res = constraint_residuals(decompose_matrix(A), A)
            worst_r = max(worst_r, res.pop("reconstruction"))
            worst_c = max(worst_c, max(res.values()))
            worst_r = max(worst_r, float(np.abs(graph_decomposition(A).reconstruct() - A.ravel()).max()
                                        / np.abs(A).max()))
        details.append({"case": f"graph n={n}", "reconstruction": worst_r, "constraints": worst_c,
                        "pass": worst_r <= ROUNDTRIP_TOL and worst_c <= ROUNDTRIP_TOL})
    for dims in [(2, 3, 2), (3, 4, 3), (2, 3, 4, 2), (4, 5, 5, 4)]:
        worst_r = worst_c = 0.0
        for _ in range(samples):
            v = WeightSpacePoint.from_flat(dims, rng.standard_normal(ArchSpec(dims).total_dim))
            r, c = _ws_residuals(v)
            worst_r, worst_c = max(worst_r, r), max(worst_c, c)
        details.append({"case": f"weight space {dims}", "reconstruction": worst_r, "constraints": worst_c,
                        "pass": worst_r <= ROUNDTRIP_TOL and worst_c <= ROUNDTRIP_TOL})
    elapsed = time.perf_counter() - t0
    details.append({"case": "total runtime", "seconds": round(elapsed, 3), "pass": elapsed < ROUNDTRIP_SECONDS})
    return _result(4, "decomposition round trips", t0, details)


def _report_case(name, report, expect_pass=True) -> dict:
    ok = report.passed if expect_pass else report.max_relative_violation > BROKEN_THRESHOLD
    return {"case": name, "trials": report.trials, "max_relative_violation": report.max_relative_violation,
            "pass": bool(ok)}


def criterion_5(trials: int = 1000, seed: int = 0) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    details = []

    a, b = rng.standard_normal(2)
    spec = VectorPerm(6)
    details.append(_report_case("deepsets", check_equivariance(
        lambda x: deepsets_layer(a, b, x), spec, trials, EQUIVARIANCE_TOL, seed)))

    spec = MatrixConj(5)
    coeffs = SchurCoefficients.random(layout(spec), rng)
    details.append(_report_case("ign", check_equivariance(
        lambda A: ign_layer(coeffs, A), spec, trials, EQUIVARIANCE_TOL, seed)))

    spec = WeightSpace((2, 3, 4, 2))
    coeffs = SchurCoefficients.random(layout(spec), rng)
    details.append(_report_case("dws", check_equivariance(
        lambda v: dws_layer(coeffs, v), spec, trials, EQUIVARIANCE_TOL, seed)))

    spec = WreathTuple(MatrixConj(4), 2)
    basis = fixed_basis(spec.base)
    s = len(basis)
    wc = WreathCoefficients(rng.standard_normal((s, s)), SchurCoefficients.random(layout(spec.base), rng))
    details.append(_report_case("wreath", check_equivariance(
        lambda t: wreath_layer(wc, t, basis), spec, trials, EQUIVARIANCE_TOL, seed)))

    e0 = np.eye(3)[0]
    details.append(_report_case("broken x + e0", check_equivariance(
        lambda x: x + e0, VectorPerm(3), trials, EQUIVARIANCE_TOL, seed), expect_pass=False))
    return _result(5, "randomized equivariance suite", t0, details)


def criterion_6() -> CriterionResult:
    t0 = time.perf_counter()
    details = []
    for name, spec in [("deepsets n=3, k=2", WreathTuple(VectorPerm(3), 2)),
                       ("graphs n=4, k=2", WreathTuple(MatrixConj(4), 2))]:
        mats = wreath_basis_layers(spec)
        oracle = equivariant_basis(spec)
        stacked = basis_rank(mats + oracle.basis)
        d = _case(name, basis_rank(mats), oracle.dim)
        d.update(layers=len(mats), joint_rank=stacked)
        d["pass"] = d["pass"] and len(mats) == oracle.dim and stacked == oracle.dim
        details.append(d)
    return _result(6, "Siamese + slot-mixing layers span the commutant", t0, details)


def _projector(n: int, part: str) -> np.ndarray:
    cols = [getattr(decompose_matrix(E.reshape(n, n)), part).ravel() for E in np.eye(n * n)]
    return np.stack(cols, axis=1)


def criterion_7() -> CriterionResult:
    t0 = time.perf_counter()
    details = []
    for n in range(4, 8):
        half = (n * n - 3 * n) // 2
        details.append(_case(f"dim V5, n={n}", rank(_projector(n, "v5")), half + 1))
        details.append(_case(f"dim V6, n={n}", rank(_projector(n, "v6")), half))
    for dims in WS_ARCHS + [(4, 5, 5, 4)]:
        details.append(_case(f"irreducible dimensions {dims}", total_irrep_dimension(dims), ArchSpec(dims).total_dim))
    return _result(7, "subspace and weight-space dimension audits", t0, details)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


def run_all() -> list[CriterionResult]:
    return [check() for check in CRITERIA]


def summary(results: list[CriterionResult]) -> dict:
    return {"pass": bool(all(r.passed for r in results)), "criteria": [r.to_json() for r in results]}
