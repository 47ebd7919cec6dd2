"""Brute-force ground truth for equivariant linear maps.

:func:`equivariant_basis` solves ``L P_in(g) = P_out(g) L`` for every generator
``g`` by sparse Gauss-Jordan elimination over the ``D_out * D_in`` entries of
``L``.  :func:`orbital_count` counts orbits of the group on index pairs with a
union-find, which for permutation actions gives the same dimension by an
unrelated route.  :func:`check_equivariance` tests a black-box layer on random
inputs and random group words.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import DimensionError, InvalidInputError, ResourceError
from .groups import ActionSpec
from .linalg import rank, sparse_nullspace

__all__ = [
    "EquivariantBasis",
    "EquivarianceReport",
    "equivariant_basis",
    "commutation_constraints",
    "orbital_count",
    "check_equivariance",
    "DEFAULT_BUDGET",
    "basis_rank",
]

DEFAULT_BUDGET = 20_000


@dataclass(frozen=True, eq=False)
class EquivariantBasis:
    dim: int
    basis: list = field(repr=False)

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": [B.tolist() for B in self.basis]}


@dataclass(frozen=True)
class EquivarianceReport:
    trials: int
    max_relative_violation: float
    seed: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_relative_violation <= self.tol

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "max_relative_violation": self.max_relative_violation,
            "seed": self.seed,
            "tol": self.tol,
            "pass": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _resolve_out(spec_in: ActionSpec, spec_out) -> ActionSpec:
    return spec_in if spec_out is None or spec_out == "same" else spec_out


def commutation_constraints(spec_in: ActionSpec, spec_out="same") -> list[dict[int, float]]:
    """Sparse rows of ``vec(L P_in - P_out L) = 0`` for all generators (``L`` row-major)."""
    spec_out = _resolve_out(spec_in, spec_out)
    gens = spec_in.generators()
    if not gens:
        raise InvalidInputError("the input space has no generators")
    d_in, d_out = spec_in.dim, spec_out.dim
    a = np.repeat(np.arange(d_out), d_in)
    b = np.tile(np.arange(d_in), d_out)
    rows = []
    for g in gens:
        idx_in = spec_in.gather_index(g)
        idx_out = spec_out.gather_index(g)
        # P x = x[idx]:  (L P_in)[a, b] = L[a, idx_in^-1(b)],  (P_out L)[a, b] = L[idx_out(a), b]
        inv_in = np.argsort(idx_in)
        plus = a * d_in + inv_in[b]
        minus = idx_out[a] * d_in + b
        for p, m in zip(plus.tolist(), minus.tolist()):
            if p != m:
                rows.append({p: 1.0, m: -1.0})
    return rows


def equivariant_basis(
    spec_in: ActionSpec,
    spec_out="same",
    budget: int = DEFAULT_BUDGET,
    tol: float = 1e-9,
) -> EquivariantBasis:
    """Dimension and a basis of all linear maps commuting with the group action."""
    spec_out = _resolve_out(spec_in, spec_out)
    d_in, d_out = spec_in.dim, spec_out.dim
    n_unknowns = d_in * d_out
    if n_unknowns > budget:
        raise ResourceError(f"{n_unknowns} unknowns exceed the budget of {budget}")
    rows = commutation_constraints(spec_in, spec_out)
    N = sparse_nullspace(rows, n_unknowns, tol=tol)
    basis = [N[:, k].reshape(d_out, d_in) for k in range(N.shape[1])]
    return EquivariantBasis(len(basis), basis)


def orbital_count(spec_in: ActionSpec, spec_out="same") -> int:
    """Number of orbits of the group on pairs (output index, input index)."""
    spec_out = _resolve_out(spec_in, spec_out)
    gens = spec_in.generators()
    if not gens:
        raise InvalidInputError("the input space has no generators")
    d_in, d_out = spec_in.dim, spec_out.dim
    parent = np.arange(d_in * d_out)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for g in gens:
        # g moves pair (i, j) to (idx_out^-1(i), idx_in^-1(j))
        src_out = np.argsort(spec_out.gather_index(g))
        src_in = np.argsort(spec_in.gather_index(g))
        image = (src_out[:, None] * d_in + src_in[None, :]).ravel()
        for x, y in enumerate(image.tolist()):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    return len({find(x) for x in range(d_in * d_out)})


def _max_abs(v: np.ndarray) -> float:
    return float(np.abs(v).max()) if v.size else 0.0


def check_equivariance(
    layer: Callable,
    spec: ActionSpec,
    trials: int = 100,
    tol: float = 1e-9,
    seed: int = 0,
    max_word: int = 4,
) -> EquivarianceReport:
    """Compare ``layer(g . x)`` with ``g . layer(x)`` on random inputs and random generator words.

    ``layer`` takes and returns elements in the natural form of ``spec``
    (vector, matrix, :class:`WeightSpacePoint` or tuple).
    """
    if trials < 1:
        raise InvalidInputError("need at least one trial")
    gens = spec.generators()
    if not gens:
        raise InvalidInputError("the space has no generators")
    letters = gens + [g.inverse() for g in gens]
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = spec.unflatten(rng.standard_normal(spec.dim))
        word = [letters[i] for i in rng.integers(len(letters), size=int(rng.integers(1, max_word + 1)))]
        gx = x
        for g in reversed(word):
            gx = spec.act(g, gx)
        y = layer(x)
        flat_y = spec.flatten(y)
        if flat_y.shape != (spec.dim,):
            raise DimensionError(f"layer output has {flat_y.size} entries, expected {spec.dim}")
        gy = y
        for g in reversed(word):
            gy = spec.act(g, gy)
        diff = spec.flatten(layer(gx)) - spec.flatten(gy)
        worst = max(worst, _max_abs(diff) / max(_max_abs(flat_y), 1e-12))
    return EquivarianceReport(trials, worst, seed, tol)


def basis_rank(mats, tol: float = 1e-9) -> int:
    """Rank of a family of matrices, via their stacked vectorisations."""
    return rank(np.stack([np.asarray(m, dtype=float).ravel() for m in mats]), tol=tol)
