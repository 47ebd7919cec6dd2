"""Irreducible decomposition of MLP weight spaces and the equivariant layers built on it.

Each weight and bias block is decomposed on its own:

* ``b_m`` (m < M): mean (Trivial) + zero-sum residual (``Vec(m)``)
* ``b_M``: d_M independent Trivial scalars
* ``W_1``: every column splits like a bias of layer 1
* ``W_M``: every row splits like a vector permuted by layer M-1
* ``W_m`` (1 < m < M): global mean (Trivial), zero-sum row profile (``Vec(m)``),
  zero-sum column profile (``Vec(m-1)``) and a doubly centred remainder (``Mat(m)``)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import InvalidInputError, LayoutError
from .groups import WeightSpace, WeightSpacePoint
from .schur import Decomposition, IrrepComponent, IsoClassLabel, SchurCoefficients, assemble_layer

__all__ = [
    "ArchSpec",
    "WeightSpacePoint",
    "DwsMultiplicities",
    "dws_multiplicities",
    "decompose_weightspace",
    "dws_layer",
    "dws_param_count",
    "irrep_dimension",
    "total_irrep_dimension",
]


@dataclass(frozen=True)
class ArchSpec:
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 3 or min(dims) < 2:
            raise InvalidInputError(f"need depth M >= 2 and all widths >= 2, got dims {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def depth(self) -> int:
        return len(self.dims) - 1

    @property
    def total_dim(self) -> int:
        d = self.dims
        return sum(d[m] * d[m - 1] + d[m] for m in range(1, len(d)))

    def space(self) -> WeightSpace:
        return WeightSpace(self.dims)


def _arch(arch) -> ArchSpec:
    if isinstance(arch, ArchSpec):
        return arch
    if isinstance(arch, WeightSpace):
        return ArchSpec(arch.dims)
    return ArchSpec(tuple(arch))


@dataclass(frozen=True)
class DwsMultiplicities:
    alpha: int
    beta: tuple
    mat_classes: tuple

    @property
    def param_count(self) -> int:
        return self.alpha ** 2 + sum(b * b for b in self.beta) + len(self.mat_classes)

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": list(self.beta), "mat_classes": [str(m) for m in self.mat_classes]}


def irrep_dimension(label: IsoClassLabel) -> int:
    if label.tag == "Trivial":
        return 1
    if label.tag == "Vec":
        return label.params[1] - 1
    if label.tag == "Mat":
        return (label.params[1] - 1) * (label.params[2] - 1)
    raise InvalidInputError(f"{label} is not a weight-space class")


def _const(n: int) -> np.ndarray:
    return np.full(n, 1.0 / np.sqrt(n))


def _components(v: WeightSpacePoint) -> list[IrrepComponent]:
    dims = v.dims
    M = v.depth
    D = sum(dims[m] * dims[m - 1] + dims[m] for m in range(1, M + 1))
    triv = IsoClassLabel.trivial()
    counters: dict[IsoClassLabel, int] = {}
    comps: list[IrrepComponent] = []

    def add(label, coords, place, where):
        slot = counters.get(label, 0)
        counters[label] = slot + 1

        def embed(c, place=place):
            out = np.zeros(D)
            idx, values = place(np.asarray(c, dtype=float))
            out[idx] = values
            return out

        comps.append(IrrepComponent(label, slot, np.atleast_1d(np.asarray(coords, dtype=float)), embed, where))

    offset = 0
    for m in range(1, M + 1):
        rows, cols = dims[m], dims[m - 1]
        W, b = v.weights[m - 1], v.biases[m - 1]
        w_idx = offset + np.arange(rows * cols).reshape(rows, cols)
        b_idx = offset + rows * cols + np.arange(rows)
        offset += rows * cols + rows

        if m == 1:
            u = _const(rows)
            for j in range(cols):
                col = W[:, j]
                mean = col.sum() / rows
                add(triv, mean * np.sqrt(rows), lambda c, i=w_idx[:, j], u=u: (i, c[0] * u), f"W1[:,{j}]:mean")
                add(IsoClassLabel.vec(1, rows), col - mean, lambda c, i=w_idx[:, j]: (i, c), f"W1[:,{j}]:residual")
        elif m == M:
            u = _const(cols)
            for i in range(rows):
                row = W[i, :]
                mean = row.sum() / cols
                add(triv, mean * np.sqrt(cols), lambda c, k=w_idx[i, :], u=u: (k, c[0] * u), f"W{M}[{i},:]:mean")
                add(IsoClassLabel.vec(M - 1, cols), row - mean, lambda c, k=w_idx[i, :]: (k, c),
                    f"W{M}[{i},:]:residual")
        else:
            mean = W.sum() / (rows * cols)
            B = W - mean
            r = B.sum(axis=1) / cols
            c_ = B.sum(axis=0) / rows
            C = B - np.outer(r, np.ones(cols)) - np.outer(np.ones(rows), c_)
            unit = 1.0 / np.sqrt(rows * cols)
            flat = w_idx.ravel()
            add(triv, mean * np.sqrt(rows * cols), lambda c, i=flat, u=unit: (i, np.full(i.size, c[0] * u)),
                f"W{m}:mean")
            add(IsoClassLabel.vec(m, rows), r, lambda c, i=flat, k=cols: (i, np.repeat(c, k)), f"W{m}:rows")
            add(IsoClassLabel.vec(m - 1, cols), c_, lambda c, i=flat, k=rows: (i, np.tile(c, k)), f"W{m}:cols")
            add(IsoClassLabel.mat(m, rows, cols), C.ravel(), lambda c, i=flat: (i, c), f"W{m}:matrix")

        if m < M:
            mean = b.sum() / rows
            add(triv, mean * np.sqrt(rows), lambda c, i=b_idx, u=_const(rows): (i, c[0] * u), f"b{m}:mean")
            add(IsoClassLabel.vec(m, rows), b - mean, lambda c, i=b_idx: (i, c), f"b{m}:residual")
        else:
            for i in range(rows):
                add(triv, b[i], lambda c, k=b_idx[i]: ([k], c[:1]), f"b{M}[{i}]")
    return comps


def decompose_weightspace(v: WeightSpacePoint, spec: WeightSpace | None = None) -> Decomposition:
    """Irreducible components of ``v``, in block order W1, b1, W2, b2, ..."""
    ArchSpec(v.dims)
    if spec is not None:
        spec.flatten(v)
    comps = _components(v)
    return Decomposition(tuple(comps), sum(x.size for x in v.weights) + sum(x.size for x in v.biases),
                         spec if spec is not None else WeightSpace(v.dims))


def dws_multiplicities(arch) -> DwsMultiplicities:
    """Count classes by enumerating the block decompositions; checked against the closed form for M >= 3."""
    arch = _arch(arch)
    layout = decompose_weightspace(WeightSpacePoint.zeros(arch.dims)).layout()
    M, d = arch.depth, arch.dims
    alpha = layout.get(IsoClassLabel.trivial(), 0)
    beta = tuple(layout.get(IsoClassLabel.vec(m, d[m]), 0) for m in range(1, M))
    mats = tuple(label for label in layout if label.tag == "Mat")
    if any(layout[label] != 1 for label in mats):
        raise AssertionError("each matrix class must occur exactly once")
    if M >= 3:
        expected_beta = (d[0] + 2,) + (3,) * (M - 3) + (d[M] + 2,)
        if alpha != d[0] + 2 * d[M] + 2 * M - 3 or beta != expected_beta:
            raise AssertionError(f"enumerated multiplicities {alpha}, {beta} disagree with the closed form")
    return DwsMultiplicities(alpha, beta, mats)


def dws_param_count(arch) -> int:
    return dws_multiplicities(arch).param_count


def dws_layer(coeffs: SchurCoefficients, v: WeightSpacePoint) -> WeightSpacePoint:
    decomp = decompose_weightspace(v)
    try:
        out = assemble_layer(coeffs, decomp)
    except LayoutError as exc:
        raise LayoutError(f"coefficients do not fit dims {v.dims}: {exc}") from None
    return WeightSpacePoint.from_flat(v.dims, out)


def total_irrep_dimension(arch: Sequence[int] | ArchSpec) -> int:
    """Sum of irreducible dimensions times multiplicities; equals the parameter count of the MLP."""
    arch = _arch(arch)
    layout = decompose_weightspace(WeightSpacePoint.zeros(arch.dims)).layout()
    return sum(irrep_dimension(label) * n for label, n in layout.items())
