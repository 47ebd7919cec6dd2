"""S_n acting on R^n: constants plus zero-sum vectors, and the two-parameter layer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, InvalidInputError
from .groups import VectorPerm
from .schur import Decomposition, IrrepComponent, IsoClassLabel

__all__ = ["DeepSetsDecomposition", "decompose_vector", "deepsets_layer", "deepsets_decomposition"]


@dataclass(frozen=True, eq=False)
class DeepSetsDecomposition:
    mean: float
    residual: np.ndarray

    @property
    def n(self) -> int:
        return self.residual.shape[0]

    @property
    def mean_part(self) -> np.ndarray:
        return np.full(self.n, self.mean)

    def reconstruct(self) -> np.ndarray:
        return self.mean_part + self.residual


def _as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {x.shape}")
    if x.shape[0] < 2:
        raise InvalidInputError(f"need n >= 2, got n = {x.shape[0]}")
    return x


def decompose_vector(x) -> DeepSetsDecomposition:
    x = _as_vector(x)
    mean = x.sum() / x.shape[0]
    return DeepSetsDecomposition(float(mean), x - mean)


def deepsets_layer(a: float, b: float, x) -> np.ndarray:
    """``a * mean(x) * 1 + b * (x - mean(x) * 1)``."""
    d = decompose_vector(x)
    return a * d.mean_part + b * d.residual


def deepsets_decomposition(x, spec: VectorPerm | None = None) -> Decomposition:
    """Generic form: one ``Trivial`` slot (coefficient on ``1/sqrt(n)``) and one ``Vec(0, n)`` slot."""
    d = decompose_vector(x)
    n = d.n
    unit = np.full(n, 1.0 / np.sqrt(n))
    comps = (
        IrrepComponent(IsoClassLabel.trivial(), 0, np.array([d.mean * np.sqrt(n)]),
                       lambda c: c[0] * unit, "mean"),
        IrrepComponent(IsoClassLabel.vec(0, n), 0, d.residual,
                       lambda c: np.array(c, dtype=float), "residual"),
    )
    return Decomposition(comps, n, spec if spec is not None else VectorPerm(n))
