"""Route an :class:`ActionSpec` to its irreducible decomposition and Schur layer."""

from __future__ import annotations

import numpy as np

from .exceptions import UnsupportedError
from .groups import ActionSpec, MatrixConj, VectorPerm, WeightSpace, WreathTuple
from .schur import Decomposition, SchurCoefficients, assemble_layer, basis_keys

__all__ = ["decompose", "layout", "schur_layer", "basis_layers", "layer_matrix"]


def decompose(spec: ActionSpec, x) -> Decomposition:
    """Irreducible decomposition of ``x`` (given in the natural form of ``spec``)."""
    if isinstance(spec, VectorPerm):
        if not spec.is_full_symmetric:
            raise UnsupportedError("no decomposition for permutation subgroups")
        from .deepsets import deepsets_decomposition
        return deepsets_decomposition(spec.flatten(x), spec)
    if isinstance(spec, MatrixConj):
        from .graph import graph_decomposition
        return graph_decomposition(spec.unflatten(spec.flatten(x)), spec)
    if isinstance(spec, WeightSpace):
        from .weight_space import decompose_weightspace
        return decompose_weightspace(x, spec)
    if isinstance(spec, WreathTuple):
        from .wreath import decompose_tuple
        return decompose_tuple(spec, x)
    raise UnsupportedError(f"no decomposition for {spec.kind}")


def layout(spec: ActionSpec) -> dict:
    """Multiplicity of each isomorphism class in ``spec``."""
    return decompose(spec, spec.zeros()).layout()


def schur_layer(spec: ActionSpec, coeffs: SchurCoefficients, x):
    return spec.unflatten(assemble_layer(coeffs, decompose(spec, x)))


def layer_matrix(spec: ActionSpec, fn) -> np.ndarray:
    """Dense matrix of a linear map on ``spec``, built column by column."""
    D = spec.dim
    cols = [spec.flatten(fn(spec.unflatten(e))) for e in np.eye(D)]
    return np.stack(cols, axis=1)


def basis_layers(spec: ActionSpec) -> list[np.ndarray]:
    """Matrices of the layers with a single unit Schur coefficient, one per key."""
    keys = basis_keys(layout(spec))
    decomps = [decompose(spec, spec.unflatten(e)) for e in np.eye(spec.dim)]
    mats = []
    for key in keys:
        coeffs = SchurCoefficients({key: 1.0})
        mats.append(np.stack([assemble_layer(coeffs, d) for d in decomps], axis=1))
    return mats
