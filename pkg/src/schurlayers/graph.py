"""Irreducible decomposition of n x n matrices under simultaneous row/column permutation.

For n >= 4 the space splits into seven invariant irreducibles

    V0 = {b I}                      V1 = {a (J - I)}
    V2 = {diag(d), sum d = 0}       V3 = {r 1^T, sum r = 0}    V4 = {1 c^T, sum c = 0}
    V5 = {A = -A^T, A 1 = 0}        V6 = {A = A^T, A 1 = 0, diag A = 0}

with V0 ~ V1 and V2 ~ V3 ~ V4, giving 2^2 + 3^2 + 1 + 1 = 15 layer parameters.
V6 vanishes for n = 3 (14 parameters); for n = 2 the space is V0 + V1 + V2 + V3
(8 parameters).  The decomposition itself costs O(n^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, InvalidInputError, LayoutError
from .groups import MatrixConj
from .schur import Decomposition, IrrepComponent, IsoClassLabel, SchurCoefficients, assemble_layer

__all__ = [
    "GraphDecomposition",
    "decompose_matrix",
    "decompose_matrix_n2",
    "graph_decomposition",
    "constraint_residuals",
    "ign_layer",
    "ign_basis_dim",
    "subspace_dims",
]


@dataclass(frozen=True, eq=False)
class GraphDecomposition:
    v0: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    v3: np.ndarray
    v4: np.ndarray
    v5: np.ndarray
    v6: np.ndarray

    @property
    def n(self) -> int:
        return self.v0.shape[0]

    def parts(self) -> list[np.ndarray]:
        return [self.v0, self.v1, self.v2, self.v3, self.v4, self.v5, self.v6]

    def reconstruct(self) -> np.ndarray:
        return sum(self.parts())


def _as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def decompose_matrix(A) -> GraphDecomposition:
    """Seven-way split of ``A`` in O(n^2), for n >= 3 (``v6`` is zero when n = 3)."""
    A = _as_square(A)
    n = A.shape[0]
    if n < 3:
        raise InvalidInputError(f"decompose_matrix needs n >= 3, got {n}; use decompose_matrix_n2")
    I, J = np.eye(n), np.ones((n, n))
    diag = np.diag(A)
    b = diag.sum() / n
    a = (A.sum() - diag.sum()) / (n * n - n)
    B = A - a * (J - I) - b * I

    # C = B + r 1^T + 1 c^T + diag(d) must have zero diagonal, rows and columns;
    # per index i < n this is a 2x2 system in (r_i, c_i).
    rB, cB, dB = B.sum(axis=1), B.sum(axis=0), np.diag(B)
    s = 1.0 / (n * n - 2 * n)
    u, v = -rB[:-1] + dB[:-1], -cB[:-1] + dB[:-1]
    r = np.empty(n)
    c = np.empty(n)
    r[:-1] = s * ((n - 1) * u + v)
    c[:-1] = s * (u + (n - 1) * v)
    d = np.empty(n)
    d[:-1] = -dB[:-1] - r[:-1] - c[:-1]
    r[-1], c[-1], d[-1] = -r[:-1].sum(), -c[:-1].sum(), -d[:-1].sum()

    C = B + np.outer(r, np.ones(n)) + np.outer(np.ones(n), c) + np.diag(d)
    v5 = (C - C.T) / 2
    v6 = (C + C.T) / 2 if n > 3 else np.zeros((n, n))
    return GraphDecomposition(
        v0=b * I,
        v1=a * (J - I),
        v2=-np.diag(d),
        v3=-np.outer(r, np.ones(n)),
        v4=-np.outer(np.ones(n), c),
        v5=v5,
        v6=v6,
    )


def _n2_basis() -> np.ndarray:
    # columns: I, J - I, diag(1, -1), (1, -1) 1^T, flattened row-major
    return np.array([
        [1.0, 0.0, 1.0, 1.0],
        [0.0, 1.0, 0.0, 1.0],
        [0.0, 1.0, 0.0, -1.0],
        [1.0, 0.0, -1.0, -1.0],
    ])


def decompose_matrix_n2(A) -> GraphDecomposition:
    """R^{2x2} = V0 + V1 + V2 + V3, by a direct 4x4 linear solve; v4, v5, v6 are zero."""
    A = _as_square(A)
    if A.shape != (2, 2):
        raise DimensionError(f"decompose_matrix_n2 needs a 2x2 matrix, got shape {A.shape}")
    b, a, delta, rho = np.linalg.solve(_n2_basis(), A.ravel())
    I, J, Z = np.eye(2), np.ones((2, 2)), np.zeros((2, 2))
    return GraphDecomposition(
        v0=b * I,
        v1=a * (J - I),
        v2=np.diag([delta, -delta]),
        v3=np.outer([rho, -rho], [1.0, 1.0]),
        v4=Z, v5=Z.copy(), v6=Z.copy(),
    )


def _decompose_any(A) -> GraphDecomposition:
    A = _as_square(A)
    if A.shape[0] == 2:
        return decompose_matrix_n2(A)
    return decompose_matrix(A)


def subspace_dims(n: int) -> list[int]:
    """Dimensions of V0..V6."""
    if n == 2:
        return [1, 1, 1, 1, 0, 0, 0]
    half = (n * n - 3 * n) // 2
    return [1, 1, n - 1, n - 1, n - 1, half + 1, half if n > 3 else 0]


def constraint_residuals(dec: GraphDecomposition, A=None) -> dict[str, float]:
    """Largest violation of each subspace's defining constraints, relative to the input scale."""
    n = dec.n
    ones = np.ones(n)
    scale = max(np.abs(A).max() if A is not None else max(np.abs(p).max() for p in dec.parts()), 1e-12)

    def offdiag(X):
        return X - np.diag(np.diag(X))

    res = {
        "v0": np.abs(dec.v0 - np.diag(dec.v0).mean() * np.eye(n)).max(),
        "v1": np.abs(dec.v1 - offdiag(dec.v1).sum() / max(n * n - n, 1) * (np.ones((n, n)) - np.eye(n))).max(),
        "v2": max(np.abs(offdiag(dec.v2)).max(), abs(np.trace(dec.v2))),
        "v3": max(np.abs(dec.v3 - dec.v3[:, :1]).max(), np.abs(dec.v3.sum(axis=0)).max()),
        "v4": max(np.abs(dec.v4 - dec.v4[:1, :]).max(), np.abs(dec.v4.sum(axis=1)).max()),
        "v5": max(np.abs(dec.v5 + dec.v5.T).max(), np.abs(dec.v5 @ ones).max()),
        "v6": max(np.abs(dec.v6 - dec.v6.T).max(), np.abs(dec.v6 @ ones).max(), np.abs(np.diag(dec.v6)).max()),
    }
    res = {k: float(v) / scale for k, v in res.items()}
    if A is not None:
        res["reconstruction"] = float(np.abs(dec.reconstruct() - A).max()) / scale
    return res


def graph_decomposition(A, spec: MatrixConj | None = None) -> Decomposition:
    """Generic form with classes Trivial x2, Vec(0, n) x3 (x2 for n = 2), GraphAntisym, GraphSymZeroDiag."""
    A = _as_square(A)
    n = A.shape[0]
    dec = _decompose_any(A)
    I, J = np.eye(n), np.ones((n, n))
    ones = np.ones(n)
    e0 = I / np.sqrt(n)
    e1 = (J - I) / np.sqrt(n * n - n)
    triv, vec = IsoClassLabel.trivial(), IsoClassLabel.vec(0, n)

    def flat(f):
        return lambda c: f(np.asarray(c, dtype=float)).ravel()

    comps = [
        IrrepComponent(triv, 0, np.array([dec.v0[0, 0] * np.sqrt(n)]), flat(lambda c: c[0] * e0), "v0"),
        IrrepComponent(triv, 1, np.array([dec.v1[0, 1] * np.sqrt(n * n - n)]), flat(lambda c: c[0] * e1), "v1"),
        IrrepComponent(vec, 0, np.diag(dec.v2).copy(), flat(np.diag), "v2"),
        IrrepComponent(vec, 1, dec.v3[:, 0].copy(), flat(lambda c: np.outer(c, ones)), "v3"),
    ]
    if n >= 3:
        comps.append(IrrepComponent(vec, 2, dec.v4[0, :].copy(), flat(lambda c: np.outer(ones, c)), "v4"))
        comps.append(IrrepComponent(IsoClassLabel.graph_antisym(n), 0, dec.v5.ravel().copy(),
                                    lambda c: np.array(c, dtype=float), "v5"))
    if n >= 4:
        comps.append(IrrepComponent(IsoClassLabel.graph_sym_zero_diag(n), 0, dec.v6.ravel().copy(),
                                    lambda c: np.array(c, dtype=float), "v6"))
    return Decomposition(tuple(comps), n * n, spec if spec is not None else MatrixConj(n))


def ign_layer(coeffs: SchurCoefficients, A) -> np.ndarray:
    """Equivariant linear map R^{n x n} -> R^{n x n} given by Schur coefficients."""
    A = _as_square(A)
    decomp = graph_decomposition(A)
    try:
        out = assemble_layer(coeffs, decomp)
    except LayoutError as exc:
        raise LayoutError(f"coefficients do not fit the n={A.shape[0]} graph layout: {exc}") from None
    return out.reshape(A.shape)


def ign_basis_dim(n: int) -> int:
    if n < 2:
        raise InvalidInputError(f"need n >= 2, got {n}")
    return {2: 8, 3: 14}.get(n, 15)
