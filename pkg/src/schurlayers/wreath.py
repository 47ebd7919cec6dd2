"""Equivariant layers on k-tuples of unaligned symmetric elements.

For a base space V with fixed subspace spanned by an orthonormal basis
e_1..e_s, every layer equivariant under G wr S_k is a Siamese layer plus

    (v_1..v_k) -> sum_ij a_ij (sum_l <v_l, e_i> e_j, ..., sum_l <v_l, e_i> e_j)

and for a transitive H <= S_k the all-ones slot mixing is replaced by the
(h - 1) non-identity orbital maps of H on ordered slot pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, InvalidInputError, TransitivityError, UnsupportedError
from .groups import (
    ActionSpec,
    MatrixConj,
    Permutation,
    VectorPerm,
    WeightSpace,
    WeightSpacePoint,
    WreathTuple,
)
from .schur import Decomposition, IrrepComponent, IsoClassLabel, SchurCoefficients, basis_keys
from .spaces import decompose, layer_matrix, layout, schur_layer

__all__ = [
    "FixedBasis",
    "WreathCoefficients",
    "fixed_basis",
    "wreath_layer",
    "nonsiamese_count",
    "subgroup_h",
    "orbitals",
    "nonsiamese_maps",
    "siamese_count",
    "wreath_counts",
    "decompose_tuple",
    "wreath_basis_layers",
    "infer_spec",
]


@dataclass(frozen=True, eq=False)
class FixedBasis:
    base_space: ActionSpec
    vectors: tuple = field(repr=False)

    def __len__(self):
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        """``(s, D)`` array whose rows are the basis vectors."""
        if not self.vectors:
            return np.zeros((0, self.base_space.dim))
        return np.stack(self.vectors)


def infer_spec(x) -> ActionSpec:
    if isinstance(x, WeightSpacePoint):
        return WeightSpace(x.dims)
    x = np.asarray(x)
    if x.ndim == 1:
        return VectorPerm(x.shape[0])
    if x.ndim == 2 and x.shape[0] == x.shape[1]:
        return MatrixConj(x.shape[0])
    raise UnsupportedError(f"cannot infer a base space for shape {x.shape}")


def _gram_schmidt(vectors: Sequence[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for u in out:
            w -= (u @ w) * u
        norm = np.linalg.norm(w)
        if norm > 1e-12:
            out.append(w / norm)
    return out


def fixed_basis(spec: ActionSpec) -> FixedBasis:
    """Orthonormal basis of the vectors fixed by the whole group, in trivial-slot order."""
    if isinstance(spec, WreathTuple) or (isinstance(spec, VectorPerm) and not spec.is_full_symmetric):
        raise UnsupportedError(f"fixed basis not implemented for {spec.to_json()}")
    try:
        decomp = decompose(spec, spec.zeros())
    except UnsupportedError:
        raise UnsupportedError(f"fixed basis not implemented for {spec.kind}") from None
    units = [c.embed(np.array([1.0])) for c in decomp if c.label == IsoClassLabel.trivial()]
    return FixedBasis(spec, tuple(_gram_schmidt(units)))


@dataclass(frozen=True, eq=False)
class WreathCoefficients:
    """``a`` mixes the all-ones slot map, ``extra`` holds ``(T, A)`` pairs for other slot maps T."""

    a: np.ndarray
    siamese: SchurCoefficients = field(default_factory=SchurCoefficients)
    extra: tuple = ()

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        if a.shape[0] != a.shape[1]:
            raise DimensionError(f"a must be square, got shape {a.shape}")
        object.__setattr__(self, "a", a)
        extra = tuple((np.asarray(T, dtype=float), np.atleast_2d(np.asarray(A, dtype=float))) for T, A in self.extra)
        for _, A in extra:
            if A.shape != a.shape:
                raise DimensionError(f"extra block of shape {A.shape} does not match a of shape {a.shape}")
        object.__setattr__(self, "extra", extra)

    @property
    def s(self) -> int:
        return self.a.shape[0]

    def to_json(self) -> dict:
        return {
            "a": self.a.tolist(),
            "siamese": self.siamese.to_json(),
            "extra": [{"T": T.tolist(), "A": A.tolist()} for T, A in self.extra],
        }

    @classmethod
    def from_json(cls, data: dict) -> WreathCoefficients:
        return cls(
            np.asarray(data["a"], dtype=float),
            SchurCoefficients.from_json(data.get("siamese", [])),
            tuple((e["T"], e["A"]) for e in data.get("extra", [])),
        )


def wreath_layer(coeffs: WreathCoefficients, t: Sequence, basis: FixedBasis | None = None) -> tuple:
    """Siamese base layer on every slot plus the slot-mixing terms through the fixed subspace."""
    k = len(t)
    if k < 2:
        raise InvalidInputError(f"need a tuple of k >= 2 elements, got {k}")
    base = basis.base_space if basis is not None else infer_spec(t[0])
    if basis is None:
        basis = fixed_basis(base)
    if coeffs.s != len(basis):
        raise DimensionError(f"a is {coeffs.s}x{coeffs.s} but the fixed subspace has dimension {len(basis)}")
    V = np.stack([base.flatten(v) for v in t])
    E = basis.matrix()
    ips = V @ E.T
    out = np.stack([base.flatten(schur_layer(base, coeffs.siamese, v)) for v in t])
    out += np.ones((k, k)) @ ips @ coeffs.a @ E
    for T, A in coeffs.extra:
        if T.shape != (k, k):
            raise DimensionError(f"slot map of shape {T.shape} does not fit k={k}")
        out += T @ ips @ A @ E
    return tuple(base.unflatten(row) for row in out)


def nonsiamese_count(s: int, h: int = 2) -> int:
    if s < 0 or h < 1:
        raise InvalidInputError(f"need s >= 0 and h >= 1, got s={s}, h={h}")
    return (h - 1) * s * s


def _check_generators(h_generators: Sequence[Permutation], k: int) -> list[Permutation]:
    gens = list(h_generators)
    if not gens:
        raise InvalidInputError("need at least one generator")
    for p in gens:
        if not isinstance(p, Permutation):
            p = Permutation(tuple(p))
        if p.size != k:
            raise DimensionError(f"generator of size {p.size} does not act on {k} points")
    return [p if isinstance(p, Permutation) else Permutation(tuple(p)) for p in gens]


def _is_transitive(gens: Sequence[Permutation], k: int) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for p in gens:
            j = p(i)
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return len(seen) == k


def orbitals(h_generators: Sequence[Permutation], k: int) -> list[np.ndarray]:
    """0/1 indicator matrices of the orbits of H on ordered pairs, diagonal orbital last."""
    gens = _check_generators(h_generators, k)
    label = -np.ones((k, k), dtype=int)
    n = 0
    for i in range(k):
        for j in range(k):
            if label[i, j] >= 0:
                continue
            label[i, j] = n
            queue = deque([(i, j)])
            while queue:
                a, b = queue.popleft()
                for p in gens:
                    pa, pb = p(a), p(b)
                    if label[pa, pb] < 0:
                        label[pa, pb] = n
                        queue.append((pa, pb))
            n += 1
    mats = [(label == m).astype(float) for m in range(n)]
    diagonal = [M for M in mats if M[0, 0] == 1.0]
    return [M for M in mats if M[0, 0] != 1.0] + diagonal


def subgroup_h(h_generators: Sequence[Permutation], k: int) -> int:
    """Dimension of the commutant of a transitive H <= S_k on R^k."""
    from .oracle import equivariant_basis, orbital_count

    gens = _check_generators(h_generators, k)
    if not _is_transitive(gens, k):
        raise TransitivityError(f"the generators do not act transitively on {k} points")
    spec = VectorPerm(k, tuple(gens))
    h = equivariant_basis(spec).dim
    pairs = orbital_count(spec)
    if h != pairs:
        raise RuntimeError(f"commutant dimension {h} disagrees with the orbital count {pairs}")
    return h


def nonsiamese_maps(spec: WreathTuple) -> list[np.ndarray]:
    """Slot-mixing k x k maps: all-ones for S_k, else the non-identity orbitals of H."""
    if spec.outer_generators is None:
        return [np.ones((spec.k, spec.k))]
    mats = orbitals(spec.outer_generators, spec.k)
    return mats[:-1]


def siamese_count(base: ActionSpec) -> int:
    return len(basis_keys(layout(base)))


def wreath_counts(spec: WreathTuple) -> dict:
    s = len(fixed_basis(spec.base))
    h = 2 if spec.outer_generators is None else subgroup_h(spec.outer_generators, spec.k)
    siamese = siamese_count(spec.base)
    non = nonsiamese_count(s, h)
    return {"s": s, "h": h, "siamese": siamese, "nonsiamese": non, "total": siamese + non}


def wreath_basis_layers(spec: WreathTuple, basis: FixedBasis | None = None) -> list[np.ndarray]:
    """Matrices of every Siamese basis layer and every single-coefficient slot-mixing layer."""
    basis = basis if basis is not None else fixed_basis(spec.base)
    s = len(basis)
    keys = basis_keys(layout(spec.base))
    zero = np.zeros((s, s))
    mats = []
    for key in keys:
        coeffs = WreathCoefficients(zero, SchurCoefficients({key: 1.0}))
        mats.append(layer_matrix(spec, lambda t, c=coeffs: wreath_layer(c, t, basis)))
    for T in nonsiamese_maps(spec):
        for i in range(s):
            for j in range(s):
                A = np.zeros((s, s))
                A[i, j] = 1.0
                if spec.outer_generators is None:
                    coeffs = WreathCoefficients(A)
                else:
                    coeffs = WreathCoefficients(zero, extra=((T, A),))
                mats.append(layer_matrix(spec, lambda t, c=coeffs: wreath_layer(c, t, basis)))
    return mats


def decompose_tuple(spec: WreathTuple, t: Sequence) -> Decomposition:
    """Irreducible decomposition of a k-tuple under G wr S_k.

    Each trivial slot i of the base space yields a symmetric line
    (``TupleTrivialSym``) and a zero-sum (k-1)-dimensional piece
    (``TupleTrivialZeroSum``); each non-trivial base component is lifted to
    its k-fold power (``TupleLift``).
    """
    if spec.outer_generators is not None:
        raise UnsupportedError("tuple decomposition is only implemented for the full S_k")
    k, D = spec.k, spec.base.dim
    if len(t) != k:
        raise DimensionError(f"tuple has {len(t)} entries, expected {k}")
    decomps = [decompose(spec.base, v) for v in t]
    triv = IsoClassLabel.trivial()
    comps: list[IrrepComponent] = []

    def spread(base_embed, per_slot):
        out = np.zeros(k * D)
        for l, c in enumerate(per_slot):
            out[l * D:(l + 1) * D] = base_embed(c)
        return out

    lifted_slots: dict[IsoClassLabel, int] = {}
    for comp in decomps[0]:
        if comp.label != triv:
            continue
        i = comp.slot
        y = np.array([d.component(triv, i).coords[0] for d in decomps])
        total = y.sum() / np.sqrt(k)
        comps.append(IrrepComponent(
            IsoClassLabel.tuple_trivial_sym(), i, np.array([total]),
            lambda c, e=comp.embed: spread(e, [np.array([c[0] / np.sqrt(k)])] * k),
            f"sym:{comp.where}"))
        comps.append(IrrepComponent(
            IsoClassLabel.tuple_trivial_zero_sum(), i, y - y.mean(),
            lambda c, e=comp.embed: spread(e, [np.array([x]) for x in c]),
            f"zero_sum:{comp.where}"))
    for comp in decomps[0]:
        if comp.label == triv:
            continue
        label = IsoClassLabel.tuple_lift(comp.label)
        slot = lifted_slots.get(label, 0)
        lifted_slots[label] = slot + 1
        size = comp.coords.size
        coords = np.concatenate([d.component(comp.label, comp.slot).coords for d in decomps])
        comps.append(IrrepComponent(
            label, slot, coords,
            lambda c, e=comp.embed, m=size: spread(e, [c[l * m:(l + 1) * m] for l in range(k)]),
            f"lift:{comp.where}"))
    return Decomposition(tuple(comps), k * D, spec)
