"""Permutation-type groups and their linear actions.

Group elements
--------------
Permutation
    Element of S_n stored as an image array, ``images[i]`` is the image of ``i``.
MultiPermutation
    Element of S_{d_1} x ... x S_{d_{M-1}}, acting on MLP weight spaces.
WreathElement
    Element of the restricted wreath product G wr H, H <= S_k.

Every group element supports ``g * h`` (apply ``h`` first, then ``g``) and
``g.inverse()``, and every action in this module is a left action:
``act(g * h, x) == act(g, act(h, x))``.

Action specs
------------
VectorPerm, MatrixConj, WeightSpace, WreathTuple and Trivial describe the
spaces the groups act on. Since all of these actions permute ambient
coordinates, each spec exposes :meth:`ActionSpec.gather_index`, the index array
``idx`` with ``flatten(act(g, x)) == flatten(x)[idx]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .exceptions import DimensionError, InvalidInputError

__all__ = [
    "Permutation",
    "MultiPermutation",
    "WreathElement",
    "WeightSpacePoint",
    "ActionSpec",
    "VectorPerm",
    "MatrixConj",
    "WeightSpace",
    "WreathTuple",
    "Trivial",
    "act",
    "act_vector",
    "act_matrix",
    "act_weightspace",
    "act_tuple",
    "generators",
    "permutation_matrix",
    "spec_from_json",
]


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise InvalidInputError(f"not a permutation of 0..{len(images) - 1}: {list(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int = 0, j: int = 1) -> Permutation:
        images = list(range(n))
        images[i], images[j] = images[j], images[i]
        return cls(tuple(images))

    @classmethod
    def cycle(cls, n: int) -> Permutation:
        """The n-cycle 0 -> 1 -> ... -> n-1 -> 0."""
        return cls(tuple((i + 1) % n for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.size != self.size:
            raise DimensionError(f"cannot compose permutations of sizes {self.size} and {other.size}")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.size
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def to_json(self) -> list[int]:
        return list(self.images)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> Permutation:
        return cls(tuple(data))


@dataclass(frozen=True)
class MultiPermutation:
    parts: tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    @classmethod
    def identity(cls, sizes: Sequence[int]) -> MultiPermutation:
        return cls(tuple(Permutation.identity(d) for d in sizes))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(p.size for p in self.parts)

    def __mul__(self, other: MultiPermutation) -> MultiPermutation:
        if not isinstance(other, MultiPermutation):
            return NotImplemented
        if other.sizes != self.sizes:
            raise DimensionError(f"part sizes differ: {self.sizes} vs {other.sizes}")
        return MultiPermutation(tuple(p * q for p, q in zip(self.parts, other.parts)))

    def inverse(self) -> MultiPermutation:
        return MultiPermutation(tuple(p.inverse() for p in self.parts))


@dataclass(frozen=True)
class WreathElement:
    """``(outer, inner)`` acting on k-tuples by
    ``(w . t)[i] = inner[outer(i)] . t[outer(i)]``.
    """

    outer: Permutation
    inner: tuple

    def __post_init__(self):
        inner = tuple(self.inner)
        if len(inner) != self.outer.size:
            raise DimensionError(f"wreath element needs {self.outer.size} inner elements, got {len(inner)}")
        object.__setattr__(self, "inner", inner)

    @property
    def k(self) -> int:
        return self.outer.size

    def __mul__(self, other: WreathElement) -> WreathElement:
        # self after other:  outer = other.outer o self.outer,
        # inner[j] = self.inner[other.outer^-1(j)] * other.inner[j]
        if not isinstance(other, WreathElement):
            return NotImplemented
        if other.k != self.k:
            raise DimensionError(f"cannot compose wreath elements with k={self.k} and k={other.k}")
        inv = other.outer.inverse()
        inner = tuple(self.inner[inv(j)] * other.inner[j] for j in range(self.k))
        return WreathElement(other.outer * self.outer, inner)

    def inverse(self) -> WreathElement:
        inner = tuple(self.inner[self.outer(i)].inverse() for i in range(self.k))
        return WreathElement(self.outer.inverse(), inner)


@dataclass(frozen=True, eq=False)
class WeightSpacePoint:
    """MLP parameters ``[W_m, b_m]`` with ``W_m`` of shape ``(d_m, d_{m-1})``."""

    weights: tuple
    biases: tuple

    def __post_init__(self):
        weights = tuple(np.asarray(w, dtype=float) for w in self.weights)
        biases = tuple(np.asarray(b, dtype=float).reshape(-1) for b in self.biases)
        if len(weights) != len(biases) or not weights:
            raise DimensionError("need the same positive number of weight matrices and bias vectors")
        for m, (w, b) in enumerate(zip(weights, biases), start=1):
            if w.ndim != 2:
                raise DimensionError(f"W{m} must be a matrix, got shape {w.shape}")
            if b.shape[0] != w.shape[0]:
                raise DimensionError(f"b{m} has length {b.shape[0]}, W{m} has {w.shape[0]} rows")
            if m > 1 and w.shape[1] != weights[m - 2].shape[0]:
                raise DimensionError(f"W{m} has {w.shape[1]} columns, W{m - 1} has {weights[m - 2].shape[0]} rows")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1],) + tuple(w.shape[0] for w in self.weights)

    @property
    def depth(self) -> int:
        return len(self.weights)

    def flatten(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, dims: Sequence[int], v: np.ndarray) -> WeightSpacePoint:
        v = np.asarray(v, dtype=float).reshape(-1)
        expected = sum(dims[m] * dims[m - 1] + dims[m] for m in range(1, len(dims)))
        if v.size != expected:
            raise DimensionError(f"expected {expected} parameters for dims {tuple(dims)}, got {v.size}")
        weights, biases, pos = [], [], 0
        for m in range(1, len(dims)):
            rows, cols = dims[m], dims[m - 1]
            weights.append(v[pos:pos + rows * cols].reshape(rows, cols))
            pos += rows * cols
            biases.append(v[pos:pos + rows])
            pos += rows
        return cls(tuple(weights), tuple(biases))

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> WeightSpacePoint:
        total = sum(dims[m] * dims[m - 1] + dims[m] for m in range(1, len(dims)))
        return cls.from_flat(dims, np.zeros(total))

    def __add__(self, other: WeightSpacePoint) -> WeightSpacePoint:
        return WeightSpacePoint.from_flat(self.dims, self.flatten() + other.flatten())

    def __sub__(self, other: WeightSpacePoint) -> WeightSpacePoint:
        return WeightSpacePoint.from_flat(self.dims, self.flatten() - other.flatten())

    def __eq__(self, other):
        if not isinstance(other, WeightSpacePoint):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.flatten(), other.flatten())

    def allclose(self, other: WeightSpacePoint, rtol: float = 1e-10, atol: float = 1e-12) -> bool:
        return self.dims == other.dims and np.allclose(self.flatten(), other.flatten(), rtol=rtol, atol=atol)

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_json(cls, data: dict) -> WeightSpacePoint:
        point = cls(tuple(np.asarray(w, dtype=float) for w in data["weights"]), tuple(data["biases"]))
        if "dims" in data and tuple(data["dims"]) != point.dims:
            raise DimensionError(f"declared dims {data['dims']} do not match tensors {point.dims}")
        return point


def permutation_matrix(p: Permutation) -> np.ndarray:
    """Matrix ``P`` with ``P @ x == act_vector(p, x)``."""
    n = p.size
    P = np.zeros((n, n))
    P[list(p.images), np.arange(n)] = 1.0
    return P


def act_vector(p: Permutation, x) -> np.ndarray:
    """``result[i] = x[p^-1(i)]``."""
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != p.size:
        raise DimensionError(f"vector of shape {x.shape} does not match permutation of size {p.size}")
    out = np.empty_like(x)
    out[list(p.images)] = x
    return out


def act_matrix(p: Permutation, A) -> np.ndarray:
    """``result[i, j] = A[p^-1(i), p^-1(j)]``, i.e. ``P A P^T``."""
    A = np.asarray(A)
    n = p.size
    if A.shape != (n, n):
        raise DimensionError(f"matrix of shape {A.shape} does not match permutation of size {n}")
    inv = list(p.inverse().images)
    return A[np.ix_(inv, inv)]


def act_weightspace(g: MultiPermutation, v: WeightSpacePoint) -> WeightSpacePoint:
    """Relabel hidden neurons: layer m's neurons are permuted by ``g.parts[m-1]``.

    Rows of ``W_m`` and entries of ``b_m`` move like :func:`act_vector` for
    ``m < M``; columns of ``W_{m+1}`` move the same way.  Input and output
    neurons are fixed.
    """
    dims = v.dims
    hidden = dims[1:-1]
    if g.sizes != tuple(hidden):
        raise DimensionError(f"multi-permutation sizes {g.sizes} do not match hidden dims {tuple(hidden)}")
    M = v.depth
    inv = [list(p.inverse().images) for p in g.parts]
    weights, biases = [], []
    for m in range(1, M + 1):
        w, b = v.weights[m - 1], v.biases[m - 1]
        rows = inv[m - 1] if m < M else slice(None)
        cols = inv[m - 2] if m > 1 else slice(None)
        weights.append(w[rows, :][:, cols])
        biases.append(b[rows])
    return WeightSpacePoint(tuple(weights), tuple(biases))


def act(g, x):
    """Dispatch to the action matching the type of ``g`` and the shape of ``x``."""
    if isinstance(g, Permutation):
        x = np.asarray(x)
        return act_vector(g, x) if x.ndim == 1 else act_matrix(g, x)
    if isinstance(g, MultiPermutation):
        return act_weightspace(g, x)
    if isinstance(g, WreathElement):
        return act_tuple(g, x)
    raise TypeError(f"unsupported group element {type(g).__name__}")


def act_tuple(w: WreathElement, t: Sequence, base: ActionSpec | None = None) -> tuple:
    """``result[i] = w.inner[w.outer(i)] . t[w.outer(i)]``."""
    if len(t) != w.k:
        raise DimensionError(f"tuple has {len(t)} entries, wreath element expects {w.k}")
    base_act = base.act if base is not None else act
    return tuple(base_act(w.inner[w.outer(i)], t[w.outer(i)]) for i in range(w.k))


# --------------------------------------------------------------------------- specs


class ActionSpec:
    """A space together with a permutation-type group acting on it."""

    kind: str = ""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def gather_index(self, g) -> np.ndarray:
        raise NotImplementedError

    def act(self, g, x):
        raise NotImplementedError

    def flatten(self, x) -> np.ndarray:
        raise NotImplementedError

    def unflatten(self, v: np.ndarray):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def zeros(self):
        return self.unflatten(np.zeros(self.dim))

    def random(self, rng: np.random.Generator):
        return self.unflatten(rng.standard_normal(self.dim))


def _symmetric_generators(n: int) -> list[Permutation]:
    if n < 2:
        return [Permutation.identity(n)]
    if n == 2:
        return [Permutation.transposition(2)]
    return [Permutation.transposition(n, 0, 1), Permutation.cycle(n)]


def _check_perm(p, n: int, what: str = "permutation") -> Permutation:
    if not isinstance(p, Permutation):
        raise TypeError(f"expected a Permutation, got {type(p).__name__}")
    if p.size != n:
        raise DimensionError(f"{what} has size {p.size}, expected {n}")
    return p


@dataclass(frozen=True)
class VectorPerm(ActionSpec):
    """S_n (or the subgroup generated by ``subgroup``) permuting R^n."""

    n: int
    subgroup: tuple | None = None
    kind: str = field(default="VectorPerm", init=False, repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInputError(f"VectorPerm needs n >= 2, got {self.n}")
        if self.subgroup is not None:
            gens = tuple(_check_perm(p, self.n, "subgroup generator") for p in self.subgroup)
            object.__setattr__(self, "subgroup", gens)

    @property
    def dim(self) -> int:
        return self.n

    @property
    def is_full_symmetric(self) -> bool:
        return self.subgroup is None

    def generators(self) -> list:
        return list(self.subgroup) if self.subgroup is not None else _symmetric_generators(self.n)

    def identity(self):
        return Permutation.identity(self.n)

    def gather_index(self, g) -> np.ndarray:
        return np.asarray(_check_perm(g, self.n).inverse().images)

    def act(self, g, x):
        return act_vector(g, np.asarray(x, dtype=float))

    def flatten(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionError(f"expected a vector of length {self.n}, got shape {x.shape}")
        return x

    def unflatten(self, v):
        return self.flatten(np.asarray(v, dtype=float).reshape(-1))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        if self.subgroup is not None:
            out["generators"] = [p.to_json() for p in self.subgroup]
        return out


@dataclass(frozen=True)
class MatrixConj(ActionSpec):
    """S_n acting on n x n matrices by simultaneous row/column permutation."""

    n: int
    kind: str = field(default="MatrixConj", init=False, repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInputError(f"MatrixConj needs n >= 2, got {self.n}")

    @property
    def dim(self) -> int:
        return self.n * self.n

    def generators(self) -> list:
        return _symmetric_generators(self.n)

    def identity(self):
        return Permutation.identity(self.n)

    def gather_index(self, g) -> np.ndarray:
        inv = np.asarray(_check_perm(g, self.n).inverse().images)
        return (inv[:, None] * self.n + inv[None, :]).ravel()

    def act(self, g, x):
        return act_matrix(g, np.asarray(x, dtype=float))

    def flatten(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n, self.n):
            raise DimensionError(f"expected a {self.n}x{self.n} matrix, got shape {x.shape}")
        return x.ravel()

    def unflatten(self, v):
        v = np.asarray(v, dtype=float)
        if v.size != self.dim:
            raise DimensionError(f"expected {self.dim} entries, got {v.size}")
        return v.reshape(self.n, self.n)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class WeightSpace(ActionSpec):
    """Hidden-neuron permutations acting on MLP parameters, ``dims = (d_0, ..., d_M)``."""

    dims: tuple
    kind: str = field(default="WeightSpace", init=False, repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 3:
            raise InvalidInputError(f"weight space needs depth M >= 2 (at least 3 dims), got {dims}")
        if min(dims) < 2:
            raise InvalidInputError(f"all layer widths must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def depth(self) -> int:
        return len(self.dims) - 1

    @property
    def hidden(self) -> tuple[int, ...]:
        return self.dims[1:-1]

    @property
    def dim(self) -> int:
        d = self.dims
        return sum(d[m] * d[m - 1] + d[m] for m in range(1, len(d)))

    def generators(self) -> list:
        gens = []
        for m, d in enumerate(self.hidden):
            for p in _symmetric_generators(d):
                parts = [Permutation.identity(e) for e in self.hidden]
                parts[m] = p
                gens.append(MultiPermutation(tuple(parts)))
        return gens

    def identity(self):
        return MultiPermutation.identity(self.hidden)

    def gather_index(self, g) -> np.ndarray:
        if not isinstance(g, MultiPermutation) or g.sizes != self.hidden:
            raise DimensionError(f"expected a MultiPermutation with sizes {self.hidden}")
        inv = [np.asarray(p.inverse().images) for p in g.parts]
        d, M = self.dims, self.depth
        out, offset = [], 0
        for m in range(1, M + 1):
            rows = inv[m - 1] if m < M else np.arange(d[m])
            cols = inv[m - 2] if m > 1 else np.arange(d[m - 1])
            out.append(offset + (rows[:, None] * d[m - 1] + cols[None, :]).ravel())
            offset += d[m] * d[m - 1]
            out.append(offset + rows)
            offset += d[m]
        return np.concatenate(out)

    def act(self, g, x):
        return act_weightspace(g, x)

    def flatten(self, x) -> np.ndarray:
        if not isinstance(x, WeightSpacePoint):
            raise TypeError(f"expected a WeightSpacePoint, got {type(x).__name__}")
        if x.dims != self.dims:
            raise DimensionError(f"point has dims {x.dims}, space has {self.dims}")
        return x.flatten()

    def unflatten(self, v):
        return WeightSpacePoint.from_flat(self.dims, v)

    def to_json(self) -> dict:
        return {"kind": self.kind, "dims": list(self.dims)}


@dataclass(frozen=True)
class WreathTuple(ActionSpec):
    """``base`` group wr H on k-tuples; H = S_k unless ``outer_generators`` is given."""

    base: ActionSpec
    k: int
    outer_generators: tuple | None = None
    kind: str = field(default="WreathTuple", init=False, repr=False)

    def __post_init__(self):
        if self.k < 2:
            raise InvalidInputError(f"WreathTuple needs k >= 2, got {self.k}")
        if isinstance(self.base, (WreathTuple, Trivial)):
            raise InvalidInputError(f"unsupported wreath base {self.base.kind}")
        if self.outer_generators is not None:
            gens = tuple(_check_perm(p, self.k, "outer generator") for p in self.outer_generators)
            object.__setattr__(self, "outer_generators", gens)

    @property
    def dim(self) -> int:
        return self.k * self.base.dim

    def outer(self) -> list[Permutation]:
        if self.outer_generators is not None:
            return list(self.outer_generators)
        return _symmetric_generators(self.k)

    def generators(self) -> list:
        e = self.base.identity()
        gens = [
            WreathElement(Permutation.identity(self.k), (g,) + (e,) * (self.k - 1))
            for g in self.base.generators()
        ]
        gens += [WreathElement(tau, (e,) * self.k) for tau in self.outer()]
        return gens

    def identity(self):
        return WreathElement(Permutation.identity(self.k), (self.base.identity(),) * self.k)

    def gather_index(self, g) -> np.ndarray:
        if not isinstance(g, WreathElement) or g.k != self.k:
            raise DimensionError(f"expected a WreathElement with k={self.k}")
        D = self.base.dim
        return np.concatenate([
            g.outer(i) * D + self.base.gather_index(g.inner[g.outer(i)]) for i in range(self.k)
        ])

    def act(self, g, x):
        if len(x) != self.k:
            raise DimensionError(f"tuple has {len(x)} entries, expected {self.k}")
        return act_tuple(g, x, self.base)

    def flatten(self, x) -> np.ndarray:
        if len(x) != self.k:
            raise DimensionError(f"tuple has {len(x)} entries, expected {self.k}")
        return np.concatenate([self.base.flatten(v) for v in x])

    def unflatten(self, v):
        v = np.asarray(v, dtype=float).reshape(-1)
        if v.size != self.dim:
            raise DimensionError(f"expected {self.dim} entries, got {v.size}")
        D = self.base.dim
        return tuple(self.base.unflatten(v[i * D:(i + 1) * D]) for i in range(self.k))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "base": self.base.to_json(), "k": self.k}
        if self.outer_generators is not None:
            out["outer_generators"] = [p.to_json() for p in self.outer_generators]
        return out


@dataclass(frozen=True)
class Trivial(ActionSpec):
    """R^dim with every group element acting as the identity (output spaces only)."""

    dim_: int = 1
    kind: str = field(default="Trivial", init=False, repr=False)

    @property
    def dim(self) -> int:
        return self.dim_

    def generators(self) -> list:
        return []

    def identity(self):
        return None

    def gather_index(self, g) -> np.ndarray:
        return np.arange(self.dim_)

    def act(self, g, x):
        return np.asarray(x, dtype=float)

    def flatten(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.dim_:
            raise DimensionError(f"expected {self.dim_} entries, got {x.size}")
        return x

    def unflatten(self, v):
        return self.flatten(v)

    def to_json(self) -> dict:
        return {"kind": self.kind, "dim": self.dim_}


def generators(spec: ActionSpec) -> list:
    """Generators of the group acting in ``spec``; the group is never enumerated."""
    return spec.generators()


def spec_from_json(data: dict[str, Any]) -> ActionSpec:
    try:
        kind = data["kind"]
        if kind == "VectorPerm":
            gens = data.get("generators")
            subgroup = None if gens is None else tuple(Permutation.from_json(p) for p in gens)
            return VectorPerm(int(data["n"]), subgroup)
        if kind == "MatrixConj":
            return MatrixConj(int(data["n"]))
        if kind == "WeightSpace":
            return WeightSpace(tuple(data["dims"]))
        if kind == "WreathTuple":
            outer = data.get("outer_generators")
            outer = None if outer is None else tuple(Permutation.from_json(p) for p in outer)
            return WreathTuple(spec_from_json(data["base"]), int(data["k"]), outer)
        if kind == "Trivial":
            return Trivial(int(data.get("dim", 1)))
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed action spec {data!r}: {exc}") from exc
    raise InvalidInputError(f"unknown action spec kind {data.get('kind')!r}")
