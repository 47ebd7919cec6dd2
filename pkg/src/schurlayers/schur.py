"""Irreducible decompositions and layer assembly from Schur coefficients.

A :class:`Decomposition` lists the irreducible components of one element of an
ambient space.  Each component stores its coordinates with respect to a fixed
canonical basis of its abstract irreducible, plus an embedding that maps such
coordinates back to the ambient space at the component's location.  Two
components with the same :class:`IsoClassLabel` are isomorphic, and the
canonical isomorphism between them is "copy the coordinates, re-embed at the
target".  An equivariant layer is therefore

    T(x) = sum over (label, i, j) of  lam[label, i, j] * embed_j(coords_i)

with one real scalar per ordered pair of slots of the same class.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .exceptions import InvalidInputError, LayoutError

__all__ = [
    "IsoClassLabel",
    "IrrepComponent",
    "Decomposition",
    "SchurCoefficients",
    "assemble_layer",
    "param_count",
    "basis_keys",
]


@dataclass(frozen=True)
class IsoClassLabel:
    """Isomorphism class of an irreducible; equal labels mean isomorphic components.

    Tags: ``Trivial``, ``Vec(m, n)``, ``Mat(m, rows, cols)``, ``GraphAntisym(n)``,
    ``GraphSymZeroDiag(n)``, ``TupleTrivialSym``, ``TupleTrivialZeroSum`` and
    ``TupleLift(inner)``.
    """

    tag: str
    params: tuple = ()

    @classmethod
    def trivial(cls):
        return cls("Trivial")

    @classmethod
    def vec(cls, m: int, n: int):
        return cls("Vec", (int(m), int(n)))

    @classmethod
    def mat(cls, m: int, rows: int, cols: int):
        return cls("Mat", (int(m), int(rows), int(cols)))

    @classmethod
    def graph_antisym(cls, n: int):
        return cls("GraphAntisym", (int(n),))

    @classmethod
    def graph_sym_zero_diag(cls, n: int):
        return cls("GraphSymZeroDiag", (int(n),))

    @classmethod
    def tuple_trivial_sym(cls):
        return cls("TupleTrivialSym")

    @classmethod
    def tuple_trivial_zero_sum(cls):
        return cls("TupleTrivialZeroSum")

    @classmethod
    def tuple_lift(cls, inner: IsoClassLabel):
        return cls("TupleLift", (inner,))

    def __str__(self):
        if not self.params:
            return self.tag
        return f"{self.tag}({', '.join(str(p) for p in self.params)})"

    def to_json(self) -> dict:
        if self.tag == "TupleLift":
            return {"tag": self.tag, "inner": self.params[0].to_json()}
        return {"tag": self.tag, "params": list(self.params)}

    @classmethod
    def from_json(cls, data) -> IsoClassLabel:
        if isinstance(data, str):
            return cls(data)
        if data["tag"] == "TupleLift":
            return cls.tuple_lift(cls.from_json(data["inner"]))
        return cls(data["tag"], tuple(int(p) for p in data.get("params", ())))


@dataclass(frozen=True, eq=False)
class IrrepComponent:
    """One irreducible piece ``x_i`` of a decomposed element.

    ``coords`` are canonical coordinates inside the abstract irreducible;
    ``embed`` maps coordinates to a flat ambient vector at this component's
    location; ``where`` is a human-readable location tag.
    """

    label: IsoClassLabel
    slot: int
    coords: np.ndarray
    embed: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    where: str = ""

    @property
    def data(self) -> np.ndarray:
        return self.embed(self.coords)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Ordered irreducible components of one ambient element (flat coordinates)."""

    components: tuple
    ambient_dim: int
    ambient: object = None

    def __post_init__(self):
        comps = tuple(self.components)
        keys = [(c.label, c.slot) for c in comps]
        if len(set(keys)) != len(keys):
            dup = [k for k, n in Counter(keys).items() if n > 1]
            raise InvalidInputError(f"duplicate (label, slot) pairs: {dup}")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "_index", {k: c for k, c in zip(keys, comps)})

    def __iter__(self) -> Iterator[IrrepComponent]:
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def component(self, label: IsoClassLabel, slot: int) -> IrrepComponent:
        try:
            return self._index[(label, slot)]
        except KeyError:
            raise LayoutError(f"no component {label} slot {slot}") from None

    def has(self, label: IsoClassLabel, slot: int) -> bool:
        return (label, slot) in self._index

    def layout(self) -> dict[IsoClassLabel, int]:
        """Multiplicity of each isomorphism class, in first-appearance order."""
        counts: dict[IsoClassLabel, int] = {}
        for c in self.components:
            counts[c.label] = counts.get(c.label, 0) + 1
        return counts

    def reconstruct(self) -> np.ndarray:
        out = np.zeros(self.ambient_dim)
        for c in self.components:
            out += c.data
        return out

    def find(self, where: str) -> IrrepComponent:
        for c in self.components:
            if c.where == where:
                return c
        raise LayoutError(f"no component located at {where!r}")


CoefficientKey = tuple  # (IsoClassLabel, from_slot, to_slot)


@dataclass(frozen=True, eq=False)
class SchurCoefficients:
    """Sparse map ``(label, from_slot, to_slot) -> lambda``; missing keys are 0."""

    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, value in dict(self.entries).items():
            label, i, j = key
            if not isinstance(label, IsoClassLabel):
                raise InvalidInputError(f"coefficient key needs an IsoClassLabel, got {label!r}")
            clean[(label, int(i), int(j))] = float(value)
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, key) -> float:
        return self.entries.get(key, 0.0)

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    @classmethod
    def identity(cls, layout: Mapping[IsoClassLabel, int]) -> SchurCoefficients:
        return cls({(label, i, i): 1.0 for label, n in layout.items() for i in range(n)})

    @classmethod
    def random(cls, layout: Mapping[IsoClassLabel, int], rng: np.random.Generator) -> SchurCoefficients:
        return cls({key: rng.standard_normal() for key in basis_keys(layout)})

    @classmethod
    def from_vector(cls, layout: Mapping[IsoClassLabel, int], values: Sequence[float]) -> SchurCoefficients:
        keys = basis_keys(layout)
        if len(values) != len(keys):
            raise LayoutError(f"layout has {len(keys)} coefficients, got {len(values)} values")
        return cls(dict(zip(keys, values)))

    def to_vector(self, layout: Mapping[IsoClassLabel, int]) -> np.ndarray:
        self.validate(layout)
        return np.array([self[key] for key in basis_keys(layout)])

    def __add__(self, other: SchurCoefficients) -> SchurCoefficients:
        keys = set(self.entries) | set(other.entries)
        return SchurCoefficients({k: self[k] + other[k] for k in keys})

    def scale(self, factor: float) -> SchurCoefficients:
        return SchurCoefficients({k: factor * v for k, v in self.entries.items()})

    def validate(self, layout: Mapping[IsoClassLabel, int]) -> None:
        for label, i, j in self.entries:
            n = layout.get(label)
            if n is None:
                raise LayoutError(f"class {label} does not occur in the decomposition")
            if not (0 <= i < n and 0 <= j < n):
                raise LayoutError(f"class {label} has {n} slots, coefficient references ({i}, {j})")

    def to_json(self) -> list[dict]:
        return [
            {"label": label.to_json(), "from": i, "to": j, "value": v}
            for (label, i, j), v in self.entries.items()
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, records: Iterable[dict]) -> SchurCoefficients:
        try:
            return cls({
                (IsoClassLabel.from_json(r["label"]), int(r["from"]), int(r["to"])): float(r["value"])
                for r in records
            })
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed coefficient record: {exc}") from exc


def basis_keys(layout: Mapping[IsoClassLabel, int]) -> list[tuple]:
    """All ``(label, i, j)`` keys of a layout in a fixed order."""
    return [(label, i, j) for label, n in layout.items() for i in range(n) for j in range(n)]


def assemble_layer(
    coeffs: SchurCoefficients,
    decomp: Decomposition,
    iso_maps: Mapping | None = None,
) -> np.ndarray:
    """Apply the equivariant layer given by ``coeffs`` to a decomposed element.

    ``iso_maps`` may override the canonical coordinate copy for individual
    ``(label, i, j)`` keys with a callable on coordinates.
    """
    coeffs.validate(decomp.layout())
    out = np.zeros(decomp.ambient_dim)
    for (label, i, j), lam in coeffs.items():
        if lam == 0.0:
            continue
        coords = decomp.component(label, i).coords
        if iso_maps is not None and (label, i, j) in iso_maps:
            coords = iso_maps[(label, i, j)](coords)
        out += lam * decomp.component(label, j).embed(coords)
    return out


def param_count(multiplicities: Sequence[int]) -> int:
    """Number of Schur coefficients, the sum of squared multiplicities."""
    multiplicities = list(multiplicities)
    if not multiplicities:
        raise InvalidInputError("need at least one multiplicity")
    if any(int(a) < 1 for a in multiplicities):
        raise InvalidInputError(f"multiplicities must be >= 1, got {multiplicities}")
    return sum(int(a) ** 2 for a in multiplicities)
