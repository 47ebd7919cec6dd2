import time

import numpy as np
import pytest

from schurlayers import (
    DimensionError,
    InvalidInputError,
    MatrixConj,
    Permutation,
    ResourceError,
    Trivial,
    VectorPerm,
    WeightSpace,
    WreathTuple,
    basis_rank,
    check_equivariance,
    deepsets_layer,
    equivariant_basis,
    orbital_count,
)

CASES = [
    (VectorPerm(5), 2),
    (VectorPerm(4, (Permutation.cycle(4),)), 4),
    (MatrixConj(4), 15),
    (MatrixConj(3), 14),
    (MatrixConj(2), 8),
    (WreathTuple(MatrixConj(4), 2), 19),
]


@pytest.mark.parametrize("spec,dim", CASES)
def test_dimension_examples(spec, dim):
    assert equivariant_basis(spec).dim == dim == orbital_count(spec)


@pytest.mark.parametrize("spec,dim", CASES)
def test_basis_is_equivariant_and_independent(spec, dim):
    basis = equivariant_basis(spec).basis
    assert basis_rank(basis) == dim
    for B in basis:
        for g in spec.generators():
            idx = spec.gather_index(g)
            # P B = B P with P x = x[idx]
            assert np.abs(B[idx, :] - B[:, np.argsort(idx)]).max() <= 1e-9 * np.abs(B).max()
        report = check_equivariance(lambda x, B=B: spec.unflatten(B @ spec.flatten(x)), spec, trials=20)
        assert report.passed


def test_invariant_maps():
    assert equivariant_basis(VectorPerm(4), Trivial(1)).dim == 1
    assert equivariant_basis(MatrixConj(4), Trivial(1)).dim == 2


def test_errors():
    with pytest.raises(ResourceError):
        equivariant_basis(WeightSpace((5, 10, 10, 5)))
    with pytest.raises(ResourceError):
        equivariant_basis(VectorPerm(50), budget=100)
    with pytest.raises(InvalidInputError):
        equivariant_basis(Trivial(3))
    with pytest.raises(InvalidInputError):
        check_equivariance(lambda x: x, VectorPerm(3), trials=0)
    with pytest.raises(DimensionError):
        check_equivariance(lambda x: np.zeros(4), VectorPerm(3))


def test_largest_acceptance_case_is_fast():
    t0 = time.perf_counter()
    assert equivariant_basis(WeightSpace((3, 4, 4, 4, 3))).dim == 257
    assert time.perf_counter() - t0 < 5.0


def test_check_equivariance_examples():
    good = check_equivariance(lambda x: deepsets_layer(2, -1, x), VectorPerm(6), trials=100)
    assert good.passed and good.max_relative_violation <= 1e-12
    e0 = np.eye(3)[0]
    bad = check_equivariance(lambda x: x + e0, VectorPerm(3), trials=100)
    assert not bad.passed and bad.max_relative_violation > 1e-2
    assert bad.to_json()["pass"] is False


def test_determinism():
    def layer(x):
        return x + np.eye(4)[1] * x[0]

    a = check_equivariance(layer, VectorPerm(4), trials=50, seed=7)
    b = check_equivariance(layer, VectorPerm(4), trials=50, seed=7)
    assert a == b
    assert equivariant_basis(MatrixConj(3)).to_json() == equivariant_basis(MatrixConj(3)).to_json()
