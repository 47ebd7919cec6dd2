import numpy as np
import pytest
from hypothesis import given, strategies as st

from schurlayers import (
    DimensionError,
    InvalidInputError,
    IsoClassLabel,
    LayoutError,
    MatrixConj,
    SchurCoefficients,
    act_matrix,
    check_equivariance,
    constraint_residuals,
    decompose_matrix,
    decompose_matrix_n2,
    equivariant_basis,
    ign_basis_dim,
    ign_layer,
    layout,
    orbital_count,
    subspace_dims,
)

from strategies import permutations, seeds


def _only(dec, **expected):
    for i, part in enumerate(dec.parts()):
        want = expected.get(f"v{i}", 0)
        assert np.allclose(part, want, atol=1e-12), f"v{i}"


def test_examples_n4():
    I, J = np.eye(4), np.ones((4, 4))
    _only(decompose_matrix(I), v0=I)
    _only(decompose_matrix(J), v0=I, v1=J - I)
    A = np.outer([1.0, -1.0, 0.0, 0.0], np.ones(4))
    _only(decompose_matrix(A), v3=A)


def test_examples_n2():
    I, J = np.eye(2), np.ones((2, 2))
    _only(decompose_matrix_n2(I), v0=I)
    _only(decompose_matrix_n2(J), v0=I, v1=J - I)
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    dec = decompose_matrix_n2(A)
    assert np.allclose(dec.reconstruct(), A, atol=1e-14)
    assert np.allclose(dec.v1, 0.5 * (J - I))
    assert np.allclose(dec.v2, np.diag([-0.5, 0.5]))
    assert np.allclose(dec.v3, [[0.5, 0.5], [-0.5, -0.5]])


def test_errors():
    with pytest.raises(InvalidInputError):
        decompose_matrix(np.eye(2))
    with pytest.raises(DimensionError):
        decompose_matrix(np.zeros((3, 4)))
    with pytest.raises(DimensionError):
        decompose_matrix_n2(np.eye(3))
    with pytest.raises(InvalidInputError):
        ign_basis_dim(1)


@given(st.integers(3, 9), seeds)
def test_round_trip_and_constraints(n, seed):
    A = np.random.default_rng(seed).standard_normal((n, n))
    res = constraint_residuals(decompose_matrix(A), A)
    assert max(res.values()) <= 1e-10, res


def test_n3_has_no_v6(rng):
    dec = decompose_matrix(rng.standard_normal((3, 3)))
    assert np.array_equal(dec.v6, np.zeros((3, 3)))


@given(st.integers(3, 7), seeds)
def test_projection_idempotent(n, seed):
    A = np.random.default_rng(seed).standard_normal((n, n))
    parts = decompose_matrix(A).parts()
    for i, part in enumerate(parts):
        again = decompose_matrix(part).parts()
        for j, q in enumerate(again):
            assert np.allclose(q, part if i == j else 0, atol=1e-10)


@given(st.integers(3, 7).flatmap(lambda n: st.tuples(st.just(n), permutations(n))), seeds)
def test_decomposition_equivariant(np_, seed):
    n, p = np_
    A = np.random.default_rng(seed).standard_normal((n, n))
    moved = decompose_matrix(act_matrix(p, A)).parts()
    for a, b in zip(moved, decompose_matrix(A).parts()):
        assert np.allclose(a, act_matrix(p, b), atol=1e-10)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_subspace_dims_by_projector_rank(n):
    basis = np.random.default_rng(n).standard_normal((n * n, n * n))
    dims = [np.linalg.matrix_rank(np.stack([p.ravel() for p in parts]))
            for parts in zip(*(decompose_matrix(b.reshape(n, n)).parts() for b in basis))]
    assert dims == subspace_dims(n)
    assert sum(dims) == n * n


def test_layer_examples(rng):
    lay = layout(MatrixConj(4))
    A = rng.standard_normal((4, 4))
    assert np.allclose(ign_layer(SchurCoefficients.identity(lay), A), A)
    only_v0 = SchurCoefficients({(IsoClassLabel.trivial(), 0, 0): 1.0})
    assert np.allclose(ign_layer(only_v0, np.ones((4, 4))), np.eye(4))


def test_layer_layout_error():
    c = SchurCoefficients({(IsoClassLabel.graph_sym_zero_diag(4), 0, 0): 1.0})
    with pytest.raises(LayoutError):
        ign_layer(c, np.eye(3))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_random_layer_equivariant(rng, n):
    c = SchurCoefficients.random(layout(MatrixConj(n)), rng)
    report = check_equivariance(lambda A: ign_layer(c, A), MatrixConj(n), trials=200, seed=n)
    assert report.passed, report


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_basis_dim_matches_oracle(n):
    spec = MatrixConj(n)
    assert ign_basis_dim(n) == equivariant_basis(spec).dim == orbital_count(spec)
    assert len(SchurCoefficients.identity(layout(spec)).to_vector(layout(spec))) == ign_basis_dim(n)
