import numpy as np
import pytest
from hypothesis import given, strategies as st

from schurlayers import (
    DimensionError,
    InvalidInputError,
    MatrixConj,
    MultiPermutation,
    Permutation,
    VectorPerm,
    WeightSpace,
    WeightSpacePoint,
    WreathElement,
    WreathTuple,
    act,
    act_matrix,
    act_tuple,
    act_vector,
    act_weightspace,
    generators,
    permutation_matrix,
    spec_from_json,
)

from strategies import arrays, permutations, seeds, sized_permutation

CYCLE3 = Permutation((1, 2, 0))  # 0 -> 1 -> 2 -> 0


def test_act_vector_examples():
    x = np.array([5.0, 7.0, 9.0])
    assert act_vector(Permutation.identity(3), x).tolist() == [5, 7, 9]
    assert act_vector(Permutation.transposition(3, 0, 1), x).tolist() == [7, 5, 9]
    assert act_vector(CYCLE3, [1, 2, 3]).tolist() == [3, 1, 2]


def test_act_vector_size_mismatch():
    with pytest.raises(DimensionError):
        act_vector(Permutation.identity(3), np.zeros(4))


def test_permutation_rejects_non_bijection():
    with pytest.raises(InvalidInputError):
        Permutation((0, 0, 1))


def test_act_matrix_examples(rng):
    I = np.eye(4)
    for p in generators(VectorPerm(4)):
        assert np.array_equal(act_matrix(p, I), I)
    E = np.zeros((3, 3))
    E[0, 1] = 1
    F = np.zeros((3, 3))
    F[1, 0] = 1
    assert np.array_equal(act_matrix(Permutation.transposition(3), E), F)
    A = rng.standard_normal((5, 5))
    assert np.array_equal(act_matrix(Permutation.identity(5), A), A)
    with pytest.raises(DimensionError):
        act_matrix(Permutation.identity(3), np.zeros((3, 4)))


@given(sized_permutation(), seeds)
def test_act_matrix_is_conjugation(np_, seed):
    n, p = np_
    A = arrays((n, n), seed)
    P = permutation_matrix(p)
    assert np.array_equal(act_matrix(p, A), P @ A @ P.T)
    assert np.array_equal(P @ A[:, 0], act_vector(p, A[:, 0]))


@given(sized_permutation(), seeds)
def test_inverse_round_trip(np_, seed):
    n, p = np_
    x = arrays(n, seed)
    assert np.array_equal(act_vector(p.inverse(), act_vector(p, x)), x)
    assert (p * p.inverse()).is_identity()


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(permutations(n), permutations(n))), seeds)
def test_vector_action_composes(pq, seed):
    p, q = pq
    x = arrays(p.size, seed)
    assert np.array_equal(act_vector(p, act_vector(q, x)), act_vector(p * q, x))
    assert (p * q)(0) == p(q(0))


def test_weightspace_example():
    v = WeightSpacePoint(
        (np.array([[1.0], [2.0]]), np.array([[5.0, 6.0]])),
        (np.array([3.0, 4.0]), np.array([7.0])),
    )
    out = act_weightspace(MultiPermutation((Permutation.transposition(2),)), v)
    assert out.weights[0].ravel().tolist() == [2, 1]
    assert out.biases[0].tolist() == [4, 3]
    assert out.weights[1].ravel().tolist() == [6, 5]
    assert out.biases[1].tolist() == [7]
    assert act_weightspace(MultiPermutation.identity((2,)), v) == v


def _random_multi(rng, sizes):
    return MultiPermutation(tuple(Permutation(tuple(rng.permutation(s))) for s in sizes))


@pytest.mark.parametrize("dims", [(2, 3, 2), (2, 3, 4, 2), (3, 4, 4, 4, 3)])
def test_weightspace_action_composes(rng, dims):
    spec = WeightSpace(dims)
    v = spec.random(rng)
    for _ in range(10):
        g1, g2 = _random_multi(rng, spec.hidden), _random_multi(rng, spec.hidden)
        lhs = act_weightspace(g2, act_weightspace(g1, v))
        assert lhs == act_weightspace(g2 * g1, v)
        assert act_weightspace(g1.inverse(), act_weightspace(g1, v)) == v


def test_weightspace_dims_mismatch(rng):
    v = WeightSpace((2, 3, 2)).random(rng)
    with pytest.raises(DimensionError):
        act_weightspace(MultiPermutation.identity((4,)), v)


def test_wreath_examples():
    t = (np.array([1.0, 2, 3]), np.array([4.0, 5, 6]))
    ident = Permutation.identity(3)
    w = WreathElement(Permutation.identity(2), (ident, ident))
    assert all(np.array_equal(a, b) for a, b in zip(act_tuple(w, t), t))
    swap = WreathElement(Permutation.transposition(2), (ident, ident))
    out = act_tuple(swap, t)
    assert out[0].tolist() == [4, 5, 6] and out[1].tolist() == [1, 2, 3]
    mixed = WreathElement(Permutation.transposition(2), (CYCLE3, ident))
    out = act_tuple(mixed, t)
    assert out[0].tolist() == [4, 5, 6]
    assert out[1].tolist() == [3, 1, 2]


def _random_wreath(rng, k, n):
    return WreathElement(Permutation(tuple(rng.permutation(k))),
                         tuple(Permutation(tuple(rng.permutation(n))) for _ in range(k)))


@pytest.mark.parametrize("k,n", [(2, 3), (3, 4), (4, 2)])
def test_wreath_group_law(rng, k, n):
    spec = WreathTuple(VectorPerm(n), k)
    for _ in range(20):
        t = spec.random(rng)
        w1, w2 = _random_wreath(rng, k, n), _random_wreath(rng, k, n)
        lhs = act_tuple(w2, act_tuple(w1, t))
        rhs = act_tuple(w2 * w1, t)
        assert all(np.array_equal(a, b) for a, b in zip(lhs, rhs))
        back = act_tuple(w1.inverse(), act_tuple(w1, t))
        assert all(np.array_equal(a, b) for a, b in zip(back, t))


def test_wreath_over_matrices(rng):
    spec = WreathTuple(MatrixConj(3), 2)
    t = spec.random(rng)
    for g in spec.generators():
        out = act(g, t)
        assert np.array_equal(spec.flatten(out), spec.flatten(t)[spec.gather_index(g)])


def test_generator_counts():
    assert len(generators(VectorPerm(3))) == 2
    assert len(generators(WeightSpace((2, 3, 4, 2)))) == 4
    assert len(generators(WreathTuple(VectorPerm(3), 2))) == 3


@pytest.mark.parametrize("spec", [
    VectorPerm(5), MatrixConj(4), WeightSpace((2, 3, 4, 2)),
    WreathTuple(VectorPerm(3), 3), WreathTuple(WeightSpace((2, 2, 2)), 2),
])
def test_gather_index_matches_act(rng, spec):
    x = spec.random(rng)
    for g in spec.generators():
        assert np.array_equal(spec.flatten(spec.act(g, x)), spec.flatten(x)[spec.gather_index(g)])


@pytest.mark.parametrize("spec", [
    VectorPerm(5), VectorPerm(4, (Permutation.cycle(4),)), MatrixConj(4), WeightSpace((2, 3, 2)),
    WreathTuple(MatrixConj(3), 2), WreathTuple(VectorPerm(3), 4, (Permutation.cycle(4),)),
])
def test_spec_json_round_trip(spec):
    again = spec_from_json(spec.to_json())
    assert again.to_json() == spec.to_json()
    assert again.dim == spec.dim


def test_spec_validation():
    with pytest.raises(InvalidInputError):
        WeightSpace((2, 1, 2))
    with pytest.raises(InvalidInputError):
        WreathTuple(VectorPerm(3), 1)


def test_weightspace_point_json(rng):
    v = WeightSpace((2, 3, 2)).random(rng)
    assert WeightSpacePoint.from_json(v.to_json()) == v
    assert WeightSpacePoint.from_flat(v.dims, v.flatten()) == v
