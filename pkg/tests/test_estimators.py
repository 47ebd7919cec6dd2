import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from schurlayers import (
    DimensionError,
    IrrepDecomposer,
    MatrixConj,
    SchurCoefficients,
    SchurLayer,
    VectorPerm,
    WeightSpace,
    WreathLayer,
    WreathTuple,
    check_equivariance,
    equivariant_basis,
    layout,
)


def test_get_params_and_clone():
    est = SchurLayer(space=MatrixConj(4))
    assert est.get_params() == {"space": MatrixConj(4), "coefficients": None}
    assert clone(est).get_params()["space"] == MatrixConj(4)


def test_identity_by_default(rng):
    X = rng.standard_normal((5, 16))
    assert np.allclose(SchurLayer(MatrixConj(4)).fit_transform(X), X)


def test_json_space(rng):
    X = rng.standard_normal((3, 17))
    est = SchurLayer({"kind": "WeightSpace", "dims": [2, 3, 2]}).fit(X)
    assert len(est.coef_) == 74
    assert np.allclose(est.transform(X), X)


def test_validation(rng):
    with pytest.raises(NotFittedError):
        SchurLayer(MatrixConj(3)).transform(np.zeros((1, 9)))
    with pytest.raises(DimensionError):
        SchurLayer(MatrixConj(3)).fit(np.zeros((2, 8)))
    est = SchurLayer(MatrixConj(3)).fit(np.zeros((2, 9)))
    with pytest.raises(DimensionError):
        est.transform(np.zeros((2, 10)))
    with pytest.raises(ValueError):
        SchurLayer(MatrixConj(3)).fit(np.full((2, 9), np.nan))
    with pytest.raises(TypeError):
        SchurLayer("graph").fit(np.zeros((1, 9)))


@pytest.mark.parametrize("spec", [VectorPerm(5), MatrixConj(4), WeightSpace((2, 3, 2))])
def test_least_squares_recovers_equivariant_map(rng, spec):
    truth = SchurCoefficients.random(layout(spec), rng)
    X = rng.standard_normal((40, spec.dim))
    Y = SchurLayer(spec, truth).fit(X).transform(X)
    est = SchurLayer(spec).fit(X, Y)
    assert np.allclose(est.coef_, truth.to_vector(layout(spec)), atol=1e-8)
    assert np.allclose(est.predict(X), Y, atol=1e-8)


def test_fitted_layer_is_equivariant(rng):
    spec = MatrixConj(4)
    X = rng.standard_normal((30, 16))
    Y = rng.standard_normal((30, 16))
    L = SchurLayer(spec).fit(X, Y).matrix()
    report = check_equivariance(lambda A: spec.unflatten(L @ spec.flatten(A)), spec, trials=50)
    assert report.passed
    assert equivariant_basis(spec).dim == 15


def test_decomposer_round_trip(rng):
    X = rng.standard_normal((6, 25))
    dec = IrrepDecomposer(MatrixConj(5)).fit(X)
    Z = dec.transform(X)
    assert Z.shape[1] == len(dec.get_feature_names_out())
    assert np.allclose(dec.inverse_transform(Z), X)


def test_pipeline(rng):
    X = rng.standard_normal((4, 9))
    pipe = make_pipeline(SchurLayer(MatrixConj(3)), IrrepDecomposer(MatrixConj(3)))
    Z = pipe.fit_transform(X)
    assert np.allclose(pipe[-1].inverse_transform(Z), X)


def test_wreath_layer(rng):
    spec = WreathTuple(VectorPerm(2), 2)
    X = np.array([[1.0, 3.0, 5.0, 7.0]])
    out = WreathLayer(spec, a=[[1.0]], siamese=[]).fit_transform(X)
    assert np.allclose(out, [[8, 8, 8, 8]])
    assert np.allclose(WreathLayer(spec).fit_transform(X), X)


def test_wreath_least_squares(rng):
    spec = WreathTuple(MatrixConj(3), 2)
    truth = WreathLayer(spec, a=rng.standard_normal((2, 2)),
                        siamese=SchurCoefficients.random(layout(MatrixConj(3)), rng))
    X = rng.standard_normal((30, spec.dim))
    Y = truth.fit(X).transform(X)
    est = WreathLayer(spec).fit(X, Y)
    assert np.allclose(est.coefficients_.a, truth.coefficients_.a, atol=1e-8)
    assert np.allclose(est.transform(X), Y, atol=1e-8)
