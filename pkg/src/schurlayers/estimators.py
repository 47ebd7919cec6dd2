"""scikit-learn style wrappers.

Samples are rows of a 2-D array holding flattened elements of the ambient
space (row-major matrices; ``[W1, b1, W2, b2, ...]`` for weight spaces; slot
after slot for tuples), so the layers drop into pipelines and model selection.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DimensionError
from .groups import ActionSpec, WreathTuple, spec_from_json
from .schur import SchurCoefficients, assemble_layer, basis_keys
from .spaces import basis_layers, decompose, layout
from .wreath import WreathCoefficients, fixed_basis, wreath_basis_layers, wreath_layer

__all__ = ["SchurLayer", "IrrepDecomposer", "WreathLayer"]


def _as_spec(space) -> ActionSpec:
    if isinstance(space, ActionSpec):
        return space
    if isinstance(space, dict):
        return spec_from_json(space)
    raise TypeError(f"expected an ActionSpec or its JSON form, got {type(space).__name__}")


def _check_X(estimator, X, reset: bool):
    X = check_array(X, dtype=np.float64)
    if reset:
        estimator.n_features_in_ = X.shape[1]
    elif X.shape[1] != estimator.n_features_in_:
        raise DimensionError(f"X has {X.shape[1]} features, {type(estimator).__name__} expects {estimator.n_features_in_}")
    return X


def _lstsq_coefficients(mats, X, Y) -> np.ndarray:
    design = np.stack([(X @ B.T).ravel() for B in mats], axis=1)
    coef, *_ = np.linalg.lstsq(design, Y.ravel(), rcond=None)
    return coef


class SchurLayer(TransformerMixin, BaseEstimator):
    """Equivariant linear layer parameterised by Schur coefficients.

    Parameters
    ----------
    space : ActionSpec or dict
        The space and group, e.g. ``MatrixConj(5)`` or ``{"kind": "WeightSpace", "dims": [2, 3, 2]}``.
    coefficients : SchurCoefficients, list of records, array-like or None
        Used by ``fit(X)`` without targets. ``None`` means the identity layer.
        A flat array is read in the order of ``coef_keys_``.

    ``fit(X, Y)`` instead finds the least-squares equivariant map taking rows
    of ``X`` to rows of ``Y``.
    """

    def __init__(self, space=None, coefficients=None):
        self.space = space
        self.coefficients = coefficients

    def fit(self, X, y=None):
        spec = _as_spec(self.space)
        X = _check_X(self, X, reset=True)
        if X.shape[1] != spec.dim:
            raise DimensionError(f"X has {X.shape[1]} features, the space has dimension {spec.dim}")
        self.spec_ = spec
        self.layout_ = layout(spec)
        self.coef_keys_ = basis_keys(self.layout_)
        if y is not None:
            Y = check_array(y, dtype=np.float64)
            if Y.shape != X.shape:
                raise DimensionError(f"targets of shape {Y.shape} do not match inputs {X.shape}")
            coef = _lstsq_coefficients(basis_layers(spec), X, Y)
            self.coefficients_ = SchurCoefficients.from_vector(self.layout_, coef)
        else:
            self.coefficients_ = self._given_coefficients()
        self.coefficients_.validate(self.layout_)
        self.coef_ = self.coefficients_.to_vector(self.layout_)
        return self

    def _given_coefficients(self) -> SchurCoefficients:
        c = self.coefficients
        if c is None:
            return SchurCoefficients.identity(self.layout_)
        if isinstance(c, SchurCoefficients):
            return c
        if isinstance(c, (list, tuple)) and c and isinstance(c[0], dict):
            return SchurCoefficients.from_json(c)
        return SchurCoefficients.from_vector(self.layout_, np.asarray(c, dtype=float).ravel())

    def transform(self, X):
        check_is_fitted(self, "coefficients_")
        X = _check_X(self, X, reset=False)
        spec, coeffs = self.spec_, self.coefficients_
        return np.stack([assemble_layer(coeffs, decompose(spec, spec.unflatten(x))) for x in X])

    def predict(self, X):
        return self.transform(X)

    def matrix(self) -> np.ndarray:
        """The layer as a dense ``D x D`` matrix."""
        check_is_fitted(self, "coefficients_")
        return sum(self.coef_[i] * B for i, B in enumerate(basis_layers(self.spec_)))


class IrrepDecomposer(TransformerMixin, BaseEstimator):
    """Map each sample to the concatenated canonical coordinates of its irreducible components."""

    def __init__(self, space=None):
        self.space = space

    def fit(self, X, y=None):
        spec = _as_spec(self.space)
        X = _check_X(self, X, reset=True)
        if X.shape[1] != spec.dim:
            raise DimensionError(f"X has {X.shape[1]} features, the space has dimension {spec.dim}")
        self.spec_ = spec
        template = decompose(spec, spec.zeros())
        self.components_ = [(c.label, c.slot, c.where) for c in template]
        self.sizes_ = [c.coords.size for c in template]
        self._template = template
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = _check_X(self, X, reset=False)
        spec = self.spec_
        return np.stack([
            np.concatenate([c.coords for c in decompose(spec, spec.unflatten(x))]) for x in X
        ])

    def inverse_transform(self, Z):
        check_is_fitted(self, "components_")
        Z = check_array(Z, dtype=np.float64)
        if Z.shape[1] != sum(self.sizes_):
            raise DimensionError(f"expected {sum(self.sizes_)} coordinates, got {Z.shape[1]}")
        bounds = np.cumsum([0] + self.sizes_)
        comps = list(self._template)
        out = np.zeros((Z.shape[0], self.spec_.dim))
        for row, z in zip(out, Z):
            for c, lo, hi in zip(comps, bounds[:-1], bounds[1:]):
                row += c.embed(z[lo:hi])
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "components_")
        names = []
        for (label, slot, _), size in zip(self.components_, self.sizes_):
            names += [f"{label}[{slot}]_{i}" for i in range(size)]
        return np.asarray(names, dtype=object)


class WreathLayer(TransformerMixin, BaseEstimator):
    """Equivariant layer on k-tuples: Siamese base layer plus slot-mixing terms.

    Parameters
    ----------
    space : WreathTuple or dict
    a : array-like (s, s) or None
        Mixing through the fixed subspace; ``None`` means zero.
    siamese : SchurCoefficients, list of records or None
        The shared base layer; ``None`` means the identity.
    """

    def __init__(self, space=None, a=None, siamese=None):
        self.space = space
        self.a = a
        self.siamese = siamese

    def fit(self, X, y=None):
        spec = _as_spec(self.space)
        if not isinstance(spec, WreathTuple):
            raise TypeError("WreathLayer needs a WreathTuple space")
        X = _check_X(self, X, reset=True)
        if X.shape[1] != spec.dim:
            raise DimensionError(f"X has {X.shape[1]} features, the space has dimension {spec.dim}")
        self.spec_ = spec
        self.basis_ = fixed_basis(spec.base)
        s = len(self.basis_)
        base_layout = layout(spec.base)
        if y is not None:
            if spec.outer_generators is not None:
                raise NotImplementedError("least-squares fitting is only implemented for H = S_k")
            Y = check_array(y, dtype=np.float64)
            if Y.shape != X.shape:
                raise DimensionError(f"targets of shape {Y.shape} do not match inputs {X.shape}")
            coef = _lstsq_coefficients(wreath_basis_layers(spec, self.basis_), X, Y)
            n_siamese = len(basis_keys(base_layout))
            siamese = SchurCoefficients.from_vector(base_layout, coef[:n_siamese])
            a = coef[n_siamese:].reshape(s, s)
        else:
            a = np.zeros((s, s)) if self.a is None else np.asarray(self.a, dtype=float).reshape(s, s)
            siamese = self.siamese
            if siamese is None:
                siamese = SchurCoefficients.identity(base_layout)
            elif not isinstance(siamese, SchurCoefficients):
                siamese = SchurCoefficients.from_json(siamese)
        siamese.validate(base_layout)
        self.coefficients_ = WreathCoefficients(a, siamese)
        return self

    def transform(self, X):
        check_is_fitted(self, "coefficients_")
        X = _check_X(self, X, reset=False)
        spec = self.spec_
        return np.stack([
            spec.flatten(wreath_layer(self.coefficients_, spec.unflatten(x), self.basis_)) for x in X
        ])

    def predict(self, X):
        return self.transform(X)
