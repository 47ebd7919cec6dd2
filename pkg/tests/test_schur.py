import numpy as np
import pytest

from schurlayers import (
    InvalidInputError,
    IsoClassLabel,
    LayoutError,
    MatrixConj,
    SchurCoefficients,
    VectorPerm,
    WeightSpace,
    WreathTuple,
    assemble_layer,
    basis_keys,
    decompose,
    deepsets_layer,
    layout,
    param_count,
)

SPECS = [VectorPerm(5), MatrixConj(3), MatrixConj(5), WeightSpace((2, 3, 4, 2)), WreathTuple(MatrixConj(4), 2)]


def test_param_count_examples():
    assert param_count([2, 3, 1, 1]) == 15
    assert param_count([1]) == 1
    assert param_count([9, 4, 4, 1]) == 114
    with pytest.raises(InvalidInputError):
        param_count([])


@pytest.mark.parametrize("spec", SPECS)
def test_identity_and_zero(rng, spec):
    x = spec.random(rng)
    dec = decompose(spec, x)
    lay = dec.layout()
    assert np.allclose(assemble_layer(SchurCoefficients.identity(lay), dec), spec.flatten(x), atol=1e-12)
    assert np.array_equal(assemble_layer(SchurCoefficients(), dec), np.zeros(spec.dim))
    assert np.allclose(dec.reconstruct(), spec.flatten(x), atol=1e-12)


def test_deepsets_through_schur(rng):
    x = rng.standard_normal(6)
    a, b = 1.7, -0.4
    coeffs = SchurCoefficients({(IsoClassLabel.trivial(), 0, 0): a, (IsoClassLabel.vec(0, 6), 0, 0): b})
    out = assemble_layer(coeffs, decompose(VectorPerm(6), x))
    assert np.allclose(out, deepsets_layer(a, b, x))


@pytest.mark.parametrize("spec", SPECS)
def test_linearity(rng, spec):
    lay = layout(spec)
    c = SchurCoefficients.random(lay, rng)
    x, y = spec.random(rng), spec.random(rng)
    xy = spec.unflatten(spec.flatten(x) + spec.flatten(y))
    lhs = assemble_layer(c, decompose(spec, xy))
    rhs = assemble_layer(c, decompose(spec, x)) + assemble_layer(c, decompose(spec, y))
    assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(lhs).max()
    # linear in the coefficients too
    c2 = SchurCoefficients.random(lay, rng)
    dx = decompose(spec, x)
    both = assemble_layer(c + c2.scale(2.0), dx)
    assert np.allclose(both, assemble_layer(c, dx) + 2 * assemble_layer(c2, dx))


@pytest.mark.parametrize("spec", SPECS)
def test_single_key_routes_to_target_slot(rng, spec):
    x = spec.random(rng)
    dec = decompose(spec, x)
    for label, i, j in basis_keys(dec.layout()):
        out = assemble_layer(SchurCoefficients({(label, i, j): 1.0}), dec)
        out_dec = decompose(spec, spec.unflatten(out))
        for comp in out_dec:
            norm = np.abs(comp.coords).max()
            if (comp.label, comp.slot) == (label, j):
                assert np.allclose(comp.coords, dec.component(label, i).coords, atol=1e-10)
            else:
                assert norm <= 1e-10


def test_layout_error():
    dec = decompose(VectorPerm(4), np.arange(4.0))
    bad = SchurCoefficients({(IsoClassLabel.trivial(), 0, 3): 1.0})
    with pytest.raises(LayoutError):
        assemble_layer(bad, dec)
    with pytest.raises(LayoutError):
        bad.validate(dec.layout())


def test_coefficients_json_round_trip(rng):
    lay = layout(MatrixConj(4))
    c = SchurCoefficients.random(lay, rng)
    again = SchurCoefficients.from_json(c.to_json())
    assert np.array_equal(again.to_vector(lay), c.to_vector(lay))
    assert len(basis_keys(lay)) == 15


def test_decomposition_components_unique(rng):
    dec = decompose(WeightSpace((2, 3, 4, 2)), WeightSpace((2, 3, 4, 2)).random(rng))
    keys = [(c.label, c.slot) for c in dec]
    assert len(keys) == len(set(keys))
