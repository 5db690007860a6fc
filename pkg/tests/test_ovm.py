"""Operator valued measure axioms and the scalar-measure calculus."""

from fractions import Fraction

import numpy as np
import pytest

from pvmk.cuntz import multiplication_pvm
from pvmk.errors import (
    CrossProductNonzero,
    NotHermitian,
    NotIdempotent,
    NotPSD,
    NotUnitary,
    SumNotIdentity,
)
from pvmk.linalg import max_abs, spectral_norm, to_complex
from pvmk.metric_core import validate_space
from pvmk.ovm import (
    conjugate,
    integrate,
    measure_of,
    polarize,
    quadratic_oracle_from,
    representation_check,
    scalar_measure,
    validate_ovm,
)
from pvmk.rng import SplitMix64
from pvmk.sampling import (
    random_metric_space,
    random_povm,
    random_pvm,
    random_unit_vector,
    random_unitary,
)

F = Fraction


def two_atom_space():
    return validate_space([[0, "1/2"], ["1/2", 0]])


def half_identity_povm():
    space = two_atom_space()
    return validate_ovm(space, [np.eye(2) / 2, np.eye(2) / 2], "positive")


def test_diagonal_pvm_validates(dyadic_ct2):
    pvm = multiplication_pvm(dyadic_ct2, 2)
    again = validate_ovm(pvm.space, pvm.mats, "projection")
    assert again.kind == "projection"


def test_half_identity_is_povm_but_not_pvm():
    space = two_atom_space()
    mats = [np.eye(2) / 2, np.eye(2) / 2]
    validate_ovm(space, mats, "positive")
    with pytest.raises(NotIdempotent):
        validate_ovm(space, mats, "projection")


def test_random_conjugate_of_pvm_validates():
    rng = SplitMix64(3)
    space = random_metric_space(3, rng)
    pvm = random_pvm(space, 3, rng, complex_=True)
    u = random_unitary(3, rng)
    moved = conjugate(pvm, u)
    assert moved.kind == "projection"


def test_validation_errors():
    space = two_atom_space()
    herm = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotHermitian):
        validate_ovm(space, [herm, np.eye(2) - herm], "positive")
    with pytest.raises(NotPSD):
        validate_ovm(space, [np.diag([2.0, 1.5]), np.diag([-1.0, -0.5])], "positive")
    with pytest.raises(SumNotIdentity):
        validate_ovm(space, [np.eye(2) / 2, np.eye(2) / 4], "positive")
    p0 = np.diag([1.0, 0.0])
    with pytest.raises(CrossProductNonzero):
        validate_ovm(space, [p0, p0], "projection")


def test_measure_of_additivity(dyadic_ct2):
    pvm = multiplication_pvm(dyadic_ct2, 2)
    ids = pvm.atom_ids
    union = measure_of(pvm, ids[:3])
    assert np.array_equal(union, sum(pvm.mats[:3]))


def test_scalar_measure_dirac(dyadic_ct2):
    pvm = multiplication_pvm(dyadic_ct2, 1)
    e0 = np.array([1.0, 0.0])
    pair = scalar_measure(pvm, e0, e0)
    assert pair.real.weights == (1.0, 0.0)
    assert pair.imag.weights == (0.0, 0.0)


def test_scalar_measure_diagonal_is_positive_with_mass():
    rng = SplitMix64(7)
    space = random_metric_space(3, rng)
    povm = random_povm(space, 3, rng)
    h = 2.0 * random_unit_vector(3, rng, complex_=True)
    pair = scalar_measure(povm, h, h)
    weights = np.array(pair.real.weights)
    assert np.abs(pair.imag.weights).max() < 1e-12
    assert weights.min() > -1e-12
    assert abs(weights.sum() - np.vdot(h, h).real) < 1e-12


def test_scalar_measure_total_variation_bound():
    rng = SplitMix64(11)
    for _ in range(10):
        space = random_metric_space(3, rng)
        povm = random_povm(space, 3, rng)
        g = 1.5 * random_unit_vector(3, rng, complex_=True)
        h = 0.5 * random_unit_vector(3, rng, complex_=True)
        pair = scalar_measure(povm, g, h)
        assert pair.total_variation <= 0.75 + 1e-10
        assert pair.conjugate_symmetry_defect < 1e-12


def test_integrate_constant_gives_scaled_identity(dyadic_ct2):
    pvm = multiplication_pvm(dyadic_ct2, 2)
    out = integrate([F(5, 3)] * 4, pvm)
    assert np.array_equal(out, np.diag([F(5, 3)] * 4).astype(object))
    rng = SplitMix64(13)
    space = random_metric_space(3, rng)
    povm = random_povm(space, 3, rng)
    out = integrate([2.5 + 0j] * 3, povm)
    assert max_abs(out - 2.5 * np.eye(3)) < 1e-12


def test_integrate_defining_identity():
    # <(integral psi dF) g, h> equals the psi-weighted sum of <F(.)g, h>
    rng = SplitMix64(15)
    space = random_metric_space(3, rng)
    povm = random_povm(space, 3, rng)
    psi = np.array([complex(rng.gauss(), rng.gauss()) for _ in range(3)])
    g = random_unit_vector(3, rng, complex_=True)
    h = random_unit_vector(3, rng, complex_=True)
    m = to_complex(integrate(psi, povm))
    lhs = np.vdot(h, m @ g)
    rhs = (psi * scalar_measure(povm, g, h).weights).sum()
    assert abs(lhs - rhs) < 1e-12


def test_integrate_indicator_returns_atom_value(dyadic_ct2):
    pvm = multiplication_pvm(dyadic_ct2, 2)
    psi = [0, 1, 0, 0]
    assert np.array_equal(integrate(psi, pvm), pvm.mats[1])


def test_integrate_real_function_is_hermitian():
    rng = SplitMix64(17)
    space = random_metric_space(3, rng)
    pvm = random_pvm(space, 3, rng, complex_=True)
    psi = [rng.gauss() for _ in range(3)]
    out = to_complex(integrate(psi, pvm))
    assert max_abs(out - out.conj().T) < 1e-12


def test_representation_check_discriminates(dyadic_ct2):
    diag = multiplication_pvm(dyadic_ct2, 2)
    rep = representation_check(diag)
    assert rep.max_defect < 1e-12
    half = half_identity_povm()
    rep = representation_check(half, extra=0)
    # indicator pair: product integral is 0, integrals multiply to I/4
    assert rep.multiplicativity == pytest.approx(0.25, abs=1e-15)
    assert rep.unital < 1e-15


def test_conjugate_examples(dyadic_ct2):
    pvm = multiplication_pvm(dyadic_ct2, 1)
    same = conjugate(pvm, np.eye(2))
    assert max_abs(to_complex(same.mats[0]) - to_complex(pvm.mats[0])) == 0
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    swapped = conjugate(pvm, swap)
    assert np.allclose(to_complex(swapped.mats[0]), np.diag([0.0, 1.0]))
    with pytest.raises(NotUnitary):
        conjugate(pvm, np.eye(2) * 2)


def test_polarize_collapses_on_diagonal():
    rng = SplitMix64(19)
    space = random_metric_space(3, rng)
    povm = random_povm(space, 3, rng)
    h = random_unit_vector(3, rng, complex_=True)
    pair = polarize(quadratic_oracle_from(povm), h, h)
    direct = scalar_measure(povm, h, h)
    assert np.abs(pair.weights - direct.weights).max() < 1e-12
    assert np.abs(pair.weights.imag).max() < 1e-12


def test_polarize_orthogonal_atoms_zero(dyadic_ct2):
    pvm = multiplication_pvm(dyadic_ct2, 2)
    e0 = np.eye(4)[0]
    e1 = np.eye(4)[1]
    pair = polarize(quadratic_oracle_from(pvm), e0, e1)
    assert np.abs(pair.weights).max() < 1e-12


def test_polarize_matches_scalar_measure_randomly():
    rng = SplitMix64(23)
    for _ in range(5):
        space = random_metric_space(3, rng)
        povm = random_povm(space, 3, rng)
        g = random_unit_vector(3, rng, complex_=True)
        h = random_unit_vector(3, rng, complex_=True)
        rebuilt = polarize(quadratic_oracle_from(povm), g, h).weights
        direct = scalar_measure(povm, g, h).weights
        assert np.abs(rebuilt - direct).max() < 1e-12


def test_sesquilinearity():
    rng = SplitMix64(29)
    space = random_metric_space(3, rng)
    povm = random_povm(space, 3, rng)
    g = random_unit_vector(3, rng, complex_=True)
    h = random_unit_vector(3, rng, complex_=True)
    k = random_unit_vector(3, rng, complex_=True)
    alpha = complex(rng.gauss(), rng.gauss())
    lhs = scalar_measure(povm, alpha * g + k, h).weights
    rhs = alpha * scalar_measure(povm, g, h).weights + scalar_measure(povm, k, h).weights
    assert np.abs(lhs - rhs).max() < 1e-12
    lhs2 = scalar_measure(povm, g, alpha * h).weights
    rhs2 = np.conj(alpha) * scalar_measure(povm, g, h).weights
    assert np.abs(lhs2 - rhs2).max() < 1e-12


def test_identity_of_measures_on_spanning_panel():
    # equal quadratic diagonals on a spanning panel force atomwise equality
    rng = SplitMix64(31)
    space = random_metric_space(3, rng)
    E = random_pvm(space, 3, rng, complex_=True)
    F2 = random_pvm(space, 3, rng, complex_=True)
    basis = [np.eye(3)[i].astype(complex) for i in range(3)]
    panel = list(basis)
    for i in range(3):
        for j in range(i + 1, 3):
            panel.append(basis[i] + basis[j])
            panel.append(1j * basis[i] + basis[j])

    def equal_on_panel(a, b):
        return all(
            np.abs(
                np.array(scalar_measure(a, h, h).real.weights)
                - np.array(scalar_measure(b, h, h).real.weights)
            ).max()
            < 1e-12
            for h in panel
        )

    assert equal_on_panel(E, E)
    same = validate_ovm(space, [m.copy() for m in E.mats], "projection")
    assert equal_on_panel(E, same)
    if not equal_on_panel(E, F2):
        diffs = max(
            spectral_norm(to_complex(a) - to_complex(b))
            for a, b in zip(E.mats, F2.mats)
        )
        assert diffs > 1e-10
    # reconstruction: panel diagonals determine every matrix entry
    for atom in range(3):
        rebuilt = np.zeros((3, 3), dtype=complex)
        for i in range(3):
            for j in range(3):
                pair = polarize(quadratic_oracle_from(E), basis[j], basis[i])
                rebuilt[i, j] = pair.weights[atom]
        assert np.abs(rebuilt - to_complex(E.mats[atom])).max() < 1e-12
