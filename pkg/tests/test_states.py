import numpy as np
import pytest
from conftest import PAULI_X
from numpy.testing import assert_allclose

from minlab.qcore import DimensionProfile, hs_inner
from minlab.states import (
    FamilySpec,
    bell,
    family,
    ghz,
    ghz_1,
    ghz_minus,
    haar_pure,
    haar_unitary,
    random_mixed,
    split_rng,
    w3,
    w3_flipped,
)

R2 = 1 / np.sqrt(2)
R3 = 1 / np.sqrt(3)


def test_ghz_amplitudes():
    vec = ghz(3).vector
    expected = np.zeros(8)
    expected[0] = expected[7] = R2
    assert_allclose(vec, expected, atol=0)
    with pytest.raises(ValueError):
        ghz(1)


def test_named_states_are_normalized():
    for psi in (bell(), ghz(4), w3(), w3_flipped(), ghz_minus(), ghz_1()):
        assert abs(np.linalg.norm(psi.vector) - 1) < 1e-12


def test_w3_amplitudes():
    vec = w3().vector
    expected = np.zeros(8)
    expected[[1, 2, 4]] = R3
    assert_allclose(vec, expected, atol=0)


def test_flipped_w_is_xxx_applied_to_w():
    xxx = np.kron(np.kron(PAULI_X, PAULI_X), PAULI_X)
    assert_allclose(w3_flipped().vector, xxx @ w3().vector, atol=0)


def test_ghz_minus_orthogonal_to_ghz():
    assert ghz(3).vector.conj() @ ghz_minus().vector == pytest.approx(0.0, abs=1e-15)


def test_ghz1_amplitudes():
    vec = ghz_1().vector
    expected = np.zeros(8)
    expected[[1, 6]] = R2
    assert_allclose(vec, expected, atol=0)


def test_family_endpoints_reproduce_projectors():
    for name, endpoint_states in [
        ("ghz-w", (ghz(3), w3())),
        ("wt-w", (w3_flipped(), w3())),
        ("ghz-ghzminus", (ghz(3), ghz_minus())),
        ("ghz-ghz1", (ghz(3), ghz_1())),
    ]:
        hi, lo = endpoint_states
        assert_allclose(family(FamilySpec(name, 1.0)).matrix, hi.to_density().matrix, atol=0)
        assert_allclose(family(FamilySpec(name, 0.0)).matrix, lo.to_density().matrix, atol=0)


def test_family_states_are_valid():
    for name in ("ghz-w", "wt-w", "ghz-ghzminus", "ghz-ghz1"):
        rho = family(FamilySpec(name, 0.37))
        rho.validate()
        assert np.linalg.matrix_rank(rho.matrix) <= 2


def test_family_ghz_ghz1_half_has_zero_coherent_vector():
    from minlab.bloch import correlation_tensor

    rho = family(FamilySpec("ghz-ghz1", 0.5))
    assert_allclose(correlation_tensor(rho, (1,)), np.zeros(3), atol=1e-12)


def test_family_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec("ghz-w", 1.5)
    with pytest.raises(ValueError):
        FamilySpec("nope", 0.5)


def test_haar_pure_is_deterministic_and_pinned():
    psi = haar_pure(DimensionProfile((2, 2)), 12345)
    again = haar_pure(DimensionProfile((2, 2)), 12345)
    assert_allclose(psi.vector, again.vector, atol=0)
    pinned = np.array(
        [
            -0.5271251701082841 - 0.02789342265207951j,
            0.467854589859372 - 0.2742885805925268j,
            -0.3223343493602637 - 0.5063810104052608j,
            -0.09595050800096096 + 0.24023157338893045j,
        ]
    )
    assert_allclose(psi.vector, pinned, atol=1e-15)


def test_haar_pure_norm_and_marginal_purity():
    profile = DimensionProfile((2, 3))
    for i in range(20):
        psi = haar_pure(profile, (31, i))
        assert abs(np.linalg.norm(psi.vector) - 1) < 1e-12
        m = psi.marginal(1)
        purity = hs_inner(m, m)
        assert 1 / 2 - 1e-12 <= purity <= 1 + 1e-12


def test_random_mixed_rank_one_is_pure():
    rho = random_mixed(DimensionProfile((2, 2)), 1, 5)
    assert hs_inner(rho.matrix, rho.matrix) == pytest.approx(1.0, abs=1e-12)


def test_random_mixed_is_valid_density():
    rho = random_mixed(DimensionProfile((2, 2, 2)), 5, 6)
    assert rho.matrix.trace().real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(rho.matrix).min() > -1e-12
    with pytest.raises(ValueError):
        random_mixed(DimensionProfile((2, 2)), 0, 1)
    with pytest.raises(ValueError):
        random_mixed(DimensionProfile((2, 2)), 5, 1)


def test_split_rng_streams_are_independent_and_reproducible():
    a = split_rng(7, 0).standard_normal(4)
    b = split_rng(7, 1).standard_normal(4)
    assert not np.allclose(a, b)
    assert_allclose(a, split_rng(7, 0).standard_normal(4), atol=0)
    assert_allclose(
        split_rng((7, 3)).standard_normal(4), split_rng((7, 3)).standard_normal(4), atol=0
    )


def test_haar_unitary_is_unitary():
    u = haar_unitary(5, split_rng(9))
    assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)
