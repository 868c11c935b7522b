import numpy as np
import pytest
from conftest import PAULI_X, PAULI_Z, embed_single_loops, kron_loops, partial_trace_loops
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from minlab.bloch import generators
from minlab.qcore import (
    DensityOperator,
    DimensionProfile,
    MeasurementBasis,
    PureState,
    apply_measurement,
    degeneracy_clusters,
    embed_operator,
    hermitian_eig,
    hs_inner,
    kron,
    partial_trace,
)
from minlab.states import ghz, haar_pure, w3


def test_profile_rejects_bad_dims():
    with pytest.raises(ValueError):
        DimensionProfile((2, 1))
    with pytest.raises(ValueError):
        DimensionProfile(())
    assert DimensionProfile((2, 3, 2)).total == 12


def test_kron_identity():
    assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_sign_algebra():
    zz = kron(PAULI_Z, PAULI_Z)
    e11 = np.zeros(4)
    e11[3] = 1.0
    assert_allclose(zz @ e11, e11)  # (-1)(-1) = +1 on |11>


def test_kron_chain_matches_loop_construction():
    # two embedded single-site generators multiplied together, on (2,2,2)
    dims = (2, 2, 2)
    profile = DimensionProfile(dims)
    g2 = generators(2).generators
    for alpha, beta in [(0, 1), (2, 2), (1, 0)]:
        via_kron = kron(kron(g2[alpha], np.eye(2)), np.eye(2)) @ kron(
            kron(np.eye(2), np.eye(2)), g2[beta]
        )
        via_loops = embed_single_loops(g2[alpha], 0, dims) @ embed_single_loops(g2[beta], 2, dims)
        assert_allclose(via_kron, via_loops, atol=1e-14)
        assert_allclose(
            embed_operator(np.kron(g2[alpha], g2[beta]), (1, 3), profile), via_loops, atol=1e-14
        )


@given(
    p=st.integers(min_value=1, max_value=3),
    q=st.integers(min_value=1, max_value=3),
    r=st.integers(min_value=1, max_value=3),
)
@settings(max_examples=20, deadline=None)
def test_kron_matches_loops_on_random_shapes(p, q, r):
    gen = np.random.default_rng(p * 100 + q * 10 + r)
    a = gen.standard_normal((p, q)) + 1j * gen.standard_normal((p, q))
    b = gen.standard_normal((r, p)) + 1j * gen.standard_normal((r, p))
    assert_allclose(kron(a, b), kron_loops(a, b), atol=1e-14)


def test_partial_trace_ghz_marginal():
    rho = ghz(3).to_density()
    assert_allclose(partial_trace(rho, 1), np.eye(2) / 2, atol=1e-12)


def test_partial_trace_w_marginal():
    # independent sum over the amplitudes of (|001> + |010> + |100>)/sqrt(3)
    rho = w3().to_density()
    expected = partial_trace_loops(rho.matrix, (2, 2, 2), (0,))
    assert_allclose(expected, np.diag([2 / 3, 1 / 3]), atol=1e-12)
    assert_allclose(partial_trace(rho, 1), expected, atol=1e-12)


def test_partial_trace_product_state():
    vec = np.zeros(8, dtype=complex)
    vec[0] = 1.0
    rho = PureState.from_vector(vec, (2, 2, 2)).to_density()
    assert_allclose(partial_trace(rho, 2), np.diag([1.0, 0.0]), atol=1e-14)


def test_partial_trace_out_of_range():
    rho = ghz(3).to_density()
    with pytest.raises(ValueError):
        partial_trace(rho, 4)
    with pytest.raises(ValueError):
        partial_trace(rho, 0)


def test_partial_trace_of_kron_factors_exactly():
    gen = np.random.default_rng(3)
    blocks = []
    for d in (2, 3):
        m = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
        m = m @ m.conj().T
        blocks.append(m / m.trace())
    rho = DensityOperator(np.kron(blocks[0], blocks[1]), DimensionProfile((2, 3)))
    assert_allclose(partial_trace(rho, 1), blocks[0], atol=1e-12)
    assert_allclose(partial_trace(rho, 2), blocks[1], atol=1e-12)


def test_partial_trace_multi_keep_matches_loops(rng):
    dims = (2, 3, 2)
    d = 12
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = m @ m.conj().T
    m /= m.trace()
    rho = DensityOperator(m, DimensionProfile(dims))
    for keep in [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]:
        keep0 = tuple(k - 1 for k in keep)
        assert_allclose(partial_trace(rho, keep), partial_trace_loops(m, dims, keep0), atol=1e-12)


def test_hermitian_eig_diagonal():
    vals, _ = hermitian_eig(np.diag([1 / 3, 2 / 3]))
    assert_allclose(vals, [2 / 3, 1 / 3])


def test_hermitian_eig_pauli_x():
    vals, vecs = hermitian_eig(PAULI_X)
    assert_allclose(vals, [1.0, -1.0])
    r = 1 / np.sqrt(2)
    assert_allclose(vecs[:, 0], [r, r], atol=1e-12)
    assert_allclose(vecs[:, 1], [r, -r], atol=1e-12)


def test_hermitian_eig_reconstruction(rng):
    for d in (4, 9, 24):
        m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        m = m + m.conj().T
        vals, vecs = hermitian_eig(m)
        assert np.all(np.diff(vals) <= 1e-12)
        rebuilt = (vecs * vals) @ vecs.conj().T
        assert np.linalg.norm(rebuilt - m) < 1e-10


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_degeneracy_clusters():
    assert degeneracy_clusters(np.array([0.5, 0.5, 0.25])) == [[0, 1], [2]]
    assert degeneracy_clusters(np.array([0.7, 0.2, 0.1])) == [[0], [1], [2]]


def test_apply_measurement_dephases_bell():
    rho = ghz(2).to_density()
    basis = MeasurementBasis(1, np.eye(2, dtype=complex))
    out = apply_measurement(rho, basis)
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 0] = expected[3, 3] = 0.5
    assert_allclose(out.matrix, expected, atol=1e-14)


def test_apply_measurement_idempotent(rng):
    rho = haar_pure(DimensionProfile((2, 2, 2)), 71).to_density()
    u, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    basis = MeasurementBasis(2, u)
    once = apply_measurement(rho, basis)
    twice = apply_measurement(once, basis)
    assert np.abs(twice.matrix - once.matrix).max() < 1e-10


def test_apply_measurement_keeps_marginal_in_eigenbasis():
    for seed in range(4):
        rho = haar_pure(DimensionProfile((2, 3, 2)), (81, seed)).to_density()
        marg = partial_trace(rho, 2)
        _, vecs = hermitian_eig(marg)
        out = apply_measurement(rho, MeasurementBasis(2, vecs))
        assert np.abs(partial_trace(out, 2) - marg).max() < 1e-10


def test_apply_measurement_leaves_product_state_alone(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    a = a @ a.conj().T
    a /= a.trace()
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = b @ b.conj().T
    b /= b.trace()
    rho = DensityOperator(np.kron(a, b), DimensionProfile((2, 3)))
    _, vecs = hermitian_eig(a)
    out = apply_measurement(rho, MeasurementBasis(1, vecs))
    assert np.abs(out.matrix - rho.matrix).max() < 1e-12


def test_apply_measurement_dimension_mismatch():
    rho = ghz(3).to_density()
    with pytest.raises(ValueError):
        apply_measurement(rho, MeasurementBasis(1, np.eye(3, dtype=complex)))


def test_hs_inner_basics():
    assert hs_inner(np.eye(2), np.eye(2)) == pytest.approx(2.0)
    rho = ghz(2).to_density().matrix
    assert hs_inner(rho, rho) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        hs_inner(np.eye(2), np.eye(3))


def test_hs_inner_post_measurement_purity_identity():
    # eigenbasis measurement on qubit 1 of W: overlap equals marginal purity 5/9
    rho = w3().to_density()
    marg = partial_trace(rho, 1)
    _, vecs = hermitian_eig(marg)
    post = apply_measurement(rho, MeasurementBasis(1, vecs))
    direct = np.trace(marg @ marg).real
    assert direct == pytest.approx(5 / 9, abs=1e-12)
    assert hs_inner(rho.matrix, post.matrix) == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("dims", [(2, 2), (2, 2, 2), (2, 3, 2)])
def test_post_measurement_overlap_identity_on_haar_states(dims):
    # for pure rho and an eigenbasis measurement the overlap with the
    # post-measurement state equals the marginal purity
    profile = DimensionProfile(dims)
    for i in range(100):
        rho = haar_pure(profile, (97, i)).to_density()
        marg = partial_trace(rho, 1)
        _, vecs = hermitian_eig(marg)
        post = apply_measurement(rho, MeasurementBasis(1, vecs))
        assert abs(hs_inner(rho.matrix, post.matrix) - np.trace(marg @ marg).real) < 1e-10


def test_density_operator_validation():
    with pytest.raises(ValueError):
        DensityOperator.from_matrix(np.array([[1.0, 0.5], [0.0, 0.0]]), (2,))
    with pytest.raises(ValueError):
        DensityOperator.from_matrix(np.eye(2), (2,))  # trace 2
    with pytest.raises(ValueError):
        DensityOperator.from_matrix(np.diag([1.5, -0.5]).astype(complex), (2,))
    ok = DensityOperator.from_matrix(np.eye(2) / 2, (2,))
    assert ok.profile.dims == (2,)


def test_pure_state_validation():
    with pytest.raises(ValueError):
        PureState.from_vector(np.array([1.0, 1.0]), (2,))
    psi = PureState.from_vector(np.array([1.0, 0.0]), (2,))
    assert psi.vector[0] == 1.0


def test_measurement_basis_validation():
    MeasurementBasis(1, np.eye(2, dtype=complex)).validate()
    with pytest.raises(ValueError):
        MeasurementBasis(1, np.array([[1.0, 1.0], [0.0, 0.0]])).validate()
