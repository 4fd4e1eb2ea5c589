"""Linear maps: Choi matrices, Kraus factors, amplification, norm
estimation, real-complete-positivity testing, symmetric projections."""
import numpy as np
import pytest

from realpos.algebra import block_diag_algebra, diagonal_algebra, full_matrix_algebra
from realpos.errors import InputError, PreconditionError, UnsupportedError
from realpos.linalg import operator_norm, random_unitary, rng_for
from realpos.maps import (
    LinearMapOnAlgebra,
    amplify,
    build_symmetric_projection,
    choi_matrix,
    classify_projection,
    identity_map,
    is_cp,
    kraus_factor,
    map_from_function,
    map_from_kraus,
    op_norm_estimate,
    rcp_test,
    transpose_map,
)

SWAP2 = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
], dtype=complex)


def test_choi_of_transpose_is_swap():
    ch = choi_matrix(transpose_map(2))
    assert np.allclose(ch.c, SWAP2, atol=1e-14)
    assert ch.min_eig == pytest.approx(-1.0, abs=1e-12)
    assert ch.herm


def test_choi_of_identity_is_entangled_projector():
    ch = choi_matrix(identity_map(full_matrix_algebra(2)))
    # block (i,j) = E_ij: entries c[2i+k, 2j+l] = delta_{ik} delta_{jl}
    expect = np.array([
        [1, 0, 0, 1],
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [1, 0, 0, 1],
    ], dtype=complex)
    assert np.allclose(ch.c, expect, atol=1e-14)
    assert ch.min_eig >= -1e-12
    assert is_cp(identity_map(full_matrix_algebra(2))).cp


def test_choi_requires_full_domain():
    with pytest.raises(UnsupportedError):
        choi_matrix(identity_map(diagonal_algebra(2)))


def test_kraus_roundtrip_unitary_conjugation():
    u = random_unitary(3, 4)
    t_map = map_from_kraus([u], 3)
    ops, res = kraus_factor(t_map)
    assert len(ops) == 1
    assert res <= 1e-10
    # single Kraus operator recovered up to phase
    ratio = ops[0] @ np.linalg.inv(u)
    assert np.allclose(ratio, ratio[0, 0] * np.eye(3), atol=1e-8)
    assert abs(abs(ratio[0, 0]) - 1.0) <= 1e-9


def test_kraus_roundtrip_random_cp():
    rng = rng_for(12)
    ops = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
           for _ in range(2)]
    t_map = map_from_kraus(ops, 3)
    kops, res = kraus_factor(t_map)
    assert res <= 1e-8
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rebuilt = sum(o.conj().T @ a @ o for o in kops)
    assert np.allclose(rebuilt, t_map.apply(a), atol=1e-8)


def test_kraus_rejects_non_cp():
    with pytest.raises(PreconditionError):
        kraus_factor(transpose_map(2))


def test_amplify_identity_and_blocks():
    t_map = identity_map(full_matrix_algebra(2))
    t2 = amplify(t_map, 2)
    assert t2.domain.n == 4
    rng = rng_for(3)
    x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.allclose(t2.apply(x), x, atol=1e-12)


def test_amplify_acts_blockwise():
    t_map = transpose_map(2)
    t2 = amplify(t_map, 2)
    rng = rng_for(5)
    blocks = [[rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
               for _ in range(2)] for _ in range(2)]
    x = np.block(blocks)
    y = t2.apply(x)
    expect = np.block([[blocks[i][j].T for j in range(2)] for i in range(2)])
    assert np.allclose(y, expect, atol=1e-12)


def test_map_rejects_out_of_domain_input():
    d = diagonal_algebra(2)
    t_map = identity_map(d)
    with pytest.raises(InputError):
        t_map.apply(np.array([[0, 1.0], [0, 0]], dtype=complex))


def test_map_from_function_validates_codomain():
    d = diagonal_algebra(2)
    with pytest.raises(InputError):
        map_from_function(lambda m: np.array([[0, m[0, 0]], [0, 0]], dtype=complex), d)


def test_op_norm_transpose_levels():
    t_map = transpose_map(2)
    e1 = op_norm_estimate(t_map, k=1)
    assert e1.value == pytest.approx(1.0, abs=1e-9)
    e2 = op_norm_estimate(t_map, k=2)
    assert e2.value == pytest.approx(2.0, abs=1e-9)
    e3 = op_norm_estimate(t_map, k=3)
    assert 2.0 - 1e-9 <= e3.value <= 2.0 + 1e-9  # min(k, n) = 2


def test_op_norm_identity():
    t_map = identity_map(full_matrix_algebra(3))
    assert op_norm_estimate(t_map, k=2).value == pytest.approx(1.0, abs=1e-9)


def test_op_norm_scaling():
    alg = full_matrix_algebra(2)
    t_map = map_from_function(lambda m: 3.0 * m, alg)
    assert op_norm_estimate(t_map, k=1).value == pytest.approx(3.0, abs=1e-8)


def test_rcp_cp_certificate():
    v = rcp_test(identity_map(full_matrix_algebra(2)), seed=3)
    assert v.passed and v.certified and v.certificate == "choi_psd"
    assert not v.sampled_violations


def test_rcp_transpose_witness():
    v = rcp_test(transpose_map(2), seed=3)
    assert not v.passed and v.certified and v.certificate == "witness"
    w = v.witness
    assert w["level"] == 2
    assert w["in_abscissa"] >= -1e-10
    assert w["out_abscissa"] <= -1e-4


def test_rcp_non_full_domain_uncertified_pass():
    d = diagonal_algebra(3)
    v = rcp_test(identity_map(d), seed=1, budget=60)
    assert v.passed and not v.certified


def _theta_q_m2_plus_m1(seed=0):
    alg = block_diag_algebra([2, 1])
    rng = rng_for(seed)
    h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    w, v = np.linalg.eigh(h + h.conj().T)
    u2 = (v * np.sign(w)) @ v.conj().T
    u = np.eye(3, dtype=complex)
    u[:2, :2] = u2
    q = np.diag([1.0, 1.0, 0.0]).astype(complex)
    theta = map_from_function(lambda m: u @ m @ u.conj().T, alg)
    return theta, q, alg


def test_build_symmetric_projection_cert():
    theta, q, alg = _theta_q_m2_plus_m1(7)
    p_map, cert = build_symmetric_projection(theta, q, alg, seed=2)
    assert cert.passed
    assert cert.idempotent_residual <= 1e-9
    assert all(v <= 1.0 + 1e-6 for v in cert.symmetry_norms.values())
    assert cert.rcp.passed
    assert cert.range_is_fixed_points
    assert cert.complement_vanishing <= 1e-7
    # P really averages theta on the q corner
    b = np.zeros((3, 3), dtype=complex)
    b[0, 1] = 1.0
    expect = 0.5 * (b + theta.apply(b))
    assert np.allclose(p_map.apply(b), expect, atol=1e-10)


def test_build_symmetric_projection_named_preconditions():
    theta, q, alg = _theta_q_m2_plus_m1(7)
    bad_q = np.diag([2.0, 0.0, 0.0]).astype(complex)
    with pytest.raises(PreconditionError, match="idempotent"):
        build_symmetric_projection(theta, bad_q, alg)
    rot = np.diag([1.0, 1.0j, 1.0]).astype(complex)  # period 4, not 2
    theta4 = map_from_function(lambda m: rot @ m @ rot.conj().T, alg)
    with pytest.raises(PreconditionError, match="period-2"):
        build_symmetric_projection(theta4, q, alg)
    # theta not fixing q: swap the two blocks of a [1,1] tower
    alg2 = block_diag_algebra([1, 1])
    swap = np.array([[0, 1.0], [1.0, 0]], dtype=complex)
    theta_sw = map_from_function(lambda m: swap @ m @ swap, alg2)
    q2 = np.diag([1.0, 0.0]).astype(complex)
    with pytest.raises(PreconditionError, match="fix"):
        build_symmetric_projection(theta_sw, q2, alg2)


def test_scalar_averaging_classification():
    alg = full_matrix_algebra(2)
    p_map = map_from_function(
        lambda m: np.trace(m) / 2.0 * np.eye(2, dtype=complex), alg)
    c = classify_projection(p_map, seed=4)
    assert c.symmetric
    assert not c.completely_symmetric
    # adjugate identity: I - 2P = -(Ad R) o transpose, so level 2 norm is 2
    assert c.symmetric_levels[1] == pytest.approx(1.0, abs=1e-8)
    assert c.symmetric_levels[2] == pytest.approx(2.0, abs=1e-8)
    assert c.cond_exp_residual <= 1e-10
    assert c.conditional_expectation
    assert c.rcp.passed and c.rcp.certified
    assert c.contractive
    assert c.range_product_closed
    assert c.induced_assoc_residual <= 1e-10


def test_classify_block_conditional_expectation():
    # P = compression to the diagonal of M_2: a genuine conditional
    # expectation, completely symmetric (I - 2P = Ad diag(1,-1))
    alg = full_matrix_algebra(2)
    p_map = map_from_function(lambda m: np.diag(np.diag(m)).astype(complex), alg)
    c = classify_projection(p_map, seed=4)
    assert c.completely_symmetric
    assert c.conditional_expectation
    assert c.bicontractive
    # kernel = off-diagonal span; E12 E21 = E11, so squares do not vanish
    assert not c.kernel_square_zero


def test_classify_rejects_non_idempotent():
    alg = full_matrix_algebra(2)
    t_map = map_from_function(lambda m: 2.0 * m, alg)
    with pytest.raises(PreconditionError):
        classify_projection(t_map)
