"""Subalgebra spans, generated algebras, support idempotents, and the
structural equivalence checks."""
import numpy as np
import pytest

from realpos.algebra import (
    SubalgebraBasis,
    aarnes_kadison_check,
    ba,
    ba_ftransform_equal,
    block_diag_algebra,
    diagonal_algebra,
    full_matrix_algebra,
    hsa_from_z,
    idempotent_ideal,
    lump_check,
    span_contains,
    spans_equal,
    supp_order,
    support_idem,
    ws_suite,
)
from realpos.cones import full_context
from realpos.errors import InputError, NumericError
from realpos.linalg import operator_norm, random_accretive, random_unitary


def test_standard_algebras():
    f = full_matrix_algebra(3)
    assert f.dim == 9 and f.n == 3
    d = diagonal_algebra(3)
    assert d.dim == 3
    b = block_diag_algebra([2, 1])
    assert b.dim == 5
    assert b.unit is not None


def test_subalgebra_rejects_non_closed_span():
    # span{E_12} in M_2 is closed (E_12^2 = 0) but span{E_11 + E_12, E_22}
    # misses the product (E_11+E_12)E_22 = E_12
    e11 = np.array([[1.0, 0], [0, 0]], dtype=complex)
    e12 = np.array([[0, 1.0], [0, 0]], dtype=complex)
    e22 = np.array([[0, 0], [0, 1.0]], dtype=complex)
    with pytest.raises(InputError):
        SubalgebraBasis([e11 + e12, e22], validate=True)
    SubalgebraBasis([e12], validate=True)  # nilpotent line is fine


def test_subalgebra_rejects_dependent_basis():
    e11 = np.array([[1.0, 0], [0, 0]], dtype=complex)
    with pytest.raises(InputError):
        SubalgebraBasis([e11, 2 * e11], validate=False)


def test_span_helpers():
    f = full_matrix_algebra(2)
    m = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    assert span_contains(f.basis, m)
    d = diagonal_algebra(2)
    assert not span_contains(d.basis, m)
    assert spans_equal(f.basis, [b.copy() for b in f.basis])
    assert not spans_equal(f.basis, d.basis)


def test_coords_and_project():
    d = diagonal_algebra(2)
    m = np.diag([2.0, 3.0]).astype(complex)
    c, res = d.coords(m)
    assert res <= 1e-12
    assert np.allclose(d.project(m), m, atol=1e-12)
    off = np.array([[0, 1.0], [0, 0]], dtype=complex)
    assert operator_norm(d.project(off)) <= 1e-12


def test_ba_generated_dimension_oracle():
    # diag(1, 2, 0): powers span a 2-dimensional algebra
    x = np.diag([1.0, 2.0, 0.0]).astype(complex)
    alg = ba(x)
    assert alg.dim == 2
    assert alg.unit is not None
    assert np.allclose(alg.unit, np.diag([1.0, 1.0, 0.0]), atol=1e-8)


def test_ba_of_zero_rejected():
    with pytest.raises(InputError):
        ba(np.zeros((2, 2), dtype=complex))


def test_ba_nilpotent_has_no_unit():
    x = np.array([[0, 1.0], [0, 0]], dtype=complex)
    alg = ba(x)
    assert alg.dim == 1
    assert alg.unit is None


def test_support_idempotent_block_oracle():
    rng = np.random.default_rng(8)
    u = random_unitary(4, rng)
    a = random_accretive(2, rng) + 0.3 * np.eye(2)
    x = np.zeros((4, 4), dtype=complex)
    x[:2, :2] = a
    x = u @ x @ u.conj().T
    expect = u @ np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex) @ u.conj().T
    res = support_idem(x)
    assert res.method == "RieszProjection"
    assert res.agreement_residual <= 1e-6
    assert operator_norm(res.s - expect) <= 1e-8
    assert operator_norm(res.s @ x - x) <= 1e-9 * (1 + operator_norm(x))
    assert operator_norm(x @ res.s - x) <= 1e-9 * (1 + operator_norm(x))


def test_support_idempotent_invertible_is_unit():
    x = random_accretive(3, 3) + 0.3 * np.eye(3)
    res = support_idem(x)
    assert operator_norm(res.s - np.eye(3)) <= 1e-9


def test_support_idempotent_zero_matrix():
    res = support_idem(np.zeros((2, 2), dtype=complex))
    assert operator_norm(res.s) <= 1e-12


def test_ws_suite_invertible_all_true():
    x = random_accretive(3, 5) + 0.3 * np.eye(3)
    rep = ws_suite(x, full_matrix_algebra(3))
    assert rep.passed
    assert rep.verdicts["i_support_in_algebra"] and rep.verdicts["iv_inner_solution"]
    assert rep.verdicts["v_invertible_in_ba"] and rep.verdicts["vi_zero_isolated"]


def test_ws_suite_kernel_instance():
    rng = np.random.default_rng(17)
    u = random_unitary(3, rng)
    a = random_accretive(2, rng) + 0.3 * np.eye(2)
    x = np.zeros((3, 3), dtype=complex)
    x[:2, :2] = a
    x = u @ x @ u.conj().T
    rep = ws_suite(x, full_matrix_algebra(3))
    assert rep.passed


def test_hsa_from_z_dimension_oracle():
    z = np.diag([0.5, 0.0]).astype(complex)
    res = hsa_from_z(z, full_matrix_algebra(2))
    assert res.report.passed
    assert res.report.details["dim_J"] == 2
    assert res.report.details["dim_D"] == 1
    assert res.report.details["dim_K"] == 2


def test_hsa_rejects_outside_F():
    z = np.diag([4.0, 0.0]).astype(complex)
    with pytest.raises(Exception):
        hsa_from_z(z, full_matrix_algebra(2))


def test_supp_order_ground_truths():
    alg = full_matrix_algebra(3)
    a = np.diag([1.0, 2.0, 0.0]).astype(complex)
    b = np.diag([1.0, 1.0, 1.0]).astype(complex)
    rep = supp_order(a, b, alg)  # s(a) <= s(b) = I
    assert rep.passed and rep.verdicts["support_domination"]
    c = np.diag([0.0, 0.0, 1.0]).astype(complex)
    rep2 = supp_order(a, c, alg)  # disjoint supports
    assert rep2.passed and not rep2.verdicts["support_domination"]


def test_lump_hermitian_projection():
    p = np.diag([1.0, 1.0, 0.0]).astype(complex)
    rep = lump_check(p)
    assert rep.passed
    assert rep.verdicts["in_F"] and rep.verdicts["accretive"]


def test_lump_skew_idempotent():
    p = np.array([[1.0, 1.0], [0.0, 0.0]], dtype=complex)
    rep = lump_check(p)
    assert rep.passed
    assert not rep.verdicts["in_F"] and not rep.verdicts["accretive"]


def test_lump_near_orthogonal_boundary_verdicts_agree():
    # p = [[1, a], [0, 0]] has ||I - p|| - 1 = sqrt(1 + a^2) - 1 and
    # Hermitian-part abscissa exactly minus half of that.  Pick a so the
    # F residual lands between eq_tol and 2*psd_tol, the window where
    # raw per-face thresholds would split the verdicts.
    a = np.sqrt(3e-9)
    p = np.array([[1.0, a], [0.0, 0.0]], dtype=complex)
    rep = lump_check(p)
    f_res = rep.residuals["F_residual"]
    assert 1e-9 < f_res <= 2e-9
    assert abs(rep.residuals["r_residual"] + f_res / 2) < 1e-15
    assert rep.passed
    assert rep.verdicts["in_F"] == rep.verdicts["accretive"]


def test_lump_rejects_non_idempotent():
    with pytest.raises(Exception):
        lump_check(np.diag([2.0, 0.0]).astype(complex))


def test_aarnes_kadison_invertible():
    x = random_accretive(3, 9) + 0.3 * np.eye(3)
    rep = aarnes_kadison_check(x, full_matrix_algebra(3))
    assert rep.passed
    assert all(rep.verdicts.values())


def test_aarnes_kadison_kernel_case_consistent():
    x = np.diag([1.0, 0.0]).astype(complex)
    rep = aarnes_kadison_check(x, full_matrix_algebra(2))
    assert rep.passed
    assert not any(rep.verdicts[k] for k in ("sandwich_full", "one_sided_full", "support_is_unit"))


def test_ba_ftransform_equal():
    x = random_accretive(3, 4) + 0.2 * np.eye(3)
    rep = ba_ftransform_equal(x)
    assert rep.passed


def test_idempotent_ideal():
    q = np.diag([1.0, 1.0, 0.0]).astype(complex)
    rep = idempotent_ideal(q, full_matrix_algebra(3))
    assert rep.passed
