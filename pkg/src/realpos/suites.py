"""Seeded verification suites behind the command-line `verify` command.

Every suite draws its instances from a deterministic per-instance seed
stream (seed, suite-index, instance-index), so reports are byte-stable
for a fixed seed and instance counts do not interact across suites.
Suites return lists of VerificationReport; a suite passes when every
report in it passes.  Wall-clock timing never enters the reports.
"""
from __future__ import annotations

import numpy as np

from . import algebra as alg_mod
from . import calculus as calc_mod
from . import cones as cones_mod
from . import maps as maps_mod
from .errors import InputError, NumericError, RealposError
from .linalg import (
    Tolerances,
    operator_norm,
    random_accretive,
    random_contraction,
    random_idempotent,
    random_matrix,
    random_unitary,
    resolve_tol,
)
from .numrange import sectorial_angle
from .report import VerificationReport, matrix_digest

__all__ = ["SUITE_ORDER", "run_suite", "run_suites"]

SUITE_ORDER = ("chaccr", "bal", "sectt", "lump", "supp3", "ws",
               "decompose", "hsa", "aarnes", "proj", "rcp")
_SUITE_INDEX = {name: i for i, name in enumerate(SUITE_ORDER)}


def _rng(seed: int, suite: str, i: int) -> np.random.Generator:
    return np.random.default_rng((int(seed), _SUITE_INDEX[suite], int(i)))


def _tag(rep: VerificationReport, suite: str, i: int, seed: int, *mats) -> VerificationReport:
    rep.check = suite
    rep.instance = f"{suite}[{i}]:{matrix_digest(*mats)}"
    rep.seed = [int(seed), _SUITE_INDEX[suite], int(i)]
    return rep


def suite_chaccr(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Five-way accretivity characterisation coherence, on constructed
    accretive matrices and on unconstrained (possibly non-accretive) ones."""
    ctx = cones_mod.full_context(n)
    out = []
    for i in range(count):
        rng = _rng(seed, "chaccr", i)
        if i % 2 == 0:
            x = random_accretive(n, rng)
        else:
            x = random_matrix(n, rng)
            if i % 4 == 1:
                x = x - 0.5 * np.eye(n)
        rep = cones_mod.chaccr_verify(x, ctx, tol=tol)
        out.append(_tag(rep, "chaccr", i, seed, x))
    return out


def suite_bal(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Quadrature power against the spectral power on accretive inputs."""
    ctx = cones_mod.full_context(n)
    exponents = (0.3, 0.7)
    out = []
    for i in range(count):
        rng = _rng(seed, "bal", i)
        x = random_accretive(n, rng)
        nrm = operator_norm(x)
        residuals = {}
        verdicts = {}
        details = {}
        passed = True
        for r in exponents:
            key = f"r={r:g}"
            try:
                yb = calc_mod.power_balakrishnan(x, r, ctx, tol=tol)
                ys = calc_mod.power_shifted(x, r, ctx, tol=tol)
                dev = operator_norm(yb - ys)
                residuals[key] = float(dev)
                ok = dev <= 1e-6 * (1.0 + nrm)
                verdicts[key] = bool(ok)
                passed = passed and ok
            except NumericError as exc:
                verdicts[key] = False
                details[key] = str(exc)
                passed = False
        rep = VerificationReport(check="bal", passed=passed, verdicts=verdicts,
                                 residuals=residuals, tolerances=tol.as_dict(),
                                 details=details)
        out.append(_tag(rep, "bal", i, seed, x))
    return out


def suite_sectt(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Sector transformation: angle(x^t) against the sharp and generic
    bounds, and root angles against pi/(2n)."""
    ctx = cones_mod.full_context(n)
    caps = (0.3, 0.6, 0.9, 1.2, np.pi / 2 - 0.1)
    t_grid = (0.25, 0.5, 0.75)
    out = []
    for i in range(count):
        rng = _rng(seed, "sectt", i)
        x = random_accretive(n, rng, angle_cap=caps[i % len(caps)])
        ang = sectorial_angle(x, tol).angle
        verdicts = {}
        residuals = {}
        passed = True
        if ang is None:
            rep = VerificationReport(check="sectt", passed=False,
                                     verdicts={"angle_defined": False},
                                     tolerances=tol.as_dict())
            out.append(_tag(rep, "sectt", i, seed, x))
            continue
        for t_exp in t_grid:
            y = calc_mod.power_shifted(x, t_exp, ctx, tol=tol)
            ay = sectorial_angle(y, tol).angle
            ay = 0.0 if ay is None else ay
            sharp = ay <= t_exp * ang + 1e-6
            generic = ay <= t_exp * ang + (1.0 - t_exp) * np.pi / 2 + 1e-6
            verdicts[f"sharp_t={t_exp:g}"] = bool(sharp)
            verdicts[f"generic_t={t_exp:g}"] = bool(generic)
            residuals[f"angle_t={t_exp:g}"] = float(ay)
            passed = passed and sharp and generic
        for nn in (2, 4):
            y = calc_mod.power_shifted(x, 1.0 / nn, ctx, tol=tol)
            ay = sectorial_angle(y, tol).angle
            ay = 0.0 if ay is None else ay
            ok = ay <= np.pi / (2 * nn) + 1e-6
            verdicts[f"root_n={nn}"] = bool(ok)
            residuals[f"root_angle_n={nn}"] = float(ay)
            passed = passed and ok
        residuals["angle"] = float(ang)
        rep = VerificationReport(check="sectt", passed=passed, verdicts=verdicts,
                                 residuals=residuals, tolerances=tol.as_dict())
        out.append(_tag(rep, "sectt", i, seed, x))
    return out


def suite_lump(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Cone-membership lumping for idempotents."""
    ctx = cones_mod.full_context(n)
    out = []
    for i in range(count):
        rng = _rng(seed, "lump", i)
        rank = 1 + int(rng.integers(0, n))
        p = random_idempotent(n, rng, rank=rank)
        rep = alg_mod.lump_check(p, ctx, tol)
        out.append(_tag(rep, "lump", i, seed, p))
    return out


def _conjugated_block(rng, n: int, sizes_filled: list) -> np.ndarray:
    """u (a_1 (+) ... (+) 0) u* with invertible accretive blocks."""
    u = random_unitary(n, rng)
    d = np.zeros((n, n), dtype=complex)
    pos = 0
    for size, fill in sizes_filled:
        if fill and size > 0:
            a = random_accretive(size, rng) + 0.25 * np.eye(size)
            d[pos:pos + size, pos:pos + size] = a
        pos += size
    return u @ d @ u.conj().T


def suite_supp3(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Support-idempotent order pairs with known ground truth: nested
    supports (expected comparable) and orthogonal supports (expected not)."""
    if n < 2:
        raise InputError("supp3 needs n >= 2")
    algebra = alg_mod.full_matrix_algebra(n)
    out = []
    for i in range(count):
        rng = _rng(seed, "supp3", i)
        k1 = 1 + int(rng.integers(0, n - 1))
        u = random_unitary(n, rng)
        a = random_accretive(k1, rng) + 0.25 * np.eye(k1)
        dx = np.zeros((n, n), dtype=complex)
        dx[:k1, :k1] = a
        x = u @ dx @ u.conj().T
        if i % 2 == 0:
            k2 = k1 + int(rng.integers(0, n - k1)) if k1 < n else n
            k2 = max(k2, k1)
            b = random_accretive(k2, rng) + 0.25 * np.eye(k2)
            dy = np.zeros((n, n), dtype=complex)
            dy[:k2, :k2] = b
            expected = True
        else:
            k2 = max(1, min(n - k1, 1 + int(rng.integers(0, max(n - k1, 1)))))
            b = random_accretive(k2, rng) + 0.25 * np.eye(k2)
            dy = np.zeros((n, n), dtype=complex)
            dy[k1:k1 + k2, k1:k1 + k2] = b
            expected = False
        y = u @ dy @ u.conj().T
        rep = alg_mod.supp_order(x, y, algebra, tol)
        claimed = bool(rep.verdicts.get("support_domination", False))
        rep.verdicts["matches_expected"] = claimed == expected
        rep.details["expected_leq"] = bool(expected)
        rep.passed = bool(rep.passed and rep.verdicts["matches_expected"])
        out.append(_tag(rep, "supp3", i, seed, x, y))
    return out


def suite_ws(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Support-structure equivalences on invertible, kernel, and
    block-embedded accretive instances."""
    out = []
    for i in range(count):
        rng = _rng(seed, "ws", i)
        family = i % 3
        if family == 0:
            x = random_accretive(n, rng) + 0.25 * np.eye(n)
            algebra = alg_mod.full_matrix_algebra(n)
        elif family == 1:
            k = 1 + int(rng.integers(0, n - 1)) if n > 1 else 1
            x = _conjugated_block(rng, n, [(k, True), (n - k, False)])
            algebra = alg_mod.full_matrix_algebra(n)
        else:
            n1 = max(1, n - 1)
            n2 = n - n1 if n - n1 >= 1 else 1
            algebra = alg_mod.block_diag_algebra([n1, n2])
            a = random_accretive(n1, rng) + 0.25 * np.eye(n1)
            x = np.zeros((n1 + n2, n1 + n2), dtype=complex)
            x[:n1, :n1] = a
        rep = alg_mod.ws_suite(x, algebra, tol)
        out.append(_tag(rep, "ws", i, seed, x))
    return out


def suite_decompose(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Splitting of norm-bounded elements into differences of halved
    F-elements, with exact reconstruction."""
    ctx = cones_mod.full_context(n)
    out = []
    for i in range(count):
        rng = _rng(seed, "decompose", i)
        b = random_contraction(n, rng, norm=float(rng.uniform(0.1, 0.99)))
        p, q = cones_mod.decompose_halfF(b, ctx, tol)
        rec = operator_norm((p - q) - b)
        sum_res = operator_norm((p + q) - np.eye(n))
        mp = cones_mod.in_F(2.0 * p, ctx, tol)
        mq = cones_mod.in_F(2.0 * q, ctx, tol)
        verdicts = {
            "half_F_plus": bool(mp.in_F),
            "half_F_minus": bool(mq.in_F),
            "reconstruction": bool(rec <= 1e-12 * (1.0 + operator_norm(b))),
            "complementary": bool(sum_res <= 1e-12),
        }
        rep = VerificationReport(
            check="decompose", passed=all(verdicts.values()), verdicts=verdicts,
            residuals={"reconstruction": float(rec), "complementary": float(sum_res),
                       "F_plus": float(mp.F_residual), "F_minus": float(mq.F_residual)},
            tolerances=tol.as_dict(),
        )
        out.append(_tag(rep, "decompose", i, seed, b))
    return out


def suite_hsa(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Hereditary-piece structure generated by single accretive elements."""
    algebra = alg_mod.full_matrix_algebra(n)
    out = []
    for i in range(count):
        rng = _rng(seed, "hsa", i)
        if i % 2 == 0:
            z = np.eye(n) - random_contraction(n, rng, norm=0.8)
        else:
            k = 1 + int(rng.integers(0, n - 1)) if n > 1 else 1
            zk = np.eye(k) - random_contraction(k, rng, norm=0.8)
            u = random_unitary(n, rng)
            zb = np.zeros((n, n), dtype=complex)
            zb[:k, :k] = zk
            z = u @ zb @ u.conj().T
        res = alg_mod.hsa_from_z(z, algebra, tol)
        out.append(_tag(res.report, "hsa", i, seed, z))
    return out


def suite_aarnes(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Sandwich / one-sided / unit-support equivalences."""
    algebra = alg_mod.full_matrix_algebra(n)
    out = []
    for i in range(count):
        rng = _rng(seed, "aarnes", i)
        if i % 2 == 0:
            x = random_accretive(n, rng) + 0.25 * np.eye(n)
        else:
            k = 1 + int(rng.integers(0, n - 1)) if n > 1 else 1
            x = _conjugated_block(rng, n, [(k, True), (n - k, False)])
        rep = alg_mod.aarnes_kadison_check(x, algebra, tol)
        out.append(_tag(rep, "aarnes", i, seed, x))
    return out


def _theta_q_fixture(rng, n: int):
    """Block algebra M_a (+) M_b, central idempotent q = 1 (+) 0, and the
    period-2 inner symmetry Ad(u (+) 1) fixing q."""
    a = max(1, n - 1) if n >= 2 else 1
    b = max(1, n - a)
    algebra = alg_mod.block_diag_algebra([a, b])
    nn = a + b
    if a == 1:
        u2 = np.array([[1.0 + 0j]])
    else:
        h = rng.standard_normal((a, a)) + 1j * rng.standard_normal((a, a))
        w, v = np.linalg.eigh(h + h.conj().T)
        signs = np.where(np.arange(a) % 2 == 0, 1.0, -1.0)
        u2 = (v * signs) @ v.conj().T
    u = np.eye(nn, dtype=complex)
    u[:a, :a] = u2
    q = np.zeros((nn, nn), dtype=complex)
    q[:a, :a] = np.eye(a)
    theta = maps_mod.map_from_function(lambda m: u @ m @ u.conj().T, algebra)
    return theta, q, algebra


def suite_proj(seed: int, count: int, n: int, tol: Tolerances) -> list:
    """Symmetric-projection construction certificates plus the
    scalar-averaging classification."""
    out = []
    for i in range(count):
        rng = _rng(seed, "proj", i)
        if i == 0:
            alg2 = alg_mod.full_matrix_algebra(2)
            p_map = maps_mod.map_from_function(
                lambda m: np.trace(m) / 2.0 * np.eye(2, dtype=complex), alg2)
            cls = maps_mod.classify_projection(p_map, seed=int(seed), tol=tol)
            verdicts = {
                "symmetric": bool(cls.symmetric),
                "conditional_expectation": bool(cls.cond_exp_residual <= 1e-10),
                "rcp": bool(cls.rcp.passed),
                "contractive": bool(cls.contractive),
            }
            rep = VerificationReport(
                check="proj", passed=all(verdicts.values()), verdicts=verdicts,
                residuals={"cond_exp": float(cls.cond_exp_residual),
                           "idempotent": float(cls.idempotent_residual),
                           **{f"symmetry_level_{k}": float(v)
                              for k, v in cls.symmetric_levels.items()}},
                tolerances=tol.as_dict(),
                details={"fixture": "scalar_averaging_M2"},
            )
            out.append(_tag(rep, "proj", i, seed, p_map.action))
            continue
        theta, q, algebra = _theta_q_fixture(rng, n)
        p_map, cert = maps_mod.build_symmetric_projection(
            theta, q, algebra, tol=tol, seed=int(seed))
        verdicts = {
            "idempotent": bool(cert.idempotent_residual <= 1e-9),
            "symmetry_levels": bool(all(v <= 1.0 + 1e-6
                                        for v in cert.symmetry_norms.values())),
            "rcp": bool(cert.rcp.passed),
            "range_fixed_points": bool(cert.range_is_fixed_points),
            "complement_vanishing": bool(cert.complement_vanishing <= 1e-7),
        }
        rep = VerificationReport(
            check="proj", passed=bool(cert.passed and all(verdicts.values())),
            verdicts=verdicts,
            residuals={"idempotent": float(cert.idempotent_residual),
                       "complement": float(cert.complement_vanishing),
                       **{f"symmetry_level_{k}": float(v)
                          for k, v in cert.symmetry_norms.items()}},
            tolerances=tol.as_dict(),
            details={"fixture": "theta_q_block"},
        )
        out.append(_tag(rep, "proj", i, seed, p_map.action))
    return out


def suite_rcp(seed: int, count: int, n: int, tol: Tolerances,
              fixture: str | None = None) -> list:
    """Real-complete-positivity verdicts against known ground truth:
    CP maps must pass (with the Choi certificate), the 2x2 transpose
    must fail with a certified witness at level 2."""
    out = []
    if fixture is not None and fixture != "transpose2":
        raise InputError(f"unknown rcp fixture {fixture!r} (supported: transpose2)")

    def transpose_report(i):
        t_map = maps_mod.transpose_map(2)
        v = maps_mod.rcp_test(t_map, levels=(1, 2, 3), seed=int(seed), tol=tol)
        wit_ok = (v.witness is not None and not v.passed and v.certified
                  and v.witness["out_abscissa"] <= -1e-4
                  and v.witness["in_abscissa"] >= -1e-10)
        rep = VerificationReport(
            check="rcp", passed=bool(wit_ok),
            verdicts={"witness_found": bool(v.witness is not None),
                      "expected_failure": bool(not v.passed),
                      "certified": bool(v.certified)},
            residuals={} if v.witness is None else {
                "witness_out_abscissa": float(v.witness["out_abscissa"]),
                "witness_in_abscissa": float(v.witness["in_abscissa"])},
            tolerances=tol.as_dict(),
            details={"fixture": "transpose2",
                     "witness_level": None if v.witness is None
                     else int(v.witness["level"])},
        )
        return _tag(rep, "rcp", i, seed, t_map.action)

    if fixture == "transpose2":
        return [transpose_report(0)]

    for i in range(count):
        rng = _rng(seed, "rcp", i)
        if i == 0:
            t_map = maps_mod.identity_map(alg_mod.full_matrix_algebra(n))
            name = "identity"
        elif i == count - 1 and count >= 2:
            out.append(transpose_report(i))
            continue
        else:
            n_ops = 1 + int(rng.integers(0, 3))
            ops = [(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
                   / np.sqrt(2.0 * n) for _ in range(n_ops)]
            t_map = maps_mod.map_from_kraus(ops, n)
            name = f"kraus_{n_ops}"
        v = maps_mod.rcp_test(t_map, levels=(1, 2, 3), seed=int(seed), tol=tol)
        ok = v.passed and v.certified and not v.sampled_violations
        rep = VerificationReport(
            check="rcp", passed=bool(ok),
            verdicts={"rcp_passed": bool(v.passed), "certified": bool(v.certified),
                      "no_sampled_violations": bool(not v.sampled_violations)},
            residuals={},
            tolerances=tol.as_dict(),
            details={"fixture": name, "certificate": v.certificate or ""},
        )
        out.append(_tag(rep, "rcp", i, seed, t_map.action))
    return out


_SUITES = {
    "chaccr": suite_chaccr,
    "bal": suite_bal,
    "sectt": suite_sectt,
    "lump": suite_lump,
    "supp3": suite_supp3,
    "ws": suite_ws,
    "decompose": suite_decompose,
    "hsa": suite_hsa,
    "aarnes": suite_aarnes,
    "proj": suite_proj,
    "rcp": suite_rcp,
}


def run_suite(name: str, seed: int, count: int, n: int,
              tol: Tolerances | None = None, fixture: str | None = None) -> list:
    t = resolve_tol(tol)
    if name not in _SUITES:
        raise InputError(f"unknown suite {name!r}; expected one of "
                         f"{', '.join(SUITE_ORDER)} or all")
    if count < 1:
        raise InputError(f"count must be >= 1, got {count}")
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}")
    if name == "rcp":
        return _SUITES[name](seed, count, n, t, fixture=fixture)
    if fixture is not None:
        raise InputError("--fixture is only meaningful for the rcp suite")
    return _SUITES[name](seed, count, n, t)


def run_suites(names, seed: int, count: int, n: int,
               tol: Tolerances | None = None, fixture: str | None = None):
    """Run the named suites in canonical order; returns (reports, all_passed)."""
    ordered = []
    for name in SUITE_ORDER:
        if name in names:
            ordered.append(name)
    unknown = [m for m in names if m not in SUITE_ORDER and m != "all"]
    if unknown:
        raise InputError(f"unknown suites: {', '.join(sorted(unknown))}")
    if "all" in names:
        ordered = list(SUITE_ORDER)
    if fixture is not None and ordered != ["rcp"]:
        raise InputError("--fixture is only meaningful for the rcp suite alone")
    reports = []
    for name in ordered:
        reports.extend(run_suite(name, seed, count, n, tol, fixture=fixture))
    return reports, all(r.passed for r in reports)
