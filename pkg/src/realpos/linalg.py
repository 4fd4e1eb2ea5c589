"""Dense complex linear-algebra kernel shared by every other module.

Everything is deterministic: decompositions come straight from LAPACK
through numpy/scipy, and all randomness flows through explicit integer
seeds (PCG64 generators, never global state).  Matrices are plain
``numpy.ndarray`` values of dtype complex128; ``as_matrix`` is the single
entry point that validates shape and finiteness.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InputError, NumericError

__all__ = [
    "Tolerances",
    "default_tolerances",
    "SpectrumResult",
    "as_matrix",
    "operator_norm",
    "herm_part",
    "matrix_exp",
    "spectrum",
    "solve",
    "rng_for",
    "random_matrix",
    "random_unitary",
    "random_hermitian",
    "random_accretive",
    "random_contraction",
    "random_idempotent",
]

#: overflow guard for the matrix exponential; exp of anything whose
#: Hermitian part reaches this spills out of double range.
_EXP_OVERFLOW = 700.0

_TOL_ENV = "REALPOS_DEFAULT_TOL"


@dataclass(frozen=True)
class Tolerances:
    """Shared tolerance bundle.

    eq_tol   -- equality / residual comparisons
    psd_tol  -- eigenvalue nonnegativity slack
    conv_tol -- iteration and series convergence targets
    """

    eq_tol: float = 1e-9
    psd_tol: float = 1e-9
    conv_tol: float = 1e-10

    def __post_init__(self):
        for name in ("eq_tol", "psd_tol", "conv_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and np.isfinite(v) and v > 0):
                raise InputError(f"tolerance {name} must be a finite positive real, got {v!r}")

    def as_dict(self):
        return {"eq_tol": self.eq_tol, "psd_tol": self.psd_tol, "conv_tol": self.conv_tol}


def default_tolerances() -> Tolerances:
    """Default tolerances; the REALPOS_DEFAULT_TOL environment variable,
    when set, overrides eq_tol globally."""
    raw = os.environ.get(_TOL_ENV)
    if raw is None:
        return Tolerances()
    try:
        eq = float(raw)
    except ValueError as exc:
        raise InputError(f"{_TOL_ENV} must be a float, got {raw!r}") from exc
    return Tolerances(eq_tol=eq)


def resolve_tol(tol: Tolerances | None) -> Tolerances:
    return default_tolerances() if tol is None else tol


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues plus the (complex Schur) similarity data needed to
    evaluate holomorphic functions of the matrix."""

    eigenvalues: np.ndarray
    schur_t: np.ndarray
    schur_z: np.ndarray


def as_matrix(x, name: str = "x") -> np.ndarray:
    """Validate and return ``x`` as a square finite complex matrix."""
    try:
        a = np.asarray(x, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} is not convertible to a complex matrix: {exc}") from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InputError(f"{name} must be a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InputError(f"{name} contains non-finite entries")
    return a


def operator_norm(x) -> float:
    """Largest singular value (the operator norm on column vectors)."""
    a = as_matrix(x)
    return float(np.linalg.norm(a, 2))


def herm_part(x) -> np.ndarray:
    """Hermitian (real) part (x + x*)/2."""
    a = as_matrix(x)
    return (a + a.conj().T) / 2.0


def matrix_exp(x) -> np.ndarray:
    """Matrix exponential via scipy's scaling-and-squaring Pade evaluation."""
    a = as_matrix(x)
    # cheap overflow guard: the largest Hermitian-part eigenvalue bounds
    # log||exp(a)|| from below
    growth = float(np.max(np.linalg.eigvalsh(herm_part(a))))
    if growth > _EXP_OVERFLOW:
        raise NumericError(
            f"matrix_exp overflow: Hermitian-part abscissa {growth:.3g} exceeds {_EXP_OVERFLOW}"
        )
    e = sla.expm(a)
    if not np.all(np.isfinite(e)):
        raise NumericError(f"matrix_exp overflow for input of norm {operator_norm(a):.3g}")
    return e


def spectrum(x) -> SpectrumResult:
    """Eigenvalues (with multiplicity) and the complex Schur form."""
    a = as_matrix(x)
    t, z = sla.schur(a, output="complex")
    return SpectrumResult(eigenvalues=np.diag(t).copy(), schur_t=t, schur_z=z)


def solve(a, b):
    """Linear solve with library error translated to NumericError."""
    try:
        return np.linalg.solve(as_matrix(a), np.asarray(b, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"singular linear system: {exc}") from exc


# ---------------------------------------------------------------------------
# seeded generators
# ---------------------------------------------------------------------------

def rng_for(seed) -> np.random.Generator:
    """The one way randomness enters: a fresh PCG64 generator per seed."""
    return np.random.default_rng(seed)


def random_matrix(n: int, seed, scale: float = 1.0) -> np.ndarray:
    """Complex Ginibre matrix, entries N(0,1/2n) + i N(0,1/2n), times scale."""
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * g / np.sqrt(2.0 * n)


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary (QR of Ginibre with phase correction)."""
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(n: int, seed, psd: bool = False) -> np.ndarray:
    """Random Hermitian matrix of unit operator norm; PSD when requested."""
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
    g = random_matrix(n, rng)
    if psd:
        h = g @ g.conj().T
    else:
        h = (g + g.conj().T) / 2.0
    nrm = operator_norm(h)
    return h / nrm if nrm > 0 else h


def random_accretive(n: int, seed, angle_cap: float = np.pi / 2) -> np.ndarray:
    """Seeded accretive matrix H + iK with sectorial angle <= angle_cap.

    H is Hermitian PSD of unit norm.  For angle_cap < pi/2 the skew part
    is dominated pointwise, K = tan(angle_cap) * H^(1/2) Kt H^(1/2) with
    ||Kt|| <= 1, so |Im v*xv| <= tan(angle_cap) * Re v*xv for every
    vector v and the numerical range sits inside the closed sector of
    half-angle angle_cap exactly.
    """
    if not (0 < angle_cap <= np.pi / 2 + 1e-15):
        raise InputError(f"angle_cap must lie in (0, pi/2], got {angle_cap!r}")
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
    h = random_hermitian(n, rng, psd=True)
    kt = random_hermitian(n, rng)
    if angle_cap >= np.pi / 2 - 1e-12:
        return h + 1j * kt
    w, v = np.linalg.eigh(h)
    hs = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    k = np.tan(angle_cap) * (hs @ kt @ hs)
    return h + 1j * (k + k.conj().T) / 2.0


def random_contraction(n: int, seed, norm: float | None = None) -> np.ndarray:
    """Random matrix rescaled to a chosen operator norm < 1 (drawn when None)."""
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
    target = rng.uniform(0.0, 0.99) if norm is None else float(norm)
    if not 0 <= target < 1:
        raise InputError(f"contraction norm must lie in [0, 1), got {target!r}")
    g = random_matrix(n, rng)
    nrm = operator_norm(g)
    return g * (target / nrm) if nrm > 0 else g


def random_idempotent(n: int, seed, rank: int | None = None,
                      cond_cap: float = 1e3) -> np.ndarray:
    """Random similarity S P S^{-1} of a Hermitian projection P.

    The similarity is built as Q1 diag(s) Q2* with log-uniform singular
    values, so cond(S) <= cond_cap by construction.
    """
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(seed)
    r = int(rng.integers(0, n + 1)) if rank is None else int(rank)
    if not 0 <= r <= n:
        raise InputError(f"rank must lie in [0, {n}], got {r}")
    p = np.zeros((n, n), dtype=complex)
    p[:r, :r] = np.eye(r)
    q1 = random_unitary(n, rng)
    q2 = random_unitary(n, rng)
    half = np.sqrt(cond_cap)
    s = np.exp(rng.uniform(-np.log(half), np.log(half), size=n))
    sim = (q1 * s) @ q2.conj().T
    return sim @ p @ np.linalg.inv(sim)
