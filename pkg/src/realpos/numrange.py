"""Numerical range of a matrix: boundary sweeps, abscissa, distances,
and the sectorial angle.

The numerical range W(x) = {v*xv : ||v|| = 1} is compact and convex; its
support function in direction e^{i theta} is the top eigenvalue of the
Hermitian part of e^{-i theta} x.  Every routine here reduces to small
Hermitian eigenproblems on rotated copies of x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .linalg import Tolerances, as_matrix, herm_part, operator_norm, resolve_tol

__all__ = [
    "RangeBoundary",
    "SectorVerdict",
    "NearlyPositiveReport",
    "boundary",
    "abscissa",
    "support_function",
    "dist_to_point",
    "sectorial_angle",
    "is_nearly_positive",
]


@dataclass(frozen=True)
class RangeBoundary:
    """Supporting half-plane sweep of the numerical range.

    angles          -- strictly increasing grid in [0, 2*pi)
    support_values  -- h(theta) = max eig of Re(e^{-i theta} x)
    boundary_points -- v* x v at the corresponding top eigenvectors
    """

    angles: np.ndarray
    support_values: np.ndarray
    boundary_points: np.ndarray


@dataclass(frozen=True)
class SectorVerdict:
    """Smallest symmetric sector containing the numerical range.

    angle is the half-angle in [0, pi], or None when no sector centred on
    the positive real axis contains W(x) (0 is interior, so every ray
    direction appears).  witness is a numerical-range point attaining the
    extreme argument (None in the sentinel case or for x ~ 0).
    """

    angle: float | None
    witness: complex | None


@dataclass(frozen=True)
class NearlyPositiveReport:
    """Outcome of the eps-nearly-positive test."""

    verdict: bool
    eps: float
    norm: float
    angle: float | None
    herm_distance: float
    herm_distance_ok: bool


def _support_at(x: np.ndarray, theta: float):
    """Support value and attaining range point in direction e^{i theta}."""
    h = herm_part(np.exp(-1j * theta) * x)
    w, v = np.linalg.eigh(h)
    vec = v[:, -1]
    return float(w[-1]), complex(vec.conj() @ (x @ vec))


def _min_herm_eig(x: np.ndarray, psi: float) -> float:
    """g(psi) = smallest eigenvalue of the Hermitian part of e^{-i psi} x."""
    h = herm_part(np.exp(-1j * psi) * x)
    return float(np.linalg.eigvalsh(h)[0])


def support_function(x, theta: float) -> float:
    """h(theta) = sup {Re(e^{-i theta} z) : z in W(x)}."""
    return _support_at(as_matrix(x), float(theta))[0]


def boundary(x, m: int = 256) -> RangeBoundary:
    """Sweep m supporting half-planes of W(x) at equispaced angles.

    The returned points v*xv lie on (or within rounding of) the boundary
    of the numerical range; the half-planes
    Re(e^{-i theta_j} z) <= h(theta_j) jointly enclose W(x).
    """
    a = as_matrix(x)
    m = int(m)
    if m < 8:
        raise InputError(f"boundary needs at least 8 angles, got {m}")
    angles = 2.0 * np.pi * np.arange(m) / m
    values = np.empty(m)
    points = np.empty(m, dtype=complex)
    for j, th in enumerate(angles):
        values[j], points[j] = _support_at(a, th)
    return RangeBoundary(angles=angles, support_values=values, boundary_points=points)


def abscissa(x) -> float:
    """Leftmost point of W(x): the smallest Hermitian-part eigenvalue."""
    return float(np.linalg.eigvalsh(herm_part(as_matrix(x)))[0])


def dist_to_point(x, z, m: int = 256) -> float:
    """Distance from the complex point z to the numerical range W(x).

    dist(z, W) = max(0, sup_theta [Re(e^{-i theta} z) - h(theta)]) by
    convex duality.  A coarse sweep localises the maximiser and a golden
    section refinement sharpens it; accuracy is far better than
    1e-6 * (||x|| + |z| + 1).
    """
    a = as_matrix(x)
    z = complex(z)
    m = max(int(m), 32)

    def gap(theta: float) -> float:
        return (z * np.exp(-1j * theta)).real - _support_at(a, theta)[0]

    grid = 2.0 * np.pi * np.arange(m) / m
    vals = np.array([gap(t) for t in grid])
    j = int(np.argmax(vals))
    lo = grid[j] - 2.0 * np.pi / m
    hi = grid[j] + 2.0 * np.pi / m
    # golden-section ascent on the bracketing interval
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = gap(c), gap(d)
    for _ in range(80):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = gap(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = gap(d)
        if hi - lo < 1e-13:
            break
    best = max(float(vals[j]), fc, fd)
    return max(0.0, best)


def _normalize_angle(a: float) -> float:
    """Map to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0:
        a += 2.0 * math.pi
    return a - math.pi


def sectorial_angle(x, tol: Tolerances | None = None, m: int = 256) -> SectorVerdict:
    """Smallest half-angle theta with W(x) inside {|arg z| <= theta}.

    Method: the set D = {psi : min eig Re(e^{-i psi} x) >= 0} of
    supporting directions whose half-plane constraint passes through 0 is
    a closed arc (convexity of W).  Its endpoints psi-, psi+ are located
    by bisection, and the extreme argument rays of the enclosing cone are
    rho_inf = psi+ - pi/2 and rho_sup = psi- + pi/2.  The verdict angle
    is max(|rho_inf|, |rho_sup|) after branch normalisation; if D is
    empty, 0 is interior to W(x) and no sector works (angle None).
    """
    a = as_matrix(x)
    t = resolve_tol(tol)
    nrm = operator_norm(a)
    if nrm <= t.eq_tol:
        return SectorVerdict(angle=0.0, witness=0j)

    m = max(int(m), 64)
    grid = np.linspace(-np.pi, np.pi, m, endpoint=False)
    g = np.array([_min_herm_eig(a, p) for p in grid])
    j0 = int(np.argmax(g))
    if g[j0] < 0.0:
        # even the best direction cuts into W: 0 is interior
        return SectorVerdict(angle=None, witness=None)
    psi0 = float(grid[j0])

    def locate_crossing(sign: float) -> float:
        """First zero of u -> g(psi0 + sign*u) on (0, pi]."""
        lo, glo = 0.0, g[j0]
        hi = None
        steps = 128
        for i in range(1, steps + 1):
            u = np.pi * i / steps
            gu = _min_herm_eig(a, psi0 + sign * u)
            if gu < 0.0:
                hi = u
                break
            lo, glo = u, gu
        if hi is None:
            return np.pi  # degenerate arc of full half-length (ray-like range)
        for _ in range(60):
            mid = (lo + hi) / 2.0
            if _min_herm_eig(a, psi0 + sign * mid) >= 0.0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2.0

    u_plus = locate_crossing(+1.0)
    u_minus = locate_crossing(-1.0)
    psi_plus = psi0 + u_plus
    psi_minus = psi0 - u_minus

    rho_inf = psi_plus - np.pi / 2.0
    rho_sup = psi_minus + np.pi / 2.0
    # shift the argument interval so its midpoint lies in (-pi, pi]
    mid = (rho_inf + rho_sup) / 2.0
    shift = _normalize_angle(mid) - mid
    lo_arg = rho_inf + shift
    hi_arg = rho_sup + shift
    if lo_arg < -np.pi - 1e-12 or hi_arg > np.pi + 1e-12:
        angle = float(np.pi)
    else:
        angle = float(min(np.pi, max(abs(lo_arg), abs(hi_arg))))

    # witness: boundary point attaining the extreme argument ray
    _, w_plus = _support_at(a, psi_plus + np.pi)
    _, w_minus = _support_at(a, psi_minus + np.pi)
    cand = [(abs(lo_arg), lo_arg, w_plus), (abs(hi_arg), hi_arg, w_minus)]
    if abs(cand[0][0] - cand[1][0]) <= 1e-12:
        # tie between the two extreme rays: report the smaller-angle one
        witness = min(cand, key=lambda item: item[1])[2]
    else:
        witness = max(cand, key=lambda item: item[0])[2]
    return SectorVerdict(angle=angle, witness=witness)


def is_nearly_positive(x, eps: float, tol: Tolerances | None = None) -> NearlyPositiveReport:
    """Test ||x|| <= 1 together with sectorial angle < arcsin(eps).

    When the verdict holds, the distance to the Hermitian part obeys
    ||x - Re x|| <= eps (up to eq_tol); the report records that check.
    """
    a = as_matrix(x)
    t = resolve_tol(tol)
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise InputError(f"eps must lie in (0, 1), got {eps!r}")
    nrm = operator_norm(a)
    sect = sectorial_angle(a, tol=t)
    verdict = (
        nrm <= 1.0 + t.eq_tol
        and sect.angle is not None
        and sect.angle < math.asin(eps)
    )
    hdist = operator_norm(a - herm_part(a))
    hdist_ok = (not verdict) or (hdist <= eps + t.eq_tol)
    return NearlyPositiveReport(
        verdict=bool(verdict),
        eps=eps,
        norm=nrm,
        angle=sect.angle,
        herm_distance=hdist,
        herm_distance_ok=bool(hdist_ok),
    )
