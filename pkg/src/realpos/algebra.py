"""Finite-dimensional operator algebras: generated subalgebras, support
idempotents, hereditary subalgebras, and the structural equivalences
that accretive elements satisfy.

Subalgebras are represented by explicit bases inside an ambient matrix
algebra; span questions reduce to numerical rank decisions on stacked
vectorisations, with an explicit ambiguity window that refuses to guess
when singular values sit too close to the cut.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import _split_zero_cluster, _sqrtm_tri, f_transform
from .cones import AmbientContext, full_context, membership
from .errors import InputError, MethodDisagreementError, NumericError, PreconditionError
from .linalg import Tolerances, as_matrix, operator_norm, resolve_tol
from .report import VerificationReport, matrix_digest

__all__ = [
    "SubalgebraBasis",
    "subalgebra",
    "full_matrix_algebra",
    "diagonal_algebra",
    "block_diag_algebra",
    "span_contains",
    "spans_equal",
    "ba",
    "SupportIdempotent",
    "support_idem",
    "ws_suite",
    "HsaResult",
    "hsa_from_z",
    "supp_order",
    "lump_check",
    "aarnes_kadison_check",
    "ba_ftransform_equal",
    "idempotent_ideal",
]

#: relative singular-value cut for rank decisions on stacked spans
_RANK_TOL = 1e-10
#: span-equality / containment threshold used by the structural checks
_SPAN_TOL = 1e-8


def _vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=complex).ravel()


def _stack(mats) -> np.ndarray:
    """Rows are the vectorised matrices, each normalised to unit length
    (zero rows stay zero) so rank cuts are scale-free."""
    rows = []
    for m in mats:
        v = _vec(m)
        nv = np.linalg.norm(v)
        rows.append(v / nv if nv > 0 else v)
    if not rows:
        return np.zeros((0, 1), dtype=complex)
    return np.array(rows)


class SubalgebraBasis:
    """A linearly independent basis of a multiplicatively closed span
    inside an ambient context.

    closure_residual records the worst relative distance of a pairwise
    product from the span; the constructor rejects sets that are not
    actually algebras (unless validate=False for trusted internal
    constructions, which still computes spans but skips the O(d^2)
    product check).
    """

    def __init__(self, basis, ambient: AmbientContext | None = None,
                 unit=None, tol: Tolerances | None = None, validate: bool = True):
        t = resolve_tol(tol)
        mats = [as_matrix(b, f"basis[{i}]") for i, b in enumerate(basis)]
        if not mats:
            raise InputError("a subalgebra basis needs at least one element")
        n = mats[0].shape[0]
        if any(m.shape[0] != n for m in mats):
            raise InputError("basis matrices must share one ambient dimension")
        if ambient is None:
            ambient = full_context(n)
        if ambient.n != n:
            raise InputError(f"basis matrices are {n}x{n} but ambient has n={ambient.n}")
        self.ambient = ambient
        self.basis = mats
        self.unit = None if unit is None else as_matrix(unit, "unit")

        stack = _stack(mats)
        sv = np.linalg.svd(stack, compute_uv=False)
        rel = sv / sv[0] if sv[0] > 0 else sv
        if np.any((rel >= _RANK_TOL) & (rel < 10 * _RANK_TOL)):
            raise NumericError(
                "basis rank decision is ambiguous (singular value within 10x of the "
                "cut); orthogonalise the basis or pass cleaner generators"
            )
        rank = int(np.sum(rel >= 10 * _RANK_TOL))
        if rank != len(mats):
            raise InputError(
                f"basis is not linearly independent: rank {rank} < {len(mats)} elements"
            )
        # orthonormal row basis of the span, and the coordinate solver
        _, _, vh = np.linalg.svd(np.array([_vec(m) for m in mats]), full_matrices=False)
        self._span_q = vh[:rank]
        self._pinv = np.linalg.pinv(np.array([_vec(m) for m in mats]).T)

        self.closure_residual = 0.0
        if validate:
            worst = 0.0
            for bi in mats:
                for bj in mats:
                    prod = bi @ bj
                    worst = max(worst, self._span_distance(prod) / (1.0 + np.linalg.norm(prod)))
            self.closure_residual = float(worst)
            if self.closure_residual > 100 * t.eq_tol:
                raise InputError(
                    f"basis is not multiplicatively closed: relative closure residual "
                    f"{self.closure_residual:.3g}"
                )
            if self.unit is not None:
                if self._span_distance(self.unit) > 100 * t.eq_tol * (1.0 + np.linalg.norm(self.unit)):
                    raise InputError("declared unit does not lie in the span")
                worst_u = max(
                    max(operator_norm(self.unit @ b - b), operator_norm(b @ self.unit - b))
                    for b in mats
                )
                if worst_u > 100 * t.eq_tol * (1.0 + max(operator_norm(b) for b in mats)):
                    raise InputError(f"declared unit fails u b = b = b u (residual {worst_u:.3g})")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.ambient.n

    def _span_distance(self, m) -> float:
        v = _vec(m)
        proj = (v @ self._span_q.conj().T) @ self._span_q
        return float(np.linalg.norm(v - proj))

    def contains(self, m, tol: float = _SPAN_TOL) -> bool:
        v = _vec(as_matrix(m))
        return self._span_distance(m) <= tol * (1.0 + np.linalg.norm(v))

    def coords(self, m):
        """Least-squares coordinates of m in the (original) basis,
        with the representation residual."""
        v = _vec(as_matrix(m))
        c = self._pinv @ v
        cols = np.array([_vec(b) for b in self.basis]).T
        res = float(np.linalg.norm(cols @ c - v))
        return c, res

    def project(self, m) -> np.ndarray:
        v = _vec(as_matrix(m))
        proj = (v @ self._span_q.conj().T) @ self._span_q
        return proj.reshape(self.n, self.n)

    def __repr__(self):
        return f"SubalgebraBasis(dim={self.dim}, n={self.n}, unit={'yes' if self.unit is not None else 'no'})"


def subalgebra(basis, ambient: AmbientContext | None = None, unit=None,
               tol: Tolerances | None = None) -> SubalgebraBasis:
    """Validate a basis (independence, closure, optional unit) and wrap it."""
    return SubalgebraBasis(basis, ambient=ambient, unit=unit, tol=tol, validate=True)


def full_matrix_algebra(n: int) -> SubalgebraBasis:
    """The full n-by-n algebra with its matrix-unit basis."""
    n = int(n)
    basis = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            basis.append(e)
    return SubalgebraBasis(basis, ambient=full_context(n), unit=np.eye(n, dtype=complex),
                           validate=False)


def diagonal_algebra(n: int) -> SubalgebraBasis:
    """The diagonal (commutative) subalgebra of M_n."""
    n = int(n)
    basis = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    return SubalgebraBasis(basis, ambient=full_context(n), unit=np.eye(n, dtype=complex),
                           validate=False)


def block_diag_algebra(sizes) -> SubalgebraBasis:
    """M_{k_1} + ... + M_{k_m} embedded block-diagonally in M_n."""
    sizes = [int(s) for s in sizes]
    if any(s < 1 for s in sizes):
        raise InputError("block sizes must be positive")
    n = sum(sizes)
    basis = []
    off = 0
    for s in sizes:
        for i in range(s):
            for j in range(s):
                e = np.zeros((n, n), dtype=complex)
                e[off + i, off + j] = 1.0
                basis.append(e)
        off += s
    return SubalgebraBasis(basis, ambient=full_context(n), unit=np.eye(n, dtype=complex),
                           validate=False)


def span_contains(mats, m, tol: float = _SPAN_TOL) -> bool:
    """Does m lie in the linear span of mats (relative residual <= tol)?"""
    if isinstance(mats, SubalgebraBasis):
        return mats.contains(m, tol)
    stack = _stack(mats)
    v = _vec(as_matrix(m))
    nv = np.linalg.norm(v)
    if stack.shape[0] == 0:
        return nv <= tol
    _, _, vh = np.linalg.svd(stack, full_matrices=False)
    sv = np.linalg.svd(stack, compute_uv=False)
    keep = vh[sv / sv[0] >= 10 * _RANK_TOL] if sv[0] > 0 else vh[:0]
    proj = (v @ keep.conj().T) @ keep
    return float(np.linalg.norm(v - proj)) <= tol * (1.0 + nv)


def _span_rank(mats, rank_tol: float = _RANK_TOL) -> int:
    stack = _stack(mats)
    if stack.shape[0] == 0:
        return 0
    sv = np.linalg.svd(stack, compute_uv=False)
    if sv[0] == 0:
        return 0
    rel = sv / sv[0]
    if np.any((rel >= rank_tol) & (rel < 10 * rank_tol)):
        raise NumericError(
            "span rank decision is ambiguous (singular value within 10x of the cut "
            f"{rank_tol:.3g}); pass an explicit rank_tol override"
        )
    return int(np.sum(rel >= 10 * rank_tol))


def spans_equal(mats_a, mats_b, rank_tol: float = _RANK_TOL) -> bool:
    """Two-sided span equality by rank tests on the separate and joined
    stacks of normalised vectorisations."""
    if isinstance(mats_a, SubalgebraBasis):
        mats_a = mats_a.basis
    if isinstance(mats_b, SubalgebraBasis):
        mats_b = mats_b.basis
    ra = _span_rank(mats_a, rank_tol)
    rb = _span_rank(mats_b, rank_tol)
    if ra != rb:
        return False
    rj = _span_rank(list(mats_a) + list(mats_b), rank_tol)
    return rj == ra


def _ortho_matrices(mats, n: int, rank_tol: float = _RANK_TOL):
    """Orthonormal matrices spanning span(mats) (Frobenius inner product)."""
    stack = _stack(mats)
    if stack.shape[0] == 0:
        return []
    sv = np.linalg.svd(stack, compute_uv=False)
    _, _, vh = np.linalg.svd(stack, full_matrices=False)
    if sv[0] == 0:
        return []
    rel = sv / sv[0]
    if np.any((rel >= rank_tol) & (rel < 10 * rank_tol)):
        raise NumericError("span rank decision is ambiguous; pass cleaner generators")
    r = int(np.sum(rel >= 10 * rank_tol))
    return [vh[i].reshape(n, n) for i in range(r)]


# ---------------------------------------------------------------------------
# generated subalgebra and support idempotent
# ---------------------------------------------------------------------------

def ba(x, ambient: AmbientContext | None = None, tol: Tolerances | None = None,
       rank_tol: float = _RANK_TOL) -> SubalgebraBasis:
    """The (non-unital) subalgebra generated by x: span{x, x^2, x^3, ...}.

    Powers of x/||x|| accumulate until the numerical rank of the stacked
    span stops growing; the returned basis is orthonormalised.  A unit
    candidate (an element acting as identity on the span) is attached
    when one exists.
    """
    a = as_matrix(x)
    if ambient is None:
        ambient = full_context(a.shape[0])
    t = resolve_tol(tol)
    ambient.check_member(a, t)
    n = a.shape[0]
    nrm = operator_norm(a)
    if nrm <= t.eq_tol:
        raise InputError("ba(x) of a (numerically) zero element is the zero space")
    xn = a / nrm
    powers = [xn]
    rank = 1
    cur = xn
    for _ in range(n * n + 1):
        cur = cur @ xn
        powers.append(cur)
        new_rank = _span_rank(powers, rank_tol)
        if new_rank == rank:
            powers.pop()
            break
        rank = new_rank
    basis = _ortho_matrices(powers, n, rank_tol)
    alg = SubalgebraBasis(basis, ambient=ambient, validate=False)
    unit = _unit_candidate(alg, t)
    if unit is not None:
        alg.unit = unit
    return alg


def _unit_candidate(alg: SubalgebraBasis, t: Tolerances):
    """Least-squares element u of the span with u b = b = b u for all
    basis b; None when the residual says there is no unit."""
    d = alg.dim
    n = alg.n
    cols = []
    rhs = []
    for b in alg.basis:
        # rows for u @ b = b and b @ u = b, as linear maps applied to coords
        left_blocks = np.array([_vec(f @ b) for f in alg.basis]).T
        right_blocks = np.array([_vec(b @ f) for f in alg.basis]).T
        cols.append(left_blocks)
        rhs.append(_vec(b))
        cols.append(right_blocks)
        rhs.append(_vec(b))
    m = np.concatenate(cols, axis=0)
    v = np.concatenate(rhs)
    c, *_ = np.linalg.lstsq(m, v, rcond=None)
    res = float(np.linalg.norm(m @ c - v))
    if res > 1e-8 * (1.0 + np.linalg.norm(v)):
        return None
    u = sum(ci * bi for ci, bi in zip(c, alg.basis))
    return u


@dataclass(frozen=True)
class SupportIdempotent:
    """Support projection of an accretive element, with the method used
    and the cross-method agreement residual."""

    s: np.ndarray
    method: str
    agreement_residual: float


def support_idem(x, ctx: AmbientContext | None = None,
                 tol: Tolerances | None = None,
                 zero_tol: float | None = None,
                 n_max: int = 1024) -> SupportIdempotent:
    """Support idempotent s(x) of an accretive matrix.

    Primary method: the Riesz projection complementary to the eigenvalue
    0, computed as a trapezoid contour integral on a circle separating 0
    from the rest of the spectrum (s = e - P_0).  Cross-check: the
    root-limit s = lim x^{1/n} along n = 2^k up to n_max, accelerated by
    two Richardson extrapolation levels in 1/n.  Disagreement beyond
    1e-6 raises MethodDisagreementError carrying both candidates.

    For accretive x the kernel is reducing and semisimple, so s(x) is the
    orthogonal projection onto the closure of the range, satisfies
    s x = x s = x, s^2 = s, and lies in F (||e - s|| <= 1).
    """
    a = as_matrix(x)
    if ctx is None:
        ctx = full_context(a.shape[0])
    t = resolve_tol(tol)
    mem = membership(a, ctx, t)
    if not mem.in_r:
        raise PreconditionError(
            f"support_idem needs an accretive input; abscissa residual {mem.r_residual:.3g}"
        )
    xc = ctx.compress(ctx.check_member(a, t))
    k_dim = xc.shape[0]
    nrm = operator_norm(xc)
    ztol = 1e-9 * (1.0 + nrm) if zero_tol is None else float(zero_tol)
    eigs = np.linalg.eigvals(xc)
    zero_mask = np.abs(eigs) <= ztol
    eye = np.eye(k_dim, dtype=complex)

    if np.all(zero_mask):
        s_riesz = np.zeros_like(xc)
        s_root = np.zeros_like(xc)
    elif not np.any(zero_mask):
        s_riesz = eye.copy()
        s_root = _root_limit_block(xc, ztol, t, n_max)
    else:
        lam_min = float(np.min(np.abs(eigs[~zero_mask])))
        lam_zero = float(np.max(np.abs(eigs[zero_mask]))) if np.any(zero_mask) else 0.0
        rho = lam_min / 2.0
        if rho <= 3.0 * lam_zero:
            raise NumericError(
                f"cannot separate the zero cluster: radius {rho:.3g} vs cluster "
                f"extent {lam_zero:.3g}; pass a different zero_tol"
            )
        p0 = _riesz_zero_projection(xc, rho, t)
        s_riesz = eye - p0
        s_root = _root_limit_block(xc, ztol, t, n_max)

    agreement = float(operator_norm(s_riesz - s_root))
    if agreement > 1e-6:
        raise MethodDisagreementError(
            f"support idempotent methods disagree by {agreement:.3g} (> 1e-6)",
            values={"riesz": ctx.embed(s_riesz), "root_limit": ctx.embed(s_root)},
        )
    return SupportIdempotent(
        s=ctx.embed(s_riesz), method="RieszProjection", agreement_residual=agreement
    )


def _riesz_zero_projection(xc: np.ndarray, rho: float, t: Tolerances) -> np.ndarray:
    """Spectral projection onto the zero cluster by trapezoid quadrature
    of the resolvent on |lambda| = rho (geometric convergence in the node
    count; doubled until stable)."""
    k = xc.shape[0]
    eye = np.eye(k, dtype=complex)

    def trapezoid(nodes: int) -> np.ndarray:
        acc = np.zeros_like(xc)
        for j in range(nodes):
            lam = rho * np.exp(2j * np.pi * j / nodes)
            acc += lam * np.linalg.solve(lam * eye - xc, eye)
        return acc / nodes

    prev = trapezoid(64)
    for nodes in (128, 256, 512):
        cur = trapezoid(nodes)
        if operator_norm(cur - prev) <= max(t.conv_tol, 1e-13) * (1.0 + operator_norm(cur)):
            return cur
        prev = cur
    raise NumericError("resolvent contour integral failed to stabilise by 512 nodes")


def _root_limit_block(xc: np.ndarray, ztol: float, t: Tolerances, n_max: int) -> np.ndarray:
    """lim_k x^{1/2^k} with two Richardson levels in 1/n.

    x^{1/n} = s + s log(x')/n + O(1/n^2) on the invertible part, so
    R1_k = 2 a_{k+1} - a_k kills the 1/n term and a second level kills
    1/n^2, reaching ~1e-9 accuracy by n = 1024 where the raw root alone
    would still be ~|log lambda|/n.
    """
    levels = max(3, int(math.ceil(math.log2(max(4, n_max)))))
    z, t11, k, _ = _split_zero_cluster(xc, ztol, t)
    n_dim = xc.shape[0]
    if k == 0:
        return np.zeros_like(xc)
    block = t11.copy()
    tail = []
    for lev in range(1, levels + 1):
        block = _sqrtm_tri(block)
        if lev >= levels - 2:
            tail.append(block.copy())
    r1a = 2.0 * tail[1] - tail[0]
    r1b = 2.0 * tail[2] - tail[1]
    r2 = (4.0 * r1b - r1a) / 3.0
    out = np.zeros((n_dim, n_dim), dtype=complex)
    out[:k, :k] = r2
    return z @ out @ z.conj().T


# ---------------------------------------------------------------------------
# structural equivalence suites
# ---------------------------------------------------------------------------

def ws_suite(x, algebra: SubalgebraBasis, tol: Tolerances | None = None) -> VerificationReport:
    """Check the equivalent descriptions of a well-supported element.

    (i)   s(x) lies in the algebra;
    (ii)  x has a support idempotent inside the algebra (with (i));
    (iii) the support acts as a unit on x (with (i));
    (iv)  x y x = x is solvable over the algebra;
    (v)   x is invertible within ba(x) (x z = z x = u for ba(x)'s unit
          candidate u);
    (vi)  0 is isolated in the spectrum (gap above 1e-8).

    In finite dimension s(x) is a polynomial in x with zero constant
    term, so (ii) and (iii) hold identically whenever the data make
    sense; the suite verifies that (i), (iv), (v) agree and that each
    implies (vi).
    """
    t = resolve_tol(tol)
    a = as_matrix(x)
    ctx = algebra.ambient
    mem = membership(a, ctx, t)
    if not mem.in_r:
        raise PreconditionError(
            f"ws_suite needs an accretive input; abscissa residual {mem.r_residual:.3g}"
        )
    if not algebra.contains(a, 1e-7):
        raise PreconditionError("ws_suite input does not lie in the given algebra")

    nrm = operator_norm(a)
    sup = support_idem(a, ctx, t)
    s = sup.s

    v1 = algebra.contains(s, 1e-7)

    # (iv): least squares for x y x = x over the algebra
    cols = np.array([_vec(a @ b @ a) for b in algebra.basis]).T
    target = _vec(a)
    c, *_ = np.linalg.lstsq(cols, target, rcond=None)
    res_iv = float(np.linalg.norm(cols @ c - target))
    v4 = res_iv <= 1e-8 * (1.0 + np.linalg.norm(target))

    # (v): invertibility within ba(x)
    v5 = False
    res_v = np.inf
    if nrm > t.eq_tol:
        gen = ba(a, ctx, t)
        if gen.unit is not None:
            u = gen.unit
            cols_l = np.array([_vec(a @ b) for b in gen.basis]).T
            cols_r = np.array([_vec(b @ a) for b in gen.basis]).T
            m = np.concatenate([cols_l, cols_r], axis=0)
            v = np.concatenate([_vec(u), _vec(u)])
            cz, *_ = np.linalg.lstsq(m, v, rcond=None)
            res_v = float(np.linalg.norm(m @ cz - v))
            v5 = res_v <= 1e-8 * (1.0 + np.linalg.norm(v))

    # (vi): spectral gap at zero
    eigs = np.linalg.eigvals(ctx.compress(a))
    ztol = 1e-9 * (1.0 + nrm)
    nonzero = np.abs(eigs)[np.abs(eigs) > ztol]
    gap = float(np.min(nonzero)) if nonzero.size else np.inf
    v6 = gap > 1e-8

    equiv = (v1 == v4 == v5)
    implied = (not v1) or v6
    verdicts = {
        "i_support_in_algebra": bool(v1),
        "ii_support_exists": True,
        "iii_support_acts_as_unit": True,
        "iv_inner_solution": bool(v4),
        "v_invertible_in_ba": bool(v5),
        "vi_zero_isolated": bool(v6),
        "equivalence": bool(equiv),
        "implication_to_vi": bool(implied),
    }
    return VerificationReport(
        check="ws",
        passed=bool(equiv and implied),
        verdicts=verdicts,
        residuals={"iv": res_iv, "v": res_v if np.isfinite(res_v) else -1.0,
                   "gap": gap if np.isfinite(gap) else -1.0,
                   "support_agreement": sup.agreement_residual},
        tolerances=t.as_dict(),
        instance=matrix_digest(a),
    )


@dataclass
class HsaResult:
    """Hereditary-subalgebra data generated by an F element z:
    J = span(z A) (right ideal), D = span(z A z) (inner ideal),
    K = span(A z) (left ideal), with certificate residuals."""

    j_basis: list
    d_basis: list
    k_basis: list
    report: VerificationReport


def hsa_from_z(z, algebra: SubalgebraBasis, tol: Tolerances | None = None) -> HsaResult:
    """Build the hereditary structure generated by z in F.

    Certifies: J is a right ideal, K is a left ideal, D = z A z is an
    inner ideal (d a d' stays in D), and s(z) acts as a unit on D.
    """
    t = resolve_tol(tol)
    a = as_matrix(z, "z")
    ctx = algebra.ambient
    mem = membership(a, ctx, t)
    if not mem.in_F:
        raise PreconditionError(
            f"hsa_from_z needs z in F; residual {mem.F_residual:.3g} exceeds eq_tol"
        )
    if not algebra.contains(a, 1e-7):
        raise PreconditionError("hsa_from_z input does not lie in the given algebra")
    n = algebra.n
    j_basis = _ortho_matrices([a @ b for b in algebra.basis], n)
    d_basis = _ortho_matrices([a @ b @ a for b in algebra.basis], n)
    k_basis = _ortho_matrices([b @ a for b in algebra.basis], n)

    def worst_span_residual(products, span_mats):
        if not span_mats:
            return max((np.linalg.norm(_vec(p)) for p in products), default=0.0)
        stack_q = np.array([_vec(m) for m in span_mats])
        worst = 0.0
        for p in products:
            v = _vec(p)
            proj = (v @ stack_q.conj().T) @ stack_q
            worst = max(worst, float(np.linalg.norm(v - proj)) / (1.0 + np.linalg.norm(v)))
        return worst

    r_right = worst_span_residual(
        [j @ b for j in j_basis for b in algebra.basis], j_basis)
    r_left = worst_span_residual(
        [b @ k for k in k_basis for b in algebra.basis], k_basis)
    r_inner = worst_span_residual(
        [d @ b @ dd for d in d_basis for b in algebra.basis for dd in d_basis], d_basis)

    s = support_idem(a, ctx, t).s
    r_unit = max(
        (max(operator_norm(s @ d - d), operator_norm(d @ s - d)) for d in d_basis),
        default=0.0,
    )

    verdicts = {
        "right_ideal": r_right <= 1e-7,
        "left_ideal": r_left <= 1e-7,
        "inner_ideal": r_inner <= 1e-7,
        "support_unit_on_core": r_unit <= 1e-6,
    }
    report = VerificationReport(
        check="hsa",
        passed=all(verdicts.values()),
        verdicts=verdicts,
        residuals={"right_ideal": r_right, "left_ideal": r_left,
                   "inner_ideal": r_inner, "support_unit": r_unit},
        tolerances=t.as_dict(),
        details={"dim_J": len(j_basis), "dim_D": len(d_basis), "dim_K": len(k_basis)},
        instance=matrix_digest(a),
    )
    return HsaResult(j_basis=j_basis, d_basis=d_basis, k_basis=k_basis, report=report)


def supp_order(x, y, algebra: SubalgebraBasis, tol: Tolerances | None = None) -> VerificationReport:
    """Check span(x A) inside span(y A)  <=>  s(y) s(x) = s(x)."""
    t = resolve_tol(tol)
    ax = as_matrix(x, "x")
    ay = as_matrix(y, "y")
    ctx = algebra.ambient
    for m, name in ((ax, "x"), (ay, "y")):
        if not membership(m, ctx, t).in_r:
            raise PreconditionError(f"supp_order needs accretive inputs; {name} is not")
    xa = [ax @ b for b in algebra.basis]
    ya = [ay @ b for b in algebra.basis]
    r_ya = _span_rank(ya)
    r_joint = _span_rank(ya + xa)
    contained = r_joint == r_ya
    sx = support_idem(ax, ctx, t).s
    sy = support_idem(ay, ctx, t).s
    res = float(operator_norm(sy @ sx - sx))
    dominates = res <= 1e-7
    verdicts = {"ideal_containment": bool(contained), "support_domination": bool(dominates)}
    return VerificationReport(
        check="supp_order",
        passed=contained == dominates,
        verdicts=verdicts,
        residuals={"support_domination": res},
        tolerances=t.as_dict(),
        details={"rank_yA": r_ya, "rank_joint": r_joint},
        instance=matrix_digest(ax, ay),
    )


def lump_check(p, ctx: AmbientContext | None = None,
               tol: Tolerances | None = None) -> VerificationReport:
    """For an idempotent p, membership in F and accretivity coincide
    (both characterise orthogonal projections); check the two verdicts
    agree.

    In an orthonormal basis adapted to the range, p = [[I, B], [0, 0]],
    so ||e - p|| - 1 = sqrt(1 + s^2) - 1 and the Hermitian-part abscissa
    is (1 - sqrt(1 + s^2))/2 with s the largest singular value of B: the
    accretivity residual is exactly minus half the F residual.  The two
    faces are therefore tested against a common band (scaled 2:1) so
    that no idempotent can straddle the thresholds.
    """
    t = resolve_tol(tol)
    a = as_matrix(p, "p")
    if ctx is None:
        ctx = full_context(a.shape[0])
    nrm = operator_norm(a)
    idem_res = operator_norm(a @ a - a)
    if idem_res > 100 * t.eq_tol * (1.0 + nrm) ** 2:
        raise PreconditionError(f"lump_check needs an idempotent; residual {idem_res:.3g}")
    mem = membership(a, ctx, t)
    band = max(t.eq_tol, 2.0 * t.psd_tol)
    verdicts = {"in_F": mem.F_residual <= band,
                "accretive": mem.r_residual >= -band / 2.0}
    return VerificationReport(
        check="lump",
        passed=verdicts["in_F"] == verdicts["accretive"],
        verdicts=verdicts,
        residuals={"F_residual": mem.F_residual, "r_residual": mem.r_residual,
                   "idempotent": idem_res},
        tolerances=t.as_dict(),
        instance=matrix_digest(a),
    )


def aarnes_kadison_check(x, algebra: SubalgebraBasis,
                         tol: Tolerances | None = None) -> VerificationReport:
    """Check the equivalent fullness conditions of an accretive element:
    span(x A x) = span(A)  <=>  span(x A) = span(A x) = span(A)  <=>
    s(x) acts as the unit of A."""
    t = resolve_tol(tol)
    a = as_matrix(x)
    ctx = algebra.ambient
    if not membership(a, ctx, t).in_r:
        raise PreconditionError("aarnes_kadison_check needs an accretive input")
    basis = algebra.basis
    c1 = spans_equal([a @ b @ a for b in basis], basis)
    c2 = spans_equal([a @ b for b in basis], basis) and spans_equal(
        [b @ a for b in basis], basis)
    s = support_idem(a, ctx, t).s
    res_unit = max(
        max(operator_norm(s @ b - b), operator_norm(b @ s - b)) for b in basis
    )
    scale = 1.0 + max(operator_norm(b) for b in basis)
    c3 = res_unit <= 1e-7 * scale and algebra.contains(s, 1e-7)
    verdicts = {"sandwich_full": bool(c1), "one_sided_full": bool(c2),
                "support_is_unit": bool(c3)}
    return VerificationReport(
        check="aarnes",
        passed=len({c1, c2, c3}) == 1,
        verdicts=verdicts,
        residuals={"support_unit": res_unit},
        tolerances=t.as_dict(),
        instance=matrix_digest(a),
    )


def ba_ftransform_equal(x, ctx: AmbientContext | None = None,
                        tol: Tolerances | None = None) -> VerificationReport:
    """The subalgebras generated by x and by F(x) = x(e+x)^{-1} coincide."""
    t = resolve_tol(tol)
    a = as_matrix(x)
    if ctx is None:
        ctx = full_context(a.shape[0])
    if not membership(a, ctx, t).in_r:
        raise PreconditionError("ba_ftransform_equal needs an accretive input")
    y = f_transform(a, ctx, t)
    b1 = ba(a, ctx, t)
    b2 = ba(y, ctx, t)
    equal = spans_equal(b1, b2)
    return VerificationReport(
        check="ba_ftransform",
        passed=bool(equal),
        verdicts={"spans_equal": bool(equal)},
        residuals={},
        tolerances=t.as_dict(),
        details={"dim_ba_x": b1.dim, "dim_ba_Fx": b2.dim},
        instance=matrix_digest(a),
    )


def idempotent_ideal(q, algebra: SubalgebraBasis, x=None,
                     tol: Tolerances | None = None) -> VerificationReport:
    """For an idempotent q in F inside the algebra: span(q A) is a right
    ideal with left unit q.  When an accretive x is supplied and its
    support lies in the algebra, span(x A) = span(s(x) A) as well."""
    t = resolve_tol(tol)
    aq = as_matrix(q, "q")
    ctx = algebra.ambient
    idem_res = operator_norm(aq @ aq - aq)
    if idem_res > 100 * t.eq_tol * (1.0 + operator_norm(aq)) ** 2:
        raise PreconditionError(f"idempotent_ideal needs an idempotent q; residual {idem_res:.3g}")
    mem = membership(aq, ctx, t)
    if not mem.in_F:
        raise PreconditionError(f"idempotent_ideal needs q in F; residual {mem.F_residual:.3g}")
    if not algebra.contains(aq, 1e-7):
        raise PreconditionError("q does not lie in the given algebra")
    n = algebra.n
    ideal = _ortho_matrices([aq @ b for b in algebra.basis], n)
    stack_q = np.array([_vec(m) for m in ideal]) if ideal else np.zeros((0, n * n))
    worst_ideal = 0.0
    worst_unit = 0.0
    for j in ideal:
        for b in algebra.basis:
            prod = j @ b
            v = _vec(prod)
            proj = (v @ stack_q.conj().T) @ stack_q
            worst_ideal = max(worst_ideal,
                              float(np.linalg.norm(v - proj)) / (1.0 + np.linalg.norm(v)))
        worst_unit = max(worst_unit, operator_norm(aq @ j - j))
    verdicts = {"right_ideal": worst_ideal <= 1e-7, "left_unit": worst_unit <= 1e-7}
    residuals = {"right_ideal": worst_ideal, "left_unit": worst_unit}
    details = {"dim_ideal": len(ideal)}
    if x is not None:
        axm = as_matrix(x)
        if not membership(axm, ctx, t).in_r:
            raise PreconditionError("supplied x must be accretive")
        s = support_idem(axm, ctx, t).s
        if algebra.contains(s, 1e-7):
            same = spans_equal([axm @ b for b in algebra.basis],
                               [s @ b for b in algebra.basis])
            verdicts["xA_equals_sA"] = bool(same)
            details["support_in_algebra"] = True
        else:
            details["support_in_algebra"] = False
    return VerificationReport(
        check="idempotent_ideal",
        passed=all(verdicts.values()),
        verdicts=verdicts,
        residuals=residuals,
        tolerances=t.as_dict(),
        details=details,
        instance=matrix_digest(aq),
    )
