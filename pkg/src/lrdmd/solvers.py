"""Rank-constrained linear-operator fitters for snapshot data.

All fitters minimize (or approximate the minimizer of) the Frobenius
residual ||Y - A X|| over operators A of rank at most k:

* fit_exact_dmd        -- unconstrained least squares A = Y X^+.
* fit_truncated_exact_dmd -- rank-k truncation of the unconstrained
  solution; optimal approximation of the operator, not of the residual.
* fit_projected_dmd    -- solves the problem restricted to operators whose
  action on X stays in the column span of X (the classic projected
  approach); exact only when the data satisfies that span assumption.
* fit_optimal_lowrank_dmd -- the closed-form global minimizer: the
  orthogonal projection of the unconstrained solution onto the dominant
  k-dimensional left singular subspace of Y.

Operators are kept in factored (n x rho)(rho x n) form; nothing here
materializes an n-by-n matrix unless materialize() is called explicitly.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    RankClampWarning,
    RankDeficiencyWarning,
    RankGuardError,
    ValidationError,
)
from .linalg import (
    DEFAULT_TOL,
    GRAM_NOISE_FLOOR,
    SvdFactors,
    gram_left_basis,
    gram_singular_triplets,
    numerical_rank,
    thin_svd,
)
from .snapshots import DataMatrices

MATERIALIZE_GUARD = 10_000


@dataclass(frozen=True)
class DmdOperator:
    """A fitted linear operator A = left @ right of rank <= declared_rank.

    left is n-by-rho and right rho-by-n, so applying the operator costs
    O(n * rho) instead of O(n^2).
    """

    left: np.ndarray
    right: np.ndarray
    method_tag: str

    @property
    def n(self) -> int:
        return self.left.shape[0]

    @property
    def declared_rank(self) -> int:
        return self.left.shape[1]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Matrix-vector (or matrix-matrix) product through the factors."""
        return self.left @ (self.right @ x)

    def frobenius_norm(self) -> float:
        """||A||_F from the factors: sqrt(tr((L^T L)(R R^T)))."""
        return float(np.sqrt(abs(np.sum((self.left.T @ self.left) * (self.right @ self.right.T)))))


@dataclass(frozen=True)
class OptimalLowRankFactors:
    """Factor bundle from the optimal solver, reused by the spectral and
    reduced-order modules.

    P (n, k): orthonormal basis of the dominant left singular subspace of Y.
    x_svd: thin SVD of X, from which the thresholded pseudo-inverse acts.
    Q (n, k): (Y X^+)^T P, so the fitted operator is A = P Q^T.
    """

    P: np.ndarray
    x_svd: SvdFactors
    Q: np.ndarray

    @property
    def rank(self) -> int:
        return self.P.shape[1]


def _effective_x_factors(d: DataMatrices, tol: float, strict: bool):
    """Thin SVD of X reduced to its numerical rank, warning or raising on
    deficiency; the solvers invert only the retained singular values."""
    if d.m > d.n:
        raise ValidationError(
            f"solvers require m <= n (got n={d.n}, m={d.m}); subsample the snapshots"
        )
    fx = thin_svd(d.X)
    r = fx.numerical_rank(tol)
    if r < d.m:
        msg = (
            f"X is numerically rank-deficient (rank {r} < m={d.m}); "
            "proceeding with a thresholded pseudo-inverse"
        )
        if strict:
            raise RankGuardError(msg)
        warnings.warn(msg, RankDeficiencyWarning, stacklevel=3)
    return fx, r


def _check_rank_arg(k: int) -> int:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValidationError("rank must be an integer")
    if k < 1:
        raise ValidationError("rank must be >= 1")
    return int(k)


def fit_exact_dmd(d: DataMatrices, tol: float = DEFAULT_TOL, strict: bool = False) -> DmdOperator:
    """Unconstrained least-squares fit A = Y X^+ in factored form.

    With full-column-rank X the residual ||Y - A X|| vanishes because
    X^+ X is the identity on R^m.
    """
    fx, r = _effective_x_factors(d, tol, strict)
    left = d.Y @ (fx.V[:, :r] / fx.sigma[:r])
    right = fx.W[:, :r].T.copy()
    return DmdOperator(left=left, right=right, method_tag="exact_full")


def fit_truncated_exact_dmd(
    d: DataMatrices, k: int, tol: float = DEFAULT_TOL, strict: bool = False
) -> DmdOperator:
    """Rank-k truncation of the unconstrained solution A = Y X^+.

    Computed economically: with X = Wx Sx Vx^T, the solution is
    (Y Vx Sx^-1) Wx^T, and an SVD of the thin n-by-m first factor yields
    the SVD of the full operator because Wx has orthonormal columns. The
    n-by-n operator is never formed.
    """
    k = _check_rank_arg(k)
    fx, r = _effective_x_factors(d, tol, strict)
    F = d.Y @ (fx.V[:, :r] / fx.sigma[:r])
    ff = thin_svd(F)
    keep = min(k, ff.numerical_rank(tol))
    left = ff.W[:, :keep] * ff.sigma[:keep]
    right = (fx.W[:, :r] @ ff.V[:, :keep]).T
    return DmdOperator(left=left, right=right, method_tag="truncated_exact")


def fit_projected_dmd(
    d: DataMatrices, k: int, tol: float = DEFAULT_TOL, strict: bool = False
) -> DmdOperator:
    """Span-restricted rank-k fit in the left singular basis of X.

    Projects Y into the X basis, B = Wx^T Y Vx, keeps the best rank-k part
    of B, and lifts back, A = Wx Bk Sx^-1 Wx^T, assembled directly in
    factored form. Matches the optimal solver exactly when every column of
    Y lies in the column span of X, and plateaus at the span defect
    otherwise.
    """
    k = _check_rank_arg(k)
    fx, r = _effective_x_factors(d, tol, strict)
    B = fx.W[:, :r].T @ d.Y @ fx.V[:, :r]
    fb = thin_svd(B)
    keep = min(k, fb.numerical_rank(tol))
    left = fx.W[:, :r] @ (fb.W[:, :keep] * fb.sigma[:keep])
    right = (fb.V[:, :keep].T / fx.sigma[:r]) @ fx.W[:, :r].T
    return DmdOperator(left=left, right=right, method_tag="projected")


def fit_optimal_lowrank_dmd(
    d: DataMatrices, k: int, tol: float = DEFAULT_TOL, strict: bool = False
):
    """Closed-form global minimizer of ||Y - A X|| over rank(A) <= k.

    The minimizer is P P^T Y X^+ where P spans the dominant k-dimensional
    left singular subspace of Y, obtained through the m-by-m Gram matrix
    of Y rather than anything n-by-n. Requests beyond the numerical rank
    of Y are clamped (the projector already covers the whole numerical
    column space, so larger k cannot change the operator); strict mode
    raises instead.

    Returns (operator, factors) where factors feed the spectral and
    reduced-order modules.
    """
    k = _check_rank_arg(k)
    fx, r = _effective_x_factors(d, tol, strict)
    sigma_y, Vy = gram_singular_triplets(d.Y)
    if k <= numerical_rank(sigma_y, tol) and sigma_y[k - 1] >= GRAM_NOISE_FLOOR * sigma_y[0]:
        # healthy regime: the Gram route resolves the k-th direction
        P = gram_left_basis(d.Y, sigma_y, Vy, k)
    else:
        # near or past the numerical rank of Y: rank decisions and trailing
        # basis directions need full precision, which squaring destroys
        fy = thin_svd(d.Y)
        rank_y = fy.numerical_rank(tol)
        if rank_y == 0:
            raise RankGuardError("Y is numerically zero; nothing to fit")
        if k > rank_y:
            msg = f"requested rank {k} exceeds the numerical rank {rank_y} of Y; clamped"
            if strict:
                raise RankGuardError(msg)
            warnings.warn(msg, RankClampWarning, stacklevel=2)
            k = rank_y
        if sigma_y[k - 1] >= GRAM_NOISE_FLOOR * sigma_y[0]:
            P = gram_left_basis(d.Y, sigma_y, Vy, k)
        else:
            P = fy.W[:, :k].copy()
    # Q^T = P^T Y X^+ assembled right-to-left in O(n k m); A = P Q^T
    Qt = ((P.T @ d.Y) @ (fx.V[:, :r] / fx.sigma[:r])) @ fx.W[:, :r].T
    factors = OptimalLowRankFactors(P=P, x_svd=fx, Q=Qt.T.copy())
    op = DmdOperator(left=P, right=Qt, method_tag="optimal")
    return op, factors


def residual_norm(op: DmdOperator, d: DataMatrices) -> float:
    """Frobenius norm of Y - A X, evaluated through the factors."""
    if op.n != d.n:
        raise ValidationError(
            f"operator dimension {op.n} does not match data dimension {d.n}"
        )
    R = d.Y - op.left @ (op.right @ d.X)
    return float(np.linalg.norm(R))


def materialize(op: DmdOperator) -> np.ndarray:
    """Dense n-by-n form of the operator; guarded against large n."""
    if op.n > MATERIALIZE_GUARD:
        raise ValidationError(
            f"refusing to materialize a {op.n}x{op.n} matrix (guard at {MATERIALIZE_GUARD})"
        )
    return op.left @ op.right
