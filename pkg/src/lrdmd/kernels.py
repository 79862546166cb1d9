"""Hot numerical kernels, JIT-compiled with numba when available.

The loop-bound inner kernels live here: the alternating-least-squares
sweep used as a brute-force reference for the closed-form solver, and the
sequential trajectory recursions. Everything else in the package is
BLAS/LAPACK-bound and stays plain numpy.

Backend selection: numba is used when importable unless the environment
variable ``LRDMD_DISABLE_NUMBA`` is set to 1/true/yes, in which case the
same functions run as pure numpy/Python. Both paths execute identical
statements, so results agree to floating-point roundoff.
``benchmarks/kernel_bench.py`` compares the two backends.
"""

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("LRDMD_DISABLE_NUMBA", "").strip().lower()
    return flag not in ("1", "true", "yes")


NUMBA_ENABLED = False
if _numba_requested():
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        # identity decorator, usable bare or with options
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


@njit(cache=True)
def als_sweep(X, Y, YXp, inits, iters):
    """Best-of-restarts alternating least squares for min ||Y - L R X||_F.

    X, Y are n-by-m data matrices, YXp is the precomputed product of Y with
    the pseudo-inverse of X, and inits stacks the random starting values of
    the left factor L (restarts, n, k). Each restart alternates closed-form
    updates of L (n, k) and R (k, n) for `iters` iterations; the update
    solves are regularized with a vanishing ridge so a collapsed factor
    cannot abort the sweep. Every iterate is a feasible rank-<=k point, so
    the best objective seen is always an upper bound on the optimum.

    Returns (best objective, best L, best R).
    """
    restarts, n, k = inits.shape
    m = X.shape[1]
    eye = np.eye(k)
    best = np.inf
    best_L = np.zeros((n, k))
    best_R = np.zeros((k, n))
    for r in range(restarts):
        L = inits[r].copy()
        R = np.zeros((k, n))
        for _ in range(iters):
            # R-step: R = (L^T L)^-1 L^T (Y X^+), ridge keeps it solvable
            G = L.T @ L
            tr = 0.0
            for i in range(k):
                tr += G[i, i]
            R = np.linalg.solve(G + (1e-12 * tr / k + 1e-30) * eye, L.T @ YXp)
            Z = R @ X
            # L-step: L = Y Z^T (Z Z^T)^-1
            H = Z @ Z.T
            tr = 0.0
            for i in range(k):
                tr += H[i, i]
            L = np.linalg.solve(H + (1e-12 * tr / k + 1e-30) * eye, Z @ Y.T).T
            E = Y - L @ Z
            s = 0.0
            for i in range(n):
                for j in range(m):
                    s += E[i, j] * E[i, j]
            obj = np.sqrt(s)
            if obj < best:
                best = obj
                best_L = L.copy()
                best_R = R.copy()
    return best, best_L, best_R


@njit(cache=True)
def propagate_factored(left, right, x0, horizon, stride, limit):
    """Iterate x <- left (right x) from x0, keeping every stride-th state.

    States are indexed t = 1..horizon with x0 at t = 1; rows of the output
    hold the states at t = 1, 1+stride, 1+2*stride, ... The squared norm of
    each new state is checked against limit**2; on overflow the step index
    that tripped the guard is returned (0 means the whole horizon was safe).
    """
    n = x0.shape[0]
    n_keep = 1 + (horizon - 1) // stride
    out = np.empty((n_keep, n))
    out[0] = x0
    x = x0.copy()
    row = 1
    for t in range(2, horizon + 1):
        x = left @ (right @ x)
        s = 0.0
        for i in range(n):
            s += x[i] * x[i]
        if not np.isfinite(s) or s > limit * limit:
            return out[:row], t
        if (t - 1) % stride == 0:
            out[row] = x
            row += 1
    return out[:row], 0


@njit(cache=True)
def propagate_reduced(M, z_first, horizon, stride, limit):
    """Iterate the low-dimensional recursion z_t = M z_{t-1} from z_2.

    z_first is the state at t = 2; output rows hold z at the kept times
    t = 1+stride, 1+2*stride, ... up to horizon. Overflow is reported the
    same way as in propagate_factored.
    """
    k = z_first.shape[0]
    n_keep = (horizon - 1) // stride
    out = np.empty((n_keep, k))
    z = z_first.copy()
    row = 0
    for t in range(2, horizon + 1):
        if t > 2:
            z = M @ z
        s = 0.0
        for i in range(k):
            s += z[i] * z[i]
        if not np.isfinite(s) or s > limit * limit:
            return out[:row], t
        if (t - 1) % stride == 0:
            out[row] = z
            row += 1
    return out[:row], 0
