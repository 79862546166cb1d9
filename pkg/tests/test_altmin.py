import numpy as np
import pytest

from lrdmd.altmin import als_lowrank_fit
from lrdmd.errors import ValidationError


class TestAlsLowRankFit:
    def test_cannot_beat_known_optimum(self, rng):
        # with X = I the optimum is the singular-value tail (fixed-rank
        # approximation), which no feasible factor pair can undercut
        Y = rng.standard_normal((5, 5))
        sigma = np.linalg.svd(Y, compute_uv=False)
        for k in (1, 2):
            tail = float(np.linalg.norm(sigma[k:]))
            obj, _, _ = als_lowrank_fit(np.eye(5), Y, k, restarts=8, iters=300, seed=0)
            assert obj >= tail - 1e-8
            assert obj <= tail + 1e-6  # and it converges on a tiny problem

    def test_objective_matches_returned_factors(self, rng):
        X = rng.standard_normal((6, 4))
        Y = rng.standard_normal((6, 4))
        obj, L, R = als_lowrank_fit(X, Y, 2, restarts=5, iters=100, seed=1)
        recomputed = float(np.linalg.norm(Y - L @ (R @ X)))
        assert abs(obj - recomputed) < 1e-10

    def test_deterministic(self, rng):
        X = rng.standard_normal((5, 3))
        Y = rng.standard_normal((5, 3))
        a = als_lowrank_fit(X, Y, 2, restarts=3, iters=50, seed=7)[0]
        b = als_lowrank_fit(X, Y, 2, restarts=3, iters=50, seed=7)[0]
        assert a == b

    def test_bad_arguments(self, rng):
        X = rng.standard_normal((4, 3))
        with pytest.raises(ValidationError):
            als_lowrank_fit(X, X, 0)
        with pytest.raises(ValidationError):
            als_lowrank_fit(X, rng.standard_normal((4, 2)), 1)
        with pytest.raises(ValidationError):
            als_lowrank_fit(X, X, 1, restarts=0)
