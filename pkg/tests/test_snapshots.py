import numpy as np
import pytest
from numpy.testing import assert_allclose

from lrdmd.errors import SnapshotFormatError, ValidationError
from lrdmd.snapshots import (
    DataMatrices,
    SnapshotSet,
    build_data_matrices,
    load_snapshots,
    save_snapshots,
    validate_rank_assumptions,
)


def write_csv(path, text):
    path.write_text(text)
    return path


class TestLoadSnapshots:
    def test_minimal_file(self, tmp_path):
        p = write_csv(tmp_path / "s.csv", "traj_id,t,x0,x1\n1,1,1,0\n1,2,0,1\n")
        s = load_snapshots(p)
        assert (s.num_trajectories, s.num_snapshots, s.n) == (1, 2, 2)
        assert_allclose(s.states[0], [[1.0, 0.0], [0.0, 1.0]])

    def test_rows_in_any_order(self, tmp_path):
        p = write_csv(
            tmp_path / "s.csv",
            "traj_id,t,x0\n2,2,4\n1,1,1\n2,1,3\n1,2,2\n",
        )
        s = load_snapshots(p)
        assert_allclose(s.states[:, :, 0], [[1.0, 2.0], [3.0, 4.0]])

    def test_ragged_trajectories(self, tmp_path):
        p = write_csv(
            tmp_path / "s.csv",
            "traj_id,t,x0\n1,1,1\n1,2,2\n1,3,3\n2,1,4\n2,2,5\n",
        )
        with pytest.raises(SnapshotFormatError, match="ragged"):
            load_snapshots(p)

    def test_duplicate_key(self, tmp_path):
        p = write_csv(tmp_path / "s.csv", "traj_id,t,x0\n1,1,1\n1,1,2\n1,2,3\n")
        with pytest.raises(SnapshotFormatError, match="duplicate"):
            load_snapshots(p)

    def test_non_contiguous_times(self, tmp_path):
        p = write_csv(tmp_path / "s.csv", "traj_id,t,x0\n1,1,1\n1,3,2\n")
        with pytest.raises(SnapshotFormatError, match="1..T"):
            load_snapshots(p)

    def test_traj_ids_must_start_at_one(self, tmp_path):
        p = write_csv(tmp_path / "s.csv", "traj_id,t,x0\n2,1,1\n2,2,2\n")
        with pytest.raises(SnapshotFormatError, match="1..N"):
            load_snapshots(p)

    def test_non_numeric_cell(self, tmp_path):
        p = write_csv(tmp_path / "s.csv", "traj_id,t,x0\n1,1,abc\n1,2,1\n")
        with pytest.raises(SnapshotFormatError, match="non-numeric"):
            load_snapshots(p)

    def test_inconsistent_width(self, tmp_path):
        p = write_csv(tmp_path / "s.csv", "traj_id,t,x0,x1\n1,1,1,2\n1,2,3\n")
        with pytest.raises(SnapshotFormatError, match="columns"):
            load_snapshots(p)

    def test_bad_header(self, tmp_path):
        p = write_csv(tmp_path / "s.csv", "id,t,x0\n1,1,1\n")
        with pytest.raises(SnapshotFormatError, match="header"):
            load_snapshots(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(SnapshotFormatError, match="not found"):
            load_snapshots(tmp_path / "nope.csv")

    def test_round_trip_bit_exact(self, tmp_path, rng):
        states = rng.standard_normal((3, 4, 5))
        states[0, 0, 0] = 0.1
        states[1, 2, 3] = 1e-17
        states[2, 3, 4] = -1.2345678901234567e300
        s = SnapshotSet(states=states)
        path = tmp_path / "round.csv"
        save_snapshots(s, path)
        loaded = load_snapshots(path)
        assert np.array_equal(loaded.states, s.states)


class TestSnapshotSet:
    def test_needs_two_snapshots(self):
        with pytest.raises(ValidationError):
            SnapshotSet(states=np.zeros((1, 1, 3)))

    def test_rejects_non_finite(self):
        states = np.zeros((1, 2, 2))
        states[0, 0, 0] = np.inf
        with pytest.raises(ValidationError):
            SnapshotSet(states=states)

    def test_initial_condition(self, rng):
        s = SnapshotSet(states=rng.standard_normal((2, 3, 4)))
        assert_allclose(s.initial_condition(), s.states[0, 0])
        assert_allclose(s.initial_condition(1), s.states[1, 0])


class TestBuildDataMatrices:
    def test_single_trajectory(self):
        a, b, c = [1.0, 0.0], [2.0, 1.0], [3.0, 2.0]
        s = SnapshotSet(states=np.array([[a, b, c]]))
        d = build_data_matrices(s)
        assert_allclose(d.X.T, [a, b])
        assert_allclose(d.Y.T, [b, c])

    def test_two_short_trajectories(self):
        u1, u2, v1, v2 = [1.0], [2.0], [3.0], [4.0]
        s = SnapshotSet(states=np.array([[u1, u2], [v1, v2]]))
        d = build_data_matrices(s)
        assert_allclose(d.X, [[1.0, 3.0]])
        assert_allclose(d.Y, [[2.0, 4.0]])

    def test_reference_scale_column_count(self, rng):
        # one trajectory of 41 states in dimension 50 gives 40 pairs
        s = SnapshotSet(states=rng.standard_normal((1, 41, 50)))
        d = build_data_matrices(s)
        assert d.m == 40 and d.n == 50

    @pytest.mark.parametrize("N,T", [(1, 2), (2, 3), (3, 5)])
    def test_column_count_invariant(self, N, T, rng):
        d = build_data_matrices(SnapshotSet(states=rng.standard_normal((N, T, 4))))
        assert d.m == (T - 1) * N

    @pytest.mark.parametrize("N,T", [(1, 5), (3, 4)])
    def test_pairing_shift(self, N, T, rng):
        # within each trajectory block, predecessors shifted by one step
        # are exactly the previous successors
        d = build_data_matrices(SnapshotSet(states=rng.standard_normal((N, T, 3))))
        for i in range(N):
            block = slice(i * (T - 1), (i + 1) * (T - 1))
            assert np.array_equal(d.X[:, block][:, 1:], d.Y[:, block][:, :-1])


class TestValidateRankAssumptions:
    def test_duplicated_column_drops_rank(self, rng):
        base = rng.standard_normal((6, 2))
        X = np.column_stack([base, base[:, 0]])
        d = DataMatrices(X=X, Y=rng.standard_normal((6, 3)))
        report = validate_rank_assumptions(d)
        assert report.rank_x == 2 < d.m
        assert not report.full_rank

    def test_orthonormal_columns_full_rank(self):
        X = np.eye(5)[:, :3]
        d = DataMatrices(X=X, Y=np.eye(5)[:, 1:4])
        report = validate_rank_assumptions(d)
        assert report.rank_x == 3 == report.rank_y == d.m
        assert report.full_rank and report.m_within_n

    def test_setting_ii_ranks(self, setting_ii_data):
        # oracle: singular-value counts from numpy's SVD directly
        sx = np.linalg.svd(setting_ii_data.X, compute_uv=False)
        sy = np.linalg.svd(setting_ii_data.Y, compute_uv=False)
        assert int(np.sum(sx > 1e-12 * sx[0])) == 40
        assert int(np.sum(sy > 1e-12 * sy[0])) == 30
        report = validate_rank_assumptions(setting_ii_data)
        assert (report.rank_x, report.rank_y) == (40, 30)
        assert report.m_within_n and not report.full_rank

    def test_report_lines(self, rng):
        d = DataMatrices(X=rng.standard_normal((4, 2)), Y=rng.standard_normal((4, 2)))
        lines = validate_rank_assumptions(d).lines()
        assert any("rank of X" in line for line in lines)

    def test_wide_data_is_diagnosed_not_rejected(self, rng):
        # more snapshot pairs than dimensions: the diagnostic still runs
        # and flags the violated assumption for the solvers
        d = DataMatrices(X=rng.standard_normal((3, 6)), Y=rng.standard_normal((3, 6)))
        report = validate_rank_assumptions(d)
        assert not report.m_within_n
        assert report.rank_x == 3 < d.m

    def test_custom_tolerance(self, rng):
        X = rng.standard_normal((6, 2)) @ np.diag([1.0, 1e-5])
        d = DataMatrices(X=X, Y=rng.standard_normal((6, 2)))
        assert validate_rank_assumptions(d).rank_x == 2
        assert validate_rank_assumptions(d, tol=1e-3).rank_x == 1
