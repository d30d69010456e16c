import numpy as np
import pytest

from fuzzyloc.clustering import elbow_k, kmeans, knee_point, wcss
from fuzzyloc.errors import InvalidInputError


def blobs(centers, per_blob, sd, seed):
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, dtype=float)
    points = []
    for c in centers:
        points.append(c + rng.normal(0.0, sd, size=(per_blob, len(c))))
    return np.vstack(points)


FOUR_BLOBS = blobs([(0, 0), (20, 0), (0, 20), (20, 20)], per_blob=50, sd=1.0, seed=3)


class TestKMeans:
    def test_same_seed_same_result(self):
        a = kmeans(FOUR_BLOBS, 4, seed=11)
        b = kmeans(FOUR_BLOBS, 4, seed=11)
        assert np.array_equal(a.assignment, b.assignment)
        assert np.array_equal(a.centroids, b.centroids)
        assert a.wcss_history == b.wcss_history

    def test_k_equals_one_uses_global_mean(self):
        result = kmeans(FOUR_BLOBS, 1, seed=0)
        assert np.allclose(result.centroids[0], FOUR_BLOBS.mean(axis=0))
        assert set(result.assignment) == {0}

    def test_k_equals_n_puts_every_point_alone(self):
        pts = np.array([[0.0], [1.0], [5.0], [9.0]])
        result = kmeans(pts, 4, seed=0)
        assert sorted(result.assignment) == [0, 1, 2, 3]
        assert result.wcss_history[-1] == 0.0

    def test_recovers_separated_blobs(self):
        result = kmeans(FOUR_BLOBS, 4, seed=5, restarts=5)
        sizes = sorted(np.bincount(result.assignment, minlength=4))
        assert sizes == [50, 50, 50, 50]

    def test_wcss_history_is_monotone_nonincreasing(self):
        result = kmeans(FOUR_BLOBS, 3, seed=9)
        hist = result.wcss_history
        assert all(a >= b for a, b in zip(hist, hist[1:]))

    def test_restarts_never_hurt(self):
        for seed in range(5):
            single = kmeans(FOUR_BLOBS, 4, seed=seed).wcss_history[-1]
            multi = kmeans(FOUR_BLOBS, 4, seed=seed, restarts=5).wcss_history[-1]
            assert multi <= single + 1e-9

    def test_duplicate_points_collapse_without_crashing(self):
        pts = np.array([[1.0, 1.0]] * 6 + [[5.0, 5.0]] * 6)
        result = kmeans(pts, 2, seed=1)
        assert wcss(pts, result.assignment, result.centroids) == 0.0

    def test_validation(self):
        pts = np.array([[0.0], [1.0]])
        with pytest.raises(InvalidInputError):
            kmeans(pts, 0, seed=0)
        with pytest.raises(InvalidInputError):
            kmeans(pts, 3, seed=0)
        with pytest.raises(InvalidInputError):
            kmeans(np.empty((0, 2)), 1, seed=0)
        with pytest.raises(InvalidInputError):
            kmeans(pts, 1, seed=0, restarts=0)


class TestKneePoint:
    def test_sharp_elbow(self):
        assert knee_point([100.0, 50.0, 10.0, 9.0, 8.0]) == 3

    def test_perpendicular_distance_oracle(self):
        curve = [90.0, 40.0, 15.0, 12.0, 10.0, 9.5]
        x = np.arange(1, len(curve) + 1, dtype=float)
        y = np.asarray(curve)
        p1 = np.array([x[0], y[0]])
        p2 = np.array([x[-1], y[-1]])
        chord = p2 - p1
        rel_x, rel_y = x - p1[0], y - p1[1]
        dists = np.abs(rel_x * chord[1] - rel_y * chord[0]) / np.hypot(*chord)
        assert knee_point(curve) == int(dists.argmax()) + 1

    def test_tie_goes_to_smaller_k(self):
        # straight line: every point is on the chord, distance 0 everywhere
        assert knee_point([30.0, 20.0, 10.0]) == 1

    def test_short_curves(self):
        assert knee_point([5.0]) == 1
        assert knee_point([5.0, 1.0]) == 1
        with pytest.raises(InvalidInputError):
            knee_point([])


class TestElbowK:
    def test_finds_four_blobs(self):
        assert elbow_k(FOUR_BLOBS, k_max=10, seed=0) == 4

    def test_single_or_few_points_short_circuit(self):
        assert elbow_k(np.array([[1.0]]), k_max=10, seed=0) == 1
        assert elbow_k(np.empty((0, 3)), k_max=5, seed=0) == 1

    def test_k_max_validation(self):
        pts = np.array([[0.0], [1.0], [2.0]])
        with pytest.raises(InvalidInputError):
            elbow_k(pts, k_max=1, seed=0)
        with pytest.raises(InvalidInputError):
            elbow_k(pts, k_max=4, seed=0)

    def test_deterministic(self):
        assert elbow_k(FOUR_BLOBS, 8, seed=123) == elbow_k(FOUR_BLOBS, 8, seed=123)
