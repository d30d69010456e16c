"""Seeded k-means (k-means++ init, Lloyd iteration) and elbow-based k selection."""

from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError

MAX_ITERATIONS = 300


class KMeansResult(NamedTuple):
    assignment: np.ndarray  # (n,) cluster index per point
    centroids: np.ndarray  # (k, dim)
    wcss_history: tuple  # WCSS after each Lloyd iteration of the winning restart


def wcss(points, assignment, centroids):
    """Within-cluster sum of squares: total squared distance to assigned centroids."""
    pts = np.asarray(points, dtype=float)
    cents = np.asarray(centroids, dtype=float)
    assignment = np.asarray(assignment)
    if len(assignment) != len(pts):
        raise InvalidInputError("one assignment per point required")
    return float(((pts - cents[assignment]) ** 2).sum())


def _kmeans_pp_init(pts, k, rng):
    n = len(pts)
    centroids = np.empty((k, pts.shape[1]))
    centroids[0] = pts[rng.integers(n)]
    d2 = ((pts - centroids[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total > 0.0:
            probs = d2 / total
            choice = rng.choice(n, p=probs)
        else:
            choice = rng.integers(n)
        centroids[i] = pts[choice]
        d2 = np.minimum(d2, ((pts - centroids[i]) ** 2).sum(axis=1))
    return centroids


def _assign(pts, centroids):
    dists = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return dists.argmin(axis=1)


def _lloyd(pts, centroids, max_iterations=MAX_ITERATIONS):
    """One Lloyd run from the given start centroids.

    Stops when assignments stop changing or after max_iterations. An empty
    cluster is re-seeded to the point farthest from its currently assigned
    centroid, then assignments are recomputed.
    """
    k = len(centroids)
    centroids = centroids.copy()
    assignment = None
    history = []
    for _ in range(max_iterations):
        new_assignment = _assign(pts, centroids)
        for c in range(k):
            members = pts[new_assignment == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
            else:
                worst = ((pts - centroids[new_assignment]) ** 2).sum(axis=1).argmax()
                centroids[c] = pts[worst]
                new_assignment = _assign(pts, centroids)
        history.append(wcss(pts, new_assignment, centroids))
        if assignment is not None and np.array_equal(assignment, new_assignment):
            break
        assignment = new_assignment
    return assignment, centroids, tuple(history)


def kmeans(points, k, seed, restarts=1):
    """Cluster points into k groups, deterministically for a given seed.

    restarts > 1 runs that many independently seeded k-means++ starts and
    keeps the lowest-WCSS result (restart seeds derive from the master
    seed, so the whole call stays deterministic).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise InvalidInputError("points must be a non-empty 2-D array")
    n = len(pts)
    if not 1 <= k <= n:
        raise InvalidInputError(f"k must be in 1..{n}, got {k}")
    if restarts < 1:
        raise InvalidInputError(f"restarts must be >= 1, got {restarts}")

    master = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        rng = np.random.default_rng(master.integers(2**63))
        assignment, centroids, history = _lloyd(pts, _kmeans_pp_init(pts, k, rng))
        if best is None or history[-1] < best.wcss_history[-1]:
            best = KMeansResult(assignment, centroids, history)
    return best


def knee_point(wcss_values):
    """Index of the curve knee: 1-based k with maximum perpendicular
    distance to the chord from the first to the last curve point.

    Ties resolve to the smaller k. The x axis is the cluster count
    1..len(wcss_values) with unit spacing.
    """
    ws = [float(w) for w in wcss_values]
    if not ws:
        raise InvalidInputError("empty WCSS curve")
    if len(ws) == 1:
        return 1
    x1, y1 = 1.0, ws[0]
    x2, y2 = float(len(ws)), ws[-1]
    denom = np.hypot(x2 - x1, y2 - y1)
    best_k, best_dist = 1, -1.0
    for i, w in enumerate(ws):
        x = float(i + 1)
        dist = abs((y2 - y1) * x - (x2 - x1) * w + x2 * y1 - y2 * x1) / denom
        if dist > best_dist:
            best_dist, best_k = dist, i + 1
    return best_k


def elbow_k(points, k_max, seed, restarts=5):
    """Pick a cluster count by the knee of the WCSS-versus-k curve.

    Runs kmeans for every k in 1..k_max (each k seeded identically) and
    returns the knee of the curve. Fewer than 2 points short-circuit to 1.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise InvalidInputError("points must be a 2-D array")
    if len(pts) < 2:
        return 1
    if not 2 <= k_max <= len(pts):
        raise InvalidInputError(f"k_max must be in 2..{len(pts)}, got {k_max}")
    curve = [
        kmeans(pts, k, seed, restarts=restarts).wcss_history[-1] for k in range(1, k_max + 1)
    ]
    return knee_point(curve)
