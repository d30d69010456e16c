"""Triangular fuzzy sets and the matching machinery built on them.

A set is a triple (a1, a2, a3) with a1 <= a2 <= a3: the support ends and
the normal point. Matching of two sets combines a vertex-wise shape term
with a sigmoid discount on the distance between the set centers, so sets
that do not overlap at all still match to a positive degree. That is what
lets a sparse rule base produce output for observations falling between
rules.

All functions here are pure; the dataclasses are immutable.
"""

import math
from dataclasses import dataclass

from .errors import InvalidInputError, ZeroFiringError


@dataclass(frozen=True)
class TriangularFuzzySet:
    """Normal, convex triangular fuzzy set on the real line.

    a1 and a3 bound the support, a2 is the normal point. The degenerate
    triple a1 == a2 == a3 encodes a crisp value (a singleton).
    """

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for v in (self.a1, self.a2, self.a3):
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise InvalidInputError(f"non-finite fuzzy set vertex: {v!r}")
        if not (self.a1 <= self.a2 <= self.a3):
            raise InvalidInputError(
                "fuzzy set vertices must satisfy a1 <= a2 <= a3, got "
                f"({self.a1}, {self.a2}, {self.a3})"
            )


@dataclass(frozen=True)
class SimilarityParams:
    """Parameters of the distance discount.

    h scales how fast similarity decays with distance (must be positive;
    larger h means faster decay), omega shifts the sigmoid so that two
    coincident sets score close to 1 rather than 0.5.
    """

    h: float = 5.0
    omega: float = 5.0

    def __post_init__(self):
        if not (isinstance(self.h, (int, float)) and math.isfinite(self.h) and self.h > 0):
            raise InvalidInputError(f"sensitivity factor h must be finite and > 0, got {self.h!r}")
        if not (isinstance(self.omega, (int, float)) and math.isfinite(self.omega)):
            raise InvalidInputError(f"offset omega must be finite, got {self.omega!r}")


def singleton(v):
    """Fuzzify a crisp value as the degenerate set (v, v, v)."""
    if not (isinstance(v, (int, float)) and math.isfinite(v)):
        raise InvalidInputError(f"cannot fuzzify non-finite value {v!r}")
    v = float(v)
    return TriangularFuzzySet(v, v, v)


def representative(s):
    """Crisp representative of a set: the mean of its three vertices."""
    return (s.a1 + s.a2 + s.a3) / 3.0


def distance_factor(d, params):
    """Sigmoid discount for the distance d between two sets.

    Returns a value in (0, 1), strictly decreasing in d. Evaluated as
    1 / (1 + exp(h*d - omega)), which stays monotone in floating point
    far into the tail.
    """
    if not (isinstance(d, (int, float)) and math.isfinite(d)) or d < 0:
        raise InvalidInputError(f"distance must be finite and >= 0, got {d!r}")
    x = params.h * d - params.omega
    if x > 745.0:
        # exp overflows here; the true value already underflows to 0
        return 0.0
    return 1.0 / (1.0 + math.exp(x))


def similarity(a, b, params):
    """Matching degree of two triangular sets, in [0, 1].

    The shape term 1 - (sum of vertex gaps)/3 is clipped at 0 so inputs
    slightly outside the normalized training range cannot push the result
    negative; it is then discounted by distance_factor of the gap between
    the set representatives. Symmetric in its two set arguments, and equal
    to distance_factor(0, params) when the sets coincide.
    """
    shape = 1.0 - (abs(a.a1 - b.a1) + abs(a.a2 - b.a2) + abs(a.a3 - b.a3)) / 3.0
    if shape <= 0.0:
        return 0.0
    d = abs(representative(a) - representative(b))
    s = shape * distance_factor(d, params)
    return min(1.0, max(0.0, s))


def firing_degree(per_dim_similarities):
    """Rule activation: minimum matching degree across input dimensions."""
    sims = list(per_dim_similarities)
    if not sims:
        raise InvalidInputError("firing degree of an empty similarity vector")
    return min(sims)


def aggregate(firings, consequents):
    """Firing-weighted mean of the rule consequents.

    Raises ZeroFiringError when no rule fired (total weight zero); callers
    that can fall back to a nearest rule handle that case themselves.
    """
    firings = list(firings)
    consequents = list(consequents)
    if not firings or len(firings) != len(consequents):
        raise InvalidInputError(
            f"need equal-length non-empty firing/consequent vectors, got "
            f"{len(firings)} and {len(consequents)}"
        )
    total = sum(firings)
    if total <= 0.0:
        raise ZeroFiringError("total firing degree is zero")
    return sum(t * g for t, g in zip(firings, consequents)) / total
