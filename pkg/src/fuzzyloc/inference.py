"""Prediction over a sparse rule base.

An observation is matched against every rule by per-dimension similarity,
fired through a min t-norm, and the rule consequents are blended into a
continuous output that is then snapped to the nearest label in the
universe. Because the blend can land between consequents, labels missing
from every rule are still reachable.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .data import Dataset
from .errors import DataError, InvalidInputError
from .fuzzy import (
    TriangularFuzzySet,
    aggregate,
    representative,
    similarity,
    singleton,
)


@dataclass(frozen=True)
class Prediction:
    """One inference outcome.

    gamma is the continuous output in label units, label its nearest
    member of the rule base's label universe. When no rule fires at all
    (possible for far out-of-range inputs), fallback_used is True and
    gamma is the consequent of the nearest rule by representative
    distance; total_firing is 0 in that case.
    """

    gamma: float
    label: int
    total_firing: float
    fallback_used: bool
    per_rule_firings: Optional[tuple] = None


def discretize(gamma, label_universe):
    """Nearest label in the universe; exact midpoints go to the smaller label."""
    if not label_universe:
        raise InvalidInputError("label universe is empty")
    return int(min(label_universe, key=lambda u: (abs(gamma - u), u)))


def _normalize_set(s, feature_index, normalization):
    # min-max is monotone, so normalizing each vertex keeps a1 <= a2 <= a3
    return TriangularFuzzySet(
        normalization.apply_value(s.a1, feature_index),
        normalization.apply_value(s.a2, feature_index),
        normalization.apply_value(s.a3, feature_index),
    )


def predict_fuzzy(rb, observation_sets):
    """Predict from one triangular fuzzy set per original feature (raw units)."""
    observation_sets = tuple(observation_sets)
    if len(observation_sets) != len(rb.feature_names):
        raise InvalidInputError(
            f"observation has {len(observation_sets)} features, "
            f"rule base expects {len(rb.feature_names)}"
        )
    projected = tuple(
        _normalize_set(observation_sets[j], j, rb.normalization) for j in rb.selected_features
    )

    firings = []
    for rule in rb.rules:
        firings.append(
            min(
                similarity(obs, ant, rb.params)
                for obs, ant in zip(projected, rule.antecedents)
            )
        )

    total = sum(firings)
    if total > 0.0:
        gamma = aggregate(firings, [rule.consequent for rule in rb.rules])
        fallback_used = False
    else:
        # nothing fired; take the consequent of the closest rule instead
        # of dividing by zero
        obs_rep = [representative(s) for s in projected]
        nearest = min(
            range(rb.n_rules),
            key=lambda i: math.dist(
                obs_rep, [representative(a) for a in rb.rules[i].antecedents]
            ),
        )
        gamma = rb.rules[nearest].consequent
        fallback_used = True

    return Prediction(
        gamma=float(gamma),
        label=discretize(gamma, rb.label_universe),
        total_firing=float(total),
        fallback_used=fallback_used,
        per_rule_firings=tuple(firings),
    )


def predict(rb, raw_features):
    """Predict from one crisp feature vector in raw (pre-normalization) units."""
    values = [float(v) for v in raw_features]
    if len(values) != len(rb.feature_names):
        raise InvalidInputError(
            f"observation has {len(values)} features, "
            f"rule base expects {len(rb.feature_names)}"
        )
    for j, v in enumerate(values):
        if not math.isfinite(v):
            raise InvalidInputError(f"feature {rb.feature_names[j]!r} is not finite: {v}")
    return predict_fuzzy(rb, [singleton(v) for v in values])


@dataclass(frozen=True)
class BatchEvaluation:
    """Predictions for a labeled dataset plus summary statistics.

    accuracy is the correct fraction (NaN when the dataset is empty, see
    no_instances); confusion is indexed [truth][predicted] over the rule
    base's label universe; mean_abs_error averages |gamma - truth|.
    """

    truths: tuple
    predictions: tuple
    label_universe: tuple
    accuracy: float
    confusion: tuple
    mean_abs_error: float
    fallback_count: int

    @property
    def n_instances(self):
        return len(self.predictions)

    @property
    def n_correct(self):
        return sum(1 for t, p in zip(self.truths, self.predictions) if p.label == t)

    @property
    def no_instances(self):
        return self.n_instances == 0


def predict_batch(rb, dataset: Dataset):
    """Run predict over every row of a raw labeled dataset.

    The dataset must carry the rule base's original feature columns (in
    order) in raw units; every truth label must belong to the rule base's
    label universe so the confusion matrix can count it.
    """
    if dataset.feature_names != rb.feature_names:
        raise InvalidInputError(
            f"dataset columns {dataset.feature_names} do not match "
            f"rule base features {rb.feature_names}"
        )

    universe = rb.label_universe
    position = {label: i for i, label in enumerate(universe)}
    confusion = [[0] * len(universe) for _ in universe]

    truths = []
    predictions = []
    for i in range(dataset.n_instances):
        truth = int(dataset.labels[i])
        if truth not in position:
            raise DataError(
                f"instance {i}: truth label {truth} is outside the label universe"
            )
        try:
            pred = predict(rb, dataset.features[i])
        except (InvalidInputError, DataError) as exc:
            raise type(exc)(f"instance {i}: {exc}") from exc
        truths.append(truth)
        predictions.append(pred)
        confusion[position[truth]][position[pred.label]] += 1

    n = len(predictions)
    if n:
        accuracy = sum(1 for t, p in zip(truths, predictions) if p.label == t) / n
        mean_abs_error = sum(abs(p.gamma - t) for t, p in zip(truths, predictions)) / n
    else:
        accuracy = float("nan")
        mean_abs_error = float("nan")

    return BatchEvaluation(
        truths=tuple(truths),
        predictions=tuple(predictions),
        label_universe=universe,
        accuracy=accuracy,
        confusion=tuple(tuple(row) for row in confusion),
        mean_abs_error=mean_abs_error,
        fallback_count=sum(1 for p in predictions if p.fallback_used),
    )
