import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fuzzyloc.data import Dataset, Normalization
from fuzzyloc.errors import DataError, InvalidInputError
from fuzzyloc.fuzzy import SimilarityParams, TriangularFuzzySet, aggregate, singleton
from fuzzyloc.inference import discretize, predict, predict_batch, predict_fuzzy
from fuzzyloc.rulebase import PER_CLASS, Rule, RuleBase, extract_rules

from conftest import identity_normalized, random_rulebase


def onedim_rulebase(rule_specs, universe=(1, 10)):
    """Rule base over a single identity-normalized feature "x".

    rule_specs: list of (triangle vertices, consequent).
    """
    return RuleBase(
        rules=tuple(
            Rule(
                antecedents=(TriangularFuzzySet(*vertices),),
                consequent=consequent,
                support_count=1,
            )
            for vertices, consequent in rule_specs
        ),
        params=SimilarityParams(),
        feature_names=("x",),
        normalization=Normalization(mins=(0.0,), maxs=(1.0,)),
        selected_features=(0,),
        label_universe=tuple(range(universe[0], universe[1] + 1)),
        consequent_strategy=PER_CLASS,
        seed=0,
    )


class TestDiscretize:
    def test_nearest_member(self):
        assert discretize(4.9, (1, 2, 3, 4, 5)) == 5
        assert discretize(1.2, (1, 2, 3)) == 1

    def test_midpoint_goes_to_smaller_label(self):
        assert discretize(4.5, tuple(range(1, 11))) == 4
        assert discretize(1.5, (1, 2)) == 1

    def test_exact_member_is_returned_unchanged(self):
        for label in (1, 5, 10):
            assert discretize(float(label), tuple(range(1, 11))) == label

    def test_output_clips_to_universe_edges(self):
        assert discretize(-3.0, (1, 2, 3)) == 1
        assert discretize(99.0, (1, 2, 3)) == 3

    def test_empty_universe(self):
        with pytest.raises(InvalidInputError):
            discretize(1.0, ())


class TestPredict:
    def test_dominant_rule_wins(self):
        rb = onedim_rulebase([((0.1, 0.2, 0.3), 2.0), ((7.0, 7.5, 8.0), 9.0)])
        p = predict(rb, [0.2])
        assert p.label == 2
        assert not p.fallback_used
        assert p.gamma == pytest.approx(2.0, abs=1e-9)

    def test_equal_pull_lands_between_consequents(self):
        # unseen label 5 emerges although no rule carries it
        rb = onedim_rulebase([((0.4, 0.4, 0.4), 4.0), ((0.6, 0.6, 0.6), 6.0)])
        p = predict(rb, [0.5])
        assert p.gamma == pytest.approx(5.0, rel=1e-12)
        assert p.label == 5
        assert p.total_firing > 0

    def test_fallback_picks_nearest_rule_by_representative(self):
        rb = onedim_rulebase([((0.3, 0.4, 0.5), 4.0), ((0.5, 0.6, 0.7), 6.0)])
        p = predict(rb, [100.0])
        assert p.fallback_used
        assert p.total_firing == 0.0
        assert p.gamma == 6.0
        assert p.label == 6

    def test_gamma_stays_between_consequents_without_fallback(self):
        rng = np.random.default_rng(99)
        for _ in range(300):
            rb = random_rulebase(rng)
            raw = [
                rng.uniform(lo, hi if hi > lo else lo + 1.0)
                for lo, hi in zip(rb.normalization.mins, rb.normalization.maxs)
            ]
            p = predict(rb, raw)
            assert p.label in rb.label_universe
            if not p.fallback_used:
                consequents = [r.consequent for r in rb.rules]
                assert min(consequents) - 1e-9 <= p.gamma <= max(consequents) + 1e-9

    def test_deterministic(self):
        rb = onedim_rulebase([((0.1, 0.2, 0.3), 2.0), ((0.6, 0.7, 0.8), 8.0)])
        assert predict(rb, [0.33]) == predict(rb, [0.33])

    def test_normalization_is_applied_to_raw_inputs(self):
        rb = RuleBase(
            rules=(
                Rule(antecedents=(singleton(0.0),), consequent=1.0, support_count=1),
                Rule(antecedents=(singleton(1.0),), consequent=3.0, support_count=1),
            ),
            params=SimilarityParams(),
            feature_names=("rssi",),
            normalization=Normalization(mins=(-80.0,), maxs=(-20.0,)),
            selected_features=(0,),
            label_universe=(1, 2, 3),
            consequent_strategy=PER_CLASS,
            seed=0,
        )
        assert predict(rb, [-80.0]).label == 1
        assert predict(rb, [-20.0]).label == 3
        assert predict(rb, [-50.0]).label == 2  # halfway between the cores

    def test_arity_mismatch(self):
        rb = onedim_rulebase([((0.1, 0.2, 0.3), 2.0)])
        with pytest.raises(InvalidInputError):
            predict(rb, [0.1, 0.2])

    def test_non_finite_input(self):
        rb = onedim_rulebase([((0.1, 0.2, 0.3), 2.0)])
        for bad in (math.inf, math.nan):
            with pytest.raises(InvalidInputError):
                predict(rb, [bad])


class TestPredictFuzzy:
    def test_singleton_observation_matches_crisp_entry_point(self):
        rb = onedim_rulebase([((0.1, 0.2, 0.3), 2.0), ((0.6, 0.7, 0.8), 8.0)])
        assert predict_fuzzy(rb, [singleton(0.42)]) == predict(rb, [0.42])

    def test_triangular_observation_is_normalized_vertex_wise(self):
        rb = RuleBase(
            rules=(Rule(antecedents=(singleton(0.5),), consequent=2.0, support_count=1),),
            params=SimilarityParams(),
            feature_names=("rssi",),
            normalization=Normalization(mins=(0.0,), maxs=(10.0,)),
            selected_features=(0,),
            label_universe=(1, 2, 3),
            consequent_strategy=PER_CLASS,
            seed=0,
        )
        wide = predict_fuzzy(rb, [TriangularFuzzySet(4.0, 5.0, 6.0)])
        exact = predict_fuzzy(rb, [singleton(5.0)])
        assert wide.label == exact.label == 2
        assert wide.total_firing < exact.total_firing  # vertex spread costs similarity


class TestMonotoneDominance:
    @given(
        firings=st.lists(
            st.floats(min_value=0.01, max_value=1.0), min_size=2, max_size=8
        ),
        consequents=st.lists(
            st.floats(min_value=-50, max_value=50), min_size=8, max_size=8
        ),
        index=st.integers(min_value=0, max_value=7),
        boost=st.floats(min_value=1.1, max_value=100.0),
    )
    def test_boosting_a_rule_pulls_output_toward_it(self, firings, consequents, index, boost):
        consequents = consequents[: len(firings)]
        index %= len(firings)
        before = aggregate(firings, consequents)
        boosted = list(firings)
        boosted[index] *= boost
        after = aggregate(boosted, consequents)
        target = consequents[index]
        assert abs(after - target) <= abs(before - target) + 1e-9


class TestPredictBatch:
    def cores_setup(self):
        features = [
            [0.00, 0.05],
            [0.10, 0.00],
            [0.05, 0.10],
            [0.45, 0.50],
            [0.55, 0.45],
            [0.50, 0.55],
            [0.90, 0.95],
            [1.00, 0.90],
            [0.95, 1.00],
        ]
        labels = [1, 1, 1, 5, 5, 5, 9, 9, 9]
        train = identity_normalized(features, labels)
        # steep distance decay so each core is dominated by its own rule
        rb = extract_rules(train, k_max=1, seed=0, params=SimilarityParams(h=50.0, omega=5.0))
        cores = [[a.a2 for a in rule.antecedents] for rule in rb.rules]
        truth = [int(rule.consequent) for rule in rb.rules]
        return rb, Dataset(features=cores, labels=truth, feature_names=train.feature_names)

    def test_rule_cores_predict_their_own_class(self):
        rb, cores = self.cores_setup()
        result = predict_batch(rb, cores)
        assert result.accuracy == 1.0
        assert result.n_correct == result.n_instances == 3
        assert result.fallback_count == 0

    def test_confusion_matrix_counts_each_instance_once(self):
        rb, cores = self.cores_setup()
        result = predict_batch(rb, cores)
        assert sum(map(sum, result.confusion)) == result.n_instances
        position = {label: i for i, label in enumerate(result.label_universe)}
        for truth, pred in zip(result.truths, result.predictions):
            assert result.confusion[position[truth]][position[pred.label]] >= 1

    def test_empty_dataset_reports_no_instances(self):
        rb, cores = self.cores_setup()
        empty = Dataset(
            features=np.empty((0, 2)), labels=np.empty(0, dtype=int),
            feature_names=cores.feature_names,
        )
        result = predict_batch(rb, empty)
        assert result.no_instances
        assert result.n_instances == 0
        assert math.isnan(result.accuracy)
        assert math.isnan(result.mean_abs_error)
        assert sum(map(sum, result.confusion)) == 0

    def test_truth_outside_universe_is_a_data_error(self):
        rb, cores = self.cores_setup()
        stray = Dataset(
            features=[[0.0, 0.0]], labels=[77], feature_names=cores.feature_names
        )
        with pytest.raises(DataError, match="77"):
            predict_batch(rb, stray)

    def test_feature_name_mismatch_is_rejected(self):
        rb, cores = self.cores_setup()
        renamed = Dataset(
            features=cores.features, labels=cores.labels, feature_names=("a", "b")
        )
        with pytest.raises(InvalidInputError):
            predict_batch(rb, renamed)

    def test_per_instance_errors_carry_the_index(self):
        rb, cores = self.cores_setup()
        poisoned = Dataset(
            features=[[0.0, 0.0], [math.inf, 0.0]],
            labels=[1, 1],
            feature_names=cores.feature_names,
        )
        with pytest.raises(InvalidInputError, match="instance 1"):
            predict_batch(rb, poisoned)

    def test_mean_abs_error_matches_manual_recomputation(self):
        rb, cores = self.cores_setup()
        result = predict_batch(rb, cores)
        manual = sum(
            abs(p.gamma - t) for t, p in zip(result.truths, result.predictions)
        ) / result.n_instances
        assert result.mean_abs_error == manual
