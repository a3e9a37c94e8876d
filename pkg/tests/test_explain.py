"""Argument selection: decisive terms, weight swaps, model arguments."""

import numpy as np
import pytest

from oracles import any_inverting_permutation, tradeoff_oracle
from reptrace import fixture
from reptrace.core import (
    ComponentTrust,
    Preferences,
    Rating,
    ReputationType,
    build_assessment,
)
from reptrace.errors import (
    AmbiguousOrderError,
    MissingDiagnosticsError,
    NotDominantError,
    NotPreferredError,
)
from reptrace.explain import (
    ComparisonContext,
    DecisiveDominance,
    DecisiveTradeoff,
    FireDiagnostics,
    FireRecencyGlobal,
    FireRecencyLocal,
    Model,
    TravosDiagnostics,
    TravosLowConfidence,
    TypePermutation,
    decisive_terms_dominance,
    decisive_terms_tradeoff,
    dominates,
    explain,
    fire_recency_global,
    fire_recency_local,
    invert_permutation,
    travos_low_confidence,
)
from reptrace.fire import FireConfig, assess_provider as assess_fire
from reptrace.store import RatingStore
from reptrace.travos import TravosTermDiagnostics

I = ReputationType.INTERACTION
W = ReputationType.WITNESS


def context_from_values(
    preferred_values, other_values, term_weights, component_weights=None
):
    """Build a two-provider context from injected component trusts.

    Values are {term: {rep_type: (value, weight)}} or {term: value} for a
    single-interaction-component shorthand.
    """
    component_weights = component_weights or {I: 1.0}
    prefs = Preferences(term_weights=term_weights, component_weights=component_weights)

    def to_assessment(target, values):
        comps = {}
        for term, spec in values.items():
            if isinstance(spec, dict):
                comps[term] = [
                    ComponentTrust(k, v, weight=w) for k, (v, w) in spec.items()
                ]
            else:
                comps[term] = [ComponentTrust(I, spec, weight=1.0)]
        return build_assessment("a", target, comps, prefs)

    return ComparisonContext(
        assessor="a",
        preferred=to_assessment("b", preferred_values),
        other=to_assessment("b2", other_values),
        preferences=prefs,
    )


class TestDominates:
    def test_running_example_pairs(self):
        assert dominates(fixture.comparison("B", "C"))
        assert not dominates(fixture.comparison("B", "D"))

    def test_identical_term_trusts(self):
        ctx = context_from_values({"q": 0.5}, {"q": 0.5}, {"q": 1.0})
        assert not dominates(ctx)

    def test_ties_allowed(self):
        ctx = context_from_values(
            {"q": 0.5, "t": 0.7}, {"q": 0.5, "t": 0.6}, {"q": 0.5, "t": 0.5}
        )
        assert dominates(ctx)


class TestDominance:
    def test_running_example(self):
        arg = decisive_terms_dominance(fixture.comparison("B", "C"))
        assert arg.pros == ("quality", "timeliness")
        assert arg.reference == pytest.approx(0.139, abs=0.001)
        assert arg.weighted_differences["quality"] == pytest.approx(0.28125, abs=1e-9)
        assert arg.weighted_differences["timeliness"] == pytest.approx(0.14, abs=1e-9)
        assert arg.weighted_differences["cost"] == pytest.approx(0.045, abs=1e-9)

    def test_not_dominant_rejected(self):
        with pytest.raises(NotDominantError):
            decisive_terms_dominance(fixture.comparison("B", "D"))

    def test_single_term(self):
        ctx = context_from_values({"q": 0.9}, {"q": 0.1}, {"q": 1.0})
        arg = decisive_terms_dominance(ctx)
        assert arg.pros == ("q",)

    def test_fallback_when_everything_is_average(self):
        # Equal weights and equal differences: nothing exceeds the
        # reference strictly, the largest (first declared) term wins.
        ctx = context_from_values(
            {"q": 0.6, "t": 0.6}, {"q": 0.4, "t": 0.4}, {"q": 0.5, "t": 0.5}
        )
        arg = decisive_terms_dominance(ctx)
        assert arg.pros == ("q",)

    def test_delta_scale_invariance(self):
        # Scaling every difference by a constant keeps the selection.
        base = context_from_values(
            {"q": 0.8, "t": 0.55, "c": 0.52}, {"q": 0.4, "t": 0.5, "c": 0.5},
            {"q": 0.2, "t": 0.5, "c": 0.3},
        )
        shrunk = context_from_values(
            {"q": 0.6, "t": 0.525, "c": 0.51}, {"q": 0.4, "t": 0.5, "c": 0.5},
            {"q": 0.2, "t": 0.5, "c": 0.3},
        )
        assert decisive_terms_dominance(base).pros == decisive_terms_dominance(shrunk).pros


class TestTradeoff:
    def test_running_example(self):
        arg = decisive_terms_tradeoff(fixture.comparison("B", "D"))
        assert arg.pros == ("quality",)
        assert arg.cons == ()

    def test_single_insufficient_pro_pulls_in_second(self):
        # Two pros (0.05, 0.04) against one con (0.08): no single pro
        # covers the con, and mentioning the con would leave nothing to
        # outweigh, so both pros are needed with no cons mentioned.
        ctx = context_from_values(
            {"p1": 0.55, "p2": 0.54, "c1": 0.42},
            {"p1": 0.50, "p2": 0.50, "c1": 0.50},
            {"p1": 1.0, "p2": 1.0, "c1": 1.0},
        )
        arg = decisive_terms_tradeoff(ctx)
        oracle = tradeoff_oracle(
            ["p1", "p2"],
            ["c1"],
            arg.weighted_differences,
            ["p1", "p2", "c1"],
        )
        assert (arg.pros, arg.cons) == oracle
        assert arg.pros == ("p1", "p2")
        assert arg.cons == ()

    def test_sum_condition_holds(self):
        arg = decisive_terms_tradeoff(fixture.comparison("B", "E"))
        ctx = fixture.comparison("B", "E")
        unmentioned = [
            t
            for t in fixture.TERMS
            if ctx.preferred.term_trust(t) < ctx.other.term_trust(t)
            and t not in arg.cons
        ]
        pro_sum = sum(arg.weighted_differences[t] for t in arg.pros)
        con_sum = sum(arg.weighted_differences[t] for t in unmentioned)
        assert pro_sum > con_sum

    def test_matches_oracle_on_random_instances(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            terms = [f"t{i}" for i in range(n)]
            weights = {t: float(rng.uniform(0.05, 1.0)) for t in terms}
            pref = {t: float(rng.uniform(0, 1)) for t in terms}
            other = {t: float(rng.uniform(0, 1)) for t in terms}
            ctx = context_from_values(pref, other, weights)
            po, oo = ctx.preferred.overall, ctx.other.overall
            if po is None or oo is None or po <= oo or dominates(ctx):
                continue
            arg = decisive_terms_tradeoff(ctx)
            pros_pool = [t for t in terms if pref[t] > other[t]]
            cons_pool = [t for t in terms if pref[t] < other[t]]
            oracle = tradeoff_oracle(
                pros_pool, cons_pool, arg.weighted_differences, terms
            )
            assert (arg.pros, arg.cons) == oracle


class TestInvertPermutation:
    def test_running_example_swap(self):
        ctx = fixture.comparison("B", "E")
        arg = invert_permutation(ctx, "timeliness")
        assert arg is not None
        assert arg.swaps == ((I, W),)
        assert arg.preferred_swapped == pytest.approx(0.6625, abs=0.005)
        assert arg.other_swapped == pytest.approx(0.80, abs=0.005)
        assert arg.preferred_original == pytest.approx(0.5875, abs=1e-9)
        assert arg.other_original == pytest.approx(0.40, abs=1e-9)

    def test_equal_weights_cannot_invert(self):
        ctx = context_from_values(
            {"q": {I: (0.9, 0.5), W: (0.2, 0.5)}},
            {"q": {I: (0.3, 0.5), W: (0.6, 0.5)}},
            {"q": 1.0},
            {I: 0.5, W: 0.5},
        )
        assert invert_permutation(ctx, "q") is None

    def test_component_domination_skipped(self):
        # B beats E on both quality components; stating the term suffices.
        ctx = fixture.comparison("B", "E")
        assert invert_permutation(ctx, "quality") is None

    def test_single_shared_component(self):
        ctx = context_from_values({"q": 0.9}, {"q": 0.2}, {"q": 1.0})
        assert invert_permutation(ctx, "q") is None

    def test_random_instances_agree_with_oracle(self):
        rng = np.random.default_rng(11)
        emitted = skipped = 0
        for _ in range(200):
            n_types = int(rng.integers(2, 5))
            types = list(ReputationType)[:n_types]
            weights = {k: float(rng.uniform(0.05, 1.0)) for k in types}
            pref_vals = {k: float(rng.uniform(0, 1)) for k in types}
            other_vals = {k: float(rng.uniform(0, 1)) for k in types}
            ctx = context_from_values(
                {"q": {k: (pref_vals[k], weights[k]) for k in types}},
                {"q": {k: (other_vals[k], weights[k]) for k in types}},
                {"q": 1.0},
                weights,
            )
            if ctx.preferred.term_trust("q") <= ctx.other.term_trust("q"):
                continue
            arg = invert_permutation(ctx, "q")
            names = {k: k.value for k in types}
            possible = any_inverting_permutation(
                {names[k]: pref_vals[k] for k in types},
                {names[k]: other_vals[k] for k in types},
                {names[k]: weights[k] for k in types},
                {names[k]: weights[k] for k in types},
            )
            dominated = all(
                pref_vals[k] >= other_vals[k] for k in types
            ) and any(pref_vals[k] > other_vals[k] for k in types)
            if arg is None:
                skipped += 1
                # Absence must mean no permutation can invert, except the
                # explicit component-domination skip (where inversion is
                # impossible anyway).
                assert dominated or not possible
                if dominated:
                    assert not possible
            else:
                emitted += 1
                pref_weights = dict(weights)
                other_weights = dict(weights)
                for a, b in arg.swaps:
                    pref_weights[a], pref_weights[b] = pref_weights[b], pref_weights[a]
                    other_weights[a], other_weights[b] = other_weights[b], other_weights[a]

                def mean(values, ws):
                    return sum(ws[k] * values[k] for k in types) / sum(
                        ws[k] for k in types
                    )

                assert mean(pref_vals, pref_weights) < mean(other_vals, other_weights)
        assert emitted > 10 and skipped > 10


def recency_context(b_ratings, b2_ratings, lambda_=1.0, now=5):
    """Run the full FIRE path over two hand-built rating histories."""
    prefs = Preferences(term_weights={"q": 1.0}, component_weights={I: 1.0})
    config = FireConfig(lambda_=lambda_, importance={I: 1.0})
    store = RatingStore()
    for value, ts in b_ratings:
        store.insert(
            Rating("a", "b", "q", I, value=value, raw_value=value, timestamp=ts)
        )
    for value, ts in b2_ratings:
        store.insert(
            Rating("a", "b2", "q", I, value=value, raw_value=value, timestamp=ts)
        )
    fa_b = assess_fire(store, "a", "b", prefs, config, now=now)
    fa_b2 = assess_fire(store, "a", "b2", prefs, config, now=now)
    return ComparisonContext(
        assessor="a",
        preferred=fa_b.assessment,
        other=fa_b2.assessment,
        preferences=prefs,
        model=Model.FIRE,
        fire_diagnostics=FireDiagnostics(
            uniform_preferred=fa_b.uniform, uniform_other=fa_b2.uniform
        ),
    )


class TestFireRecency:
    def test_conflict_emits_global_argument(self):
        ctx = recency_context(
            b_ratings=[(0.2, 0), (0.9, 5)], b2_ratings=[(0.9, 0), (0.3, 5)]
        )
        arg = fire_recency_global(ctx)
        assert arg is not None
        assert arg.preferred_overall > arg.other_overall
        assert arg.uniform_preferred_overall < arg.uniform_other_overall

    def test_same_timestamps_emit_nothing(self):
        # With equal timestamps the uniform and recency orders coincide
        # (and b2 wins both), so explaining b2 over b carries no argument.
        ctx = recency_context(
            b_ratings=[(0.9, 5), (0.3, 5)], b2_ratings=[(0.2, 5), (0.95, 5)]
        )
        flipped = ComparisonContext(
            assessor="a",
            preferred=ctx.other,
            other=ctx.preferred,
            preferences=ctx.preferences,
            model=Model.FIRE,
            fire_diagnostics=FireDiagnostics(
                uniform_preferred=ctx.fire_diagnostics.uniform_other,
                uniform_other=ctx.fire_diagnostics.uniform_preferred,
            ),
        )
        assert fire_recency_global(flipped) is None

    def test_agreeing_orders_emit_nothing(self):
        ctx = recency_context(
            b_ratings=[(0.9, 0), (0.9, 5)], b2_ratings=[(0.2, 0), (0.2, 5)]
        )
        assert fire_recency_global(ctx) is None

    def test_local_argument(self):
        ctx = recency_context(
            b_ratings=[(0.2, 0), (0.9, 5)], b2_ratings=[(0.9, 0), (0.3, 5)]
        )
        arg = fire_recency_local(ctx, "q", I)
        assert arg is not None and arg.rep_type is I
        assert fire_recency_local(ctx, "q", ReputationType.ROLE_BASED) is None

    def test_missing_diagnostics(self):
        ctx = fixture.comparison("B", "C")
        with pytest.raises(MissingDiagnosticsError):
            fire_recency_global(ctx)
        with pytest.raises(MissingDiagnosticsError):
            fire_recency_local(ctx, "quality", I)


def travos_context(conf_b, conf_b2, wit_b, wit_b2, threshold=0.2):
    ctx = fixture.comparison("B", "C")
    diag = TravosDiagnostics(
        threshold=threshold,
        preferred={
            "quality": TravosTermDiagnostics(
                interaction_confidence=conf_b, low_confidence=conf_b < threshold,
                witness_trust=wit_b,
            )
        },
        other={
            "quality": TravosTermDiagnostics(
                interaction_confidence=conf_b2, low_confidence=conf_b2 < threshold,
                witness_trust=wit_b2,
            )
        },
    )
    return ComparisonContext(
        assessor=ctx.assessor,
        preferred=ctx.preferred,
        other=ctx.other,
        preferences=ctx.preferences,
        model=Model.TRAVOS,
        travos_diagnostics=diag,
    )


class TestTravosLowConfidence:
    def test_emitted_when_witnesses_decide(self):
        ctx = travos_context(0.13, 0.13, wit_b=0.8, wit_b2=0.3)
        arg = travos_low_confidence(ctx, "quality")
        assert arg is not None
        assert arg.preferred_witness_trust == 0.8

    def test_confident_assessors_need_no_argument(self):
        ctx = travos_context(0.9, 0.95, wit_b=0.8, wit_b2=0.3)
        assert travos_low_confidence(ctx, "quality") is None

    def test_witnesses_favoring_other_emit_nothing(self):
        ctx = travos_context(0.13, 0.13, wit_b=0.3, wit_b2=0.8)
        assert travos_low_confidence(ctx, "quality") is None

    def test_one_sided_low_confidence_suffices(self):
        ctx = travos_context(0.9, 0.05, wit_b=0.8, wit_b2=0.3)
        assert travos_low_confidence(ctx, "quality") is not None

    def test_missing_diagnostics(self):
        with pytest.raises(MissingDiagnosticsError):
            travos_low_confidence(fixture.comparison("B", "C"), "quality")


class TestExplain:
    def test_domination_example(self):
        explanation = explain(fixture.comparison("B", "C"))
        assert len(explanation.arguments) == 1
        [arg] = explanation.arguments
        assert isinstance(arg, DecisiveDominance)
        assert set(arg.pros) == {"quality", "timeliness"}

    def test_tradeoff_example(self):
        explanation = explain(fixture.comparison("B", "D"))
        assert len(explanation.arguments) == 1
        [arg] = explanation.arguments
        assert isinstance(arg, DecisiveTradeoff)
        assert arg.pros == ("quality",) and arg.cons == ()

    def test_third_provider_pair_has_no_quality_permutation(self):
        # Quality is the decisive pro and B dominates E at the component
        # level there, so no permutation argument appears.
        explanation = explain(fixture.comparison("B", "E"))
        assert [type(a) for a in explanation.arguments] == [DecisiveTradeoff]
        assert explanation.decisive.pros == ("quality",)

    def test_permutation_emitted_when_timeliness_is_decisive(self):
        # Re-weighting makes timeliness the decisive pro of B over E.
        prefs = Preferences(
            term_weights={"quality": 0.2, "timeliness": 0.7, "cost": 0.1},
            component_weights={I: 0.75, W: 0.25},
        )
        base = fixture.comparison("B", "E")
        ctx = ComparisonContext(
            assessor=base.assessor,
            preferred=base.preferred,
            other=base.other,
            preferences=prefs,
        )
        explanation = explain(ctx)
        kinds = [type(a) for a in explanation.arguments]
        assert kinds[0] is DecisiveTradeoff
        assert explanation.decisive.pros == ("timeliness",)
        perms = [a for a in explanation.arguments if isinstance(a, TypePermutation)]
        assert len(perms) == 1 and perms[0].term == "timeliness"
        assert perms[0].swaps == ((I, W),)

    def test_reversed_order_rejected(self):
        with pytest.raises(NotPreferredError) as excinfo:
            explain(fixture.comparison("C", "B"))
        assert "outranks" in str(excinfo.value)

    def test_tie_rejected(self):
        ctx = context_from_values({"q": 0.5}, {"q": 0.5}, {"q": 1.0})
        with pytest.raises(AmbiguousOrderError):
            explain(ctx)

    def test_deterministic(self):
        a = explain(fixture.comparison("B", "C"))
        b = explain(fixture.comparison("B", "C"))
        assert a == b

    def test_fire_model_arguments_integrated(self):
        ctx = recency_context(
            b_ratings=[(0.2, 0), (0.9, 5)], b2_ratings=[(0.9, 0), (0.3, 5)]
        )
        explanation = explain(ctx)
        kinds = [type(a) for a in explanation.arguments]
        assert kinds[0] in (DecisiveDominance, DecisiveTradeoff)
        assert FireRecencyGlobal in kinds
        assert FireRecencyLocal in kinds

    def test_per_term_arguments_in_declaration_order(self):
        prefs = Preferences(
            term_weights={"timeliness": 0.45, "quality": 0.45, "cost": 0.10},
            component_weights={I: 0.75, W: 0.25},
        )
        base = fixture.comparison("B", "C")
        ctx = ComparisonContext(
            assessor=base.assessor,
            preferred=base.preferred,
            other=base.other,
            preferences=prefs,
            model=Model.TRAVOS,
            travos_diagnostics=TravosDiagnostics(
                threshold=0.2,
                preferred={
                    t: TravosTermDiagnostics(0.1, True, 0.9) for t in fixture.TERMS
                },
                other={
                    t: TravosTermDiagnostics(0.1, True, 0.2) for t in fixture.TERMS
                },
            ),
        )
        explanation = explain(ctx)
        low_conf_terms = [
            a.term
            for a in explanation.arguments
            if isinstance(a, TravosLowConfidence)
        ]
        decisive_pros = set(explanation.decisive.pros)
        expected = [t for t in prefs.terms if t in decisive_pros]
        assert low_conf_terms == expected
