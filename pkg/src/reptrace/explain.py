"""Argument generation for provider comparisons.

Given two assessments where one provider strictly outranks another, this
module selects the minimal set of arguments that justifies the ranking:

* a decisive-terms argument, either domination (better everywhere, with
  the terms that matter most) or a trade-off (a minimal pro set whose
  weighted advantage covers the unmentioned cons);
* per decisive term, an optional weight-permutation argument showing that
  the component importance ordering was itself decisive;
* model-specific arguments: ranking flips caused by recency weighting,
  and witness-driven rankings under low interaction confidence.

Term weights are normalised internally so the reference weight 1/|T| used
by the domination rule is on the same scale as the actual weights.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

from .core import (
    AgentId,
    Assessment,
    Preferences,
    ReputationType,
    REPUTATION_ORDER,
    Term,
)
from .errors import (
    AmbiguousOrderError,
    InfeasibleTradeoffError,
    MissingDiagnosticsError,
    NotDominantError,
    NotPreferredError,
)
from .fire import RECENCY_TYPES
from .travos import TravosTermDiagnostics

#: Two overall scores closer than this are treated as an ambiguous order.
ORDER_TOL = 1e-9

#: Exhaustive subset search bound; larger term sets fall back to greedy.
EXHAUSTIVE_TERM_LIMIT = 12


class Model(Enum):
    FIRE = "fire"
    TRAVOS = "travos"


@dataclass(frozen=True)
class FireDiagnostics:
    """Uniform-weight baseline assessments for both providers."""

    uniform_preferred: Assessment
    uniform_other: Assessment


@dataclass(frozen=True)
class TravosDiagnostics:
    """Interaction confidences and witness trusts per provider and term."""

    threshold: float
    preferred: Mapping[Term, TravosTermDiagnostics]
    other: Mapping[Term, TravosTermDiagnostics]


@dataclass(frozen=True)
class ComparisonContext:
    """Inputs of one explanation: the two assessments plus model extras."""

    assessor: AgentId
    preferred: Assessment
    other: Assessment
    preferences: Preferences
    model: Optional[Model] = None
    fire_diagnostics: Optional[FireDiagnostics] = None
    travos_diagnostics: Optional[TravosDiagnostics] = None


@dataclass(frozen=True)
class DecisiveDominance:
    """Domination case: pros that matter most, never any cons."""

    pros: tuple[Term, ...]
    weighted_differences: Mapping[Term, float]
    reference: float


@dataclass(frozen=True)
class DecisiveTradeoff:
    """Trade-off case: minimal pros covering the unmentioned cons."""

    pros: tuple[Term, ...]
    cons: tuple[Term, ...]
    weighted_differences: Mapping[Term, float]


@dataclass(frozen=True)
class TypePermutation:
    """Weight swaps among reputation types that would flip a term trust."""

    term: Term
    swaps: tuple[tuple[ReputationType, ReputationType], ...]
    preferred_original: float
    other_original: float
    preferred_swapped: float
    other_swapped: float


@dataclass(frozen=True)
class FireRecencyGlobal:
    """Overall ranking that uniform rating weights would reverse."""

    preferred_overall: float
    other_overall: float
    uniform_preferred_overall: float
    uniform_other_overall: float


@dataclass(frozen=True)
class FireRecencyLocal:
    """Component trust ordering that uniform rating weights would reverse."""

    term: Term
    rep_type: ReputationType
    preferred_value: float
    other_value: float
    uniform_preferred_value: float
    uniform_other_value: float


@dataclass(frozen=True)
class TravosLowConfidence:
    """Witness evidence decided this term under scarce own experience."""

    term: Term
    preferred_confidence: float
    other_confidence: float
    preferred_witness_trust: float
    other_witness_trust: float
    threshold: float


Argument = (
    DecisiveDominance
    | DecisiveTradeoff
    | TypePermutation
    | FireRecencyGlobal
    | FireRecencyLocal
    | TravosLowConfidence
)


@dataclass(frozen=True)
class Explanation:
    """Ordered argument list justifying one pairwise ranking."""

    assessor: AgentId
    preferred: AgentId
    other: AgentId
    arguments: tuple[Argument, ...]
    model: Optional[Model] = None

    @property
    def decisive(self) -> DecisiveDominance | DecisiveTradeoff:
        return self.arguments[0]  # type: ignore[return-value]


def _compared_terms(ctx: ComparisonContext) -> list[Term]:
    """Terms, in declaration order, with a trust value for both providers."""
    return [
        t
        for t in ctx.preferences.terms
        if ctx.preferred.term_trust(t) is not None
        and ctx.other.term_trust(t) is not None
    ]


def _normalized_weights(ctx: ComparisonContext, terms: Sequence[Term]) -> dict[Term, float]:
    total = sum(ctx.preferences.term_weights[t] for t in terms)
    if total <= 0:
        raise NotPreferredError("all compared terms carry zero weight")
    return {t: ctx.preferences.term_weights[t] / total for t in terms}


def _weighted_differences(
    ctx: ComparisonContext, terms: Sequence[Term]
) -> tuple[dict[Term, float], dict[Term, float]]:
    """Per-term absolute trust differences and their weighted versions."""
    weights = _normalized_weights(ctx, terms)
    deltas = {
        t: abs(ctx.preferred.term_trust(t) - ctx.other.term_trust(t)) for t in terms
    }
    return deltas, {t: weights[t] * deltas[t] for t in terms}


def dominates(ctx: ComparisonContext) -> bool:
    """True iff the preferred provider is at least as good on every term
    and strictly better on at least one."""
    terms = _compared_terms(ctx)
    any_better = False
    for t in terms:
        pv = ctx.preferred.term_trust(t)
        ov = ctx.other.term_trust(t)
        if pv < ov:
            return False
        if pv > ov:
            any_better = True
    return any_better


def decisive_terms_dominance(ctx: ComparisonContext) -> DecisiveDominance:
    """Domination argument: pros whose weighted difference beats the
    equal-importance reference; falls back to the single largest."""
    if not dominates(ctx):
        raise NotDominantError(
            f"{ctx.preferred.target} does not dominate {ctx.other.target}"
        )
    terms = _compared_terms(ctx)
    deltas, weighted = _weighted_differences(ctx, terms)
    reference = (1.0 / len(terms)) * (sum(deltas.values()) / len(terms))
    decl_index = {t: i for i, t in enumerate(terms)}
    pros = [t for t in terms if weighted[t] > reference]
    if not pros:
        pros = [max(terms, key=lambda t: (weighted[t], -decl_index[t]))]
    pros.sort(key=lambda t: (-weighted[t], decl_index[t]))
    return DecisiveDominance(
        pros=tuple(pros), weighted_differences=weighted, reference=reference
    )


def _tradeoff_candidates(
    pros_pool: Sequence[Term],
    cons_pool: Sequence[Term],
    weighted: Mapping[Term, float],
):
    """Yield every (pro subset, con subset) satisfying the cover condition."""
    cons_total = sum(weighted[t] for t in cons_pool)
    for p_sel in itertools.chain.from_iterable(
        itertools.combinations(pros_pool, k) for k in range(len(pros_pool) + 1)
    ):
        p_sum = sum(weighted[t] for t in p_sel)
        for c_sel in itertools.chain.from_iterable(
            itertools.combinations(cons_pool, k) for k in range(len(cons_pool) + 1)
        ):
            uncovered = cons_total - sum(weighted[t] for t in c_sel)
            if p_sum > uncovered:
                yield p_sel, c_sel


def decisive_terms_tradeoff(ctx: ComparisonContext) -> DecisiveTradeoff:
    """Trade-off argument selection.

    Among all subset pairs satisfying the cover condition, an empty
    mentioned-cons set is preferred outright (an explanation that needs no
    counterpoints); after that the pro set, then the con set, is smallest;
    remaining ties go to the largest selected weighted difference and then
    to term declaration order. The search is exhaustive up to
    EXHAUSTIVE_TERM_LIMIT terms and greedy beyond.
    """
    terms = _compared_terms(ctx)
    _, weighted = _weighted_differences(ctx, terms)
    decl_index = {t: i for i, t in enumerate(terms)}
    pros_pool = [
        t for t in terms if ctx.preferred.term_trust(t) > ctx.other.term_trust(t)
    ]
    cons_pool = [
        t for t in terms if ctx.preferred.term_trust(t) < ctx.other.term_trust(t)
    ]

    if len(terms) > EXHAUSTIVE_TERM_LIMIT:
        chosen: list[Term] = []
        cons_total = sum(weighted[t] for t in cons_pool)
        for t in sorted(pros_pool, key=lambda t: (-weighted[t], decl_index[t])):
            chosen.append(t)
            if sum(weighted[t] for t in chosen) > cons_total:
                return DecisiveTradeoff(
                    pros=tuple(chosen), cons=(), weighted_differences=weighted
                )
        raise InfeasibleTradeoffError(
            "pros never cover the cons; is the context ordered correctly?"
        )

    def key(pair):
        p_sel, c_sel = pair
        return (
            0 if not c_sel else 1,
            len(p_sel),
            len(c_sel),
            -sum(weighted[t] for t in p_sel) - sum(weighted[t] for t in c_sel),
            tuple(sorted(decl_index[t] for t in p_sel)),
            tuple(sorted(decl_index[t] for t in c_sel)),
        )

    best = min(
        _tradeoff_candidates(pros_pool, cons_pool, weighted), key=key, default=None
    )
    if best is None:
        raise InfeasibleTradeoffError(
            "pros never cover the cons; is the context ordered correctly?"
        )
    p_sel, c_sel = best
    pros = sorted(p_sel, key=lambda t: (-weighted[t], decl_index[t]))
    cons = sorted(c_sel, key=lambda t: (-weighted[t], decl_index[t]))
    return DecisiveTradeoff(
        pros=tuple(pros), cons=tuple(cons), weighted_differences=weighted
    )


def decisive_terms(ctx: ComparisonContext) -> DecisiveDominance | DecisiveTradeoff:
    if dominates(ctx):
        return decisive_terms_dominance(ctx)
    return decisive_terms_tradeoff(ctx)


def _component_table(
    assessment: Assessment, term: Term
) -> dict[ReputationType, tuple[float, float]]:
    """Present components of one term as {type: (value, weight)}."""
    out = {}
    ta = assessment.per_term.get(term)
    if ta is None:
        return out
    for c in ta.components:
        if c.value is not None:
            out[c.rep_type] = (c.value, c.weight)
    return out


def _recombine(
    table: Mapping[ReputationType, tuple[float, float]],
    new_weights: Mapping[ReputationType, float],
) -> float:
    num = sum(new_weights[k] * v for k, (v, _) in table.items())
    den = sum(new_weights[k] for k in table)
    return num / den


def _cycle_swaps(
    perm: Mapping[ReputationType, ReputationType]
) -> list[tuple[ReputationType, ReputationType]]:
    """Decompose a permutation into sequential pairwise swaps."""
    order = {k: i for i, k in enumerate(REPUTATION_ORDER)}
    seen: set[ReputationType] = set()
    swaps: list[tuple[ReputationType, ReputationType]] = []
    for start in sorted(perm, key=lambda k: order[k]):
        if start in seen or perm[start] is start:
            seen.add(start)
            continue
        cycle = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt is not start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        for a, b in zip(cycle, cycle[1:]):
            swaps.append((a, b))
    return swaps


def invert_permutation(
    ctx: ComparisonContext, term: Term
) -> Optional[TypePermutation]:
    """Search for weight swaps among reputation types flipping this term.

    Returns None when the preferred provider already dominates at the
    component level (no further justification needed) or when no
    permutation of the component weights reverses the term-trust order.
    Among inverting permutations the fewest swaps win; ties prefer the
    largest total weight gap across swapped pairs, then canonical type
    order.
    """
    pref_table = _component_table(ctx.preferred, term)
    other_table = _component_table(ctx.other, term)
    shared = [k for k in REPUTATION_ORDER if k in pref_table and k in other_table]
    if len(shared) < 2:
        return None

    any_better = any(pref_table[k][0] > other_table[k][0] for k in shared)
    any_worse = any(pref_table[k][0] < other_table[k][0] for k in shared)
    if any_better and not any_worse:
        return None  # component-level domination: decisive term is enough

    pref_orig = _recombine(pref_table, {k: w for k, (_, w) in pref_table.items()})
    other_orig = _recombine(other_table, {k: w for k, (_, w) in other_table.items()})

    order = {k: i for i, k in enumerate(REPUTATION_ORDER)}
    best = None
    for image in itertools.permutations(shared):
        perm = dict(zip(shared, image))
        if all(perm[k] is k for k in shared):
            continue
        pref_weights = {k: w for k, (_, w) in pref_table.items()}
        other_weights = {k: w for k, (_, w) in other_table.items()}
        pref_weights.update({k: pref_table[perm[k]][1] for k in shared})
        other_weights.update({k: other_table[perm[k]][1] for k in shared})
        pref_swapped = _recombine(pref_table, pref_weights)
        other_swapped = _recombine(other_table, other_weights)
        if not pref_swapped < other_swapped:
            continue
        swaps = _cycle_swaps(perm)
        gap = sum(abs(pref_table[a][1] - pref_table[b][1]) for a, b in swaps)
        rank = (
            len(swaps),
            -gap,
            tuple((order[a], order[b]) for a, b in swaps),
        )
        if best is None or rank < best[0]:
            best = (rank, swaps, pref_swapped, other_swapped)

    if best is None:
        return None
    _, swaps, pref_swapped, other_swapped = best
    oriented = tuple(
        (a, b) if pref_table[a][1] >= pref_table[b][1] else (b, a) for a, b in swaps
    )
    return TypePermutation(
        term=term,
        swaps=oriented,
        preferred_original=pref_orig,
        other_original=other_orig,
        preferred_swapped=pref_swapped,
        other_swapped=other_swapped,
    )


def _require_fire_diagnostics(ctx: ComparisonContext) -> FireDiagnostics:
    if ctx.fire_diagnostics is None:
        raise MissingDiagnosticsError(
            "recency arguments need uniform-weight baseline assessments"
        )
    return ctx.fire_diagnostics


def fire_recency_global(ctx: ComparisonContext) -> Optional[FireRecencyGlobal]:
    """Argument emitted when uniform weighting would reverse the overall order."""
    diag = _require_fire_diagnostics(ctx)
    po, oo = ctx.preferred.overall, ctx.other.overall
    up, uo = diag.uniform_preferred.overall, diag.uniform_other.overall
    if po is None or oo is None or up is None or uo is None:
        return None
    if po > oo and up < uo:
        return FireRecencyGlobal(
            preferred_overall=po,
            other_overall=oo,
            uniform_preferred_overall=up,
            uniform_other_overall=uo,
        )
    return None


def fire_recency_local(
    ctx: ComparisonContext, term: Term, rep_type: ReputationType
) -> Optional[FireRecencyLocal]:
    """Per-component recency conflict; applies to recency-weighted types only."""
    diag = _require_fire_diagnostics(ctx)
    if rep_type not in RECENCY_TYPES:
        return None
    pv = ctx.preferred.component_value(term, rep_type)
    ov = ctx.other.component_value(term, rep_type)
    up = diag.uniform_preferred.component_value(term, rep_type)
    uo = diag.uniform_other.component_value(term, rep_type)
    if pv is None or ov is None or up is None or uo is None:
        return None
    if pv > ov and up < uo:
        return FireRecencyLocal(
            term=term,
            rep_type=rep_type,
            preferred_value=pv,
            other_value=ov,
            uniform_preferred_value=up,
            uniform_other_value=uo,
        )
    return None


def travos_low_confidence(
    ctx: ComparisonContext, term: Term
) -> Optional[TravosLowConfidence]:
    """Argument emitted when witnesses decided a term under low confidence."""
    if ctx.travos_diagnostics is None:
        raise MissingDiagnosticsError(
            "low-confidence arguments need interaction confidences and witness trusts"
        )
    diag = ctx.travos_diagnostics
    dp = diag.preferred.get(term)
    do = diag.other.get(term)
    if dp is None or do is None:
        return None
    below = (
        dp.interaction_confidence < diag.threshold
        or do.interaction_confidence < diag.threshold
    )
    if not below:
        return None
    if dp.witness_trust is None or do.witness_trust is None:
        return None
    if dp.witness_trust > do.witness_trust:
        return TravosLowConfidence(
            term=term,
            preferred_confidence=dp.interaction_confidence,
            other_confidence=do.interaction_confidence,
            preferred_witness_trust=dp.witness_trust,
            other_witness_trust=do.witness_trust,
            threshold=diag.threshold,
        )
    return None


def _check_order(ctx: ComparisonContext) -> None:
    po, oo = ctx.preferred.overall, ctx.other.overall
    if po is None or oo is None:
        raise NotPreferredError(
            "cannot explain a comparison with missing overall scores",
            preferred_overall=po,
            other_overall=oo,
        )
    if abs(po - oo) <= ORDER_TOL:
        raise AmbiguousOrderError(
            f"{ctx.preferred.target} and {ctx.other.target} are tied "
            f"({po:.6f} vs {oo:.6f})",
            preferred_overall=po,
            other_overall=oo,
        )
    if po < oo:
        raise NotPreferredError(
            f"{ctx.other.target} ({oo:.6f}) actually outranks "
            f"{ctx.preferred.target} ({po:.6f})",
            preferred_overall=po,
            other_overall=oo,
        )


def explain(ctx: ComparisonContext) -> Explanation:
    """Assemble the full argument list for one pairwise comparison.

    The decisive-terms argument always comes first, followed by any
    model-global argument, then per decisive pro (in term declaration
    order) the permutation argument, model-specific term arguments and
    model-specific component arguments.
    """
    _check_order(ctx)
    decisive = decisive_terms(ctx)
    arguments: list[Argument] = [decisive]

    if ctx.model is Model.FIRE:
        arg = fire_recency_global(ctx)
        if arg is not None:
            arguments.append(arg)

    pros = set(decisive.pros)
    for term in ctx.preferences.terms:
        if term not in pros:
            continue
        perm = invert_permutation(ctx, term)
        if perm is not None:
            arguments.append(perm)
        if ctx.model is Model.TRAVOS:
            arg = travos_low_confidence(ctx, term)
            if arg is not None:
                arguments.append(arg)
        if ctx.model is Model.FIRE:
            for rep_type in RECENCY_TYPES:
                arg = fire_recency_local(ctx, term, rep_type)
                if arg is not None:
                    arguments.append(arg)

    return Explanation(
        assessor=ctx.assessor,
        preferred=ctx.preferred.target,
        other=ctx.other.target,
        arguments=tuple(arguments),
        model=ctx.model,
    )
