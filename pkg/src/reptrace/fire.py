"""Recency-weighted trust backend with four evidence channels.

Component trust is a weighted mean of ratings. Interaction, witness and
certified ratings are weighted by an exponential recency factor; role-based
pseudo-ratings derived from rules are weighted by the rule's likelihood.
Component trusts combine into term trust through importance weights scaled
by a per-component reliability (constant 1 by default, or a named plugin).

Each assessment is built twice: once with the recency weights and once with
every rating weighted equally. The uniform baseline exists solely so the
explanation layer can detect rankings that recency alone flipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .core import (
    AgentId,
    Assessment,
    BIPOLAR_RANGE,
    ComponentTrust,
    NativeRange,
    Preferences,
    Rating,
    ReputationType,
    REPUTATION_ORDER,
    Term,
    build_assessment,
    combine_term_trust,
    normalize_rating,
)
from .store import RatingPattern, RatingStore, RoleRule

#: Components whose rating weight is the recency factor.
RECENCY_TYPES = (
    ReputationType.INTERACTION,
    ReputationType.WITNESS,
    ReputationType.CERTIFIED,
)

#: Signature of a reliability plugin: (ratings, rep_type, now) -> [0, 1].
ReliabilityFn = Callable[[Sequence[Rating], ReputationType, int], float]

_RELIABILITY_PLUGINS: dict[str, ReliabilityFn] = {}


def register_reliability_plugin(name: str, fn: ReliabilityFn) -> None:
    """Register a named reliability function for use in FireConfig."""
    _RELIABILITY_PLUGINS[name] = fn


@dataclass(frozen=True)
class FireConfig:
    """Recency scale, component importance and reliability selection."""

    lambda_: float = 5.0
    importance: Mapping[ReputationType, float] = field(
        default_factory=lambda: {
            ReputationType.INTERACTION: 0.75,
            ReputationType.WITNESS: 0.25,
        }
    )
    reliability_plugin: Optional[str] = None
    history_cap: Optional[int] = None

    def __post_init__(self):
        if self.lambda_ <= 0:
            raise ValueError("lambda must be positive")
        if not self.importance or not any(w > 0 for w in self.importance.values()):
            raise ValueError("at least one positive importance weight required")
        if self.reliability_plugin is not None and (
            self.reliability_plugin not in _RELIABILITY_PLUGINS
        ):
            raise ValueError(
                f"unknown reliability plugin {self.reliability_plugin!r}"
            )

    def reliability(
        self, ratings: Sequence[Rating], rep_type: ReputationType, now: int
    ) -> float:
        if self.reliability_plugin is None:
            return 1.0
        return _RELIABILITY_PLUGINS[self.reliability_plugin](ratings, rep_type, now)


def recency_weight(delta_tau: float, lambda_: float) -> float:
    """Exponential decay weight for a rating delta_tau rounds old."""
    if delta_tau < 0:
        raise ValueError("delta_tau must be non-negative")
    if lambda_ <= 0:
        raise ValueError("lambda must be positive")
    return math.exp(-delta_tau / lambda_)


@dataclass(frozen=True)
class PseudoRating:
    """Rule-derived evidence: a normalized value carrying its own weight."""

    value: float
    weight: float


def role_pseudo_ratings(
    rules: Sequence[RoleRule],
    assessor_roles: Sequence[str],
    target_roles: Sequence[str],
    term: Term,
    native_range: NativeRange = BIPOLAR_RANGE,
) -> list[PseudoRating]:
    """Instantiate matching role rules as weighted pseudo-ratings."""
    out = []
    for rule in rules:
        if rule.term != term:
            continue
        if rule.role_a in assessor_roles and rule.role_b in target_roles:
            out.append(
                PseudoRating(
                    value=normalize_rating(rule.expected_value, native_range),
                    weight=rule.likelihood,
                )
            )
    return out


def _weighted_mean(pairs: Sequence[tuple[float, float]]) -> Optional[float]:
    den = sum(w for _, w in pairs)
    if den <= 0.0:
        return None
    return sum(w * v for v, w in pairs) / den


def component_trust(
    ratings: Sequence[Rating],
    rep_type: ReputationType,
    config: FireConfig,
    now: int,
    role_evidence: Sequence[PseudoRating] = (),
) -> ComponentTrust:
    """Recency-weighted component trust (likelihood-weighted for roles).

    Empty evidence yields an absent value with zero weight. The returned
    weight is the component's importance scaled by its reliability.
    """
    if rep_type is ReputationType.ROLE_BASED:
        pairs = [(p.value, p.weight) for p in role_evidence]
    else:
        pairs = [
            (r.value, recency_weight(now - r.timestamp, config.lambda_))
            for r in ratings
        ]
    value = _weighted_mean(pairs)
    if value is None:
        return ComponentTrust(rep_type=rep_type, value=None, weight=0.0)
    reliability = config.reliability(ratings, rep_type, now)
    importance = config.importance.get(rep_type, 0.0)
    return ComponentTrust(
        rep_type=rep_type,
        value=value,
        weight=importance * reliability,
        reliability=reliability,
    )


def component_trust_uniform(
    ratings: Sequence[Rating],
    rep_type: ReputationType,
    config: FireConfig,
    now: int,
    role_evidence: Sequence[PseudoRating] = (),
) -> ComponentTrust:
    """Baseline component trust with every rating weighted equally.

    Role-based evidence keeps its likelihood weights: the baseline removes
    only the recency factor, which never applies to rules.
    """
    if rep_type is ReputationType.ROLE_BASED:
        return component_trust(ratings, rep_type, config, now, role_evidence)
    pairs = [(r.value, 1.0) for r in ratings]
    value = _weighted_mean(pairs)
    if value is None:
        return ComponentTrust(rep_type=rep_type, value=None, weight=0.0)
    reliability = config.reliability(ratings, rep_type, now)
    importance = config.importance.get(rep_type, 0.0)
    return ComponentTrust(
        rep_type=rep_type,
        value=value,
        weight=importance * reliability,
        reliability=reliability,
    )


def term_trust_fire(components: Sequence[ComponentTrust]) -> float:
    """Combine component trusts; weights already carry importance and reliability."""
    return combine_term_trust(components)


@dataclass(frozen=True)
class FireAssessment:
    """Recency-weighted assessment plus its uniform-weight baseline."""

    assessment: Assessment
    uniform: Assessment


def _collect(
    rating_store: RatingStore,
    role_rules: Sequence[RoleRule],
    agent_roles: Mapping[AgentId, Sequence[str]],
    assessor: AgentId,
    target: AgentId,
    term: Term,
) -> dict[ReputationType, tuple[list[Rating], list[PseudoRating]]]:
    """Gather the evidence backing every component of one term."""
    evidence: dict[ReputationType, tuple[list[Rating], list[PseudoRating]]] = {}
    evidence[ReputationType.INTERACTION] = (
        rating_store.query(
            RatingPattern(
                source=assessor,
                target=target,
                term=term,
                rep_type=ReputationType.INTERACTION,
            )
        ),
        [],
    )
    evidence[ReputationType.WITNESS] = (
        [
            r
            for r in rating_store.query(
                RatingPattern(
                    target=target, term=term, rep_type=ReputationType.WITNESS
                )
            )
            if r.source != assessor
        ],
        [],
    )
    evidence[ReputationType.CERTIFIED] = (
        rating_store.query(
            RatingPattern(target=target, term=term, rep_type=ReputationType.CERTIFIED)
        ),
        [],
    )
    evidence[ReputationType.ROLE_BASED] = (
        [],
        role_pseudo_ratings(
            role_rules,
            agent_roles.get(assessor, ()),
            agent_roles.get(target, ()),
            term,
        ),
    )
    return evidence


def assess_provider(
    rating_store: RatingStore,
    assessor: AgentId,
    target: AgentId,
    preferences: Preferences,
    config: FireConfig,
    now: int,
    role_rules: Sequence[RoleRule] = (),
    agent_roles: Optional[Mapping[AgentId, Sequence[str]]] = None,
) -> FireAssessment:
    """Assess one provider on every preferred term, with uniform baseline."""
    agent_roles = agent_roles or {}
    weighted: dict[Term, list[ComponentTrust]] = {}
    uniform: dict[Term, list[ComponentTrust]] = {}
    active_types = [k for k in REPUTATION_ORDER if config.importance.get(k, 0.0) > 0.0]
    for term in preferences.terms:
        evidence = _collect(
            rating_store, role_rules, agent_roles, assessor, target, term
        )
        weighted[term] = [
            component_trust(evidence[k][0], k, config, now, role_evidence=evidence[k][1])
            for k in active_types
        ]
        uniform[term] = [
            component_trust_uniform(
                evidence[k][0], k, config, now, role_evidence=evidence[k][1]
            )
            for k in active_types
        ]
    return FireAssessment(
        assessment=build_assessment(assessor, target, weighted, preferences),
        uniform=build_assessment(assessor, target, uniform, preferences),
    )
