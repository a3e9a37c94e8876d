"""Model-independent trust types and combination math.

Every reputation backend in this package reduces its evidence to the same
three-level structure: per-component trust values are combined into a trust
value per term, and term trusts are combined into one overall score using
the assessor's term preferences. Both combinations are weighted means, so
weights never need to be pre-normalised.

All values handled here live in [0, 1]. Ratings arriving in a model's
native scale are mapped onto [0, 1] at ingestion and keep their raw value
for round-tripping.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

from .errors import (
    NoEvidenceError,
    NoTermsError,
    OutOfRangeError,
    WeightSumZeroError,
)

#: Absolute tolerance for assessment self-consistency checks.
ASSESSMENT_TOL = 1e-9

AgentId = str
Term = str


class ReputationType(Enum):
    """Evidence channel a rating belongs to."""

    INTERACTION = "interaction"
    WITNESS = "witness"
    ROLE_BASED = "role"
    CERTIFIED = "certified"

    @classmethod
    def from_string(cls, s: str) -> "ReputationType":
        for member in cls:
            if member.value == s:
                return member
        raise ValueError(f"unknown reputation type: {s!r}")


#: Canonical component ordering used for iteration and display.
REPUTATION_ORDER = (
    ReputationType.INTERACTION,
    ReputationType.WITNESS,
    ReputationType.ROLE_BASED,
    ReputationType.CERTIFIED,
)


@dataclass(frozen=True)
class NativeRange:
    """Declared value range of a rating source.

    ``binary`` ranges admit only the two endpoint values and map onto
    [0, 1] by identity; continuous ranges are mapped affinely.
    """

    lo: float
    hi: float
    binary: bool = False

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError("native range must have hi > lo")

    def contains(self, raw: float) -> bool:
        if self.binary:
            return raw == self.lo or raw == self.hi
        return self.lo <= raw <= self.hi


#: Bipolar scale with -1 absolutely negative, +1 absolutely positive.
BIPOLAR_RANGE = NativeRange(-1.0, 1.0)
#: Ratings already expressed in [0, 1].
UNIT_RANGE = NativeRange(0.0, 1.0)
#: Success / failure ratings.
BINARY_RANGE = NativeRange(0.0, 1.0, binary=True)


def normalize_rating(raw: float, native_range: NativeRange) -> float:
    """Map a raw rating from its native range onto [0, 1].

    Raises OutOfRangeError when ``raw`` lies outside the declared range
    (or, for binary ranges, is not one of the two admissible values).
    """
    if not native_range.contains(raw):
        raise OutOfRangeError(
            f"value {raw!r} outside native range "
            f"[{native_range.lo}, {native_range.hi}]"
            + (" (binary)" if native_range.binary else "")
        )
    if native_range.binary:
        return 1.0 if raw == native_range.hi else 0.0
    return (raw - native_range.lo) / (native_range.hi - native_range.lo)


def denormalize_rating(value: float, native_range: NativeRange) -> float:
    """Inverse of :func:`normalize_rating`."""
    if not 0.0 <= value <= 1.0:
        raise OutOfRangeError(f"normalized value {value!r} outside [0, 1]")
    if native_range.binary:
        return native_range.hi if value >= 0.5 else native_range.lo
    return native_range.lo + value * (native_range.hi - native_range.lo)


@dataclass(frozen=True)
class Rating:
    """One piece of trust evidence: source rated target on a term.

    ``value`` is the normalized score in [0, 1]; ``raw_value`` preserves
    the score in the source model's native range. ``timestamp`` is the
    simulation round the rating was recorded in.
    """

    source: AgentId
    target: AgentId
    term: Term
    rep_type: ReputationType
    value: float
    raw_value: float
    timestamp: int
    interaction_id: Optional[str] = None

    def __post_init__(self):
        if not self.source or not self.target or not self.term:
            raise ValueError("source, target and term must be non-empty")
        if not 0.0 <= self.value <= 1.0:
            raise OutOfRangeError(f"rating value {self.value!r} outside [0, 1]")
        if self.timestamp < 0:
            raise ValueError("timestamp must be a non-negative round index")


@dataclass(frozen=True)
class Preferences:
    """Assessor preferences: term weights and component importance.

    Weights are non-negative and need not sum to one; every combination
    divides by the applicable weight sum. Term declaration order (the
    insertion order of ``term_weights``) is meaningful: explanation
    arguments are emitted per term in this order.
    """

    term_weights: Mapping[Term, float]
    component_weights: Mapping[ReputationType, float]

    def __post_init__(self):
        if not self.term_weights or not any(w > 0 for w in self.term_weights.values()):
            raise ValueError("at least one positive term weight required")
        if not self.component_weights or not any(
            w > 0 for w in self.component_weights.values()
        ):
            raise ValueError("at least one positive component weight required")
        if any(w < 0 for w in self.term_weights.values()) or any(
            w < 0 for w in self.component_weights.values()
        ):
            raise ValueError("weights must be non-negative")

    @property
    def terms(self) -> tuple[Term, ...]:
        """Terms in declaration order."""
        return tuple(self.term_weights.keys())


@dataclass(frozen=True)
class ComponentTrust:
    """Aggregated trust for one reputation type on one term.

    ``value`` is None when the component has no evidence; an absent value
    forces a zero weight so it never enters a mean. ``weight`` is the
    effective combination weight (importance scaled by reliability for
    FIRE, evidence-mass share for TRAVOS).
    """

    rep_type: ReputationType
    value: Optional[float]
    weight: float
    reliability: float = 1.0

    def __post_init__(self):
        if self.value is None and self.weight != 0.0:
            raise ValueError("absent component value requires zero weight")
        if self.value is not None and not 0.0 <= self.value <= 1.0:
            raise OutOfRangeError(f"component trust {self.value!r} outside [0, 1]")
        if self.weight < 0:
            raise ValueError("component weight must be non-negative")
        if not 0.0 <= self.reliability <= 1.0:
            raise ValueError("reliability must lie in [0, 1]")


@dataclass(frozen=True)
class TermAssessment:
    """Component breakdown and combined trust for a single term."""

    components: tuple[ComponentTrust, ...]
    term_trust: Optional[float]


@dataclass(frozen=True)
class Assessment:
    """Full per-provider breakdown: components, term trusts, overall score."""

    assessor: AgentId
    target: AgentId
    per_term: Mapping[Term, TermAssessment]
    overall: Optional[float]

    def term_trust(self, term: Term) -> Optional[float]:
        ta = self.per_term.get(term)
        return None if ta is None else ta.term_trust

    def component_value(self, term: Term, rep_type: ReputationType) -> Optional[float]:
        ta = self.per_term.get(term)
        if ta is None:
            return None
        for c in ta.components:
            if c.rep_type is rep_type:
                return c.value
        return None

    def component(self, term: Term, rep_type: ReputationType) -> Optional[ComponentTrust]:
        ta = self.per_term.get(term)
        if ta is None:
            return None
        for c in ta.components:
            if c.rep_type is rep_type:
                return c
        return None


def combine_term_trust(components: Sequence[ComponentTrust]) -> float:
    """Weighted mean of component trust values for one term.

    Components with absent values are skipped. Raises NoEvidenceError when
    nothing remains or all remaining weights are zero.
    """
    num = 0.0
    den = 0.0
    for c in components:
        if c.value is None:
            continue
        num += c.weight * c.value
        den += c.weight
    if den <= 0.0:
        raise NoEvidenceError("no component with a present value and positive weight")
    return num / den


def overall_trust(
    term_trusts: Mapping[Term, float], term_weights: Mapping[Term, float]
) -> float:
    """Preference-weighted mean of term trusts.

    Both maps must cover exactly the same terms.
    """
    if not term_trusts:
        raise NoTermsError("empty term set")
    if set(term_trusts) != set(term_weights):
        raise NoTermsError(
            f"term sets differ: {sorted(term_trusts)} vs {sorted(term_weights)}"
        )
    den = sum(term_weights.values())
    if den <= 0.0:
        raise WeightSumZeroError("term weights sum to zero")
    num = sum(term_weights[t] * v for t, v in term_trusts.items())
    return num / den


def build_assessment(
    assessor: AgentId,
    target: AgentId,
    components_by_term: Mapping[Term, Sequence[ComponentTrust]],
    preferences: Preferences,
) -> Assessment:
    """Assemble an Assessment from per-term component trusts.

    Terms without any usable evidence get a None term trust and are left
    out of the overall mean, which renormalises over the remaining terms.
    The overall score is None only when no term has evidence.
    """
    per_term: dict[Term, TermAssessment] = {}
    evidenced: dict[Term, float] = {}
    for term in preferences.terms:
        comps = tuple(components_by_term.get(term, ()))
        try:
            tt = combine_term_trust(comps)
        except NoEvidenceError:
            tt = None
        per_term[term] = TermAssessment(components=comps, term_trust=tt)
        if tt is not None:
            evidenced[term] = tt
    overall: Optional[float] = None
    if evidenced:
        weights = {t: preferences.term_weights[t] for t in evidenced}
        if sum(weights.values()) > 0:
            overall = overall_trust(evidenced, weights)
    return Assessment(assessor=assessor, target=target, per_term=per_term, overall=overall)


def validate_assessment(
    assessment: Assessment, preferences: Preferences, tol: float = ASSESSMENT_TOL
) -> None:
    """Check an assessment's internal consistency.

    Recomputes every term trust from its components and the overall score
    from the term trusts; raises ValueError when any value drifts by more
    than ``tol``.
    """
    evidenced: dict[Term, float] = {}
    for term, ta in assessment.per_term.items():
        if ta.term_trust is None:
            continue
        recomputed = combine_term_trust(ta.components)
        if abs(recomputed - ta.term_trust) > tol:
            raise ValueError(
                f"term trust for {term!r} inconsistent: "
                f"{ta.term_trust} stored vs {recomputed} recomputed"
            )
        evidenced[term] = ta.term_trust
    if assessment.overall is None:
        if evidenced and sum(preferences.term_weights[t] for t in evidenced) > 0:
            raise ValueError("overall missing despite evidenced terms")
        return
    weights = {t: preferences.term_weights[t] for t in evidenced}
    recomputed = overall_trust(evidenced, weights)
    if abs(recomputed - assessment.overall) > tol:
        raise ValueError(
            f"overall inconsistent: {assessment.overall} stored "
            f"vs {recomputed} recomputed"
        )
