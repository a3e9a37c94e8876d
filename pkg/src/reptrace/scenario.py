"""Scenario file loading and validation.

Scenarios are JSON documents validated against the shipped schema before
being turned into typed objects. The order of keys in the ``terms`` object
is the term declaration order used everywhere downstream.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Union

import jsonschema

from .core import Preferences, ReputationType
from .errors import ConfigError
from .fire import FireConfig
from .simulate import (
    AgentSpec,
    CustomerService,
    ParcelCondition,
    PhaseParams,
    ProviderModel,
    RaterProfile,
    Scenario,
)
from .store import RoleRule
from .travos import TravosConfig

#: Environment variable overriding the scenario seed.
SEED_ENV_VAR = "REPTRACE_SEED"

SCENARIO_SCHEMA_ID = "reptrace/scenario/v1"


def load_schema(name: str) -> dict:
    """Read one of the shipped JSON schemas by file stem."""
    from importlib import resources

    text = (
        resources.files("reptrace")
        .joinpath(f"schemas/{name}.schema.json")
        .read_text("utf-8")
    )
    return json.loads(text)


def validate_document(doc: dict, schema_name: str) -> None:
    """Validate a document against a shipped schema; raise ConfigError."""
    schema = load_schema(schema_name)
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{schema_name} document invalid at {path}: {exc.message}") from exc


def _component_weights(doc: dict) -> dict[ReputationType, float]:
    raw = doc.get(
        "component_weights",
        {"interaction": 0.75, "witness": 0.25},
    )
    return {ReputationType.from_string(k): float(v) for k, v in raw.items()}


def _fire_config(doc: dict, importance: dict[ReputationType, float]) -> FireConfig:
    raw = doc.get("fire", {})
    return FireConfig(
        lambda_=float(raw.get("lambda", 5.0)),
        importance=importance,
        reliability_plugin=raw.get("reliability_plugin"),
        history_cap=raw.get("history_cap"),
    )


def _travos_config(doc: dict) -> TravosConfig:
    raw = doc.get("travos", {})
    return TravosConfig(
        epsilon=float(raw.get("epsilon", 0.2)),
        confidence_threshold=float(raw.get("confidence_threshold", 0.2)),
        bins=int(raw.get("bins", 5)),
    )


def _profile(doc: dict) -> RaterProfile:
    raw = doc.get("rating_profile")
    if raw is None:
        return RaterProfile()
    defaults = RaterProfile()
    parcel = dict(defaults.parcel_quality)
    for key, value in raw.get("parcel_quality", {}).items():
        parcel[ParcelCondition(key)] = float(value)
    service = dict(defaults.service_support)
    for key, value in raw.get("service_support", {}).items():
        service[CustomerService(key)] = float(value)
    return RaterProfile(
        parcel_quality=parcel,
        service_support=service,
        price_ceiling=float(raw.get("price_ceiling", defaults.price_ceiling)),
    )


def _witnesses(doc: dict, agent_ids: list[str]) -> dict[str, tuple[str, ...]]:
    raw = doc.get("witnesses", "none")
    if raw == "none":
        return {}
    if raw == "complete":
        return {
            a: tuple(b for b in agent_ids if b != a) for a in agent_ids
        }
    return {agent: tuple(peers) for agent, peers in raw.items()}


def scenario_from_document(doc: dict, seed_override: int | None = None) -> Scenario:
    """Build a typed scenario from a validated document."""
    validate_document(doc, "scenario")
    term_weights = {str(t): float(w) for t, w in doc["terms"].items()}
    importance = _component_weights(doc)
    try:
        preferences = Preferences(
            term_weights=term_weights, component_weights=importance
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    agents = tuple(
        AgentSpec(id=a["id"], roles=tuple(a.get("roles", ()))) for a in doc["agents"]
    )
    providers = tuple(
        ProviderModel(
            id=p["id"],
            roles=tuple(p.get("roles", ())),
            phases=tuple(
                PhaseParams(
                    days_mu=float(ph["days_mu"]),
                    days_sigma=float(ph["days_sigma"]),
                    max_days=int(ph["max_days"]),
                    price=float(ph["price"]),
                    parcel_probs=tuple(ph["parcel_probs"]),
                    service_probs=tuple(ph["service_probs"]),
                )
                for ph in p["phases"]
            ),
        )
        for p in doc["providers"]
    )
    role_rules = tuple(
        RoleRule(
            role_a=r["role_a"],
            role_b=r["role_b"],
            term=r["term"],
            likelihood=float(r["likelihood"]),
            expected_value=float(r["value"]),
        )
        for r in doc.get("role_rules", ())
    )
    seed = int(doc["seed"]) if seed_override is None else seed_override
    try:
        return Scenario(
            seed=seed,
            rounds=int(doc["rounds"]),
            preferences=preferences,
            agents=agents,
            providers=providers,
            witnesses=_witnesses(doc, [a.id for a in agents]),
            fire=_fire_config(doc, importance),
            travos=_travos_config(doc),
            provider_selection=doc.get("provider_selection", "uniform"),
            profile=_profile(doc),
            role_rules=role_rules,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and validate a scenario file, honouring REPTRACE_SEED."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    seed_override = None
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            seed_override = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer") from exc
    return scenario_from_document(doc, seed_override=seed_override)
