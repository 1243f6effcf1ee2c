"""Sidecar manifests: per-model role tags, risk table and default policy space.

A model ``foo.json`` may ship a ``foo.manifest.json`` next to it::

    {"roles": {"LNM": ["target"], "AdjuvantTherapy": ["intervention"]},
     "risk_table": [{"lower": 0.0, "upper": 0.01, "group": "Very low"}, ...],
     "default_space": {"interventions": [...]}}

Role tags are data for clients (which variables to render as therapy toggles,
which as the outcome) — nothing in the engine depends on them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .causal import InterventionSpace, parse_intervention_space
from .classifier import RiskTable, parse_risk_table
from .errors import DocumentSyntaxError


@dataclass(frozen=True)
class ModelManifest:
    roles: dict[str, tuple[str, ...]]
    risk_table: RiskTable | None = None
    default_space: InterventionSpace | None = None


EMPTY_MANIFEST = ModelManifest(roles={})


def manifest_path(model_path: str | Path) -> Path:
    model_path = Path(model_path)
    return model_path.with_name(model_path.stem + ".manifest.json")


def parse_manifest(doc: str) -> ModelManifest:
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
            pos=exc.pos,
        ) from None
    if not isinstance(data, dict):
        raise DocumentSyntaxError("manifest: expected an object", path="$")

    roles: dict[str, tuple[str, ...]] = {}
    raw_roles = data.get("roles", {})
    if not isinstance(raw_roles, dict):
        raise DocumentSyntaxError("$.roles: expected an object", path="$.roles")
    for name, tags in raw_roles.items():
        if isinstance(tags, str):
            tags = [tags]
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise DocumentSyntaxError(
                f"$.roles[{name!r}]: expected a tag or array of tags",
                path=f"$.roles.{name}",
            )
        roles[name] = tuple(tags)

    risk_table = None
    if "risk_table" in data:
        risk_table = parse_risk_table(data["risk_table"])

    default_space = None
    if "default_space" in data:
        default_space = parse_intervention_space(json.dumps(data["default_space"]))

    return ModelManifest(roles=roles, risk_table=risk_table, default_space=default_space)


def load_manifest(model_path: str | Path) -> ModelManifest:
    """Manifest for a model file, or the empty manifest when none exists."""
    path = manifest_path(model_path)
    if not path.exists():
        return EMPTY_MANIFEST
    return parse_manifest(path.read_text(encoding="utf-8"))
