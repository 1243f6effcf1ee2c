"""Evidence what-if tables and single-variable sensitivity ranking.

The what-if table evaluates a list of evidence scenarios against one or more
(target, state) pairs — the incremental-evidence workflow a clinician runs at
the desk.  Rows whose evidence is contradictory under the model are kept in
the table with an explicit marker instead of failing the whole report.

Sensitivity is measured as posterior spread: condition the target on each
state of a candidate variable (on top of the baseline evidence) and take
max minus min.  Candidates whose spread clears a cutoff are suggested as
classifier features; a suggestion, never an automatic selection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import InconsistentEvidenceError
from .inference import query_posterior
from .model import Evidence, Network, validate_evidence

#: Suggest features whose posterior spread clears this by default.
DEFAULT_FEATURE_CUTOFF = 0.05

#: (variable, state) pair whose probability a table reports.
TargetSpec = tuple[str, str]


@dataclass(frozen=True)
class WhatIfRow:
    """One evidence scenario: the posterior per target, or None for every
    target when the evidence itself is contradictory."""

    evidence: dict[str, str]
    posteriors: tuple[float | None, ...]
    inconsistent: bool = False


@dataclass(frozen=True)
class SensitivityEntry:
    """Spread of the target posterior across one candidate's states."""

    variable: str
    spread: float
    per_state: tuple[tuple[str, float], ...]
    skipped_states: tuple[str, ...] = ()


def what_if_table(
    net: Network,
    targets: Sequence[TargetSpec],
    evidence_sets: Sequence[Evidence],
) -> list[WhatIfRow]:
    """One row per evidence set, in input order; posteriors match
    :func:`query_posterior` exactly."""
    for variable, state in targets:
        net.state_index(variable, state)
    rows: list[WhatIfRow] = []
    for evidence in evidence_sets:
        evidence = dict(evidence)
        validate_evidence(net, evidence)
        posteriors: list[float | None] = []
        inconsistent = False
        for variable, state in targets:
            if inconsistent:
                posteriors.append(None)
                continue
            try:
                dist = query_posterior(net, variable, evidence)
            except InconsistentEvidenceError:
                inconsistent = True
                posteriors = [None] * len(targets)
                break
            posteriors.append(dist.probs[net.state_index(variable, state)])
        rows.append(WhatIfRow(evidence, tuple(posteriors), inconsistent))
    return rows


def sensitivity_rank(
    net: Network,
    target: str,
    target_state: str,
    candidates: Sequence[str],
    baseline: Evidence | None = None,
) -> list[SensitivityEntry]:
    """Rank candidates by how far conditioning on them moves the target.

    Candidate states that contradict the baseline are skipped and flagged.
    Sorted by spread descending; ties broken by declaration order.
    """
    baseline = dict(baseline or {})
    state_idx = net.state_index(target, target_state)
    validate_evidence(net, baseline)
    for name in candidates:
        net.variable(name)
        if name == target:
            raise ValueError(f"candidate {name!r} is the target")
        if name in baseline:
            raise ValueError(f"candidate {name!r} is fixed by the baseline evidence")
    if len(set(candidates)) != len(candidates):
        raise ValueError("candidates repeat a variable")

    entries: list[SensitivityEntry] = []
    for name in candidates:
        per_state: list[tuple[str, float]] = []
        skipped: list[str] = []
        for state in net.variable(name).states:
            evidence = dict(baseline)
            evidence[name] = state
            try:
                dist = query_posterior(net, target, evidence)
            except InconsistentEvidenceError:
                skipped.append(state)
                continue
            per_state.append((state, dist.probs[state_idx]))
        values = [p for _, p in per_state]
        spread = (max(values) - min(values)) if values else 0.0
        entries.append(
            SensitivityEntry(name, spread, tuple(per_state), tuple(skipped))
        )
    entries.sort(key=lambda e: (-e.spread, net.index(e.variable)))
    return entries


def suggest_features(
    entries: Sequence[SensitivityEntry],
    cutoff: float = DEFAULT_FEATURE_CUTOFF,
) -> list[str]:
    """Candidates whose spread clears the cutoff, strongest first."""
    return [e.variable for e in entries if e.spread > cutoff]


# ---------------------------------------------------------------------------
# Renderings (tab-separated text mirroring the published table layout, plus a
# machine-readable payload; both consumed by the CLI and service)


def _fmt(p: float, percent: bool) -> str:
    return f"{100 * p:.1f}" if percent else f"{p:.6f}"


def render_what_if_tsv(
    targets: Sequence[TargetSpec],
    rows: Sequence[WhatIfRow],
    *,
    percent: bool = False,
) -> str:
    header = ["evidence", "modalities"] + [f"P({v}={s})" for v, s in targets]
    lines = ["\t".join(header)]
    for row in rows:
        names = ",".join(row.evidence) if row.evidence else "(none)"
        states = ",".join(row.evidence.values())
        cells = [
            "inconsistent" if p is None else _fmt(p, percent)
            for p in row.posteriors
        ]
        lines.append("\t".join([names, states] + cells))
    return "\n".join(lines) + "\n"


def what_if_payload(
    targets: Sequence[TargetSpec], rows: Sequence[WhatIfRow]
) -> dict:
    return {
        "targets": [{"variable": v, "state": s} for v, s in targets],
        "rows": [
            {
                "evidence": row.evidence,
                "posteriors": list(row.posteriors),
                "inconsistent": row.inconsistent,
            }
            for row in rows
        ],
    }


def render_sensitivity_tsv(
    entries: Sequence[SensitivityEntry], *, percent: bool = False
) -> str:
    lines = ["\t".join(["variable", "spread", "per-state"])]
    for e in entries:
        cells = [f"{state}={_fmt(p, percent)}" for state, p in e.per_state]
        cells += [f"{state}=skipped" for state in e.skipped_states]
        lines.append("\t".join([e.variable, _fmt(e.spread, percent), " ".join(cells)]))
    return "\n".join(lines) + "\n"


def sensitivity_payload(entries: Sequence[SensitivityEntry]) -> dict:
    return {
        "entries": [
            {
                "variable": e.variable,
                "spread": e.spread,
                "per_state": {state: p for state, p in e.per_state},
                "skipped_states": list(e.skipped_states),
            }
            for e in entries
        ]
    }


def parse_evidence_rows(doc: str) -> list[dict[str, str]]:
    """Read a JSON array of evidence objects (the what-if rows file)."""
    data = json.loads(doc)
    if not isinstance(data, list):
        raise ValueError("expected a JSON array of evidence objects")
    rows = []
    for i, raw in enumerate(data):
        if not isinstance(raw, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
        ):
            raise ValueError(f"row {i}: expected an object of variable -> state")
        rows.append(dict(raw))
    return rows
