"""Do-interventions by graph mutilation and exact bounds over policy spaces.

An intervention do(V=v) severs V's parent edges and replaces its CPT with a
point mass on v; queries then condition on the mutilated network (evidence is
treated as an observation made after the policy is imposed).

:func:`bound_interventions` searches the full Cartesian product of an
intervention space — every joint choice of allowed values, optionally
including "leave this variable alone" — and returns the exact extremum with
the assignment that attains it.  Ties go to the lexicographically first
assignment (variables in declaration order, abstention before any forced
state, states in declared order), so results are reproducible no matter how
the search is scheduled.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

from .errors import (
    CapacityError,
    DocumentSyntaxError,
    EvidenceOverlapError,
    InconsistentEvidenceError,
    SearchCancelled,
)
from .inference import Distribution, query_posterior
from .model import Cpt, Evidence, Network, Variable, validate_evidence

#: Refuse to search intervention spaces larger than this many assignments.
DEFAULT_SPACE_CAP = 10**6

#: Forced values, variable name -> state label.
DoAssignment = Mapping[str, str]


@dataclass(frozen=True)
class InterventionChoice:
    """Allowed do-values for one variable.  ``may_abstain`` keeps "do not
    intervene on this variable" in the search, which is the default: a policy
    over treatments includes withholding one."""

    variable: str
    values: tuple[str, ...]
    may_abstain: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))


@dataclass(frozen=True)
class InterventionSpace:
    """Per-variable allowed do-values; the search space of policies."""

    entries: tuple[InterventionChoice, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def validate(self, net: Network) -> None:
        seen: set[str] = set()
        for entry in self.entries:
            if entry.variable in seen:
                raise ValueError(
                    f"intervention variable {entry.variable!r} listed twice"
                )
            seen.add(entry.variable)
            if not entry.values:
                raise ValueError(
                    f"intervention on {entry.variable!r} allows no values"
                )
            if len(set(entry.values)) != len(entry.values):
                raise ValueError(
                    f"intervention on {entry.variable!r} repeats a value"
                )
            for state in entry.values:
                net.state_index(entry.variable, state)

    def size(self) -> int:
        n = 1
        for entry in self.entries:
            n *= len(entry.values) + (1 if entry.may_abstain else 0)
        return n

    def assignments(self, net: Network) -> Iterator[dict[str, str]]:
        """All joint assignments in lexicographic order: variables by
        declaration order, abstention first, then states in declared order."""
        ordered = sorted(self.entries, key=lambda e: net.index(e.variable))
        options: list[list[str | None]] = []
        for entry in ordered:
            states = sorted(entry.values, key=lambda s: net.state_index(entry.variable, s))
            opts: list[str | None] = [None] if entry.may_abstain else []
            options.append(opts + states)
        for combo in itertools.product(*options):
            yield {
                entry.variable: state
                for entry, state in zip(ordered, combo)
                if state is not None
            }


def parse_intervention_space(doc: str) -> InterventionSpace:
    """Parse the JSON intervention-space document::

        {"interventions": [{"variable": "Therapy",
                            "values": ["none", "radio"],
                            "may_abstain": true}]}

    ``may_abstain`` defaults to true.
    """
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
            pos=exc.pos,
        ) from None
    if not isinstance(data, dict) or not isinstance(data.get("interventions"), list):
        raise DocumentSyntaxError(
            "expected an object with an 'interventions' array", path="$"
        )
    entries = []
    for i, raw in enumerate(data["interventions"]):
        path = f"$.interventions[{i}]"
        if not isinstance(raw, dict) or not isinstance(raw.get("variable"), str):
            raise DocumentSyntaxError(f"{path}: expected an object with 'variable'", path=path)
        values = raw.get("values")
        if not isinstance(values, list) or not all(isinstance(s, str) for s in values):
            raise DocumentSyntaxError(f"{path}.values: expected an array of strings", path=path)
        may_abstain = raw.get("may_abstain", True)
        if not isinstance(may_abstain, bool):
            raise DocumentSyntaxError(f"{path}.may_abstain: expected a boolean", path=path)
        entries.append(InterventionChoice(raw["variable"], tuple(values), may_abstain))
    return InterventionSpace(tuple(entries))


@dataclass(frozen=True)
class BoundResult:
    """Extremum of a target probability over a policy space, with the policy
    (``witness``) that attains it and how many assignments were evaluated."""

    direction: str
    value: float
    witness: dict[str, str]
    explored: int


# ---------------------------------------------------------------------------
# Graph mutilation


def apply_do(net: Network, do: DoAssignment) -> Network:
    """Mutilate the network: each intervened variable loses its parents and
    gets a point-mass CPT on the forced state.  Other CPTs are untouched."""
    validate_evidence(net, do)
    variables: list[Variable] = []
    cpts: list[Cpt] = []
    for var, cpt in zip(net.variables, net.cpts):
        if var.name in do:
            forced = net.state_index(var.name, do[var.name])
            row = tuple(1.0 if i == forced else 0.0 for i in range(var.cardinality))
            variables.append(Variable(var.name, var.states, ()))
            cpts.append(Cpt((row,)))
        else:
            variables.append(var)
            cpts.append(cpt)
    return Network(net.name, tuple(variables), tuple(cpts))


def interventional_query(
    net: Network,
    target: str,
    evidence: Evidence | None = None,
    do: DoAssignment | None = None,
) -> Distribution:
    """P(target | evidence, do(...)): condition on the mutilated network."""
    evidence = dict(evidence or {})
    do = dict(do or {})
    overlap = sorted(set(evidence) & set(do))
    if overlap:
        raise EvidenceOverlapError(
            f"variables {overlap} appear as both evidence and intervention",
            variables=overlap,
        )
    return query_posterior(apply_do(net, do), target, evidence)


# ---------------------------------------------------------------------------
# Exhaustive bound search


def search_extremum(
    net: Network,
    space: InterventionSpace,
    direction: str,
    score: Callable[[dict[str, str]], float | None],
    *,
    cap: int = DEFAULT_SPACE_CAP,
    progress: Callable[[int, int], None] | None = None,
    should_cancel: Callable[[], bool] | None = None,
) -> BoundResult:
    """Exact extremum of ``score`` over every assignment in the space.

    ``score`` may return None to mark an assignment undefined (contradictory
    evidence); the extremum is over the rest.  Exhaustive on purpose: spaces
    at clinical scale are small, and nothing here can exclude the optimum.
    """
    if direction not in ("max", "min"):
        raise ValueError(f"direction must be 'max' or 'min', got {direction!r}")
    space.validate(net)
    size = space.size()
    if size > cap:
        raise CapacityError(
            f"intervention space has {size} assignments, cap is {cap}",
            size=size,
            cap=cap,
        )

    best: float | None = None
    witness: dict[str, str] | None = None
    explored = 0
    for assignment in space.assignments(net):
        if should_cancel is not None and should_cancel():
            raise SearchCancelled("bound search cancelled", explored=explored)
        value = score(assignment)
        explored += 1
        if progress is not None:
            progress(explored, size)
        if value is None:
            continue
        if (
            best is None
            or (direction == "max" and value > best)
            or (direction == "min" and value < best)
        ):
            best = value
            witness = assignment
    if best is None or witness is None:
        raise InconsistentEvidenceError(
            "evidence has probability zero under every assignment in the space"
        )
    return BoundResult(direction, best, witness, explored)


def bound_interventions(
    net: Network,
    target: str,
    target_state: str,
    evidence: Evidence | None = None,
    space: InterventionSpace = InterventionSpace(),
    direction: str = "max",
    *,
    cap: int = DEFAULT_SPACE_CAP,
    progress: Callable[[int, int], None] | None = None,
    should_cancel: Callable[[], bool] | None = None,
) -> BoundResult:
    """Provable worst/best case of P(target=target_state | evidence, do(a))
    over ALL assignments a in the space.

    The empty space has exactly one assignment (intervene on nothing), so the
    result then equals the observational posterior.
    """
    evidence = dict(evidence or {})
    state_idx = net.state_index(target, target_state)
    validate_evidence(net, evidence)
    overlap = sorted({e.variable for e in space.entries} & set(evidence))
    if overlap:
        raise EvidenceOverlapError(
            f"intervention space covers evidence variables {overlap}",
            variables=overlap,
        )

    def score(assignment: dict[str, str]) -> float | None:
        try:
            dist = interventional_query(net, target, evidence, assignment)
        except InconsistentEvidenceError:
            return None
        return dist.probs[state_idx]

    return search_extremum(
        net,
        space,
        direction,
        score,
        cap=cap,
        progress=progress,
        should_cancel=should_cancel,
    )
