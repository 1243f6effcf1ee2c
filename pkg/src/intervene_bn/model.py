"""Discrete Bayesian network data model, document parsing and validation.

A network document is UTF-8 JSON text::

    {"name": "demo",
     "variables": [
        {"name": "X", "states": ["x0", "x1"], "parents": [], "cpt": [[0.7, 0.3]]},
        {"name": "Y", "states": ["y0", "y1"], "parents": ["X"],
         "cpt": [[0.8, 0.2], [0.1, 0.9]]}]}

Each CPT has one row per parent-state combination (one row for roots) and one
column per own state.  Row order is row-major over the listed parents with the
LAST parent varying fastest.  Rows must sum to 1 within ``ROW_SUM_TOL``; they
are never renormalized, so authoring errors surface instead of being hidden.

All domain types are immutable after construction and safe to share across
threads.  Construction performs only cheap structural normalization; full
invariant checking lives in :func:`validate_network` (and therefore a
deliberately broken ``Network`` can be built in order to inspect its
violations).  :func:`parse_network` always validates and raises.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    CptShapeError,
    CycleError,
    DocumentSyntaxError,
    DuplicateNameError,
    ModelValidationError,
    RowSumError,
    UnknownParentError,
    UnknownStateError,
    UnknownVariableError,
)

#: Tolerance for |row sum - 1| in conditional probability tables.
ROW_SUM_TOL = 1e-9

#: Partial assignment of observed states, variable name -> state label.
Evidence = Mapping[str, str]


@dataclass(frozen=True)
class Variable:
    """A discrete variable: unique name, >=2 ordered states, ordered parents."""

    name: str
    states: tuple[str, ...]
    parents: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "parents", tuple(self.parents))

    @property
    def cardinality(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table: one row per parent combination, one
    column per own state.  Stored as plain floats so equality is exact."""

    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "rows", tuple(tuple(float(x) for x in row) for row in self.rows)
        )


@dataclass(frozen=True)
class Network:
    """An immutable Bayesian network: variables in declaration order plus one
    CPT per variable."""

    name: str
    variables: tuple[Variable, ...]
    cpts: tuple[Cpt, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cpts", tuple(self.cpts))
        object.__setattr__(
            self, "_index", {v.name: i for i, v in enumerate(self.variables)}
        )

    # -- lookups ---------------------------------------------------------

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        """Declaration index of a variable."""
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(
                f"unknown variable {name!r}", variable=name
            ) from None

    def variable(self, name: str) -> Variable:
        return self.variables[self.index(name)]

    def cpt(self, name: str) -> Cpt:
        return self.cpts[self.index(name)]

    def cardinality(self, name: str) -> int:
        return self.variable(name).cardinality

    def state_index(self, name: str, state: str) -> int:
        var = self.variable(name)
        try:
            return var.states.index(state)
        except ValueError:
            raise UnknownStateError(
                f"variable {name!r} has no state {state!r}",
                variable=name,
                state=state,
            ) from None


@dataclass(frozen=True)
class Violation:
    """One broken invariant: which variable, which rule, offending value."""

    variable: str | None
    rule: str
    value: object
    message: str

    def __str__(self):
        where = self.variable if self.variable is not None else "<network>"
        return f"{where}: {self.rule}: {self.message}"


# ---------------------------------------------------------------------------
# Validation


def validate_network(net: Network) -> list[Violation]:
    """Check every structural invariant; return one record per violation.

    An empty list means the network is valid.  Violations are data, not
    errors: this never raises.
    """
    out: list[Violation] = []
    names = [v.name for v in net.variables]
    seen: set[str] = set()
    for n in names:
        if n in seen:
            out.append(Violation(n, "duplicate-name", n, "variable declared twice"))
        seen.add(n)

    if len(net.cpts) != len(net.variables):
        out.append(
            Violation(
                None,
                "cpt-count",
                len(net.cpts),
                f"expected {len(net.variables)} CPTs, found {len(net.cpts)}",
            )
        )

    for i, var in enumerate(net.variables):
        if not var.name or not var.name.strip():
            out.append(Violation(var.name, "empty-name", var.name, "empty variable name"))
        if len(var.states) < 2:
            out.append(
                Violation(
                    var.name,
                    "state-count",
                    len(var.states),
                    f"needs >=2 states, has {len(var.states)}",
                )
            )
        state_seen: set[str] = set()
        for s in var.states:
            if s in state_seen:
                out.append(
                    Violation(var.name, "duplicate-state", s, f"state {s!r} repeated")
                )
            state_seen.add(s)
        parent_seen: set[str] = set()
        resolved = True
        for p in var.parents:
            if p == var.name:
                out.append(
                    Violation(var.name, "self-parent", p, "variable lists itself as parent")
                )
                resolved = False
            elif p not in net._index:
                out.append(
                    Violation(var.name, "unknown-parent", p, f"unknown parent {p!r}")
                )
                resolved = False
            if p in parent_seen:
                out.append(
                    Violation(var.name, "duplicate-parent", p, f"parent {p!r} repeated")
                )
                resolved = False
            parent_seen.add(p)

        if i >= len(net.cpts):
            continue
        cpt = net.cpts[i]
        if resolved:
            expected_rows = 1
            for p in var.parents:
                expected_rows *= net.variable(p).cardinality
            if len(cpt.rows) != expected_rows:
                out.append(
                    Violation(
                        var.name,
                        "cpt-shape",
                        len(cpt.rows),
                        f"expected {expected_rows} rows, found {len(cpt.rows)}",
                    )
                )
        for r, row in enumerate(cpt.rows):
            if len(row) != var.cardinality:
                out.append(
                    Violation(
                        var.name,
                        "cpt-shape",
                        len(row),
                        f"row {r} has {len(row)} entries, expected {var.cardinality}",
                    )
                )
            bad = [x for x in row if not (0.0 <= x <= 1.0) or math.isnan(x)]
            for x in bad:
                out.append(
                    Violation(
                        var.name,
                        "entry-range",
                        x,
                        f"row {r} entry {x!r} outside [0, 1]",
                    )
                )
            if not bad and len(row) == var.cardinality:
                total = math.fsum(row)
                if abs(total - 1.0) > ROW_SUM_TOL:
                    out.append(
                        Violation(
                            var.name,
                            "row-sum",
                            total,
                            f"row {r} sums to {total!r}, expected 1",
                        )
                    )

    if not any(v.rule in ("unknown-parent", "self-parent", "duplicate-name") for v in out):
        try:
            topological_order(net)
        except CycleError as exc:
            out.append(
                Violation(None, "cycle", exc.details.get("remaining"), str(exc))
            )
    return out


def topological_order(net: Network) -> list[str]:
    """Variable names with every parent before its children.

    Deterministic: among the variables whose parents are all placed, the one
    declared first is taken next.
    """
    placed: set[str] = set()
    order: list[str] = []
    pending = [v for v in net.variables]
    while pending:
        for i, var in enumerate(pending):
            if all(p in placed for p in var.parents):
                order.append(var.name)
                placed.add(var.name)
                del pending[i]
                break
        else:
            remaining = [v.name for v in pending]
            raise CycleError(
                f"cycle among variables {remaining}", remaining=remaining
            )
    return order


# ---------------------------------------------------------------------------
# Parsing

_RULE_ERRORS = {
    "duplicate-name": DuplicateNameError,
    "unknown-parent": UnknownParentError,
    "self-parent": CycleError,
    "cpt-shape": CptShapeError,
    "cpt-count": CptShapeError,
    "row-sum": RowSumError,
    "cycle": CycleError,
}


def _expect(cond: bool, path: str, what: str):
    if not cond:
        raise DocumentSyntaxError(f"{path}: expected {what}", path=path)


def _string_list(value, path: str) -> tuple[str, ...]:
    _expect(isinstance(value, list), path, "an array of strings")
    for j, s in enumerate(value):
        _expect(isinstance(s, str), f"{path}[{j}]", "a string")
    return tuple(value)


def parse_network(doc: str) -> Network:
    """Parse a network document; raise a typed error on any defect.

    The returned network satisfies every invariant checked by
    :func:`validate_network`.
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

    _expect(isinstance(data, dict), "$", "an object")
    name = data.get("name")
    _expect(isinstance(name, str), "$.name", "a string")
    raw_vars = data.get("variables")
    _expect(isinstance(raw_vars, list), "$.variables", "an array")

    variables: list[Variable] = []
    cpts: list[Cpt] = []
    for i, raw in enumerate(raw_vars):
        path = f"$.variables[{i}]"
        _expect(isinstance(raw, dict), path, "an object")
        vname = raw.get("name")
        _expect(isinstance(vname, str), f"{path}.name", "a string")
        states = _string_list(raw.get("states"), f"{path}.states")
        parents = _string_list(raw.get("parents", []), f"{path}.parents")
        raw_cpt = raw.get("cpt")
        _expect(isinstance(raw_cpt, list), f"{path}.cpt", "an array of rows")
        rows = []
        for r, raw_row in enumerate(raw_cpt):
            _expect(isinstance(raw_row, list), f"{path}.cpt[{r}]", "an array of numbers")
            for c, x in enumerate(raw_row):
                _expect(
                    isinstance(x, (int, float)) and not isinstance(x, bool),
                    f"{path}.cpt[{r}][{c}]",
                    "a number",
                )
            rows.append(tuple(float(x) for x in raw_row))
        variables.append(Variable(vname, states, parents))
        cpts.append(Cpt(tuple(rows)))

    net = Network(name, tuple(variables), tuple(cpts))
    violations = validate_network(net)
    if violations:
        first = violations[0]
        cls = _RULE_ERRORS.get(first.rule, ModelValidationError)
        raise cls(str(first), violations=violations)
    return net


# ---------------------------------------------------------------------------
# Serialization


def _num(x: float) -> str:
    # 17 significant digits round-trip any float64 exactly.
    return format(float(x), ".17g")


def serialize_network(net: Network) -> str:
    """Emit the canonical document: declaration order, one CPT row per line,
    17-significant-digit numbers.  Byte-stable for a given network."""
    out = ["{", f'  "name": {json.dumps(net.name, ensure_ascii=False)},']
    out.append('  "variables": [')
    for i, (var, cpt) in enumerate(zip(net.variables, net.cpts)):
        out.append("    {")
        out.append(f'      "name": {json.dumps(var.name, ensure_ascii=False)},')
        states = ", ".join(json.dumps(s, ensure_ascii=False) for s in var.states)
        out.append(f'      "states": [{states}],')
        parents = ", ".join(json.dumps(p, ensure_ascii=False) for p in var.parents)
        out.append(f'      "parents": [{parents}],')
        out.append('      "cpt": [')
        for r, row in enumerate(cpt.rows):
            comma = "," if r + 1 < len(cpt.rows) else ""
            out.append("        [" + ", ".join(_num(x) for x in row) + "]" + comma)
        out.append("      ]")
        out.append("    }" + ("," if i + 1 < len(net.variables) else ""))
    out.append("  ]")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Evidence helpers


def validate_evidence(net: Network, evidence: Evidence) -> None:
    """Raise if any evidence variable or state does not exist."""
    for name, state in evidence.items():
        net.state_index(name, state)


def parse_state_assignment(net: Network, pairs: Iterable[str]) -> dict[str, str]:
    """Turn ``["X=x1", "Y=y0"]`` into a validated dict; duplicates rejected."""
    out: dict[str, str] = {}
    for item in pairs:
        name, sep, state = item.partition("=")
        if not sep:
            raise ValueError(f"expected VARIABLE=STATE, got {item!r}")
        if name in out:
            raise ValueError(f"variable {name!r} assigned twice")
        net.state_index(name, state)
        out[name] = state
    return out
