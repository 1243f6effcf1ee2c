"""Exact posterior inference by variable elimination.

Factors are dense numpy arrays with one axis per in-scope variable, kept in
declaration order.  Elimination order comes from a min-fill heuristic unless
the caller supplies one; exactness never depends on the order, only cost.

Arithmetic runs in plain float64.  If the normalizer underflows to zero the
query is retried once in log-space, and only a log-space zero is reported as
inconsistent evidence (probability-zero evidence is an error here, never a
NaN: in a clinical what-if loop a contradiction must surface loudly).

:func:`enumerate_joint` is the brute-force oracle for everything else in this
package: it walks the full joint state space row by row.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, InconsistentEvidenceError
from .model import Evidence, Network, validate_evidence

#: Refuse to enumerate joints larger than this many assignments.
DEFAULT_ENUMERATION_CAP = 2**20

# Below this, a normalizer is treated as an underflow and the query retried
# in log-space before concluding the evidence is contradictory.
_UNDERFLOW = 1e-300

#: Total assignment of every variable to one of its states.
Assignment = Mapping[str, str]


@dataclass(frozen=True)
class Distribution:
    """Posterior over one variable; ``probs`` aligned with its state order."""

    variable: str
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))


# ---------------------------------------------------------------------------
# Factors


@dataclass
class _Factor:
    vars: tuple[str, ...]
    table: np.ndarray


def _cpt_factor(net: Network, name: str) -> _Factor:
    var = net.variable(name)
    cards = [net.cardinality(p) for p in var.parents]
    table = np.array(net.cpt(name).rows, dtype=np.float64)
    table = table.reshape(*cards, var.cardinality)
    return _Factor(tuple(var.parents) + (name,), table)


def _reduce(factor: _Factor, name: str, state_idx: int) -> _Factor:
    axis = factor.vars.index(name)
    table = np.take(factor.table, state_idx, axis=axis)
    scope = factor.vars[:axis] + factor.vars[axis + 1 :]
    return _Factor(scope, table)


def _aligned(factor: _Factor, union: tuple[str, ...], net: Network) -> np.ndarray:
    """Reshape/transpose a factor's table so it broadcasts over ``union``."""
    present = [v for v in union if v in factor.vars]
    table = np.transpose(factor.table, [factor.vars.index(v) for v in present])
    shape = [net.cardinality(v) if v in factor.vars else 1 for v in union]
    return table.reshape(shape)


def _multiply(factors: Sequence[_Factor], net: Network, log: bool) -> _Factor:
    if not factors:
        return _Factor((), np.array(0.0 if log else 1.0))
    union = tuple(
        sorted({v for f in factors for v in f.vars}, key=net.index)
    )
    acc = None
    for f in factors:
        aligned = _aligned(f, union, net)
        if acc is None:
            acc = np.broadcast_to(aligned, [net.cardinality(v) for v in union]).copy()
        elif log:
            acc = acc + aligned
        else:
            acc = acc * aligned
    return _Factor(union, acc)


def _sum_out(factor: _Factor, name: str, log: bool) -> _Factor:
    axis = factor.vars.index(name)
    if log:
        table = np.logaddexp.reduce(factor.table, axis=axis)
    else:
        table = factor.table.sum(axis=axis)
    scope = factor.vars[:axis] + factor.vars[axis + 1 :]
    return _Factor(scope, table)


def _min_fill_order(scopes: list[tuple[str, ...]], eliminate: set[str], net: Network) -> list[str]:
    """Order ``eliminate`` greedily by fewest fill-in edges, ties by
    declaration order."""
    adjacency: dict[str, set[str]] = {}
    for scope in scopes:
        for v in scope:
            adjacency.setdefault(v, set()).update(u for u in scope if u != v)
    for v in eliminate:
        adjacency.setdefault(v, set())

    order = []
    remaining = set(eliminate)
    while remaining:
        best = None
        best_fill = None
        for v in sorted(remaining, key=net.index):
            neighbors = [u for u in adjacency[v] if u in adjacency]
            fill = 0
            for a, b in itertools.combinations(neighbors, 2):
                if b not in adjacency[a]:
                    fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        assert best is not None
        neighbors = [u for u in adjacency[best] if u in adjacency]
        for a, b in itertools.combinations(neighbors, 2):
            adjacency[a].add(b)
            adjacency[b].add(a)
        for u in neighbors:
            adjacency[u].discard(best)
        del adjacency[best]
        remaining.discard(best)
        order.append(best)
    return order


def _run_elimination(
    net: Network,
    evidence: Evidence,
    keep: tuple[str, ...],
    order: Sequence[str] | None,
    log: bool,
) -> _Factor:
    """Eliminate everything outside ``keep`` and return the joint factor over
    ``keep`` (unnormalized)."""
    factors = [_cpt_factor(net, v.name) for v in net.variables]
    if log:
        with np.errstate(divide="ignore"):
            factors = [_Factor(f.vars, np.log(f.table)) for f in factors]
    for name, state in evidence.items():
        idx = net.state_index(name, state)
        factors = [
            _reduce(f, name, idx) if name in f.vars else f for f in factors
        ]

    to_eliminate = {
        v.name for v in net.variables if v.name not in keep and v.name not in evidence
    }
    if order is None:
        order = _min_fill_order([f.vars for f in factors], to_eliminate, net)
    else:
        if set(order) != to_eliminate:
            raise ValueError(
                f"elimination order must cover exactly {sorted(to_eliminate)}"
            )
    for name in order:
        bucket = [f for f in factors if name in f.vars]
        rest = [f for f in factors if name not in f.vars]
        if not bucket:
            continue
        product = _multiply(bucket, net, log)
        factors = rest + [_sum_out(product, name, log)]

    return _multiply(factors, net, log)


def joint_marginal(
    net: Network,
    variables: Sequence[str],
    evidence: Evidence | None = None,
) -> tuple[tuple[str, ...], np.ndarray]:
    """Unnormalized joint P(variables, evidence) as a dense table.

    Returns the kept variables in declaration order and an array with one axis
    per variable, in that order.  Entries sum to P(evidence).
    """
    evidence = dict(evidence or {})
    validate_evidence(net, evidence)
    for name in variables:
        net.variable(name)
        if name in evidence:
            raise ValueError(f"variable {name!r} is fixed by evidence")
    keep = tuple(sorted(set(variables), key=net.index))
    factor = _run_elimination(net, evidence, keep, None, log=False)
    return factor.vars, factor.table


def query_posterior(
    net: Network,
    target: str,
    evidence: Evidence | None = None,
    *,
    elimination_order: Sequence[str] | None = None,
) -> Distribution:
    """Exact P(target | evidence).

    ``elimination_order`` may name the non-target, non-evidence variables in
    any order; the result is identical either way.
    """
    evidence = dict(evidence or {})
    net.variable(target)
    validate_evidence(net, evidence)

    if target in evidence:
        # Evidence pins the target; still verify the evidence is possible.
        if _evidence_probability(net, evidence) <= 0.0:
            raise InconsistentEvidenceError(
                "evidence has probability zero", evidence=evidence
            )
        probs = [0.0] * net.cardinality(target)
        probs[net.state_index(target, evidence[target])] = 1.0
        return Distribution(target, tuple(probs))

    factor = _run_elimination(net, evidence, (target,), elimination_order, log=False)
    vec = np.asarray(factor.table, dtype=np.float64).reshape(-1)
    total = float(vec.sum())
    if total <= _UNDERFLOW:
        log_factor = _run_elimination(
            net, evidence, (target,), elimination_order, log=True
        )
        log_vec = np.asarray(log_factor.table).reshape(-1)
        top = float(np.max(log_vec))
        if top == -np.inf:
            raise InconsistentEvidenceError(
                "evidence has probability zero", evidence=evidence
            )
        vec = np.exp(log_vec - top)
        total = float(vec.sum())
    return Distribution(target, tuple(float(p) for p in vec / total))


def _evidence_probability(net: Network, evidence: Evidence) -> float:
    factor = _run_elimination(net, evidence, (), None, log=False)
    p = float(np.asarray(factor.table).reshape(()))
    if p <= _UNDERFLOW:
        log_factor = _run_elimination(net, evidence, (), None, log=True)
        lp = float(np.asarray(log_factor.table).reshape(()))
        return 0.0 if lp == -np.inf else math.exp(max(lp, -745.0))
    return p


# ---------------------------------------------------------------------------
# Brute-force oracle


def joint_probability(net: Network, assignment: Assignment) -> float:
    """Probability of one total assignment: the product over variables of the
    CPT entry selected by the assignment."""
    missing = [v.name for v in net.variables if v.name not in assignment]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    validate_evidence(net, assignment)
    p = 1.0
    for var in net.variables:
        row = 0
        for parent in var.parents:
            row = row * net.cardinality(parent) + net.state_index(
                parent, assignment[parent]
            )
        col = net.state_index(var.name, assignment[var.name])
        p *= net.cpt(var.name).rows[row][col]
    return p


def enumerate_joint(
    net: Network, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[tuple[dict[str, str], float]]:
    """Every total assignment with its probability; the verification oracle.

    Refuses (with a size report) when the state space exceeds ``cap``.
    """
    size = 1
    for var in net.variables:
        size *= var.cardinality
    if size > cap:
        raise CapacityError(
            f"joint has {size} assignments, cap is {cap}", size=size, cap=cap
        )
    names = [v.name for v in net.variables]
    out: list[tuple[dict[str, str], float]] = []
    for combo in itertools.product(*(v.states for v in net.variables)):
        assignment = dict(zip(names, combo))
        out.append((assignment, joint_probability(net, assignment)))
    return out
