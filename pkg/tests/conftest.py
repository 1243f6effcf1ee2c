"""Shared fixtures: the bundled demo model, random-network generation and
brute-force oracles kept independent of the engine's inference path."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from intervene_bn import Cpt, Network, Variable, enumerate_joint, parse_network

REPO_ROOT = Path(__file__).resolve().parent.parent
MODELS_DIR = REPO_ROOT / "models"
DEMO_MODEL_PATH = MODELS_DIR / "demo.json"

#: Documented location of the externally published endometrial-cancer model;
#: conditional tests auto-skip when it is absent.
ENDORISK_PATH = MODELS_DIR / "endorisk.json"


@pytest.fixture(scope="session")
def demo_net() -> Network:
    return parse_network(DEMO_MODEL_PATH.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Random model corpus


def random_network(
    rng: np.random.Generator,
    max_vars: int = 8,
    max_states: int = 3,
    max_parents: int = 3,
) -> Network:
    """A random valid network with strictly positive CPT entries (so no
    evidence combination has probability zero) and a declaration order that
    is independent of the topological order."""
    n = int(rng.integers(2, max_vars + 1))
    topo = rng.permutation(n)  # topo[i] = declaration index of i-th topological node
    cards = [int(rng.integers(2, max_states + 1)) for _ in range(n)]
    parents: dict[int, list[int]] = {i: [] for i in range(n)}
    for pos in range(1, n):
        k = int(rng.integers(0, min(max_parents, pos) + 1))
        if k:
            picks = rng.choice(pos, size=k, replace=False)
            parents[int(topo[pos])] = [int(topo[p]) for p in sorted(picks)]

    names = [f"V{i}" for i in range(n)]
    variables = []
    cpts = []
    for i in range(n):
        states = tuple(f"s{j}" for j in range(cards[i]))
        par = tuple(names[p] for p in parents[i])
        n_rows = 1
        for p in parents[i]:
            n_rows *= cards[p]
        rows = []
        for _ in range(n_rows):
            weights = rng.uniform(0.1, 1.0, size=cards[i])
            rows.append(tuple(float(x) for x in weights / weights.sum()))
        variables.append(Variable(names[i], states, par))
        cpts.append(Cpt(tuple(rows)))
    return Network("random", tuple(variables), tuple(cpts))


def random_evidence(
    rng: np.random.Generator, net: Network, max_evidence: int = 3
) -> dict[str, str]:
    k = int(rng.integers(0, min(max_evidence, len(net.variables)) + 1))
    picks = rng.choice(len(net.variables), size=k, replace=False)
    out = {}
    for i in picks:
        var = net.variables[int(i)]
        out[var.name] = var.states[int(rng.integers(0, var.cardinality))]
    return out


# ---------------------------------------------------------------------------
# Independent oracles (enumeration-based; no variable elimination anywhere)


def oracle_posterior(net: Network, target: str, evidence: dict) -> list[float] | None:
    """Conditional distribution from the full joint table, or None when the
    evidence has probability zero."""
    states = net.variable(target).states
    numerators = {s: 0.0 for s in states}
    denominator = 0.0
    for assignment, p in enumerate_joint(net):
        if all(assignment[k] == v for k, v in evidence.items()):
            denominator += p
            numerators[assignment[target]] += p
    if denominator == 0.0:
        return None
    return [numerators[s] / denominator for s in states]


def truncated_joint(net: Network, do: dict, assignment: dict) -> float:
    """Interventional joint by the truncated factorization: drop intervened
    factors, clamp their values.  Table lookups only."""
    for name, state in do.items():
        if assignment[name] != state:
            return 0.0
    p = 1.0
    for var in net.variables:
        if var.name in do:
            continue
        row = 0
        for parent in var.parents:
            row = row * net.cardinality(parent) + net.state_index(
                parent, assignment[parent]
            )
        col = net.state_index(var.name, assignment[var.name])
        p *= net.cpt(var.name).rows[row][col]
    return p


def oracle_do_posterior(
    net: Network, target: str, evidence: dict, do: dict
) -> list[float] | None:
    """Interventional conditional from the truncated factorization."""
    states = net.variable(target).states
    numerators = {s: 0.0 for s in states}
    denominator = 0.0
    for assignment, _ in enumerate_joint(net):
        p = truncated_joint(net, do, assignment)
        if all(assignment[k] == v for k, v in evidence.items()):
            denominator += p
            numerators[assignment[target]] += p
    if denominator == 0.0:
        return None
    return [numerators[s] / denominator for s in states]
