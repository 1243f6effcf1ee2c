"""Exact inference against the enumeration oracle."""

import itertools
import math

import numpy as np
import pytest

from intervene_bn import (
    CapacityError,
    Cpt,
    InconsistentEvidenceError,
    Network,
    UnknownStateError,
    Variable,
    enumerate_joint,
    joint_marginal,
    joint_probability,
    query_posterior,
)

from conftest import oracle_posterior, random_evidence, random_network


def test_posterior_no_evidence_matches_enumeration(demo_net):
    # Oracle: 0.7 * 0.2 + 0.3 * 0.9 = 0.41.
    expected = oracle_posterior(demo_net, "Y", {})
    assert expected[1] == pytest.approx(0.41, abs=1e-12)
    dist = query_posterior(demo_net, "Y")
    assert dist.variable == "Y"
    assert dist.probs[1] == pytest.approx(0.41, abs=1e-9)
    assert dist.probs[0] == pytest.approx(0.59, abs=1e-9)


def test_posterior_evidence_on_target(demo_net):
    dist = query_posterior(demo_net, "Y", {"Y": "y1"})
    assert dist.probs == (0.0, 1.0)


def test_posterior_with_evidence(demo_net):
    expected = oracle_posterior(demo_net, "Y", {"X": "x1"})
    dist = query_posterior(demo_net, "Y", {"X": "x1"})
    assert dist.probs[1] == pytest.approx(expected[1], abs=1e-9)
    assert dist.probs[1] == pytest.approx(0.9, abs=1e-9)


def test_posterior_rejects_unknown_state(demo_net):
    with pytest.raises(UnknownStateError):
        query_posterior(demo_net, "Y", {"X": "nope"})


def test_inconsistent_evidence_is_an_error_not_nan():
    net = Network(
        "det",
        (
            Variable("A", ("a0", "a1")),
            Variable("B", ("b0", "b1"), ("A",)),
        ),
        (
            Cpt(((1.0, 0.0),)),  # A is always a0
            Cpt(((1.0, 0.0), (0.0, 1.0))),  # B copies A
        ),
    )
    with pytest.raises(InconsistentEvidenceError):
        query_posterior(net, "A", {"B": "b1"})
    with pytest.raises(InconsistentEvidenceError):
        query_posterior(net, "B", {"A": "a1", "B": "b0"})


def test_joint_probability_demo(demo_net):
    assert joint_probability(demo_net, {"X": "x1", "Y": "y1"}) == pytest.approx(
        0.27, abs=1e-15
    )
    assert joint_probability(demo_net, {"X": "x0", "Y": "y0"}) == pytest.approx(
        0.56, abs=1e-15
    )


def test_joint_probability_zero_path():
    net = Network(
        "zero",
        (Variable("A", ("a0", "a1")), Variable("B", ("b0", "b1"), ("A",))),
        (Cpt(((1.0, 0.0),)), Cpt(((0.5, 0.5), (0.5, 0.5)))),
    )
    assert joint_probability(net, {"A": "a1", "B": "b0"}) == 0.0


def test_joint_probability_requires_total_assignment(demo_net):
    with pytest.raises(ValueError):
        joint_probability(demo_net, {"X": "x0"})


def test_enumerate_demo(demo_net):
    table = enumerate_joint(demo_net)
    assert len(table) == 4
    assert math.fsum(p for _, p in table) == pytest.approx(1.0, abs=1e-9)


def test_enumerate_single_root():
    net = Network(
        "root", (Variable("R", ("r0", "r1")),), (Cpt(((0.25, 0.75),)),)
    )
    table = enumerate_joint(net)
    assert [p for _, p in table] == [0.25, 0.75]


def test_enumerate_cap():
    variables = tuple(Variable(f"B{i}", ("0", "1")) for i in range(21))
    cpts = tuple(Cpt(((0.5, 0.5),)) for _ in range(21))
    net = Network("big", variables, cpts)
    with pytest.raises(CapacityError) as err:
        enumerate_joint(net)
    assert err.value.details["size"] == 2**21
    assert err.value.details["cap"] == 2**20


def test_enumerate_explicit_cap(demo_net):
    with pytest.raises(CapacityError):
        enumerate_joint(demo_net, cap=3)
    assert len(enumerate_joint(demo_net, cap=4)) == 4


def test_oracle_equivalence_random_corpus():
    rng = np.random.default_rng(23)
    for _ in range(30):
        net = random_network(rng, max_vars=6)
        evidence = random_evidence(rng, net)
        expected = oracle_posterior(net, net.variables[0].name, evidence)
        dist = query_posterior(net, net.variables[0].name, evidence)
        assert max(
            abs(a - b) for a, b in zip(dist.probs, expected)
        ) <= 1e-9


def test_distributions_normalize():
    rng = np.random.default_rng(29)
    for _ in range(20):
        net = random_network(rng)
        evidence = random_evidence(rng, net)
        for var in net.variables:
            if var.name in evidence:
                continue
            dist = query_posterior(net, var.name, evidence)
            assert abs(math.fsum(dist.probs) - 1.0) <= 1e-9
            assert all(0.0 <= p <= 1.0 for p in dist.probs)


def test_marginal_consistency():
    # Sum over e of P(E=e) * P(T | E=e) equals P(T).
    rng = np.random.default_rng(31)
    for _ in range(10):
        net = random_network(rng, max_vars=6)
        target = net.variables[-1].name
        cond = net.variables[0].name
        if cond == target:
            continue
        marginal = query_posterior(net, target).probs
        cond_dist = query_posterior(net, cond).probs
        mixed = [0.0] * len(marginal)
        for idx, state in enumerate(net.variable(cond).states):
            posterior = query_posterior(net, target, {cond: state}).probs
            for k, p in enumerate(posterior):
                mixed[k] += cond_dist[idx] * p
        assert max(abs(a - b) for a, b in zip(mixed, marginal)) <= 1e-8


def test_elimination_order_independence():
    rng = np.random.default_rng(37)
    for _ in range(10):
        net = random_network(rng, max_vars=6)
        evidence = random_evidence(rng, net, max_evidence=2)
        target = next(
            v.name for v in net.variables if v.name not in evidence
        )
        rest = [
            v.name
            for v in net.variables
            if v.name != target and v.name not in evidence
        ]
        reference = query_posterior(net, target, evidence).probs
        orders = list(itertools.permutations(rest)) if len(rest) <= 3 else [
            tuple(rng.permutation(rest)) for _ in range(6)
        ]
        for order in orders:
            probs = query_posterior(
                net, target, evidence, elimination_order=list(order)
            ).probs
            assert max(abs(a - b) for a, b in zip(probs, reference)) <= 1e-9


def test_elimination_order_must_cover_remaining(demo_net):
    with pytest.raises(ValueError):
        query_posterior(demo_net, "Y", elimination_order=["Y"])


def test_log_space_retry_on_underflow():
    # 18 independent roots each with a 1e-20 state: conditioning on all of
    # them underflows the linear-space normalizer (1e-360 -> 0.0), but the
    # posterior of a dependent variable is still perfectly well defined.
    n = 18
    variables = [Variable(f"R{i}", ("lo", "hi")) for i in range(n)]
    cpts = [Cpt(((1e-20, 1.0 - 1e-20),)) for _ in range(n)]
    variables.append(Variable("T", ("t0", "t1"), ("R0",)))
    cpts.append(Cpt(((0.3, 0.7), (0.6, 0.4))))
    net = Network("under", tuple(variables), tuple(cpts))
    evidence = {f"R{i}": "lo" for i in range(n)}
    dist = query_posterior(net, "T", evidence)
    assert dist.probs[0] == pytest.approx(0.3, abs=1e-9)
    # And pinned-target queries survive the same underflow.
    pinned = query_posterior(net, "R0", {**evidence})
    assert pinned.probs == (1.0, 0.0)


def test_joint_marginal_demo(demo_net):
    kept, table = joint_marginal(demo_net, ["X", "Y"])
    assert kept == ("X", "Y")
    assert table[0][0] == pytest.approx(0.56, abs=1e-12)
    assert table[1][1] == pytest.approx(0.27, abs=1e-12)
    assert float(table.sum()) == pytest.approx(1.0, abs=1e-9)


def test_joint_marginal_respects_evidence(demo_net):
    kept, table = joint_marginal(demo_net, ["Y"], {"X": "x1"})
    assert kept == ("Y",)
    # Unnormalized: sums to P(X=x1).
    assert float(table.sum()) == pytest.approx(0.3, abs=1e-12)
