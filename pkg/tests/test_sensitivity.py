"""What-if tables and posterior-spread ranking."""

import pytest

from intervene_bn import (
    Cpt,
    Network,
    Variable,
    query_posterior,
    sensitivity_rank,
    suggest_features,
    what_if_table,
)
from intervene_bn.sensitivity import (
    parse_evidence_rows,
    render_sensitivity_tsv,
    render_what_if_tsv,
    sensitivity_payload,
    what_if_payload,
)

from conftest import oracle_posterior


@pytest.fixture()
def demo_plus_z(demo_net) -> Network:
    return Network(
        "demo+z",
        demo_net.variables + (Variable("Z", ("z0", "z1")),),
        demo_net.cpts + (Cpt(((0.5, 0.5),)),),
    )


def test_what_if_demo_rows(demo_net):
    rows = what_if_table(demo_net, [("Y", "y1")], [{}, {"X": "x1"}])
    assert [r.posteriors[0] for r in rows] == [
        pytest.approx(oracle_posterior(demo_net, "Y", {})[1], abs=1e-9),
        pytest.approx(oracle_posterior(demo_net, "Y", {"X": "x1"})[1], abs=1e-9),
    ]
    assert rows[0].posteriors[0] == pytest.approx(0.41, abs=1e-9)
    assert rows[1].posteriors[0] == pytest.approx(0.9, abs=1e-9)
    assert not rows[0].inconsistent


def test_what_if_empty_list(demo_net):
    assert what_if_table(demo_net, [("Y", "y1")], []) == []


def test_what_if_rows_match_query_posterior_bit_for_bit(demo_net):
    rows = what_if_table(
        demo_net, [("Y", "y1"), ("X", "x0")], [{}, {"X": "x0"}, {"Y": "y1"}]
    )
    for row in rows:
        assert row.posteriors[0] == query_posterior(demo_net, "Y", row.evidence).probs[1]
        assert row.posteriors[1] == query_posterior(demo_net, "X", row.evidence).probs[0]


def test_what_if_marks_inconsistent_rows():
    net = Network(
        "det",
        (Variable("A", ("a0", "a1")), Variable("B", ("b0", "b1"), ("A",))),
        (Cpt(((1.0, 0.0),)), Cpt(((1.0, 0.0), (0.0, 1.0)))),
    )
    rows = what_if_table(net, [("A", "a0")], [{}, {"B": "b1"}, {"B": "b0"}])
    assert len(rows) == 3
    assert not rows[0].inconsistent
    assert rows[1].inconsistent and rows[1].posteriors == (None,)
    assert not rows[2].inconsistent


def test_what_if_multiple_targets(demo_net):
    rows = what_if_table(demo_net, [("Y", "y1"), ("Y", "y0")], [{"X": "x0"}])
    assert rows[0].posteriors[0] == pytest.approx(0.2, abs=1e-9)
    assert rows[0].posteriors[1] == pytest.approx(0.8, abs=1e-9)


# ---------------------------------------------------------------------------
# Sensitivity ranking


def test_sensitivity_demo_spread(demo_net):
    entries = sensitivity_rank(demo_net, "Y", "y1", ["X"])
    assert len(entries) == 1
    assert entries[0].variable == "X"
    assert entries[0].spread == pytest.approx(0.7, abs=1e-9)
    assert dict(entries[0].per_state)["x0"] == pytest.approx(0.2, abs=1e-9)
    assert dict(entries[0].per_state)["x1"] == pytest.approx(0.9, abs=1e-9)


def test_sensitivity_independent_candidate_zero_spread(demo_plus_z):
    entries = sensitivity_rank(demo_plus_z, "Y", "y1", ["Z"])
    assert entries[0].spread <= 1e-9


def test_sensitivity_sorted_by_spread(demo_plus_z):
    entries = sensitivity_rank(demo_plus_z, "Y", "y1", ["Z", "X"])
    assert [e.variable for e in entries] == ["X", "Z"]


def test_sensitivity_tie_broken_by_declaration_order(demo_plus_z):
    net = Network(
        "demo+z2",
        demo_plus_z.variables + (Variable("Z2", ("q0", "q1")),),
        demo_plus_z.cpts + (Cpt(((0.5, 0.5),)),),
    )
    entries = sensitivity_rank(net, "Y", "y1", ["Z2", "Z"])
    assert entries[0].spread == entries[1].spread == 0.0  # an exact tie
    assert [e.variable for e in entries] == ["Z", "Z2"]


def test_sensitivity_spread_invariant_under_state_relabeling(demo_net):
    # Permuting a candidate's states changes nothing but the listing order.
    flipped = Network(
        "demo-flip",
        (Variable("X", ("x1", "x0")), demo_net.variables[1]),
        (Cpt(((0.3, 0.7),)), Cpt(((0.1, 0.9), (0.8, 0.2)))),
    )
    original = sensitivity_rank(demo_net, "Y", "y1", ["X"])[0].spread
    relabeled = sensitivity_rank(flipped, "Y", "y1", ["X"])[0].spread
    assert relabeled == pytest.approx(original, abs=1e-12)


def test_sensitivity_with_baseline(demo_net):
    net = Network(
        "chain3",
        (
            Variable("A", ("a0", "a1")),
            Variable("B", ("b0", "b1"), ("A",)),
            Variable("C", ("c0", "c1"), ("B",)),
        ),
        (
            Cpt(((0.6, 0.4),)),
            Cpt(((0.9, 0.1), (0.2, 0.8))),
            Cpt(((0.7, 0.3), (0.1, 0.9))),
        ),
    )
    entries = sensitivity_rank(net, "C", "c1", ["A"], baseline={"B": "b0"})
    # Given B, C is independent of A.
    assert entries[0].spread <= 1e-9


def test_sensitivity_skips_states_contradicting_baseline():
    net = Network(
        "det",
        (Variable("A", ("a0", "a1")), Variable("B", ("b0", "b1"), ("A",)),
         Variable("C", ("c0", "c1"), ("A",))),
        (
            Cpt(((0.5, 0.5),)),
            Cpt(((1.0, 0.0), (0.0, 1.0))),  # B copies A
            Cpt(((0.3, 0.7), (0.6, 0.4))),
        ),
    )
    entries = sensitivity_rank(net, "C", "c1", ["B"], baseline={"A": "a0"})
    # B=b1 contradicts A=a0 (B deterministically copies A).
    assert entries[0].skipped_states == ("b1",)
    assert entries[0].per_state == (("b0", pytest.approx(0.7, abs=1e-9)),)
    assert entries[0].spread == 0.0


def test_sensitivity_validation(demo_net):
    with pytest.raises(ValueError):
        sensitivity_rank(demo_net, "Y", "y1", ["Y"])
    with pytest.raises(ValueError):
        sensitivity_rank(demo_net, "Y", "y1", ["X"], baseline={"X": "x0"})
    with pytest.raises(ValueError):
        sensitivity_rank(demo_net, "Y", "y1", ["X", "X"])


def test_suggest_features(demo_plus_z):
    entries = sensitivity_rank(demo_plus_z, "Y", "y1", ["Z", "X"])
    assert suggest_features(entries) == ["X"]
    assert suggest_features(entries, cutoff=0.9) == []


# ---------------------------------------------------------------------------
# Renderings


def test_render_what_if_tsv(demo_net):
    targets = [("Y", "y1")]
    rows = what_if_table(demo_net, targets, [{}, {"X": "x1"}])
    text = render_what_if_tsv(targets, rows)
    lines = text.splitlines()
    assert lines[0] == "evidence\tmodalities\tP(Y=y1)"
    assert lines[1] == "(none)\t\t0.410000"
    assert lines[2] == "X\tx1\t0.900000"
    percent = render_what_if_tsv(targets, rows, percent=True).splitlines()
    assert percent[1].endswith("41.0")


def test_render_marks_inconsistent():
    net = Network(
        "det",
        (Variable("A", ("a0", "a1")), Variable("B", ("b0", "b1"), ("A",))),
        (Cpt(((1.0, 0.0),)), Cpt(((1.0, 0.0), (0.0, 1.0)))),
    )
    targets = [("A", "a0")]
    rows = what_if_table(net, targets, [{"B": "b1"}])
    assert "inconsistent" in render_what_if_tsv(targets, rows)
    payload = what_if_payload(targets, rows)
    assert payload["rows"][0]["inconsistent"] is True
    assert payload["rows"][0]["posteriors"] == [None]


def test_render_sensitivity_tsv(demo_net):
    entries = sensitivity_rank(demo_net, "Y", "y1", ["X"])
    text = render_sensitivity_tsv(entries)
    assert text.splitlines()[1] == "X\t0.700000\tx0=0.200000 x1=0.900000"
    payload = sensitivity_payload(entries)
    assert payload["entries"][0]["per_state"]["x1"] == pytest.approx(0.9, abs=1e-9)


def test_parse_evidence_rows():
    rows = parse_evidence_rows('[{},{"X":"x1"}]')
    assert rows == [{}, {"X": "x1"}]
    with pytest.raises(ValueError):
        parse_evidence_rows('{"X":"x1"}')
    with pytest.raises(ValueError):
        parse_evidence_rows('[{"X": 1}]')
