"""
What-if tables, sensitivity ranking and risk groups
===================================================

Reproduces the desk workflow: evaluate a grid of evidence scenarios, rank
candidate observations by how much they move the outcome, and band the
resulting probabilities into named risk groups.
"""

from pathlib import Path

from intervene_bn import (
    DEFAULT_RISK_TABLE,
    parse_network,
    risk_group,
    sensitivity_rank,
    suggest_features,
    what_if_table,
)
from intervene_bn.sensitivity import render_what_if_tsv

MODEL = Path(__file__).resolve().parent.parent / "models" / "demo.json"
net = parse_network(MODEL.read_text(encoding="utf-8"))

# One row per evidence scenario, one column per target probability.
targets = [("Y", "y1")]
scenarios = [{}, {"X": "x0"}, {"X": "x1"}]
rows = what_if_table(net, targets, scenarios)
print(render_what_if_tsv(targets, rows), end="")

# Each probability lands in a named band (the banding used for reporting).
print("\nrisk groups:")
for row in rows:
    p = row.posteriors[0]
    print(f"  P={p:.3f} -> {risk_group(DEFAULT_RISK_TABLE, p)}")

# Which observation would move the outcome most?  Spread = max - min of the
# posterior across a candidate's states; big spreads make good classifier
# features.
entries = sensitivity_rank(net, "Y", "y1", ["X"])
for e in entries:
    detail = ", ".join(f"{s}: {p:.3f}" for s, p in e.per_state)
    print(f"\nspread({e.variable}) = {e.spread:.3f}  ({detail})")
print("suggested features:", suggest_features(entries) or "(none)")
