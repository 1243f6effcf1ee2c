"""Posterior-threshold classifiers, decision-diagram compilation, risk groups.

A classifier predicts positive iff P(target=positive | features) >= threshold.
:func:`compile_odd` turns one into an ordered decision diagram: a branching
program that tests features in a fixed order and is reduced to canonical form
(identical subfunctions shared, redundant tests removed), so two compilations
of the same configuration are byte-identical and diagram evaluation agrees
with :func:`classify` on every feature instantiation.

Feature instantiations with zero probability under the model cannot be
classified directly (the posterior is undefined); the diagram labels them as
if the posterior were 0, which keeps threshold-0 classifiers constant-positive
and never affects any reachable instantiation.

Risk groups follow the banded table used for reporting: probabilities map to
ordered, contiguous bands covering [0, 1].
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .causal import (
    DEFAULT_SPACE_CAP,
    BoundResult,
    InterventionSpace,
    apply_do,
    search_extremum,
)
from .errors import CapacityError, DocumentSyntaxError
from .inference import joint_marginal, query_posterior
from .model import Network

#: Refuse to compile classifiers with more feature instantiations than this.
DEFAULT_ODD_CAP = 2**20

POSITIVE = "positive"
NEGATIVE = "negative"

#: Terminal references in a decision diagram.
TERMINAL_POSITIVE = "T+"
TERMINAL_NEGATIVE = "T-"


# ---------------------------------------------------------------------------
# Risk bands


@dataclass(frozen=True)
class RiskBand:
    """One band: [lower, upper) — the last band is closed at 1."""

    lower: float
    upper: float
    group: str


@dataclass(frozen=True)
class RiskTable:
    """Ordered bands mapping a probability to a risk-group label; bands must
    be contiguous, non-overlapping and cover [0, 1]."""

    bands: tuple[RiskBand, ...]

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple(self.bands))
        if not self.bands:
            raise ValueError("risk table needs at least one band")
        if self.bands[0].lower != 0.0 or self.bands[-1].upper != 1.0:
            raise ValueError("risk bands must cover [0, 1]")
        for a, b in zip(self.bands, self.bands[1:]):
            if a.upper != b.lower:
                raise ValueError(
                    f"risk bands must be contiguous: {a.group!r} ends at "
                    f"{a.upper}, {b.group!r} starts at {b.lower}"
                )
        for band in self.bands:
            if not band.lower < band.upper:
                raise ValueError(f"empty risk band {band.group!r}")

    def group(self, p: float) -> str:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p!r} outside [0, 1]")
        for band in self.bands:
            if band.lower <= p < band.upper:
                return band.group
        return self.bands[-1].group  # p == 1.0


#: The published LNM banding, with the printed gaps closed into half-open
#: intervals so that every probability belongs to exactly one group.
DEFAULT_RISK_TABLE = RiskTable(
    (
        RiskBand(0.0, 0.01, "Very low"),
        RiskBand(0.01, 0.06, "Low"),
        RiskBand(0.06, 0.16, "Intermediate"),
        RiskBand(0.16, 0.26, "High-intermediate"),
        RiskBand(0.26, 1.0, "High"),
    )
)


def risk_group(table: RiskTable, p: float) -> str:
    """Label of the unique band containing ``p``."""
    return table.group(p)


def parse_risk_table(data) -> RiskTable:
    """Build a risk table from ``[{"lower": .., "upper": .., "group": ..}]``."""
    if not isinstance(data, list):
        raise DocumentSyntaxError("risk table: expected an array of bands", path="$")
    bands = []
    for i, raw in enumerate(data):
        if (
            not isinstance(raw, dict)
            or not isinstance(raw.get("group"), str)
            or not isinstance(raw.get("lower"), (int, float))
            or not isinstance(raw.get("upper"), (int, float))
        ):
            raise DocumentSyntaxError(
                f"risk table band {i}: expected lower, upper, group",
                path=f"$[{i}]",
            )
        bands.append(RiskBand(float(raw["lower"]), float(raw["upper"]), raw["group"]))
    return RiskTable(tuple(bands))


# ---------------------------------------------------------------------------
# Classifier configuration


@dataclass(frozen=True)
class ClassifierConfig:
    model_ref: str
    target: str
    positive_state: str
    features: tuple[str, ...]
    threshold: float

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))


def validate_config(net: Network, cfg: ClassifierConfig) -> None:
    net.state_index(cfg.target, cfg.positive_state)
    if len(set(cfg.features)) != len(cfg.features):
        raise ValueError("classifier features repeat a variable")
    for f in cfg.features:
        net.variable(f)
        if f == cfg.target:
            raise ValueError(f"target {cfg.target!r} cannot be a feature")
    if not 0.0 <= cfg.threshold <= 1.0:
        raise ValueError(f"threshold {cfg.threshold!r} outside [0, 1]")


def parse_classifier_config(doc: str) -> ClassifierConfig:
    """Parse the JSON classifier document::

        {"model": "endorisk.json",
         "target": {"variable": "LNM", "positive_state": "yes"},
         "features": ["PreoperativeGrade", "CA125"],
         "threshold": 0.05}
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
    if not isinstance(data, dict):
        raise DocumentSyntaxError("expected an object", path="$")
    model = data.get("model")
    target = data.get("target")
    features = data.get("features")
    threshold = data.get("threshold")
    if not isinstance(model, str):
        raise DocumentSyntaxError("$.model: expected a string", path="$.model")
    if (
        not isinstance(target, dict)
        or not isinstance(target.get("variable"), str)
        or not isinstance(target.get("positive_state"), str)
    ):
        raise DocumentSyntaxError(
            "$.target: expected {'variable', 'positive_state'}", path="$.target"
        )
    if not isinstance(features, list) or not all(isinstance(f, str) for f in features):
        raise DocumentSyntaxError(
            "$.features: expected an array of strings", path="$.features"
        )
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise DocumentSyntaxError("$.threshold: expected a number", path="$.threshold")
    return ClassifierConfig(
        model, target["variable"], target["positive_state"], tuple(features), float(threshold)
    )


# ---------------------------------------------------------------------------
# Direct classification


@dataclass(frozen=True)
class Classification:
    label: str
    posterior: float
    group: str


def classify(
    net: Network,
    cfg: ClassifierConfig,
    features: Mapping[str, str],
    *,
    risk_table: RiskTable = DEFAULT_RISK_TABLE,
) -> Classification:
    """Classify one fully observed feature vector.

    Every configured feature must be assigned; a partial assignment is an
    error rather than a silently marginalized query.
    """
    validate_config(net, cfg)
    missing = [f for f in cfg.features if f not in features]
    if missing:
        raise ValueError(f"feature assignment misses {missing}")
    extra = [f for f in features if f not in cfg.features]
    if extra:
        raise ValueError(f"feature assignment has unknown features {extra}")
    dist = query_posterior(net, cfg.target, features)
    posterior = dist.probs[net.state_index(cfg.target, cfg.positive_state)]
    label = POSITIVE if posterior >= cfg.threshold else NEGATIVE
    return Classification(label, posterior, risk_table.group(posterior))


# ---------------------------------------------------------------------------
# Decision diagrams


@dataclass(frozen=True)
class OddNode:
    """Decision node: test ``variable``, follow ``children[state index]``.
    Children are node ids or the terminal markers ``T+`` / ``T-``."""

    id: int
    variable: str
    children: tuple[int | str, ...]


@dataclass(frozen=True)
class Odd:
    """Reduced ordered decision diagram for a threshold classifier.

    ``order`` is the variable test order (may be empty for diagrams read back
    from disk — evaluation never needs it).  ``root`` is a node id or a
    terminal marker.  Node ids are assigned in post-order of construction, so
    structurally equal diagrams serialize identically.
    """

    order: tuple[str, ...]
    nodes: tuple[OddNode, ...]
    root: int | str
    _by_id: dict = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {n.id: n for n in self.nodes})

    def node(self, ref: int | str) -> OddNode:
        node = self._by_id.get(ref)
        if node is None:
            raise ValueError(f"no node with id {ref!r}")
        return node

    def evaluate(self, net: Network, features: Mapping[str, str]) -> str:
        """Follow the diagram for one feature assignment; returns the label."""
        ref = self.root
        while ref not in (TERMINAL_POSITIVE, TERMINAL_NEGATIVE):
            node = self.node(ref)
            if node.variable not in features:
                raise ValueError(f"feature assignment misses {node.variable!r}")
            idx = net.state_index(node.variable, features[node.variable])
            if idx >= len(node.children):
                raise ValueError(
                    f"node {node.id} of {node.variable!r} has no child for "
                    f"state {features[node.variable]!r}"
                )
            ref = node.children[idx]
        return POSITIVE if ref == TERMINAL_POSITIVE else NEGATIVE


def _ref_str(ref: int | str) -> str:
    return ref if isinstance(ref, str) else str(ref)


def serialize_odd(odd: Odd) -> str:
    """One node per line, tab-separated, root reference on line 1."""
    lines = [_ref_str(odd.root)]
    for node in odd.nodes:
        lines.append(
            "\t".join([str(node.id), node.variable] + [_ref_str(c) for c in node.children])
        )
    return "\n".join(lines) + "\n"


def parse_odd(text: str, order: Sequence[str] = ()) -> Odd:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DocumentSyntaxError("empty diagram file", path="line 1")

    def ref(token: str) -> int | str:
        if token in (TERMINAL_POSITIVE, TERMINAL_NEGATIVE):
            return token
        try:
            return int(token)
        except ValueError:
            raise DocumentSyntaxError(
                f"bad node reference {token!r}", path="diagram"
            ) from None

    root = ref(lines[0].strip())
    nodes = []
    for line in lines[1:]:
        parts = line.split("\t")
        if len(parts) < 4:
            raise DocumentSyntaxError(
                f"node line needs id, variable and >=2 children: {line!r}",
                path="diagram",
            )
        nodes.append(OddNode(int(parts[0]), parts[1], tuple(ref(t) for t in parts[2:])))
    odd = Odd(tuple(order), tuple(nodes), root)
    if not isinstance(root, str):
        odd.node(root)
    return odd


def _label_table(net: Network, cfg: ClassifierConfig, cap: int) -> np.ndarray:
    """Boolean label for every feature instantiation, axes in cfg order.

    Cells with zero marginal probability get the label of posterior 0.
    """
    size = 1
    for f in cfg.features:
        size *= net.cardinality(f)
    if size > cap:
        raise CapacityError(
            f"classifier has {size} feature instantiations, cap is {cap}",
            size=size,
            cap=cap,
        )
    if not cfg.features:
        dist = query_posterior(net, cfg.target)
        posterior = dist.probs[net.state_index(cfg.target, cfg.positive_state)]
        return np.array(posterior >= cfg.threshold)

    kept, joint = joint_marginal(net, list(cfg.features) + [cfg.target])
    perm = [kept.index(f) for f in cfg.features] + [kept.index(cfg.target)]
    joint = np.transpose(joint, perm)
    pos = joint[..., net.state_index(cfg.target, cfg.positive_state)]
    denom = joint.sum(axis=-1)
    posterior = np.zeros_like(denom)
    np.divide(pos, denom, out=posterior, where=denom > 0)
    return posterior >= cfg.threshold


def _greedy_order(labels: np.ndarray, features: tuple[str, ...]) -> list[int]:
    """Pick a test order by repeatedly taking the axis that yields the fewest
    distinct subfunctions.  Heuristic only; never changes semantics."""
    k = labels.ndim
    chosen: list[int] = []
    remaining = list(range(k))
    while remaining:
        best_axis = None
        best_count = None
        for axis in remaining:
            axes = chosen + [axis]
            rest = [i for i in range(k) if i not in axes]
            lead = int(np.prod([labels.shape[i] for i in axes], dtype=np.int64))
            flat = np.transpose(labels, axes + rest).reshape(lead, -1)
            count = np.unique(flat, axis=0).shape[0]
            if best_count is None or count < best_count:
                best_axis, best_count = axis, count
        chosen.append(best_axis)
        remaining.remove(best_axis)
    return chosen


def compile_odd(
    net: Network,
    cfg: ClassifierConfig,
    *,
    order: str | Sequence[str] = "config",
    reduce: bool = True,
    cap: int = DEFAULT_ODD_CAP,
) -> Odd:
    """Compile the classifier into an ordered decision diagram.

    ``order`` is "config" (feature order as configured), "greedy" (node-count
    minimizing heuristic), or an explicit permutation of the features.  With
    ``reduce`` off, the full decision tree is built instead — useful only to
    check that reduction does not change any evaluation.
    """
    validate_config(net, cfg)
    labels = _label_table(net, cfg, cap)

    if isinstance(order, str) and order == "config":
        axes = list(range(len(cfg.features)))
    elif isinstance(order, str) and order == "greedy":
        axes = _greedy_order(labels, cfg.features)
    elif isinstance(order, str):
        raise ValueError(f"unknown order {order!r}")
    else:
        requested = tuple(order)
        if sorted(requested) != sorted(cfg.features):
            raise ValueError("order must be a permutation of the features")
        axes = [cfg.features.index(f) for f in requested]

    ordered_vars = tuple(cfg.features[a] for a in axes)
    table = np.transpose(labels, axes) if labels.ndim else labels

    nodes: list[OddNode] = []
    interned: dict = {}

    def build(level: int, sub: np.ndarray) -> int | str:
        if level == len(ordered_vars):
            return TERMINAL_POSITIVE if bool(sub) else TERMINAL_NEGATIVE
        key = (level, sub.tobytes())
        if reduce and key in interned:
            return interned[key]
        children = tuple(build(level + 1, sub[i]) for i in range(sub.shape[0]))
        if reduce and all(c == children[0] for c in children):
            ref: int | str = children[0]
        else:
            ref = len(nodes)
            nodes.append(OddNode(ref, ordered_vars[level], children))
        if reduce:
            interned[key] = ref
        return ref

    root = build(0, table)
    return Odd(ordered_vars, tuple(nodes), root)


# ---------------------------------------------------------------------------
# Classifier error probabilities under interventions


@dataclass(frozen=True)
class ErrorRates:
    """Joint misclassification probabilities plus the conditional rates
    (None when the conditioning event has probability zero)."""

    false_negative: float
    false_positive: float
    fn_given_positive: float | None
    fp_given_negative: float | None


def _error_components(
    net: Network, cfg: ClassifierConfig, labels: np.ndarray, do: Mapping[str, str]
) -> tuple[float, float, float, float]:
    """(joint FN, joint FP, P(target positive), total mass) under do(...)."""
    mutilated = apply_do(net, do)
    kept, joint = joint_marginal(mutilated, list(cfg.features) + [cfg.target])
    perm = [kept.index(f) for f in cfg.features] + [kept.index(cfg.target)]
    joint = np.transpose(joint, perm)
    pos = joint[..., net.state_index(cfg.target, cfg.positive_state)]
    total = float(joint.sum())
    p_pos = float(pos.sum())
    fn = float((pos * ~labels).sum())
    fp = float(((joint.sum(axis=-1) - pos) * labels).sum())
    return fn, fp, p_pos, total


def error_rates(
    net: Network, cfg: ClassifierConfig, do: Mapping[str, str] | None = None
) -> ErrorRates:
    """Misclassification probabilities of the compiled classifier under one
    intervention (observational when ``do`` is empty)."""
    validate_config(net, cfg)
    labels = _label_table(net, cfg, DEFAULT_ODD_CAP)
    fn, fp, p_pos, total = _error_components(net, cfg, labels, dict(do or {}))
    p_neg = total - p_pos
    return ErrorRates(
        false_negative=fn,
        false_positive=fp,
        fn_given_positive=(fn / p_pos) if p_pos > 0 else None,
        fp_given_negative=(fp / p_neg) if p_neg > 0 else None,
    )


def error_bound(
    net: Network,
    cfg: ClassifierConfig,
    kind: str,
    space: InterventionSpace,
    direction: str,
    *,
    cap: int = DEFAULT_SPACE_CAP,
    progress=None,
    should_cancel=None,
) -> BoundResult:
    """Extremum over the intervention space of the classifier's joint error
    probability: P(target positive and predicted negative) for
    ``false-negative``, mirrored for ``false-positive``.

    The classifier itself is fixed (compiled from the unmutilated network);
    interventions shift only the distribution it is evaluated against.
    """
    if kind not in ("false-negative", "false-positive"):
        raise ValueError(f"kind must be 'false-negative' or 'false-positive', got {kind!r}")
    validate_config(net, cfg)
    labels = _label_table(net, cfg, DEFAULT_ODD_CAP)

    def score(assignment: dict[str, str]) -> float:
        fn, fp, _, _ = _error_components(net, cfg, labels, assignment)
        return fn if kind == "false-negative" else fp

    return search_extremum(
        net,
        space,
        direction,
        score,
        cap=cap,
        progress=progress,
        should_cancel=should_cancel,
    )
