"""Command-line workflow: validate -> query -> bound -> classify -> compile.

Exit codes are fixed for scripting: 0 success, 1 domain violation (invalid
model, contradictory evidence, bad query), 2 I/O failure, 3 capacity (an
enumeration would exceed its cap), 4 usage.

Data lines on stdout are byte-deterministic for fixed inputs.  Each invocation
additionally emits one run-report record (JSON, with input digests, wall time
and engine version) on stderr; ``--quiet`` suppresses it.  Probabilities print
with 6 decimals, or as one-decimal percentages with ``--percent`` to match the
published tables.

``INTERVENE_BN_CAP`` in the environment overrides every enumeration cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .causal import (
    DEFAULT_SPACE_CAP,
    bound_interventions,
    parse_intervention_space,
)
from .classifier import (
    DEFAULT_RISK_TABLE,
    classify,
    compile_odd,
    parse_classifier_config,
    serialize_odd,
)
from .errors import CapacityError, EngineError
from .manifest import load_manifest
from .model import parse_network, parse_state_assignment
from .sensitivity import (
    DEFAULT_FEATURE_CUTOFF,
    parse_evidence_rows,
    render_sensitivity_tsv,
    render_what_if_tsv,
    sensitivity_payload,
    sensitivity_rank,
    suggest_features,
    what_if_payload,
    what_if_table,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2
EXIT_CAPACITY = 3
EXIT_USAGE = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _cap(default: int) -> int:
    raw = os.environ.get("INTERVENE_BN_CAP")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"INTERVENE_BN_CAP must be an integer, got {raw!r}") from None


def _read_text(path: str, inputs: dict[str, str]) -> str:
    data = Path(path).read_bytes()
    inputs[path] = "sha256:" + hashlib.sha256(data).hexdigest()
    return data.decode("utf-8")


def _load_network(path: str, inputs: dict[str, str]):
    return parse_network(_read_text(path, inputs))


def _pairs(net, items, what: str) -> dict[str, str]:
    try:
        return parse_state_assignment(net, items or [])
    except ValueError as exc:
        raise _UsageError(f"{what}: {exc}") from None


def _target_pair(net, item: str) -> tuple[str, str]:
    name, sep, state = item.partition("=")
    if not sep:
        raise _UsageError(f"--target expects VARIABLE=STATE, got {item!r}")
    net.state_index(name, state)
    return name, state


def _prob(p: float, percent: bool) -> str:
    return f"{100 * p:.1f}" if percent else f"{p:.6f}"


def _witness_str(net, witness: dict[str, str]) -> str:
    if not witness:
        return "(none)"
    ordered = sorted(witness, key=net.index)
    return ",".join(f"{name}={witness[name]}" for name in ordered)


# ---------------------------------------------------------------------------
# Commands.  Each returns (exit_code, outputs-summary-for-the-run-report).


def cmd_validate(args, inputs) -> tuple[int, dict]:
    text = _read_text(args.model, inputs)
    try:
        parse_network(text)
        violations = []
    except EngineError as exc:
        violations = exc.details.get("violations")
        if violations is None:
            violations = [exc]
    if args.json:
        print(
            json.dumps(
                {
                    "violations": [
                        {
                            "variable": getattr(v, "variable", None),
                            "rule": getattr(v, "rule", getattr(v, "code", "error")),
                            "message": str(v),
                        }
                        for v in violations
                    ]
                }
            )
        )
    else:
        for v in violations:
            print(v)
    return (EXIT_OK if not violations else EXIT_DOMAIN), {"violations": len(violations)}


def cmd_bounds(args, inputs) -> tuple[int, dict]:
    net = _load_network(args.model, inputs)
    space = parse_intervention_space(_read_text(args.space, inputs))
    target, state = _target_pair(net, args.target)
    evidence = _pairs(net, args.evidence, "--evidence")
    result = bound_interventions(
        net,
        target,
        state,
        evidence,
        space,
        args.direction,
        cap=_cap(DEFAULT_SPACE_CAP),
    )
    if args.json:
        print(
            json.dumps(
                {
                    "direction": result.direction,
                    "value": result.value,
                    "witness": result.witness,
                    "explored": result.explored,
                }
            )
        )
    else:
        print(
            f"{_prob(result.value, args.percent)} "
            f"witness: {_witness_str(net, result.witness)} "
            f"explored: {result.explored}"
        )
    return EXIT_OK, {"value": result.value, "explored": result.explored}


def _resolve_model(cfg_path: str, model_ref: str, override: str | None) -> str:
    if override:
        return override
    ref = Path(model_ref)
    if ref.is_absolute():
        return str(ref)
    return str(Path(cfg_path).parent / ref)


def cmd_classify(args, inputs) -> tuple[int, dict]:
    cfg = parse_classifier_config(_read_text(args.config, inputs))
    model_path = _resolve_model(args.config, cfg.model_ref, args.model)
    net = _load_network(model_path, inputs)
    features = _pairs(net, args.set, "--set")
    manifest = load_manifest(model_path)
    table = manifest.risk_table or DEFAULT_RISK_TABLE
    result = classify(net, cfg, features, risk_table=table)
    if args.json:
        print(
            json.dumps(
                {
                    "label": result.label,
                    "posterior": result.posterior,
                    "risk_group": result.group,
                }
            )
        )
    else:
        print(f"{result.label} {_prob(result.posterior, args.percent)} {result.group}")
    return EXIT_OK, {"label": result.label, "posterior": result.posterior}


def cmd_compile(args, inputs) -> tuple[int, dict]:
    cfg = parse_classifier_config(_read_text(args.config, inputs))
    model_path = _resolve_model(args.config, cfg.model_ref, args.model)
    net = _load_network(model_path, inputs)
    odd = compile_odd(net, cfg, order=args.order, cap=_cap(2**20))
    text = serialize_odd(odd)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK, {"nodes": len(odd.nodes), "output": args.output or "-"}


def cmd_whatif(args, inputs) -> tuple[int, dict]:
    net = _load_network(args.model, inputs)
    targets = [_target_pair(net, t) for t in args.target]
    if args.rows:
        rows_doc = _read_text(args.rows, inputs)
        try:
            evidence_sets = parse_evidence_rows(rows_doc)
        except ValueError as exc:
            raise _UsageError(f"--rows: {exc}") from None
    elif args.evidence:
        evidence_sets = [_pairs(net, args.evidence, "--evidence")]
    else:
        evidence_sets = [{}]
    rows = what_if_table(net, targets, evidence_sets)
    if args.json:
        print(json.dumps(what_if_payload(targets, rows)))
    else:
        sys.stdout.write(render_what_if_tsv(targets, rows, percent=args.percent))
    return EXIT_OK, {"rows": len(rows)}


def cmd_sensitivity(args, inputs) -> tuple[int, dict]:
    net = _load_network(args.model, inputs)
    target, state = _target_pair(net, args.target)
    candidates = [c for c in (args.candidates or "").split(",") if c]
    if not candidates:
        raise _UsageError("--candidates expects a comma-separated variable list")
    baseline = _pairs(net, args.evidence, "--evidence")
    entries = sensitivity_rank(net, target, state, candidates, baseline)
    if args.json:
        payload = sensitivity_payload(entries)
        if args.suggest:
            payload["suggested"] = suggest_features(entries, args.cutoff)
        print(json.dumps(payload))
    else:
        sys.stdout.write(render_sensitivity_tsv(entries, percent=args.percent))
        if args.suggest:
            names = suggest_features(entries, args.cutoff)
            print("suggested: " + (",".join(names) if names else "(none)"))
    return EXIT_OK, {"candidates": len(entries)}


def cmd_serve(args, inputs) -> tuple[int, dict]:
    import uvicorn

    from .service import create_app

    app = create_app(args.models, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK, {"models": args.models}


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(
        prog="intervene-bn",
        description="Causal what-if analysis for discrete Bayesian networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument(
            "--percent",
            action="store_true",
            help="render probabilities as one-decimal percentages",
        )
        p.add_argument(
            "--quiet", action="store_true", help="suppress the run-report footer"
        )

    p = sub.add_parser("validate", help="check a model document")
    p.add_argument("model")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bounds", help="extremum of a target probability over a policy space")
    p.add_argument("model")
    p.add_argument("space")
    p.add_argument("--target", required=True, metavar="VARIABLE=STATE")
    p.add_argument("--evidence", action="append", metavar="VARIABLE=STATE")
    p.add_argument("--direction", choices=["max", "min"], default="max")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("classify", help="classify one feature vector")
    p.add_argument("config")
    p.add_argument("--set", action="append", metavar="FEATURE=STATE")
    p.add_argument("--model", help="override the model path from the config")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compile", help="compile a classifier to a decision diagram")
    p.add_argument("config")
    p.add_argument("--model", help="override the model path from the config")
    p.add_argument("-o", "--output", help="write the diagram here instead of stdout")
    p.add_argument("--order", choices=["config", "greedy"], default="config")
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("whatif", help="posterior table over evidence scenarios")
    p.add_argument("model")
    p.add_argument(
        "--target", action="append", required=True, metavar="VARIABLE=STATE"
    )
    p.add_argument("--rows", help="JSON file with an array of evidence objects")
    p.add_argument("--evidence", action="append", metavar="VARIABLE=STATE")
    common(p)
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("sensitivity", help="rank variables by posterior spread")
    p.add_argument("model")
    p.add_argument("--target", required=True, metavar="VARIABLE=STATE")
    p.add_argument("--candidates", required=True, metavar="V1,V2,...")
    p.add_argument("--evidence", action="append", metavar="VARIABLE=STATE")
    p.add_argument("--suggest", action="store_true", help="also print suggested features")
    p.add_argument("--cutoff", type=float, default=DEFAULT_FEATURE_CUTOFF)
    common(p)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("models", help="directory of model documents")
    p.add_argument("--port", type=int, default=8642)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="directory of built console assets to serve")
    common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE

    inputs: dict[str, str] = {}
    started = time.monotonic()
    code = EXIT_OK
    outputs: dict = {}
    try:
        code, outputs = args.func(args, inputs)
    except _UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        code, outputs = EXIT_USAGE, {"error": "usage"}
    except CapacityError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        code, outputs = EXIT_CAPACITY, {"error": exc.code}
    except EngineError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        code, outputs = EXIT_DOMAIN, {"error": exc.code}
    except ValueError as exc:
        print(f"error[domain]: {exc}", file=sys.stderr)
        code, outputs = EXIT_DOMAIN, {"error": "domain"}
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        code, outputs = EXIT_IO, {"error": "io"}

    if not getattr(args, "quiet", False):
        report = {
            "command": args.command,
            "inputs": inputs,
            "outputs": outputs,
            "exit_code": code,
            "wall_time_s": round(time.monotonic() - started, 6),
            "version": __version__,
            "finished_at": datetime.now(timezone.utc).isoformat(),
        }
        print(json.dumps(report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
