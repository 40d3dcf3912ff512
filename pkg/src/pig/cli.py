"""Command-line interface.

Exit codes: 0 success; 1 bound or verification failure; 2 input error;
3 incompleteness diagnostic.  PIG_ORACLE_BUDGET overrides the oracle's
branch-node budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import mis
from .discharge import (
    DischargeError,
    initial_charges,
    main_phases,
    negative_vertices,
    run_warmup,
)
from .extract import (
    Certificate,
    CertificateError,
    IncompletenessDiagnostic,
    check_certificate,
    corpus_run,
    extract,
)
from .configs import iter_configs
from .generate import GenSpec, GenerationError, generate
from .graph import EmbeddedGraph, GraphError, ParseError, parse_rotation_graph
from .reduce import (
    PlanRejected,
    Ratio,
    candidate_plans,
    certify_plan,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_DIAGNOSTIC = 3


def _load(path: str) -> EmbeddedGraph:
    try:
        return parse_rotation_graph(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _ratio(text: str) -> Ratio:
    try:
        return Ratio.parse(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def cmd_extract(args) -> int:
    g = _load(args.file)
    cert = extract(g, _ratio(args.ratio))
    if args.json:
        Path(args.json).write_text(cert.to_json())
    print(
        f"n={cert.n} ratio={cert.ratio} bound={cert.bound} size={cert.size}"
    )
    print("set:", " ".join(map(str, cert.independent_set)))
    if args.verify:
        ok, reason = check_certificate(g, cert)
        print(f"verify: {'ok' if ok else 'FAIL: ' + reason}")
        if not ok:
            return EXIT_FAIL
    if cert.size < cert.bound or not mis.verify_independent(
        g, cert.independent_set
    ):
        return EXIT_FAIL
    return EXIT_OK


def cmd_check_cert(args) -> int:
    g = _load(args.file)
    try:
        cert = Certificate.from_json(Path(args.cert).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {args.cert}: {exc}") from None
    ok, reason = check_certificate(g, cert)
    print(f"{'ok' if ok else 'FAIL'}: {reason}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_discharge(args) -> int:
    g = _load(args.file)
    if args.rules == "warmup":
        states = [initial_charges(g), run_warmup(g)]
    else:
        states = list(main_phases(g))
    if args.json:
        payload = {
            "n": g.n,
            "m": g.m,
            "rules": args.rules,
            "phases": [
                {
                    "phase": st.phase,
                    "total": str(st.total()),
                    "charges": {str(v): str(c) for v, c in sorted(st.charge.items())},
                }
                for st in states
            ],
            "ledger": [
                {
                    "giver": t.giver,
                    "receiver": t.receiver,
                    "amount": str(t.amount),
                    "rule": t.rule,
                }
                for t in states[-1].ledger
            ],
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        final = states[-1]
        print(f"rules={args.rules} phases={len(states)} total={final.total()}")
        neg = negative_vertices(final)
        print(f"negative vertices after {final.phase}: {neg}")
    return EXIT_OK


def cmd_config(args) -> int:
    g = _load(args.file)
    count = 0
    for match in iter_configs(g):
        roles = " ".join(f"{k}={v}" for k, v in match.roles)
        print(f"{match.kind}: {roles}")
        count += 1
        if args.limit and count >= args.limit:
            break
    if count == 0:
        print("no configuration matches")
    return EXIT_OK


def cmd_reduce(args) -> int:
    g = _load(args.file)
    c = _ratio(args.ratio)
    from .reduce import find_low_degree_plan
    from .graph import separating_triangles, triangulate

    if not g.is_connected():
        print(json.dumps({"step": "components", "count": len(g.components())}))
        return EXIT_OK
    if g.n > 3 and not g.is_triangulation():
        gt = triangulate(g)
        print(json.dumps({"step": "triangulate", "m_before": g.m, "m_after": gt.m}))
        return EXIT_OK
    plan = find_low_degree_plan(g, c)
    if plan is not None:
        certify_plan(g, plan)
        print(json.dumps({"step": "reduce", "plan": plan.summary()}, sort_keys=True))
        return EXIT_OK
    septris = separating_triangles(g)
    if septris:
        from .reduce import split_plan

        sp = split_plan(g, septris[0], c)
        print(
            json.dumps(
                {
                    "step": "split",
                    "triangle": list(sp.triangle),
                    "sides": [len(sp.side1), len(sp.side2)],
                    "strategy": sp.strategy,
                    "guarantees": dict(sp.guarantees),
                },
                sort_keys=True,
            )
        )
        return EXIT_OK
    for match in iter_configs(g):
        for plan in candidate_plans(g, match, c):
            try:
                certify_plan(g, plan)
            except PlanRejected:
                continue
            print(
                json.dumps(
                    {"step": "reduce", "match": match.kind, "plan": plan.summary()},
                    sort_keys=True,
                )
            )
            return EXIT_OK
    print(json.dumps({"step": "diagnostic", "n": g.n}))
    return EXIT_DIAGNOSTIC


def cmd_gen(args) -> int:
    spec = GenSpec(
        seed=args.seed,
        n=args.n,
        min_degree5=args.delta5,
        no_separating_triangle=args.no_septri,
    )
    g = generate(spec)
    text = g.serialize()
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote n={g.n} m={g.m} to {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_alpha(args) -> int:
    g = _load(args.file)
    value = mis.alpha(g)
    best = mis.mis_exact(g)
    print(f"alpha={value}")
    print("set:", " ".join(map(str, best)))
    return EXIT_OK


def cmd_corpus(args) -> int:
    specs = [
        GenSpec(seed=args.seed + i, n=args.n, min_degree5=args.delta5,
                no_separating_triangle=args.no_septri)
        for i in range(args.count)
    ]
    report = corpus_run(specs, _ratio(args.ratio))
    print(json.dumps(report.summary(), sort_keys=True))
    for entry in report.diagnostics:
        print(f"diagnostic: seed={entry.spec.seed} n={entry.n}: {entry.diagnostic}")
    return EXIT_OK if report.successes == len(report.entries) else EXIT_DIAGNOSTIC


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pig",
        description="Certified independent sets in embedded planar graphs",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("extract", help="extract a certified independent set")
    s.add_argument("file")
    s.add_argument("--ratio", default="3/13")
    s.add_argument("--json", metavar="OUT", help="write the certificate JSON")
    s.add_argument("--verify", action="store_true", help="replay the certificate")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("check-cert", help="replay a certificate against a graph")
    s.add_argument("file")
    s.add_argument("cert")
    s.set_defaults(func=cmd_check_cert)

    s = sub.add_parser("discharge", help="run discharging rules")
    s.add_argument("file")
    s.add_argument("--rules", choices=("warmup", "main"), required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_discharge)

    s = sub.add_parser("config", help="list configuration matches")
    s.add_argument("file")
    s.add_argument("--limit", type=int, default=0)
    s.set_defaults(func=cmd_config)

    s = sub.add_parser("reduce", help="emit one certified step as JSON")
    s.add_argument("file")
    s.add_argument("--ratio", default="3/13")
    s.add_argument("--step", action="store_true", help="accepted for compatibility")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("gen", help="generate a seeded triangulation")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--delta5", action="store_true")
    s.add_argument("--no-septri", dest="no_septri", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("alpha", help="exact independence number")
    s.add_argument("file")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("corpus", help="run extraction over a generated corpus")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--ratio", default="3/13")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--delta5", action="store_true")
    s.add_argument("--no-septri", dest="no_septri", action="store_true")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GraphError, GenerationError, CertificateError, DischargeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IncompletenessDiagnostic as exc:
        print(f"diagnostic: {exc}", file=sys.stderr)
        sys.stderr.write(exc.graph_text)
        return EXIT_DIAGNOSTIC
    except mis.OracleBudgetExceeded as exc:
        print(f"oracle budget exceeded: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
