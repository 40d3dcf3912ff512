"""Recursive certified extraction and replayable certificates.

The extractor peels a planar graph down with the cheapest sound move at
every level: per-component handling, an exact base case, triangulation,
low-degree reductions, separating-triangle splits, then oracle-certified
configuration reductions.  Solutions are lifted bottom-up; every level
checks its own size contract, so the final certificate either meets
ceil(c*n) or the run raises a diagnostic carrying the offending graph.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Sequence

from . import mis
from .configs import ball, iter_configs, tight_sets
from .discharge import DischargeError, negative_vertices, run_main
from .generate import GenSpec, GenerationError, generate
from .graph import (
    EmbeddedGraph,
    GraphError,
    separating_triangles,
    triangulate,
)
from .reduce import (
    PlanRejected,
    Ratio,
    ReductionPlan,
    apply_plan,
    candidate_plans,
    certify_plan,
    find_low_degree_plan,
    lift,
    plans_for_independent_set,
    split_combine,
    split_plan,
    split_subproblems,
)

BASE_EXACT_N = 20
CERT_FORMAT = "pig-certificate/1"


class IncompletenessDiagnostic(RuntimeError):
    """No certified reduction found on a min-degree-5 triangulation without
    separating triangles: a detector or planner gap.  Carries the offending
    graph for triage; extraction never silently returns an undersized set."""

    def __init__(self, g: EmbeddedGraph, ratio: Ratio):
        super().__init__(
            f"no certified reduction on n={g.n} triangulation at ratio {ratio}"
        )
        self.graph_text = g.serialize()
        self.ratio = str(ratio)


class CertificateError(ValueError):
    """Certificate fails structural validation before replay."""


@dataclass(frozen=True)
class Certificate:
    """Extraction result plus the ordered reduction trace for replay."""

    ratio: str
    graph_hash: str
    n: int
    bound: int
    independent_set: tuple[int, ...]
    root: dict

    @property
    def size(self) -> int:
        return len(self.independent_set)

    def to_json(self) -> str:
        payload = {
            "format": CERT_FORMAT,
            "ratio": self.ratio,
            "graph_hash": self.graph_hash,
            "n": self.n,
            "bound": self.bound,
            "size": self.size,
            "independent_set": list(self.independent_set),
            "root": self.root,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"bad JSON: {exc}") from None
        if payload.get("format") != CERT_FORMAT:
            raise CertificateError("unknown certificate format")
        try:
            return cls(
                ratio=payload["ratio"],
                graph_hash=payload["graph_hash"],
                n=payload["n"],
                bound=payload["bound"],
                independent_set=tuple(payload["independent_set"]),
                root=payload["root"],
            )
        except KeyError as exc:
            raise CertificateError(f"missing field {exc}") from None


def _node(op: str, g: EmbeddedGraph, c: Ratio, sol: frozenset[int], **extra) -> dict:
    base = {
        "op": op,
        "n": g.n,
        "bound": c.ceil_mul(g.n),
        "size": len(sol),
        "set": sorted(sol),
    }
    base.update(extra)
    return base


def _certified_config_plan(g: EmbeddedGraph, c: Ratio):
    """Search matches in priority order, certify candidate plans, windowed
    to the negative-charge neighborhoods first and globally after."""
    windows: frozenset[int] | None
    try:
        windows = ball(g, negative_vertices(run_main(g)), 2)
    except DischargeError:
        windows = None
    scopes = [windows, None] if windows else [None]
    for scope in scopes:
        for match in iter_configs(g, scope):
            if match.j:
                for plan in candidate_plans(g, match, c):
                    try:
                        return certify_plan(g, plan), match
                    except PlanRejected:
                        continue
            else:
                pool = ball(g, [v for _, v in match.roles], 2)
                for jset in tight_sets(g, pool):
                    for plan in plans_for_independent_set(
                        g, jset, c, f"{match.kind}-derived", match.preferred_k
                    ):
                        try:
                            return certify_plan(g, plan), match
                        except PlanRejected:
                            continue
    # last resort: generic tight independent sets near negative charge
    sweep_scopes = [s for s in (windows, frozenset(g.vertices)) if s]
    for scope in sweep_scopes:
        for jset in tight_sets(g, scope, limit=200):
            for plan in plans_for_independent_set(g, jset, c, "sweep", 0):
                try:
                    return certify_plan(g, plan), None
                except PlanRejected:
                    continue
    raise IncompletenessDiagnostic(g, c)


def _solve(g: EmbeddedGraph, c: Ratio) -> tuple[frozenset[int], dict]:
    bound = c.ceil_mul(g.n)
    if g.n == 0:
        return frozenset(), {
            "op": "exact", "n": 0, "bound": 0, "size": 0, "set": []
        }

    comps = g.components()
    if len(comps) > 1:
        sol: set[int] = set()
        children = []
        for comp in comps:
            part, node = _solve(g.subgraph(comp), c)
            sol |= part
            children.append(node)
        out = frozenset(sol)
        node = _node("components", g, c, out, children=children)
    elif g.n <= BASE_EXACT_N:
        out = frozenset(mis.mis_exact(g))
        node = _node("exact", g, c, out)
    elif not g.is_triangulation():
        gt = triangulate(g)
        out, child = _solve(gt, c)
        node = _node(
            "triangulate", g, c, out, m_before=g.m, m_after=gt.m, child=child
        )
    else:
        plan = find_low_degree_plan(g, c)
        if plan is not None:
            cert = certify_plan(g, plan)
            reduced, ctx = apply_plan(g, cert)
            inner, child = _solve(reduced, c)
            out = lift(inner, ctx)
            node = _node(
                "reduce", g, c, out,
                plan=plan.summary() | {"w_ids": list(ctx.w_ids)},
                child=child,
            )
        else:
            septris = separating_triangles(g)
            if septris:
                sp = split_plan(g, septris[0], c)
                subs = split_subproblems(g, sp)
                solved: dict[str, frozenset[int]] = {}
                merged: dict[str, int | None] = {}
                sub_nodes = []
                for sub in subs:
                    part, sub_node = _solve(sub.graph, c)
                    if len(part) < sub.floor:
                        raise IncompletenessDiagnostic(g, c)  # unreachable
                    solved[sub.tag] = part
                    merged[sub.tag] = sub.merged
                    sub_nodes.append(
                        {"tag": sub.tag, "merged": sub.merged, "child": sub_node}
                    )
                out, recipe = split_combine(g, sp, solved, merged)
                node = _node(
                    "split", g, c, out,
                    triangle=list(sp.triangle),
                    strategy=sp.strategy,
                    recipe=recipe,
                    sides=[len(sp.side1), len(sp.side2)],
                    subs=sub_nodes,
                )
            else:
                cert, match = _certified_config_plan(g, c)
                reduced, ctx = apply_plan(g, cert)
                inner, child = _solve(reduced, c)
                out = lift(inner, ctx)
                node = _node(
                    "reduce", g, c, out,
                    plan=cert.plan.summary() | {"w_ids": list(ctx.w_ids)},
                    match=match.kind if match else "sweep",
                    child=child,
                )

    if len(out) < bound or not mis.verify_independent(g, out):
        raise IncompletenessDiagnostic(g, c)  # size contract is checked everywhere
    return out, node


def extract(g: EmbeddedGraph, c: Ratio | str) -> Certificate:
    """Extract a verified independent set of size >= ceil(c*n) with trace."""
    ratio = Ratio.parse(c) if isinstance(c, str) else c
    sol, root = _solve(g, ratio)
    return Certificate(
        ratio=str(ratio),
        graph_hash=g.graph_hash(),
        n=g.n,
        bound=ratio.ceil_mul(g.n),
        independent_set=tuple(sorted(sol)),
        root=root,
    )


# -- certificate replay ---------------------------------------------------------


def _replay(g: EmbeddedGraph, node: dict, c: Ratio, path: str) -> frozenset[int]:
    op = node.get("op")
    if node.get("n") != g.n:
        raise CertificateError(f"{path}: recorded n={node.get('n')} but graph has {g.n}")
    want = frozenset(node.get("set", ()))
    if len(want) != node.get("size"):
        raise CertificateError(f"{path}: size field mismatch")
    if node.get("bound") != c.ceil_mul(g.n):
        raise CertificateError(f"{path}: bound field mismatch")

    if op == "exact":
        got = frozenset(mis.mis_exact(g)) if g.n else frozenset()
    elif op == "components":
        comps = g.components()
        children = node.get("children", [])
        if len(comps) != len(children):
            raise CertificateError(f"{path}: component count differs")
        acc: set[int] = set()
        for i, (comp, child) in enumerate(zip(comps, children)):
            acc |= _replay(g.subgraph(comp), child, c, f"{path}.components[{i}]")
        got = frozenset(acc)
    elif op == "triangulate":
        gt = triangulate(g)
        if gt.m != node.get("m_after"):
            raise CertificateError(f"{path}: triangulation edge count differs")
        got = _replay(gt, node["child"], c, f"{path}.triangulate")
    elif op == "reduce":
        summary = node.get("plan", {})
        plan = ReductionPlan(
            kind=summary["kind"],
            s=frozenset(summary["S"]),
            parts=tuple(frozenset(p) for p in summary["parts"]),
            ratio=c,
            provenance=summary.get("provenance", "replay"),
            j=tuple(summary.get("j", ())),
            k=summary.get("k"),
        )
        cert = certify_plan(g, plan)
        reduced, ctx = apply_plan(g, cert)
        if list(ctx.w_ids) != summary.get("w_ids", []):
            raise CertificateError(f"{path}: contraction ids diverge")
        inner = _replay(reduced, node["child"], c, f"{path}.reduce")
        got = lift(inner, ctx)
    elif op == "split":
        sp = split_plan(g, tuple(node["triangle"]), c)
        if sp.strategy != node.get("strategy"):
            raise CertificateError(f"{path}: split strategy diverges")
        subs = split_subproblems(g, sp)
        recorded = {s["tag"]: s for s in node.get("subs", [])}
        if set(recorded) != {s.tag for s in subs}:
            raise CertificateError(f"{path}: split sub tags diverge")
        solved = {}
        merged = {}
        for sub in subs:
            rec = recorded[sub.tag]
            if rec.get("merged") != sub.merged:
                raise CertificateError(f"{path}: merged id diverges in {sub.tag}")
            solved[sub.tag] = _replay(
                sub.graph, rec["child"], c, f"{path}.split[{sub.tag}]"
            )
            merged[sub.tag] = sub.merged
        got, recipe = split_combine(g, sp, solved, merged)
        if recipe != node.get("recipe"):
            raise CertificateError(f"{path}: recombination recipe diverges")
    else:
        raise CertificateError(f"{path}: unknown op {op!r}")

    if got != want:
        raise CertificateError(f"{path}: replayed set differs from recorded")
    if not mis.verify_independent(g, got):
        raise CertificateError(f"{path}: recorded set not independent")
    if len(got) < c.ceil_mul(g.n):
        raise CertificateError(f"{path}: recorded set below size ledger")
    return got


def check_certificate(g: EmbeddedGraph, cert: Certificate) -> tuple[bool, str]:
    """Replay every step and size-ledger entry; (ok, reason)."""
    if cert.graph_hash != g.graph_hash():
        return False, "graph hash mismatch"
    try:
        ratio = Ratio.parse(cert.ratio)
    except ValueError as exc:
        return False, str(exc)
    if cert.bound != ratio.ceil_mul(g.n) or cert.n != g.n:
        return False, "header bound/size mismatch"
    try:
        got = _replay(g, cert.root, ratio, "root")
    except (CertificateError, PlanRejected, GraphError) as exc:
        return False, str(exc)
    if got != frozenset(cert.independent_set):
        return False, "final set differs from trace"
    if len(got) < cert.bound:
        return False, "final set below bound"
    return True, "ok"


# -- corpus ----------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    spec: GenSpec
    n: int
    bound: int
    size: int
    ok: bool
    seconds: float
    diagnostic: str | None = None
    graph_text: str | None = None


@dataclass(frozen=True)
class CorpusReport:
    ratio: str
    entries: tuple[CorpusEntry, ...]

    @property
    def successes(self) -> int:
        return sum(1 for e in self.entries if e.ok)

    @property
    def diagnostics(self) -> tuple[CorpusEntry, ...]:
        return tuple(e for e in self.entries if e.diagnostic)

    def summary(self) -> dict:
        achieved = [e.size / e.n for e in self.entries if e.ok and e.n]
        return {
            "ratio": self.ratio,
            "instances": len(self.entries),
            "successes": self.successes,
            "diagnostics": len(self.diagnostics),
            "min_achieved_ratio": round(min(achieved), 4) if achieved else None,
            "mean_achieved_ratio": (
                round(sum(achieved) / len(achieved), 4) if achieved else None
            ),
            "total_seconds": round(sum(e.seconds for e in self.entries), 3),
        }


def corpus_run(specs: Sequence[GenSpec], c: Ratio | str) -> CorpusReport:
    """Extraction over a generated corpus; diagnostics are collected, not
    raised, so one bad instance cannot hide the rest."""
    ratio = Ratio.parse(c) if isinstance(c, str) else c
    entries = []
    for spec in specs:
        t0 = time.perf_counter()
        try:
            g = generate(spec)
        except (GenerationError, GraphError) as exc:
            entries.append(
                CorpusEntry(spec, 0, 0, 0, False, time.perf_counter() - t0, str(exc))
            )
            continue
        try:
            cert = extract(g, ratio)
            ok = (
                len(cert.independent_set) >= cert.bound
                and mis.verify_independent(g, cert.independent_set)
            )
            entries.append(
                CorpusEntry(
                    spec, g.n, cert.bound, cert.size, ok,
                    time.perf_counter() - t0,
                )
            )
        except IncompletenessDiagnostic as exc:
            entries.append(
                CorpusEntry(
                    spec, g.n, ratio.ceil_mul(g.n), 0, False,
                    time.perf_counter() - t0, str(exc), exc.graph_text,
                )
            )
    return CorpusReport(str(ratio), tuple(entries))
