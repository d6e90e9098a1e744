"""Command-line front end.

Exit status: 0 for a Pfaffian verdict (or a passing check), 1 for a
non-Pfaffian verdict (or a failing check), 2 for any error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .certificates import certificate_to_json, dumps, verify_certificate_json
from .decomposition import (
    alternating_space,
    brick_decompose,
    cycle_space_dim,
    ear_decomposition,
    min_two_ear_count,
)
from .engine import decide
from .errors import EnumerationCapExceeded, PflabError
from .graph import Graph, edge, read_graph
from .matchings import DEFAULT_CAP
from .oracles import InstanceRecipe, brute_force_pfaffian, generate_two_ear_instances
from .witness import SEARCH_CAP, TwoEarInstance, find_reducible_k33_witness, theorem5_decide

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    fmt: str = "text"
    cap_factors: int = DEFAULT_CAP
    cap_orientations: int = 1 << 19
    cap_search: int = SEARCH_CAP
    seed: int = 0
    reproducible: bool = False

    def __post_init__(self):
        if min(self.cap_factors, self.cap_orientations, self.cap_search) <= 0:
            raise ValueError("caps must be positive")


class _Out:
    def __init__(self, cfg: RunConfig, stream):
        self.cfg = cfg
        self.stream = stream

    def text(self, line: str = "") -> None:
        if self.cfg.fmt == "text":
            print(line, file=self.stream)

    def json(self, data) -> None:
        if self.cfg.fmt == "json":
            print(dumps(data, self.cfg.reproducible), file=self.stream)


def _edges_text(es) -> str:
    return " ".join(f"{u}-{v}" for u, v in es)


def cmd_check(cfg: RunConfig, args, out: _Out) -> int:
    g = read_graph(args.graph)
    cert = decide(g, cfg.cap_factors)
    data = certificate_to_json(cert)
    if args.oracle:
        if (1 << max(g.m - 1, 0)) > cfg.cap_orientations:
            raise EnumerationCapExceeded("orientations", cfg.cap_orientations)
        agrees = brute_force_pfaffian(g) == cert.is_pfaffian
        data["oracle_agrees"] = agrees
        if not agrees:
            raise PflabError("engine and orientation oracle disagree")
    if args.output:
        Path(args.output).write_text(dumps(data, True) + "\n", encoding="utf-8")
    out.json(data)
    out.text(f"verdict: {cert.verdict}")
    if cert.kind == "pfaffian":
        out.text("orientation: " + " ".join(f"{t}->{h}" for t, h in cert.orientation.arcs()))
    else:
        s = cert.intractable_set
        out.text(f"intractable set of {len(s.circuits)} alternating circuits for 1-factor {_edges_text(sorted(s.factor))}")
        for c in s.circuits:
            out.text("  circuit " + " ".join(map(str, c.vertices)))
    if args.oracle:
        out.text("orientation oracle agrees")
    return EXIT_YES if cert.is_pfaffian else EXIT_NO


def cmd_decompose(cfg: RunConfig, args, out: _Out) -> int:
    g = read_graph(args.graph)
    if args.bricks:
        dec = brick_decompose(g)
        out.json({"bricks": [[list(e) for e in b.edges] for b in dec.bricks], "tree": dec.tree.to_json()})
        out.text(f"bricks: {len(dec.bricks)}")
        for b in dec.bricks:
            out.text(f"  brick n={b.n} m={b.m}: {_edges_text(b.edges)}")
        for node in dec.tree.walk():
            if node.kind == "barrier":
                out.text(f"barrier {node.meta['barrier']} with odd components {node.meta['odd_components']}; frame discarded")
            elif node.kind == "2cut":
                out.text(f"2-separation at {node.meta['cut']}")
        for host, cut in dec.barrier_cuts():
            out.text(f"tight cut {_edges_text(sorted(cut))}")
        return EXIT_YES
    dec = ear_decomposition(g, cap=cfg.cap_factors)
    dec.validate()
    steps = [
        {"circuit": list(s.circuit.vertices), "ears": [list(p.vertices) for p in s.ears]}
        for s in dec.steps
    ]
    out.json({"start": list(dec.start.edges[0]), "steps": steps, "ears": dec.ear_count})
    out.text(f"start edge {dec.start.edges[0][0]}-{dec.start.edges[0][1]}; {len(dec.steps)} steps, {dec.ear_count} ears")
    for i, s in enumerate(dec.steps, 1):
        ears = "; ".join(" ".join(map(str, p.vertices)) for p in s.ears)
        out.text(f"  step {i}: {len(s.ears)}-ear adjunction: {ears}")
    return EXIT_YES


def cmd_spaces(cfg: RunConfig, args, out: _Out) -> int:
    g = read_graph(args.graph)
    dc = cycle_space_dim(g)
    da = alternating_space(g, cap=cfg.cap_factors).dim
    data = {"cycle_space_dim": dc, "alternating_space_dim": da, "difference": dc - da}
    if args.exact:
        data["min_two_ear_steps"] = min_two_ear_count(g)
    out.json(data)
    out.text(f"dim C = {dc}, dim A = {da}, dim C - dim A = {dc - da}")
    if args.exact:
        out.text(f"fewest 2-ear adjunctions over all ear decompositions: {data['min_two_ear_steps']}")
    return EXIT_YES


def cmd_witness(cfg: RunConfig, args, out: _Out) -> int:
    g = read_graph(args.graph)
    try:
        w = find_reducible_k33_witness(g, cfg.cap_search)
    except EnumerationCapExceeded:
        out.json({"witness": None, "status": "capped"})
        out.text("none found (capped)")
        return EXIT_YES
    if w is None:
        out.json({"witness": None, "status": "exhaustive"})
        out.text("none found (exhaustive)")
        return EXIT_YES
    data = {"verdict": "non-pfaffian", "witness": w.to_json()}
    if args.output:
        Path(args.output).write_text(dumps(data, True) + "\n", encoding="utf-8")
    out.json(data)
    x = w.odd_circuit
    out.text(f"witness H with {w.h.n} vertices, {w.h.m} edges: {_edges_text(w.h.edges)}")
    out.text("odd circuit: " + (" ".join(map(str, x.vertices)) if x else "none (H is an even subdivision of K3,3)"))
    out.text(f"1-factor of G - VH: {_edges_text(sorted(w.complement)) or '(empty)'}")
    return EXIT_NO


def _parse_ear(text: str):
    parts = text.replace(",", " ").replace("-", " ").split()
    if len(parts) != 2:
        raise ValueError(f"ear edge {text!r} must name two vertices")
    return edge(int(parts[0]), int(parts[1]))


def _find_ears(g: Graph):
    from itertools import combinations

    for e1, e2 in combinations(g.edges, 2):
        try:
            return TwoEarInstance.build(g, e1, e2)
        except PflabError:
            continue
    raise PflabError("no pair of edges presents the graph as a 2-ear adjunction to a bipartite graph")


def cmd_t5(cfg: RunConfig, args, out: _Out) -> int:
    g = read_graph(args.graph)
    if args.ears:
        inst = TwoEarInstance.build(g, _parse_ear(args.ears[0]), _parse_ear(args.ears[1]))
    else:
        inst = _find_ears(g)
    cert = theorem5_decide(inst, cfg.cap_factors, cfg.cap_search)
    data = certificate_to_json(cert)
    data["ears"] = [list(inst.e1), list(inst.e2)]
    if args.output:
        Path(args.output).write_text(dumps(data, True) + "\n", encoding="utf-8")
    out.json(data)
    out.text(f"ears: {inst.e1[0]}-{inst.e1[1]} and {inst.e2[0]}-{inst.e2[1]}")
    out.text(f"verdict: {cert.verdict} (route: {cert.meta.get('route')})")
    casc = cert.meta.get("cascade")
    if casc:
        out.text(f"cascade length {casc['length']}, trace {casc['trace'] or '(empty)'}, "
                 f"normalized {casc['normalized']}, reduced {casc['reduced']}")
    if cert.kind == "witness":
        w = cert.witness
        out.text(f"witness H: {_edges_text(w.h.edges)}")
        for x in w.contraction_stack:
            out.text("  contract odd circuit " + " ".join(map(str, x.vertices)))
    elif cert.kind == "pfaffian":
        out.text("orientation: " + " ".join(f"{t}->{h}" for t, h in cert.orientation.arcs()))
    return EXIT_YES if cert.is_pfaffian else EXIT_NO


def cmd_verify(cfg: RunConfig, args, out: _Out) -> int:
    g = read_graph(args.graph)
    data = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
    ok = verify_certificate_json(g, data, cfg.cap_factors)
    out.json({"valid": ok, "verdict": data.get("verdict")})
    out.text(f"certificate {'valid' if ok else 'INVALID'} ({data.get('verdict')})")
    return EXIT_YES if ok else EXIT_NO


def cmd_gen(cfg: RunConfig, args, out: _Out) -> int:
    recipe = InstanceRecipe(
        kind=args.kind,
        seed=cfg.seed,
        min_vertices=args.min_vertices,
        max_vertices=args.max_vertices,
        max_edges=args.max_edges,
        count=args.count,
    )
    target = Path(args.out) if args.out else None
    if target:
        target.mkdir(parents=True, exist_ok=True)
    manifest = []
    for i, inst in enumerate(generate_two_ear_instances(recipe)):
        name = f"instance-{cfg.seed}-{i}"
        entry = {"name": name, "ears": [list(inst.e1), list(inst.e2)], "class_ok": inst.class_ok,
                 "edges": [list(e) for e in inst.g.edges]}
        manifest.append(entry)
        if target:
            (target / f"{name}.edges").write_text(inst.g.to_text(), encoding="utf-8")
        out.text(f"{name}: n={inst.g.n} m={inst.g.m} ears {inst.e1} {inst.e2} class condition "
                 f"{'holds' if inst.class_ok else 'fails'}")
    if target:
        (target / "manifest.json").write_text(dumps(manifest, True) + "\n", encoding="utf-8")
    out.json(manifest)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-factors", type=int, default=DEFAULT_CAP, help="max 1-factors to enumerate")
    common.add_argument("--cap-orientations", type=int, default=1 << 19, help="max orientations for the oracle")
    common.add_argument("--cap-search", type=int, default=SEARCH_CAP, help="max steps of a subdivision search")
    common.add_argument("--reproducible", action="store_true", help="single worker, sorted JSON keys")

    p = argparse.ArgumentParser(prog="pflab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pflab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="decide Pfaffian and emit a certificate")
    c.add_argument("graph")
    c.add_argument("-o", "--output", help="write the JSON certificate here")
    c.add_argument("--oracle", action="store_true", help="cross-check with the orientation oracle")
    c.set_defaults(run=cmd_check)

    d = sub.add_parser("decompose", parents=[common], help="ear or brick decomposition")
    d.add_argument("graph")
    mode = d.add_mutually_exclusive_group(required=True)
    mode.add_argument("--ears", action="store_true")
    mode.add_argument("--bricks", action="store_true")
    d.set_defaults(run=cmd_decompose)

    s = sub.add_parser("spaces", parents=[common], help="cycle and alternating space dimensions")
    s.add_argument("graph")
    s.add_argument("--exact", action="store_true", help="also search the fewest 2-ear steps")
    s.set_defaults(run=cmd_spaces)

    w = sub.add_parser("witness", parents=[common], help="search a reducible K3,3 witness")
    w.add_argument("graph")
    w.add_argument("-o", "--output")
    w.set_defaults(run=cmd_witness)

    t = sub.add_parser("t5", parents=[common], help="decide a 2-ear adjunction to a bipartite graph")
    t.add_argument("graph")
    t.add_argument("--ears", nargs=2, metavar="U-V", help="the two ear edges")
    t.add_argument("-o", "--output")
    t.set_defaults(run=cmd_t5)

    v = sub.add_parser("verify", parents=[common], help="re-check a JSON certificate")
    v.add_argument("graph")
    v.add_argument("certificate")
    v.set_defaults(run=cmd_verify)

    gn = sub.add_parser("gen", parents=[common], help="seeded 2-ear instances")
    gn.add_argument("--kind", default="random-2-ear-adjunction", choices=["random-2-ear-adjunction", "catalog"])
    gn.add_argument("--count", type=int, default=10)
    gn.add_argument("--min-vertices", type=int, default=4)
    gn.add_argument("--max-vertices", type=int, default=10)
    gn.add_argument("--max-edges", type=int, default=16)
    gn.add_argument("--out", help="directory for edge-list files and manifest.json")
    gn.set_defaults(run=cmd_gen)
    return p


def main(argv: Optional[Sequence[str]] = None, stream=None) -> int:
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    try:
        cfg = RunConfig(
            command=args.command,
            inputs=[getattr(args, "graph", "")],
            fmt="json" if args.json else "text",
            cap_factors=args.cap_factors,
            cap_orientations=args.cap_orientations,
            cap_search=args.cap_search,
            seed=args.seed,
            reproducible=args.reproducible,
        )
        if cfg.reproducible:
            os.environ["PFLAB_THREADS"] = "1"
        return args.run(cfg, args, _Out(cfg, stream))
    except (PflabError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
