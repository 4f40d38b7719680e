"""Command-line interface: curvature reports, flatness checks, catalog access and search.

Exit codes: 0 success, 1 negative answer (not flat, unclassified edges),
2 unreadable input or bad arguments, 3 disconnected graph, 64 unknown subcommand.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from ricciflat import __version__
from ricciflat.canon import canonical_certificate
from ricciflat.catalog import (
    EXCLUDED,
    FAMILIES,
    NAMED,
    CatalogError,
    FamilySpec,
    Patch,
    certify_patch,
    default_family_grid,
    excluded_configuration,
    family,
    named,
)
from ricciflat.curvature import CurvatureReport, idleness_profile, lazy_measure, lly_curvature
from ricciflat.formats import FormatError, emit_edge_list, emit_graph6, parse_edge_list, parse_graph6
from ricciflat.graph import Graph, GraphError, is_connected
from ricciflat.search import PRUNE_RULES, SearchConfig, SearchError, enumerate_graphs, find_ricci_flat
from ricciflat.structure import check_exclusion_lemmas, classify_graph, type5b_excluded
from ricciflat.transport import TransportResult, as_fraction

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_DISCONNECTED = 3
EXIT_UNKNOWN_COMMAND = 64

COMMANDS = ("curvature", "check-flat", "idleness", "catalog", "enumerate", "find-flat", "classify")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def decimal(q: Fraction, places: int = 6) -> str:
    return f"{float(q):.{places}f}"


class Renderer:
    def __init__(self, with_decimal: bool):
        self.with_decimal = with_decimal

    def q(self, value: Fraction) -> Any:
        if self.with_decimal:
            return {"exact": rational(value), "decimal": decimal(value)}
        return rational(value)


# ---------------------------------------------------------------- input


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _guess_format(path: str, text: str) -> str:
    if path.endswith((".g6", ".graph6")) or text.lstrip().startswith(">>graph6<<"):
        return "graph6"
    if path.endswith((".el", ".edges", ".txt")):
        return "edgelist"
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) == 1 and len(lines[0].split()) == 1 and not lines[0].strip().isdigit():
        return "graph6"
    return "edgelist"


def load_graph(args: argparse.Namespace) -> tuple[Graph, dict[str, Any]]:
    chosen = [x for x in (args.input, args.catalog, args.family) if x is not None]
    if len(chosen) != 1:
        raise CliError("give exactly one of: an input path, --catalog NAME, --family SPEC")
    try:
        if args.catalog is not None:
            if args.catalog in EXCLUDED:
                return excluded_configuration(args.catalog), {"source": "catalog", "name": args.catalog}
            return named(args.catalog), {"source": "catalog", "name": args.catalog}
        if args.family is not None:
            spec = FamilySpec.parse(args.family)
            built = family(spec)
            g = built.graph if isinstance(built, Patch) else built
            return g, {"source": "family", "spec": spec.text()}
        text = _read_text(args.input)
        fmt = args.input_format if args.input_format != "auto" else _guess_format(args.input, text)
        g = parse_graph6(text) if fmt == "graph6" else parse_edge_list(text)
        return g, {"source": "file", "path": args.input, "format": fmt}
    except (CatalogError, FormatError, GraphError) as exc:
        raise CliError(str(exc)) from None


def _require_connected(g: Graph) -> None:
    if g.n == 0 or not is_connected(g):
        raise CliError("graph is not connected", EXIT_DISCONNECTED)
    if g.num_edges == 0:
        raise CliError("graph has no edges", EXIT_DISCONNECTED)


# ---------------------------------------------------------------- report pieces


def _graph_block(g: Graph) -> dict[str, Any]:
    return {
        "n": g.n,
        "edges": [[e.u, e.v] for e in g.edges()],
        "certificate": canonical_certificate(g),
    }


def _transport_block(r: Renderer, g: Graph, x: int, y: int, alpha: Fraction, t: TransportResult) -> dict[str, Any]:
    mu_x = lazy_measure(g, x, alpha)
    mu_y = lazy_measure(g, y, alpha)
    return {
        "alpha": r.q(alpha),
        "mu_x": [[v, r.q(m)] for v, m in mu_x.items],
        "mu_y": [[v, r.q(m)] for v, m in mu_y.items],
        "W": r.q(t.value),
        "coupling": [[a, b, r.q(m)] for a, b, m in t.primal.sorted_entries()],
        "potential": [[v, r.q(f)] for v, f in sorted(t.dual.values.items())],
    }


def _edge_block(r: Renderer, g: Graph, rep: CurvatureReport) -> dict[str, Any]:
    x, y = rep.edge.u, rep.edge.v
    block: dict[str, Any] = {
        "edge": [x, y],
        "degrees": [g.degree(x), g.degree(y)],
        "k": r.q(rep.k_star),
        "alpha_star": r.q(rep.alpha_star),
        "k_alpha": [[r.q(a), r.q(v)] for a, v in sorted(rep.k_alpha_at.items())],
        "transport": [_transport_block(r, g, x, y, rep.alpha_star, rep.certificate)],
    }
    for a, t in sorted(rep.extra_certificates.items()):
        block["transport"].append(_transport_block(r, g, x, y, a, t))
    return block


def _types_block(g: Graph) -> tuple[list[dict[str, Any]], list[dict[str, Any]]]:
    types, failures = classify_graph(g)
    typed = [
        {
            "edge": [t.edge.u, t.edge.v],
            "tag": t.tag,
            "bindings": dict(sorted(t.bindings.items())),
            "facts": [[f"{f.pair[0]},{f.pair[1]}", f.observed] for f in t.distance_facts],
        }
        for t in types
    ]
    failed = [{"edge": [e.u, e.v], "reason": reason} for e, reason in failures]
    return typed, failed


def _violations_block(g: Graph) -> list[dict[str, Any]]:
    if max((g.degree(v) for v in range(g.n)), default=0) > 4:
        return []
    return [
        {"rule": v.rule, "edge": [v.edge.u, v.edge.v], "detail": v.detail, "cycles": [list(c) for c in v.cycles]}
        for v in check_exclusion_lemmas(g)
    ]


def _document(command: str, source: dict[str, Any], g: Graph, body: dict[str, Any]) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "tool": {"name": "ricciflat", "version": __version__},
        "command": command,
        "input": source,
        "graph": _graph_block(g),
    }
    doc.update(body)
    return doc


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------- commands


def cmd_curvature(args: argparse.Namespace) -> int:
    g, source = load_graph(args)
    _require_connected(g)
    r = Renderer(args.decimal)
    alphas = [as_fraction(args.alpha)] if args.alpha is not None else []
    for a in alphas:
        if not 0 <= a <= 1:
            raise CliError(f"alpha {a} outside [0, 1]")
    reports = [lly_curvature(g, e, alphas) for e in g.edges()]
    flat = all(rep.k_star == 0 for rep in reports)
    if args.format == "text":
        lines = [f"# {g.n} vertices, {g.num_edges} edges, flat={str(flat).lower()}"]
        for rep in reports:
            cols = [f"{rep.edge.u} {rep.edge.v}", rational(rep.k_star)]
            cols += [f"k_{rational(a)}={rational(rep.k_alpha_at[a])}" for a in alphas]
            if args.decimal:
                cols.append(decimal(rep.k_star))
            lines.append("  ".join(cols))
        sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_OK
    witness = next((rep for rep in reports if rep.k_star != 0), None)
    summary: dict[str, Any] = {
        "flat": flat,
        "edge_count": len(reports),
        "witness": None if witness is None else {"edge": [witness.edge.u, witness.edge.v], "k": r.q(witness.k_star)},
    }
    if alphas:
        summary["alpha"] = r.q(alphas[0])
        summary["k_alpha_zero_everywhere"] = all(rep.k_alpha_at[alphas[0]] == 0 for rep in reports)
    body = {"edges": [_edge_block(r, g, rep) for rep in reports], "summary": summary}
    sys.stdout.write(_dump(_document("curvature", source, g, body)))
    return EXIT_OK


def cmd_check_flat(args: argparse.Namespace) -> int:
    g, source = load_graph(args)
    _require_connected(g)
    witness = None
    for e in g.edges():
        rep = lly_curvature(g, e)
        if rep.k_star != 0:
            witness = rep
            break
    if args.format == "json":
        r = Renderer(args.decimal)
        body = {
            "summary": {
                "flat": witness is None,
                "witness": None
                if witness is None
                else {"edge": [witness.edge.u, witness.edge.v], "k": r.q(witness.k_star)},
            },
            "edges": [] if witness is None else [_edge_block(r, g, witness)],
        }
        sys.stdout.write(_dump(_document("check-flat", source, g, body)))
    elif witness is None:
        print("flat")
    else:
        extra = f" ({decimal(witness.k_star)})" if args.decimal else ""
        print(f"not flat: edge {witness.edge.u} {witness.edge.v} has k = {rational(witness.k_star)}{extra}")
    return EXIT_OK if witness is None else EXIT_NEGATIVE


def cmd_idleness(args: argparse.Namespace) -> int:
    g, source = load_graph(args)
    _require_connected(g)
    if not (0 <= args.u < g.n and 0 <= args.v < g.n and g.has_edge(args.u, args.v)):
        raise CliError(f"({args.u}, {args.v}) is not an edge")
    prof = idleness_profile(g, (args.u, args.v))
    r = Renderer(args.decimal)
    if args.format == "json":
        body = {
            "profile": {
                "edge": [prof.edge.u, prof.edge.v],
                "degrees": [g.degree(prof.edge.u), g.degree(prof.edge.v)],
                "candidate_breaks": [r.q(a) for a in prof.candidate_breaks],
                "breakpoints": [r.q(a) for a in prof.breakpoints],
                "values": [r.q(v) for v in prof.values],
                "slopes": [r.q(s.slope) for s in prof.segments],
                "pieces": prof.pieces,
                "k": r.q(prof.k_from_final_slope()),
            }
        }
        sys.stdout.write(_dump(_document("idleness", source, g, body)))
        return EXIT_OK
    lines = [
        f"edge {prof.edge.u} {prof.edge.v}  degrees {g.degree(prof.edge.u)} {g.degree(prof.edge.v)}",
        "candidate breaks: " + ", ".join(rational(a) for a in prof.candidate_breaks),
        "alpha  k_alpha",
    ]
    for a, v in zip(prof.breakpoints, prof.values):
        lines.append(f"{rational(a)}  {rational(v)}" + (f"  ({decimal(v)})" if args.decimal else ""))
    lines.append(f"pieces: {prof.pieces}")
    lines.append(f"k: {rational(prof.k_from_final_slope())}")
    print("\n".join(lines))
    return EXIT_OK


def _emit_graph(g: Graph, fmt: str, extra: dict[str, Any] | None = None) -> str:
    if fmt == "graph6":
        return emit_graph6(g) + "\n"
    if fmt == "json":
        doc: dict[str, Any] = {"name": g.name, **_graph_block(g)}
        if extra:
            doc.update(extra)
        return _dump(doc)
    text = emit_edge_list(g)
    if extra and "certified_edges" in extra:
        # comment lines, so the output still parses as an edge list
        text += f"# certified edges: {len(extra['certified_edges'])}\n"
        text += f"# flat on certified edges: {str(extra['flat_on_certified']).lower()}\n"
    return text


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "list":
        if args.format == "json":
            sys.stdout.write(_dump({"named": list(NAMED), "families": list(FAMILIES), "excluded": list(EXCLUDED)}))
        else:
            for name in NAMED:
                print(name)
            for fam in FAMILIES:
                print(f"family:{fam}")
            for name in EXCLUDED:
                print(f"excluded:{name}")
        return EXIT_OK
    if args.target is None:
        raise CliError("catalog emit needs a name or a family spec")
    try:
        if "=" in args.target:
            built = family(FamilySpec.parse(args.target))
            if isinstance(built, Patch):
                extra: dict[str, Any] = {"boundary": sorted(built.boundary)}
                if args.certify:
                    cert = certify_patch(built)
                    extra["certified_edges"] = [[e.u, e.v] for e in cert.certified_edges]
                    extra["flat_on_certified"] = cert.flat_on_certified
                fmt = args.format if args.format != "text" else "edgelist"
                sys.stdout.write(_emit_graph(built.graph, fmt, extra))
                return EXIT_NEGATIVE if extra.get("flat_on_certified") is False else EXIT_OK
            g = built
        elif args.target in EXCLUDED:
            g = excluded_configuration(args.target)
        else:
            g = named(args.target)
    except (CatalogError, GraphError) as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(_emit_graph(g, args.format if args.format != "text" else "edgelist"))
    return EXIT_OK


def _search_config(args: argparse.Namespace) -> SearchConfig:
    rules = frozenset(PRUNE_RULES)
    if getattr(args, "no_prune", False):
        rules = frozenset()
    elif getattr(args, "prune", None) is not None:
        rules = frozenset(r for r in args.prune.split(",") if r)
    try:
        return SearchConfig(
            max_n=args.max_n,
            min_degree=args.min_degree,
            max_degree=args.max_degree,
            require_short_cycle=args.short_cycle,
            prune_rules=rules,
            allow_over_cap=args.allow_over_cap,
            workers=getattr(args, "workers", 1),
            audit_sample=getattr(args, "audit", 0),
            audit_seed=getattr(args, "seed", 0),
        )
    except SearchError as exc:
        raise CliError(str(exc)) from None


def cmd_enumerate(args: argparse.Namespace) -> int:
    cfg = _search_config(args)
    out = sys.stdout
    count = 0
    for g in enumerate_graphs(cfg):
        count += 1
        if args.format == "graph6":
            out.write(emit_graph6(g) + "\n")
        elif args.format == "edgelist":
            out.write(emit_edge_list(g) + "\n")
    if args.format == "count":
        print(count)
    return EXIT_OK


def cmd_find_flat(args: argparse.Namespace) -> int:
    cfg = _search_config(args)
    result = find_ricci_flat(cfg)
    r = Renderer(args.decimal)
    catalog_certs = _catalog_certificates(cfg.max_n)
    if args.format == "graph6":
        for hit in result.hits:
            print(emit_graph6(hit.graph))
        return EXIT_OK
    hits = []
    for hit in result.hits:
        hits.append(
            {
                "n": hit.graph.n,
                "certificate": hit.certificate,
                "graph6": emit_graph6(hit.graph),
                "edges": [[e.u, e.v] for e in hit.graph.edges()],
                "match": _identify(hit.graph, hit.certificate, catalog_certs),
                "types": [{"edge": [t.edge.u, t.edge.v], "tag": t.tag} for t in hit.types],
                "unclassified": [{"edge": [e.u, e.v], "reason": why} for e, why in hit.type_failures],
                "violations": [{"rule": v.rule, "edge": [v.edge.u, v.edge.v]} for v in hit.violations],
                "reports": [
                    {"edge": [rep.edge.u, rep.edge.v], "k": r.q(rep.k_star), "W": r.q(rep.certificate.value)}
                    for rep in hit.reports
                ],
            }
        )
    doc = {
        "tool": {"name": "ricciflat", "version": __version__},
        "command": "find-flat",
        "config": {
            "max_n": cfg.max_n,
            "min_degree": cfg.min_degree,
            "max_degree": cfg.max_degree,
            "require_short_cycle": cfg.require_short_cycle,
            "prune_rules": sorted(cfg.prune_rules),
            "audit_sample": cfg.audit_sample,
            "audit_seed": cfg.audit_seed,
        },
        "stats": {
            "enumerated": result.stats.enumerated,
            "pruned": dict(sorted(result.stats.pruned.items())),
            "solved": result.stats.solved,
            "audited": result.stats.audited,
            "audit_failures": result.stats.audit_failures,
        },
        "hits": hits,
    }
    sys.stdout.write(_dump(doc))
    bad = any(h["match"] == "unclassified" or h["unclassified"] for h in hits) or result.stats.audit_failures
    return EXIT_NEGATIVE if bad else EXIT_OK


def _catalog_certificates(max_n: int) -> dict[str, str]:
    certs: dict[str, str] = {}
    for name, make in NAMED.items():
        g = make()
        if g.n <= max_n:
            certs.setdefault(canonical_certificate(g), name)
    for spec in default_family_grid():
        g = family(spec)
        if isinstance(g, Graph) and g.n <= max_n:
            certs.setdefault(canonical_certificate(g), spec.text())
    return certs


def _identify(g: Graph, cert: str, catalog_certs: dict[str, str]) -> str:
    if cert in catalog_certs:
        return catalog_certs[cert]
    if g.n >= 3 and all(g.degree(v) == 2 for v in range(g.n)) and is_connected(g):
        return f"cycle C{g.n}"
    return "unclassified"


def cmd_classify(args: argparse.Namespace) -> int:
    g, source = load_graph(args)
    _require_connected(g)
    typed, failed = _types_block(g)
    violations = _violations_block(g)
    t5b = type5b_excluded(g)
    nonflat = [[e.u, e.v] for e in g.edges() if lly_curvature(g, e).k_star != 0]
    if args.format == "text":
        for t in typed:
            print(f"{t['edge'][0]} {t['edge'][1]}  {t['tag']}")
        for f in failed:
            print(f"{f['edge'][0]} {f['edge'][1]}  UNCLASSIFIED  {f['reason']}")
        for v in violations:
            print(f"violation {v['rule']} on {v['edge'][0]} {v['edge'][1]}: {v['detail']}")
        if nonflat:
            print(f"{len(nonflat)} edges with nonzero curvature were skipped")
    else:
        body = {
            "types": typed,
            "unclassified": failed,
            "violations": violations,
            "summary": {
                "flat": not nonflat,
                "nonflat_edges": nonflat,
                "typed_edges": len(typed),
                "type5b_excluded": t5b,
            },
        }
        sys.stdout.write(_dump(_document("classify", source, g, body)))
    return EXIT_NEGATIVE if failed or violations else EXIT_OK


# ---------------------------------------------------------------- parser


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="edge-list or graph6 file ('-' for stdin)")
    p.add_argument("--catalog", metavar="NAME", help="named catalog graph or excluded configuration")
    p.add_argument("--family", metavar="SPEC", help="family spec, e.g. 'family=lattice4 length=6 width=6'")
    p.add_argument("--input-format", choices=("auto", "edgelist", "graph6"), default="auto")
    p.add_argument("--decimal", action="store_true", help="add rounded decimals next to exact rationals")


def _add_search(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--min-degree", type=int, default=2)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--short-cycle", action="store_true", help="keep only graphs with a 3- or 4-cycle")
    p.add_argument("--allow-over-cap", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ricciflat", description="Exact Lin-Lu-Yau curvature on small-degree graphs")
    parser.add_argument("--version", action="version", version=f"ricciflat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="per-edge curvature report with transport certificates")
    _add_input(p)
    p.add_argument("--alpha", help="also report k_alpha at this idleness (rational, e.g. 1/5)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("check-flat", help="exit 0 when every edge has curvature 0")
    _add_input(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_check_flat)

    p = sub.add_parser("idleness", help="piecewise-linear profile of k_alpha on one edge")
    _add_input(p)
    p.add_argument("--edge", nargs=2, type=int, metavar=("U", "V"), required=True, dest="edge")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_idleness)

    p = sub.add_parser("catalog", help="list or emit catalog graphs")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("target", nargs="?", help="graph name or family spec")
    p.add_argument("--format", choices=("edgelist", "graph6", "json", "text"), default="text")
    p.add_argument("--certify", action="store_true", help="certify an emitted patch")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("enumerate", help="one graph per isomorphism class")
    _add_search(p)
    p.add_argument("--format", choices=("graph6", "edgelist", "count"), default="graph6")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("find-flat", help="enumerate and keep the Ricci-flat graphs")
    _add_search(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--prune", help=f"comma-separated subset of {','.join(PRUNE_RULES)}")
    p.add_argument("--audit", type=int, default=0, metavar="N", help="re-check N pruned graphs with the full engine")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decimal", action="store_true")
    p.add_argument("--format", choices=("json", "graph6"), default="json")
    p.set_defaults(func=cmd_find_flat)

    p = sub.add_parser("classify", help="local type of every flat edge plus exclusion checks")
    _add_input(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is not None and first not in COMMANDS:
        print(f"ricciflat: unknown subcommand {first!r}; expected one of {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_UNKNOWN_COMMAND
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "edge", None) is not None and args.command == "idleness":
        args.u, args.v = args.edge
    try:
        return args.func(args)
    except CliError as exc:
        print(f"ricciflat: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"ricciflat: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
