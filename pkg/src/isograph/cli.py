"""Command line front end: build graphs into a cache, inspect them, run
the verification suite.

Exit codes: 0 success, 2 bad parameters, 3 a verification check failed,
4 an internal invariant was violated (bug or corrupted cache).  All
structured output is JSON on stdout; human-facing errors go to stderr.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import re
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__
from .enhanced import (
    AdmissibilityError,
    BrandtValidationError,
    EnhancedGraph,
    GraphBuildError,
    GraphBuilder,
    check_admissible,
    diagonal_parity_violations,
    validate_symmetry_and_row_sums,
    vertex_count,
)
from .graph import (
    CoveringError,
    GraphRealizationError,
    adjacency_csv,
    covering_map,
    euler_characteristic,
    graph_from_enhanced,
    is_bipartite,
    is_connected,
    to_dot,
    verify_covering,
)
from .spectral import SpectralError, cheeger_constant, ramanujan_report, spectrum
from .zeta import ZetaError, edge_matrix_zeta, ihara_zeta, reciprocity_check

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_VERIFY = 3
EXIT_INTERNAL = 4


class GraphFileError(RuntimeError):
    """Cache file failed self-validation."""


@dataclass(frozen=True)
class JobConfig:
    p: int
    l: int
    N: int
    seed: int = 0
    cache_dir: str = "isograph-cache"
    tol: float = 1e-9


# ---------------------------------------------------------------- GraphFile


def graph_file_path(cfg: JobConfig) -> str:
    return os.path.join(
        cfg.cache_dir, f"graph_p{cfg.p}_l{cfg.l}_N{cfg.N}_s{cfg.seed}.json"
    )


def graph_to_dict(eg: EnhancedGraph, field_modulus) -> dict:
    return {
        "format": "isograph.graph.v1",
        "metadata": {
            "p": eg.p,
            "l": eg.l,
            "level": eg.level,
            "seed": eg.seed,
            "tool_version": __version__,
        },
        "field": {
            "p": eg.p,
            "degree": 2,
            "modulus": [str(c) for c in field_modulus],
        },
        "class_labels": list(eg.class_labels),
        "primes": list(eg.primes),
        "vertices": [[c, list(S)] for c, S in eg.vertices],
        "adjacency": [list(row) for row in eg.brandt],
        "edges": {
            "target": list(eg.edge_target),
            "dual": list(eg.edge_dual),
        },
        "parity_violations": list(eg.parity_violations),
    }


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_graph_file(path: str, eg: EnhancedGraph, field_modulus) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    payload = canonical_json(graph_to_dict(eg, field_modulus))
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_graph_file(path: str) -> EnhancedGraph:
    """Parse and re-validate a cached graph; corruption raises."""
    with open(path) as fh:
        data = json.load(fh)
    if data.get("format") != "isograph.graph.v1":
        raise GraphFileError(f"{path}: unknown format marker")
    md = data["metadata"]
    p, l, N = md["p"], md["l"], md["level"]
    try:
        primes = check_admissible(p, l, N)
    except AdmissibilityError as e:
        raise GraphFileError(f"{path}: inadmissible parameters: {e}") from None
    if list(primes) != list(data["primes"]):
        raise GraphFileError(f"{path}: stored primes disagree with level")
    vertices = tuple((c, tuple(S)) for c, S in data["vertices"])
    if len(vertices) != vertex_count(p, N):
        raise GraphFileError(f"{path}: vertex count does not match the mass count")
    adjacency = tuple(tuple(int(x) for x in row) for row in data["adjacency"])
    try:
        validate_symmetry_and_row_sums(adjacency, l)
    except BrandtValidationError as e:
        raise GraphFileError(f"{path}: {e}") from None
    parity = diagonal_parity_violations(adjacency)
    if list(parity) != list(data["parity_violations"]):
        raise GraphFileError(f"{path}: stored parity record is stale")
    target = tuple(data["edges"]["target"])
    dual = tuple(data["edges"]["dual"])
    k = l + 1
    if len(target) != len(vertices) * k or len(dual) != len(target):
        raise GraphFileError(f"{path}: edge arrays have wrong length")
    count = [[0] * len(vertices) for _ in vertices]
    for eid, w in enumerate(target):
        count[eid // k][w] += 1
    if tuple(tuple(r) for r in count) != adjacency:
        raise GraphFileError(f"{path}: edges disagree with adjacency")
    for eid, de in enumerate(dual):
        if dual[de] != eid or target[de] != eid // k:
            raise GraphFileError(f"{path}: edge involution broken at {eid}")
    return EnhancedGraph(
        p=p,
        l=l,
        level=N,
        seed=md["seed"],
        primes=tuple(primes),
        class_labels=tuple(data["class_labels"]),
        vertices=vertices,
        brandt=adjacency,
        edge_target=target,
        edge_dual=dual,
        parity_violations=parity,
    )


def build_or_load(cfg: JobConfig, force: bool = False) -> EnhancedGraph:
    path = graph_file_path(cfg)
    if not force and os.path.exists(path):
        eg = load_graph_file(path)
        if (eg.p, eg.l, eg.level) == (cfg.p, cfg.l, cfg.N):
            return eg
    builder = GraphBuilder(cfg.p, cfg.l, seed=cfg.seed)
    eg = builder.build(cfg.N)
    write_graph_file(path, eg, builder.table.field.modulus)
    return eg


# ------------------------------------------------------------ verification


def verify_graph(eg: EnhancedGraph, tol: float, oracle_edge_limit: int = 30) -> dict:
    """Property suite for one graph; returns {check: bool} plus details."""
    p, l, N = eg.p, eg.l, eg.level
    checks: dict[str, bool] = {}
    detail: dict[str, object] = {}

    checks["vertex_count"] = eg.n == vertex_count(p, N)
    try:
        validate_symmetry_and_row_sums(eg.brandt, l)
        checks["symmetry_row_sums"] = True
    except BrandtValidationError as e:
        checks["symmetry_row_sums"] = False
        detail["symmetry_row_sums"] = str(e)
    checks["even_diagonal"] = eg.parity_violations == ()
    if eg.parity_violations:
        detail["even_diagonal"] = list(eg.parity_violations)

    g = graph_from_enhanced(eg)
    checks["connected"] = is_connected(g)
    checks["non_bipartite"] = not is_bipartite(g)

    spec = spectrum(eg, tol=tol)
    rep = ramanujan_report(spec, l, tol=tol)
    checks["ramanujan_window"] = rep.ok and rep.connected
    detail["lambda_star"] = rep.lambda_star
    detail["ramanujan_bound"] = rep.bound

    chi = euler_characteristic(g)
    ok_chi = chi == eg.n * (1 - l) // 2
    if N == 1:
        ok_chi = ok_chi and chi == (p - 1) * (1 - l) // 24
    checks["euler_characteristic"] = ok_chi
    detail["chi"] = chi

    gap = spec.laplacian_gap
    sqrt_l = math.sqrt(l)
    upper_h = math.sqrt(2 * (l + 1)) * (sqrt_l + 1)
    if eg.n == 1:
        # one vertex: no nontrivial eigenvalue exists, bounds are vacuous
        checks["laplacian_gap_window"] = True
    else:
        checks["laplacian_gap_window"] = (
            gap >= (sqrt_l - 1) ** 2 - tol and gap / 2 <= upper_h + tol
        )
    detail["laplacian_gap"] = gap
    ch = cheeger_constant(eg, tol=tol)
    if ch.method == "exact":
        checks["cheeger_sandwich"] = (
            (sqrt_l - 1) ** 2 / 2 - tol <= ch.value <= upper_h + tol
            and gap / 2 - tol <= ch.value <= math.sqrt(2 * (l + 1) * gap) + tol
        )
        detail["cheeger"] = ch.value
    else:
        checks["cheeger_sandwich"] = ch.lower_bound <= ch.upper_bound + tol
        detail["cheeger"] = None
    detail["cheeger_method"] = ch.method

    if eg.oriented_edge_count <= oracle_edge_limit:
        z = ihara_zeta(eg)
        checks["bass_edge_oracle"] = edge_matrix_zeta(g) == z.inverse_polynomial()
    else:
        detail["bass_edge_oracle"] = "skipped: graph too large"

    # every proper divisor level must be covered with the right fibers
    cover_ok = True
    for M in range(1, N):
        if N % M != 0:
            continue
        coarse = GraphBuilder(p, l, seed=eg.seed).build(M)
        try:
            verify_covering(eg, coarse, covering_map(eg, coarse))
        except CoveringError as e:
            cover_ok = False
            detail[f"covering_{M}"] = str(e)
    checks["coverings"] = cover_ok

    return {
        "p": p,
        "l": l,
        "N": N,
        "n": eg.n,
        "checks": checks,
        "detail": detail,
        "ok": all(checks.values()),
    }


# ------------------------------------------------------------- grid parsing


_GRID_CLAUSE = re.compile(r"([plN])\s*in\s*\{([0-9,\s]*)\}")


def parse_grid(text: str) -> list[tuple[int, int, int]]:
    """Expand 'p in {13,37}, l in {3,5}, N in {1,2,3,6}' to admissible
    (p, l, N) triples; inadmissible combinations are filtered, not errors."""
    found = dict.fromkeys("plN")
    consumed = 0
    for m in _GRID_CLAUSE.finditer(text):
        var, body = m.group(1), m.group(2)
        if found[var] is not None:
            raise AdmissibilityError(f"grid clause for {var} repeated")
        values = [int(x) for x in body.replace(" ", "").split(",") if x]
        if not values:
            raise AdmissibilityError(f"grid clause for {var} is empty")
        found[var] = values
        consumed += m.end() - m.start()
    leftover = _GRID_CLAUSE.sub("", text).replace(",", "").strip()
    if leftover:
        raise AdmissibilityError(f"unparsed grid fragment: {leftover!r}")
    missing = [v for v, vals in found.items() if vals is None]
    if missing:
        raise AdmissibilityError(f"grid is missing clauses for {missing}")
    triples = []
    for p, l, N in itertools.product(found["p"], found["l"], found["N"]):
        try:
            check_admissible(p, l, N)
        except AdmissibilityError:
            continue
        triples.append((p, l, N))
    return triples


def grid_skips(text: str, triples) -> list[list[int]]:
    kept = set(triples)
    found = {
        m.group(1): [int(x) for x in m.group(2).replace(" ", "").split(",") if x]
        for m in _GRID_CLAUSE.finditer(text)
    }
    out = []
    for p, l, N in itertools.product(found["p"], found["l"], found["N"]):
        if (p, l, N) not in kept:
            out.append([p, l, N])
    return out


# ----------------------------------------------------------- command bodies


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_build(args) -> int:
    cfg = _config(args)
    eg = build_or_load(cfg, force=True)
    path = graph_file_path(cfg)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(graph_from_enhanced(eg)))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(adjacency_csv(graph_from_enhanced(eg)))
    _emit(
        {
            "path": path,
            "p": eg.p,
            "l": eg.l,
            "N": eg.level,
            "vertices": eg.n,
            "oriented_edges": eg.oriented_edge_count,
            "parity_violations": list(eg.parity_violations),
        }
    )
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    eg = build_or_load(cfg)
    spec = spectrum(eg, tol=cfg.tol)
    rep = ramanujan_report(spec, eg.l, tol=cfg.tol)
    _emit(
        {
            "p": eg.p,
            "l": eg.l,
            "N": eg.level,
            "degree": spec.degree,
            "eigenvalues": list(spec.eigenvalues),
            "lambda_star": rep.lambda_star,
            "ramanujan_bound": rep.bound,
            "ramanujan": rep.ok,
            "connected": rep.connected,
            "laplacian_gap": spec.laplacian_gap,
            "solver_residual": spec.residual,
        }
    )
    return EXIT_OK if (rep.ok and rep.connected) else EXIT_VERIFY


def cmd_zeta(args) -> int:
    cfg = _config(args)
    eg = build_or_load(cfg)
    z = ihara_zeta(eg)
    out = z.to_json_dict()
    out.update({"p": eg.p, "l": eg.l, "N": eg.level})
    _emit(out)
    return EXIT_OK


def cmd_cheeger(args) -> int:
    cfg = _config(args)
    eg = build_or_load(cfg)
    r = cheeger_constant(eg, tol=cfg.tol)
    _emit(
        {
            "p": eg.p,
            "l": eg.l,
            "N": eg.level,
            "value": r.value,
            "witness": list(r.witness) if r.witness is not None else None,
            "lower_bound": r.lower_bound,
            "upper_bound": r.upper_bound,
            "method": r.method,
        }
    )
    return EXIT_OK


def cmd_covering(args) -> int:
    cfg = _config(args)
    if args.N % args.M != 0:
        raise AdmissibilityError(f"{args.M} does not divide {args.N}")
    fine = build_or_load(cfg)
    coarse = build_or_load(
        JobConfig(cfg.p, cfg.l, args.M, cfg.seed, cfg.cache_dir, cfg.tol)
    )
    cov = covering_map(fine, coarse)
    report = verify_covering(fine, coarse, cov)
    report["degree"] = cov.fiber_size
    _emit(report)
    return EXIT_OK


def cmd_reciprocity(args) -> int:
    cert = reciprocity_check(args.p, args.q, args.l, seed=args.seed)
    _emit(cert)
    return EXIT_OK if cert["equal"] else EXIT_VERIFY


def _verify_one(job) -> dict:
    (p, l, N), seed, cache_dir, tol = job
    cfg = JobConfig(p, l, N, seed, cache_dir, tol)
    eg = build_or_load(cfg)
    return verify_graph(eg, tol)


def cmd_verify(args) -> int:
    if args.grid:
        triples = parse_grid(args.grid)
        skips = grid_skips(args.grid, triples)
    else:
        if args.p is None or args.l is None or args.N is None:
            raise AdmissibilityError("verify needs either p l N or --grid")
        check_admissible(args.p, args.l, args.N)
        triples = [(args.p, args.l, args.N)]
        skips = []
    jobs = [(t, args.seed, args.cache_dir, args.tol) for t in triples]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    failures = [r for r in results if not r["ok"]]
    manifest = {
        "graphs": results,
        "skipped_inadmissible": skips,
        "failures": [
            {
                "p": r["p"],
                "l": r["l"],
                "N": r["N"],
                "failed_checks": [c for c, ok in r["checks"].items() if not ok],
            }
            for r in failures
        ],
        "ok": not failures,
    }
    _emit(manifest)
    return EXIT_OK if not failures else EXIT_VERIFY


# ----------------------------------------------------------------- argparse


def _config(args) -> JobConfig:
    return JobConfig(
        p=args.p,
        l=args.l,
        N=args.N,
        seed=args.seed,
        cache_dir=args.cache_dir,
        tol=args.tol,
    )


def _add_common(sub) -> None:
    sub.add_argument("--cache-dir", default="isograph-cache")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--tol", type=float, default=1e-9)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isograph",
        description="Supersingular isogeny graphs with level structure",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    def plN(sub):
        sub.add_argument("p", type=int)
        sub.add_argument("l", type=int)
        sub.add_argument("N", type=int)

    sp = subs.add_parser("build", help="construct a graph and cache it")
    plN(sp)
    sp.add_argument("--dot", help="write a DOT rendering here")
    sp.add_argument("--csv", help="write the adjacency matrix as CSV here")
    _add_common(sp)
    sp.set_defaults(func=cmd_build)

    sp = subs.add_parser("spectrum", help="adjacency spectrum and Ramanujan check")
    plN(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = subs.add_parser("zeta", help="exact Ihara zeta function")
    plN(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_zeta)

    sp = subs.add_parser("cheeger", help="isoperimetric constant and bounds")
    plN(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_cheeger)

    sp = subs.add_parser("covering", help="verify the projection to a coarser level")
    plN(sp)
    sp.add_argument("M", type=int)
    _add_common(sp)
    sp.set_defaults(func=cmd_covering)

    sp = subs.add_parser("reciprocity", help="zeta reciprocity for (p, q, l)")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("l", type=int)
    _add_common(sp)
    sp.set_defaults(func=cmd_reciprocity)

    sp = subs.add_parser("verify", help="run the property suite on a graph or grid")
    sp.add_argument("p", type=int, nargs="?")
    sp.add_argument("l", type=int, nargs="?")
    sp.add_argument("N", type=int, nargs="?")
    sp.add_argument("--grid", help='e.g. "p in {13,37}, l in {3,5}, N in {1,2,6}"')
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AdmissibilityError, CoveringError, ZetaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMS
    except (
        GraphBuildError,
        GraphFileError,
        BrandtValidationError,
        GraphRealizationError,
        SpectralError,
    ) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
