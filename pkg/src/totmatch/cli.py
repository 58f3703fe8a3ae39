"""Command-line entry point.

Subcommands: delta (maximum subdeterminant), solve (max-weight total
matching), check (bounded recognition), bounds (degree-sequence bounds),
gen (corpus generation), verify (cross-validation over a corpus directory).

Exit codes: 0 success, 1 the value exceeds the requested bound, 2 input
error, 3 resource/cap error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO

from .errors import (BoundExceededError, InputError, PreconditionError,
                     SizeCapError)
from .forests import (bipartition_lower_witness, degree_sequence_bounds,
                      delta_forest_formula)
from .graphs import (Graph, classify_paths_and_cycles, format_graph, generate,
                     parse_element, parse_graph)
from .matching import (PathInstance, TotalMatching, format_total_matching,
                       is_total_matching, solve_brute, solve_fpt,
                       solve_paths_dp, total_matching_weight)
from .structure import (certificate_to_json, format_certificate,
                        near_pencil_lower_bound, recognize)
from .subdet import (_is_forest, delta_by_components, format_coloring,
                     max_subdet_brute, max_subdet_forced,
                     max_subdet_principal, verify_result)

EXIT_OK = 0
EXIT_EXCEEDS = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    command: str
    path: Optional[str] = None
    method: str = "auto"
    bound: Optional[int] = None
    cap: Optional[int] = None
    seed: int = 0
    as_json: bool = False
    workers: int = 1  # accepted for interface stability; computations are sequential
    forced: tuple[str, ...] = ()
    family: Optional[str] = None
    params: dict = field(default_factory=dict)


def main(argv=None) -> int:
    try:
        config = _parse_args(sys.argv[1:] if argv is None else argv)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    return run(config, sys.stdout, sys.stderr)


def run(config: RunConfig, out: TextIO, err: TextIO) -> int:
    try:
        handler = {
            "delta": _cmd_delta,
            "solve": _cmd_solve,
            "check": _cmd_check,
            "bounds": _cmd_bounds,
            "gen": _cmd_gen,
            "verify": _cmd_verify,
        }[config.command]
        return handler(config, out)
    except BoundExceededError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_EXCEEDS
    except SizeCapError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_RESOURCE
    except (InputError, PreconditionError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


# ---------------------------------------------------------------------------
# Argument parsing


def _parse_args(argv) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="totmatch",
        description="Exact total-matching and constraint-matrix "
                    "subdeterminant toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", help="graph file")
        p.add_argument("--method", default="auto")
        p.add_argument("--bound", type=int, default=None)
        p.add_argument("--cap", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--forced", default=None,
                       help="comma-separated elements, e.g. v3,e7")

    for name in ("delta", "solve", "check", "bounds"):
        common(sub.add_parser(name))
    gen = sub.add_parser("gen")
    gen.add_argument("family")
    gen.add_argument("params", nargs="*", help="key=value generator params")
    common(gen, with_input=False)
    verify = sub.add_parser("verify")
    verify.add_argument("input", help="corpus directory of .graph files")
    common(sub.choices["verify"], with_input=False)

    ns = parser.parse_args(argv)
    if ns.cap is not None and ns.cap < 1:
        raise InputError("--cap must be >= 1")
    if ns.workers < 1:
        raise InputError("--workers must be >= 1")
    forced = tuple(tok for tok in (ns.forced or "").split(",") if tok)
    params = {}
    for item in getattr(ns, "params", []):
        if "=" not in item:
            raise InputError(f"generator param {item!r} is not key=value")
        key, value = item.split("=", 1)
        params[key] = int(value)
    return RunConfig(command=ns.command, path=getattr(ns, "input", None),
                     method=ns.method, bound=ns.bound, cap=ns.cap,
                     seed=ns.seed, as_json=ns.json, workers=ns.workers,
                     forced=forced, family=getattr(ns, "family", None),
                     params=params)


def _load(config: RunConfig) -> Graph:
    return parse_graph(Path(config.path).read_text())


def _emit(config: RunConfig, out: TextIO, data: dict) -> None:
    if config.as_json:
        print(json.dumps(data, sort_keys=True), file=out)
    else:
        for key, value in data.items():
            if isinstance(value, str) and "\n" in value:
                print(value, file=out)
            else:
                print(f"{key}: {value}", file=out)


# ---------------------------------------------------------------------------
# Commands


def _cmd_delta(config: RunConfig, out: TextIO) -> int:
    g = _load(config)
    method = config.method
    if method == "auto":
        if config.bound is not None:
            method = "recognize"
        elif _is_forest(g):
            method = "principal"
        else:
            method = "full"

    if method == "recognize":
        if config.bound is None:
            raise InputError("recognize needs --bound")
        return _report_outcome(config, out, g, recognize(g, config.bound))

    kwargs = {} if config.cap is None else {"cap": config.cap}
    if method == "full":
        res = max_subdet_brute(g, **kwargs)
    elif method == "principal":
        res = max_subdet_principal(g, **kwargs)
    elif method == "formula":
        res = delta_forest_formula(g, **kwargs)
    elif method == "forced":
        forced = [parse_element(tok) for tok in config.forced]
        res = max_subdet_forced(g, forced, cap=config.cap)
    else:
        raise InputError(f"unknown delta method {method!r}")
    _emit(config, out, {
        "delta": res.value,
        "mode": res.mode,
        "red": [str(e) for e in res.witness.red],
        "cyan": [str(e) for e in res.witness.cyan],
    } if config.as_json else {
        "delta": res.value,
        "mode": res.mode,
        "witness": format_coloring(res.witness),
    })
    return EXIT_OK


def _report_outcome(config: RunConfig, out: TextIO, g: Graph, outcome) -> int:
    if outcome.kind == "exact":
        _emit(config, out, {"delta": outcome.value})
        return EXIT_OK
    if config.as_json:
        _emit(config, out, {"exceeds": True, "bound": config.bound,
                            "certificate": certificate_to_json(outcome.certificate)})
    else:
        print(f"exceeds: {config.bound}", file=out)
        print(format_certificate(outcome.certificate), file=out)
    return EXIT_EXCEEDS


def _cmd_check(config: RunConfig, out: TextIO) -> int:
    if config.bound is None:
        raise InputError("check needs --bound")
    g = _load(config)
    return _report_outcome(config, out, g, recognize(g, config.bound))


def _cmd_solve(config: RunConfig, out: TextIO) -> int:
    g = _load(config)
    method = config.method
    if method == "auto":
        method = "fpt" if config.bound is not None else "brute"
    if method == "brute":
        kwargs = {} if config.cap is None else {"cap": config.cap}
        sol = solve_brute(g, **kwargs)
    elif method == "fpt":
        if config.bound is None:
            raise InputError("solve --method fpt needs --bound")
        kwargs = {} if config.cap is None else {"partial_cap": config.cap}
        sol = solve_fpt(g, config.bound, **kwargs)
    elif method == "dp":
        classification = classify_paths_and_cycles(g)
        if classification.cycles:
            raise InputError("dp method requires a disjoint union of paths")
        sol = solve_paths_dp(
            [PathInstance.from_path(g, path) for path in classification.paths])
    else:
        raise InputError(f"unknown solve method {method!r}")
    if config.as_json:
        _emit(config, out, {
            "weight": sol.weight,
            "vertices": list(sol.chosen_vertices),
            "edge_indices": list(sol.chosen_edges),
            "edges": [list(g.edge_endpoints(i)) for i in sol.chosen_edges],
        })
    else:
        _emit(config, out, {
            "weight": sol.weight,
            "vertices": " ".join(str(v) for v in sol.chosen_vertices),
            "edges": " ".join("({},{})".format(*g.edge_endpoints(i))
                              for i in sol.chosen_edges),
        })
    return EXIT_OK


def _cmd_bounds(config: RunConfig, out: TextIO) -> int:
    g = _load(config)
    data: dict = {}
    if _is_forest(g):
        b = degree_sequence_bounds(g)
        side, det = bipartition_lower_witness(g)
        data.update({
            "lower": b.lower,
            "lower_exact_square": b.lower_exact_square,
            "upper": b.upper,
            "degenerate": b.degenerate,
            "bipartition_side": list(side) if config.as_json
            else " ".join(str(v) for v in side),
            "bipartition_det": det,
        })
    data["near_pencil_lower"] = _heuristic_near_pencil(g)
    _emit(config, out, data)
    return EXIT_OK


def _heuristic_near_pencil(g: Graph) -> int:
    """Greedy near-pencil lower bound: start from all degree->=3 vertices
    and drop members until everyone keeps >= 2 outside neighbors."""
    d = set(v for v in range(1, g.n + 1) if g.degree(v) >= 3)
    while True:
        bad = next((v for v in sorted(d)
                    if sum(1 for u in g.neighbors(v) if u not in d) < 2), None)
        if bad is None:
            break
        d.remove(bad)
    return near_pencil_lower_bound(g, sorted(d))


def _cmd_gen(config: RunConfig, out: TextIO) -> int:
    g = generate(config.family, dict(config.params), seed=config.seed)
    out.write(format_graph(g))
    return EXIT_OK


def _cmd_verify(config: RunConfig, out: TextIO) -> int:
    """Cross-validate every .graph file in a directory: the subdeterminant
    via two independent routes, and the two total-matching solvers."""
    root = Path(config.path)
    if not root.is_dir():
        raise InputError(f"{root} is not a directory")
    files = sorted(root.glob("*.graph"))
    if not files:
        raise InputError(f"no .graph files under {root}")
    failures = 0
    for path in files:
        try:
            g = parse_graph(path.read_text())
            notes = []
            if g.num_elements <= 14:
                res = max_subdet_brute(g)
                if not verify_result(g, res):
                    raise InputError("witness re-verification failed")
                if delta_by_components(g) != res.value:
                    raise InputError("component product mismatch")
                if _is_forest(g):
                    if max_subdet_principal(g).value != res.value or \
                            delta_forest_formula(g).value != res.value:
                        raise InputError("forest route mismatch")
                notes.append(f"delta={res.value}")
                if g.num_elements <= 16:
                    oracle = solve_brute(g)
                    fpt = solve_fpt(g, res.value)
                    if oracle.weight != fpt.weight or \
                            not is_total_matching(g, fpt) or \
                            total_matching_weight(g, fpt) != fpt.weight:
                        raise InputError("total matching solver mismatch")
                    notes.append(f"weight={oracle.weight}")
            print(f"{path.name}: ok " + " ".join(notes), file=out)
        except (InputError, PreconditionError, SizeCapError) as exc:
            failures += 1
            print(f"{path.name}: FAIL {exc}", file=out)
    if failures:
        print(f"failures: {failures}", file=out)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
