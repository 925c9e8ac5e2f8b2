"""Command line interface.

Four subcommands: ``graph`` (build and inspect a connectivity graph),
``model`` (assemble a Hamiltonian and show its structure), ``verify``
(seeded finite-difference check of the zero-mode property) and ``spectrum``
(grid diagonalization of a small confined model).  Settings come from an
optional JSON config file with individual flags taking precedence; JSON
reports are canonical (sorted keys, no timestamps), so identical configs
and seeds produce byte-identical output.  Exit status: 0 on success, 1 when
a verification check fails, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__, graphs
from .expr import ExprError
from .graphs import Graph
from .model import (
    CustomConfinement,
    HarmonicConfinement,
    ModelSpec,
    closed_form_constants,
    potential_breakdown,
)
from .pairfunc import PairFunction, make_pair, pair_from_expression
from .spectrum import (
    GridSpec,
    discretize,
    ground_state_overlap,
    lowest_eigenpair,
    psd_probe,
    symmetric_eigenpair,
)
from .verify import verify_model

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Bad or inconsistent run configuration."""


# ---------------------------------------------------------------------------
# graph expressions: families and products in functional notation

_GRAPH_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|[(),])")

_GRAPH_OPS = {
    "join": graphs.join,
    "disjoint_union": graphs.disjoint_union,
    "complement": graphs.graph_complement,
    "cartesian": graphs.cartesian,
    "tensor": graphs.tensor,
    "strong": graphs.strong,
    "lexicographic": graphs.lexicographic,
    "corona": graphs.corona,
}


def parse_graph_expression(src: str) -> Graph:
    """Evaluate e.g. ``cartesian(path(7), path(2))`` or ``wheel(7)``.

    Understood names: the graph families (with integer arguments, plus the
    flag ``open`` for a non-periodic band) and the operations join,
    disjoint_union, complement and the four standard products plus corona.
    """
    pos = 0
    tokens: list[str] = []
    while pos < len(src):
        m = _GRAPH_TOKEN.match(src, pos)
        if m is None:
            raise ConfigError(f"bad graph expression near offset {pos}: {src[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append("")

    k = 0

    def peek() -> str:
        return tokens[k]

    def take(expected: str | None = None) -> str:
        nonlocal k
        tok = tokens[k]
        if expected is not None and tok != expected:
            raise ConfigError(f"graph expression: expected {expected!r}, found {tok!r}")
        k += 1
        return tok

    def parse_value():
        tok = take()
        if tok.isdigit():
            return int(tok)
        if not tok or not (tok[0].isalpha() or tok[0] == "_"):
            raise ConfigError(f"graph expression: unexpected token {tok!r}")
        if peek() != "(":
            return tok  # bare word, e.g. the 'open' flag
        take("(")
        args = []
        if peek() != ")":
            args.append(parse_value())
            while peek() == ",":
                take(",")
                args.append(parse_value())
        take(")")
        return _apply(tok, args)

    out = parse_value()
    if peek() != "":
        raise ConfigError(f"graph expression: trailing input {peek()!r}")
    if not isinstance(out, Graph):
        raise ConfigError("graph expression did not produce a graph")
    return out


def _apply(name: str, args: list) -> Graph:
    key = name.lower()
    if key in _GRAPH_OPS:
        if not all(isinstance(a, Graph) for a in args):
            raise ConfigError(f"graph operation {name!r} takes graph arguments")
        try:
            return _GRAPH_OPS[key](*args)
        except TypeError:
            raise ConfigError(f"graph operation {name!r} got {len(args)} arguments") from None
    ints = [a for a in args if isinstance(a, int)]
    flags = {a for a in args if isinstance(a, str)}
    bad = flags - {"open", "periodic"}
    if bad or any(isinstance(a, Graph) for a in args):
        raise ConfigError(f"bad arguments to graph family {name!r}")
    try:
        if key in ("circulant", "banded"):
            return graphs.banded(ints[0], ints[1], periodic="open" not in flags)
        if key == "complete_bipartite":
            return graphs.complete_bipartite(ints[0], ints[1])
        if key == "empty":
            return graphs.empty_graph(ints[0])
        return graphs.make_family(key, ints[0])
    except (IndexError, TypeError):
        raise ConfigError(f"graph family {name!r} got arguments {args!r}") from None
    except ValueError as err:
        raise ConfigError(str(err)) from None


# ---------------------------------------------------------------------------
# configuration assembly

def _merge_config(file_cfg: dict, section: str, flags: dict) -> dict:
    """Section of the config file with non-None flag values layered on top."""
    out = dict(file_cfg.get(section, {}))
    for key, val in flags.items():
        if val is not None:
            out[key] = val
    return out


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file is not valid JSON: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a JSON object")
    return data


def build_graph(cfg: dict) -> tuple[Graph, dict]:
    sources = [k for k in ("family", "edge_list", "product") if cfg.get(k)]
    if len(sources) != 1:
        raise ConfigError(
            "exactly one graph source is required: family, edge_list or product")
    if cfg.get("family"):
        fam = str(cfg["family"])
        if cfg.get("n") is None:
            raise ConfigError(f"graph family {fam!r} needs n")
        try:
            g = graphs.make_family(fam, int(cfg["n"]),
                                   r=None if cfg.get("r") is None else int(cfg["r"]),
                                   m=None if cfg.get("m") is None else int(cfg["m"]),
                                   periodic=not cfg.get("open", False))
        except ValueError as err:
            raise ConfigError(str(err)) from None
        desc = {"family": fam, "n": int(cfg["n"])}
        if cfg.get("r") is not None:
            desc["r"] = int(cfg["r"])
        if cfg.get("m") is not None:
            desc["m"] = int(cfg["m"])
        if cfg.get("open"):
            desc["open"] = True
        return g, desc
    if cfg.get("edge_list"):
        path = str(cfg["edge_list"])
        try:
            with open(path, "r", encoding="utf-8") as fh:
                g = graphs.from_edge_list(fh.read())
        except OSError as err:
            raise ConfigError(f"cannot read edge list: {err}") from err
        except ValueError as err:
            raise ConfigError(str(err)) from None
        return g, {"edge_list": path}
    g = parse_graph_expression(str(cfg["product"]))
    return g, {"product": str(cfg["product"])}


def build_pair(cfg: dict) -> PairFunction:
    kind = cfg.get("kind")
    expr_src = cfg.get("expr")
    if bool(kind) == bool(expr_src):
        raise ConfigError("exactly one pair source is required: kind or expr")
    try:
        if kind:
            params = {}
            if cfg.get("g") is not None:
                params["g"] = float(cfg["g"])
            if cfg.get("ell") is not None:
                params["ell"] = float(cfg["ell"])
            return make_pair(str(kind), **params)
        return pair_from_expression(str(expr_src), {
            k: float(v) for k, v in (cfg.get("params") or {}).items()})
    except (TypeError, ExprError) as err:
        raise ConfigError(str(err)) from None
    except ValueError as err:
        raise ConfigError(str(err)) from None


def build_confinement(cfg: dict):
    if not cfg or cfg.get("kind") in (None, "none"):
        if cfg.get("expr"):
            try:
                return CustomConfinement.from_expression(
                    str(cfg["expr"]),
                    {k: float(v) for k, v in (cfg.get("params") or {}).items()})
            except ExprError as err:
                raise ConfigError(str(err)) from None
        return None
    if cfg.get("kind") == "harmonic":
        omega = cfg.get("omega")
        if omega is None:
            raise ConfigError("harmonic confinement needs omega")
        try:
            return HarmonicConfinement(float(omega))
        except ValueError as err:
            raise ConfigError(str(err)) from None
    raise ConfigError(f"unknown confinement kind {cfg.get('kind')!r}")


def build_model(file_cfg: dict, args: argparse.Namespace) -> tuple[ModelSpec, dict]:
    gcfg = _merge_config(file_cfg, "graph", {
        "family": args.family, "n": args.n, "r": args.r, "m": args.m,
        "open": args.open_band, "edge_list": args.edge_list, "product": args.product,
    })
    pcfg = _merge_config(file_cfg, "pair", {
        "kind": args.pair, "g": args.g, "ell": args.ell, "expr": args.pair_expr,
        "params": _parse_params(args.param),
    })
    ccfg = _merge_config(file_cfg, "confinement", {
        "kind": "harmonic" if args.omega is not None else None,
        "omega": args.omega,
        "expr": args.confine_expr,
        "params": _parse_params(args.confine_param),
    })
    mcfg = _merge_config(file_cfg, "model", {
        "dim": args.dim, "hbar": args.hbar, "mass": args.mass,
    })
    graph, gdesc = build_graph(gcfg)
    pair = build_pair(pcfg)
    conf = build_confinement(ccfg)
    try:
        model = ModelSpec(
            graph=graph, pair=pair,
            dim=int(mcfg.get("dim", 1)),
            hbar=float(mcfg.get("hbar", 1.0)),
            mass=float(mcfg.get("mass", 1.0)),
            confinement=conf,
        )
    except ValueError as err:
        raise ConfigError(str(err)) from None
    resolved = {
        "graph": gdesc,
        "pair": pair.describe(),
        "model": {"dim": model.dim, "hbar": model.hbar, "mass": model.mass},
        "confinement": None if conf is None else conf.describe(),
    }
    return model, resolved


def _parse_params(items: Sequence[str] | None) -> dict | None:
    if not items:
        return None
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"parameter binding {item!r} must look like name=value")
        name, _, val = item.partition("=")
        try:
            out[name.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"parameter {name.strip()!r} has non-numeric value {val!r}") from None
    return out


# ---------------------------------------------------------------------------
# output helpers

def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    # bool subclasses int, so it must be screened off before the int branch
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def canonical_json(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(report: dict, path: str | None) -> None:
    text = canonical_json(report)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, seed: int, samples) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        flat = samples[0].coords.size if samples else 0
        writer.writerow(["seed"] + [f"x{i}" for i in range(flat)] + ["residual", "h"])
        for s in samples:
            coords = [repr(float(v)) for v in s.coords.ravel()]
            writer.writerow([seed] + coords + [repr(s.relative_residual), repr(s.h)])


# ---------------------------------------------------------------------------
# subcommands

def cmd_graph(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    gcfg = _merge_config(file_cfg, "graph", {
        "family": args.family, "n": args.n, "r": args.r, "m": args.m,
        "open": args.open_band, "edge_list": args.edge_list, "product": args.product,
    })
    g, gdesc = build_graph(gcfg)
    connected = g.is_connected()
    if not connected:
        print("warning: graph is disconnected", file=sys.stderr)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "graph",
        "config": {"graph": gdesc},
        "n": g.n,
        "simple": g.is_simple,
        "edge_count": g.edge_count,
        "two_path_count": g.two_path_count(),
        "degree_sequence": g.degree_sequence().tolist(),
        "connected": connected,
        "edges": [[i, j, float(g.weights[i, j])] for i, j in g.edges()],
    }
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(graphs.to_dot(g))
    if args.edges_out:
        with open(args.edges_out, "w", encoding="utf-8") as fh:
            fh.write(graphs.to_edge_list(g))
    _emit(report, args.json)
    return 0


def _parse_at(spec: str, model: ModelSpec) -> np.ndarray:
    try:
        vals = [float(v) for v in spec.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"bad coordinate list {spec!r}") from None
    want = model.n_particles * model.dim
    if len(vals) != want:
        raise ConfigError(
            f"coordinate list has {len(vals)} values, model needs N*D = {want}")
    return np.asarray(vals).reshape(model.n_particles, model.dim)


def cmd_model(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    model, resolved = build_model(file_cfg, args)
    if not model.graph.is_connected():
        print("warning: graph is disconnected", file=sys.stderr)
    consts = closed_form_constants(model)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "model",
        "config": resolved,
        "n_particles": model.n_particles,
        "edge_count": model.graph.edge_count,
        "wedge_count": model.graph.two_path_count(),
        "weighted": not model.graph.is_simple,
        "closed_form_constants": None if consts is None else {
            "v2_constant": consts.v2_constant,
            "v3_constant": consts.v3_constant,
            "confinement_constant": consts.confinement_constant,
            "constant_shift": consts.constant_shift,
            "e0": consts.e0,
        },
    }
    if not model.graph.is_simple:
        w = model.graph.weights
        report["weighted_bonds"] = [
            {"edge": [i, j], "p": float(w[i, j]),
             "w_squared_coefficient": float(w[i, j] * (w[i, j] - 1.0))}
            for i, j in model.graph.edges()
        ]
    if model.pair.kinked:
        c = model.pair.delta_coefficient
        report["delta_terms"] = [
            {"edge": [i, j],
             "coefficient": None if c is None else model.kappa * float(model.graph.weights[i, j]) * c}
            for i, j in model.graph.edges()
        ]
    if args.at:
        coords = _parse_at(args.at, model)
        bd = potential_breakdown(model, coords)
        report["at"] = {
            "coords": coords,
            "v2_smooth": bd.v2_smooth,
            "v3": bd.v3,
            "v1": bd.v1,
            "v2ll": bd.v2ll,
            "total_smooth": bd.total_smooth,
        }
    _emit(report, args.json)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    model, resolved = build_model(file_cfg, args)
    vcfg = _merge_config(file_cfg, "verify", {
        "samples": args.samples, "seed": args.seed, "fd_step": args.fd_step,
        "box_half_width": args.box, "min_separation": args.min_sep,
        "tolerance": args.tolerance, "e0": args.e0,
    })
    if vcfg.get("seed") is None:
        raise ConfigError("verification runs require an explicit seed")
    seed = int(vcfg["seed"])
    result = verify_model(
        model,
        n_samples=int(vcfg.get("samples", 50)),
        seed=seed,
        h=float(vcfg.get("fd_step", 1e-3)),
        tolerance=float(vcfg.get("tolerance", 1e-5)),
        box_half_width=float(vcfg.get("box_half_width", 2.0)),
        min_separation=float(vcfg.get("min_separation", 0.65)),
        e0_override=None if vcfg.get("e0") is None else float(vcfg["e0"]),
    )
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "config": {
            **resolved,
            "verify": {
                "samples": int(vcfg.get("samples", 50)),
                "seed": seed,
                "fd_step": float(vcfg.get("fd_step", 1e-3)),
                "tolerance": float(vcfg.get("tolerance", 1e-5)),
                "box_half_width": float(vcfg.get("box_half_width", 2.0)),
                "min_separation": float(vcfg.get("min_separation", 0.65)),
                "e0_override": None if vcfg.get("e0") is None else float(vcfg["e0"]),
            },
        },
        "max_relative_residual": result.max_relative_residual,
        "max_relative_residual_half_step": result.max_relative_residual_half,
        "convergence_ok": result.convergence_ok,
        "max_factorization_drift": result.max_drift,
        "empirical_e0_mean": result.e0_mean,
        "empirical_e0_spread": result.e0_spread,
        "e0_expected": result.e0_expected,
        "constant_shift": result.constant_shift,
        "passed": result.passed,
        "samples": [
            {"coords": s.coords, "h": s.h, "kinetic_fd": s.kinetic_fd,
             "potential": s.potential, "residual": s.residual,
             "relative_residual": s.relative_residual}
            for s in result.samples
        ],
    }
    _emit(report, args.json)
    if args.csv:
        _write_csv(args.csv, seed, result.samples)
    status = "PASS" if result.passed else "FAIL"
    print(f"verify: {status} (max relative residual {result.max_relative_residual:.3e})",
          file=sys.stderr)
    return 0 if result.passed else 1


def cmd_spectrum(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    model, resolved = build_model(file_cfg, args)
    scfg = _merge_config(file_cfg, "spectrum", {
        "points_per_axis": args.points, "box_half_width": args.box,
        "cap": args.cap, "seed": args.solver_seed, "trials": args.trials,
        "lambda_tol": args.lambda_tol, "overlap_min": args.overlap_min,
        "psd_floor": args.psd_floor,
    })
    grid = GridSpec(
        points_per_axis=int(scfg.get("points_per_axis", 61)),
        box_half_width=None if scfg.get("box_half_width") is None else float(scfg["box_half_width"]),
        cap=float(scfg.get("cap", 1e8)),
    )
    seed = int(scfg.get("seed", 0))
    op = discretize(model, grid)
    if model.n_particles == 2:
        lam, vec = symmetric_eigenpair(op, seed=seed)
    else:
        lam, vec = lowest_eigenpair(op, seed=seed)
    overlap = ground_state_overlap(model, op, vec)
    probe_min = psd_probe(op, int(scfg.get("trials", 100)), seed,
                          orthogonal_to=vec)
    lam_tol = float(scfg.get("lambda_tol", 5e-3))
    overlap_min = float(scfg.get("overlap_min", 0.999))
    psd_floor = float(scfg.get("psd_floor", -1e-3))
    passed = abs(lam) <= lam_tol and overlap >= overlap_min and probe_min >= psd_floor
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "spectrum",
        "config": {
            **resolved,
            "spectrum": {
                "points_per_axis": grid.points_per_axis,
                "box_half_width": op.axis_points[-1] + op.spacing,
                "cap": grid.cap,
                "seed": seed,
                "trials": int(scfg.get("trials", 100)),
            },
        },
        "grid_nodes": int(len(op.nodes)),
        "grid_spacing": op.spacing,
        "capped_nodes": op.capped_nodes,
        "lowest_eigenvalue": lam,
        "ground_state_overlap": overlap,
        "psd_probe_min": probe_min,
        "checks": {"lambda_tol": lam_tol, "overlap_min": overlap_min,
                   "psd_floor": psd_floor},
        "passed": passed,
    }
    _emit(report, args.json)
    status = "PASS" if passed else "FAIL"
    print(f"spectrum: {status} (lambda0 {lam:.3e}, overlap {overlap:.6f})",
          file=sys.stderr)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# argument parsing

def _add_model_flags(p: argparse.ArgumentParser) -> None:
    gg = p.add_argument_group("graph source")
    gg.add_argument("--family", help="graph family name, e.g. complete, wheel, circulant")
    gg.add_argument("--n", type=int, help="vertex-count parameter of the family")
    gg.add_argument("--r", type=int, help="band range for circulant/banded")
    gg.add_argument("--m", type=int, help="first block size for complete_bipartite")
    gg.add_argument("--open", dest="open_band", action="store_const", const=True,
                    default=None, help="open (non-periodic) band layout")
    gg.add_argument("--edge-list", help="read the graph from an edge-list file")
    gg.add_argument("--product", help="graph expression, e.g. cartesian(path(7),path(2))")
    gp = p.add_argument_group("pair function")
    gp.add_argument("--pair", help="built-in kind: power, exponential, gaussian, sinh")
    gp.add_argument("--g", type=float, help="pair strength parameter")
    gp.add_argument("--ell", type=float, help="sinh length scale")
    gp.add_argument("--pair-expr", help="custom pair function expression in x")
    gp.add_argument("--param", action="append", help="name=value binding for --pair-expr")
    gm = p.add_argument_group("model")
    gm.add_argument("--dim", type=int, help="spatial dimension (default 1)")
    gm.add_argument("--hbar", type=float, help="hbar (default 1)")
    gm.add_argument("--mass", type=float, help="particle mass (default 1)")
    gc = p.add_argument_group("confinement")
    gc.add_argument("--omega", type=float, help="harmonic confinement frequency")
    gc.add_argument("--confine-expr", help="custom one-body factor expression in x = |r|")
    gc.add_argument("--confine-param", action="append",
                    help="name=value binding for --confine-expr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphjastrow",
        description="Parent Hamiltonians of graph-structured pair-product wavefunctions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    pg = sub.add_parser("graph", help="build a graph and report its invariants")
    pg.add_argument("--config", help="JSON config file")
    gg = pg.add_argument_group("graph source")
    gg.add_argument("--family")
    gg.add_argument("--n", type=int)
    gg.add_argument("--r", type=int)
    gg.add_argument("--m", type=int)
    gg.add_argument("--open", dest="open_band", action="store_const", const=True, default=None)
    gg.add_argument("--edge-list")
    gg.add_argument("--product")
    pg.add_argument("--dot", help="write DOT format to this file")
    pg.add_argument("--edges-out", help="write edge-list format to this file")
    pg.add_argument("--json", help="write the JSON report here instead of stdout")
    pg.set_defaults(func=cmd_graph)

    pm = sub.add_parser("model", help="assemble a model and show its structure")
    pm.add_argument("--config", help="JSON config file")
    _add_model_flags(pm)
    pm.add_argument("--at", help="evaluate potentials at these coordinates (comma separated)")
    pm.add_argument("--json", help="write the JSON report here instead of stdout")
    pm.set_defaults(func=cmd_model)

    pv = sub.add_parser("verify", help="finite-difference check of the zero-mode property")
    pv.add_argument("--config", help="JSON config file")
    _add_model_flags(pv)
    pv.add_argument("--samples", type=int, help="number of random configurations (default 50)")
    pv.add_argument("--seed", type=int, help="sampling seed (required)")
    pv.add_argument("--fd-step", type=float, help="finite-difference step h (default 1e-3)")
    pv.add_argument("--box", type=float, help="sampling box half width (default 2)")
    pv.add_argument("--min-sep", type=float, help="minimum edge separation (default 0.65)")
    pv.add_argument("--tolerance", type=float, help="relative residual bound (default 1e-5)")
    pv.add_argument("--e0", type=float, help="assert this eigenvalue instead of the derived one")
    pv.add_argument("--json", help="write the JSON report here instead of stdout")
    pv.add_argument("--csv", help="write per-sample residual rows here")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("spectrum", help="grid diagonalization of a small confined model")
    ps.add_argument("--config", help="JSON config file")
    _add_model_flags(ps)
    ps.add_argument("--points", type=int, help="grid points per axis (default 61)")
    ps.add_argument("--box", type=float, help="grid box half width (default from confinement)")
    ps.add_argument("--cap", type=float, help="node potential cap (default 1e8)")
    ps.add_argument("--solver-seed", type=int, help="eigensolver / probe seed (default 0)")
    ps.add_argument("--trials", type=int, help="PSD probe vectors (default 100)")
    ps.add_argument("--lambda-tol", type=float, help="|lowest eigenvalue| bound (default 5e-3)")
    ps.add_argument("--overlap-min", type=float, help="ground-state overlap bound (default 0.999)")
    ps.add_argument("--psd-floor", type=float, help="PSD probe floor (default -1e-3)")
    ps.add_argument("--json", help="write the JSON report here instead of stdout")
    ps.set_defaults(func=cmd_spectrum)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ExprError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
