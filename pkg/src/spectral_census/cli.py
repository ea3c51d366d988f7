"""Command line front end: ``spectral-census run <config.json>`` and ``spectral-census catalog``.

A config is a JSON object.  ``command`` selects the experiment; the other
fields it reads are listed in ``README.md``.  Reports are written to the
output directory as JSON plus CSV tables.  Exit status is 0 on success, 1
for a bad config or an inadmissible input, and 2 when a computed lower
bound exceeds the converged eigenvalue count (which would indicate a bug).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .bounds import BoundReport, convolution_bound_point, convolution_sup_details, theorem_bound
from .dn_gap import DNReport, dn_lower_bound
from .domains import BoxDomain
from .errors import CensusError
from .kernels import CATALOG, HFunction, KernelSpec, kernel_from_descriptor
from .measures import AtomicMeasure, SymmetricAtomicMeasure, chord_measure, shift_measure
from .optimizer import greedy_atoms, grid_pool, reweight_fixed_support
from .oracle import refine_and_count
from .proof_trace import check_configuration, mc_average_check, sample_configuration
from .quadrature import Quadrature, make_quadrature

COMMANDS = ("bound", "verify", "proof-trace", "dn-gap", "optimize", "convolution")
DEFAULT_GRIDS = (64, 128, 256)
DEFAULT_POOL = 32


class ConfigError(CensusError):
    pass


def _get(cfg: dict, name: str, default=..., kind=None):
    if name not in cfg:
        if default is ...:
            raise ConfigError(f"field '{name}': required")
        return default
    value = cfg[name]
    if kind is not None:
        try:
            value = kind(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"field '{name}': {exc}") from None
    return value


def _field(name: str, fn, *args, **kwargs):
    """Call ``fn`` and prefix any failure with the config field it came from."""
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except (CensusError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"field '{name}': {exc}") from None


# ---------------------------------------------------------------------------
# config pieces


def load_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    command = cfg.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"field 'command': expected one of {list(COMMANDS)}, got {command!r}")
    return cfg


def domain_quadrature(domain: dict, n: int) -> Quadrature:
    """Quadrature of resolution ``n`` (per axis, or per angle) on the configured domain."""
    if not isinstance(domain, dict) or "kind" not in domain:
        raise ConfigError("field 'domain': must be an object with a 'kind' field")
    params = {k: v for k, v in domain.items() if k != "kind"}
    kind = domain["kind"]
    if kind == "sphere-latlong":
        params.update(n_azimuth=n, n_polar=n)
    else:
        params["n"] = n
    return _field("domain", make_quadrature, kind, **params)


def default_domain(k: KernelSpec, cfg: dict) -> dict:
    if "domain" in cfg:
        return cfg["domain"]
    if k.sphere_radius is not None:
        kind = "circle-uniform" if k.dim == 2 else "sphere-latlong"
        return {"kind": kind, "radius": k.sphere_radius}
    raise ConfigError("field 'domain': required for this kernel")


def pool_resolution(domain: dict, dim: int, budget: int) -> int:
    """Per-axis resolution giving roughly ``budget`` pool points."""
    if domain.get("kind") in ("gauss-legendre-interval", "circle-uniform"):
        return budget
    if domain.get("kind") == "sphere-latlong":
        return max(2, round(math.sqrt(budget)))
    return max(2, round(budget ** (1.0 / dim)))


def auto_measure(k: KernelSpec, t: float, cfg: dict, trace: list | None = None,
                 include_diagonal: bool | None = None):
    opt = cfg.get("optimize", {})
    domain = default_domain(k, cfg)
    n = pool_resolution(domain, k.dim, int(opt.get("pool_points", DEFAULT_POOL)))
    if include_diagonal is None:
        include_diagonal = bool(opt.get("include_diagonal", True))
    pool = grid_pool(domain_quadrature(domain, n).nodes, include_diagonal)
    mu, _ = _field("measure", greedy_atoms, k, t, pool, int(opt.get("max_atoms", 16)), trace)
    return mu, pool


def parse_measure(spec, k: KernelSpec, t: float, cfg: dict,
                  include_diagonal: bool | None = None) -> SymmetricAtomicMeasure:
    if spec == "auto":
        return auto_measure(k, t, cfg, include_diagonal=include_diagonal)[0]
    if isinstance(spec, list):
        return _field("measure", SymmetricAtomicMeasure.from_records, spec, "records")
    if not isinstance(spec, dict):
        raise ConfigError("field 'measure': expected \"auto\", a list of records or an object")
    if "records" in spec:
        return _field("measure.records", SymmetricAtomicMeasure.from_records, spec["records"],
                      spec.get("label", "records"))
    if "shift" in spec:
        s = spec["shift"]
        base = _field("measure.shift.base", AtomicMeasure, np.asarray(s["base"]["points"], float),
                      np.asarray(s["base"]["weights"], float))
        return _field("measure.shift", shift_measure, base, s["theta"])
    if "chord" in spec:
        c = spec["chord"]
        return _field("measure.chord", chord_measure, float(c["lambda"]), float(c["r"]), int(c["d"]), int(c["n"]))
    raise ConfigError("field 'measure': object needs one of 'records', 'shift' or 'chord'")


def oracle_settings(cfg: dict):
    oracle = cfg.get("oracle", {})
    grids = [int(g) for g in oracle.get("grids", DEFAULT_GRIDS)]
    guard = oracle.get("guard")
    return grids, None if guard is None else float(guard)


# ---------------------------------------------------------------------------
# commands


def cmd_bound(cfg, out: Path, seed: int) -> tuple[int, dict]:
    k = _field("kernel", kernel_from_descriptor, _get(cfg, "kernel"))
    t = _get(cfg, "t", 0.0, float)
    mu = parse_measure(_get(cfg, "measure"), k, t, cfg)
    rep = _field("measure", theorem_bound, k, mu, t)
    serialize.write_csv(out / "bound.csv", BoundReport.CSV_HEADER, [rep.csv_row()])
    return 0, {"kernel": k.descriptor, "bound": rep.to_dict(), "measure": mu.to_records()}


def cmd_verify(cfg, out: Path, seed: int) -> tuple[int, dict]:
    k = _field("kernel", kernel_from_descriptor, _get(cfg, "kernel"))
    t = _get(cfg, "t", 0.0, float)
    mu = parse_measure(_get(cfg, "measure"), k, t, cfg)
    rep = _field("measure", theorem_bound, k, mu, t)
    grids, guard = oracle_settings(cfg)
    domain = default_domain(k, cfg)
    study = _field("oracle", refine_and_count, k, [domain_quadrature(domain, n) for n in grids], t, guard)
    comparable = study.converged and rep.integer_bound is not None
    violated = comparable and rep.integer_bound > study.final_count
    serialize.write_csv(out / "verify.csv", ("grid_size", "count_below_t", "boundary_warning"),
                        [(r.grid_size, r.count_below_t, r.boundary_warning) for r in study.results])
    report = {"kernel": k.descriptor, "bound": rep.to_dict(), "oracle": study.to_dict(),
              "comparable": comparable, "bound_le_count": None if not comparable else not violated,
              "measure": mu.to_records()}
    return (2 if violated else 0), report


def cmd_proof_trace(cfg, out: Path, seed: int) -> tuple[int, dict]:
    k = _field("kernel", kernel_from_descriptor, _get(cfg, "kernel"))
    t = _get(cfg, "t", 0.0, float)
    # configurations need pairs of distinct points, so the auto pool skips (x, x)
    mu = parse_measure(_get(cfg, "measure"), k, t, cfg, include_diagonal=False)
    pt = cfg.get("proof_trace", {})
    n_values = [int(n) for n in pt.get("n_values", [1, 2, 3, 4, 5, 6])]
    per_n = int(pt.get("configs_per_n", 10))
    rng = np.random.default_rng(seed)
    records = []
    for n in n_values:
        for _ in range(per_n):
            config = _field("measure", sample_configuration, k, mu, t, n, rng)
            records.extend(check_configuration(k, config, t))
    mc = _field("proof_trace", mc_average_check, k, mu, t, int(pt.get("mc_n", 2)),
                int(pt.get("samples", 10000)), seed)
    mc_ok = abs(mc.z_score) <= 3.0
    all_pass = all(r["pass"] for r in records)
    serialize.write_csv(out / "proof_trace.csv", ("check", "n", "t", "value", "target", "pass"),
                        [(r["check"], r["n"], r["t"], r["value"], r["target"], r["pass"]) for r in records])
    report = {"kernel": k.descriptor, "checks": records, "all_pass": all_pass,
              "mc_average": {**mc.to_dict(), "within_3_stderr": mc_ok}}
    return (0 if all_pass else 2), report


def cmd_dn_gap(cfg, out: Path, seed: int) -> tuple[int, dict]:
    dn = _get(cfg, "dn_gap")
    box = _field("dn_gap.box", BoxDomain, tuple(_get(dn, "box")))
    lam = _get(dn, "lambda", kind=float)
    n_sphere = int(dn.get("n_sphere", 256))
    n_d = int(dn.get("n_D", 0))
    chord_n = dn.get("chord_n")
    r_values = dn.get("r_values") or [2.0 * lam * j / 9.0 for j in range(1, 9)]
    r_rows = [_field("dn_gap.r_values", dn_lower_bound, box, lam, float(r), n_sphere, n_d, chord_n)
              for r in r_values]
    serialize.write_csv(out / "dn_r_sweep.csv", DNReport.CSV_HEADER, [x.csv_row() for x in r_rows])
    report = {"r_sweep": [x.to_dict() for x in r_rows]}
    if "lambda_values" in dn:
        r = float(dn.get("r", 1.0))
        lam_rows = [_field("dn_gap.lambda_values", dn_lower_bound, box, float(v), r, n_sphere, n_d, chord_n)
                    for v in dn["lambda_values"]]
        serialize.write_csv(out / "dn_lambda_sweep.csv", DNReport.CSV_HEADER, [x.csv_row() for x in lam_rows])
        report["lambda_sweep"] = [x.to_dict() for x in lam_rows]
    return 0, report


def _atom_text(pool, idx) -> str:
    xi, eta = pool[idx]
    return f"{xi.tolist()};{eta.tolist()}"


def cmd_optimize(cfg, out: Path, seed: int) -> tuple[int, dict]:
    k = _field("kernel", kernel_from_descriptor, _get(cfg, "kernel"))
    t = _get(cfg, "t", 0.0, float)
    greedy_trace: list = []
    mu, pool = auto_measure(k, t, cfg, greedy_trace)
    rows = [(step, c, _atom_text(pool, idx)) for step, c, idx in greedy_trace]
    iters = int(cfg.get("optimize", {}).get("iters", 0))
    sweeps: list = []
    mu2 = _field("optimize", reweight_fixed_support, k, t, mu, iters, sweeps)
    step0 = len(rows)
    rows += [(step0 + i, c, "reweight") for i, c in enumerate(sweeps[1:])]
    serialize.write_csv(out / "optimize_trace.csv", ("step", "c_t", "atom_added"), rows)
    rep = theorem_bound(k, mu2, t)
    return 0, {"kernel": k.descriptor, "bound": rep.to_dict(), "greedy_c": greedy_trace[-1][1],
               "measure": mu2.to_records()}


def cmd_convolution(cfg, out: Path, seed: int) -> tuple[int, dict]:
    conv = _get(cfg, "convolution")
    h = _field("convolution.h", HFunction.from_dict, _get(conv, "h"))
    t = _get(cfg, "t", 0.0, float)
    sup = _field("convolution", convolution_sup_details, h, t, conv.get("search_radius"),
                 conv.get("tail_radius"), conv.get("grid_n"))
    report = {"h": h.to_dict(), "t": t, "sup_bound": sup.to_dict()}
    if "theta" in conv:
        base = conv.get("base", {"points": [[0.0] * h.dim], "weights": [1.0]})
        mu0 = _field("convolution.base", AtomicMeasure, np.asarray(base["points"], float),
                     np.asarray(base["weights"], float))
        report["point_bound"] = _field("convolution.theta", convolution_bound_point, h, conv["theta"], t, mu0)
    serialize.write_csv(out / "convolution.csv", ("bound", "sup_h", "h0", "tail_sup", "point_bound"),
                        [(sup.bound, sup.sup_h, sup.h0, sup.tail_sup, report.get("point_bound"))])
    return 0, report


HANDLERS = {
    "bound": cmd_bound,
    "verify": cmd_verify,
    "proof-trace": cmd_proof_trace,
    "dn-gap": cmd_dn_gap,
    "optimize": cmd_optimize,
    "convolution": cmd_convolution,
}


def run(config_path, output: str | None = None, seed: int | None = None) -> int:
    """Execute one config; returns the process exit status."""
    try:
        cfg = load_config(config_path)
        seed = int(cfg.get("seed", 0)) if seed is None else int(seed)
        out = Path(output if output is not None else cfg.get("output", "out"))
        code, report = HANDLERS[cfg["command"]](cfg, out, seed)
    except CensusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed config: {exc!r}", file=sys.stderr)
        return 1
    report = {"command": cfg["command"], "seed": seed, **report}
    path = serialize.write_json(out / "report.json", report)
    print(f"wrote {path}")
    if code == 2:
        print("error: a lower bound exceeded the converged count", file=sys.stderr)
    return code


def print_catalog() -> int:
    width = max(len(name) for name in CATALOG)
    for name, text in CATALOG.items():
        print(f"{name:<{width}}  {text}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="spectral-census",
                                     description="Lower bounds for negative eigenvalue counts of integral operators")
    sub = parser.add_subparsers(dest="action", required=True)
    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config", help="path to a JSON config")
    p_run.add_argument("--output", help="output directory (overrides the config)")
    p_run.add_argument("--seed", type=int, help="random seed (overrides the config)")
    sub.add_parser("catalog", help="list built-in kernels")
    args = parser.parse_args(argv)
    if args.action == "catalog":
        return print_catalog()
    return run(args.config, args.output, args.seed)


if __name__ == "__main__":
    sys.exit(main())
