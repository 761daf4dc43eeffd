"""Scenario-driven command line: ``risnull {solve,pattern,analyze,table}``.

A scenario is a YAML file; see ``scenarios/`` for examples.  Exit codes:
0 success, 2 configuration error, 3 missing weights file, 4 singular system.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__, analysis, evaluation, solvers
from .fields import DegenerateSystemError, FarFieldTarget, FieldScale, assemble_system, e_vector
from .geometry import SPEED_OF_LIGHT, ConfigurationError, DishGeometry, build_rim_layout

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_SINGULAR = 4

METHODS = ("pinv", "gp", "ap", "pair", "expp", "sa")


class ConfigError(ValueError):
    def __init__(self, message, line=None, path=None):
        self.message = message
        self.line = line
        self.path = path
        where = f"{path or '<scenario>'}:{line}: " if line is not None else f"{path or '<scenario>'}: "
        super().__init__(where + message)


class MissingInputError(FileNotFoundError):
    pass


# ----------------------------------------------------------------------------
# YAML with line numbers


class _Map(dict):
    lines: dict = {}
    line: int | None = None


class _Seq(list):
    lines: list = []
    line: int | None = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    loader.flatten_mapping(node)
    out = _Map()
    out.lines = {}
    out.line = node.start_mark.line + 1
    for k_node, v_node in node.value:
        key = loader.construct_object(k_node, deep=True)
        if key in out:
            raise ConfigError(f"duplicate key {key!r}", k_node.start_mark.line + 1)
        out[key] = loader.construct_object(v_node, deep=True)
        out.lines[key] = k_node.start_mark.line + 1
    return out


def _construct_seq(loader, node):
    out = _Seq(loader.construct_object(v, deep=True) for v in node.value)
    out.lines = [v.start_mark.line + 1 for v in node.value]
    out.line = node.start_mark.line + 1
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)
# accept 1e-10 / 1.5e9 as floats (YAML 1.1 needs a dot)
_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:[0-9][0-9_]*)(?:\.[0-9_]*)?[eE][-+]?[0-9]+$"),
    list("-+0123456789"),
)


def _line(container, key):
    if isinstance(container, _Map):
        return container.lines.get(key, container.line)
    if isinstance(container, _Seq):
        return container.lines[key] if isinstance(key, int) and key < len(container.lines) else container.line
    return None


# ----------------------------------------------------------------------------
# Scenario schema


@dataclass
class SolverSpec:
    method: str
    options: dict = field(default_factory=dict)


@dataclass
class Scenario:
    path: Path
    digest: str
    geometry: DishGeometry
    design_freq_hz: float
    targets: list
    mainlobe_delta: float | None
    solvers: list
    evaluation: dict
    table: dict
    output_dir: Path
    seed: int | None
    field_scale: FieldScale = field(default_factory=FieldScale)

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.design_freq_hz

    def metadata(self):
        return {
            "config_hash": self.digest,
            "f_over_d": round(self.geometry.f_over_d, 12),
            "focal_length_m": self.geometry.focal_length,
            "diameter_m": self.geometry.diameter,
            "field_scale": self.field_scale.describe(),
            "version": __version__,
        }


def _number(section, key, path, lo=None, hi=None, lo_open=False, hi_open=False, integer=False,
            required=True, default=None):
    if key not in section:
        if required:
            raise ConfigError(f"missing required field '{key}'", _line(section, key), path)
        return default
    val = section[key]
    ln = _line(section, key)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"field '{key}' must be a number, got {val!r}", ln, path)
    if integer and not float(val).is_integer():
        raise ConfigError(f"field '{key}' must be an integer, got {val!r}", ln, path)
    val = int(val) if integer else float(val)
    if not math.isfinite(val):
        raise ConfigError(f"field '{key}' must be finite", ln, path)
    if lo is not None and (val < lo or (lo_open and val == lo)):
        raise ConfigError(f"field '{key}'={val} out of range (must be {'>' if lo_open else '>='} {lo})", ln, path)
    if hi is not None and (val > hi or (hi_open and val == hi)):
        raise ConfigError(f"field '{key}'={val} out of range (must be {'<' if hi_open else '<='} {hi})", ln, path)
    return val


def _section(parent, key, path, kind=_Map, required=False):
    if key not in parent:
        if required:
            raise ConfigError(f"missing required section '{key}'", _line(parent, key), path)
        return kind()
    val = parent[key]
    if val is None:
        return kind()
    if not isinstance(val, kind):
        expect = "mapping" if kind is _Map else "list"
        raise ConfigError(f"section '{key}' must be a {expect}", _line(parent, key), path)
    return val


def _reject_unknown(section, allowed, path, where):
    for k in section:
        if k not in allowed:
            raise ConfigError(f"unknown key '{k}' in {where}", _line(section, k), path)


_TOP_KEYS = {"seed", "output_dir", "geometry", "targets", "mainlobe_delta", "solvers",
             "evaluation", "table", "field_scale"}
_GEOM_KEYS = {"diameter_m", "focal_length_m", "rim_width_m", "feed_q", "design_freq_hz"}
_TARGET_KEYS = {"psi_deg", "phi_deg", "freq_hz"}
_SOLVER_KEYS = {
    "pinv": set(),
    "pair": set(),
    "gp": {"tol", "max_iter"},
    "ap": {"tol", "max_iter"},
    "expp": {"tol", "max_iter", "psk_levels", "c_factor", "beta_factor", "ramp_iters",
             "knee_factor", "tail_iters"},
    "sa": {"psk_levels", "seed", "n_steps", "t0", "cooling", "n_clusters"},
}
_EVAL_KEYS = {"phi_deg", "psi_min_deg", "psi_max_deg", "step_deg", "freq_hz", "methods"}
_TABLE_KEYS = {"angle_sets", "phi_deg", "freq_hz", "methods"}


def _target(tlist, idx, path, default_freq):
    item = tlist[idx]
    if not isinstance(item, _Map):
        raise ConfigError(f"targets[{idx}] must be a mapping", _line(tlist, idx), path)
    _reject_unknown(item, _TARGET_KEYS, path, f"targets[{idx}]")
    psi = _number(item, "psi_deg", path, 0.0, 90.0, hi_open=True)
    phi = _number(item, "phi_deg", path, required=False, default=0.0)
    freq = _number(item, "freq_hz", path, 0.0, lo_open=True, required=False, default=default_freq)
    return FarFieldTarget.from_degrees(psi, phi, freq)


def _solver(slist, idx, path, seed):
    item = slist[idx]
    if not isinstance(item, _Map):
        raise ConfigError(f"solvers[{idx}] must be a mapping", _line(slist, idx), path)
    if "method" not in item:
        raise ConfigError(f"solvers[{idx}] needs a 'method'", item.line, path)
    method = item["method"]
    if method not in METHODS:
        raise ConfigError(f"solvers[{idx}].method must be one of {', '.join(METHODS)}; got {method!r}",
                          _line(item, "method"), path)
    allowed = _SOLVER_KEYS[method]
    _reject_unknown(item, allowed | {"method"}, path, f"solvers[{idx}] ({method})")
    opts = {}
    ints = {"max_iter", "psk_levels", "ramp_iters", "tail_iters", "seed", "n_steps", "n_clusters"}
    for key in allowed:
        if key in item:
            lo = 2 if key == "psk_levels" else 0
            opts[key] = _number(item, key, path, lo, integer=key in ints)
    if method in ("gp", "ap", "expp") and "tol" in opts and opts["tol"] <= 0:
        raise ConfigError("field 'tol' must be positive", _line(item, "tol"), path)
    if method == "sa":
        if "seed" not in opts:
            if seed is None:
                raise ConfigError("method 'sa' requires a 'seed' (solver block or top level)",
                                  _line(item, "method"), path)
            opts["seed"] = seed
        if "cooling" in opts and not 0 < opts["cooling"] <= 1:
            raise ConfigError("field 'cooling' must lie in (0, 1]", _line(item, "cooling"), path)
    return SolverSpec(method, opts)


def load_scenario(path, out_dir=None) -> Scenario:
    """Parse and validate a scenario file; raises ``ConfigError``."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc.strerror}", None, str(path)) from None
    try:
        doc = yaml.load(raw.decode("utf-8"), Loader=_Loader)
    except ConfigError as exc:
        raise ConfigError(exc.message, exc.line, str(path)) from None
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"YAML syntax error: {getattr(exc, 'problem', exc)}",
                          mark.line + 1 if mark else None, str(path)) from None
    p = str(path)
    if not isinstance(doc, _Map):
        raise ConfigError("scenario must be a mapping", 1, p)
    _reject_unknown(doc, _TOP_KEYS, p, "scenario")

    seed = _number(doc, "seed", p, 0, integer=True, required=False)

    g = _section(doc, "geometry", p, required=True)
    _reject_unknown(g, _GEOM_KEYS, p, "geometry")
    diameter = _number(g, "diameter_m", p, 0.0, lo_open=True)
    rim = _number(g, "rim_width_m", p, 0.0, diameter / 2, lo_open=True, hi_open=True)
    focal = _number(g, "focal_length_m", p, 0.0, lo_open=True, required=False)
    q = _number(g, "feed_q", p, 0.0, lo_open=True, required=False, default=1.5)
    design = _number(g, "design_freq_hz", p, 0.0, lo_open=True)
    try:
        geom = DishGeometry.from_rim(diameter, rim, focal, q)
    except ConfigurationError as exc:
        raise ConfigError(str(exc), g.line, p) from None

    tlist = _section(doc, "targets", p, _Seq)
    targets = [_target(tlist, i, p, design) for i in range(len(tlist))]
    delta = _number(doc, "mainlobe_delta", p, required=False)

    scale = FieldScale()
    if "field_scale" in doc:
        fs = _section(doc, "field_scale", p)
        _reject_unknown(fs, {"re", "im"}, p, "field_scale")
        extra = complex(_number(fs, "re", p, required=False, default=1.0),
                        _number(fs, "im", p, required=False, default=0.0))
        if extra == 0:
            raise ConfigError("field_scale must be nonzero", fs.line, p)
        scale = FieldScale(extra)

    slist = _section(doc, "solvers", p, _Seq)
    specs = [_solver(slist, i, p, seed) for i in range(len(slist))]
    seen = set()
    for i, s in enumerate(specs):
        if s.method in seen:
            raise ConfigError(f"method '{s.method}' listed twice", slist.lines[i], p)
        seen.add(s.method)

    ev = _section(doc, "evaluation", p)
    _reject_unknown(ev, _EVAL_KEYS, p, "evaluation")
    evaluation_cfg = {
        "phi_deg": _number(ev, "phi_deg", p, required=False, default=0.0),
        "psi_min_deg": _number(ev, "psi_min_deg", p, 0.0, 90.0, hi_open=True, required=False, default=0.0),
        "psi_max_deg": _number(ev, "psi_max_deg", p, 0.0, 90.0, hi_open=True, required=False, default=5.0),
        "step_deg": _number(ev, "step_deg", p, 0.0, lo_open=True, required=False, default=0.005),
        "freq_hz": _number(ev, "freq_hz", p, 0.0, lo_open=True, required=False, default=design),
        "methods": _method_list(ev, p, allow_reference=True),
    }
    if evaluation_cfg["psi_max_deg"] <= evaluation_cfg["psi_min_deg"]:
        raise ConfigError("psi_max_deg must exceed psi_min_deg", _line(ev, "psi_max_deg"), p)

    tb = _section(doc, "table", p)
    _reject_unknown(tb, _TABLE_KEYS, p, "table")
    sets = _section(tb, "angle_sets", p, _Seq)
    angle_sets = []
    for i, row in enumerate(sets):
        if not isinstance(row, _Seq) or not row:
            raise ConfigError(f"table.angle_sets[{i}] must be a non-empty list of psi_deg values",
                              _line(sets, i), p)
        vals = []
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0 <= v < 90:
                raise ConfigError(f"table.angle_sets[{i}][{j}] psi_deg must be in [0, 90)", _line(row, j), p)
            vals.append(float(v))
        angle_sets.append(vals)
    table_methods = _method_list(tb, p, allow_reference=False) or ["pinv", "gp", "pair", "expp", "sa"]
    if angle_sets and "sa" in table_methods and seed is None and "sa" not in seen:
        raise ConfigError("table method 'sa' requires a top-level 'seed'", _line(tb, "methods"), p)
    table_cfg = {
        "angle_sets": angle_sets,
        "phi_deg": _number(tb, "phi_deg", p, required=False, default=0.0),
        "freq_hz": _number(tb, "freq_hz", p, 0.0, lo_open=True, required=False, default=design),
        "methods": table_methods,
    }

    out = Path(out_dir) if out_dir is not None else Path(doc.get("output_dir", "out"))
    if not isinstance(doc.get("output_dir", ""), str):
        raise ConfigError("output_dir must be a string", _line(doc, "output_dir"), p)
    digest = hashlib.sha256(raw).hexdigest()
    return Scenario(path, digest, geom, design, targets, delta, specs, evaluation_cfg, table_cfg,
                    out, seed, scale)


def _method_list(section, path, allow_reference):
    if "methods" not in section:
        return []
    vals = section["methods"]
    if not isinstance(vals, _Seq):
        raise ConfigError("'methods' must be a list", _line(section, "methods"), path)
    ok = set(METHODS) | ({"reference"} if allow_reference else set())
    for j, m in enumerate(vals):
        if m not in ok:
            raise ConfigError(f"unknown method {m!r} in 'methods'", _line(vals, j), path)
    return list(vals)


# ----------------------------------------------------------------------------
# Output helpers


def _json_dump(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _complex_pairs(w):
    return [[float(z.real), float(z.imag)] for z in np.asarray(w)]


def _meta_lines(meta):
    return [f"{k}: {v}" for k, v in meta.items()]


def _setup(sc: Scenario):
    layout = build_rim_layout(sc.geometry, sc.wavelength)
    return layout


def _system(sc: Scenario, layout, targets=None):
    targets = sc.targets if targets is None else targets
    if not targets:
        raise ConfigError("no targets given", None, str(sc.path))
    return assemble_system(targets, sc.mainlobe_delta, layout, sc.geometry, sc.field_scale)


def run_solver(spec: SolverSpec, system, w_star=None) -> solvers.WeightSolution:
    o = dict(spec.options)
    if spec.method == "pinv":
        return solvers.solve_pseudoinverse(system)
    if spec.method == "gp":
        return solvers.solve_gp(system, **o)
    if spec.method == "ap":
        return solvers.solve_ap(system, **o)
    if spec.method == "pair":
        if w_star is None:
            w_star = solvers.solve_pseudoinverse(system).w
        return solvers.pair_merge_closed_form(system, w_star)
    if spec.method == "expp":
        sched_keys = {"c_factor", "beta_factor", "ramp_iters", "knee_factor", "tail_iters"}
        sched = {k: o.pop(k) for k in list(o) if k in sched_keys}
        M = o.pop("psk_levels", 4)
        schedule = solvers.PenaltySchedule.default(system, **sched)
        return solvers.solve_expp(system, M, schedule, **o)
    if spec.method == "sa":
        M = o.pop("psk_levels", 4)
        return solvers.solve_sa_baseline(system, M, **o)
    raise ValueError(spec.method)


def _trace_csv(sol, meta):
    buf = io.StringIO()
    for line in _meta_lines(meta):
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iter", "objective", "c"])
    cs = sol.c_trace
    for k, f in enumerate(sol.objective):
        c = float(cs[k]) if cs is not None else 0.0
        writer.writerow([k, repr(float(f)), repr(c)])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.ndarray):
        return None
    return v


# ----------------------------------------------------------------------------
# Commands


def cmd_solve(sc: Scenario):
    layout = _setup(sc)
    system = _system(sc, layout)
    sc.output_dir.mkdir(parents=True, exist_ok=True)
    meta = sc.metadata()
    w_star = None
    written = []
    for spec in sc.solvers:
        sol = run_solver(spec, system, w_star)
        if spec.method == "pinv":
            w_star = sol.w
        info = {k: _json_safe(v) for k, v in sol.info.items() if not isinstance(v, np.ndarray)}
        weights = {
            "metadata": meta,
            "method": sol.method,
            "constraint": sol.constraint,
            "levels": sol.levels,
            "converged": bool(sol.converged),
            "iterations": int(sol.iterations),
            "final_objective": float(sol.final_objective),
            "options": spec.options,
            "info": info,
            "weights": _complex_pairs(sol.w),
        }
        f1 = sc.output_dir / f"weights_{spec.method}.json"
        _json_dump(weights, f1)
        f2 = sc.output_dir / f"trace_{spec.method}.csv"
        f2.write_text(_trace_csv(sol, meta))
        rep = evaluation.null_report(system, sol.w).to_dict()
        rep = {"metadata": meta, "method": spec.method, "converged": bool(sol.converged), **rep}
        f3 = sc.output_dir / f"null_report_{spec.method}.json"
        _json_dump(rep, f3)
        written += [f1, f2, f3]
    return written


def _load_weights(path: Path, n):
    if not path.exists():
        raise MissingInputError(f"weights file not found: {path} (run 'solve' first)")
    data = json.loads(path.read_text())
    w = np.array([complex(re, im) for re, im in data["weights"]])
    if w.size != n:
        raise ConfigError(f"{path.name} has {w.size} weights but the layout has {n} elements")
    return w


def cmd_pattern(sc: Scenario):
    layout = _setup(sc)
    ev = sc.evaluation
    methods = ev["methods"] or ["reference"] + [s.method for s in sc.solvers]
    weights = {}
    for m in methods:
        if m == "reference":
            continue
        weights[m] = _load_weights(sc.output_dir / f"weights_{m}.json", layout.n_elements)
    beta = 2 * math.pi * ev["freq_hz"] / SPEED_OF_LIGHT
    cut = evaluation.pattern_cut(sc.geometry, layout, weights, math.radians(ev["phi_deg"]),
                                 (math.radians(ev["psi_min_deg"]), math.radians(ev["psi_max_deg"])),
                                 math.radians(ev["step_deg"]), beta, sc.field_scale)
    sc.output_dir.mkdir(parents=True, exist_ok=True)
    name = f"pattern_phi{ev['phi_deg']:g}.csv"
    out = sc.output_dir / name
    out.write_text(cut.to_csv(_meta_lines(sc.metadata())))
    return [out]


def cmd_analyze(sc: Scenario):
    layout = _setup(sc)
    targets = sc.targets
    if not targets:
        raise ConfigError("analyze needs at least one target", None, str(sc.path))
    f = sc.geometry.focal_length
    evs = [e_vector(t, layout, sc.geometry, sc.field_scale) for t in targets]
    pairs = []
    for i in range(len(targets)):
        for j in range(i + 1, len(targets)):
            rep = analysis.correlation_report(targets[i], targets[j], evs[i], evs[j], layout, f)
            d = rep.to_dict()
            d = {"i": i, "j": j, **{k: d[k] for k in
                 ("empirical_re", "empirical_im", "analytic_re", "analytic_im", "abs_error")}}
            pairs.append(d)
    keys = [t.key() for t in targets]
    feas = None
    bounds = None
    if len(set(keys)) == len(keys):
        system = _system(sc, layout)
        w_star = solvers.solve_pseudoinverse(system).w
        feas = analysis.feasibility_predict(w_star, layout.n_elements).to_dict()
        feas["cond_A"] = system.cond()
        eb = analysis.eigenvalue_bounds(system)
        bounds = {"eigenvalues": [float(v) for v in eb.eigenvalues],
                 "offdiag_frobenius": eb.offdiag_frobenius, "holds": eb.holds,
                 "holds_unsquared": eb.holds_unsquared, "skipped": eb.skipped,
                 "reason": eb.reason}
    sc.output_dir.mkdir(parents=True, exist_ok=True)
    meta = sc.metadata()
    meta["rho_bar_m"] = layout.mean_radius
    o1 = sc.output_dir / "correlation.json"
    _json_dump({"metadata": meta, "pairs": pairs}, o1)
    o2 = sc.output_dir / "feasibility.json"
    _json_dump({"metadata": meta, "n_elements": layout.n_elements, "feasibility": feas,
                "eigenvalue_bounds": bounds}, o2)
    return [o1, o2]


def table_rows(sc: Scenario, layout=None):
    """One dict per angle set: cond(A), ||w*||_inf, eps(N), verdict, suppression."""
    layout = layout or _setup(sc)
    tb = sc.table
    specs = {s.method: s for s in sc.solvers}
    rows = []
    for angles in tb["angle_sets"]:
        targets = [FarFieldTarget.from_degrees(a, tb["phi_deg"], tb["freq_hz"]) for a in angles]
        system = _system(sc, layout, targets)
        pinv = solvers.solve_pseudoinverse(system)
        verdict = analysis.feasibility_predict(pinv.w, layout.n_elements)
        row = {"angles_deg": " ".join(f"{a:g}" for a in angles), "cond_A": system.cond(),
               "w_star_inf": verdict.inf_norm, "epsilon": verdict.epsilon_threshold,
               "feasible": verdict.predicted_feasible}
        for m in tb["methods"]:
            spec = specs.get(m) or SolverSpec(m, {"seed": sc.seed} if m == "sa" else {})
            sol = pinv if m == "pinv" else run_solver(spec, system, pinv.w)
            rep = evaluation.null_report(system, sol.w)
            row[f"{m}_suppression_db"] = rep.average_suppression_db
            row[f"{m}_relative_residual"] = rep.relative_residual
        rows.append(row)
    return rows


def cmd_table(sc: Scenario):
    if not sc.table["angle_sets"]:
        raise ConfigError("table needs 'angle_sets'", None, str(sc.path))
    rows = table_rows(sc)
    buf = io.StringIO()
    for line in _meta_lines(sc.metadata()):
        buf.write(f"# {line}\n")
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in r.items()})
    sc.output_dir.mkdir(parents=True, exist_ok=True)
    out = sc.output_dir / "table.csv"
    out.write_text(buf.getvalue())
    return [out]


COMMANDS = {"solve": cmd_solve, "pattern": cmd_pattern, "analyze": cmd_analyze, "table": cmd_table}


def build_parser():
    ap = argparse.ArgumentParser(prog="risnull", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--scenario", required=True, help="scenario YAML file")
        sp.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario, args.out)
        written = COMMANDS[args.command](sc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateSystemError as exc:
        print(f"config error: {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except solvers.SingularSystemError as exc:
        print(f"numerical error: {exc} (smallest eigenvalue {exc.smallest_eigenvalue:.3e})",
              file=sys.stderr)
        return EXIT_SINGULAR
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
