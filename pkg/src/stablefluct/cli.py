"""Command line front-end: ``stablefluct eval|simulate|verify|tabulate``.

Exit codes: 0 on success, 1 when ``verify`` finds a failing check, 2 on any
configuration or validation error (a JSON error object goes to stderr).
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import re
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import fluct_ball as fb
from . import fluct_interval as fi
from . import lamperti_map as lm
from . import stable_core as sc
from .errors import StableFluctError

__all__ = ["Identity", "REGISTRY", "CliError", "fmt_number", "to_json", "parse_grid",
           "evaluate", "main"]

REAL, INT, VECTOR, COMPLEX, TEXT = "real", "int", "vector", "complex", "text"


class CliError(Exception):
    """Configuration or validation failure; reported with exit code 2."""


@dataclass(frozen=True)
class Identity:
    name: str
    fn: Callable[..., Any]
    inputs: Tuple[Tuple[str, str], ...] = ()
    defaults: Tuple[Tuple[str, Any], ...] = ()


# ------------------------------------------------------------------ wrappers

def _entries(m: lm.MatrixExponent) -> List[float]:
    return _flatten(m.entries)


def _leading_eig(p, kind, theta):
    e = lm.leading_eig(lm.map_exponent(kind, p, -1j * theta))
    return [e.chi, *e.v]


def _esscher(p, kind, gamma, z):
    return _entries(lm.esscher(lambda w: lm.map_exponent(kind, p, w), gamma, z))


def _time_change(p, t, drift, n, direction):
    # linear log-radius path xi(s) = drift * s on [0, t]; returns the end of the new clock
    s = np.linspace(0.0, t, int(n))
    out = lm.lamperti_time_change(lm.PathSample(s, drift * s), p.alpha, direction)
    return float(out.times[-1])


def _surface_grid(p, n, k):
    g = fb.surface_grid(p.dim, None if n == 0 else int(n))
    return float(g.weights @ g.nodes[:, 0] ** int(k))


def _surface_quadrature(p, singular_at, singular_power):
    pole = singular_at if singular_at and singular_power != 0.0 else None
    return fb.surface_quadrature(p.dim, lambda z: np.ones(len(z)), singular_at=pole,
                                 singular_power=singular_power)


def _ball_volume_integral(p, x, region):
    # mass of the exit (x inside) or entrance (x outside) distribution on the region
    half = p.alpha / 2.0

    inside = float(np.dot(x, x)) < 1.0
    step = 1e-9 if inside else -1e-9

    def f(ys: np.ndarray) -> np.ndarray:
        # the rule samples the sphere itself, where only the smooth part has a value;
        # nudge those nodes radially onto the integration side
        gap = np.abs(1.0 - np.einsum("ij,ij->i", ys, ys))
        on = gap < 1e-12
        ys = ys.copy()
        ys[on] *= 1.0 + step
        gap[on] = np.abs(1.0 - np.einsum("ij,ij->i", ys[on], ys[on]))
        return fb.ball_passage_density(p, x, ys) * gap ** half

    return fb.ball_volume_integral(p.dim, f, region, boundary_power=-half)


def _invert_sphere(p, x, center, radius, variant):
    return fb.invert_sphere(x, fb.SphereSpec(center, radius), variant)


def _ladder(p, side, x):
    q = sc.ladder_quantities(p, side, x)
    return [q.potential_density, q.jump_density]


def _triple(p, x, u, v, y):
    return fi.triple_law_density(p, fi.TripleLawPoint(x, u, v, y))


def _build_registry() -> Dict[str, Identity]:
    R, V, C, T, I = REAL, VECTOR, COMPLEX, TEXT, INT
    table = [
        # stable_core
        ("char_exponent", lambda p, theta: sc.char_exponent(p, theta), [("theta", V)]),
        ("levy_density", lambda p, x: sc.levy_density(p, x), [("x", V)]),
        ("transition_density", lambda p, t, x: sc.transition_density(p, t, x), [("t", R), ("x", R)]),
        ("free_potential_density", lambda p, x, y: sc.free_potential_density(p, x, y),
         [("x", V), ("y", V)]),
        ("free_potential_constant", lambda p: sc.free_potential_constant(p), []),
        ("overshoot_density", lambda p, a, u: sc.overshoot_density(p, a, u), [("a", R), ("u", R)]),
        ("overshoot_cdf", lambda p, a, u: sc.overshoot_cdf(p, a, u), [("a", R), ("u", R)]),
        ("ladder_quantities", _ladder, [("side", T), ("x", R)]),
        # lamperti_map
        ("exponent_strip", lambda p, kind: lm.exponent_strip(kind, p), [("kind", T)]),
        ("levy_exponent", lambda p, kind, z: lm.levy_exponent(kind, p, z), [("kind", T), ("z", C)]),
        ("levy_exponent_factors", lambda p, kind, z: lm.levy_exponent_factors(kind, p, z),
         [("kind", T), ("z", C)]),
        ("lamperti_stable_jump_density", lambda p, x: lm.lamperti_stable_jump_density(p, x), [("x", R)]),
        ("map_exponent", lambda p, kind, z: _entries(lm.map_exponent(kind, p, z)),
         [("kind", T), ("z", C)]),
        ("map_strip", lambda p, kind: lm.map_strip(kind, p), [("kind", T)]),
        ("leading_eig", _leading_eig, [("kind", T), ("theta", R)]),
        ("esscher", _esscher, [("kind", T), ("gamma", R), ("z", C)]),
        ("map_jump_kernel", lambda p, theta_from, y, phi_to: lm.map_jump_kernel(p, theta_from, y, phi_to),
         [("theta_from", V), ("y", R), ("phi_to", V)]),
        ("map_jump_constant", lambda p: lm.map_jump_constant(p), []),
        ("lamperti_time_change", _time_change,
         [("t", R), ("drift", R), ("n", I), ("direction", T)]),
        ("h_transform_weight", lambda p, x: lm.h_transform_weight(p, x), [("x", V)]),
        # fluct_interval
        ("exit_up_prob", lambda p, x: fi.exit_up_prob(p, x), [("x", R)]),
        ("triple_law_density", _triple, [("x", R), ("u", R), ("v", R), ("y", R)]),
        ("resolvent_interval", lambda p, x, y: fi.resolvent_interval(p, x, y), [("x", R), ("y", R)]),
        ("resolvent_interval_diagonal", lambda p, y: fi.resolvent_interval_diagonal(p, y), [("y", R)]),
        ("hit_point_before_exit", lambda p, x, y: fi.hit_point_before_exit(p, x, y), [("x", R), ("y", R)]),
        ("entrance_density", lambda p, x, y: fi.entrance_density(p, x, y), [("x", R), ("y", R)]),
        ("avoid_interval_prob", lambda p, x: fi.avoid_interval_prob(p, x), [("x", R)]),
        ("resolvent_exterior", lambda p, x, y: fi.resolvent_exterior(p, x, y), [("x", R), ("y", R)]),
        ("censored_potential_density", lambda p, x: fi.censored_potential_density(p, x), [("x", R)]),
        ("two_point_hit_prob", lambda p, x: fi.two_point_hit_prob(p, x), [("x", R)]),
        ("hit_before_prob", lambda p, x, target, avoid: fi.hit_before_prob(p, x, target, avoid),
         [("x", R), ("target", R), ("avoid", R)]),
        ("resolvent_origin_killed", lambda p, x, y: fi.resolvent_origin_killed(p, x, y),
         [("x", R), ("y", R)]),
        ("branch_integral", lambda p, a, b, r: fi.branch_integral(a, b, r), [("a", R), ("b", R), ("r", R)]),
        # fluct_ball
        ("sphere_area", lambda p: fb.sphere_area(p.dim), []),
        ("surface_grid", _surface_grid, [("n", I), ("k", I)]),
        ("invert_sphere", _invert_sphere, [("x", V), ("center", V), ("radius", R), ("variant", T)]),
        ("sphere_hit_prob", lambda p, x: fb.sphere_hit_prob(p, x), [("x", V)]),
        ("sphere_hit_density", lambda p, x, y: fb.sphere_hit_density(p, x, y), [("x", V), ("y", V)]),
        ("riesz_sphere_constant", lambda p: fb.riesz_sphere_constant(p), []),
        ("sphere_resolvent_density", lambda p, x, y: fb.sphere_resolvent_density(p, x, y),
         [("x", V), ("y", V)]),
        ("ball_passage_density", lambda p, x, y: fb.ball_passage_density(p, x, y), [("x", V), ("y", V)]),
        ("never_enter_ball_prob", lambda p, x: fb.never_enter_ball_prob(p, x), [("x", V)]),
        ("ball_resolvent_density", lambda p, x, y, region: fb.ball_resolvent_density(p, x, y, region),
         [("x", V), ("y", V), ("region", T)]),
        ("surface_quadrature", _surface_quadrature, [("singular_at", V), ("singular_power", R)]),
        ("ball_volume_integral", _ball_volume_integral, [("x", V), ("region", T)]),
    ]
    defaults = {
        "lamperti_time_change": (("n", 1001), ("direction", "forward")),
        "surface_grid": (("n", 0), ("k", 0)),
        "invert_sphere": (("variant", "star"),),
        "ball_resolvent_density": (("region", "interior"),),
        "surface_quadrature": (("singular_at", ""), ("singular_power", 0.0)),
        "leading_eig": (("kind", "stable"),),
        "map_exponent": (("kind", "stable"),),
        "map_strip": (("kind", "stable"),),
        "esscher": (("kind", "stable"),),
    }
    return {name: Identity(name, fn, tuple(inp), defaults.get(name, ()))
            for name, fn, inp in table}


REGISTRY: Dict[str, Identity] = _build_registry()
INPUT_NAMES = sorted({n for ident in REGISTRY.values() for n, _ in ident.inputs})


# ------------------------------------------------------------------ rendering

def fmt_number(v: float) -> str:
    """Decimal rendering with 17 significant digits; non-finite values become ``null``."""
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def _flatten(obj: Any) -> List[float]:
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [x for item in obj.ravel().tolist() for x in _flatten(item)]
    if isinstance(obj, (tuple, list)):
        return [x for item in obj for x in _flatten(item)]
    return [float(obj)]


def _value(obj: Any) -> Any:
    if isinstance(obj, (float, int, np.floating, np.integer)) and not isinstance(obj, bool):
        return float(obj)
    return {"values": _flatten(obj)}


def to_json(obj: Any, indent: int = 0) -> str:
    """JSON text with every float written by :func:`fmt_number`."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(x, (int, float, np.number)) and not isinstance(x, bool) for x in seq):
            return "[" + ", ".join(to_json(x) for x in seq) + "]"
        return "[\n" + ",\n".join(inner + to_json(x, indent + 1) for x in seq) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _write(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


# ------------------------------------------------------------------ parsing

def _parse_input(name: str, kind: str, raw: Any) -> Any:
    try:
        if kind == TEXT:
            return str(raw)
        if kind == INT:
            return int(raw)
        if kind == REAL:
            return float(raw)
        if kind == COMPLEX:
            return complex(str(raw).replace(" ", "")) if isinstance(raw, str) else complex(raw)
        if isinstance(raw, str):
            return [float(t) for t in raw.split(",") if t.strip()]
        if isinstance(raw, (int, float)):
            return [float(raw)]
        return [float(t) for t in raw]
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid value for {name}: {raw!r}") from exc


def _params(cfg: Mapping[str, Any]) -> sc.StableParams:
    if cfg.get("alpha") is None:
        raise CliError("missing --alpha")
    rho, dim = cfg.get("rho"), cfg.get("dim")
    return sc.validate_params(float(cfg["alpha"]), 0.5 if rho is None else float(rho),
                              1 if dim is None else int(dim))


def _identity(name: Optional[str]) -> Identity:
    if name not in REGISTRY:
        raise CliError(f"unknown identity: {name}")
    return REGISTRY[name]


def _inputs(ident: Identity, cfg: Mapping[str, Any]) -> Dict[str, Any]:
    raw = dict(ident.defaults)
    for name, _ in ident.inputs:
        if cfg.get(name) is not None:
            raw[name] = cfg[name]
    out = {}
    for name, kind in ident.inputs:
        if name not in raw:
            raise CliError(f"identity {ident.name} needs input {name}")
        out[name] = _parse_input(name, kind, raw[name])
    return out


def evaluate(name: str, p: sc.StableParams, inputs: Mapping[str, Any]) -> Any:
    """Evaluate a registered identity; returns a float or ``{"values": [...]}``."""
    ident = _identity(name)
    return _value(ident.fn(p, **{n: inputs[n] for n, _ in ident.inputs}))


_GRID = re.compile(r"^\s*([A-Za-z_]\w*)(?:\[(\d+)\])?\s*=\s*([^:]+):([^:]+):([^:]+)\s*$")


def parse_grid(text: str) -> Tuple[str, Optional[int], List[float]]:
    """``var=a:b:step`` or ``var[i]=a:b:step``; the end point is included when hit exactly."""
    m = _GRID.match(text)
    if not m:
        raise CliError(f"malformed grid {text!r}; expected var=a:b:step")
    name, comp = m.group(1), m.group(2)
    try:
        a, b, step = (Decimal(m.group(k).strip()) for k in (3, 4, 5))
    except InvalidOperation as exc:
        raise CliError(f"malformed grid {text!r}") from exc
    if step <= 0 or b < a:
        raise CliError(f"malformed grid {text!r}; need step > 0 and a <= b")
    count = int((b - a) / step) + 1
    if count > 10 ** 6:
        raise CliError("grid too large")
    return name, None if comp is None else int(comp), [float(a + i * step) for i in range(count)]


# ------------------------------------------------------------------ commands

def _columns(ident: Identity, inputs: Mapping[str, Any]) -> List[Tuple[str, Any]]:
    cols = []
    for name, kind in ident.inputs:
        v = inputs[name]
        if kind == VECTOR:
            cols += [(f"{name}[{i}]", c) for i, c in enumerate(v)]
        elif kind == COMPLEX:
            cols += [(f"{name}.re", v.real), (f"{name}.im", v.imag)]
        else:
            cols.append((name, v))
    return cols


def _cell(v: Any) -> str:
    return v if isinstance(v, str) else fmt_number(v)


def _csv(ident: Identity, rows: Sequence[Tuple[Mapping[str, Any], Any]]) -> str:
    first_inputs, first_val = rows[0]
    head = [c for c, _ in _columns(ident, first_inputs)]
    n_val = 1 if isinstance(first_val, float) else len(first_val["values"])
    head += [ident.name] if n_val == 1 and isinstance(first_val, float) else \
        [f"{ident.name}[{i}]" for i in range(n_val)]
    lines = [",".join(head)]
    for inputs, val in rows:
        vals = [val] if isinstance(val, float) else val["values"]
        lines.append(",".join([_cell(v) for _, v in _columns(ident, inputs)] + [fmt_number(v) for v in vals]))
    return "\n".join(lines) + "\n"


def _json_inputs(ident: Identity, inputs: Mapping[str, Any]) -> Dict[str, Any]:
    out = {}
    for name, kind in ident.inputs:
        v = inputs[name]
        out[name] = [v.real, v.imag] if kind == COMPLEX else v
    return out


def _params_dict(p: sc.StableParams) -> Dict[str, Any]:
    return {"alpha": p.alpha, "rho": p.rho, "dim": p.dim}


def run_eval(cfg: Mapping[str, Any]) -> int:
    ident = _identity(cfg.get("identity"))
    p = _params(cfg)
    inputs = _inputs(ident, cfg)
    val = evaluate(ident.name, p, inputs)
    if cfg.get("format", "json") == "csv":
        text = _csv(ident, [(inputs, val)])
    else:
        text = to_json({"identity": ident.name, "params": _params_dict(p),
                        "inputs": _json_inputs(ident, inputs), "value": val}) + "\n"
    _write(text, cfg.get("out"))
    return 0


def run_tabulate(cfg: Mapping[str, Any]) -> int:
    ident = _identity(cfg.get("identity"))
    p = _params(cfg)
    grids = cfg.get("grid") or []
    if isinstance(grids, str):
        grids = [grids]
    if not grids:
        raise CliError("tabulate needs at least one --grid")
    kinds = dict(ident.inputs)
    axes = []
    for g in grids:
        name, comp, values = parse_grid(g)
        if name not in kinds:
            raise CliError(f"grid variable {name} is not an input of {ident.name}")
        if (comp is not None) != (kinds[name] == VECTOR):
            raise CliError(f"grid variable {name} needs {'a' if kinds[name] == VECTOR else 'no'} component index")
        axes.append((name, comp, values))
    base = dict(cfg)
    for name, comp, values in axes:
        if comp is not None and base.get(name) is None:
            base[name] = ",".join(["0"] * max(p.dim, comp + 1))
        elif comp is None:
            base[name] = values[0]
    base_inputs = _inputs(ident, base)
    rows = []
    for combo in itertools.product(*(values for _, _, values in axes)):
        inputs = {k: (list(v) if isinstance(v, list) else v) for k, v in base_inputs.items()}
        for (name, comp, _), val in zip(axes, combo):
            if comp is None:
                inputs[name] = _parse_input(name, kinds[name], val)
            else:
                if comp >= len(inputs[name]):
                    raise CliError(f"component {comp} out of range for {name}")
                inputs[name][comp] = val
        rows.append((inputs, evaluate(ident.name, p, inputs)))
    _write(_csv(ident, rows), cfg.get("out"))
    return 0


def _scenario_params(items: Sequence[str] | Mapping[str, Any] | None) -> Dict[str, Any]:
    if items is None:
        return {}
    if isinstance(items, Mapping):
        return dict(items)
    out: Dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep:
            raise CliError(f"scenario parameter {item!r} must look like key=value")
        try:
            vals = [float(t) for t in raw.split(",")]
            out[key.strip()] = vals[0] if len(vals) == 1 else vals
        except ValueError:
            out[key.strip()] = raw
    return out


def run_simulate(cfg: Mapping[str, Any]) -> int:
    from . import montecarlo as mc

    p = _params(cfg)
    try:
        sim = mc.SimConfig(dt=float(cfg.get("dt") or 1e-3), horizon=float(cfg.get("horizon") or math.inf),
                           n_paths=int(cfg.get("paths") or 10_000), seed=int(cfg.get("seed") or 0),
                           scenario=str(cfg.get("scenario")),
                           scenario_params=_scenario_params(cfg.get("param")),
                           adaptive=not cfg.get("fixed_step", False))
    except (TypeError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    rec = mc.simulate_event(p, sim)
    if cfg.get("format", "json") == "csv":
        d = rec.before.shape[1] if rec.before.ndim == 2 else 1
        head = ["path", "kind", "time", "steps"] + [f"before[{i}]" for i in range(d)] + \
            [f"after[{i}]" for i in range(d)] + ["occupation"]
        lines = [",".join(head)]
        before = rec.before.reshape(rec.n_paths, d)
        after = rec.after.reshape(rec.n_paths, d)
        for i in range(rec.n_paths):
            row = [str(i), str(int(rec.kind[i])), fmt_number(rec.time[i]), str(int(rec.steps[i]))]
            row += [fmt_number(v) for v in before[i]] + [fmt_number(v) for v in after[i]]
            row.append(fmt_number(rec.occupation[i]))
            lines.append(",".join(row))
        _write("\n".join(lines) + "\n", cfg.get("out"))
        return 0
    hit = rec.kind == mc.EVENT
    est = mc.estimate(rec.time[hit]) if hit.any() else None
    frac = float(hit.mean())
    summary = {
        "scenario": sim.scenario,
        "params": _params_dict(p),
        "config": {"dt": sim.dt, "horizon": sim.horizon, "n_paths": sim.n_paths, "seed": sim.seed,
                   "adaptive": sim.adaptive, "scenario_params": dict(sim.scenario_params)},
        "event_fraction": frac,
        "event_fraction_std_err": math.sqrt(frac * (1.0 - frac) / rec.n_paths),
        "other": int((rec.kind == mc.OTHER).sum()),
        "censored": rec.censored,
        "event_time_mean": None if est is None else est.mean,
        "event_time_std_err": None if est is None else est.std_err,
        "occupation_mean": float(rec.occupation.mean()),
        "occupation_std_err": float(rec.occupation.std() / math.sqrt(rec.n_paths)),
    }
    _write(to_json(summary) + "\n", cfg.get("out"))
    return 0


def run_verify(cfg: Mapping[str, Any]) -> int:
    from . import suites

    suite = cfg.get("suite") or "fast"
    if suite == "fast":
        reports = suites.fast_suite()
    elif suite == "full":
        reports = suites.full_suite(int(cfg.get("seed") or 0), int(cfg.get("paths") or 100_000))
    else:
        raise CliError(f"unknown suite: {suite}")
    _write(to_json([r.as_dict() for r in reports]) + "\n", cfg.get("out"))
    return 0 if all(r.passed for r in reports) else 1


_COMMANDS = {"eval": run_eval, "tabulate": run_tabulate, "simulate": run_simulate, "verify": run_verify}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stablefluct", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--config", help="JSON file with default values; flags override it")
        sp.add_argument("--out", help="output path (stdout when omitted)")
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--rho", type=float)
        sp.add_argument("--dim", type=int)

    for cmd in ("eval", "tabulate"):
        sp = sub.add_parser(cmd)
        common(sp)
        sp.add_argument("--identity")
        sp.add_argument("--format", choices=("json", "csv"))
        for name in INPUT_NAMES:
            sp.add_argument("--" + name.replace("_", "-"), dest=name)
        if cmd == "tabulate":
            sp.add_argument("--grid", action="append", help='"var=a:b:step" or "var[i]=a:b:step"')
    sp = sub.add_parser("simulate")
    common(sp)
    sp.add_argument("--scenario")
    sp.add_argument("--dt", type=float)
    sp.add_argument("--horizon", type=float)
    sp.add_argument("--paths", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--param", action="append", help="scenario parameter key=value (vectors comma separated)")
    sp.add_argument("--fixed-step", action="store_true", default=None)
    sp.add_argument("--format", choices=("json", "csv"))
    sp = sub.add_parser("verify")
    sp.add_argument("--config")
    sp.add_argument("--out")
    sp.add_argument("--suite")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--paths", type=int)
    return ap


def _merge(args: argparse.Namespace) -> Dict[str, Any]:
    cfg: Dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config: {exc}") from exc
        if not isinstance(loaded, dict):
            raise CliError("config file must hold a JSON object")
        cfg.update(loaded)
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k != "config"})
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _merge(args)
        return _COMMANDS[args.command](cfg)
    except (CliError, StableFluctError) as exc:
        err = {"error": str(exc), "type": type(exc).__name__}
        sys.stderr.write(json.dumps(err) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
