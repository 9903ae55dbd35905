"""Experiment driver: declarative TOML configs in, CSV traces plus a JSON
summary out.

A config describes one experiment (one problem, one schedule family) swept
over ell or over h, replicated, at a chosen scale. Runs are independent;
the pool parallelizes over (variant, replicate) and the coordinator writes
every file after all tasks finish, so outputs are byte-identical across
thread counts.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import diagnostics
from .optimizer import DivergenceError, RunConfig, run
from .problems import make_convex_pl, make_nonconvex_pl
from .samplers import SAMPLER_TAGS, make_rng
from .schedules import (
    AlphaSchedule,
    HSchedule,
    InfeasibleStepsizeError,
    ScheduleSpec,
    classify_regime,
    derive_constants,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ResolvedExperiment",
    "load_config",
    "resolve",
    "run_experiment",
    "emit_csv",
    "default_x0",
    "list_presets",
    "find_preset",
]

SCALES = ("desk", "paper")

_KNOWN = {
    "": {"name", "description", "plot_hint", "problem", "alpha", "h", "run", "scale"},
    "problem": {"kind", "lambda", "rank_deficiency", "seed"},
    "alpha": {"law", "alpha", "scale", "s"},
    "h": {"law", "h", "r", "eta"},
    "run": {"sampler", "mode", "replicates", "seed", "diagnostics", "shared_x0",
            "fevals_convention"},
    "scale": {"d", "n", "budget", "ells", "hs", "replicates"},
}


class ConfigError(ValueError):
    """Invalid experiment config; the message names the offending field."""


def _reject_unknown(table, section):
    for key in table:
        if key not in _KNOWN[section]:
            where = f"[{section}]" if section else "top level"
            raise ConfigError(f"unknown key {key!r} at {where}")


@dataclass(frozen=True)
class ScaleSpec:
    d: int
    n: int
    budget: int
    ells: tuple
    hs: tuple
    replicates: tuple  # parallel to the sweep, already expanded


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    description: str
    plot_hint: str
    problem_kind: str
    lam: float
    rank_deficiency: int
    problem_seed: int
    alpha_raw: dict
    h_raw: dict
    sampler: str
    mode: str
    replicates: int
    master_seed: int
    diagnostics: bool
    shared_x0: bool
    fevals_convention: str
    scales: dict = field(repr=False)  # scale name -> ScaleSpec

    @classmethod
    def from_dict(cls, data):
        return _parse_config(data)


def _req(table, section, key, types, pred=lambda v: True):
    if key not in table:
        raise ConfigError(f"missing required key {section}.{key}" if section
                          else f"missing required key {key}")
    v = table[key]
    name = f"{section}.{key}" if section else key
    if not isinstance(v, types) or isinstance(v, bool) and bool not in _astuple(types):
        raise ConfigError(f"{name}: wrong type {type(v).__name__}")
    if not pred(v):
        raise ConfigError(f"{name}: invalid value {v!r}")
    return v


def _astuple(t):
    return t if isinstance(t, tuple) else (t,)


def _opt(table, section, key, default, types, pred=lambda v: True):
    if key not in table:
        return default
    return _req(table, section, key, types, pred)


def _parse_scale(tag, table, mode):
    section = "scale"
    _reject_unknown(table, section)
    pfx = f"scale.{tag}"
    d = _opt(table, pfx, "d", None, int, lambda v: v >= 1)
    if d is None:
        raise ConfigError(f"missing required key {pfx}.d")
    n = _opt(table, pfx, "n", d, int, lambda v: v >= 1)
    budget = _opt(table, pfx, "budget", None, int, lambda v: v >= 1)
    if budget is None:
        raise ConfigError(f"missing required key {pfx}.budget")
    ells = table.get("ells", [1])
    hs = table.get("hs", [])
    if not isinstance(ells, list) or not all(isinstance(e, int) for e in ells) or not ells:
        raise ConfigError(f"{pfx}.ells: need a non-empty list of integers")
    if not isinstance(hs, list) or not all(isinstance(h, (int, float)) for h in hs):
        raise ConfigError(f"{pfx}.hs: need a list of numbers")
    for e in ells:
        if not 1 <= e <= d:
            raise ConfigError(f"{pfx}.ells: ell={e} outside 1..d (d={d})")
    if hs and len(ells) > 1:
        raise ConfigError(f"{pfx}.hs: sweep either ells or hs, not both")
    for h in hs:
        if h <= 0:
            raise ConfigError(f"{pfx}.hs: h values must be positive, got {h}")
    n_variants = len(hs) if hs else len(ells)
    reps = table.get("replicates")
    if reps is not None:
        if (not isinstance(reps, list) or len(reps) != n_variants
                or not all(isinstance(r, int) and r >= 1 for r in reps)):
            raise ConfigError(
                f"{pfx}.replicates: need a list of {n_variants} positive integers "
                "(one per sweep entry)")
        reps = tuple(reps)
    if mode == "fd" and budget < min(ells) + 1:
        raise ConfigError(f"{pfx}.budget: {budget} cannot fund one iteration "
                          f"(needs >= ell+1 = {min(ells) + 1})")
    return ScaleSpec(d=d, n=n, budget=budget, ells=tuple(ells), hs=tuple(hs),
                     replicates=reps)


def _parse_config(data):
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table")
    _reject_unknown(data, "")
    name = _req(data, "", "name", str, lambda v: bool(v.strip()))
    description = _opt(data, "", "description", "", str)
    plot_hint = _opt(data, "", "plot_hint", "lines", str,
                     lambda v: v in ("lines", "envelope"))

    prob = data.get("problem")
    if not isinstance(prob, dict):
        raise ConfigError("missing required table [problem]")
    _reject_unknown(prob, "problem")
    kind = _req(prob, "problem", "kind", str,
                lambda v: v in ("convex-pl", "nonconvex-pl"))
    lam = float(_req(prob, "problem", "lambda", (int, float), lambda v: v > 0))
    rank_deficiency = _opt(prob, "problem", "rank_deficiency", 1, int, lambda v: v >= 1)
    problem_seed = _opt(prob, "problem", "seed", 0, int)

    runt = data.get("run")
    if not isinstance(runt, dict):
        raise ConfigError("missing required table [run]")
    _reject_unknown(runt, "run")
    sampler = _opt(runt, "run", "sampler", "coordinate", str)
    if sampler not in SAMPLER_TAGS:
        raise ConfigError(f"run.sampler: unknown sampler tag {sampler!r}; "
                          f"valid tags: {', '.join(SAMPLER_TAGS)}")
    mode = _opt(runt, "run", "mode", "fd", str, lambda v: v in ("fd", "exact"))
    replicates = _opt(runt, "run", "replicates", 1, int, lambda v: v >= 1)
    master_seed = _opt(runt, "run", "seed", 0, int)
    diag = _opt(runt, "run", "diagnostics", False, bool)
    shared_x0 = _opt(runt, "run", "shared_x0", True, bool)
    convention = _opt(runt, "run", "fevals_convention", "cached", str,
                      lambda v: v in ("cached", "paper"))

    alpha_raw = _opt(data, "", "alpha", {"law": "constant", "alpha": "auto"}, dict)
    _reject_unknown(alpha_raw, "alpha")
    h_raw = _opt(data, "", "h", {"law": "constant", "h": 0.0}, dict)
    _reject_unknown(h_raw, "h")

    scales_t = data.get("scale")
    if not isinstance(scales_t, dict) or not scales_t:
        raise ConfigError("missing required table [scale.<tag>] (desk and/or paper)")
    scales = {}
    for tag, table in scales_t.items():
        if tag not in SCALES:
            raise ConfigError(f"scale.{tag}: unknown scale tag (valid: desk, paper)")
        if not isinstance(table, dict):
            raise ConfigError(f"scale.{tag}: must be a table")
        scales[tag] = _parse_scale(tag, table, mode)

    return ExperimentConfig(
        name=name, description=description, plot_hint=plot_hint,
        problem_kind=kind, lam=lam, rank_deficiency=rank_deficiency,
        problem_seed=problem_seed, alpha_raw=dict(alpha_raw), h_raw=dict(h_raw),
        sampler=sampler, mode=mode, replicates=replicates,
        master_seed=master_seed, diagnostics=diag, shared_x0=shared_x0,
        fevals_convention=convention, scales=scales,
    )


def load_config(path):
    """Parse and validate a TOML experiment config."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: not valid TOML: {e}") from None
    return _parse_config(data)


def _alpha_schedule(raw, d, lam, ell):
    law = raw.get("law", "constant")
    value = raw.get("alpha", "auto")
    scale = raw.get("scale", 1.0)
    if value == "auto":
        value = ell / (d * lam)  # 1/Lambda
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"alpha.alpha: expected a number or 'auto', got {value!r}")
    if not isinstance(scale, (int, float)) or scale <= 0:
        raise ConfigError(f"alpha.scale: expected a positive number, got {scale!r}")
    try:
        return AlphaSchedule(law=law, alpha=float(value) * float(scale),
                             s=float(raw.get("s", 0.0)))
    except ValueError as e:
        raise ConfigError(f"alpha: {e}") from None


def _h_schedule(raw, mode, override_value=None):
    law = raw.get("law", "constant")
    value = raw.get("h", 0.0) if override_value is None else override_value
    try:
        sched = HSchedule(law=law, h=float(value), r=float(raw.get("r", 0.0)),
                          eta=float(raw.get("eta", 0.0)))
    except ValueError as e:
        raise ConfigError(f"h: {e}") from None
    if mode == "fd" and sched.bound() <= 0:
        raise ConfigError("h.h: finite-difference mode needs h > 0")
    return sched


@dataclass(frozen=True)
class ResolvedVariant:
    index: int
    label: str
    ell: int
    replicates: int
    schedule: ScheduleSpec


@dataclass(frozen=True)
class ResolvedExperiment:
    cfg: ExperimentConfig
    scale: str
    d: int
    n: int
    budget: int
    master_seed: int
    problem: object
    variants: tuple


def resolve(cfg, scale="desk", seed=None):
    """Bind a config to a scale: build the problem and the variant list."""
    if scale not in cfg.scales:
        raise ConfigError(f"scale.{scale}: not defined in config {cfg.name!r} "
                          f"(available: {', '.join(sorted(cfg.scales))})")
    sc = cfg.scales[scale]
    master = cfg.master_seed if seed is None else int(seed)
    if cfg.sampler == "hadamard" and sc.d & (sc.d - 1) != 0:
        raise ConfigError(f"run.sampler: hadamard needs d a power of two, "
                          f"but scale.{scale}.d = {sc.d}")
    if cfg.problem_kind == "convex-pl":
        m = min(sc.n, sc.d)
        if not 1 <= cfg.rank_deficiency < m:
            raise ConfigError(f"problem.rank_deficiency: need 1 <= value < min(n, d) "
                              f"= {m} at scale {scale}")
        problem = make_convex_pl(sc.d, sc.n, cfg.lam,
                                 rank_deficiency=cfg.rank_deficiency,
                                 seed=cfg.problem_seed)
    else:
        if sc.n != sc.d:
            raise ConfigError(f"scale.{scale}.n: the nonconvex family needs n == d")
        try:
            problem = make_nonconvex_pl(sc.d, lambda_target=cfg.lam,
                                        seed=cfg.problem_seed)
        except ValueError as e:
            raise ConfigError(f"problem.lambda: {e}") from None

    variants = []
    if sc.hs:
        ell = sc.ells[0]
        for i, hv in enumerate(sc.hs):
            reps = sc.replicates[i] if sc.replicates else cfg.replicates
            sched = ScheduleSpec(_alpha_schedule(cfg.alpha_raw, sc.d, cfg.lam, ell),
                                 _h_schedule(cfg.h_raw, cfg.mode, override_value=hv))
            variants.append(ResolvedVariant(i, f"h{hv:g}", ell, reps, sched))
    else:
        for i, ell in enumerate(sc.ells):
            reps = sc.replicates[i] if sc.replicates else cfg.replicates
            sched = ScheduleSpec(_alpha_schedule(cfg.alpha_raw, sc.d, cfg.lam, ell),
                                 _h_schedule(cfg.h_raw, cfg.mode))
            variants.append(ResolvedVariant(i, f"ell{ell}", ell, reps, sched))

    return ResolvedExperiment(cfg=cfg, scale=scale, d=sc.d, n=sc.n,
                              budget=sc.budget, master_seed=master,
                              problem=problem, variants=tuple(variants))


def default_x0(problem, rng, attempts=3):
    """iid U[-1, 1] entries, rescaled so the quadratic part equals d.

    Keeps f(x0) at O(d) across dimensions so figure panels share a value
    range. Redraws (bounded) if the draw lands in the kernel of A.
    """
    for _ in range(attempts):
        u = rng.uniform(-1.0, 1.0, size=problem.d)
        q = float(np.sum((problem.A @ u) ** 2))
        if q > 1e-12 * problem.d:
            return u * math.sqrt(problem.d / q)
    raise RuntimeError("could not draw an initial point outside the kernel of A")


def _x0_for(exp, rep):
    if exp.cfg.shared_x0:
        return default_x0(exp.problem, make_rng(exp.master_seed, 0))
    return default_x0(exp.problem, make_rng(exp.master_seed, 2, rep))


def _run_one(exp, variant, rep):
    cfg = RunConfig(
        problem=exp.problem, ell=variant.ell, schedule=variant.schedule,
        budget=exp.budget, x0=_x0_for(exp, rep), sampler=exp.cfg.sampler,
        seed=(exp.master_seed, 1, variant.index, rep), mode=exp.cfg.mode,
        fevals_convention=exp.cfg.fevals_convention,
        diagnostics=exp.cfg.diagnostics,
    )
    try:
        return run(cfg)
    except DivergenceError as e:
        return e.record


def emit_csv(path, columns):
    """Write a columnar trace as CSV: UTF-8, LF, shortest round-trip floats."""
    names = list(columns)
    if not names or len(columns[names[0]]) == 0:
        raise ValueError("refusing to emit an empty trace")
    ints = {"k", "fevals"}
    lines = [",".join(names)]
    n = len(columns[names[0]])
    for i in range(n):
        cells = []
        for name in names:
            v = columns[name][i]
            cells.append(str(int(v)) if name in ints else repr(float(v)))
        lines.append(",".join(cells))
    data = ("\n".join(lines) + "\n").encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)


def _mean_columns(records):
    L = min(r.k.size for r in records)
    base = records[0]
    f = np.mean([r.f[:L] for r in records], axis=0)
    best = np.mean([r.best_f[:L] for r in records], axis=0)
    return {
        "k": base.k[:L], "fevals": base.fevals[:L], "f": f, "best_f": best,
        "alpha": base.alpha[:L], "h": base.h[:L],
    }, L


def _constants_block(exp, variant):
    """Theory constants for the summary; None when the step bound is outside
    the admissible range (the run still happens)."""
    sched = variant.schedule
    try:
        cons = derive_constants(exp.problem.lam, exp.problem.gamma, exp.d,
                                variant.ell, sched.alpha.bound())
    except (InfeasibleStepsizeError, ValueError):
        return None, "unclassified", None
    regime = classify_regime(sched, cons, exp.cfg.mode)
    bound = None
    if sched.alpha.law == "constant":
        h_bar = 0.0 if exp.cfg.mode == "exact" else sched.h.bound()
        bound = diagnostics.error_region_bound(cons, sched.alpha.alpha, h_bar)
    block = {
        "Lambda": cons.Lambda, "alpha_bar": cons.alpha_bar, "w": cons.w,
        "C": cons.C, "eta": cons.eta, "gamma": cons.gamma,
    }
    return block, regime, bound


def _fit_block(exp, variant, mean_cols):
    model = "power" if variant.schedule.h.law == "power" else "linear_log"
    gap = np.asarray(mean_cols["f"]) - exp.problem.f_star
    try:
        fit = diagnostics.fit_rate(mean_cols["k"], gap, model=model)
    except ValueError:
        return None
    return {"model": fit.model, "value": fit.value, "r2": fit.r2,
            "window": [fit.k_lo, fit.k_hi], "truncated": fit.truncated}


def run_experiment(exp, out_dir, threads=1):
    """Execute all (variant, replicate) runs and write traces plus summary.

    Returns the summary dict. Task results are collected by key and written
    only after the pool drains, so the on-disk bytes are independent of the
    thread count.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    tasks = [(v, r) for v in exp.variants for r in range(v.replicates)]
    results = {}
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futs = {pool.submit(_run_one, exp, v, r): (v.index, r) for v, r in tasks}
        for fut, key in futs.items():
            results[key] = fut.result()

    cfg = exp.cfg
    summary = {
        "experiment": cfg.name,
        "description": cfg.description,
        "scale": exp.scale,
        "master_seed": exp.master_seed,
        "d": exp.d,
        "n": exp.n,
        "budget": exp.budget,
        "problem": {
            "kind": cfg.problem_kind, "lambda": exp.problem.lam,
            "gamma": exp.problem.gamma, "gamma_source": exp.problem.gamma_source,
            "seed": exp.problem.seed, "f_star": exp.problem.f_star,
        },
        "sampler": cfg.sampler,
        "mode": cfg.mode,
        "fevals_convention": cfg.fevals_convention,
        "x0_policy": "shared" if cfg.shared_x0 else "per-replicate",
        "diagnostics": cfg.diagnostics,
        "plot_hint": cfg.plot_hint,
        "variants": [],
    }

    for v in exp.variants:
        vdir = out / v.label
        vdir.mkdir(exist_ok=True)
        records = [results[(v.index, r)] for r in range(v.replicates)]
        rep_files = []
        for r, rec in enumerate(records):
            rel = f"{v.label}/rep{r:03d}.csv"
            emit_csv(out / rel, rec.columns())
            rep_files.append(rel)
        mean_cols, L = _mean_columns(records)
        mean_rel = f"{v.label}/mean.csv"
        emit_csv(out / mean_rel, mean_cols)
        sidecar = {
            "replicates": v.replicates,
            "rows": L,
            "truncated": any(rec.k.size != L for rec in records),
            "sources": rep_files,
        }
        with open(out / f"{v.label}/mean.meta.json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)
            fh.write("\n")

        cons, regime, err_bound = _constants_block(exp, v)
        statuses = [rec.status for rec in records]
        summary["variants"].append({
            "label": v.label,
            "ell": v.ell,
            "alpha": {"law": v.schedule.alpha.law, "value": v.schedule.alpha.alpha,
                      "s": v.schedule.alpha.s},
            "h": {"law": v.schedule.h.law, "value": v.schedule.h.h,
                  "r": v.schedule.h.r},
            "replicates": v.replicates,
            "seeds": [[exp.master_seed, 1, v.index, r] for r in range(v.replicates)],
            "statuses": statuses,
            "constants": cons,
            "regime": regime,
            "error_region_bound": err_bound,
            "fit": _fit_block(exp, v, mean_cols),
            "final_mean_f": float(mean_cols["f"][-1]),
            "final_mean_best_f": float(mean_cols["best_f"][-1]),
            "files": {"mean": mean_rel, "replicates": rep_files},
        })

    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary


def _config_dirs():
    dirs = []
    env = os.environ.get("OZO_CONFIG_DIR")
    if env:
        dirs.append(Path(env))
    dirs.append(Path.cwd() / "configs")
    here = Path(__file__).resolve()
    for up in list(here.parents)[:4]:
        dirs.append(up / "configs")
    seen, out = set(), []
    for p in dirs:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def list_presets():
    """Preset configs found on the search path: (name, description, path)."""
    found = {}
    for d in _config_dirs():
        if not d.is_dir():
            continue
        for p in sorted(d.glob("*.toml")):
            name = p.stem
            if name in found:
                continue
            try:
                cfg = load_config(p)
                found[name] = (name, cfg.description, p)
            except (ConfigError, OSError):
                found[name] = (name, "(invalid config)", p)
    return [found[k] for k in sorted(found)]


def find_preset(name):
    """Resolve a bare preset name to a config path, or None."""
    for d in _config_dirs():
        p = d / f"{name}.toml"
        if p.is_file():
            return p
    return None
