"""Command-line driver. Exit codes: 0 success, 2 config error, 3 I/O error."""

import sys
from pathlib import Path

import click

from .harness import (
    ConfigError,
    find_preset,
    list_presets,
    load_config,
    resolve,
    run_experiment,
)

EXIT_CONFIG = 2
EXIT_IO = 3


def _load(config):
    p = Path(config)
    if p.is_file():
        return load_config(p)
    preset = find_preset(config)
    if preset is not None:
        return load_config(preset)
    raise ConfigError(f"config {config!r}: no such file and no preset with that name "
                      "(run `ozo presets` to list presets)")


@click.group()
def main():
    """Random-subspace finite-difference descent experiments."""


@main.command("run")
@click.option("--config", required=True,
              help="Path to a TOML experiment config, or a bare preset name.")
@click.option("--scale", default="desk", type=click.Choice(["desk", "paper"]),
              show_default=True)
@click.option("--seed", default=None, type=int,
              help="Override the master seed from the config.")
@click.option("--out", default=None,
              help="Output directory [default: runs/<name>-<scale>].")
@click.option("--threads", default=1, type=int, show_default=True)
def run_cmd(config, scale, seed, out, threads):
    """Execute an experiment: CSV traces plus summary.json."""
    try:
        cfg = _load(config)
        exp = resolve(cfg, scale=scale, seed=seed)
    except ConfigError as e:
        click.echo(f"config error: {e}", err=True)
        sys.exit(EXIT_CONFIG)
    out_dir = Path(out) if out else Path("runs") / f"{cfg.name}-{scale}"
    try:
        summary = run_experiment(exp, out_dir, threads=threads)
    except OSError as e:
        click.echo(f"i/o error: {e}", err=True)
        sys.exit(EXIT_IO)
    for v in summary["variants"]:
        n_div = sum(1 for s in v["statuses"] if s != "completed")
        note = f", {n_div} diverged" if n_div else ""
        click.echo(f"{v['label']}: {v['replicates']} replicate(s){note}, "
                   f"regime {v['regime']}, final mean f = {v['final_mean_f']:.6g}")
    click.echo(f"wrote {out_dir}/summary.json")


@main.command("presets")
def presets_cmd():
    """List preset experiment configs found on the search path."""
    found = list_presets()
    if not found:
        click.echo("no preset configs found (looked for configs/*.toml next to the "
                   "working directory and the installed package; set OZO_CONFIG_DIR "
                   "to point elsewhere)")
        return
    width = max(len(name) for name, _, _ in found)
    for name, description, _ in found:
        click.echo(f"{name:<{width}}  {description}")


@main.command("check")
@click.option("--config", required=True,
              help="Path to a TOML experiment config, or a bare preset name.")
@click.option("--scale", default="desk", type=click.Choice(["desk", "paper"]),
              show_default=True)
def check_cmd(config, scale):
    """Validate a config and print derived constants without running."""
    from .harness import _constants_block

    try:
        cfg = _load(config)
        exp = resolve(cfg, scale=scale)
    except ConfigError as e:
        click.echo(f"config error: {e}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(f"{cfg.name} [{scale}]: d={exp.d}, n={exp.n}, budget={exp.budget}, "
               f"problem={cfg.problem_kind} (lambda={exp.problem.lam:g}, "
               f"gamma={exp.problem.gamma:.6g} {exp.problem.gamma_source})")
    for v in exp.variants:
        cons, regime, err_bound = _constants_block(exp, v)
        a, h = v.schedule.alpha, v.schedule.h
        click.echo(f"  {v.label}: replicates={v.replicates}, "
                   f"alpha[{a.law}]={a.alpha:g}"
                   + (f" s={a.s:g}" if a.law == "power" else "")
                   + f", h[{h.law}]={h.h:g}"
                   + (f" r={h.r:g}" if h.law in ("power", "expdecay") else ""))
        if cons is None:
            click.echo("    constants: step bound outside (0, 2/Lambda); "
                       "regime unclassified")
            continue
        line = (f"    Lambda={cons['Lambda']:g}, w={cons['w']:g}, C={cons['C']:g}, "
                f"eta={cons['eta']:.6g}, regime {regime}")
        if err_bound is not None:
            line += f", error region <= {err_bound:.6g}"
        click.echo(line)


if __name__ == "__main__":
    main()
