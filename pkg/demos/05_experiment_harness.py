"""Run a bundled experiment preset through the harness API and walk the
files it writes: per-replicate traces, the ensemble mean, and a summary
with derived constants and fitted rates per variant.

Equivalent shell command:  ozo run --config fig1-left --scale desk
"""

import json
import tempfile
from pathlib import Path

from ozo.harness import find_preset, list_presets, load_config, resolve, run_experiment

print("bundled presets:", " ".join(name for name, _, _ in list_presets()))

exp = resolve(load_config(find_preset("fig4-left")), scale="desk")
out = Path(tempfile.mkdtemp()) / "fig4-left-desk"
summary = run_experiment(exp, out)

files = sorted(p.relative_to(out) for p in out.rglob("*") if p.is_file())
print(f"\nwrote {len(files)} files under {out}")
for rel in files:
    if rel.name in ("summary.json", "mean.csv", "rep000.csv", "mean.meta.json"):
        print(f"  {rel}")
print("  ... (one repNNN.csv per replicate)")

# the summary on disk is the same object run_experiment returns
assert json.loads((out / "summary.json").read_text()) == summary
print(f"\nproblem: {summary['problem']['kind']} d={summary['d']} "
      f"lambda={summary['problem']['lambda']}")
for v in summary["variants"]:
    fit = v["fit"]
    print(f"  {v['label']:8s} regime {v['regime']:8s} "
          f"final mean f {v['final_mean_f']:.3e}  "
          f"fit[{fit['model']}] {fit['value']:.4g} (r2 {fit['r2']:.3f})")
