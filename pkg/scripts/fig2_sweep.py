"""log10 K vs enhanced cross-section for the reference experiment (second figure).

    python scripts/fig2_sweep.py --from 1e-3 --to 1e-2 --points 60
"""
import argparse
import math
from pathlib import Path

from pdcschmidt.cli import SweepSpec, sweep_rows
from pdcschmidt.estimator import CLOSED_MODEL, QUADRATIC, SERIES_PW
from pdcschmidt.params import BASELINE

ap = argparse.ArgumentParser()
ap.add_argument("--out", default="results")
ap.add_argument("--from", dest="start", type=float, default=1e-3)
ap.add_argument("--to", dest="stop", type=float, default=1e-2)
ap.add_argument("--points", type=int, default=60)
ap.add_argument("--workers", type=int, default=1)
args = ap.parse_args()

methods = (CLOSED_MODEL, SERIES_PW, QUADRATIC)
spec = SweepSpec("enhanced_cross_section", args.start, args.stop, args.points, "log", methods)
rows = sweep_rows(BASELINE, spec, workers=args.workers)

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
with open(out / "fig2_sweep.csv", "w") as fh:
    fh.write("ecs_um2,big_x,log10_k_model,log10_k_series_pw,log10_k_quadratic\n")
    for r in rows:
        fh.write(",".join(repr(v) for v in [r[0], r[1]] + [v / math.log(10) for v in r[3:]]) + "\n")
first, last = rows[0], rows[-1]
print(f"X {first[1]:.4f} -> {last[1]:.4f}; model log10 K {first[3] / math.log(10):.3f} -> {last[3] / math.log(10):.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, ax = plt.subplots(figsize=(5, 3.6))
ecs = [r[0] for r in rows]
for col, style, label in ((3, "k-", "model"), (4, "r-.", "plane-wave series"), (5, "k:", "quadratic")):
    ax.plot(ecs, [r[col] / math.log(10) for r in rows], style, label=label)
ax.set_xscale("log")
ax.set_xlabel(r"enhanced cross-section [$\mu$m$^2$]")
ax.set_ylabel(r"log$_{10}$ K")
ax.legend(frameon=False)
fig.tight_layout()
fig.savefig(out / "fig2_sweep.png", dpi=150)
print(f"wrote {out / 'fig2_sweep.png'}")
