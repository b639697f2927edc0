"""Comparison curves f_model, f_quad, f_tc, f_pw against X (first figure).

Writes a CSV and, if matplotlib is around, a PNG.
    python scripts/fig1_curves.py --out results/
"""
import argparse
import csv
from pathlib import Path

from pdcschmidt.estimator import f_curves

ap = argparse.ArgumentParser()
ap.add_argument("--out", default="results")
ap.add_argument("--xmax", type=float, default=0.8)
ap.add_argument("--points", type=int, default=81)
args = ap.parse_args()

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
rows = [f_curves(args.xmax * i / (args.points - 1)) for i in range(args.points)]
with open(out / "fig1_curves.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["x", "f_model", "f_quad", "f_tc", "f_pw"])
    for r in rows:
        w.writerow([repr(r.x), repr(r.f_model), repr(r.f_quad), repr(r.f_tc), repr(r.f_pw)])

broken = [r.x for r in rows[1:] if not (r.f_tc <= r.f_model <= r.f_pw <= r.f_quad)]
print(f"ordering f_tc <= f_model <= f_pw <= f_quad: {'holds' if not broken else 'broken at ' + str(broken)}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

xs = [r.x for r in rows]
fig, ax = plt.subplots(figsize=(5, 3.6))
ax.plot(xs, [r.f_model for r in rows], "k-", label="model 1 - cos X")
ax.plot(xs, [r.f_quad for r in rows], "k:", label="quadratic")
ax.plot(xs, [r.f_tc for r in rows], "b--", label="thin crystal")
ax.plot(xs, [r.f_pw for r in rows], "r-.", label="plane wave")
ax.set_xlabel("X")
ax.set_ylabel("ln K / A")
ax.legend(frameon=False)
fig.tight_layout()
fig.savefig(out / "fig1_curves.png", dpi=150)
print(f"wrote {out / 'fig1_curves.png'}")
