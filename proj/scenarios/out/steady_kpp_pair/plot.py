#!/usr/bin/env python3
"""Plot every snapshot listed in meta.csv (and any profile CSVs) found in
the directory this script sits in.  Usage: python3 plot.py [outfile.png]"""
import csv
import os
import sys

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required to render the plot")

here = os.path.dirname(os.path.abspath(__file__))

def read_xy(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    xs = [float(r[0]) for r in rows[1:]]
    ys = [float(r[1]) for r in rows[1:]]
    return xs, ys

fig, ax = plt.subplots(figsize=(9, 5))
meta = os.path.join(here, "meta.csv")
if os.path.exists(meta):
    with open(meta, newline="") as f:
        entries = list(csv.DictReader(f))
    for row in entries:
        xs, us = read_xy(os.path.join(here, row["filename"]))
        ax.plot(xs, us, lw=1.2, label=f"t={float(row['t']):g}")
for name in sorted(os.listdir(here)):
    if name.startswith("stationary_") or name == "front.csv":
        xs, ys = read_xy(os.path.join(here, name))
        ax.plot(xs, ys, "--", lw=1.5, label=name.removesuffix(".csv"))
ax.axvline(0.0, color="k", lw=0.6, alpha=0.5)
ax.set_xlabel("x")
ax.set_ylabel("u")
ax.legend(fontsize=8, ncols=2)
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "plot.png")
fig.tight_layout()
fig.savefig(out, dpi=150)
print(out)
