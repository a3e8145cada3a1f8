"""Uniform prior on a coin's bias, updated by the flips H, T, T, T.

Each posterior is computed by Bayesian inversion of the Flip channel and
compared with the Beta state named by the parameter translator.  The three
densities are written as CSV (x,density) for plotting with any tool.

    python3 demos/coin_figure.py [out_dir]
"""

import sys
from pathlib import Path

import numpy as np

from conjugate_channels.conjugacy import state_distance
from conjugate_channels.continuous import inversion_pdf
from conjugate_channels.families import BetaParams, beta_channel, flip_channel, h_beta_flip

out = Path(sys.argv[1] if len(sys.argv) > 1 else "coin_figure")
out.mkdir(parents=True, exist_ok=True)

B, flip = beta_channel(), flip_channel()
params = BetaParams(1, 1)
state = B(params)
xs = np.linspace(0, 1, 101)
snapshots = {"prior": state}

for k, ch in enumerate("HTTT"):
    y = 1 if ch == "H" else 0
    state = inversion_pdf(flip, state, y)
    params = h_beta_flip(params, y)
    print(f"after {ch}: translator says Beta({params.alpha:g},{params.beta:g}), "
          f"distance to inversion {state_distance(state, B(params)):.2e}, "
          f"posterior mean {state.expect(lambda x: x):.4f}")
    if k == 0:
        snapshots["after_H"] = state
snapshots["after_HTTT"] = state

for name, st in snapshots.items():
    dens = st.pdf(xs)
    rows = "\n".join(f"{x:.17g},{d:.17g}" for x, d in zip(xs, dens))
    (out / f"{name}.csv").write_text("x,density\n" + rows + "\n")

# a coarse text rendering of the three curves
print("\n   x   prior  after H  after HTTT")
for x in (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0):
    vals = [float(snapshots[k].pdf(np.array([x]))[0]) for k in snapshots]
    print(f"{x:5.2f} " + " ".join(f"{v:8.4f}" for v in vals))
print(f"\nCSV files in {out}/")
