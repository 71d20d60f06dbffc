"""Disorder-free localization from charge-sector averaging (closed system).

A density-wave initial state evolved unitarily within a single charge
sector simply dephases; averaged over the emergent binary disorder of all
charge sectors, the fidelity saturates at a finite plateau that grows with
the coupling h/J.  Averages over all 2^10 charge sectors (takes a minute
or two; drop to L=8 for a quick look, though the h/J trend is noisier
at that size).

Run:  python3 demos/02_disorder_free_localization.py
"""

import numpy as np

from z2dfl import ModelParams, OccupationState, ensemble_evolve
from z2dfl.observables import FidelityTrace
from z2dfl.sectors import SectorMode

L, Nf = 10, 5
psi0 = OccupationState.from_string("1010101010")
t_grid = np.arange(0.0, 121.0, 1.0)
baseline = 1.0 / np.sqrt(252)  # overlap with the maximally mixed state

print(f"unitary ensemble average over all 2^{L} charge sectors, "
      f"psi0 = |{psi0}>")
print(f"infinite-temperature baseline 1/sqrt(dim) = {baseline:.4f}\n")

for h in (0.25, 0.5, 1.0):
    res = ensemble_evolve(
        psi0, Nf, ModelParams(J=1.0, h=h), SectorMode.all_sectors(), t_grid
    )
    trace = FidelityTrace(res.times, res.fidelity)
    plateau = trace.window_mean(80.0, 120.0)
    print(f"h/J = {h:4.2f}:  F(0) = {res.fidelity[0]:.3f},  "
          f"late-window mean F = {plateau:.4f}  "
          f"({plateau / baseline:.1f}x baseline)")

print("\nThe plateau rises with h/J: stronger coupling to the emergent "
      "binary potential localizes the fermions more strongly.")
