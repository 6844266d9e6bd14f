"""Trace the achievable (R, R') frontier for a few small wiretap channels.

R is the guaranteed (secure even if the entangled share is intercepted) rate
and R' the excess rate unlocked when the share arrives intact.  The frontier
is scalarized: for each weight lambda we maximize lambda*R + (1-lambda)*R'
over signalling distributions, entangled resource states, and encoders.

Run:  python3 demos/rate_region_frontier.py
"""

import numpy as np

from qwiretap import eve_trivial, make_channel, optimize_region
from qwiretap.regions import baseline

BUDGET = 4000
WEIGHTS = list(np.linspace(0.0, 1.0, 5))


def show(title, channel):
    print(f"\n== {title} ==")
    sample = optimize_region(channel, WEIGHTS, budget=BUDGET, seed=0)
    print("lambda    R (bits)   R' (bits)  frontier")
    for p in sample.points:
        star = "*" if p.frontier else " "
        print(f"{p.weight:6.2f}  {p.rate.r:9.4f}  {p.rate.rp:9.4f}   {star}")
    for kind in ("holevo", "ea"):
        print(f"baseline {kind:7s} = {baseline(kind, channel, BUDGET, 0):.4f} bits")


if __name__ == "__main__":
    # noiseless qubit with no eavesdropper: superdense coding makes the
    # assisted corner (0, 2) reachable while classical signalling gives (1, 0)
    show("noiseless qubit, trivial eavesdropper", eve_trivial(make_channel("identity_dilation", [2])))

    # erasure wiretap: whatever Bob loses, Eve gains, shrinking both rates
    show("erasure wiretap, p_erase = 0.25", make_channel("erasure_wiretap", [0.25]))
