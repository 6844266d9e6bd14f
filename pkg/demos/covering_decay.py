"""Monte Carlo illustration of the covering lemma at small blocklength.

A codebook of 2^{n R0} product states drawn i.i.d. from an ensemble has an
average state that approaches the ensemble average's n-fold power once R0
exceeds the Holevo information of the ensemble.  We watch the median trace
distance fall as R0 grows.

Run:  python3 demos/covering_decay.py
"""

import numpy as np

from qwiretap import covering_experiment, holevo_chi

if __name__ == "__main__":
    # two pure qubit states with overlap 0.78: Holevo information ~ 0.5 bits
    c = 0.78
    v = np.array([c, np.sqrt(1 - c * c)])
    ensemble = [
        (0.5, np.diag([1.0, 0.0]).astype(complex)),
        (0.5, np.outer(v, v).astype(complex)),
    ]
    chi = holevo_chi(ensemble)
    print(f"ensemble Holevo information: {chi:.4f} bits\n")

    print("n   R0     median distance   (100 trials, seed 7)")
    for n in (4, 6, 8):
        for r0 in (0.25, 0.5, 0.75, 1.0):
            stats = covering_experiment(ensemble, n, r0, trials=100, seed=7)
            marker = "<- above chi" if r0 > chi else ""
            print(f"{n}  {r0:5.2f}   {stats.median:10.4f}       {marker}")
        print()
