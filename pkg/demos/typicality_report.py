"""Typical projector property report at desk-scale blocklengths.

The projector onto delta-typical eigenvector sequences of rho^{(x) n} obeys
exact dimension and lower-sandwich bounds under the one-sided typicality
convention used throughout this package; the complementary bounds are
asymptotic and checked in measured-exponent form with a type-counting slack.

Run:  python3 demos/typicality_report.py
"""

import numpy as np

from qwiretap import (
    LabeledOperator,
    Register,
    typical_projector,
    typical_set,
    verify_projector_properties,
)

if __name__ == "__main__":
    rho = LabeledOperator((Register("q", 2),), np.diag([0.9, 0.1]).astype(complex), "state")
    print("state: diag(0.9, 0.1)\n")
    for n in (4, 7, 10):
        for delta in (0.2, 0.5):
            rep = verify_projector_properties(rho, n, delta)
            tp = typical_projector(rho, n, delta)
            size = len(typical_set([0.9, 0.1], n, delta))
            print(f"n={n:2d} delta={delta}: rank={tp.rank} (= set size {size}), "
                  f"small_n={rep.small_n}")
            for c in rep.checks:
                print(f"    {c.name:16s} measured={c.measured:12.6g} "
                      f"bound={c.bound:12.6g} {'ok' if c.passed else 'VIOLATED'}")
            print()
