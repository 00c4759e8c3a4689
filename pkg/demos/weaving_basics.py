"""Frame bounds and weaving in a small Krein space.

Builds two families in C^2 with signature (+1, -1), computes their frame
bounds under the indefinite form, and checks every one of the 2**3 woven
families. Then repeats the check for a pair in C^3 where one woven family
misses a direction, and prints that direction.

    python3 demos/weaving_basics.py
"""

import numpy as np

from kreinweave import frame_bounds, universal_bounds, weave
from kreinweave import fixtures


def show(title, F, G):
    print(f"\n== {title}")
    for name, fam in (("F", F), ("G", G)):
        fb = frame_bounds(fam)
        print(f"{name}: bounds ({fb.lower:.4g}, {fb.upper:.4g})")
    rep = universal_bounds(F, G, table=True)
    for sigma, lo, hi in rep.per_subset:
        print(f"  sigma = {sorted(sigma)!s:10} lower {lo:8.4g}  upper {hi:8.4g}")
    verdict = "weaving" if rep.is_weaving else "not weaving"
    print(f"universal bounds ({rep.universal_lower:.4g}, {rep.universal_upper:.4g}): {verdict}")
    if not rep.is_weaving:
        W = weave(F, G, rep.worst_subset)
        k = rep.witness
        coef = np.conj(W.vectors) @ (F.space.signs * k)
        print(f"worst subset {sorted(rep.worst_subset)} (0-based); witness {np.round(k, 6)}")
        print(f"  every coefficient [k, w_n] vanishes: {np.round(np.abs(coef), 12)}")


if __name__ == "__main__":
    show("weaving pair in C^2", *fixtures.weaving_c2_pair())
    show("non-weaving pair in C^3", *fixtures.nonweaving_c3_pair())
