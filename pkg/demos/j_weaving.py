"""J-frames: definiteness of the signed spans, and where weaving is not enough.

A J-frame needs the span of its positive vectors to be a maximal uniformly
positive subspace (and likewise for the negative vectors). The first pair
keeps that property under every weave. The second pair weaves as ordinary
frames, yet one weave puts a neutral vector into the positive span.

    python3 demos/j_weaving.py
"""

import numpy as np

from kreinweave import indefinite_inner, is_j_weaving, two_sided_bounds, universal_bounds
from kreinweave import fixtures


def report(title, F, G):
    print(f"\n== {title}")
    print(f"weaving: {universal_bounds(F, G).is_weaving}")
    rep = is_j_weaving(F, G, bounds=True)
    print(f"J-weaving: {rep.is_j_weaving} ({rep.n_failing} of {rep.n_subsets} weaves fail)")
    for sigma, entry in rep.per_subset:
        ts = entry["two_sided"]
        if "error" in ts:
            print(f"  sigma {sorted(sigma)!s:10} {ts['error']}")
        else:
            print(
                f"  sigma {sorted(sigma)!s:10} alpha+ {ts['alpha_plus']:9.4g} beta+ {ts['beta_plus']:9.4g}"
                f"  alpha- {ts['alpha_minus']:9.4g} beta- {ts['beta_minus']:9.4g}"
            )
    if rep.failing_report is not None:
        side = rep.failing_report.plus
        v = side.extremal_vector
        v = v / v[np.argmax(np.abs(v))]
        print(f"first failing weave {sorted(rep.failing_subset)}: positive-span margin {side.margin:.2e}")
        print(f"  neutral direction {np.round(v, 6)}, [v, v] = {indefinite_inner(v, v, F.space).real:.2e}")


if __name__ == "__main__":
    report("J-weaving pair in R^3", *fixtures.j_weaving_r3_pair())
    report("weaving but not J-weaving pair in C^3", *fixtures.weaving_not_j_weaving_c3_pair())
    F, G = fixtures.j_weaving_r3_pair()
    print("\ntwo-sided bounds of the full first family:", two_sided_bounds(F, G, {0, 1, 2}))
