"""Several ways of recognising a weaving pair, checked against each other.

* the four formulations ({z_n} or {J z_n}, indefinite form or J-inner product)
  give the same universal bounds;
* the smallest singular value over all woven frame operators sandwiches the
  universal lower bound;
* a perturbation U close enough to the identity makes {z_n}, {U z_n} weave,
  but the condition is only sufficient;
* the projection criterion agrees with the direct frame test subset by subset.

    python3 demos/characterizations.py
"""

from kreinweave import (
    check_equivalences,
    operator_lower_bound_check,
    perturbation_weaving_check,
    projection_characterization_check,
)
from kreinweave import fixtures
from itertools import combinations


def all_subsets(m):
    return [set(c) for r in range(m + 1) for c in combinations(range(m), r)]


def main():
    F, G = fixtures.shifted_basis_pair(8)
    eq = check_equivalences(F, G)
    print("four formulations on the 16-vector truncation in R^8:")
    for key, rep in eq.reports.items():
        print(f"  {key:5} ({rep.universal_lower:.6g}, {rep.universal_upper:.6g})")
    print(f"  agree: {eq.agree}")

    print("\nsingular-value sandwich:")
    for name, (A, B) in fixtures.all_pairs().items():
        r = operator_lower_bound_check(A, B)
        print(
            f"  {name:26} s_min {r.s_min:9.4g} >= lower {r.universal_lower:9.4g}"
            f" >= s_min^2/(b1+b2) {r.implied_lower:9.4g}: {r.holds}"
        )

    print("\nperturbations of the identity:")
    for name, (A, U) in (("contraction", fixtures.contraction_example()), ("sign flip", fixtures.sign_flip_example())):
        r = perturbation_weaving_check(A, U)
        print(
            f"  {name:12} d^2 = {r.distance**2:.3g}, alpha/beta = {r.alpha / r.beta:.3g},"
            f" condition {r.hypothesis_holds}, weaving {r.weaving.is_weaving}"
        )
        if r.predicted_lower is not None:
            print(f"  {'':12} lower bound {r.weaving.universal_lower:.4g} >= guaranteed {r.predicted_lower:.4g}")

    print("\nprojection criterion on the non-weaving C^3 pair:")
    A, B = fixtures.nonweaving_c3_pair()
    for sigma in all_subsets(len(A)):
        r = projection_characterization_check(A, B, sigma)
        print(
            f"  sigma {sorted(sigma)!s:10} complement dim {r.complement_dim}:"
            f" projected frame {r.projected_is_frame!s:5}  woven frame {r.woven_is_frame}"
        )


if __name__ == "__main__":
    main()
