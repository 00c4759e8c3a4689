"""Small hand-checkable families used by the tests, demos and CLI bundles.

Every function returns fresh objects. Pairs are returned as ``(F, G)``.
"""

from __future__ import annotations

import numpy as np

from .frames import FrameFamily
from .krein import KreinSpace

__all__ = [
    "weaving_c2_pair",
    "nonweaving_c3_pair",
    "shifted_basis_pair",
    "interleaved_basis_pair",
    "contraction_example",
    "sign_flip_example",
    "j_weaving_r3_pair",
    "weaving_not_j_weaving_c3_pair",
    "all_pairs",
]

R2 = 1 / np.sqrt(2)


def weaving_c2_pair():
    """Weaving pair in ``C^2`` with signature ``(+1, -1)``."""
    sp = KreinSpace((1, -1), "complex")
    F = FrameFamily(sp, [[1, 1], [0, 1], [1, 0]])
    G = FrameFamily(sp, [[-1, -1], [0, -1], [1, 0]])
    return F, G


def nonweaving_c3_pair():
    """Pair in ``C^3``, signature ``(+1, +1, -1)``; weaving fails at the second index.

    Taking the first family only at index 1 leaves no vector with a nonzero
    first coordinate, so ``(1, 0, 0)`` is annihilated by that woven family.
    """
    sp = KreinSpace((1, 1, -1), "complex")
    F = FrameFamily(sp, [[1, 2, 0], [0, np.sqrt(2), 0], [0, 0, 1]])
    G = FrameFamily(sp, [[0, -np.sqrt(2), 0], [-2, 0, 0], [0, 0, 2]])
    return F, G


def _alternating_space(N: int) -> KreinSpace:
    # coordinate i (1-based) carries sign (-1)**i
    return KreinSpace(tuple((-1) ** i for i in range(1, N + 1)), "real")


def shifted_basis_pair(N: int = 8):
    """Truncation to ``R^N`` of ``{e1, 0, e2, e2, e3, e3, ...}`` and ``{e1, e1, e2, e2, ...}``.

    Signature alternates ``(-1, +1, -1, ...)``. Each family has ``2N`` vectors.
    Every coordinate except the first is hit twice by any woven family; the
    first is hit once or twice, so the universal bounds are ``(1, 2)``.
    """
    sp = _alternating_space(N)
    e = np.eye(N)
    F = [e[0], np.zeros(N)] + [e[i] for i in range(1, N) for _ in range(2)]
    G = [e[i] for i in range(N) for _ in range(2)]
    return FrameFamily(sp, F), FrameFamily(sp, G)


def interleaved_basis_pair(N: int = 8):
    """Truncation to ``R^N`` of ``{e1, e2, e1, e2, e3, e3, ...}`` and ``{e1, e1, e2, e2, ...}``."""
    sp = _alternating_space(N)
    e = np.eye(N)
    F = [e[0], e[1], e[0], e[1]] + [e[i] for i in range(2, N) for _ in range(2)]
    G = [e[i] for i in range(N) for _ in range(2)]
    return FrameFamily(sp, F), FrameFamily(sp, G)


def contraction_example():
    """``{(1,0), (0,2)}`` in ``R^2`` (signature ``(+1,-1)``) and ``U = diag(1, 0.8)``.

    Returns ``(F, U)``. ``||I - U|| = 0.2``.
    """
    sp = KreinSpace((1, -1), "real")
    return FrameFamily(sp, [[1, 0], [0, 2]]), np.diag([1.0, 0.8])


def sign_flip_example():
    """``{(1,0), (0,3)}`` in ``R^2`` (signature ``(+1,-1)``) and ``U = diag(-1, 1)``.

    Returns ``(F, U)``. ``||I - U||^2 = 4`` exceeds the frame-bound ratio,
    yet ``F`` and ``UF`` weave.
    """
    sp = KreinSpace((1, -1), "real")
    return FrameFamily(sp, [[1, 0], [0, 3]]), np.diag([-1.0, 1.0])


def j_weaving_r3_pair():
    """J-weaving pair in ``R^3`` with signature ``(+1, -1, +1)``."""
    sp = KreinSpace((1, -1, 1), "real")
    F = FrameFamily(sp, [[1 / 2.16, 0, 0], [0, 0, 2 / 2.17], [0, 1 / 2.18, 0]])
    G = FrameFamily(
        sp,
        [
            [100 * R2, 0, 101 * R2],
            [102 / np.sqrt(3), 0, 103 * R2],
            [0, 1 / 2.19, 0],
        ],
    )
    return F, G


def weaving_not_j_weaving_c3_pair():
    """Weaving pair in ``C^3`` (signature ``(+1, +1, -1)``) that is not J-weaving.

    Weaving the first vector of ``F`` with the second of ``G`` puts
    ``(3, 0, 3/sqrt2)`` and ``(0, 3, 3/sqrt2)`` in the positive span; their sum
    ``(3, 3, 3 sqrt2)`` is neutral.
    """
    sp = KreinSpace((1, 1, -1), "complex")
    F = FrameFamily(sp, [[3, 0, 3 * R2], [0, 2 / np.sqrt(3), 0], [0, 0, 1 / np.sqrt(3)]])
    G = FrameFamily(sp, [[1, 0, 0], [0, 3, 3 * R2], [0, 0, 1]])
    return F, G


def all_pairs() -> dict:
    """Every fixture as a ``name -> (F, G)`` map (operator examples woven with ``UF``)."""
    out = {
        "weaving_c2": weaving_c2_pair(),
        "nonweaving_c3": nonweaving_c3_pair(),
        "shifted_basis": shifted_basis_pair(),
        "interleaved_basis": interleaved_basis_pair(),
        "j_weaving_r3": j_weaving_r3_pair(),
        "weaving_not_j_weaving_c3": weaving_not_j_weaving_c3_pair(),
    }
    for name, (F, U) in (("contraction", contraction_example()), ("sign_flip", sign_flip_example())):
        out[name] = (F, F.mapped(U))
    return out
