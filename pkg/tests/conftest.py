"""Shared generators and brute-force oracles.

The oracles deliberately take a different numerical route from the library:
woven families are assembled index by index in Python, and frame bounds come
from singular values of the explicit coefficient matrix ``k -> ([k, w_n])_n``
rather than from eigenvalues of a summed frame matrix.
"""

import itertools

import numpy as np
import pytest

from kreinweave import FrameFamily, KreinSpace


def coefficient_matrix(W, signs, inner="indefinite"):
    """Rows ``c_n`` with ``c_n . k = [k, w_n]`` (or ``[k, w_n]_J``)."""
    W = np.asarray(W)
    if inner == "j":
        return np.conj(W)
    return np.conj(W) * signs


def oracle_bounds(W, signs, inner="indefinite"):
    if len(W) == 0:
        return 0.0, 0.0
    sv = np.linalg.svd(coefficient_matrix(W, signs, inner), compute_uv=False)
    d = np.asarray(W).shape[1]
    lo = sv[d - 1] ** 2 if len(sv) >= d else 0.0
    return float(lo), float(sv[0] ** 2)


def oracle_weave(F, G, sigma):
    return np.array([F.vectors[n] if n in sigma else G.vectors[n] for n in range(len(F))])


def all_subsets(m):
    for r in range(m + 1):
        yield from (frozenset(c) for c in itertools.combinations(range(m), r))


def oracle_universal(F, G, inner="indefinite", jmap=False):
    """Brute-force universal bounds over all ``2**m`` subsets."""
    s = F.space.signs
    lo, hi = np.inf, 0.0
    for sigma in all_subsets(len(F)):
        W = oracle_weave(F, G, sigma)
        if jmap:
            W = W * s
        a, b = oracle_bounds(W, s, inner)
        lo, hi = min(lo, a), max(hi, b)
    return lo, hi


def random_family(rng, sp, m, complex_=None):
    if complex_ is None:
        complex_ = sp.field == "complex"
    V = rng.standard_normal((m, sp.dim))
    if complex_:
        V = V + 1j * rng.standard_normal((m, sp.dim))
    return FrameFamily(sp, V)


def random_space(rng, dim, field=None):
    if field is None:
        field = "complex" if rng.random() < 0.5 else "real"
    while True:
        sig = tuple(int(x) for x in rng.choice([-1, 1], size=dim))
        if dim == 1 or len(set(sig)) == 2:
            return KreinSpace(sig, field)


def random_weaving_pair(rng, dim, extra=None, floor=1e-3):
    """Generic pair with every woven family a frame (lower bound above ``floor``)."""
    sp = random_space(rng, dim)
    while True:
        m = dim + (int(rng.integers(0, 4)) if extra is None else extra)
        F, G = random_family(rng, sp, m), random_family(rng, sp, m)
        if oracle_universal(F, G)[0] > floor:
            return F, G


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
