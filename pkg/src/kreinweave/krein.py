"""Finite-dimensional Krein spaces in canonical coordinates.

A Krein space here is ``C^d`` (or ``R^d``) with the indefinite form

.. math:: [x, y] = \\sum_i s_i x_i \\overline{y_i},  \\qquad s_i \\in \\{+1, -1\\}

so the fundamental symmetry ``J`` is ``diag(s)`` and the associated Hilbert
space inner product ``[x, y]_J = [x, Jy]`` is the Euclidean one. Vectors are
plain 1-D numpy arrays and operators are square 2-D arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import DimensionError, MismatchError, NotHermitianError

__all__ = [
    "KreinSpace",
    "Tolerances",
    "DEFAULT_TOL",
    "indefinite_inner",
    "j_apply",
    "j_inner",
    "j_norm",
    "hermitian_eig",
    "operator_norm",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical cutoffs shared by every verdict in the package.

    Attributes
    ----------
    rel_psd : float
        An eigenvalue ``lam`` counts as positive when ``lam > rel_psd * scale``
        where ``scale`` is the largest eigenvalue of the same problem.
    rel_eq : float
        Relative tolerance when comparing two bounds for equality / ordering.
    """

    rel_psd: float = 1e-9
    rel_eq: float = 1e-8

    def __post_init__(self):
        for name in ("rel_psd", "rel_eq"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class KreinSpace:
    """``(K^d, [.,.])`` given by a signature vector of +1/-1 entries.

    Parameters
    ----------
    signature : sequence of int
        Sign of each coordinate in the indefinite form.
    field : {"real", "complex"}
        Scalar field. Real spaces reject vectors with imaginary parts.
    """

    signature: tuple[int, ...]
    field: str = "complex"
    _s: np.ndarray = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sig = tuple(int(s) for s in self.signature)
        if not sig:
            raise DimensionError("a Krein space needs dimension >= 1")
        if any(s not in (1, -1) for s in sig):
            raise ValueError(f"signature entries must be +1 or -1, got {self.signature!r}")
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        object.__setattr__(self, "signature", sig)
        s = np.array(sig, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "_s", s)

    @classmethod
    def euclidean(cls, dim: int, field: str = "real") -> "KreinSpace":
        """Definite space: all signs +1, so ``[.,.]`` is the Euclidean product."""
        return cls((1,) * dim, field)

    @property
    def dim(self) -> int:
        return len(self.signature)

    @property
    def p(self) -> int:
        """Number of positive coordinates."""
        return sum(1 for s in self.signature if s > 0)

    @property
    def q(self) -> int:
        """Number of negative coordinates."""
        return self.dim - self.p

    @property
    def signs(self) -> np.ndarray:
        """Signature as a read-only float array."""
        return self._s

    @property
    def J(self) -> np.ndarray:
        """The fundamental symmetry as a dense diagonal matrix."""
        return np.diag(self._s)

    @property
    def dtype(self):
        return np.float64 if self.field == "real" else np.complex128

    def vector(self, entries) -> np.ndarray:
        """Coerce ``entries`` into a vector of this space."""
        x = np.asarray(entries)
        if x.ndim != 1 or x.shape[0] != self.dim:
            raise DimensionError(f"expected a vector of length {self.dim}, got shape {x.shape}")
        if self.field == "real":
            if np.iscomplexobj(x):
                if np.any(x.imag != 0):
                    raise DimensionError("complex entries in a real Krein space")
                x = x.real
            return x.astype(np.float64)
        return x.astype(np.complex128)

    def operator(self, matrix) -> np.ndarray:
        """Coerce ``matrix`` into a square operator on this space."""
        a = np.asarray(matrix)
        if a.shape != (self.dim, self.dim):
            raise DimensionError(f"expected a {self.dim}x{self.dim} operator, got shape {a.shape}")
        if self.field == "real" and not np.iscomplexobj(a):
            return a.astype(np.float64)
        return a.astype(np.complex128)


def _check(x, sp: KreinSpace) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != sp.dim:
        raise DimensionError(f"vector of shape {x.shape} in a space of dimension {sp.dim}")
    return x


def indefinite_inner(x, y, sp: KreinSpace):
    """``[x, y] = sum_i s_i x_i conj(y_i)``; linear in ``x``."""
    x = _check(x, sp)
    y = _check(y, sp)
    return np.sum(sp.signs * x * np.conj(y))


def j_apply(x, sp: KreinSpace) -> np.ndarray:
    """Apply the fundamental symmetry: flip the negative coordinates."""
    return sp.signs * _check(x, sp)


def j_inner(x, y, sp: KreinSpace):
    """Hilbert-space inner product ``[x, Jy]``."""
    return indefinite_inner(x, j_apply(y, sp), sp)


def j_norm(x, sp: KreinSpace) -> float:
    """Norm of the associated Hilbert space (Euclidean in these coordinates)."""
    return float(np.sqrt(max(j_inner(x, x, sp).real, 0.0)))


def hermitian_eig(M, tol: Tolerances = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, V)`` with ``w`` ascending and ``V`` unitary such that
    ``M @ V = V @ diag(w)``. Small anti-Hermitian noise (below
    ``tol.rel_eq * ||M||``) is symmetrized away; anything larger raises
    :class:`NotHermitianError`.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    scale = np.linalg.norm(M)
    skew = np.linalg.norm(M - M.conj().T)
    if skew > tol.rel_eq * max(scale, np.finfo(float).tiny):
        raise NotHermitianError(f"matrix is not Hermitian (||M - M^H|| = {skew:.3e}, ||M|| = {scale:.3e})")
    w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    return w, V


def operator_norm(A) -> float:
    """Largest singular value, i.e. the operator norm for ``||.||_J``."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def random_signature(rng: np.random.Generator, dim: int, indefinite: bool = True) -> tuple[int, ...]:
    """Random +/-1 signature; with ``indefinite`` both signs occur (dim >= 2)."""
    while True:
        sig = tuple(int(s) for s in rng.choice([1, -1], size=dim))
        if not indefinite or dim < 2 or (1 in sig and -1 in sig):
            return sig


def as_index_set(sigma: Sequence[int] | None, m: int) -> frozenset[int]:
    """Validate a 0-based index set against a family of size ``m``."""
    if sigma is None:
        return frozenset()
    out = frozenset(int(i) for i in sigma)
    bad = [i for i in out if not 0 <= i < m]
    if bad:
        raise MismatchError(f"indices {sorted(bad)} outside 0..{m - 1}")
    return out
