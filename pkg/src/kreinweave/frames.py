"""Finite frame families in a Krein space.

A family of ``m`` vectors is stored row-wise as an ``(m, d)`` array ``V``;
the synthesis matrix of the usual notation is ``Z = V.T``. With
``D = diag(signature)``:

* analysis coefficients  ``c = conj(V) D k``            (``c_n = [k, z_n]``)
* frame operator         ``S = Z Z^H D``                (J-self-adjoint)
* bound matrix           ``M = D Z Z^H D``              (Hermitian PSD)

``sum_n |[k, z_n]|^2 = k^H M k`` and ``||k||_J^2 = k^H k``, so the optimal
frame bounds are the extremal eigenvalues of ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, EmptyFamilyError
from .krein import DEFAULT_TOL, KreinSpace, Tolerances, hermitian_eig

__all__ = [
    "FrameFamily",
    "FrameBounds",
    "analysis_matrix",
    "analysis_coefficients",
    "frame_operator",
    "bound_matrix",
    "frame_bounds",
    "gramian",
    "is_frame",
]

INNER_PRODUCTS = ("indefinite", "j")


class FrameFamily:
    """Ordered, immutable list of vectors in a :class:`KreinSpace`.

    Zero vectors are allowed. ``labels`` is an optional name per vector.
    """

    __slots__ = ("space", "vectors", "labels")

    def __init__(self, space: KreinSpace, vectors, labels: Sequence[str] | None = None):
        V = np.asarray(vectors)
        if V.ndim == 1 and V.size == 0:
            V = V.reshape(0, space.dim)
        if V.ndim != 2 or V.shape[1] != space.dim:
            raise DimensionError(f"family of shape {V.shape} in a space of dimension {space.dim}")
        V = np.array([space.vector(v) for v in V], dtype=space.dtype).reshape(V.shape[0], space.dim)
        V.setflags(write=False)
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != V.shape[0]:
                raise DimensionError(f"{len(labels)} labels for {V.shape[0]} vectors")
        self.space = space
        self.vectors = V
        self.labels = labels

    def __len__(self):
        return self.vectors.shape[0]

    def __getitem__(self, n):
        return self.vectors[n]

    def __iter__(self):
        return iter(self.vectors)

    def __repr__(self):
        return f"FrameFamily(m={len(self)}, signature={self.space.signature})"

    def __eq__(self, other):
        return (
            isinstance(other, FrameFamily)
            and self.space == other.space
            and np.array_equal(self.vectors, other.vectors)
        )

    __hash__ = None

    @property
    def synthesis(self) -> np.ndarray:
        """Synthesis matrix ``Z`` (vectors as columns)."""
        return self.vectors.T

    def j_image(self) -> "FrameFamily":
        """The family ``{J z_n}``."""
        return FrameFamily(self.space, self.vectors * self.space.signs, self.labels)

    def mapped(self, U) -> "FrameFamily":
        """The family ``{U z_n}`` for a square operator ``U``."""
        U = np.asarray(U)
        if U.shape != (self.space.dim, self.space.dim):
            raise DimensionError(f"operator of shape {U.shape} on a space of dimension {self.space.dim}")
        sp = self.space
        if sp.field == "real" and np.iscomplexobj(U) and np.any(U.imag != 0):
            sp = KreinSpace(sp.signature, "complex")
        return FrameFamily(sp, self.vectors @ U.T, self.labels)

    def scaled(self, c: float) -> "FrameFamily":
        return FrameFamily(self.space, c * self.vectors, self.labels)


@dataclass(frozen=True)
class FrameBounds:
    """Optimal lower/upper frame bounds and the frame verdict."""

    lower: float
    upper: float
    is_frame: bool


def analysis_matrix(F: FrameFamily, inner: str = "indefinite") -> np.ndarray:
    """Matrix ``A`` with ``A @ k`` = analysis coefficients of ``k``.

    ``inner="indefinite"`` gives ``[k, z_n]``; ``inner="j"`` gives ``[k, z_n]_J``.
    """
    if inner == "indefinite":
        return np.conj(F.vectors) * F.space.signs
    if inner == "j":
        return np.conj(F.vectors)
    raise ValueError(f"inner must be one of {INNER_PRODUCTS}, got {inner!r}")


def analysis_coefficients(F: FrameFamily, k) -> np.ndarray:
    """``([k, z_1], ..., [k, z_m])``."""
    k = np.asarray(k)
    if k.shape != (F.space.dim,):
        raise DimensionError(f"vector of shape {k.shape} in a space of dimension {F.space.dim}")
    return analysis_matrix(F) @ k


def frame_operator(F: FrameFamily) -> np.ndarray:
    """``S k = sum_n [k, z_n] z_n``, i.e. ``S = Z Z^H D``."""
    Z = F.synthesis
    return (Z @ Z.conj().T) * F.space.signs


def bound_matrix(F: FrameFamily, inner: str = "indefinite") -> np.ndarray:
    """Hermitian ``M`` with ``k^H M k = sum_n |coef_n(k)|^2``."""
    A = analysis_matrix(F, inner)
    return A.conj().T @ A


def frame_bounds(F: FrameFamily, inner: str = "indefinite", tol: Tolerances = DEFAULT_TOL) -> FrameBounds:
    """Tightest ``alpha, beta`` with ``alpha ||k||_J^2 <= sum |coef|^2 <= beta ||k||_J^2``."""
    if len(F) == 0:
        return FrameBounds(0.0, 0.0, False)
    w, _ = hermitian_eig(bound_matrix(F, inner), tol)
    lo, hi = max(float(w[0]), 0.0), max(float(w[-1]), 0.0)
    return FrameBounds(lo, hi, bool(lo > tol.rel_psd * hi))


def gramian(F: FrameFamily, inner: str = "indefinite") -> np.ndarray:
    """``G[m, n] = [z_m, z_n]`` (or ``[z_m, z_n]_J`` for ``inner="j"``)."""
    V = F.vectors
    if inner == "indefinite":
        return (V * F.space.signs) @ V.conj().T
    if inner == "j":
        return V @ V.conj().T
    raise ValueError(f"inner must be one of {INNER_PRODUCTS}, got {inner!r}")


def is_frame(F: FrameFamily, tol: Tolerances = DEFAULT_TOL):
    """Frame verdict with a witness.

    Returns
    -------
    ok : bool
    witness : ndarray or None
        Unit vector along the smallest eigenvalue of the bound matrix when
        ``ok`` is false: the direction the family (nearly) misses.
    """
    if len(F) == 0:
        raise EmptyFamilyError("frame family has no vectors")
    w, V = hermitian_eig(bound_matrix(F), tol)
    ok = bool(w[0] > tol.rel_psd * max(w[-1], 0.0))
    return ok, (None if ok else V[:, 0])
