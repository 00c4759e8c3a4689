"""J-frames and J-weaving.

A family is split by the sign of ``[z_n, z_n]`` (neutral vectors count as
positive). It is a J-frame when the span of the positive part is a maximal
uniformly J-positive subspace and the span of the negative part is a maximal
uniformly J-negative one. In finite dimensions "maximal" is decided by
comparing the subspace dimension with the signature counts ``p`` and ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DegenerateSubspaceError
from .frames import FrameFamily
from .krein import DEFAULT_TOL, KreinSpace, Tolerances, as_index_set, hermitian_eig
from .weaving import SubsetSpec, _common_space, _lex_first, subset_masks, weave

__all__ = [
    "SignPartition",
    "DefinitenessReport",
    "JFrameReport",
    "JWeavingReport",
    "TwoSidedBounds",
    "sign_partition",
    "uniformly_definite",
    "is_j_frame",
    "is_j_weaving",
    "two_sided_bounds",
    "two_sided_sweep",
]


@dataclass(frozen=True)
class SignPartition:
    plus: frozenset
    minus: frozenset

    def to_dict(self) -> dict:
        return {"plus": sorted(self.plus), "minus": sorted(self.minus)}


@dataclass
class DefinitenessReport:
    """How definite ``[.,.]`` is on a subspace.

    ``margin`` is the extremal eigenvalue of the form compressed to a
    J-orthonormal basis: the smallest for ``sign=+1``, the largest for
    ``sign=-1``. So ``sign * margin`` is the best constant ``c`` with
    ``sign * [v, v] >= c ||v||_J^2`` on the subspace. ``extremal_vector``
    attains it (a neutral vector when the margin is ~0).
    """

    sign: int
    dim: int
    margin: float
    uniformly_definite: bool
    maximal: bool
    extremal_vector: np.ndarray | None = field(default=None, repr=False)

    @property
    def maximal_definite(self) -> bool:
        return self.uniformly_definite and self.maximal

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "dim": self.dim,
            "margin": self.margin,
            "uniformly_definite": self.uniformly_definite,
            "maximal": self.maximal,
            "extremal_vector": self.extremal_vector,
        }


@dataclass
class JFrameReport:
    partition: SignPartition
    plus: DefinitenessReport
    minus: DefinitenessReport

    @property
    def is_j_frame(self) -> bool:
        return self.plus.maximal_definite and self.minus.maximal_definite

    def to_dict(self) -> dict:
        return {
            "is_j_frame": self.is_j_frame,
            "partition": self.partition.to_dict(),
            "plus": self.plus.to_dict(),
            "minus": self.minus.to_dict(),
        }


@dataclass(frozen=True)
class TwoSidedBounds:
    """Constants with ``alpha [k,k] <= sum |[k, w_n]|^2 <= beta [k,k]`` on each signed span.

    A side is ``None`` when its span is the zero subspace and the signature
    has no coordinates of that sign (nothing to bound).
    """

    alpha_plus: float | None
    beta_plus: float | None
    alpha_minus: float | None
    beta_minus: float | None
    dim_plus: int
    dim_minus: int

    @property
    def ordered(self) -> bool:
        """``beta_- <= alpha_- < 0 < alpha_+ <= beta_+`` on the sides present."""
        ok = True
        if self.alpha_plus is not None:
            ok &= 0 < self.alpha_plus <= self.beta_plus
        if self.alpha_minus is not None:
            ok &= self.beta_minus <= self.alpha_minus < 0
        return bool(ok)

    def to_dict(self) -> dict:
        return {
            "alpha_plus": self.alpha_plus,
            "beta_plus": self.beta_plus,
            "alpha_minus": self.alpha_minus,
            "beta_minus": self.beta_minus,
            "dim_plus": self.dim_plus,
            "dim_minus": self.dim_minus,
            "ordered": self.ordered,
        }


def sign_partition(F: FrameFamily, tol: Tolerances = DEFAULT_TOL) -> SignPartition:
    """Split indices by the sign of ``[z_n, z_n]``.

    Values within ``tol.rel_eq * ||z_n||^2`` of zero are treated as neutral
    and go to the positive side, as do zero vectors.
    """
    V = F.vectors
    self_ip = np.einsum("ni,i,ni->n", V, F.space.signs, np.conj(V)).real
    sq = np.einsum("ni,ni->n", V, np.conj(V)).real
    plus = frozenset(int(i) for i in np.flatnonzero(self_ip >= -tol.rel_eq * sq))
    return SignPartition(plus, frozenset(range(len(F))) - plus)


def _basis(vectors: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Orthonormal basis (columns) of the span of the rows of ``vectors``."""
    if vectors.shape[0] == 0:
        return np.zeros((vectors.shape[1], 0))
    U, s, _ = np.linalg.svd(vectors.T, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((vectors.shape[1], 0))
    rank = int(np.sum(s**2 > tol.rel_psd * s[0] ** 2))
    return U[:, :rank]


def _target_dim(sp: KreinSpace, sign: int) -> int:
    return sp.p if sign > 0 else sp.q


def uniformly_definite(vectors, sign: int, sp: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> DefinitenessReport:
    """Is ``span(vectors)`` uniformly J-positive (``sign=+1``) or J-negative (``-1``)?

    Raises
    ------
    DegenerateSubspaceError
        If the vectors span only the zero subspace.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    V = np.atleast_2d(np.asarray(vectors))
    B = _basis(V, tol)
    if B.shape[1] == 0:
        raise DegenerateSubspaceError("vectors span the zero subspace")
    A = B.conj().T @ (sp.signs[:, None] * B)
    w, X = hermitian_eig(A, tol)
    j = 0 if sign > 0 else -1
    margin = float(w[j])
    return DefinitenessReport(
        sign=sign,
        dim=B.shape[1],
        margin=margin,
        uniformly_definite=bool(sign * margin > tol.rel_psd),
        maximal=B.shape[1] == _target_dim(sp, sign),
        extremal_vector=B @ X[:, j],
    )


def _side(F: FrameFamily, idx: frozenset, sign: int, tol: Tolerances) -> DefinitenessReport:
    V = F.vectors[sorted(idx)]
    if V.shape[0] == 0 or _basis(V, tol).shape[1] == 0:
        # zero subspace: vacuously definite, maximal only if no coordinates of this sign
        return DefinitenessReport(sign, 0, float(sign), True, _target_dim(F.space, sign) == 0, None)
    return uniformly_definite(V, sign, F.space, tol)


def is_j_frame(F: FrameFamily, tol: Tolerances = DEFAULT_TOL) -> JFrameReport:
    part = sign_partition(F, tol)
    return JFrameReport(part, _side(F, part.plus, 1, tol), _side(F, part.minus, -1, tol))


@dataclass
class JWeavingReport:
    """J-frame verdicts over the examined woven families.

    ``failing_subset`` is the lexicographically smallest subset whose woven
    family is not a J-frame, with its report in ``failing_report``.
    """

    is_j_weaving: bool
    exhaustive: bool
    n_subsets: int
    n_failing: int
    failing_subset: frozenset | None
    failing_report: JFrameReport | None
    per_subset: list | None = field(default=None, repr=False)

    @property
    def certified(self) -> bool:
        return self.exhaustive or not self.is_j_weaving

    def to_dict(self) -> dict:
        d = {
            "is_j_weaving": self.is_j_weaving,
            "certified": self.certified,
            "exhaustive": self.exhaustive,
            "n_subsets": self.n_subsets,
            "n_failing": self.n_failing,
            "failing_subset": None if self.failing_subset is None else sorted(self.failing_subset),
            "failing_report": None if self.failing_report is None else self.failing_report.to_dict(),
        }
        if self.per_subset is not None:
            d["per_subset"] = [{"sigma": sorted(s), **r} for s, r in self.per_subset]
        return d


def _differ(F: FrameFamily, G: FrameFamily) -> np.ndarray:
    # subsets that agree on these indices give the same woven family
    return np.any(F.vectors != G.vectors, axis=1)


def _masks(F: FrameFamily, G: FrameFamily, spec: SubsetSpec | None, tol: Tolerances):
    m = len(F)
    if spec is None:
        spec = SubsetSpec.auto(m)
    battery = []
    if spec.mode == "sampled":
        for fam in (F, G):
            p = sign_partition(fam, tol)
            battery += [p.plus, p.minus]
    masks = np.concatenate(list(subset_masks(spec, battery)))
    return spec, masks


def is_j_weaving(
    F: FrameFamily,
    G: FrameFamily,
    spec: SubsetSpec | None = None,
    tol: Tolerances = DEFAULT_TOL,
    bounds: bool = False,
) -> JWeavingReport:
    """Every examined woven family must be a J-frame.

    With ``bounds=True`` a per-subset table with the J-frame verdict and the
    :func:`two_sided_bounds` result (or the degeneracy message) is attached.
    """
    _common_space(F, G)
    spec, masks = _masks(F, G, spec, tol)
    differ = _differ(F, G)
    cache = {}
    failing, first = [], {}
    rows = [] if bounds else None
    for row in masks:
        sigma = frozenset(np.flatnonzero(row).tolist())
        key = (row & differ).tobytes()
        if key not in cache:
            rep = is_j_frame(weave(F, G, sigma), tol)
            entry = {"is_j_frame": rep.is_j_frame}
            if bounds:
                try:
                    entry["two_sided"] = two_sided_bounds(F, G, sigma, tol).to_dict()
                except DegenerateSubspaceError as exc:
                    entry["two_sided"] = {"error": str(exc)}
            cache[key] = (rep, entry)
        rep, entry = cache[key]
        if not rep.is_j_frame:
            failing.append(row)
            first[sigma] = rep
        if bounds:
            rows.append((sigma, dict(entry)))
    bad = _lex_first(np.array(failing)) if failing else None
    return JWeavingReport(
        is_j_weaving=not failing,
        exhaustive=spec.is_exhaustive,
        n_subsets=int(masks.shape[0]),
        n_failing=len(failing),
        failing_subset=bad,
        failing_report=first.get(bad),
        per_subset=rows,
    )


def _ratio_extremes(W: np.ndarray, sign: int, sp: KreinSpace, tol: Tolerances):
    """Stationary values of ``sum_n |[k, w_n]|^2 / [k, k]`` on ``span(W)``."""
    B = _basis(W, tol)
    A = B.conj().T @ (sp.signs[:, None] * B)
    wa = np.linalg.eigvalsh(0.5 * (A + A.conj().T))
    if np.min(np.abs(wa)) <= tol.rel_psd * max(np.max(np.abs(wa)), np.finfo(float).tiny):
        kind = "positive" if sign > 0 else "negative"
        raise DegenerateSubspaceError(
            f"the {kind}-sign span (dim {B.shape[1]}) is degenerate: the form has a neutral direction there"
        )
    C = W.conj() * sp.signs  # rows: coefficient functionals k -> [k, w_n]
    CB = C @ B
    N = CB.conj().T @ CB
    try:
        mu = scipy.linalg.eigh(0.5 * (A + A.conj().T), 0.5 * (N + N.conj().T), eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSubspaceError(f"coefficient form is singular on the span: {exc}") from None
    lam = np.sort(1.0 / mu)
    return B.shape[1], lam


def two_sided_bounds(F: FrameFamily, G: FrameFamily, sigma, tol: Tolerances = DEFAULT_TOL) -> TwoSidedBounds:
    """Indefinite two-sided bounds for the woven family of ``sigma``.

    On the span of the positive (resp. negative) woven vectors solves the
    Hermitian pencil for ``sum |[k, w_n]|^2 / [k, k]`` over those vectors.
    On the positive side ``alpha_+``/``beta_+`` are the smallest/largest
    stationary values; on the negative side ``alpha_-`` is the one closest to
    zero and ``beta_-`` the most negative, so that
    ``alpha_- [k,k] <= sum <= beta_- [k,k]`` with both sides nonnegative.

    Raises
    ------
    DegenerateSubspaceError
        If either signed span is degenerate for ``[.,.]`` or is the zero
        subspace while the signature has coordinates of that sign.
    """
    sp = _common_space(F, G)
    W = weave(F, G, as_index_set(sigma, len(F)))
    part = sign_partition(W, tol)
    out = {}
    for sign, idx in ((1, part.plus), (-1, part.minus)):
        V = W.vectors[sorted(idx)]
        if V.shape[0] == 0 or _basis(V, tol).shape[1] == 0:
            if _target_dim(sp, sign) == 0:
                out[sign] = (0, None, None)
                continue
            kind = "positive" if sign > 0 else "negative"
            raise DegenerateSubspaceError(f"no {kind}-sign vectors: the {kind} span is the zero subspace")
        dim, lam = _ratio_extremes(V, sign, sp, tol)
        if sign > 0:
            out[sign] = (dim, float(lam[0]), float(lam[-1]))
        else:
            out[sign] = (dim, float(lam[-1]), float(lam[0]))
    (dp, ap, bp), (dm, am, bm) = out[1], out[-1]
    return TwoSidedBounds(ap, bp, am, bm, dp, dm)


@dataclass
class TwoSidedSweep:
    """Outcome of :func:`two_sided_bounds` over every examined subset."""

    all_ordered: bool
    n_subsets: int
    failing_subset: frozenset | None
    failure: str | None
    exhaustive: bool

    def to_dict(self) -> dict:
        return {
            "all_ordered": self.all_ordered,
            "n_subsets": self.n_subsets,
            "failing_subset": None if self.failing_subset is None else sorted(self.failing_subset),
            "failure": self.failure,
            "exhaustive": self.exhaustive,
        }


def two_sided_sweep(
    F: FrameFamily, G: FrameFamily, spec: SubsetSpec | None = None, tol: Tolerances = DEFAULT_TOL
) -> TwoSidedSweep:
    """True iff :func:`two_sided_bounds` succeeds with ordered constants for every subset."""
    _common_space(F, G)
    spec, masks = _masks(F, G, spec, tol)
    differ = _differ(F, G)
    cache = {}
    bad_rows, reasons = [], {}
    for row in masks:
        sigma = frozenset(np.flatnonzero(row).tolist())
        key = (row & differ).tobytes()
        if key not in cache:
            try:
                b = two_sided_bounds(F, G, sigma, tol)
                cache[key] = None if b.ordered else f"constants out of order: {b.to_dict()}"
            except DegenerateSubspaceError as exc:
                cache[key] = str(exc)
        reason = cache[key]
        if reason is not None:
            bad_rows.append(row)
            reasons[sigma] = reason
    bad = _lex_first(np.array(bad_rows)) if bad_rows else None
    return TwoSidedSweep(not bad_rows, int(masks.shape[0]), bad, reasons.get(bad), spec.is_exhaustive)
