"""Weaving of two frame families.

For families ``F = {z_n}`` and ``G = {z'_n}`` of equal size ``m`` and a subset
``sigma`` of ``{0, ..., m-1}``, the woven family takes ``z_n`` for ``n`` in
``sigma`` and ``z'_n`` otherwise. The pair is weaving when every woven family
is a frame with bounds that are uniform in ``sigma``.

Subsets are handled as boolean masks of shape ``(count, m)``. The bound
matrix of a woven family is the sum of per-vector rank-one terms, so a whole
batch of subsets costs one matrix product plus one batched Hermitian
eigenvalue call.

Indices are 0-based throughout the library.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import MismatchError, NotAFrameError, SubsetBudgetError
from .frames import (
    FrameFamily,
    analysis_matrix,
    frame_bounds,
    frame_operator,
    is_frame,
)
from .krein import DEFAULT_TOL, KreinSpace, Tolerances, as_index_set, hermitian_eig, operator_norm

__all__ = [
    "MAX_EXHAUSTIVE",
    "SubsetSpec",
    "WeavingReport",
    "weave",
    "subset_masks",
    "universal_bounds",
    "check_equivalences",
    "operator_lower_bound_check",
    "perturbation_weaving_check",
    "inverse_operator_weaving_check",
    "projection_characterization_check",
]

MAX_EXHAUSTIVE = 20
_CHUNK = 1 << 14


@dataclass(frozen=True)
class SubsetSpec:
    """Which subsets ``sigma`` to examine.

    Use the constructors :meth:`exhaustive`, :meth:`sampled` and
    :meth:`explicit` rather than the raw initializer.
    """

    m: int
    mode: str = "exhaustive"
    count: int = 0
    seed: int | None = None
    sets: tuple[frozenset, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("subset spec needs m >= 1")
        if self.mode == "exhaustive":
            if self.m > MAX_EXHAUSTIVE:
                raise SubsetBudgetError(
                    f"exhaustive enumeration limited to m <= {MAX_EXHAUSTIVE} (got m = {self.m}); use sampled mode"
                )
        elif self.mode == "sampled":
            if self.count < 1:
                raise ValueError("sampled mode needs count >= 1")
            if self.seed is None:
                raise ValueError("sampled mode needs a seed")
        elif self.mode == "explicit":
            if not self.sets:
                raise ValueError("explicit mode needs at least one subset")
            object.__setattr__(self, "sets", tuple(as_index_set(s, self.m) for s in self.sets))
        else:
            raise ValueError(f"unknown subset mode {self.mode!r}")

    @classmethod
    def exhaustive(cls, m: int) -> "SubsetSpec":
        return cls(m, "exhaustive")

    @classmethod
    def sampled(cls, m: int, count: int, seed: int | None = None) -> "SubsetSpec":
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % (1 << 63))
        return cls(m, "sampled", count=count, seed=int(seed))

    @classmethod
    def explicit(cls, m: int, sets: Iterable[Iterable[int]]) -> "SubsetSpec":
        return cls(m, "explicit", sets=tuple(frozenset(s) for s in sets))

    @classmethod
    def auto(cls, m: int, count: int = 4096, seed: int | None = None) -> "SubsetSpec":
        """Exhaustive when affordable, sampled otherwise."""
        return cls.exhaustive(m) if m <= MAX_EXHAUSTIVE else cls.sampled(m, count, seed)

    @property
    def is_exhaustive(self) -> bool:
        return self.mode == "exhaustive"


@dataclass
class WeavingReport:
    """Universal bounds of a pair of families over the examined subsets.

    ``is_weaving`` is a certificate when ``exhaustive`` is true. In sampled
    mode a false verdict is still a certificate (``worst_subset`` is a bad
    subset) while a true verdict only means "not refuted".
    """

    universal_lower: float
    universal_upper: float
    is_weaving: bool
    worst_subset: frozenset
    witness: np.ndarray
    exhaustive: bool
    n_subsets: int
    inner: str = "indefinite"
    per_subset: list | None = field(default=None, repr=False)

    @property
    def certified(self) -> bool:
        """True when the verdict is a proof, not just evidence."""
        return self.exhaustive or not self.is_weaving

    def to_dict(self) -> dict:
        d = {
            "universal_lower": self.universal_lower,
            "universal_upper": self.universal_upper,
            "is_weaving": self.is_weaving,
            "certified": self.certified,
            "exhaustive": self.exhaustive,
            "n_subsets": self.n_subsets,
            "inner": self.inner,
            "worst_subset": sorted(self.worst_subset),
            "witness": self.witness,
        }
        if self.per_subset is not None:
            d["per_subset"] = [
                {"sigma": sorted(s), "lower": a, "upper": b} for s, a, b in self.per_subset
            ]
        return d


def _common_space(F: FrameFamily, G: FrameFamily) -> KreinSpace:
    if F.space.signature != G.space.signature:
        raise MismatchError(f"families live in different spaces: {F.space.signature} vs {G.space.signature}")
    if len(F) != len(G):
        raise MismatchError(f"families have different sizes: {len(F)} vs {len(G)}")
    if len(F) == 0:
        raise MismatchError("families are empty")
    if F.space.field == G.space.field:
        return F.space
    return KreinSpace(F.space.signature, "complex")


def weave(F: FrameFamily, G: FrameFamily, sigma: Iterable[int]) -> FrameFamily:
    """Family whose ``n``-th vector is ``F[n]`` if ``n`` in ``sigma`` else ``G[n]``."""
    sp = _common_space(F, G)
    s = as_index_set(sigma, len(F))
    mask = np.zeros(len(F), dtype=bool)
    mask[list(s)] = True
    V = np.where(mask[:, None], F.vectors, G.vectors)
    labels = None
    if F.labels is not None and G.labels is not None:
        labels = [a if t else b for a, b, t in zip(F.labels, G.labels, mask)]
    return FrameFamily(sp, V, labels)


def _mask_of(sigma: Iterable[int], m: int) -> np.ndarray:
    mask = np.zeros(m, dtype=bool)
    mask[list(as_index_set(sigma, m))] = True
    return mask


def _sign_classes(F: FrameFamily) -> tuple[frozenset, frozenset]:
    self_ip = np.einsum("ni,i,ni->n", F.vectors, F.space.signs, np.conj(F.vectors)).real
    plus = frozenset(int(i) for i in np.flatnonzero(self_ip >= 0))
    return plus, frozenset(range(len(F))) - plus


def _battery(m: int, extra: Sequence[frozenset] = ()) -> np.ndarray:
    eye = np.eye(m, dtype=bool)
    rows = [np.zeros((1, m), bool), np.ones((1, m), bool), eye, ~eye]
    for s in extra:
        rows.append(_mask_of(s, m)[None, :])
    return np.concatenate(rows)


def subset_masks(spec: SubsetSpec, battery: Sequence[frozenset] = (), chunk: int = _CHUNK) -> Iterator[np.ndarray]:
    """Yield the subsets of ``spec`` as boolean mask batches.

    Exhaustive mode walks the integers ``0 .. 2**m - 1`` with bit ``n`` set
    iff ``n`` is in the subset. Sampled mode first yields a fixed battery
    (empty set, full set, singletons, co-singletons, and ``battery``) and then
    ``count`` uniform subsets drawn from a Philox stream keyed by the seed.
    """
    m = spec.m
    if spec.mode == "exhaustive":
        bits = np.arange(m)
        total = 1 << m
        for start in range(0, total, chunk):
            ints = np.arange(start, min(start + chunk, total), dtype=np.int64)
            yield ((ints[:, None] >> bits) & 1).astype(bool)
    elif spec.mode == "explicit":
        yield np.array([_mask_of(s, m) for s in spec.sets])
    else:
        yield _battery(m, battery)
        rng = np.random.Generator(np.random.Philox(key=spec.seed))
        left = spec.count
        while left > 0:
            n = min(left, chunk)
            yield rng.integers(0, 2, size=(n, m)).astype(bool)
            left -= n


def _rank_one_terms(A: np.ndarray) -> np.ndarray:
    """``(m, d*d)`` array whose row ``n`` is ``a_n^H a_n`` flattened."""
    m, d = A.shape
    return np.einsum("ni,nj->nij", np.conj(A), A).reshape(m, d * d)


def _n_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("KW_THREADS")
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


def _scan(RF, RG, d, masks: Iterable[np.ndarray], reducer, workers=None):
    """Apply ``reducer`` to the batched woven matrices of every mask batch.

    Returns the concatenated masks and the two per-subset arrays produced by
    ``reducer``. Results do not depend on the number of workers.
    """
    base = RG.sum(axis=0)
    diff = RF - RG

    def one(batch):
        M = (base + batch.astype(diff.dtype) @ diff).reshape(-1, d, d)
        lo, hi = reducer(M)
        return batch, lo, hi

    nw = _n_workers(workers)
    if nw == 1:
        parts = [one(b) for b in masks]
    else:
        with ThreadPoolExecutor(nw) as ex:
            parts = list(ex.map(one, masks))
    allm = np.concatenate([p[0] for p in parts])
    lo = np.concatenate([p[1] for p in parts])
    hi = np.concatenate([p[2] for p in parts])
    return allm, lo, hi


def _eig_extremes(M):
    w = np.linalg.eigvalsh(M)
    return w[:, 0], w[:, -1]


def _lex_first(masks: np.ndarray) -> frozenset:
    """Lexicographically smallest subset (as a sorted index tuple)."""
    best = min(tuple(np.flatnonzero(row).tolist()) for row in masks)
    return frozenset(best)


def _ge(a: float, b: float, rel: float) -> bool:
    """``a >= b`` up to a relative tolerance."""
    return a >= b - rel * max(abs(a), abs(b))


def universal_bounds(
    F: FrameFamily,
    G: FrameFamily,
    spec: SubsetSpec | None = None,
    inner: str = "indefinite",
    tol: Tolerances = DEFAULT_TOL,
    table: bool = False,
    workers: int | None = None,
) -> WeavingReport:
    """Universal weaving bounds of ``(F, G)`` over the subsets of ``spec``.

    ``universal_lower`` is the minimum over examined ``sigma`` of the lower
    frame bound of ``weave(F, G, sigma)``, ``universal_upper`` the maximum of
    the upper bounds. Among near-minimizers (within ``tol.rel_eq`` of the
    scale) the lexicographically smallest subset is reported, together with
    the eigenvector that attains its lower bound.
    """
    sp = _common_space(F, G)
    m, d = len(F), sp.dim
    if spec is None:
        spec = SubsetSpec.auto(m)
    if spec.m != m:
        raise MismatchError(f"subset spec is for m = {spec.m}, families have m = {m}")
    RF = _rank_one_terms(analysis_matrix(F, inner))
    RG = _rank_one_terms(analysis_matrix(G, inner))
    battery = []
    if spec.mode == "sampled":
        for fam in (F, G):
            battery.extend(_sign_classes(fam))
    masks, lo, hi = _scan(RF, RG, d, subset_masks(spec, battery), _eig_extremes, workers)

    lo = np.maximum(lo, 0.0)
    hi = np.maximum(hi, 0.0)
    alpha, beta = float(lo.min()), float(hi.max())
    near = lo <= alpha + tol.rel_eq * max(beta, np.finfo(float).tiny)
    worst = _lex_first(masks[near])
    M = (RG.sum(0) + _mask_of(worst, m).astype(RF.dtype) @ (RF - RG)).reshape(d, d)
    _, V = hermitian_eig(M, tol)
    rows = None
    if table:
        rows = [(frozenset(np.flatnonzero(r).tolist()), float(a), float(b)) for r, a, b in zip(masks, lo, hi)]
    return WeavingReport(
        universal_lower=alpha,
        universal_upper=beta,
        is_weaving=bool(alpha > tol.rel_psd * beta),
        worst_subset=worst,
        witness=V[:, 0],
        exhaustive=spec.is_exhaustive,
        n_subsets=int(masks.shape[0]),
        inner=inner,
        per_subset=rows,
    )


# ---------------------------------------------------------------------------
# Characterizations


@dataclass
class EquivalenceReport:
    """Universal bounds of the four equivalent formulations.

    Keys of ``reports``: ``"z"`` (``{z_n}`` with ``[.,.]``), ``"Jz"``
    (``{J z_n}`` with ``[.,.]``), ``"z_J"`` (``{z_n}`` with ``[.,.]_J``) and
    ``"Jz_J"`` (``{J z_n}`` with ``[.,.]_J``).
    """

    reports: dict
    bounds_agree: bool
    verdicts_agree: bool

    @property
    def agree(self) -> bool:
        return self.bounds_agree and self.verdicts_agree

    def to_dict(self) -> dict:
        return {
            "agree": self.agree,
            "bounds_agree": self.bounds_agree,
            "verdicts_agree": self.verdicts_agree,
            "formulations": {
                k: {"lower": r.universal_lower, "upper": r.universal_upper, "is_weaving": r.is_weaving}
                for k, r in self.reports.items()
            },
        }


def check_equivalences(
    F: FrameFamily, G: FrameFamily, spec: SubsetSpec | None = None, tol: Tolerances = DEFAULT_TOL, workers=None
) -> EquivalenceReport:
    """Weave ``(F, G)`` and ``(JF, JG)`` under both ``[.,.]`` and ``[.,.]_J``."""
    JF, JG = F.j_image(), G.j_image()
    reports = {
        "z": universal_bounds(F, G, spec, "indefinite", tol, workers=workers),
        "Jz": universal_bounds(JF, JG, spec, "indefinite", tol, workers=workers),
        "z_J": universal_bounds(F, G, spec, "j", tol, workers=workers),
        "Jz_J": universal_bounds(JF, JG, spec, "j", tol, workers=workers),
    }
    ref = reports["z"]
    scale = max(ref.universal_upper, np.finfo(float).tiny)

    def close(a, b):
        return abs(a - b) <= tol.rel_eq * scale

    bounds_agree = all(
        close(r.universal_lower, ref.universal_lower) and close(r.universal_upper, ref.universal_upper)
        for r in reports.values()
    )
    verdicts_agree = len({r.is_weaving for r in reports.values()}) == 1
    return EquivalenceReport(reports, bounds_agree, verdicts_agree)


@dataclass
class OperatorLowerBoundReport:
    """Smallest singular value of the woven frame operators vs the weaving bounds.

    ``necessary``: ``s_min >= universal_lower``.
    ``sufficient``: ``universal_lower >= s_min**2 / (beta_first + beta_second)``.
    """

    s_min: float
    s_min_subset: frozenset
    universal_lower: float
    beta_first: float
    beta_second: float
    is_weaving: bool
    necessary: bool
    sufficient: bool
    exhaustive: bool

    @property
    def holds(self) -> bool:
        return self.necessary and self.sufficient

    @property
    def implied_lower(self) -> float:
        return self.s_min**2 / (self.beta_first + self.beta_second)

    def to_dict(self) -> dict:
        return {
            "s_min": self.s_min,
            "s_min_subset": sorted(self.s_min_subset),
            "universal_lower": self.universal_lower,
            "beta_first": self.beta_first,
            "beta_second": self.beta_second,
            "implied_lower": self.implied_lower,
            "is_weaving": self.is_weaving,
            "necessary": self.necessary,
            "sufficient": self.sufficient,
            "exhaustive": self.exhaustive,
        }


def _singular_extremes(signs):
    def reducer(W):
        S = W * signs  # S = (Z Z^H) D for each woven family
        # SVD rather than sqrt(eig(S^H S)): squaring loses half the digits
        sv = np.linalg.svd(S, compute_uv=False)
        return sv[:, -1], sv[:, 0]

    return reducer


def operator_lower_bound_check(
    F: FrameFamily, G: FrameFamily, spec: SubsetSpec | None = None, tol: Tolerances = DEFAULT_TOL, workers=None
) -> OperatorLowerBoundReport:
    """Compare ``min_sigma s_min(S_sigma)`` with the universal lower bound.

    ``S_sigma k = sum_{sigma} [k, z_n] z_n + sum_{sigma^c} [k, z'_n] z'_n``;
    its smallest singular value comes from a batched SVD of ``S_sigma``.
    """
    sp = _common_space(F, G)
    m, d = len(F), sp.dim
    if spec is None:
        spec = SubsetSpec.auto(m)
    wr = universal_bounds(F, G, spec, tol=tol, workers=workers)
    # Euclidean frame matrices: rows of conj(V) give rank-one terms z_n z_n^H
    RF = _rank_one_terms(np.conj(F.vectors))
    RG = _rank_one_terms(np.conj(G.vectors))
    battery = list(_sign_classes(F) + _sign_classes(G)) if spec.mode == "sampled" else []
    masks, smin, _ = _scan(RF, RG, d, subset_masks(spec, battery), _singular_extremes(sp.signs), workers)
    s_min = float(smin.min())
    near = smin <= s_min + tol.rel_eq * max(float(np.sqrt(wr.universal_upper)), np.finfo(float).tiny)
    b1 = frame_bounds(F, tol=tol).upper
    b2 = frame_bounds(G, tol=tol).upper
    alpha = wr.universal_lower
    return OperatorLowerBoundReport(
        s_min=s_min,
        s_min_subset=_lex_first(masks[near]),
        universal_lower=alpha,
        beta_first=b1,
        beta_second=b2,
        is_weaving=wr.is_weaving,
        necessary=_ge(s_min, alpha, tol.rel_eq),
        sufficient=_ge(alpha, s_min**2 / (b1 + b2), tol.rel_eq),
        exhaustive=spec.is_exhaustive,
    )


@dataclass
class PerturbationReport:
    """Weaving of ``{z_n}`` with ``{U z_n}`` against the ``||I - U||^2 < alpha/beta`` test."""

    alpha: float
    beta: float
    distance: float
    hypothesis_holds: bool
    u_invertible: bool
    weaving: WeavingReport
    predicted_lower: float | None
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "distance": self.distance,
            "distance_squared": self.distance**2,
            "ratio": self.alpha / self.beta if self.beta > 0 else 0.0,
            "hypothesis_holds": self.hypothesis_holds,
            "u_invertible": self.u_invertible,
            "predicted_lower": self.predicted_lower,
            "consistent": self.consistent,
            "weaving": self.weaving.to_dict(),
        }


def perturbation_weaving_check(
    F: FrameFamily, U, spec: SubsetSpec | None = None, tol: Tolerances = DEFAULT_TOL, workers=None
) -> PerturbationReport:
    """Check the sufficient condition for ``F`` and ``UF`` to be woven.

    With ``alpha, beta`` the optimal bounds of ``F`` and ``d = ||I - U||``,
    ``d**2 < alpha/beta`` guarantees weaving with universal lower bound at
    least ``(sqrt(alpha) - sqrt(beta) * d)**2``. The actual verdict is always
    computed too, since the condition is not necessary.
    """
    U = F.space.operator(U) if not np.iscomplexobj(U) else np.asarray(U, dtype=complex)
    if U.shape != (F.space.dim, F.space.dim):
        raise MismatchError(f"operator of shape {U.shape} on a space of dimension {F.space.dim}")
    fb = frame_bounds(F, tol=tol)
    d = operator_norm(np.eye(F.space.dim) - U)
    svals = np.linalg.svd(U, compute_uv=False)
    invertible = bool(svals[-1] > tol.rel_psd * max(svals[0], np.finfo(float).tiny))
    ratio = fb.lower / fb.upper if fb.upper > 0 else 0.0
    hyp = bool(fb.is_frame and d**2 < ratio)
    wr = universal_bounds(F, F.mapped(U), spec, tol=tol, workers=workers)
    predicted = None
    consistent = True
    if hyp:
        predicted = (np.sqrt(fb.lower) - np.sqrt(fb.upper) * d) ** 2
        consistent = wr.is_weaving and _ge(wr.universal_lower, predicted, tol.rel_eq)
    return PerturbationReport(fb.lower, fb.upper, d, hyp, invertible, wr, predicted, consistent)


@dataclass
class InverseOperatorReport:
    """Weaving of the canonical-dual-type families ``{S_F^-1 z_n}``, ``{S_G^-1 z'_n}``."""

    alpha: float
    beta: float
    norm_first: float
    norm_second: float
    inverse_gap: float
    hypothesis_first: bool
    hypothesis_second: bool
    weaving: WeavingReport
    inverse_weaving: WeavingReport
    estimated_lower: float | None
    diagnostic_at_witness: float
    consistent: bool

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis_first or self.hypothesis_second

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "norm_first": self.norm_first,
            "norm_second": self.norm_second,
            "inverse_gap": self.inverse_gap,
            "hypothesis_first": self.hypothesis_first,
            "hypothesis_second": self.hypothesis_second,
            "hypothesis_holds": self.hypothesis_holds,
            "estimated_lower": self.estimated_lower,
            "diagnostic_at_witness": self.diagnostic_at_witness,
            "consistent": self.consistent,
            "weaving": self.weaving.to_dict(),
            "inverse_weaving": self.inverse_weaving.to_dict(),
        }


def inverse_operator_weaving_check(
    F: FrameFamily, G: FrameFamily, spec: SubsetSpec | None = None, tol: Tolerances = DEFAULT_TOL, workers=None
) -> InverseOperatorReport:
    """Test ``||S_F|| ||S_F^-1 - S_G^-1|| < alpha/beta`` (either factor ordering).

    When the hypothesis holds the families ``{S_F^-1 z_n}`` and
    ``{S_G^-1 z'_n}`` must weave with universal lower bound at least
    ``(sqrt(alpha)/||S|| - sqrt(beta) ||S_F^-1 - S_G^-1||)**2``, where ``S`` is
    the frame operator named by the ordering that holds.
    """
    _common_space(F, G)
    for name, fam in (("first", F), ("second", G)):
        if not is_frame(fam, tol)[0]:
            raise NotAFrameError(f"{name} family is not a frame; its frame operator is singular")
    SF, SG = frame_operator(F), frame_operator(G)
    SFi, SGi = np.linalg.inv(SF), np.linalg.inv(SG)
    wr = universal_bounds(F, G, spec, tol=tol, workers=workers)
    alpha, beta = wr.universal_lower, wr.universal_upper
    ratio = alpha / beta if (wr.is_weaving and beta > 0) else 0.0
    nF, nG = operator_norm(SF), operator_norm(SG)
    gap = operator_norm(SFi - SGi)
    h1, h2 = bool(nF * gap < ratio), bool(nG * gap < ratio)
    inv = universal_bounds(F.mapped(SFi), G.mapped(SGi), spec, tol=tol, workers=workers)

    estimates = [(np.sqrt(alpha) / n - np.sqrt(beta) * gap) ** 2 for n, h in ((nF, h1), (nG, h2)) if h]
    estimated = max(estimates) if estimates else None
    k = inv.witness
    diag = float(np.sqrt(alpha) * np.linalg.norm(SFi @ k) - np.sqrt(beta) * np.linalg.norm((SGi - SFi) @ k))
    consistent = True
    if estimated is not None:
        consistent = inv.is_weaving and _ge(inv.universal_lower, estimated, tol.rel_eq)
    return InverseOperatorReport(alpha, beta, nF, nG, gap, h1, h2, wr, inv, estimated, diag, consistent)


@dataclass
class ProjectionReport:
    """Per-subset comparison of the projection criterion with the woven frame test.

    ``projected_is_frame``: ``{P z'_n : n not in sigma}`` is a frame for the
    orthogonal complement of ``span{z_n : n in sigma}`` (``P`` the projection
    onto that complement, orthogonality and coefficients taken in the
    ``[.,.]_J`` Hilbert structure). ``woven_is_frame``: the woven family is a
    frame for the whole space.
    """

    sigma: frozenset
    complement_dim: int
    projected_lower: float
    projected_upper: float
    projected_is_frame: bool
    woven_is_frame: bool

    @property
    def agree(self) -> bool:
        return self.projected_is_frame == self.woven_is_frame

    def to_dict(self) -> dict:
        return {
            "sigma": sorted(self.sigma),
            "complement_dim": self.complement_dim,
            "projected_lower": self.projected_lower,
            "projected_upper": self.projected_upper,
            "projected_is_frame": self.projected_is_frame,
            "woven_is_frame": self.woven_is_frame,
            "agree": self.agree,
        }


def projection_characterization_check(
    F: FrameFamily, G: FrameFamily, sigma: Iterable[int], tol: Tolerances = DEFAULT_TOL
) -> ProjectionReport:
    """Projection criterion for a single ``sigma``; see :class:`ProjectionReport`."""
    sp = _common_space(F, G)
    m, d = len(F), sp.dim
    s = as_index_set(sigma, m)
    mask = _mask_of(s, m)
    W = weave(F, G, s)
    wv, _ = hermitian_eig(W.synthesis @ W.synthesis.conj().T, tol)
    scale = max(float(wv[-1]), np.finfo(float).tiny)
    woven_ok = bool(wv[0] > tol.rel_psd * scale)

    Zs = F.vectors[mask].T
    if Zs.shape[1]:
        U, sv, _ = np.linalg.svd(Zs, full_matrices=True)
        rank = int(np.sum(sv**2 > tol.rel_psd * scale))
    else:
        U, rank = np.eye(d), 0
    Q = U[:, rank:]
    r = Q.shape[1]
    if r == 0:
        return ProjectionReport(s, 0, 0.0, 0.0, True, woven_ok)
    P = Q @ Q.conj().T
    PZ = P @ G.vectors[~mask].T
    Mc = Q.conj().T @ PZ @ PZ.conj().T @ Q
    w, _ = hermitian_eig(Mc, tol)
    lo, hi = max(float(w[0]), 0.0), max(float(w[-1]), 0.0)
    return ProjectionReport(s, r, lo, hi, bool(lo > tol.rel_psd * scale), woven_ok)
