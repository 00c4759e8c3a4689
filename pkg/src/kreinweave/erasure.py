"""Reconstruction from randomly erased frame coefficients.

Setting: ``F = {z_n}`` and ``G = {z'_n}`` are uniform tight families in the
definite space ``R^n`` (all signs +1) with ``||z_j|| = sqrt(n)`` and
``sum_j z_j z_j^T = m I``. For a subset ``sigma`` every coefficient of the
woven family is kept independently with probability ``1 - erasure_prob``
and the survivors are resynthesized with the factor ``2/m``:

    k_hat = (2/m) * sum_n keep_n [k, w_n] w_n

At ``erasure_prob = 1/2`` the estimator is unbiased and the expected relative
error is of order ``eps = sqrt((n/m) ln n)``; :func:`monte_carlo_bound`
estimates the ratio ``M_hat = E||k_hat - k|| / ||k|| / eps``.

Random streams: trial ``t`` draws from Philox4x64-10 with ``key=seed`` and
counter ``(0, 0, t, 0)``, so results do not depend on how trials are split
across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InsufficientRedundancyError, NotAFrameError, ZeroVectorError
from .frames import FrameFamily, frame_operator, is_frame
from .krein import KreinSpace, as_index_set
from .weaving import _common_space, _n_workers, weave

__all__ = [
    "RNG_ALGORITHM",
    "ErasureConfig",
    "ErasureReport",
    "uniform_tight_frame",
    "error_operator",
    "erasure_trial",
    "exact_erasure_mean",
    "monte_carlo_bound",
    "estimator_moments",
    "trial_rng",
]

RNG_ALGORITHM = "Philox4x64-10, key=seed, counter=(0,0,trial,0)"
_BLOCK = 512


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for ``(seed, trial)``; ``stream`` separates auxiliary draws."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, int(trial), int(stream)]))


def uniform_tight_frame(n: int, m: int) -> FrameFamily:
    """Real harmonic frame of ``m`` vectors in ``R^n``, each of norm ``sqrt(n)``.

    Coordinates are ``sqrt(2) cos(2 pi k j / m)`` and ``sqrt(2) sin(2 pi k j / m)``
    for ``k = 1 .. n // 2`` plus a constant coordinate 1 when ``n`` is odd.
    For even ``n == m`` (where the top frequency would alias) the scaled
    standard basis ``sqrt(n) e_j`` is returned.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < n:
        raise InsufficientRedundancyError(f"need m >= n for a frame of R^{n}, got m = {m}")
    sp = KreinSpace.euclidean(n)
    if n % 2 == 0 and m == n:
        return FrameFamily(sp, np.sqrt(n) * np.eye(n))
    j = np.arange(m)
    rows = []
    if n % 2:
        rows.append(np.ones(m))
    for k in range(1, n // 2 + 1):
        t = 2 * np.pi * k * j / m
        rows += [np.sqrt(2) * np.cos(t), np.sqrt(2) * np.sin(t)]
    return FrameFamily(sp, np.array(rows).T)


def error_operator(F: FrameFamily, G: FrameFamily, sigma, delta) -> np.ndarray:
    """``E = sum_{sigma} d_n z_n (x) S_F^-1 z_n + sum_{sigma^c} d_n z'_n (x) S_G^-1 z'_n``.

    ``a (x) b`` is the rank-one map ``k -> [k, b] a``; ``delta`` holds one real
    weight per index.
    """
    sp = _common_space(F, G)
    m = len(F)
    delta = np.asarray(delta, dtype=float)
    if delta.shape != (m,):
        raise ValueError(f"need {m} weights, got shape {delta.shape}")
    for name, fam in (("first", F), ("second", G)):
        if not is_frame(fam)[0]:
            raise NotAFrameError(f"{name} family is not a frame")
    s = as_index_set(sigma, m)
    mask = np.zeros(m, bool)
    mask[list(s)] = True
    A = np.where(mask[:, None], F.vectors, G.vectors)
    duals_F = F.vectors @ np.linalg.inv(frame_operator(F)).T
    duals_G = G.vectors @ np.linalg.inv(frame_operator(G)).T
    B = np.where(mask[:, None], duals_F, duals_G)
    # sum_n d_n a_n b_n^H D
    return ((A.T * delta) @ B.conj()) * sp.signs


def _reconstruct(W: np.ndarray, keep: np.ndarray, k: np.ndarray) -> np.ndarray:
    m = W.shape[0]
    return (2.0 / m) * (W.T @ (keep * (W @ k)))


def erasure_trial(F: FrameFamily, G: FrameFamily, sigma, k, erasure_prob: float = 0.5, rng=None):
    """One random erasure pattern applied to ``k``.

    Returns ``(k_hat, relative_error)`` with the error measured in ``||.||_J``.
    """
    sp = _common_space(F, G)
    k = sp.vector(k)
    nk = np.linalg.norm(k)
    if nk == 0:
        raise ZeroVectorError("cannot measure relative error of the zero vector")
    if rng is None:
        rng = np.random.default_rng()
    W = weave(F, G, sigma)
    # [k, w] = w^H D k; the uniform tight setting uses the definite space so D = I
    coef = np.conj(W.vectors) @ (sp.signs * k)
    keep = rng.random(len(W)) >= erasure_prob
    k_hat = (2.0 / len(W)) * (W.vectors.T @ (keep * coef))
    return k_hat, float(np.linalg.norm(k_hat - k) / nk)


def exact_erasure_mean(F: FrameFamily, G: FrameFamily, sigma, ks, erasure_prob: float = 0.5) -> float:
    """Expected relative error by enumerating all ``2**m`` keep/erase patterns."""
    sp = _common_space(F, G)
    m = len(F)
    if m > 20:
        raise ValueError("exact enumeration limited to m <= 20")
    W = weave(F, G, sigma).vectors
    ks = np.atleast_2d(np.asarray(ks, dtype=float))
    if np.any(np.linalg.norm(ks, axis=1) == 0):
        raise ZeroVectorError("test vectors must be nonzero")
    ints = np.arange(1 << m)
    keep = ((ints[:, None] >> np.arange(m)) & 1).astype(float)
    nkeep = keep.sum(1)
    prob = (1 - erasure_prob) ** nkeep * erasure_prob ** (m - nkeep)
    coef = (W * sp.signs) @ ks.T  # (m, nk)
    k_hat = (2.0 / m) * np.einsum("pm,mi,mk->pki", keep, W, coef)
    err = np.linalg.norm(k_hat - ks[None], axis=2) / np.linalg.norm(ks, axis=1)[None]
    return float(np.sum(prob[:, None] * err) / ks.shape[0])


@dataclass(frozen=True)
class ErasureConfig:
    """Monte Carlo parameters.

    ``second_frame="same"`` weaves the harmonic frame with itself (every
    subset gives the same family); ``"rotated"`` uses a fixed random rotation
    of it as the second family and draws a fresh uniform subset per trial.
    """

    n: int
    m: int
    trials: int = 1000
    erasure_prob: float = 0.5
    seed: int = 0
    test_vectors: int = 1
    second_frame: str = "same"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.m < self.n:
            raise InsufficientRedundancyError(f"need m >= n, got n = {self.n}, m = {self.m}")
        if self.trials < 1 or self.test_vectors < 1:
            raise ValueError("trials and test_vectors must be >= 1")
        if not 0.0 < self.erasure_prob < 1.0:
            raise ValueError("erasure_prob must lie in (0, 1)")
        if self.second_frame not in ("same", "rotated"):
            raise ValueError("second_frame must be 'same' or 'rotated'")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def epsilon(self) -> float:
        """``sqrt((n/m) ln n)`` (natural log)."""
        return math.sqrt(self.n / self.m * math.log(self.n))


@dataclass
class ErasureReport:
    mean_relative_error: float
    std_error: float
    epsilon: float
    m_hat: float | None
    m_hat_std_error: float | None
    unbiased: bool
    config: ErasureConfig
    rng: str = RNG_ALGORITHM
    log_base: str = "e"
    per_trial: list | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        d = {
            "mean_relative_error": self.mean_relative_error,
            "std_error": self.std_error,
            "epsilon": self.epsilon,
            "m_hat": self.m_hat,
            "m_hat_std_error": self.m_hat_std_error,
            "unbiased": self.unbiased,
            "config": asdict(self.config),
            "rng": self.rng,
            "log_base": self.log_base,
        }
        if self.per_trial is not None:
            d["per_trial"] = self.per_trial
        return d


def _second_family(cfg: ErasureConfig, F: FrameFamily) -> FrameFamily:
    if cfg.second_frame == "same":
        return F
    rng = trial_rng(cfg.seed, 0, stream=1)
    Q, R = np.linalg.qr(rng.standard_normal((cfg.n, cfg.n)))
    Q = Q * np.sign(np.diag(R))
    return F.mapped(Q)


def _draw(cfg: ErasureConfig, t: int):
    rng = trial_rng(cfg.seed, t)
    keep = rng.random(cfg.m) >= cfg.erasure_prob
    sigma = rng.random(cfg.m) < 0.5 if cfg.second_frame == "rotated" else None
    ks = rng.standard_normal((cfg.test_vectors, cfg.n))
    return keep, sigma, ks


def _block(cfg: ErasureConfig, F: FrameFamily, G: FrameFamily, start: int, stop: int):
    draws = [_draw(cfg, t) for t in range(start, stop)]
    keep = np.array([d[0] for d in draws], dtype=float)  # (T, m)
    ks = np.array([d[2] for d in draws])  # (T, v, n)
    if cfg.second_frame == "same":
        W = F.vectors
        E = (2.0 / cfg.m) * np.einsum("mi,tm,mj->tij", W, keep, W)
    else:
        sig = np.array([d[1] for d in draws])
        W = np.where(sig[:, :, None], F.vectors[None], G.vectors[None])  # (T, m, n)
        E = (2.0 / cfg.m) * np.einsum("tmi,tm,tmj->tij", W, keep, W)
    k_hat = np.einsum("tij,tvj->tvi", E, ks)
    err = np.linalg.norm(k_hat - ks, axis=2) / np.linalg.norm(ks, axis=2)
    return err.mean(axis=1)


def _trial_errors(cfg: ErasureConfig, workers=None) -> np.ndarray:
    F = uniform_tight_frame(cfg.n, cfg.m)
    G = _second_family(cfg, F)
    starts = range(0, cfg.trials, _BLOCK)

    def run(s):
        return _block(cfg, F, G, s, min(s + _BLOCK, cfg.trials))

    nw = _n_workers(workers)
    if nw == 1:
        parts = [run(s) for s in starts]
    else:
        with ThreadPoolExecutor(nw) as ex:
            parts = list(ex.map(run, starts))
    return np.concatenate(parts)


def monte_carlo_bound(cfg: ErasureConfig, keep_trials: bool = False, workers=None) -> ErasureReport:
    """Estimate ``E||k_hat - k|| / ||k||`` and ``M_hat = mean / eps``.

    Each trial draws one erasure pattern and ``cfg.test_vectors`` Gaussian
    test vectors; the trial value is the mean relative error over them. The
    standard error is taken across trials.
    """
    per = _trial_errors(cfg, workers)
    mean = float(per.mean())
    se = float(per.std(ddof=1) / np.sqrt(len(per))) if len(per) > 1 else 0.0
    eps = cfg.epsilon
    return ErasureReport(
        mean_relative_error=mean,
        std_error=se,
        epsilon=eps,
        m_hat=mean / eps if eps > 0 else None,
        m_hat_std_error=se / eps if eps > 0 else None,
        unbiased=cfg.erasure_prob == 0.5,
        config=cfg,
        per_trial=per.tolist() if keep_trials else None,
    )


def estimator_moments(cfg: ErasureConfig, k) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean of ``k_hat`` for a fixed ``k`` and its per-coordinate standard error."""
    F = uniform_tight_frame(cfg.n, cfg.m)
    G = _second_family(cfg, F)
    k = np.asarray(k, dtype=float)
    total = np.zeros(cfg.n)
    total_sq = np.zeros(cfg.n)
    for s in range(0, cfg.trials, _BLOCK):
        draws = [_draw(cfg, t) for t in range(s, min(s + _BLOCK, cfg.trials))]
        for keep, sig, _ in draws:
            W = F.vectors if sig is None else np.where(sig[:, None], F.vectors, G.vectors)
            kh = _reconstruct(W, keep.astype(float), k)
            total += kh
            total_sq += kh * kh
    n = cfg.trials
    mean = total / n
    var = (total_sq - n * mean * mean) / max(n - 1, 1)
    return mean, np.sqrt(np.maximum(var, 0.0) / n)
