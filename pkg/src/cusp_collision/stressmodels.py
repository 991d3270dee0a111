"""Concrete stress laws S(M) on symmetric 3x3 matrices and sampled axiom checks.

Matrices are numpy arrays of shape (..., 3, 3); every function broadcasts over
the leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial

import numpy as np

DEFAULT_SEED = 20240601
MONOTONE_SLACK = 1e-12


def sym_from_entries(m11, m22, m33, m12, m13, m23):
    """Symmetric matrix from its six independent entries."""
    a = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (m11, m22, m33, m12, m13, m23)))
    m11, m22, m33, m12, m13, m23 = a
    return np.stack([
        np.stack([m11, m12, m13], axis=-1),
        np.stack([m12, m22, m23], axis=-1),
        np.stack([m13, m23, m33], axis=-1),
    ], axis=-2)


def random_sym(rng: np.random.Generator, n: int):
    """n symmetric matrices with independent entries uniform in [-1, 1]."""
    return sym_from_entries(*rng.uniform(-1.0, 1.0, size=(6, n)))


def frob(M):
    return np.sqrt(np.sum(np.asarray(M) ** 2, axis=(-2, -1)))


def dissipation(S, M):
    """Frobenius product S : M."""
    return np.sum(np.asarray(S) * np.asarray(M), axis=(-2, -1))


def power_law(M, p: float):
    """|M|**(p-2) M, with S(0) = 0."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    M = np.asarray(M, dtype=float)
    n = frob(M)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(n > 0, n ** (p - 2.0), 0.0)
    return scale[..., None, None] * M


def activated_euler(M, delta0: float):
    """max(|M| - delta0, 0) |M|**-1 M: zero until |M| exceeds delta0."""
    if delta0 <= 0:
        raise ValueError("delta0 must be positive")
    M = np.asarray(M, dtype=float)
    n = frob(M)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(n > delta0, (n - delta0) / n, 0.0)
    return scale[..., None, None] * M


def temperature_power_law(M, theta, p: float):
    """mu(theta) |M|**(p-2) M with mu(s) = 1 + s."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0):
        raise ValueError("temperature must be positive")
    return (1.0 + theta)[..., None, None] * power_law(M, p)


def make_model(name: str, p: float = 2.0, delta0: float = 0.5):
    if name in ("power", "power_law"):
        return partial(power_law, p=p)
    if name in ("activated", "activated_euler"):
        return partial(activated_euler, delta0=delta0)
    raise ValueError(f"unknown model {name!r}")


@dataclass(frozen=True)
class GrowthEnvelope:
    """c0 |M|^p - delta <= S(M):M <= c1 |M|^p."""

    p: float
    c0: float
    c1: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError("p must exceed 1")
        if not 0 < self.c0 <= self.c1:
            raise ValueError("need 0 < c0 <= c1")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")


@dataclass
class AxiomReport:
    axiom: str
    samples: int
    seed: int
    passed: bool
    min_margin: float
    violations: int
    witness: dict | None = field(default=None)

    def as_dict(self):
        return {k: getattr(self, k) for k in
                ("axiom", "samples", "seed", "passed", "min_margin", "violations", "witness")}


def check_monotone(model, sample_count: int = 10_000, seed: int = DEFAULT_SEED,
                   slack: float = MONOTONE_SLACK) -> AxiomReport:
    """Sample [S(M) - S(N)] : (M - N) >= -slack over random symmetric pairs."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    M = random_sym(rng, sample_count)
    N = random_sym(rng, sample_count)
    vals = dissipation(model(M) - model(N), M - N)
    bad = vals < -slack
    witness = None
    if bad.any():
        i = int(np.argmin(vals))
        witness = {"M": M[i].tolist(), "N": N[i].tolist(), "value": float(vals[i])}
    return AxiomReport("monotonicity", sample_count, seed, not bad.any(), float(vals.min()),
                       int(bad.sum()), witness)


def growth_samples(rng: np.random.Generator, n: int, lo: float = 1e-3, hi: float = 1e3):
    """Unit-norm random directions scaled log-uniformly to |M| in [lo, hi]."""
    M = random_sym(rng, n)
    M /= frob(M)[:, None, None]
    scale = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    return scale[:, None, None] * M


def check_growth(model, envelope: GrowthEnvelope, sample_count: int = 10_000,
                 seed: int = DEFAULT_SEED, rel_slack: float = 1e-12) -> AxiomReport:
    """Sample both growth bounds; margins are scaled by max(1, c1 |M|^p)."""
    rng = np.random.default_rng(seed)
    M = growth_samples(rng, sample_count)
    nrm_p = frob(M) ** envelope.p
    sm = dissipation(model(M), M)
    scale = np.maximum(1.0, envelope.c1 * nrm_p)
    lower = (sm - (envelope.c0 * nrm_p - envelope.delta)) / scale
    upper = (envelope.c1 * nrm_p - sm) / scale
    margin = np.minimum(lower, upper)
    bad = margin < -rel_slack
    witness = None
    if bad.any():
        i = int(np.argmin(margin))
        witness = {"M": M[i].tolist(), "S:M": float(sm[i]), "|M|": float(frob(M[i])),
                   "side": "lower" if lower[i] < upper[i] else "upper"}
    return AxiomReport("growth", sample_count, seed, not bad.any(), float(margin.min()),
                       int(bad.sum()), witness)


def dual_exponent(p: float) -> float:
    return p / (p - 1.0)
