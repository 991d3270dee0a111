"""Axisymmetric body/wall geometry near the contact point.

The body's lower surface is ``x3 = h + r**(1 + alpha)`` over a flat wall
``x3 = 0``.  Everything downstream integrates over the thin gap between the
two for ``r < r0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

PROFILE_KEYS = ("alpha", "h", "r0", "d0")


@dataclass(frozen=True)
class SolidProfile:
    alpha: float = 1.0
    h: float = 0.1
    r0: float = 0.5
    d0: float = 0.25
    h_init: float | None = None  # initial height h(0); defaults to h

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.h >= 0.0:
            raise ValueError(f"h must be nonnegative, got {self.h}")
        if not 0.0 < self.d0 < self.r0:
            raise ValueError(f"need 0 < d0 < r0, got d0={self.d0}, r0={self.r0}")
        if self.h_init is not None and self.h_init < 0.0:
            raise ValueError("h_init must be nonnegative")

    @property
    def h0(self) -> float:
        return self.h if self.h_init is None else self.h_init

    @property
    def cusp_scale(self) -> float:
        """Radius where r**(1+alpha) equals h."""
        return self.h ** (1.0 / (1.0 + self.alpha))

    def gap(self, r):
        return gap(self, r)

    def gap_slope(self, r):
        """d psi / dr."""
        return (1.0 + self.alpha) * np.asarray(r, dtype=float) ** self.alpha

    def with_h(self, h: float) -> "SolidProfile":
        return SolidProfile(self.alpha, h, self.r0, self.d0, self.h_init)

    def cutoff_consistent(self) -> bool:
        """Whether h + r0**(1+alpha) <= d0 < r0 holds (reported, never enforced)."""
        return self.h + self.r0 ** (1.0 + self.alpha) <= self.d0 < self.r0


def gap(profile: SolidProfile, r):
    """Gap thickness psi(r) = h + r**(1+alpha).  Works on scalars and arrays."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0):
        raise ValueError("gap is only defined for r >= 0")
    out = profile.h + r_arr ** (1.0 + profile.alpha)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CuspRegion:
    """The set {0 <= r < r0, 0 <= x3 <= psi(r)} with measure 2*pi*r dr dx3."""

    profile: SolidProfile

    def contains(self, r, x3):
        return in_cusp(self, r, x3)

    def volume(self) -> float:
        p = self.profile
        k = 3.0 + p.alpha
        return 2.0 * math.pi * (p.h * p.r0**2 / 2.0 + p.r0**k / k)


def in_cusp(region: CuspRegion, r, x3):
    p = region.profile
    r_arr = np.asarray(r, dtype=float)
    x_arr = np.asarray(x3, dtype=float)
    rr = np.maximum(r_arr, 0.0)
    inside = (r_arr >= 0.0) & (r_arr < p.r0) & (x_arr >= 0.0) & (x_arr <= p.h + rr ** (1.0 + p.alpha))
    return bool(inside) if inside.ndim == 0 else inside


def read_config(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file.  Blank lines and ``#`` comments are skipped."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        values[key] = val
    return values


def profile_from_config(path=None, **overrides) -> SolidProfile:
    """Build a profile from an optional config file; non-None overrides win."""
    params = {}
    if path is not None:
        cfg = read_config(path)
        unknown = set(cfg) - set(PROFILE_KEYS) - {"h_init"}
        if unknown:
            raise ValueError(f"unknown profile keys: {sorted(unknown)}")
        params = {k: float(v) for k, v in cfg.items()}
    params.update({k: float(v) for k, v in overrides.items() if v is not None})
    return SolidProfile(**params)
