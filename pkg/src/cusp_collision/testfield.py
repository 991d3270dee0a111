"""Divergence-free test field built as the curl of an azimuthal stream function.

With ``phi = (r/2) F(r, x3)`` the field ``w = curl(phi e_theta)`` has

    w_r = -(r/2) F_3,        w_3 = F + (r/2) F_r,

so every quantity below reduces to derivatives of the blending function F.
In the gap, ``F = Phi(x3 / psi(r))`` with ``Phi(t) = t**2 (3 - 2t)``.  On the
body ``F = 1`` (rigid translation e_3).  The extended mode blends the gap
formula into a neighbourhood tube around the body with two smoothstep
cutoffs.

All derivatives are closed form.  ``F_rr`` is carried as ``r * F_rr`` since
``psi''`` is singular at the axis for alpha < 1 while ``r psi''`` is not.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import SolidProfile

CUSP = "cusp"
EXTENDED = "extended"

# smoothstep coefficients of u**(n+1) ... u**(2n+1), indexed by smoothness order n
_SMOOTHSTEP = {
    1: (3.0, -2.0),
    2: (10.0, -15.0, 6.0),
    3: (35.0, -84.0, 70.0, -20.0),
}


def shape_fn(t):
    """Phi(t) = t^2 (3 - 2t); Phi(0)=0, Phi(1)=1, Phi'(0)=Phi'(1)=0."""
    t = np.asarray(t, dtype=float)
    out = t * t * (3.0 - 2.0 * t)
    return float(out) if out.ndim == 0 else out


def _shape_derivs(t):
    return t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t), 6.0 - 12.0 * t


def smoothstep(u, order: int = 2, deriv: int = 0):
    """Clamped polynomial step: 0 for u <= 0, 1 for u >= 1, C^order in between."""
    try:
        coeffs = _SMOOTHSTEP[order]
    except KeyError:
        raise ValueError(f"smoothness order must be one of {sorted(_SMOOTHSTEP)}") from None
    u = np.asarray(u, dtype=float)
    uc = np.clip(u, 0.0, 1.0)
    out = np.zeros_like(uc)
    for k, c in enumerate(coeffs, start=order + 1):
        if deriv == 0:
            out += c * uc**k
        elif deriv == 1:
            out += c * k * uc ** (k - 1)
        elif deriv == 2:
            out += c * k * (k - 1) * uc ** (k - 2)
        else:
            raise ValueError("deriv must be 0, 1 or 2")
    if deriv:
        out = np.where((u > 0.0) & (u < 1.0), out, 0.0)
    return out


@dataclass(frozen=True)
class Cutoffs:
    """The pair (chi, eta) of smooth cutoffs.

    chi is 1 on {r < r0, x3 < r0} and 0 outside {r < 2 r0, x3 < 2 r0}.
    eta is 1 within vertical distance d0/2 of the reference body and 0
    beyond d0; the neighbourhood is a vertical translation tube.
    """

    r0: float
    d0: float
    order: int = 2

    def chi(self, r, x3):
        return self.chi_derivs(r, x3)[0]

    def chi_derivs(self, r, x3):
        """chi, chi_r, chi_3, chi_rr, chi_r3, chi_33."""
        u = (2.0 * self.r0 - np.asarray(r, dtype=float)) / self.r0
        v = (2.0 * self.r0 - np.asarray(x3, dtype=float)) / self.r0
        su, su1, su2 = (smoothstep(u, self.order, k) for k in range(3))
        sv, sv1, sv2 = (smoothstep(v, self.order, k) for k in range(3))
        s = 1.0 / self.r0
        return (
            su * sv,
            -s * su1 * sv,
            -s * su * sv1,
            s * s * su2 * sv,
            s * s * su1 * sv1,
            s * s * su * sv2,
        )

    def eta_of_distance(self, dist, deriv: int = 0):
        """eta as a function of the vertical distance below the body."""
        u = (self.d0 - np.asarray(dist, dtype=float)) / (0.5 * self.d0)
        return smoothstep(u, self.order, deriv) * (-2.0 / self.d0) ** deriv

    def eta(self, profile: SolidProfile, r, x3):
        """eta(r, x3) relative to the reference body at height h0."""
        r = np.asarray(r, dtype=float)
        return self.eta_of_distance(profile.h0 + r ** (1.0 + profile.alpha) - np.asarray(x3, dtype=float))


def make_cutoffs(r0: float, d0: float, order: int = 2) -> Cutoffs:
    if not 0.0 < d0 < r0:
        raise ValueError(f"need 0 < d0 < r0, got d0={d0}, r0={r0}")
    if order not in _SMOOTHSTEP:
        raise ValueError(f"smoothness order must be one of {sorted(_SMOOTHSTEP)}")
    return Cutoffs(r0, d0, order)


class _Blend(NamedTuple):
    """F and the derivatives the field needs; ``rF_rr`` is r * d2F/dr2."""

    F: np.ndarray
    F_r: np.ndarray
    F_3: np.ndarray
    rF_rr: np.ndarray
    F_r3: np.ndarray
    F_33: np.ndarray
    F_h: np.ndarray
    F_rh: np.ndarray
    F_3h: np.ndarray


@dataclass(frozen=True)
class GradTensor:
    """Nonzero cylindrical entries of grad(w) for w = (w_r, 0, w_3).

    Row i, column j holds d_j w_i, so the full tensor is

        [[drr, 0,    d3r],
         [0,   hoop, 0  ],
         [dr3, 0,    d33]]

    with drr = d_r w_r, d3r = d_3 w_r, hoop = w_r / r, dr3 = d_r w_3,
    d33 = d_3 w_3.  ``frobenius`` is the norm of this unsymmetrized tensor.
    """

    drr: np.ndarray
    d3r: np.ndarray
    hoop: np.ndarray
    dr3: np.ndarray
    d33: np.ndarray

    @property
    def frobenius(self):
        return np.sqrt(self.drr**2 + self.d3r**2 + self.hoop**2 + self.dr3**2 + self.d33**2)

    @property
    def divergence(self):
        return self.drr + self.hoop + self.d33

    def matrix(self):
        z = np.zeros_like(self.drr)
        return np.stack(
            [
                np.stack([self.drr, z, self.d3r], axis=-1),
                np.stack([z, self.hoop, z], axis=-1),
                np.stack([self.dr3, z, self.d33], axis=-1),
            ],
            axis=-2,
        )

    def strain_rate(self):
        """D(w) = (grad w + grad w^T) / 2 as (..., 3, 3) arrays."""
        m = self.matrix()
        return 0.5 * (m + np.swapaxes(m, -1, -2))


class TestField:
    """Test field w_h for a frozen gap height h.

    ``mode="cusp"`` evaluates the gap formula on the closed cusp region only
    and rejects other points.  ``mode="extended"`` evaluates everywhere with
    r, x3 >= 0: rigid e_3 on and above the body surface, blended cutoffs
    elsewhere.
    """

    __test__ = False  # not a pytest class

    def __init__(self, profile: SolidProfile, mode: str = CUSP, cutoffs: Cutoffs | None = None):
        if mode not in (CUSP, EXTENDED):
            raise ValueError(f"mode must be {CUSP!r} or {EXTENDED!r}")
        self.profile = profile
        self.mode = mode
        self.cutoffs = cutoffs if cutoffs is not None else make_cutoffs(profile.r0, profile.d0)

    def __repr__(self):
        return f"TestField({self.profile!r}, mode={self.mode!r})"

    # -- blending function -------------------------------------------------

    def _prepare(self, r, x3):
        r, x3 = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(x3, dtype=float))
        if np.any(r < 0.0) or np.any(x3 < 0.0):
            raise ValueError("points must satisfy r >= 0 and x3 >= 0")
        if self.mode == CUSP:
            p = self.profile
            psi = p.h + r ** (1.0 + p.alpha)
            if np.any(r > p.r0) or np.any(x3 > psi * (1.0 + 1e-12)):
                raise ValueError("point outside the cusp region; use mode='extended'")
        return r, x3

    def _cusp_blend(self, r, x3) -> _Blend:
        p = self.profile
        ra = r**p.alpha
        psi = p.h + r * ra
        t = x3 / psi
        P0, P1, P2 = _shape_derivs(t)
        b = (1.0 + p.alpha) * ra / psi  # psi'/psi
        a = r * b
        tP = t * P2 + P1
        return _Blend(
            F=P0,
            F_r=-t * b * P1,
            F_3=P1 / psi,
            rF_rr=t * a * b * tP - t * P1 * b * (p.alpha - a),
            F_r3=-b * tP / psi,
            F_33=P2 / psi**2,
            F_h=-t * P1 / psi,
            F_rh=t * b * (t * P2 + 2.0 * P1) / psi,
            F_3h=-tP / psi**2,
        )

    def _extended_blend(self, r, x3) -> _Blend:
        p = self.profile
        c = self.cutoffs
        cusp = self._cusp_blend(r, x3)
        # eta at the point translated back to the reference configuration
        dist = (p.h0 + r ** (1.0 + p.alpha)) - (x3 - p.h + p.h0)
        E0, E1, E2 = (c.eta_of_distance(dist, k) for k in range(3))
        dpsi = (1.0 + p.alpha) * r**p.alpha
        r_d2psi = p.alpha * (1.0 + p.alpha) * r**p.alpha
        eta = _Blend(
            F=E0,
            F_r=E1 * dpsi,
            F_3=-E1,
            rF_rr=r * E2 * dpsi**2 + E1 * r_d2psi,
            F_r3=-E2 * dpsi,
            F_33=E2,
            F_h=E1,
            F_rh=E2 * dpsi,
            F_3h=-E2,
        )
        X, X_r, X_3, X_rr, X_r3, X_33 = c.chi_derivs(r, x3)
        G = _Blend(*(cu - et for cu, et in zip(cusp, eta)))
        blend = _Blend(
            F=eta.F + X * G.F,
            F_r=eta.F_r + X_r * G.F + X * G.F_r,
            F_3=eta.F_3 + X_3 * G.F + X * G.F_3,
            rF_rr=eta.rF_rr + r * (X_rr * G.F + 2.0 * X_r * G.F_r) + X * G.rF_rr,
            F_r3=eta.F_r3 + X_r3 * G.F + X_r * G.F_3 + X_3 * G.F_r + X * G.F_r3,
            F_33=eta.F_33 + X_33 * G.F + 2.0 * X_3 * G.F_3 + X * G.F_33,
            F_h=eta.F_h + X * G.F_h,
            F_rh=eta.F_rh + X_r * G.F_h + X * G.F_rh,
            F_3h=eta.F_3h + X_3 * G.F_h + X * G.F_3h,
        )
        solid = x3 >= p.h + r ** (1.0 + p.alpha)
        if np.any(solid):
            blend = _Blend(*(np.where(solid, 1.0 if k == 0 else 0.0, v) for k, v in enumerate(blend)))
        return blend

    def _blend(self, r, x3) -> _Blend:
        if self.mode == CUSP:
            return self._cusp_blend(r, x3)
        return self._extended_blend(r, x3)

    @staticmethod
    def _squeeze(x):
        return float(x) if np.ndim(x) == 0 else x

    # -- public evaluators --------------------------------------------------

    def stream(self, r, x3):
        """phi_h(r, x3) = (r/2) F."""
        r, x3 = self._prepare(r, x3)
        return self._squeeze(0.5 * r * self._blend(r, x3).F)

    def velocity(self, r, x3):
        """(w_r, w_3); finite on the axis, where w_r = 0."""
        r, x3 = self._prepare(r, x3)
        B = self._blend(r, x3)
        return self._squeeze(-0.5 * r * B.F_3), self._squeeze(B.F + 0.5 * r * B.F_r)

    def gradient(self, r, x3) -> GradTensor:
        r, x3 = self._prepare(r, x3)
        B = self._blend(r, x3)
        half_r = 0.5 * r
        # w_r / r = -F_3 / 2 needs no division, so the axis is covered
        return GradTensor(
            drr=-0.5 * B.F_3 - half_r * B.F_r3,
            d3r=-half_r * B.F_33,
            hoop=-0.5 * B.F_3,
            dr3=1.5 * B.F_r + 0.5 * B.rF_rr,
            d33=B.F_3 + half_r * B.F_r3,
        )

    def dh_velocity(self, r, x3):
        """(d_h w_r, d_h w_3) at a fixed point."""
        r, x3 = self._prepare(r, x3)
        B = self._blend(r, x3)
        return self._squeeze(-0.5 * r * B.F_3h), self._squeeze(B.F_h + 0.5 * r * B.F_rh)

    def divergence(self, r, x3):
        return self._squeeze(self.gradient(r, x3).divergence)

    def with_h(self, h: float) -> "TestField":
        return TestField(self.profile.with_h(h), self.mode, self.cutoffs)


def sample_cusp_points(profile: SolidProfile, n: int, seed: int = 0):
    """Quasi-random (Sobol) points filling the cusp region, in (r, x3).

    Draws the next power of two and keeps the first ``n``.
    """
    from scipy.stats import qmc

    m = max(int(n) - 1, 0).bit_length()
    u = qmc.Sobol(d=2, scramble=True, seed=seed).random_base2(m)[:n]
    r = profile.r0 * u[:, 0]
    return r, u[:, 1] * (profile.h + r ** (1.0 + profile.alpha))
