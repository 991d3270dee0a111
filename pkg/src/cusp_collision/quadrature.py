"""Adaptive quadrature on the cusp region and h-sweep scaling fits.

Cells live in (r, t) with x3 = t * psi(r), so dV = 2 pi r psi(r) dt dr and the
region becomes the rectangle (0, r0) x (0, 1).  The initial r-mesh is graded
geometrically (ratio 1/2) from r0 down past the cusp length scale
h**(1/(1+alpha)).  Each cell carries a tensor 15-point Kronrod rule with the
embedded 7-point Gauss rule as error estimate; cells whose error exceeds their
volume share of the tolerance are bisected along the worse direction.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import CuspRegion, SolidProfile
from .testfield import TestField

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15)
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
NODES = np.concatenate([-_XK[:-1], _XK[::-1]])  # ascending, 15 nodes
W_KRONROD = np.concatenate([_WK[:-1], _WK[::-1]])
W_GAUSS = np.zeros(15)
W_GAUSS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

COMPONENTS = ("value", "gradient", "dh")


class QuadratureError(RuntimeError):
    """Tolerance not reached; ``result`` holds the best estimate."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


@dataclass
class QuadratureResult:
    value: float
    abs_error: float
    cells: int
    max_depth: int


def _initial_r_edges(profile: SolidProfile, grading_levels: int = 6):
    r0 = profile.r0
    scale = min(profile.cusp_scale, r0) if profile.h > 0 else 0.0
    r_floor = max(scale * 2.0**-grading_levels, r0 * 2.0**-40)
    edges = [r0]
    while edges[-1] * 0.5 > r_floor:
        edges.append(edges[-1] * 0.5)
    edges.append(0.0)
    return np.array(edges[::-1])


def integrate_cusp(integrand, region: CuspRegion, tol: float = 1e-9, rtol: float = 0.0,
                   max_depth: int = 40, max_cells: int = 200_000) -> QuadratureResult:
    """Integrate ``integrand(r, x3)`` against 2 pi r dr dx3 over the cusp region.

    ``integrand`` must accept broadcast numpy arrays.  The run stops once the
    summed error estimate is below ``max(tol, rtol * |value|)``.
    """
    if tol < 0 or rtol < 0 or (tol == 0 and rtol == 0):
        raise ValueError("need tol > 0 or rtol > 0")
    p = region.profile
    vol = region.volume()
    edges = _initial_r_edges(p)
    # cells as rows (r_lo, r_hi, t_lo, t_hi, depth)
    pending = np.column_stack([edges[:-1], edges[1:], np.zeros(len(edges) - 1),
                               np.ones(len(edges) - 1), np.zeros(len(edges) - 1)])
    done_value = 0.0
    done_error = 0.0
    done_cells = 0
    deepest = 0

    while True:
        val, err, err_r, err_t, cell_vol = _evaluate_cells(integrand, p, pending)
        total_value = done_value + val.sum()
        total_error = done_error + err.sum()
        target = max(tol, rtol * abs(total_value))
        deepest = max(deepest, int(pending[:, 4].max()))
        n_cells = done_cells + len(pending)
        result = QuadratureResult(float(total_value), float(total_error), n_cells, deepest)
        if total_error <= target:
            return result
        bad = err > target * cell_vol / vol
        if not bad.any():
            bad = err == err.max()
        good = ~bad
        done_value += val[good].sum()
        done_error += err[good].sum()
        done_cells += int(good.sum())
        to_split = pending[bad]
        if to_split[:, 4].max() >= max_depth or n_cells + len(to_split) > max_cells:
            raise QuadratureError(
                f"tolerance {target:.3g} not reached (error {total_error:.3g}, {n_cells} cells)",
                result)
        pending = _split(to_split, err_r[bad] >= err_t[bad])


def _split(cells, along_r):
    lo = cells.copy()
    hi = cells.copy()
    rmid = 0.5 * (cells[:, 0] + cells[:, 1])
    tmid = 0.5 * (cells[:, 2] + cells[:, 3])
    lo[along_r, 1] = rmid[along_r]
    hi[along_r, 0] = rmid[along_r]
    lo[~along_r, 3] = tmid[~along_r]
    hi[~along_r, 2] = tmid[~along_r]
    lo[:, 4] += 1
    hi[:, 4] += 1
    return np.concatenate([lo, hi])


def _evaluate_cells(integrand, p: SolidProfile, cells):
    r_lo, r_hi, t_lo, t_hi = (cells[:, k][:, None] for k in range(4))
    hr = 0.5 * (r_hi - r_lo)
    ht = 0.5 * (t_hi - t_lo)
    r = (r_lo + hr + hr * NODES)[:, :, None]  # (n, 15, 1)
    t = (t_lo + ht + ht * NODES)[:, None, :]  # (n, 1, 15)
    psi = p.h + r ** (1.0 + p.alpha)
    x3 = t * psi
    f = np.asarray(integrand(*np.broadcast_arrays(r, x3)), dtype=float)
    g = np.broadcast_to(f * (2.0 * math.pi) * r * psi, x3.shape)
    jac = (hr * ht)[:, 0]
    kk = np.einsum("nij,i,j->n", g, W_KRONROD, W_KRONROD) * jac
    gg = np.einsum("nij,i,j->n", g, W_GAUSS, W_GAUSS) * jac
    gk = np.einsum("nij,i,j->n", g, W_GAUSS, W_KRONROD) * jac  # Gauss in r only
    kg = np.einsum("nij,i,j->n", g, W_KRONROD, W_GAUSS) * jac  # Gauss in t only
    if not np.all(np.isfinite(kk)):
        raise FloatingPointError("integrand is not finite on the cusp region")
    # exact cell volume: 2 pi * int r psi dr over the cell times its t-span
    k = 3.0 + p.alpha
    r1, r2 = cells[:, 0], cells[:, 1]
    cell_vol = 2.0 * math.pi * (p.h * (r2**2 - r1**2) / 2.0 + (r2**k - r1**k) / k) * (cells[:, 3] - cells[:, 2])
    return kk, np.abs(kk - gg), np.abs(kk - gk), np.abs(kk - kg), cell_vol


def component_magnitude(field, component: str, r, x3):
    """Pointwise |w|, |grad w| (Frobenius) or |d_h w|."""
    if component == "value":
        wr, w3 = field.velocity(r, x3)
    elif component == "gradient":
        return field.gradient(r, x3).frobenius
    elif component == "dh":
        wr, w3 = field.dh_velocity(r, x3)
    else:
        raise ValueError(f"component must be one of {COMPONENTS}")
    return np.hypot(wr, w3)


def lq_norm(field, component: str, q: float, region: CuspRegion | None = None,
            rtol: float = 1e-8) -> float:
    """(integral of |component|**q dV)**(1/q) over the cusp region."""
    if q < 1:
        raise ValueError("q must be >= 1")
    region = region if region is not None else CuspRegion(field.profile)
    res = integrate_cusp(lambda r, x3: component_magnitude(field, component, r, x3) ** q,
                         region, tol=1e-300, rtol=rtol)
    return res.value ** (1.0 / q)


def critical_exponents(alpha: float) -> tuple[float, float]:
    """(q_grad, q_val): gradient and value norms stay bounded for q below these."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    return (3.0 + alpha) / (1.0 + 2.0 * alpha), 1.0 + 3.0 / alpha


def predicted_exponent(alpha: float, q: float, component: str = "gradient") -> float:
    """Blow-up rate sigma in ||.||_{L^q(cusp)} ~ h**(-sigma); 0 in the bounded range.

    Follows from rescaling r = h**(1/(1+alpha)) s.  The gradient and the
    h-derivative share one rate; the value norm has its own.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if component in ("gradient", "dh"):
        excess = q * (1.0 + 2.0 * alpha) - (3.0 + alpha)
    elif component == "value":
        excess = q * alpha - (3.0 + alpha)
    else:
        raise ValueError(f"component must be one of {COMPONENTS}")
    return max(excess, 0.0) / (q * (1.0 + alpha))


@dataclass
class ScalingFit:
    q: float
    alpha: float
    component: str
    h_values: np.ndarray
    norms: np.ndarray
    slope: float
    intercept: float
    fit_residual: float
    predicted_exponent: float = field(default=0.0)

    def rows(self):
        return [{"h": float(h), "norm": float(n)} for h, n in zip(self.h_values, self.norms)]


def fit_loglog(h_values, norms):
    """Least-squares slope, intercept and RMS residual of log(norm) against log(h)."""
    x = np.log(np.asarray(h_values, dtype=float))
    y = np.log(np.asarray(norms, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def h_sweep(alpha: float, q: float, h_list, component: str = "gradient", r0: float = 0.5,
            d0: float = 0.25, rtol: float = 1e-8, workers: int = 1) -> ScalingFit:
    """L^q norms of the cusp-mode field over a range of gap heights, plus the log-log fit."""
    hs = np.array(sorted({float(h) for h in h_list}, reverse=True))
    if len(hs) < 4 or hs[0] / hs[-1] < 100.0:
        raise ValueError("need at least 4 h values spanning at least 2 decades")
    if np.any(hs <= 0):
        raise ValueError("h values must be positive")

    def norm_at(h):
        return lq_norm(TestField(SolidProfile(alpha, h, r0, d0)), component, q, rtol=rtol)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            norms = np.array(list(pool.map(norm_at, hs)))
    else:
        norms = np.array([norm_at(h) for h in hs])
    slope, intercept, resid = fit_loglog(hs, norms)
    return ScalingFit(q, alpha, component, hs, norms, slope, intercept, resid,
                      predicted_exponent(alpha, q, component))


def scaling_verdict(fit: ScalingFit, q_crit: float, bounded_tol: float = 0.03,
                    blowup_rtol: float = 0.10) -> dict:
    """Compare a fitted slope with the bounded / blow-up prediction."""
    if fit.q < q_crit:
        expected, ok = "bounded", abs(fit.slope) < bounded_tol
    elif fit.q > q_crit:
        sigma = fit.predicted_exponent
        expected, ok = "blow-up", abs(fit.slope + sigma) <= blowup_rtol * sigma
    else:
        expected, ok = "critical", True
    return {"expected": expected, "passed": bool(ok)}
