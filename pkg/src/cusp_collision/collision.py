"""Energy budget, final collision inequality, mass threshold and a touchdown demo."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import bisect

from .quadrature import predicted_exponent

MASS_BRACKET = (1e-3, 1e9)
MASS_RTOL = 1e-10


class NoSolutionError(RuntimeError):
    pass


@dataclass
class CollisionBudget:
    fluid_energy: float  # integral of |m0|^2 / (2 rho0) + rho0^gamma / (gamma - 1)
    m: float
    V0: float = 0.0
    J0: float = 0.0
    omega0: float = 0.0
    g: float = 1.0
    C0: float = 1.0
    p: float = 2.0
    gamma: float = 3.0

    def __post_init__(self):
        for name in ("fluid_energy", "m", "J0", "g"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.m <= 0:
            raise ValueError("mass must be positive")
        if self.C0 <= 0:
            raise ValueError("C0 must be positive")


@dataclass
class FeasibilityReport:
    E0: float
    lhs: float
    collides: bool
    time_bound: float | None

    def as_dict(self):
        return {"E0": self.E0, "lhs": self.lhs, "collides": self.collides, "time_bound": self.time_bound}


def energy_budget(budget: CollisionBudget) -> float:
    """E0 = fluid energy + m V0^2 / 2 + J0 omega0^2 / 2."""
    return (budget.fluid_energy + 0.5 * budget.m * budget.V0**2
            + 0.5 * budget.J0 * budget.omega0**2)


def energy_exponent(gamma: float, p: float) -> float:
    return 0.5 + 1.0 / gamma + 1.0 / p


def collision_lhs(C0: float, m: float, E0: float, gamma: float, p: float) -> float:
    """C0 max(m^-1/2, m^-3/2) (1 + E0^(1/2 + 1/gamma + 1/p))."""
    return C0 * max(m**-0.5, m**-1.5) * (1.0 + E0 ** energy_exponent(gamma, p))


def time_bound(K: float) -> float:
    """Largest T with T <= K (1 + T), valid for 0 <= K < 1."""
    if not 0 <= K < 1:
        raise ValueError("time bound needs 0 <= K < 1")
    return K / (1.0 - K)


def feasibility(budget: CollisionBudget) -> FeasibilityReport:
    E0 = energy_budget(budget)
    K = collision_lhs(budget.C0, budget.m, E0, budget.gamma, budget.p)
    collides = K < 1.0
    return FeasibilityReport(E0, K, collides, time_bound(K) if collides else None)


@dataclass
class MassThreshold:
    m_star: float
    branch: str  # "large" (m >= 1) or "small" (m < 1)
    E0: float
    lhs_factor: float  # C0 (1 + E0^...)
    at_lower_bracket: bool = False

    def as_dict(self):
        return {"m_star": self.m_star, "branch": self.branch, "E0": self.E0,
                "lhs_factor": self.lhs_factor, "at_lower_bracket": self.at_lower_bracket}


def min_mass(C0: float, fluid_energy: float, v0_coeff: float = 0.0, omega0_coeff: float = 0.0,
             j0: float = 0.0, gamma: float = 3.0, p: float = 2.0,
             bracket=MASS_BRACKET, rtol: float = MASS_RTOL) -> MassThreshold:
    """Smallest mass for which the collision inequality holds.

    Initial speeds scale as V0 = v0_coeff / sqrt(m), omega0 = omega0_coeff / sqrt(m)
    and ``j0`` is the moment of inertia per unit mass, so E0 does not depend
    on m.  K(m) is then strictly decreasing and the threshold is found by
    bisection in log(m).  Returns the bracket's lower end if K < 1 there.
    """
    if C0 <= 0:
        raise ValueError("C0 must be positive")
    if min(fluid_energy, j0) < 0:
        raise ValueError("energies and inertia must be nonnegative")
    E0 = fluid_energy + 0.5 * v0_coeff**2 + 0.5 * j0 * omega0_coeff**2
    factor = C0 * (1.0 + E0 ** energy_exponent(gamma, p))
    m_lo, m_hi = bracket

    def log_k(log_m):
        m = math.exp(log_m)
        return math.log(factor * max(m**-0.5, m**-1.5))

    if log_k(math.log(m_hi)) >= 0.0:
        raise NoSolutionError(f"K(m) >= 1 at the top of the bracket m = {m_hi:g}")
    if log_k(math.log(m_lo)) < 0.0:
        return MassThreshold(m_lo, "small" if m_lo < 1 else "large", E0, factor, at_lower_bracket=True)
    log_m = bisect(log_k, math.log(m_lo), math.log(m_hi), xtol=rtol * 0.1, rtol=1e-15, maxiter=500)
    m_star = math.exp(log_m)
    return MassThreshold(m_star, "small" if m_star < 1 else "large", E0, factor)


# -- quasi-static touchdown ---------------------------------------------------

@dataclass
class TouchdownResult:
    t: np.ndarray
    h: np.ndarray
    touchdown_time: float | None
    closed_form: float | None
    level_heights: np.ndarray
    level_times: np.ndarray


def touchdown_closed_form(m, g, c, sigma, h_init):
    """c h0^(1-sigma) / (m g (1-sigma)) for sigma < 1, None otherwise."""
    if sigma >= 1:
        return None
    return c * h_init ** (1.0 - sigma) / (m * g * (1.0 - sigma))


def drag_exponent(alpha: float, q: float = 2.0) -> float:
    """Drag growth rate q * sigma, with sigma the cusp blow-up rate of ||grad w||_{L^q}.

    For q = 2 this links the demo to the Newtonian dissipation scaling; it
    is a convenience, not a derived law.
    """
    return q * predicted_exponent(alpha, q)


def fall_demo(m: float, g: float, c: float, sigma: float, h_init: float,
              h_cut: float = 1e-12, rtol: float = 1e-11, samples: int = 200) -> TouchdownResult:
    """Integrate dh/dt = -m g / D(h), D(h) = c h^-sigma, until h reaches h_cut.

    Integration runs in s = log h.  Crossing times of the levels
    h_init * 10^-k are recorded and the time to reach h = 0 is extrapolated
    from their geometric spacing (Aitken).  A ratio of successive level gaps
    that does not fall below 1 means the time diverges: no touchdown.
    """
    if m <= 0 or g <= 0 or c <= 0 or sigma < 0 or h_init <= 0:
        raise ValueError("need m, g, c, h_init > 0 and sigma >= 0")
    if not 0 < h_cut < h_init:
        raise ValueError("need 0 < h_cut < h_init")
    rate = m * g / c
    s0, s_cut = math.log(h_init), math.log(h_cut)
    n_levels = int(math.floor((s0 - s_cut) / math.log(10.0)))
    levels = s0 - math.log(10.0) * np.arange(1, n_levels + 1)

    def rhs(t, s):
        return [-rate * math.exp((sigma - 1.0) * s[0])]

    events = []
    for lvl in levels:
        ev = (lambda lv: lambda t, s: s[0] - lv)(lvl)
        ev.terminal = False
        ev.direction = -1
        events.append(ev)
    stop = lambda t, s: s[0] - s_cut  # noqa: E731
    stop.terminal = True
    stop.direction = -1
    events.append(stop)

    # D(h) <= c max(h_cut, h_init)^-sigma bounds the time to reach h_cut
    t_max = 2.0 * h_init * max(h_cut ** -sigma, h_init ** -sigma) / rate
    sol = solve_ivp(rhs, (0.0, t_max), [s0], method="DOP853", rtol=rtol, atol=1e-12,
                    events=events, dense_output=True)
    level_times = np.array([te[0] if len(te) else np.nan for te in sol.t_events[:-1]])
    t_end = sol.t[-1]
    t_grid = np.linspace(0.0, t_end, samples)
    h_grid = np.exp(sol.sol(t_grid)[0])

    touchdown = None
    valid = level_times[np.isfinite(level_times)]
    if len(valid) >= 3:
        d1 = valid[-2] - valid[-3]
        d2 = valid[-1] - valid[-2]
        ratio = d2 / d1
        if ratio < 1.0 - 1e-6:
            touchdown = float(valid[-1] + d2 * ratio / (1.0 - ratio))
    return TouchdownResult(t_grid, h_grid, touchdown,
                           touchdown_closed_form(m, g, c, sigma, h_init),
                           np.exp(levels), level_times)
