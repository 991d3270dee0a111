"""Admissibility regions in (p, gamma, alpha) and (gamma, beta, alpha) for collision.

Strict inequalities are kept strict; a point that sits exactly on a strict
boundary is inadmissible and carries ``boundary=True``.  Fractions inside a
minimum that agree to ``TIE_TOL`` are reported as a tie.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

TIE_TOL = 1e-12
DIFFUSIVE = "diffusive"
CONVECTIVE = "convective"
TIE = "tie"
MODES = ("full", "noconv", "heat")


@dataclass(frozen=True)
class ParameterPoint:
    p: float
    gamma: float
    alpha: float
    beta: float | None = None

    def __post_init__(self):
        if not self.gamma > 1.5:
            raise ValueError("gamma must exceed 3/2")
        if not self.p > 1:
            raise ValueError("p must exceed 1")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.beta is not None and not self.beta > 1:
            raise ValueError("beta must exceed 1")


@dataclass
class RegionVerdict:
    admissible: bool
    alpha_bound: float
    binding: str
    constraints: dict
    window: bool
    boundary: bool = False
    tie: bool = False
    mode: str = "full"

    def as_dict(self):
        return asdict(self)


# -- individual thresholds ----------------------------------------------------

def diffusive_bound(p):
    """Stress term: grad w in L^p needs alpha < (3-p)/(2p-1)."""
    return (3.0 - p) / (2.0 * p - 1.0)


def convective_bound(p, gamma):
    """Convective term with the full momentum equation."""
    return 3.0 * (4.0 * p * gamma - 3.0 * p - 6.0 * gamma) / (p * gamma + 3.0 * p + 6.0 * gamma)


def noconv_bound(p, gamma):
    """Time-derivative term (the binding convective-type constraint without convection)."""
    return 9.0 * (p * gamma - p - gamma) / (2.0 * p * gamma + 3.0 * p + 3.0 * gamma)


def initial_momentum_bound(gamma):
    return (3.0 * gamma - 3.0) / (gamma + 1.0)


def gravity_bound(gamma):
    return 3.0 - 3.0 / gamma


def heat_convective_bound(gamma):
    return 3.0 * (gamma - 3.0) / (4.0 * gamma + 3.0)


def heat_diffusive_bound(beta):
    return 3.0 * (beta - 2.0) / (9.0 * beta + 2.0)


def _binding(first, second):
    if abs(first - second) <= TIE_TOL * max(1.0, abs(first), abs(second)):
        return TIE, True
    return (DIFFUSIVE if first < second else CONVECTIVE), False


def _close(a, b):
    return abs(a - b) <= TIE_TOL * max(1.0, abs(a), abs(b))


# -- windows -----------------------------------------------------------------

def full_window(p, gamma) -> bool:
    lower_branch = 1.5 < gamma <= 3.0 and 6.0 * gamma / (4.0 * gamma - 3.0) < p < 3.0
    upper_branch = gamma > 3.0 and 2.0 <= p < 3.0
    return bool(lower_branch or upper_branch)


def equivalent_window(p, gamma) -> tuple[bool, bool]:
    """Both statements of the low-gamma branch of the full-model window."""
    first = 1.5 < gamma <= 3.0 and 6.0 * gamma / (4.0 * gamma - 3.0) < p < 3.0
    second = 2.0 < p < 3.0 and 3.0 * p / (4.0 * p - 6.0) < gamma <= 3.0
    return bool(first), bool(second)


def noconv_window(p, gamma) -> bool:
    return bool(gamma > 1.5 and gamma / (gamma - 1.0) < p < 3.0)


# -- verdicts ----------------------------------------------------------------

def admissible_full(pt: ParameterPoint) -> RegionVerdict:
    p, g, a = pt.p, pt.gamma, pt.alpha
    d, c = diffusive_bound(p), convective_bound(p, g)
    bound = min(d, c)
    binding, tie = _binding(d, c)
    window = full_window(p, g)
    boundary = (_close(p, 3.0) or _close(a, bound)
                or (g <= 3.0 and _close(p, 6.0 * g / (4.0 * g - 3.0))) or _close(g, 1.5))
    return RegionVerdict(
        admissible=window and a < bound,
        alpha_bound=bound,
        binding=binding,
        constraints={"diffusive": d, "convective": c},
        window=window,
        boundary=bool(boundary),
        tie=tie,
        mode="full",
    )


def admissible_noconv(pt: ParameterPoint) -> RegionVerdict:
    p, g, a = pt.p, pt.gamma, pt.alpha
    d, c = diffusive_bound(p), noconv_bound(p, g)
    bound = min(d, c)
    binding, tie = _binding(d, c)
    window = noconv_window(p, g)
    boundary = _close(p, 3.0) or _close(a, bound) or _close(p, g / (g - 1.0))
    return RegionVerdict(
        admissible=window and a < bound,
        alpha_bound=bound,
        binding=binding,
        constraints={"diffusive": d, "convective": c},
        window=window,
        boundary=bool(boundary),
        tie=tie,
        mode="noconv",
    )


def admissible_heat(gamma: float, beta: float, alpha: float) -> RegionVerdict:
    """Newtonian fluid whose viscosity grows with temperature; heat conductivity ~ 1 + s**beta."""
    if min(gamma, beta, alpha) <= 0:
        raise ValueError("gamma, beta and alpha must be positive")
    c, d = heat_convective_bound(gamma), heat_diffusive_bound(beta)
    bound = min(c, d)
    binding, tie = _binding(d, c)
    window = gamma > 3.0 and beta > 2.0
    boundary = _close(gamma, 3.0) or _close(beta, 2.0) or _close(alpha, bound)
    return RegionVerdict(
        admissible=bool(window and alpha < bound),
        alpha_bound=bound,
        binding=binding,
        constraints={"diffusive": d, "convective": c},
        window=bool(window),
        boundary=bool(boundary),
        tie=tie,
        mode="heat",
    )


def auxiliary_thresholds(pt: ParameterPoint) -> list[dict]:
    """Per-integral alpha thresholds and exponent restrictions from the momentum estimates."""
    p, g = pt.p, pt.gamma
    return [
        {"term": "I1", "source": "convection", "alpha_below": convective_bound(p, g),
         "requires": "p >= 2", "holds": p >= 2.0},
        {"term": "I2f", "source": "time derivative, fluid part", "alpha_below": initial_momentum_bound(g),
         "requires": None, "holds": True},
        {"term": "I3", "source": "d_h w_h term", "alpha_below": noconv_bound(p, g),
         "requires": "p*gamma > p + gamma", "holds": p * g > p + g},
        {"term": "I4", "source": "stress", "alpha_below": diffusive_bound(p),
         "requires": "p < 3", "holds": p < 3.0},
        {"term": "I5", "source": "gravity on fluid", "alpha_below": gravity_bound(g),
         "requires": None, "holds": True},
        {"term": "I6f", "source": "initial momentum, fluid part", "alpha_below": initial_momentum_bound(g),
         "requires": None, "holds": True},
    ]


def winner_rule(pt: ParameterPoint, mode: str = "full") -> str:
    """Which fraction of the minimum binds, by the closed-form gamma threshold."""
    p, g = pt.p, pt.gamma
    if mode == "full":
        denom = 5.0 * p - 9.0
    elif mode == "noconv":
        denom = 4.0 * p - 6.0
    else:
        raise ValueError("mode must be 'full' or 'noconv'")
    if denom <= 0:
        return CONVECTIVE
    thresh = 3.0 * p / denom
    if _close(g, thresh):
        return TIE
    return DIFFUSIVE if g > thresh else CONVECTIVE


def direct_winner(pt: ParameterPoint, mode: str = "full") -> str:
    second = convective_bound(pt.p, pt.gamma) if mode == "full" else noconv_bound(pt.p, pt.gamma)
    return _binding(diffusive_bound(pt.p), second)[0]


def starovoitov_blocked(alpha: float, q: float) -> bool:
    """True when alpha (q - 1) >= 3, the regime where collision is impossible."""
    if alpha <= 0 or q < 1:
        raise ValueError("need alpha > 0 and q >= 1")
    return alpha * (q - 1.0) >= 3.0


def ordering_chain(p, gamma):
    """The three members of convective <= noconv <= min(I2f, I5); broadcasts."""
    p = np.asarray(p, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    return (convective_bound(p, gamma), noconv_bound(p, gamma),
            np.minimum(initial_momentum_bound(gamma), gravity_bound(gamma)))


# -- sweeps ------------------------------------------------------------------

@dataclass
class SweepTable:
    columns: tuple
    rows: list = field(default_factory=list)


def _axis(lo, hi, n):
    if n < 1:
        return np.array([])
    if n == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, n)


def sweep(mode: str, first_range, second_range, resolution, alpha: float | None = None) -> SweepTable:
    """Grid evaluation of one admissibility region.

    For ``full``/``noconv`` the axes are (p, gamma); for ``heat`` they are
    (gamma, beta).  ``resolution`` is an int or a pair of ints.  Rows are
    sorted by the two axis values.  When ``alpha`` is given an ``admissible``
    column is added.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    n1, n2 = (resolution, resolution) if np.isscalar(resolution) else resolution
    xs = _axis(*first_range, n1)
    ys = _axis(*second_range, n2)
    if mode == "heat":
        cols = ("gamma", "beta", "alpha_bound", "binding", "window")
    else:
        cols = ("p", "gamma", "alpha_bound", "binding", "window")
    if alpha is not None:
        cols = cols + ("admissible",)
    table = SweepTable(cols)
    for x in xs:
        for y in ys:
            x, y = float(x), float(y)
            if mode == "heat":
                v = admissible_heat(x, y, alpha if alpha is not None else 1.0)
            else:
                fn = admissible_full if mode == "full" else admissible_noconv
                try:
                    v = fn(ParameterPoint(p=x, gamma=y, alpha=alpha if alpha is not None else 1.0))
                except ValueError:
                    continue
            row = [x, y, v.alpha_bound, v.binding, v.window]
            if alpha is not None:
                row.append(v.admissible)
            table.rows.append(row)
    table.rows.sort(key=lambda row: (row[0], row[1]))
    return table
