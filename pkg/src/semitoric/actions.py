"""Action integral, reduced period and rotation number on the real cycle.

The action is the normalized area cut out by a level curve of the reduced
Hamiltonian,

    I(l, h) = C^A - (1/pi) integral_{zeta2}^{zeta3} arccos(u(p2)) dp2,
    u = (h + (1 - 2s) - A) / sqrt(B),

with C^A the curve-type bookkeeping constant.  The integrand is bounded and
continuous up to the turning points, where its derivative has square-root
singularities; tanh-sinh quadrature handles those without special casing.

The period T = 2 pi dI/dh and rotation number W = -dI/dl are evaluated in
closed form through complete elliptic integrals over the quartic roots.
For a quartic c (p - z1)(p - z2)(z3 - p)(z4 - p) with c = s^2 (1-s)^2 the
single-pass basic integrals over [z2, z3] reduce as

    N_A = 2 K(m) / (sqrt(c (z4 - z2)(z3 - z1))),
    m   = (z3 - z2)(z4 - z1) / ((z4 - z2)(z3 - z1)),

and the third-kind integral N_{B,eta} picks up characteristic

    n' = (z3 - z2)(z1 - eta) / ((z3 - z1)(z2 - eta)).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import ellip_k, ellip_pi
from .errors import DegenerateLevelError, SeparatrixPoleError
from .quadrature import tanh_sinh
from .reduced import CurveType, ReducedLevel, reduced_level, separatrix_levels

__all__ = [
    "ActionRoute",
    "ActionValue",
    "action",
    "basic_integrals",
    "reduced_period",
    "rotation_number",
]


class ActionRoute(enum.Enum):
    QUADRATURE = "quadrature"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class ActionValue:
    value: float
    route: ActionRoute
    est_error: float


def _arccos_integrand(s: float, l: float, h: float):
    shift = h + (1.0 - 2.0 * s)

    def f(p2: np.ndarray) -> np.ndarray:
        a = l + 1.0 - p2 - 2.0 * s - l * s + 1.5 * s * p2
        b = s * s * (1.0 - s) ** 2 * p2 * (p2 - l) * (p2 - 4.0) * (p2 - 2.0 - l)
        b = np.maximum(b, 1e-300)
        u = np.clip((shift - a) / np.sqrt(b), -1.0, 1.0)
        return np.arccos(u)

    return f


def action(s: float, l: float, h: float, abs_tol: float = 1e-12) -> ActionValue:
    """Normalized sublevel area I(l, h); increasing in h.

    The pinched focus-focus value itself is admitted: its integrand stays
    continuous, only T and W blow up there.
    """
    lv = reduced_level(s, l, h, allow_pinched=True)
    z2, z3 = lv.roots[1], lv.roots[2]
    val, err = tanh_sinh(_arccos_integrand(s, l, h), z2, z3, abs_tol=abs_tol)
    return ActionValue(lv.cA - val / math.pi, ActionRoute.QUADRATURE, err / math.pi)


def basic_integrals(level: ReducedLevel) -> tuple[float, dict[float, float]]:
    """Single-pass integrals N_A = int dp/sqrt(P) and N_B,eta over [z2, z3]."""
    z1, z2, z3, z4 = level.roots
    s = level.s
    if z3 - z2 < 1e-12:
        raise DegenerateLevelError("real cycle collapsed; N_A undefined")
    cfac = s * (1.0 - s)
    width = (z4 - z2) * (z3 - z1)
    m = (z3 - z2) * (z4 - z1) / width
    m = min(m, 1.0 - 1e-16)
    kk = ellip_k(m)
    g = 2.0 / (cfac * math.sqrt(width))
    na = g * kk
    n0 = (z3 - z2) / (z3 - z1)
    nb: dict[float, float] = {}
    for eta in level.poles:
        if level.n_eta[eta] >= 1.0 - 1e-12:
            raise SeparatrixPoleError(
                f"pole eta = {eta} enters the real cycle (n_eta >= 1)"
            )
        nprime = (z3 - z2) * (z1 - eta) / ((z3 - z1) * (z2 - eta))
        pi_val = ellip_pi(nprime, m)
        nb[eta] = g / (z2 - eta) * ((n0 / nprime) * kk + (1.0 - n0 / nprime) * pi_val)
    return na, nb


def reduced_period(s: float, l: float, h: float) -> float:
    """Minimal period T of the reduced flow; equals 2 pi dI/dh."""
    lv = reduced_level(s, l, h)
    na, _ = basic_integrals(lv)
    return 2.0 * na


def rotation_number(s: float, l: float, h: float) -> float:
    """Rotation number W = -dI/dl through the elliptic reduction."""
    lv = reduced_level(s, l, h)
    na, nb = basic_integrals(lv)
    _, hl, _, h2l, _, _ = separatrix_levels(s, l)
    return lv.cC + (1.0 / math.pi) * (
        s / 2.0 * na
        - (h - hl) / 2.0 * nb[l]
        - (h - h2l) / 2.0 * nb[2.0 + l]
    )
