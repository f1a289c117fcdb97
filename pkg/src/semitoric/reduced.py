"""Symplectic reduction data at a fixed circle-action level.

At level l (shifted so the first focus-focus point sits at l = 0) the reduced
Hamiltonian on the (q2, p2) cylinder is

    H_red(q2, p2) = A(p2) + cos(q2) sqrt(B(p2)),
    A(p2) = l + 1 - p2 - 2 s - l s + (3/2) s p2,
    B(p2) = s^2 (1-s)^2 p2 (p2 - l) (p2 - 4) (p2 - 2 - l),

and level sets at value h (measured relative to the offset 1 - 2s) are the
real branches of the quartic

    P(p2) = B(p2) - (h + (1 - 2s) - A(p2))^2.

The four real roots zeta_1 <= zeta_2 <= zeta_3 <= zeta_4 bracket the
coordinate range so that only the middle two are turning points of the level
curve.  This module computes the roots, the level-curve type (I, II, III) and
the bookkeeping constants used by the action integrals.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLevelError, DomainError, ConsistencyError

__all__ = [
    "CurveType",
    "ReducedLevel",
    "reduced_hamiltonian",
    "separatrix_levels",
    "quartic_coefficients",
    "reduced_level",
    "classify_curve",
]

_TAU_TYPE = 1e-9          # separatrix rejection tolerance in h units
_BRACKET_TOL = 1e-9       # allowed root-bracket violation
_COLLAPSE_TOL = 1e-10     # zeta2 - zeta1 below this flags a pinched cycle


class CurveType(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


def _ab(s: float, l: float, p2):
    a = l + 1.0 - p2 - 2.0 * s - l * s + 1.5 * s * p2
    b = s * s * (1.0 - s) ** 2 * p2 * (p2 - l) * (p2 - 4.0) * (p2 - 2.0 - l)
    return a, b


def reduced_hamiltonian(s: float, l: float, q2: float, p2) -> float:
    """A(p2) + cos(q2) sqrt(B(p2)) on the reduced space at level l."""
    lo, hi = max(0.0, l), min(l + 2.0, 4.0)
    p2a = np.asarray(p2, dtype=float)
    if np.any(p2a < lo - 1e-12) or np.any(p2a > hi + 1e-12):
        raise DomainError(f"p2 outside [{lo}, {hi}] at l = {l}")
    a, b = _ab(s, l, p2a)
    b = np.where(b < 0.0, np.where(b > -1e-14, 0.0, np.nan), b)
    if np.any(np.isnan(b)):
        raise DomainError("B(p2) significantly negative inside coordinate bounds")
    val = a + math.cos(q2) * np.sqrt(b)
    return float(val) if np.isscalar(p2) or np.ndim(p2) == 0 else val


def separatrix_levels(s: float, l: float):
    """h values of the four boundary circles and the p2 range endpoints.

    Returns (h0, hl, h4, h2l, l_minus, l_plus).
    """
    if not -2.0 <= l <= 4.0:
        raise DomainError(f"l = {l} outside [-2, 4]")
    h0 = l * (1.0 - s)
    hl = s * l / 2.0
    h4 = 6.0 * (s - 2.0 / 3.0) + l * (1.0 - s)
    h2l = 3.0 * (s - 2.0 / 3.0) + s * l / 2.0
    return h0, hl, h4, h2l, max(0.0, l), min(l + 2.0, 4.0)


def _h_at_range_ends(s: float, l: float):
    h0, hl, h4, h2l, lm, lp = separatrix_levels(s, l)
    h_lm = h0 if l < 0.0 else hl        # value on the circle p2 = l^-
    h_lp = h2l if l < 2.0 else h4       # value on the circle p2 = l^+
    return h_lm, h_lp


def quartic_coefficients(s: float, l, h):
    """Coefficients (highest first) of P as a degree-4 polynomial in p2.

    Vectorized over l, h: returns shape (..., 5).
    """
    l = np.asarray(l, dtype=float)
    h = np.asarray(h, dtype=float)
    c = s * s * (1.0 - s) ** 2
    e1 = 6.0 + 2.0 * l
    e2 = 8.0 + 10.0 * l + l * l
    e3 = 4.0 * l * (2.0 + l)
    a1 = 1.5 * s - 1.0
    a0 = l + 1.0 - 2.0 * s - l * s
    d = h + (1.0 - 2.0 * s) - a0
    out = np.empty(np.broadcast(l, h).shape + (5,))
    out[..., 0] = c
    out[..., 1] = -c * e1
    out[..., 2] = c * e2 - a1 * a1
    out[..., 3] = -c * e3 + 2.0 * a1 * d
    out[..., 4] = -d * d
    return out


def _newton_polish(coeffs: np.ndarray, roots: np.ndarray, steps: int = 2) -> np.ndarray:
    deriv = np.polyder(coeffs)
    polished = roots.copy()
    for _ in range(steps):
        val = np.polyval(coeffs, polished)
        der = np.polyval(deriv, polished)
        safe = np.abs(der) > 1e-30
        polished = np.where(safe, polished - val / np.where(safe, der, 1.0), polished)
    return polished


@dataclass(frozen=True)
class ReducedLevel:
    """A regular-or-pinched level (l, h) with its quartic and Legendre data."""

    s: float
    l: float
    h: float
    roots: tuple[float, float, float, float]
    k2: float
    n_eta: dict[float, float]
    curve_type: CurveType
    cA: float
    cB: float
    cC: float
    h0: float
    hl: float
    h4: float
    h2l: float
    l_minus: float
    l_plus: float

    @property
    def poles(self) -> tuple[float, float, float]:
        return (self.l, 4.0, 2.0 + self.l)

    def to_json(self) -> str:
        return json.dumps(
            {
                "s": self.s,
                "l": self.l,
                "h": self.h,
                "roots": list(self.roots),
                "k2": self.k2,
                "n_eta": {str(k): v for k, v in self.n_eta.items()},
                "curve_type": self.curve_type.value,
                "cA": self.cA,
                "cB": self.cB,
                "cC": self.cC,
                "h_levels": [self.h0, self.hl, self.h4, self.h2l],
                "p2_range": [self.l_minus, self.l_plus],
            }
        )


def _curve_type_raw(s: float, l: float, h: float) -> CurveType:
    h_lm, h_lp = _h_at_range_ends(s, l)
    if s < 2.0 / 3.0:
        if h > h_lm:
            return CurveType.I
        if h > h_lp:
            return CurveType.II
        return CurveType.III
    if s > 2.0 / 3.0:
        if h > h_lp:
            return CurveType.I
        if h > h_lm:
            return CurveType.II
        return CurveType.III
    return CurveType.I if h > h_lm else CurveType.III


def _correction_constants(s: float, l: float, h: float, z2: float, z3: float):
    """C^A, C^B (area bookkeeping) and C^C (its -d/dl) for the level."""
    t = _curve_type_raw(s, l, h)
    lm, lp = max(0.0, l), min(l + 2.0, 4.0)
    if t is CurveType.I:
        ca = cb = lp - lm
    elif t is CurveType.III:
        ca, cb = z3 - z2, 0.0
    else:
        ca, cb = (lp - z2, lp) if s < 2.0 / 3.0 else (z3 - lm, -lm)

    h_lm, h_lp = _h_at_range_ends(s, l)
    # column by l; l exactly 0 or 2 resolved by the limit from inside (0, 2)
    col = 0 if 0.0 <= l <= 2.0 else (-1 if l < 0.0 else 1)
    if s < 2.0 / 3.0:
        row = 0 if h > h_lm else (1 if h > h_lp else 2)
        table = [{-1: -1.0, 0: 0.0, 1: 1.0}, {-1: -1.0, 0: -1.0, 1: 0.0}, {-1: 0.0, 0: 0.0, 1: 0.0}]
    elif s > 2.0 / 3.0:
        row = 0 if h > h_lp else (1 if h > h_lm else 2)
        table = [{-1: -1.0, 0: 0.0, 1: 1.0}, {-1: 0.0, 0: 1.0, 1: 1.0}, {-1: 0.0, 0: 0.0, 1: 0.0}]
    else:
        row = 0 if h > h_lm else 2
        table = [{-1: -1.0, 0: 0.0, 1: 1.0}, None, {-1: 0.0, 0: 0.0, 1: 0.0}]
    return t, ca, cb, table[row][col]


def reduced_level(s: float, l: float, h: float, *, allow_pinched: bool = False) -> ReducedLevel:
    """Quartic roots and derived data for the level (l, h).

    Roots come from the companion matrix of P followed by two Newton polish
    steps, which stays stable through the near-double-root collision at the
    pinched fiber.  ``allow_pinched`` admits the focus-focus value itself
    (and its close neighborhood), where zeta_1 = zeta_2.
    """
    if not 0.0 < s < 1.0:
        raise DomainError(f"s = {s} must be strictly inside (0, 1)")
    if not -2.0 <= l <= 4.0:
        raise DomainError(f"l = {l} outside [-2, 4]")
    coeffs = quartic_coefficients(s, l, h)
    rts = np.roots(coeffs)
    if np.max(np.abs(rts.imag)) > 1e-6 * max(1.0, np.max(np.abs(rts.real))):
        raise DomainError(
            f"level (l, h) = ({l}, {h}) has complex turning points; outside the image"
        )
    rts = _newton_polish(coeffs, np.sort(rts.real))
    rts = np.sort(rts)
    z1, z2, z3, z4 = (float(r) for r in rts)

    lm, lp = max(0.0, l), min(l + 2.0, 4.0)
    if (
        z1 > min(0.0, l) + _BRACKET_TOL
        or z2 < lm - _BRACKET_TOL
        or z3 > lp + _BRACKET_TOL
        or z4 < max(4.0, l + 2.0) - _BRACKET_TOL
        or z2 > z3 + _BRACKET_TOL
    ):
        raise ConsistencyError(
            f"root bracketing violated at (s, l, h) = ({s}, {l}, {h}): {rts}"
        )
    pinched = (z2 - z1) < _COLLAPSE_TOL
    if pinched and not allow_pinched:
        raise DegenerateLevelError(
            f"vanishing cycle collapsed at (l, h) = ({l}, {h})"
        )

    k2 = (z3 - z2) / (z3 - z1) if z3 > z1 else 0.0
    n_eta = {}
    for eta in (l, 4.0, 2.0 + l):
        n_eta[eta] = (z3 - z2) / (z3 - eta) if z3 != eta else math.inf

    h0, hl, h4, h2l, _, _ = separatrix_levels(s, l)
    t, ca, cb, cc = _correction_constants(s, l, h, z2, z3)
    return ReducedLevel(
        s=s, l=l, h=h,
        roots=(z1, z2, z3, z4),
        k2=k2, n_eta=n_eta,
        curve_type=t, cA=ca, cB=cb, cC=cc,
        h0=h0, hl=hl, h4=h4, h2l=h2l,
        l_minus=lm, l_plus=lp,
    )


def classify_curve(s: float, l: float, h: float):
    """Curve type with the correction constants, rejecting separatrix levels.

    Returns (CurveType, cA, cB, cC).
    """
    h_lm, h_lp = _h_at_range_ends(s, l)
    if min(abs(h - h_lm), abs(h - h_lp)) < _TAU_TYPE and not (l == 0.0 and h > 0.0):
        raise DegenerateLevelError(
            f"h = {h} within {_TAU_TYPE} of a separatrix level at l = {l}"
        )
    lv = reduced_level(s, l, h)
    return lv.curve_type, lv.cA, lv.cB, lv.cC
