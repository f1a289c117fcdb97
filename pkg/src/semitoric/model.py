"""The coupled angular-momenta family on S2 x S2.

The system is the pair of commuting Hamiltonians

    L = z1 + 2 z2
    H = (1-s) z1 + s z2 + 2 (1-s) s (x1 x2 + y1 y2)

on the product of unit spheres with symplectic form -(w_S2 (+) 2 w_S2),
where s in [0, 1].  Two of the four rank-0 points (the mixed pole products)
change type from elliptic-elliptic to focus-focus on an explicit parameter
window (s_minus, s_plus).

Internally the chart coordinates (q1, p1, q2, p2) of the cylinder-type
parametrization are used, with the shifted variable l = p1 + 1 so that the
first focus-focus point sits at l = 0.  The polygon abscissa is L = l - 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTransitionError, DomainError, ValidationError

__all__ = [
    "S_MINUS",
    "S_PLUS",
    "SystemParams",
    "PhasePoint",
    "system_params",
    "momentum_map",
    "chart_to_cartesian",
    "classify_fixed_points",
    "fixed_point_eigenvalues",
]

# closed forms of the transition parameters, the two roots in [0, 1] of
# 32 s^4 - 64 s^3 + 23 s^2 + 12 s - 4
S_PLUS = (8.0 - 3.0 * math.sqrt(2.0) + math.sqrt(82.0 + 16.0 * math.sqrt(2.0))) / 16.0
S_MINUS = (8.0 + 3.0 * math.sqrt(2.0) - math.sqrt(82.0 - 16.0 * math.sqrt(2.0))) / 16.0

_POLES = {
    "NxN": (0.0, 0.0, 1.0, 0.0, 0.0, 1.0),
    "NxS": (0.0, 0.0, 1.0, 0.0, 0.0, -1.0),
    "SxN": (0.0, 0.0, -1.0, 0.0, 0.0, 1.0),
    "SxS": (0.0, 0.0, -1.0, 0.0, 0.0, -1.0),
}


def rho1_of(s: float) -> float:
    return math.sqrt(4.0 - 12.0 * s + 13.0 * s**2 - 8.0 * s**3 + 4.0 * s**4)


def rho2_squared(s: float) -> float:
    return -4.0 + 12.0 * s + 23.0 * s**2 - 64.0 * s**3 + 32.0 * s**4


@dataclass(frozen=True)
class SystemParams:
    """Coupling parameter with its derived constants."""

    s: float
    rho1: float
    rho2: float | None
    s_minus: float
    s_plus: float
    has_ff: bool


def system_params(s: float) -> SystemParams:
    """Constants of the system at coupling s; rho2 only inside the window."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s = {s} outside [0, 1]")
    has_ff = S_MINUS < s < S_PLUS
    r2sq = rho2_squared(s)
    rho2 = math.sqrt(r2sq) if has_ff and r2sq > 0.0 else None
    return SystemParams(
        s=float(s),
        rho1=rho1_of(s),
        rho2=rho2,
        s_minus=S_MINUS,
        s_plus=S_PLUS,
        has_ff=has_ff,
    )


@dataclass(frozen=True)
class PhasePoint:
    """A point of S2 x S2, in cartesian or chart coordinates.

    Cartesian: (x1, y1, z1, x2, y2, z2), each triple on the unit sphere.
    Chart: (q1, p1, q2, p2) with angles in [-pi, pi] and
    max(0, l) <= p2 <= min(l + 2, 4) where l = p1 + 1.
    """

    cartesian: tuple[float, ...] | None = None
    chart: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if (self.cartesian is None) == (self.chart is None):
            raise ValidationError("exactly one of cartesian/chart must be given")
        if self.cartesian is not None:
            c = self.cartesian
            if len(c) != 6:
                raise ValidationError("cartesian point needs 6 components")
            for i in (0, 3):
                n = c[i] ** 2 + c[i + 1] ** 2 + c[i + 2] ** 2
                if abs(n - 1.0) > 1e-12:
                    raise ValidationError(f"factor {i // 3 + 1} off the unit sphere by {abs(n-1.0):.2e}")
        else:
            q1, p1, q2, p2 = self.chart
            if not (-math.pi <= q1 <= math.pi and -math.pi <= q2 <= math.pi):
                raise ValidationError("chart angles must lie in [-pi, pi]")
            l = p1 + 1.0
            lo, hi = max(0.0, l), min(l + 2.0, 4.0)
            if not lo - 1e-12 <= p2 <= hi + 1e-12:
                raise ValidationError(
                    f"p2 = {p2} outside [{lo}, {hi}] at l = {l}"
                )

    @classmethod
    def from_cartesian(cls, x1, y1, z1, x2, y2, z2) -> "PhasePoint":
        return cls(cartesian=(x1, y1, z1, x2, y2, z2))

    @classmethod
    def from_chart(cls, q1, p1, q2, p2) -> "PhasePoint":
        return cls(chart=(q1, p1, q2, p2))


def chart_to_cartesian(q1: float, p1: float, q2: float, p2: float) -> tuple[float, ...]:
    """Invert the chart: theta1 = -q1, theta2 = -q1 - q2, z2 = p2/2 - 1."""
    z2 = p2 / 2.0 - 1.0
    z1 = p1 - 2.0 * z2
    if abs(z1) > 1.0 + 1e-12 or abs(z2) > 1.0 + 1e-12:
        raise ValidationError("chart point maps off the spheres")
    z1 = min(1.0, max(-1.0, z1))
    z2 = min(1.0, max(-1.0, z2))
    th1 = -q1
    th2 = -q1 - q2
    r1 = math.sqrt(max(0.0, 1.0 - z1 * z1))
    r2 = math.sqrt(max(0.0, 1.0 - z2 * z2))
    return (
        r1 * math.cos(th1),
        r1 * math.sin(th1),
        z1,
        r2 * math.cos(th2),
        r2 * math.sin(th2),
        z2,
    )


def momentum_map(pt: PhasePoint, s: float) -> tuple[float, float]:
    """(L, H_s) at a phase point, in either coordinate system."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s = {s} outside [0, 1]")
    if pt.cartesian is not None:
        x1, y1, z1, x2, y2, z2 = pt.cartesian
        lv = z1 + 2.0 * z2
        hv = (1.0 - s) * z1 + s * z2 + 2.0 * (1.0 - s) * s * (x1 * x2 + y1 * y2)
        return lv, hv
    q1, p1, q2, p2 = pt.chart
    rad = p2 * (p2 - p1 - 1.0) * (p2 - 4.0) * (p2 - p1 - 3.0)
    rad = max(rad, 0.0)
    hv = (
        p1
        - p2
        + 2.0
        - s * (p1 - p2 + 2.0)
        + s / 2.0 * (p2 - 2.0)
        + (1.0 - s) * s * math.sqrt(rad) * math.cos(q2)
    )
    return p1, hv


def _fixed_point_matrices(name: str, s: float):
    """omega and Hessians at a pole product, in local sphere charts.

    Near a pole sigma = +-1 the sphere chart is (x, y) with
    z = sigma (1 - (x^2 + y^2)/2) + O(4) and area form sigma dx ^ dy, so the
    Hessians of L and H are exact quadratics there.
    """
    c = _POLES[name]
    s1 = c[2]
    s2 = c[5]
    d2l = np.diag([-s1, -s1, -2.0 * s2, -2.0 * s2])
    d2h = np.zeros((4, 4))
    d2h[0, 0] = d2h[1, 1] = -(1.0 - s) * s1
    d2h[2, 2] = d2h[3, 3] = -s * s2
    cc = 2.0 * (1.0 - s) * s
    d2h[0, 2] = d2h[2, 0] = cc
    d2h[1, 3] = d2h[3, 1] = cc
    omega = np.zeros((4, 4))
    omega[0, 1] = -s1
    omega[1, 0] = s1
    omega[2, 3] = -2.0 * s2
    omega[3, 2] = 2.0 * s2
    return omega, d2l, d2h


def fixed_point_eigenvalues(name: str, s: float, mix: float = 0.0) -> np.ndarray:
    """Eigenvalues of omega^{-1} d^2(H + mix * L) at a pole product."""
    omega, d2l, d2h = _fixed_point_matrices(name, s)
    return np.linalg.eigvals(np.linalg.solve(omega, d2h + mix * d2l))


def _classify_one(name: str, s: float) -> str:
    # a generic mix separates eigenvalues when d2H alone is resonant
    for mix in (0.0, 0.37, -0.23, 0.11):
        ev = fixed_point_eigenvalues(name, s, mix)
        re = np.abs(ev.real)
        im = np.abs(ev.imag)
        scale = max(np.max(np.abs(ev)), 1e-30)
        distinct = all(
            abs(ev[i] - ev[j]) > 1e-9 * scale
            for i in range(4)
            for j in range(i + 1, 4)
        )
        if not distinct:
            continue
        if np.all(re > 1e-9 * scale) and np.all(im > 1e-9 * scale):
            return "focus-focus"
        if np.all(re <= 1e-9 * scale) and np.all(im > 1e-9 * scale):
            return "elliptic-elliptic"
        if np.all(im <= 1e-9 * scale):
            # real quadruple would be hyperbolic-hyperbolic; excluded here
            continue
    raise DegenerateTransitionError(
        f"eigenvalue type at {name} is degenerate for s = {s}"
    )


def classify_fixed_points(s: float) -> list[tuple[str, str]]:
    """Types of the four rank-0 points at parameter s.

    Raises at the transition values s_minus, s_plus (Hamiltonian-Hopf points).
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s = {s} outside [0, 1]")
    if min(abs(s - S_MINUS), abs(s - S_PLUS)) < 1e-13:
        raise DegenerateTransitionError(
            f"s = {s} is a Hamiltonian-Hopf transition value"
        )
    out = []
    for name in ("NxN", "NxS", "SxN", "SxS"):
        if s in (0.0, 1.0):
            # decoupled rotations, all four points elliptic-elliptic
            out.append((name, "elliptic-elliptic"))
        else:
            out.append((name, _classify_one(name, s)))
    return out
