"""Vanishing-cycle quantities and the Birkhoff normal form.

The imaginary action J, imaginary period T_alpha and imaginary rotation
number W_alpha are periods over the cycle that collapses at the focus-focus
value.  They are computed by trapezoid quadrature on a circle enclosing the
two collapsing quartic roots (and the partial-fraction pole sitting between
them), with the square-root branch tracked continuously around the loop.
The full cycle period is twice the one-loop circle integral; the residual
sign is fixed by the convention T_alpha > 0, which also makes dJ/dh > 0.

The order-2 expansion of J around the focus-focus value and its inverse, the
Birkhoff normal form h = Z(l, j), are provided as closed-form series; the
inversion contract J(l, Z(l, j)) = j holds through the truncation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContourError, ConvergenceError, DomainError, UnsupportedOrderError
from .model import rho2_squared, system_params
from .reduced import quartic_coefficients, reduced_level, separatrix_levels
from .series import BivariateSeries, invert_second

__all__ = [
    "ContourSpec",
    "design_contour",
    "j_series",
    "z_closed_series",
    "imaginary_action",
    "imaginary_period_rotation",
    "birkhoff_normal_form",
    "contour_j_batch",
]

_NODES_START = 512
_NODES_CAP = 8192
_DOUBLING_TOL = 1e-10


@dataclass(frozen=True)
class ContourSpec:
    """Circle in the complex p2 plane around the collapsing root pair."""

    center: complex
    radius: float
    nodes: int
    enclosed: tuple[float, ...]
    excluded: tuple[float, ...]


def _r_i_coeffs(s: float, l: float, h: float):
    h0, hl, h4, h2l, _, _ = separatrix_levels(s, l)
    lin = (h0 + hl - h4 - h2l) / 6.0
    const = (4.0 * h - h0 - hl - h4 - h2l) / 2.0
    return lin, const, (
        (l, l / 2.0 * (h - hl)),
        (4.0, 2.0 * (h - h4)),
        (2.0 + l, (2.0 + l) / 2.0 * (h - h2l)),
    )


def _r_i(s: float, l: float, h: float, p: np.ndarray) -> np.ndarray:
    lin, const, poles = _r_i_coeffs(s, l, h)
    out = lin * p + const
    for pole, coef in poles:
        out = out + coef / (p - pole)
    return out


def _r_w(s: float, l: float, h: float, p: np.ndarray) -> np.ndarray:
    _, hl, _, h2l, _, _ = separatrix_levels(s, l)
    return s / 2.0 - 0.5 * (h - hl) / (p - l) - 0.5 * (h - h2l) / (p - 2.0 - l)


def design_contour(s: float, l: float, h: float, nodes: int = _NODES_START) -> ContourSpec:
    """Admissible circle around (zeta1, zeta2), or ContourError if none fits."""
    lv = reduced_level(s, l, h, allow_pinched=True)
    z1, z2, z3, z4 = lv.roots
    center = (z1 + z2) / 2.0
    half_gap = (z2 - z1) / 2.0
    excluded = (z3, z4, 4.0, 2.0 + l)
    dmin = min(abs(e - center) for e in excluded)
    lo = 1.1 * half_gap
    hi = 0.5 * dmin
    if hi <= lo * 1.0001 + 1e-15:
        raise ContourError(
            f"no admissible contour at (l, h) = ({l}, {h}): separatrix proximity"
        )
    radius = math.sqrt(max(lo, 0.02 * hi) * hi)
    radius = min(max(radius, lo * 1.001 + 1e-15), hi * 0.999)
    return ContourSpec(
        center=complex(center),
        radius=radius,
        nodes=nodes,
        enclosed=(z1, z2, l),
        excluded=excluded,
    )


def _loop_values(s: float, l: float, h: float, spec: ContourSpec, nodes: int):
    """One-loop circle integrals of (1, R_I, R_W) dp / sqrt(P)."""
    coeffs = quartic_coefficients(s, l, h)
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    p = spec.center + spec.radius * np.exp(1j * theta)
    pv = np.zeros_like(p)
    for c in coeffs:
        pv = pv * p + c
    ang = np.unwrap(np.angle(pv))
    sq = np.sqrt(np.abs(pv)) * np.exp(0.5j * ang)
    dp = 1j * (p - spec.center) * (2.0 * math.pi / nodes)
    base = dp / sq
    return (
        complex(np.sum(base)),
        complex(np.sum(_r_i(s, l, h, p) * base)),
        complex(np.sum(_r_w(s, l, h, p) * base)),
    )


def _alpha_periods(s: float, l: float, h: float) -> tuple[float, float, float]:
    """(J, T_alpha, W_alpha) by node-doubled contour quadrature."""
    spec = design_contour(s, l, h)
    nodes = spec.nodes
    prev = None
    while True:
        one, ri, rw = _loop_values(s, l, h, spec, nodes)
        # full cycle = twice the loop; divide out the orientation factor i
        t_alpha = 2.0 * (one / 1j)
        jj = 2.0 * (ri / (2j * math.pi))
        ww = 2.0 * (rw / (2j * math.pi))
        if t_alpha.real < 0.0:
            t_alpha, jj, ww = -t_alpha, -jj, -ww
        if abs(jj.imag) > 1e-6 * max(1.0, abs(jj.real)):
            raise ConvergenceError("contour quadrature returned non-real action")
        if prev is not None and abs(jj.real - prev) < _DOUBLING_TOL:
            return jj.real, t_alpha.real, ww.real
        if nodes >= _NODES_CAP:
            if prev is not None and abs(jj.real - prev) < 1e3 * _DOUBLING_TOL:
                return jj.real, t_alpha.real, ww.real
            raise ConvergenceError(
                f"contour quadrature not converged at {nodes} nodes"
            )
        prev = jj.real
        nodes *= 2


def _j_quadratic_coeffs(s: float) -> tuple[float, float, float, float, float]:
    """(c_l, c_h, c_ll, c_lh, c_hh) of the order-2 expansion of J(l, h)."""
    r2sq = rho2_squared(s)
    if r2sq <= 0.0:
        raise DomainError(f"s = {s} outside the focus-focus window")
    r2 = math.sqrt(r2sq)
    pref = 8.0 * s**2 * (1.0 - s) ** 2 / r2**5
    a_ll = 44.0 * s**5 - 128.0 * s**4 + 115.0 * s**3 - 28.0 * s**2 + 2.0 * s - 4.0
    a_lh = 2.0 * (16.0 * s**4 - 32.0 * s**3 + 25.0 * s**2 - 30.0 * s + 16.0)
    a_hh = -18.0 * (2.0 - 3.0 * s)
    return (
        -(2.0 - s) / r2,
        4.0 / r2,
        -pref * a_ll,
        -pref * a_lh,
        -pref * a_hh,
    )


def j_series(s: float, max_degree: int = 2) -> BivariateSeries:
    """Order-2 expansion of the imaginary action, variables (l, h)."""
    if max_degree < 1:
        raise UnsupportedOrderError("j_series needs max_degree >= 1")
    if max_degree > 2:
        raise UnsupportedOrderError(
            "imaginary-action expansion implemented through order 2 only"
        )
    cl, ch, cll, clh, chh = _j_quadratic_coeffs(s)
    terms = {(1, 0): cl, (0, 1): ch}
    if max_degree >= 2:
        terms.update({(2, 0): cll, (1, 1): clh, (0, 2): chh})
    return BivariateSeries(max_degree, terms)


def z_closed_series(s: float, max_degree: int = 2) -> BivariateSeries:
    """Closed-form Birkhoff normal form h = Z(l, j) through order 2."""
    if max_degree < 1 or max_degree > 2:
        raise UnsupportedOrderError("z_closed_series supports degrees 1 and 2")
    r2sq = rho2_squared(s)
    if r2sq <= 0.0:
        raise DomainError(f"s = {s} outside the focus-focus window")
    r2 = math.sqrt(r2sq)
    q = (1.0 - s) ** 2 * s**2 / (4.0 * r2sq)
    terms = {(1, 0): (2.0 - s) / 4.0, (0, 1): r2 / 4.0}
    if max_degree >= 2:
        terms.update(
            {
                (1, 1): q * 2.0 * r2,
                (0, 2): q * (-9.0) * (2.0 - 3.0 * s),
                (2, 0): q * (-3.0) * (2.0 - 3.0 * s),
            }
        )
    return BivariateSeries(max_degree, terms)


def birkhoff_normal_form(s: float, order: int = 2) -> BivariateSeries:
    """Birkhoff normal form obtained by inverting the imaginary action series."""
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(f"s = {s} outside the focus-focus window")
    return invert_second(j_series(s, order))


def imaginary_action(s: float, l: float, h: float, route: str = "contour") -> float:
    """Imaginary action J(l, h) near the first focus-focus value."""
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(f"s = {s} outside the focus-focus window")
    if route == "series":
        return j_series(s).eval(l, h)
    if route == "contour":
        jj, _, _ = _alpha_periods(s, l, h)
        return jj
    raise DomainError(f"unknown route {route!r}")


def imaginary_period_rotation(s: float, l: float, h: float) -> tuple[float, float]:
    """(T_alpha, W_alpha) by the contour route, T_alpha > 0."""
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(f"s = {s} outside the focus-focus window")
    _, t_alpha, w_alpha = _alpha_periods(s, l, h)
    return t_alpha, w_alpha


def contour_j_batch(s: float, l: np.ndarray, h: np.ndarray, nodes: int = 512):
    """Vectorized contour J over many levels; returns (values, feasible mask).

    Infeasible levels (separatrix proximity, complex turning points) are left
    NaN with mask False.  Used as the exact fallback when series validity is
    in doubt over a sampling grid.
    """
    l = np.asarray(l, dtype=float)
    h = np.asarray(h, dtype=float)
    coeffs = quartic_coefficients(s, l, h)
    n = l.shape[0]
    roots = np.empty((n, 4))
    feas = np.zeros(n, dtype=bool)
    for i in range(n):
        r = np.roots(coeffs[i])
        if np.max(np.abs(r.imag)) > 1e-7 * max(1.0, np.max(np.abs(r.real))):
            continue
        roots[i] = np.sort(r.real)
        feas[i] = True
    z1, z2, z3, z4 = roots.T
    center = (z1 + z2) / 2.0
    half = (z2 - z1) / 2.0
    dmin = np.minimum(np.abs(z3 - center), np.abs(z4 - center))
    dmin = np.minimum(dmin, np.abs(4.0 - center))
    dmin = np.minimum(dmin, np.abs(2.0 + l - center))
    ok = feas & (1.1 * half < 0.5 * dmin) & (half >= 0.0)
    out = np.full(n, np.nan)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return out, ok
    lo = 1.1 * half[idx]
    hi = 0.5 * dmin[idx]
    rad = np.sqrt(np.maximum(lo, 0.02 * hi) * hi)
    rad = np.minimum(np.maximum(rad, lo * 1.001 + 1e-15), hi * 0.999)
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    p = center[idx, None] + rad[:, None] * np.exp(1j * theta)[None, :]
    pv = np.zeros_like(p)
    for k in range(5):
        pv = pv * p + coeffs[idx, k][:, None]
    ang = np.unwrap(np.angle(pv), axis=1)
    sq = np.sqrt(np.abs(pv)) * np.exp(0.5j * ang)
    dp = 1j * (p - center[idx, None]) * (2.0 * math.pi / nodes)
    base = dp / sq
    t_alpha = 2.0 * np.sum(base, axis=1) / 1j
    sgn = np.where(t_alpha.real > 0.0, 1.0, -1.0)
    h0 = l[idx] * (1.0 - s)
    hl = s * l[idx] / 2.0
    h4 = 6.0 * (s - 2.0 / 3.0) + l[idx] * (1.0 - s)
    h2l = 3.0 * (s - 2.0 / 3.0) + s * l[idx] / 2.0
    lin = (h0 + hl - h4 - h2l) / 6.0
    const = (4.0 * h[idx] - h0 - hl - h4 - h2l) / 2.0
    ri = (
        lin[:, None] * p
        + const[:, None]
        + (l[idx] / 2.0 * (h[idx] - hl))[:, None] / (p - l[idx][:, None])
        + (2.0 * (h[idx] - h4))[:, None] / (p - 4.0)
        + ((2.0 + l[idx]) / 2.0 * (h[idx] - h2l))[:, None] / (p - 2.0 - l[idx][:, None])
    )
    jv = sgn * 2.0 * np.real(np.sum(ri * base, axis=1) / (2j * math.pi))
    out[idx] = jv
    return out, ok
