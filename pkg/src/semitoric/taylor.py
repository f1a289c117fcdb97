"""Taylor data of the desingularized action at the focus-focus points.

The desingularized action S(z) = 2 pi I(z) - 2 pi I(0) + Im(z log z - z) is
smooth across the focus-focus value; its degree-2 Taylor polynomial (zero
constant term, l-coefficient normalized into [-pi/2, 3pi/2)) is the series
invariant computed here, both from closed forms and by numerics.

The numerical route evaluates the partial derivatives

    dS/dl = 2 pi (W_alpha T / T_alpha - W)|_{h = Z(l,j)} + arg(w)
    dS/dj = 2 pi (T / T_alpha)|_{h = Z(l,j)} + log|w|,     w = l + i j,

with arg taken continuous off the upward vertical ray (values in
(-3 pi/2, pi/2]); with that branch both partials extend continuously over
the downward ray and across the left horizontal direction, as the smoothness
of S requires.  Radial Richardson extrapolation recovers the constant terms
and a central-difference stencil the quadratic ones.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .actions import reduced_period, rotation_number
from .errors import DomainError
from .model import rho1_of, rho2_squared, system_params
from .series import BivariateSeries
from .vanishing import imaginary_period_rotation, z_closed_series

__all__ = [
    "TaylorInvariant",
    "desingularized_partials",
    "taylor_closed",
    "taylor_numeric",
    "symmetry_transform",
    "normalize_representative",
    "WINDOW_LO",
    "WINDOW_HI",
]

WINDOW_LO = -math.pi / 2.0
WINDOW_HI = 3.0 * math.pi / 2.0


@dataclass(frozen=True)
class TaylorInvariant:
    """Degree-2 truncation of the series invariant at one focus-focus point."""

    ff_index: int
    coeffs: BivariateSeries
    window_ok: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "ff": self.ff_index,
                "terms": sorted(
                    [a, b, c] for (a, b), c in self.coeffs.coeffs.items()
                ),
                "window_ok": self.window_ok,
            }
        )


def _arg_cut_up(l: float, j: float) -> float:
    """Argument of l + i j, continuous off the upward ray, in (-3pi/2, pi/2]."""
    a = math.atan2(j, l)
    return a - 2.0 * math.pi if a > math.pi / 2.0 else a


def desingularized_partials(s: float, l: float, j: float) -> tuple[float, float]:
    """(dS/dl, dS/dj) at (l, j) != 0 near the first focus-focus point."""
    if l == 0.0 and j == 0.0:
        raise DomainError("partials are evaluated away from the origin")
    z = z_closed_series(s)
    h = z.eval(l, j)
    t = reduced_period(s, l, h)
    w = rotation_number(s, l, h)
    t_alpha, w_alpha = imaginary_period_rotation(s, l, h)
    ds_dl = 2.0 * math.pi * (w_alpha * t / t_alpha - w) + _arg_cut_up(l, j)
    ds_dj = 2.0 * math.pi * t / t_alpha + 0.5 * math.log(l * l + j * j)
    return ds_dl, ds_dj


def _closed_coefficients(s: float) -> tuple[float, float, float, float, float]:
    """(a_l, a_j, c_ll, c_lj, c_jj) of the series at the first point."""
    r2sq = rho2_squared(s)
    if r2sq <= 0.0:
        raise DomainError(f"s = {s} outside the focus-focus window")
    r2 = math.sqrt(r2sq)
    r1 = rho1_of(s)
    a_l = math.atan((6.0 - 9.0 * s) / r2)
    a_j = math.log(r2**3 / (math.sqrt(2.0) * r1 * (1.0 - s) ** 2 * s**2))
    den = r2**3 * r1**2
    q_ll = (
        16.0 - 96.0 * s - 216.0 * s**2 + 1944.0 * s**3 - 3211.0 * s**4
        + 424.0 * s**5 + 3252.0 * s**6 - 2816.0 * s**7 + 704.0 * s**8
    )
    q_lj = (
        16.0 - 96.0 * s + 360.0 * s**2 - 936.0 * s**3 + 2693.0 * s**4
        - 6200.0 * s**5 + 8004.0 * s**6 - 5120.0 * s**7 + 1280.0 * s**8
    )
    q_jj = (
        -96.0 + 720.0 * s - 7248.0 * s**2 + 36312.0 * s**3 - 99558.0 * s**4
        + 174957.0 * s**5 - 211536.0 * s**6 + 171924.0 * s**7
        - 83328.0 * s**8 + 17856.0 * s**9
    )
    c_ll = 3.0 * (2.0 - 3.0 * s) * q_ll / (32.0 * den)
    c_lj = r2 * q_lj / (16.0 * den)
    c_jj = q_jj / (32.0 * den)
    return a_l, a_j, c_ll, c_lj, c_jj


def _make_invariant(ff_index: int, a_l, a_j, c_ll, c_lj, c_jj) -> TaylorInvariant:
    ser = BivariateSeries(
        2,
        {(1, 0): a_l, (0, 1): a_j, (2, 0): c_ll, (1, 1): c_lj, (0, 2): c_jj},
    )
    return TaylorInvariant(
        ff_index=ff_index,
        coeffs=ser,
        window_ok=WINDOW_LO <= a_l < WINDOW_HI,
    )


def taylor_closed(s: float, ff_index: int = 1) -> TaylorInvariant:
    """Closed-form degree-2 series invariant at focus-focus point 1 or 2.

    The second point is the sign-symmetry image of the first.
    """
    if ff_index not in (1, 2):
        raise DomainError("ff_index must be 1 or 2")
    a_l, a_j, c_ll, c_lj, c_jj = _closed_coefficients(s)
    if ff_index == 1:
        return _make_invariant(1, a_l, a_j, c_ll, c_lj, c_jj)
    base = _make_invariant(1, a_l, a_j, c_ll, c_lj, c_jj)
    flipped = symmetry_transform(base, -1, -1)
    return TaylorInvariant(2, flipped.coeffs, flipped.window_ok)


def taylor_numeric(
    s: float,
    radii: tuple[float, ...] = (1e-2, 5e-3, 2.5e-3),
    stencil: float = 5e-3,
) -> TaylorInvariant:
    """Series invariant at the first point recovered from the partials.

    Constant terms come from radial quadratic-in-r Richardson extrapolation
    along four rays; quadratic terms from central differences of the partials
    at the stencil spacing.
    """
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(f"s = {s} outside the focus-focus window")
    rays = (0.4, 1.45, 2.5, -0.9)
    a_l_est = []
    a_j_est = []
    for ang in rays:
        samples = [
            desingularized_partials(s, r * math.cos(ang), r * math.sin(ang))
            for r in radii
        ]
        for comp, sink in ((0, a_l_est), (1, a_j_est)):
            f = [v[comp] for v in samples]
            sink.append(_richardson_quadratic(radii, f))
    a_l = sum(a_l_est) / len(a_l_est)
    a_j = sum(a_j_est) / len(a_j_est)

    d = stencil
    dl_p = desingularized_partials(s, d, 0.0)
    dl_m = desingularized_partials(s, -d, 0.0)
    dj_p = desingularized_partials(s, 0.0, d)
    dj_m = desingularized_partials(s, 0.0, -d)
    c_ll = (dl_p[0] - dl_m[0]) / (2.0 * d) / 2.0
    c_jj = (dj_p[1] - dj_m[1]) / (2.0 * d) / 2.0
    # mixed coefficient from both partials, averaged
    c_lj = 0.5 * ((dj_p[0] - dj_m[0]) / (2.0 * d) + (dl_p[1] - dl_m[1]) / (2.0 * d))
    return _make_invariant(1, a_l, a_j, c_ll, c_lj, c_jj)


def _richardson_quadratic(radii, values) -> float:
    """Limit r -> 0 of a + b r + c r^2 through three samples."""
    (r1, r2, r3), (f1, f2, f3) = radii, values
    # Lagrange extrapolation at r = 0
    return (
        f1 * (r2 * r3) / ((r1 - r2) * (r1 - r3))
        + f2 * (r1 * r3) / ((r2 - r1) * (r2 - r3))
        + f3 * (r1 * r2) / ((r3 - r1) * (r3 - r2))
    )


def symmetry_transform(t: TaylorInvariant, eps1: int, eps2: int) -> TaylorInvariant:
    """Series of the image point under a momentum-map sign flip.

    S'(l, j) = eps2 S(eps1 l, eps2 j) + ((1 - eps1)/2) pi l, then reduced
    mod 2 pi l back into the preferred window.
    """
    if eps1 not in (-1, 1) or eps2 not in (-1, 1):
        raise DomainError("eps1, eps2 must be +-1")
    out = {}
    for (a, b), c in t.coeffs.coeffs.items():
        out[(a, b)] = eps2 * (eps1**a) * (eps2**b) * c
    out[(1, 0)] = out.get((1, 0), 0.0) + (1 - eps1) / 2 * math.pi
    ser = BivariateSeries(t.coeffs.max_degree, out)
    inv = TaylorInvariant(t.ff_index, ser, WINDOW_LO <= ser[(1, 0)] < WINDOW_HI)
    normalized, _ = normalize_representative(inv)
    return normalized


def normalize_representative(t: TaylorInvariant) -> tuple[TaylorInvariant, int]:
    """Shift the l-coefficient by 2 pi k into [-pi/2, 3pi/2); returns shift k."""
    a = t.coeffs[(1, 0)]
    k = -math.floor((a - WINDOW_LO) / (2.0 * math.pi))
    new = dict(t.coeffs.coeffs)
    new[(1, 0)] = a + 2.0 * math.pi * k
    ser = BivariateSeries(t.coeffs.max_degree, new)
    return TaylorInvariant(t.ff_index, ser, True), k
