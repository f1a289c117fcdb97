"""Complete elliptic integrals via Carlson symmetric forms.

K(m)    = integral_0^1 dx / sqrt((1-x^2)(1-m x^2))
Pi(n,m) = integral_0^1 dx / ((1-n x^2) sqrt((1-x^2)(1-m x^2)))

with m the squared modulus.  Both reduce to Carlson forms,

    K(m) = R_F(0, 1-m, 1),    Pi(n, m) = R_F(0, 1-m, 1) + (n/3) R_J(0, 1-m, 1, 1-n),

computed with the standard duplication iteration (Carlson, "Numerical
computation of real or complex elliptic integrals", 1995).  Duplication keeps
uniform accuracy over the whole parameter box, including m close to 1 and
negative characteristics.
"""
from __future__ import annotations

import math

from .errors import DomainError

__all__ = ["carlson_rf", "carlson_rc", "carlson_rj", "ellip_k", "ellip_pi"]

_EPS = 2.220446049250313e-16


def carlson_rf(x: float, y: float, z: float) -> float:
    """R_F(x, y, z) for non-negative arguments, at most one of them zero."""
    if min(x, y, z) < 0.0:
        raise DomainError("carlson_rf requires non-negative arguments")
    if sorted((x, y, z))[1] == 0.0:
        raise DomainError("carlson_rf allows at most one zero argument")
    xn, yn, zn = float(x), float(y), float(z)
    a0 = (xn + yn + zn) / 3.0
    q = (3.0 * _EPS) ** (-0.125) * max(abs(a0 - xn), abs(a0 - yn), abs(a0 - zn))
    an = a0
    f = 1.0
    while q * f >= abs(an):
        lam = (
            math.sqrt(xn) * math.sqrt(yn)
            + math.sqrt(xn) * math.sqrt(zn)
            + math.sqrt(yn) * math.sqrt(zn)
        )
        xn = (xn + lam) / 4.0
        yn = (yn + lam) / 4.0
        zn = (zn + lam) / 4.0
        an = (an + lam) / 4.0
        f /= 4.0
    dx = (a0 - x) * f / an
    dy = (a0 - y) * f / an
    dz = -(dx + dy)
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (
        1.0
        - e2 / 10.0
        + e3 / 14.0
        + e2 * e2 / 24.0
        - 3.0 * e2 * e3 / 44.0
        - 5.0 * e2**3 / 208.0
        + 3.0 * e3**2 / 104.0
        + e2 * e2 * e3 / 16.0
    ) / math.sqrt(an)


def carlson_rc(x: float, y: float) -> float:
    """R_C(x, y) = R_F(x, y, y) for x >= 0, y > 0, in closed form."""
    if x < 0.0 or y <= 0.0:
        raise DomainError("carlson_rc requires x >= 0, y > 0")
    if x == y:
        return 1.0 / math.sqrt(x)
    if x == 0.0:
        return math.pi / (2.0 * math.sqrt(y))
    if y > x:
        return math.atan(math.sqrt((y - x) / x)) / math.sqrt(y - x)
    return math.atanh(math.sqrt((x - y) / x)) / math.sqrt(x - y)


def carlson_rj(x: float, y: float, z: float, p: float) -> float:
    """R_J(x, y, z, p) for non-negative x, y, z (at most one zero), p > 0."""
    if min(x, y, z) < 0.0 or p <= 0.0:
        raise DomainError("carlson_rj requires non-negative args and p > 0")
    if sorted((x, y, z))[1] == 0.0:
        raise DomainError("carlson_rj allows at most one zero among x, y, z")
    xn, yn, zn, pn = float(x), float(y), float(z), float(p)
    a0 = (xn + yn + zn + 2.0 * pn) / 5.0
    delta = (pn - xn) * (pn - yn) * (pn - zn)
    q = (_EPS / 4.0) ** (-1.0 / 6.0) * max(
        abs(a0 - xn), abs(a0 - yn), abs(a0 - zn), abs(a0 - pn)
    )
    an = a0
    f = 1.0
    total = 0.0
    while q * f >= abs(an):
        rx, ry, rz, rp = math.sqrt(xn), math.sqrt(yn), math.sqrt(zn), math.sqrt(pn)
        dn = (rp + rx) * (rp + ry) * (rp + rz)
        en = delta * f**3 / (dn * dn)
        total += f / dn * carlson_rc(1.0, 1.0 + en)
        lam = rx * ry + rx * rz + ry * rz
        xn = (xn + lam) / 4.0
        yn = (yn + lam) / 4.0
        zn = (zn + lam) / 4.0
        pn = (pn + lam) / 4.0
        an = (an + lam) / 4.0
        f /= 4.0
    dx = (a0 - x) * f / an
    dy = (a0 - y) * f / an
    dz = (a0 - z) * f / an
    dp = -(dx + dy + dz) / 2.0
    e2 = dx * dy + dx * dz + dy * dz - 3.0 * dp * dp
    e3 = dx * dy * dz + 2.0 * e2 * dp + 4.0 * dp**3
    e4 = (2.0 * dx * dy * dz + e2 * dp + 3.0 * dp**3) * dp
    e5 = dx * dy * dz * dp * dp
    series = (
        1.0
        - 3.0 * e2 / 14.0
        + e3 / 6.0
        + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
    )
    return f * an ** (-1.5) * series + 6.0 * total


def ellip_k(m: float) -> float:
    """Complete elliptic integral of the first kind, squared-modulus argument."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"ellip_k requires 0 <= m < 1, got {m}")
    return carlson_rf(0.0, 1.0 - m, 1.0)


def ellip_pi(n: float, m: float) -> float:
    """Complete elliptic integral of the third kind, characteristic n < 1."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"ellip_pi requires 0 <= m < 1, got {m}")
    if n >= 1.0:
        raise DomainError(
            f"ellip_pi characteristic n = {n} >= 1: pole on the integration path"
        )
    k = carlson_rf(0.0, 1.0 - m, 1.0)
    if n == 0.0:
        return k
    return k + n / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n)
