"""Weighted polygons, integral-affine shears, and the height invariant.

Vertices are exact rationals so that shear composition, breakpoint insertion
and convexity verification are free of rounding; the labeled group action on
(polygon, cut signs, twisting labels) follows the corrected composition rule
with the cumulative cut-flip term.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .actions import action
from .errors import DomainError, InvalidMoveError
from .model import rho1_of, rho2_squared, system_params

__all__ = [
    "Cut",
    "WeightedPolygon",
    "shear",
    "cut_shear",
    "group_act",
    "system_polygon",
    "height_invariant",
]

Point = tuple[Fraction, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Cut:
    lam: Fraction
    eps: int
    kappa: int | None = None


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points: list[Point]) -> list[Point]:
    """Counterclockwise convex hull, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) < 3:
        raise InvalidMoveError("polygon needs at least 3 distinct vertices")
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class WeightedPolygon:
    """Convex rational polygon with vertical cuts and optional twist labels."""

    vertices: tuple[Point, ...]
    cuts: tuple[Cut, ...] = ()

    def __post_init__(self):
        verts = tuple((_frac(x), _frac(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        cuts = tuple(
            Cut(_frac(c.lam), int(c.eps), None if c.kappa is None else int(c.kappa))
            for c in self.cuts
        )
        object.__setattr__(self, "cuts", cuts)
        n = len(verts)
        if n < 3:
            raise DomainError("polygon needs at least 3 vertices")
        for i in range(n):
            c = _cross(verts[i], verts[(i + 1) % n], verts[(i + 2) % n])
            if c <= 0:
                raise DomainError("vertices must be strictly convex counterclockwise")
        for a, b in zip(cuts, cuts[1:]):
            if a.lam >= b.lam:
                raise DomainError("cut abscissas must be strictly increasing")
        xs = [v[0] for v in verts]
        for c in cuts:
            if not min(xs) <= c.lam <= max(xs):
                raise DomainError(f"cut at {c.lam} misses the polygon")
            if c.eps not in (-1, 1):
                raise DomainError("cut signs must be +-1")

    @property
    def kappas(self) -> tuple[int, ...] | None:
        ks = tuple(c.kappa for c in self.cuts)
        return None if any(k is None for k in ks) else ks  # type: ignore[return-value]

    def x_range(self) -> tuple[Fraction, Fraction]:
        xs = [v[0] for v in self.vertices]
        return min(xs), max(xs)

    def slice_bounds(self, x) -> tuple[Fraction, Fraction]:
        """Exact [y_low, y_high] of the vertical slice at abscissa x."""
        x = _frac(x)
        lo_x, hi_x = self.x_range()
        if not lo_x <= x <= hi_x:
            raise DomainError(f"abscissa {x} outside the polygon")
        ys: list[Fraction] = []
        n = len(self.vertices)
        for i in range(n):
            (x1, y1), (x2, y2) = self.vertices[i], self.vertices[(i + 1) % n]
            if x1 == x2:
                if x1 == x:
                    ys.extend([y1, y2])
                continue
            t0, t1 = sorted((x1, x2))
            if t0 <= x <= t1:
                ys.append(y1 + (y2 - y1) * (x - x1) / (x2 - x1))
        return min(ys), max(ys)

    def area(self) -> Fraction:
        total = Fraction(0)
        n = len(self.vertices)
        for i in range(n):
            (x1, y1), (x2, y2) = self.vertices[i], self.vertices[(i + 1) % n]
            total += x1 * y2 - x2 * y1
        return total / 2

    def with_kappas(self, kappas) -> "WeightedPolygon":
        if len(kappas) != len(self.cuts):
            raise DomainError("kappa count must match cut count")
        return WeightedPolygon(
            self.vertices,
            tuple(Cut(c.lam, c.eps, int(k)) for c, k in zip(self.cuts, kappas)),
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "vertices": [[float(x), float(y)] for x, y in self.vertices],
                "cuts": [
                    {"lambda": float(c.lam), "eps": c.eps, "kappa": c.kappa}
                    for c in self.cuts
                ],
            }
        )


def shear(obj, n: int):
    """Apply the vertical shear (x, y) -> (x, n x + y) to a point or polygon."""
    if isinstance(obj, WeightedPolygon):
        verts = [(x, n * x + y) for x, y in obj.vertices]
        return WeightedPolygon(tuple(_hull(verts)), obj.cuts)
    x, y = obj
    return (x, n * _frac(x) + _frac(y))


def _piecewise_shift(x: Fraction, cuts, u) -> Fraction:
    total = Fraction(0)
    for c, ur in zip(cuts, u):
        if x > c.lam:
            total += ur * (x - c.lam)
    return total


def cut_shear(poly: WeightedPolygon, u) -> WeightedPolygon:
    """Apply the cut shears t_{lam_r}^{u_r}; breakpoints are inserted exactly.

    Raises InvalidMoveError when the image fails to be convex, which signals
    a shear vector not realizable for this polygon.
    """
    if len(u) != len(poly.cuts):
        raise DomainError("u must have one entry per cut")
    pts: list[Point] = []
    n = len(poly.vertices)
    lams = [c.lam for c in poly.cuts]
    for i in range(n):
        (x1, y1), (x2, y2) = poly.vertices[i], poly.vertices[(i + 1) % n]
        pts.append((x1, y1))
        for lam in lams:
            if min(x1, x2) < lam < max(x1, x2):
                t = (lam - x1) / (x2 - x1)
                pts.append((lam, y1 + (y2 - y1) * t))
    moved = [(x, y + _piecewise_shift(x, poly.cuts, u)) for x, y in pts]
    try:
        hull = _hull(moved)
    except InvalidMoveError as exc:
        raise InvalidMoveError("cut shear collapsed the polygon") from exc
    # the hull silently discards reflex vertices; reject if any input point
    # fell strictly inside, since then the image was not convex
    for p in moved:
        if p not in hull and not _on_boundary(hull, p):
            raise InvalidMoveError("cut shear produced a non-convex image")
    return WeightedPolygon(tuple(hull), poly.cuts)


def _on_boundary(hull: list[Point], p: Point) -> bool:
    n = len(hull)
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        if _cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            return True
    return False


def group_act(poly: WeightedPolygon, eps_prime, n: int) -> WeightedPolygon:
    """Act by (eps', T^n) on a labeled polygon.

    u_r = (eps_r - eps_r eps'_r)/2, the polygon maps to t_u(T^n(.)), each sign
    to eps'_r eps_r, and each label to kappa_r + n + sum_{i<=r} u_i.
    """
    if poly.kappas is None:
        raise DomainError("group_act needs twisting labels on every cut")
    if len(eps_prime) != len(poly.cuts):
        raise DomainError("eps_prime must have one entry per cut")
    if any(e not in (-1, 1) for e in eps_prime):
        raise DomainError("eps_prime entries must be +-1")
    u = [(c.eps - c.eps * e) // 2 for c, e in zip(poly.cuts, eps_prime)]
    sheared = shear(poly, n)
    sheared = WeightedPolygon(sheared.vertices, poly.cuts)
    out = cut_shear(sheared, u)
    new_cuts = []
    run = 0
    for c, e, ur in zip(poly.cuts, eps_prime, u):
        run += ur
        new_cuts.append(Cut(c.lam, c.eps * e, c.kappa + n + run))
    return WeightedPolygon(out.vertices, tuple(new_cuts))


_REPS = {
    "up_up": {
        "vertices": ((-3, -1), (3, -1), (1, 1), (-1, 1)),
        "eps": (1, 1),
        "kappa": (0, -1),
    },
    "theorem": {
        "vertices": ((-3, 2), (3, -4), (1, 0), (-1, 2)),
        "eps": (1, 1),
        "kappa": (-1, -2),
    },
    "down_down_zero": {
        "vertices": ((-3, 2), (-1, 0), (1, 0), (3, 2)),
        "eps": (-1, -1),
        "kappa": (0, 0),
    },
}


def system_polygon(s: float, rep: str = "theorem") -> WeightedPolygon:
    """A pinned representative of the system's polygon invariant.

    Representatives: "up_up" (both cuts up, the momentum-image-shaped hull),
    "theorem" (both cuts up, labels (-1, -2)), "down_down_zero" (both cuts
    down, labels (0, 0)).
    """
    if rep not in _REPS:
        raise DomainError(f"unknown representative {rep!r}")
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(
            f"s = {s} outside ({params.s_minus}, {params.s_plus}); no cut-bearing representative"
        )
    data = _REPS[rep]
    verts = tuple((Fraction(x), Fraction(y)) for x, y in data["vertices"])
    cuts = tuple(
        Cut(Fraction(lam), e, k)
        for lam, e, k in zip((-1, 1), data["eps"], data["kappa"])
    )
    return WeightedPolygon(tuple(_hull(list(verts))), cuts)


def no_ff_polygon(side: str) -> WeightedPolygon:
    """The cut-free polygon invariant outside the focus-focus window."""
    if side == "below":
        verts = ((-3, -1), (-1, 1), (1, -1), (3, 1))
    elif side == "above":
        verts = ((-3, -1), (-1, -1), (1, 1), (3, 1))
    else:
        raise DomainError("side must be 'below' or 'above'")
    pts = [(Fraction(x), Fraction(y)) for x, y in verts]
    return WeightedPolygon(tuple(_hull(pts)), ())


def _height_closed(s: float) -> float:
    """Exact closed form of the height at the first focus-focus point.

    Derived by elementary integration of the sublevel area at the pinched
    fiber: with Q(p) = a p^2 + b p + g, a = s^2(1-s)^2, b = -6a,
    g = 8a - (1 - 3s/2)^2, the area decomposes into a logarithmic piece and
    two arcsin pieces associated with the poles p = 2 and p = 4.
    """
    r1 = rho1_of(s)
    r2sq = rho2_squared(s)
    if r2sq <= 0.0:
        raise DomainError(f"s = {s} outside the focus-focus window")
    r2 = math.sqrt(r2sq)
    if abs(2.0 - 3.0 * s) < 1e-13:
        return 1.0
    a = s * s * (1.0 - s) ** 2
    c2 = (1.0 - 1.5 * s) ** 2
    sqdisc = s * (1.0 - s) * r1
    cabs = abs(1.0 - 1.5 * s)
    a0 = math.log((r2 + 6.0 * s * (1.0 - s)) / r1) / (s * (1.0 - s))
    y4 = max(-1.0, min(1.0, (-2.0 * c2 - 8.0 * a) / (4.0 * sqdisc)))
    y2 = max(-1.0, min(1.0, (-2.0 * c2 + 4.0 * a) / (2.0 * sqdisc)))
    a4 = (-math.pi / 2.0 - math.asin(y4)) / cabs
    a2 = (-math.pi / 2.0 - math.asin(y2)) / cabs
    cb = 2.0 if s < 2.0 / 3.0 else 0.0
    return cb + (s - 2.0 / 3.0) / math.pi * (-1.5 * a0 - 3.0 * a4 - 1.5 * a2)


def height_invariant(s: float, route: str = "closed_form") -> tuple[float, float]:
    """Heights (h1, h2) of the two focus-focus values; h1 + h2 = 2."""
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(f"s = {s} outside the focus-focus window")
    if route == "closed_form":
        h1 = _height_closed(s)
    elif route == "numeric":
        h1 = action(s, 0.0, 0.0).value
    else:
        raise DomainError(f"unknown route {route!r}")
    return h1, 2.0 - h1
