"""Privileged momentum-map images and the twisting-index matcher.

Near each focus-focus point the privileged action xi is reconstructed from
the degree-2 desingularized-action polynomial,

    2 pi xi(z) = S2(z) - Im(z log z - z),    z = l' + i J(l', h'),

in local coordinates centered at the focus-focus value, with the logarithm
branch cut along the downward ray (matching downward polygon cuts).  Sampling
xi over a phase-space box approximates the image of the privileged momentum
map; comparing its envelope against sheared polygon candidates, modulo one
vertical translation, selects the candidate whose twisting label vanishes.

The truncated expansions degrade away from the focus-focus value, so the
sampler keeps points with |z| below a configurable cap and the envelope
discrepancy uses medians, which stay stable under the far-field distortion.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousMatchError, ConsistencyError, DomainError, WindowError
from .model import system_params
from .polygons import WeightedPolygon, group_act, no_ff_polygon, system_polygon
from .polygons import height_invariant
from .taylor import TaylorInvariant, taylor_closed
from .vanishing import contour_j_batch, j_series

__all__ = [
    "ImageCloud",
    "MatchResult",
    "InvariantReport",
    "preferred_action",
    "sample_privileged_image",
    "down_cut_candidates",
    "match_polygon",
    "full_invariants",
]

FF_ABSCISSA = {1: -1.0, 2: 1.0}          # polygon abscissas of the two points
L_WINDOW = {1: (-3.0, 1.0), 2: (-1.0, 3.0)}
XI_WINDOW_STRICT = 0.5                    # single-point validity radius
SAMPLER_Z_CAP = 3.0                       # extrapolation cap for image sampling
DEFAULT_GRID = (1, 73, 73, 73)            # (q1, p1, q2, p2); ~3.9e5 points


@dataclass(frozen=True)
class ImageCloud:
    ff_index: int
    L: np.ndarray
    Xi: np.ndarray
    l_window: tuple[float, float]
    n_skipped: int
    n_total: int

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.L, self.Xi])

    def to_csv(self) -> str:
        lines = ["L,Xi"]
        for a, b in zip(self.L, self.Xi):
            lines.append(f"{a:.15g},{b:.15g}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MatchResult:
    kappa_per_ff: tuple[int, int]
    margin: float
    best_translation: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "kappa": list(self.kappa_per_ff),
                "margin": self.margin,
                "best_translation": self.best_translation,
            }
        )


def _im_zlogz_minus_z(l: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Im(z log z - z) with the branch cut along the downward ray."""
    r = np.hypot(l, j)
    th = np.arctan2(j, l)
    th = np.where(th < -math.pi / 2.0, th + 2.0 * math.pi, th)
    lr = np.log(np.where(r > 0.0, r, 1.0))
    return np.where(r > 0.0, r * np.sin(th) * (lr - 1.0) + r * th * np.cos(th), 0.0)


def _local_series_j(s: float, ff_index: int, lp, hp):
    """Imaginary action at the r-th point through the sign symmetry."""
    js = j_series(s)
    lp = np.asarray(lp, dtype=float)
    hp = np.asarray(hp, dtype=float)
    lin = js[(1, 0)] * lp + js[(0, 1)] * hp
    quad = js[(2, 0)] * lp**2 + js[(1, 1)] * lp * hp + js[(0, 2)] * hp**2
    return lin + quad if ff_index == 1 else lin - quad


def _xi_from_series(taylor: TaylorInvariant, lp, jv):
    c = taylor.coeffs
    shat = (
        c[(1, 0)] * lp
        + c[(0, 1)] * jv
        + c[(2, 0)] * lp**2
        + c[(1, 1)] * lp * jv
        + c[(0, 2)] * jv**2
    )
    return (shat - _im_zlogz_minus_z(lp, jv)) / (2.0 * math.pi)


def _local_coords(s: float, ff_index: int, l_shifted, h):
    """(l', h') centered at the focus-focus value, from shifted-l inputs."""
    if ff_index == 1:
        return l_shifted, h
    return l_shifted - 2.0, h - (4.0 * s - 2.0)


def preferred_action(
    s: float, ff_index: int, l: float, h: float, z_max: float = XI_WINDOW_STRICT
) -> float:
    """Preferred local action xi_r at the level (l, h), shifted-l convention.

    Normalized so xi_r -> 0 at the focus-focus value.  Raises WindowError
    outside |z| <= z_max; callers sampling whole grids pass a larger cap and
    accept the degraded far-field accuracy of the truncation.
    """
    if ff_index not in (1, 2):
        raise DomainError("ff_index must be 1 or 2")
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(f"s = {s} outside the focus-focus window")
    lp, hp = _local_coords(s, ff_index, l, h)
    jv = float(_local_series_j(s, ff_index, lp, hp))
    if math.hypot(lp, jv) > z_max:
        raise WindowError(
            f"|z| = {math.hypot(lp, jv):.3f} exceeds the validity radius {z_max}"
        )
    return float(_xi_from_series(taylor_closed(s, ff_index), np.asarray(lp), np.asarray(jv)))


def sample_privileged_image(
    s: float,
    ff_index: int,
    grid: tuple[int, int, int, int] = DEFAULT_GRID,
    z_max: float = SAMPLER_Z_CAP,
    contour_fallback: bool = True,
) -> ImageCloud:
    """Image cloud (L, Xi) of the privileged momentum map over a phase box.

    The box is (-pi, pi) x (p1-range) x (0, pi) x (0, 4) with the p1 range
    (-3, 0) for the first point and (0, 3) for the second.  Points where the
    chart radicand is negative or |z| exceeds the cap are skipped and counted.
    Near the cap boundary the series value of the imaginary action is replaced
    by the exact contour value where an admissible contour exists.
    """
    if ff_index not in (1, 2):
        raise DomainError("ff_index must be 1 or 2")
    params = system_params(s)
    if not params.has_ff:
        raise DomainError(f"s = {s} outside the focus-focus window")
    nq1, np1, nq2, np2 = grid
    if min(grid) < 1 or np1 < 2 or nq2 < 2 or np2 < 2:
        raise DomainError("grid dimensions too small")
    p1_lo, p1_hi = (-3.0, 0.0) if ff_index == 1 else (0.0, 3.0)
    p1 = p1_lo + (np.arange(np1) + 0.5) / np1 * (p1_hi - p1_lo)
    q2 = (np.arange(nq2) + 0.5) / nq2 * math.pi
    p2 = (np.arange(np2) + 0.5) / np2 * 4.0
    P1, Q2, P2 = np.meshgrid(p1, q2, p2, indexing="ij")
    P1, Q2, P2 = P1.ravel(), Q2.ravel(), P2.ravel()
    n_total = nq1 * P1.size

    lsh = P1 + 1.0
    rad = P2 * (P2 - lsh) * (P2 - 4.0) * (P2 - 2.0 - lsh)
    valid = rad > 0.0
    hglob = (
        P1 - P2 + 2.0
        - s * (P1 - P2 + 2.0)
        + s / 2.0 * (P2 - 2.0)
        + (1.0 - s) * s * np.sqrt(np.maximum(rad, 0.0)) * np.cos(Q2)
    ) - (1.0 - 2.0 * s)
    lam = FF_ABSCISSA[ff_index]
    lp = (P1 - lam)[valid]
    hp = hglob[valid] if ff_index == 1 else (hglob[valid] - (4.0 * s - 2.0))
    jv = _local_series_j(s, ff_index, lp, hp)

    if contour_fallback:
        # refine borderline points so the cap decision uses accurate |z|
        zr = np.hypot(lp, jv)
        band = (zr >= 0.9 * z_max) & (zr <= 1.1 * z_max)
        if np.any(band):
            l_for_contour = lp[band] if ff_index == 1 else -lp[band]
            h_for_contour = hp[band] if ff_index == 1 else -hp[band]
            jc, okc = contour_j_batch(s, l_for_contour, h_for_contour)
            if ff_index == 2:
                jc = -jc
            jb = jv[band]
            jb[okc] = jc[okc]
            jv = jv.copy()
            jv[band] = jb

    zr = np.hypot(lp, jv)
    keep = zr <= z_max
    lp, jv = lp[keep], jv[keep]
    xi = _xi_from_series(taylor_closed(s, ff_index), lp, jv)
    big_l = np.repeat(lp + lam, nq1)
    xi = np.repeat(xi, nq1)
    n_kept = big_l.size
    return ImageCloud(
        ff_index=ff_index,
        L=big_l,
        Xi=xi,
        l_window=L_WINDOW[ff_index],
        n_skipped=n_total - n_kept,
        n_total=n_total,
    )


def down_cut_candidates(s: float, k_range: tuple[int, int] = (-3, 3)) -> list[WeightedPolygon]:
    """Down-cut representatives T^k(base) with labels (k, k)."""
    base = system_polygon(s, "down_down_zero")
    return [group_act(base, (1, 1), k) for k in range(k_range[0], k_range[1] + 1)]


def _envelopes(cloud: ImageCloud, bin_width: float):
    lo_edge = -3.0
    nb = int(math.ceil(6.0 / bin_width))
    bins = np.floor((cloud.L - lo_edge) / bin_width).astype(int)
    bins = np.clip(bins, 0, nb - 1)
    up = np.full(nb, -np.inf)
    low = np.full(nb, np.inf)
    np.maximum.at(up, bins, cloud.Xi)
    np.minimum.at(low, bins, cloud.Xi)
    have = np.isfinite(up) & np.isfinite(low)
    for arr in (up, low):
        src = arr.copy()
        for i in range(1, nb - 1):
            if have[i - 1] and have[i] and have[i + 1]:
                arr[i] = np.median(src[i - 1 : i + 2])
    centers = lo_edge + (np.arange(nb) + 0.5) * bin_width
    return centers, low, up, have


def _chain_values(poly: WeightedPolygon, xs: np.ndarray):
    lows = np.empty_like(xs)
    ups = np.empty_like(xs)
    for i, x in enumerate(xs):
        lo, hi = poly.slice_bounds(x)
        lows[i] = float(lo)
        ups[i] = float(hi)
    return lows, ups


def match_polygon(
    cloud: ImageCloud,
    candidates: list[WeightedPolygon],
    bin_width: float = 0.05,
    match_halfwidth: float = 2.0,
    accept_margin: float = 4.0,
) -> MatchResult:
    """Select the candidate whose boundary best fits the cloud envelope.

    Discrepancy per candidate: median absolute vertical deviation between the
    smoothed envelopes and the candidate chains, minimized over one vertical
    translation (taken as the median residual).  All candidates must carry the
    same cut signs.  A margin (second best / best) below ``accept_margin``
    raises AmbiguousMatchError.
    """
    if cloud.L.size < 10_000:
        raise DomainError("cloud too sparse for matching (need >= 1e4 points)")
    signs = {tuple(c.eps for c in cand.cuts) for cand in candidates}
    if len(signs) != 1:
        raise DomainError("candidates must share cut signs")
    if any(cand.kappas is None for cand in candidates):
        raise DomainError("candidates must carry twisting labels")
    centers, low_env, up_env, have = _envelopes(cloud, bin_width)
    lam = FF_ABSCISSA[cloud.ff_index]
    lo_x, hi_x = candidates[0].x_range()
    m = (
        have
        & (np.abs(centers - lam) <= match_halfwidth)
        & (centers > float(lo_x))
        & (centers < float(hi_x))
        & (centers > cloud.l_window[0])
        & (centers < cloud.l_window[1])
    )
    if m.sum() < 5:
        raise DomainError("too few populated bins inside the matching window")
    xs = centers[m]
    results = []
    for cand in candidates:
        cl, cu = _chain_values(cand, xs)
        resid = np.concatenate([cl - low_env[m], cu - up_env[m]])
        shift = float(np.median(resid))
        disc = float(np.median(np.abs(resid - shift)))
        results.append((disc, shift, cand))
    results.sort(key=lambda t: t[0])
    best_disc, best_shift, best_cand = results[0]
    margin = results[1][0] / max(best_disc, 1e-300) if len(results) > 1 else math.inf
    if margin < accept_margin:
        raise AmbiguousMatchError(
            f"margin {margin:.2f} below the uniqueness threshold {accept_margin}"
        )
    return MatchResult(
        kappa_per_ff=best_cand.kappas,
        margin=margin,
        best_translation=-best_shift,
    )


@dataclass(frozen=True)
class InvariantReport:
    s: float
    n_ff: int
    polygons: list[WeightedPolygon]
    heights: tuple[float, float] | None
    taylor: tuple[TaylorInvariant, TaylorInvariant] | None
    twist_margin: float | None

    def to_json(self) -> str:
        data = {
            "s": self.s,
            "n_ff": self.n_ff,
            "polygons": [json.loads(p.to_json()) for p in self.polygons],
        }
        if self.heights is not None:
            data["heights"] = list(self.heights)
        if self.taylor is not None:
            data["taylor"] = [json.loads(t.to_json()) for t in self.taylor]
        if self.twist_margin is not None:
            data["twist_margin"] = self.twist_margin
        return json.dumps(data, indent=2)


def full_invariants(
    s: float,
    grid: tuple[int, int, int, int] = DEFAULT_GRID,
    with_twist_check: bool = True,
) -> InvariantReport:
    """All five invariants at parameter s.

    Outside the focus-focus window the report carries only the cut-free
    polygon.  Inside, the pinned polygon representatives with their labels,
    the heights, both degree-2 series invariants, and the image-matching
    margin that confirms the labels numerically.
    """
    params = system_params(s)
    if min(abs(s - params.s_minus), abs(s - params.s_plus)) < 1e-13:
        raise DomainError(f"s = {s} is a transition value")
    if not params.has_ff:
        side = "below" if s < params.s_minus else "above"
        return InvariantReport(
            s=s, n_ff=0, polygons=[no_ff_polygon(side)],
            heights=None, taylor=None, twist_margin=None,
        )
    polys = [
        system_polygon(s, "theorem"),
        system_polygon(s, "up_up"),
        system_polygon(s, "down_down_zero"),
    ]
    heights = height_invariant(s, "closed_form")
    tay = (taylor_closed(s, 1), taylor_closed(s, 2))
    margin = None
    if with_twist_check:
        cands = down_cut_candidates(s)
        margins = []
        for ff in (1, 2):
            cloud = sample_privileged_image(s, ff, grid=grid)
            res = match_polygon(cloud, cands)
            expected = 0
            if res.kappa_per_ff[ff - 1] != expected:
                raise ConsistencyError(
                    f"image matching at point {ff} selected label "
                    f"{res.kappa_per_ff[ff - 1]}, expected {expected}"
                )
            margins.append(res.margin)
        margin = min(margins)
    return InvariantReport(
        s=s, n_ff=2, polygons=polys, heights=heights, taylor=tay,
        twist_margin=margin,
    )
