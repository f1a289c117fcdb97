"""Command-line front end.

Subcommands
-----------
invariants   full report (JSON)
polygon      pinned polygon representatives (JSON or SVG)
taylor       series-invariant coefficients, optionally checked numerically
twist        image cloud (CSV) or matching result (JSON)
portrait     reduced level sets over (q2, p2) (CSV or SVG)
action-grid  (l, h, I, T, W) rows (CSV)
height       heights against s (CSV)

All numeric output uses 15 significant digits; identical configurations
produce byte-identical output.  Usage errors exit 2; domain or numerical
errors exit 1 with a one-line JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .actions import action, reduced_period, rotation_number
from .errors import SemitoricError
from .model import system_params
from .polygons import WeightedPolygon, height_invariant, system_polygon
from .reduced import reduced_level, separatrix_levels
from .taylor import taylor_closed, taylor_numeric
from .twisting import (
    DEFAULT_GRID,
    down_cut_candidates,
    full_invariants,
    match_polygon,
    sample_privileged_image,
)

__all__ = ["main"]


def _fmt(x: float) -> str:
    return format(float(x), ".15g")


def _parse_sweep(text: str) -> list[float]:
    try:
        a, b, step = (float(t) for t in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("sweep must be start:stop:step") from exc
    if step <= 0:
        raise argparse.ArgumentTypeError("sweep step must be positive")
    out = []
    x = a
    while x <= b + 1e-12:
        out.append(round(x, 12))
        x += step
    return out


def _parse_grid(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(t) for t in text.lower().split("x"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("grid must be like 1x73x73x73") from exc
    if any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError("grid dimensions must be >= 1")
    return dims


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _svg_header(xmin, xmax, ymin, ymax, width=640):
    span_x = xmax - xmin or 1.0
    span_y = ymax - ymin or 1.0
    height = int(width * span_y / span_x) or width
    pad = 0.05
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{xmin - pad * span_x:.4f} {-(ymax + pad * span_y):.4f} '
        f'{span_x * (1 + 2 * pad):.4f} {span_y * (1 + 2 * pad):.4f}">\n'
    ), height


def _polygon_svg(polys: list[WeightedPolygon]) -> str:
    xs = [float(x) for p in polys for x, _ in p.vertices]
    ys = [float(y) for p in polys for _, y in p.vertices]
    head, _ = _svg_header(min(xs), max(xs), min(ys), max(ys))
    parts = [head]
    colors = ["#1f6fb2", "#b25a1f", "#3a8f4e"]
    for i, poly in enumerate(polys):
        pts = " ".join(f"{float(x):.6f},{-float(y):.6f}" for x, y in poly.vertices)
        parts.append(
            f'<polygon points="{pts}" fill="none" stroke="{colors[i % 3]}" '
            'stroke-width="0.04"/>\n'
        )
        for cut in poly.cuts:
            lo, hi = poly.slice_bounds(cut.lam)
            y0, y1 = (float(hi), float(hi) + 0.0) if cut.eps > 0 else (float(lo), float(lo))
            # dashed half-line drawn inside the polygon from the cut end
            yin, yout = (float(lo), float(hi)) if cut.eps > 0 else (float(hi), float(lo))
            parts.append(
                f'<line x1="{float(cut.lam):.6f}" y1="{-yin:.6f}" '
                f'x2="{float(cut.lam):.6f}" y2="{-yout:.6f}" '
                f'stroke="{colors[i % 3]}" stroke-width="0.025" '
                'stroke-dasharray="0.12,0.08"/>\n'
            )
    parts.append("</svg>\n")
    return "".join(parts)


def _cloud_svg(L: np.ndarray, Xi: np.ndarray, max_points: int = 20000) -> str:
    stride = max(1, L.size // max_points)
    ls, xs = L[::stride], Xi[::stride]
    head, _ = _svg_header(float(ls.min()), float(ls.max()), float(xs.min()), float(xs.max()))
    parts = [head]
    for a, b in zip(ls, xs):
        parts.append(f'<circle cx="{a:.5f}" cy="{-b:.5f}" r="0.012" fill="#1f6fb2"/>\n')
    parts.append("</svg>\n")
    return "".join(parts)


def _portrait_rows(s: float, l: float, n_levels: int, n_pts: int):
    _, _, _, _, lm, lp = separatrix_levels(s, l)
    # bracket the slice in h by scanning the reduced Hamiltonian range
    p2 = np.linspace(lm, lp, 2001)
    a = l + 1.0 - p2 - 2.0 * s - l * s + 1.5 * s * p2
    b = np.maximum(s * s * (1 - s) ** 2 * p2 * (p2 - l) * (p2 - 4.0) * (p2 - 2.0 - l), 0.0)
    hi = float(np.max(a + np.sqrt(b))) - (1.0 - 2.0 * s)
    lo = float(np.min(a - np.sqrt(b))) - (1.0 - 2.0 * s)
    span = hi - lo
    rows = []
    for i in range(n_levels):
        h = lo + span * (i + 1) / (n_levels + 1)
        try:
            lv = reduced_level(s, l, h, allow_pinched=True)
        except SemitoricError:
            continue
        z2, z3 = lv.roots[1], lv.roots[2]
        ps = np.linspace(z2, z3, n_pts)
        aa = l + 1.0 - ps - 2.0 * s - l * s + 1.5 * s * ps
        bb = np.maximum(s * s * (1 - s) ** 2 * ps * (ps - l) * (ps - 4.0) * (ps - 2.0 - l), 1e-300)
        u = np.clip((h + (1.0 - 2.0 * s) - aa) / np.sqrt(bb), -1.0, 1.0)
        q = np.arccos(u)
        for pp, qq in zip(ps, q):
            rows.append((h, qq, pp))
            rows.append((h, -qq, pp))
    return rows


def _cmd_invariants(args) -> str:
    rep = full_invariants(args.s, grid=args.grid or DEFAULT_GRID,
                          with_twist_check=not args.no_twist)
    return rep.to_json() + "\n"


def _cmd_polygon(args) -> str:
    polys = [
        system_polygon(args.s, "theorem"),
        system_polygon(args.s, "up_up"),
        system_polygon(args.s, "down_down_zero"),
    ]
    if args.format == "svg":
        return _polygon_svg(polys)
    return json.dumps([json.loads(p.to_json()) for p in polys], indent=2) + "\n"


def _cmd_taylor(args) -> str:
    closed = taylor_closed(args.s, args.ff)
    lines = ["term,closed" + (",numeric,rel_error" if args.check else "")]
    numeric = taylor_numeric(args.s) if args.check and args.ff == 1 else None
    names = {(1, 0): "l", (0, 1): "j", (2, 0): "l^2", (1, 1): "l*j", (0, 2): "j^2"}
    for key in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]:
        row = [names[key], _fmt(closed.coeffs[key])]
        if numeric is not None:
            num = numeric.coeffs[key]
            rel = abs(num - closed.coeffs[key]) / max(abs(closed.coeffs[key]), 1e-300)
            row += [_fmt(num), _fmt(rel)]
        elif args.check:
            row += ["", ""]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _cmd_twist(args) -> str:
    cloud = sample_privileged_image(args.s, args.ff, grid=args.grid or DEFAULT_GRID)
    if args.format == "csv":
        return cloud.to_csv()
    if args.format == "svg":
        return _cloud_svg(cloud.L, cloud.Xi)
    result = match_polygon(cloud, down_cut_candidates(args.s))
    return result.to_json() + "\n"


def _cmd_portrait(args) -> str:
    n_levels, n_pts = (args.grid or (9, 200))[:2]
    rows = _portrait_rows(args.s, args.l, n_levels, n_pts)
    if args.format == "svg":
        head, _ = _svg_header(-math.pi, math.pi, 0.0, 4.0)
        parts = [head]
        by_level: dict[float, list[tuple[float, float]]] = {}
        for h, q, p in rows:
            by_level.setdefault(h, []).append((q, p))
        for pts in by_level.values():
            path = " ".join(f"{q:.5f},{-p:.5f}" for q, p in sorted(pts))
            parts.append(
                f'<polyline points="{path}" fill="none" stroke="#1f6fb2" stroke-width="0.02"/>\n'
            )
        parts.append("</svg>\n")
        return "".join(parts)
    lines = ["h,q2,p2"]
    for h, q, p in rows:
        lines.append(f"{_fmt(h)},{_fmt(q)},{_fmt(p)}")
    return "\n".join(lines) + "\n"


def _cmd_action_grid(args) -> str:
    ls = _parse_sweep(args.l_sweep) if args.l_sweep else [args.l if args.l is not None else 0.3]
    hs = _parse_sweep(args.h_sweep) if args.h_sweep else [0.1]
    lines = ["l,h,I,T,W"]
    for lv in ls:
        for hv in hs:
            try:
                iv = action(args.s, lv, hv).value
                tv = reduced_period(args.s, lv, hv)
                wv = rotation_number(args.s, lv, hv)
            except SemitoricError:
                continue
            lines.append(
                ",".join([_fmt(lv), _fmt(hv), _fmt(iv), _fmt(tv), _fmt(wv)])
            )
    return "\n".join(lines) + "\n"


def _cmd_height(args) -> str:
    svals = _parse_sweep(args.s_sweep) if args.s_sweep else [args.s]
    lines = ["s,h1,h2"]
    for s in svals:
        if not system_params(s).has_ff:
            continue
        h1, h2 = height_invariant(s, "closed_form")
        lines.append(",".join([_fmt(s), _fmt(h1), _fmt(h2)]))
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "invariants": _cmd_invariants,
    "polygon": _cmd_polygon,
    "taylor": _cmd_taylor,
    "twist": _cmd_twist,
    "portrait": _cmd_portrait,
    "action-grid": _cmd_action_grid,
    "height": _cmd_height,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semitoric",
        description="Symplectic invariants of the coupled angular-momenta family",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_s=True):
        if need_s:
            p.add_argument("--s", type=float, help="coupling parameter in [0, 1]")
        p.add_argument("--config", help="JSON file with defaults for the flags")
        p.add_argument("--out", help="output path (stdout if omitted)")

    p = sub.add_parser("invariants", help="full invariant report (JSON)")
    common(p)
    p.add_argument("--grid", type=_parse_grid, help="sampling grid, e.g. 1x73x73x73")
    p.add_argument("--no-twist", action="store_true", help="skip the image-matching check")

    p = sub.add_parser("polygon", help="polygon representatives")
    common(p)
    p.add_argument("--format", choices=["json", "svg"], default="json")

    p = sub.add_parser("taylor", help="series-invariant coefficients")
    common(p)
    p.add_argument("--ff", type=int, choices=[1, 2], default=1)
    p.add_argument("--check", action="store_true", help="compare against the numeric route")

    p = sub.add_parser("twist", help="privileged image cloud and matching")
    common(p)
    p.add_argument("--ff", type=int, choices=[1, 2], default=1)
    p.add_argument("--grid", type=_parse_grid)
    p.add_argument("--format", choices=["json", "csv", "svg"], default="json")

    p = sub.add_parser("portrait", help="reduced level sets at fixed l")
    common(p)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--grid", type=_parse_grid, help="levels x points, e.g. 9x200")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")

    p = sub.add_parser("action-grid", help="action, period, rotation number rows")
    common(p)
    p.add_argument("--l", type=float)
    p.add_argument("--l-sweep", help="start:stop:step in l")
    p.add_argument("--h-sweep", help="start:stop:step in h")

    p = sub.add_parser("height", help="heights against s (CSV)")
    common(p)
    p.add_argument("--s-sweep", help="start:stop:step in s")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    for key, val in data.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) in (None, False):
            if attr == "grid" and isinstance(val, str):
                val = _parse_grid(val)
            setattr(args, attr, val)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        if getattr(args, "s", None) is None and args.command != "height":
            parser.error("--s is required")
        if args.command == "height" and args.s is None and args.s_sweep is None:
            parser.error("--s or --s-sweep is required")
        text = _COMMANDS[args.command](args)
        _emit(text, args.out)
        return 0
    except SemitoricError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "code": exc.code}) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "code": "io"}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
