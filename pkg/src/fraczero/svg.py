"""Minimal standalone SVG plots for path sets and Mahler sweeps.

Marker convention: a filled dot labelled ``k`` is a zero of the order-``k``
derivative; an open circle labelled ``k`` is a limit point of zeros that is
not itself a zero (paths meeting the center at an integer order).  Labels of
coincident markers are merged as ``j & k``.  Parts of a path with
``alpha < 0`` or ``alpha > n`` are drawn in a lighter stroke.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .frac_calculus import is_integer
from .path_tracker import PathSet

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")


@dataclass(frozen=True)
class StyleOptions:
    width: int = 640
    height: int = 480
    margin: int = 48
    mode: str = "plane"  # plane | abs | reim
    title: str = ""
    labels: bool = True
    stroke: float = 1.6


@dataclass(frozen=True)
class SweepTable:
    """Columns of a bounds sweep: measure per alpha and named bound curves."""

    alphas: tuple[float, ...]
    measure: tuple[float, ...]
    curves: tuple[tuple[str, tuple[float, ...]], ...] = ()


class _Canvas:
    def __init__(self, style: StyleOptions, xr, yr, equal: bool):
        self.s = style
        (x0, x1), (y0, y1) = _pad(*xr), _pad(*yr)
        w = style.width - 2 * style.margin
        h = style.height - 2 * style.margin
        if equal:
            k = min(w / (x1 - x0), h / (y1 - y0))
            cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
            x0, x1 = cx - w / (2 * k), cx + w / (2 * k)
            y0, y1 = cy - h / (2 * k), cy + h / (2 * k)
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.parts: list[str] = []

    def px(self, x: float, y: float) -> tuple[float, float]:
        s = self.s
        u = s.margin + (x - self.x0) / (self.x1 - self.x0) * (s.width - 2 * s.margin)
        v = s.height - s.margin - (y - self.y0) / (self.y1 - self.y0) * (s.height - 2 * s.margin)
        return u, v

    def polyline(self, xs, ys, color: str, opacity: float = 1.0, width: float | None = None):
        if len(xs) < 2:
            return
        pts = " ".join(f"{u:.2f},{v:.2f}" for u, v in (self.px(x, y) for x, y in zip(xs, ys)))
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width or self.s.stroke}" stroke-opacity="{opacity}"/>')

    def dot(self, x, y, filled: bool, label: str, color: str = "#000"):
        u, v = self.px(x, y)
        fill = color if filled else "#fff"
        self.parts.append(f'<circle cx="{u:.2f}" cy="{v:.2f}" r="3.5" fill="{fill}" '
                          f'stroke="{color}" stroke-width="1.2"/>')
        if label and self.s.labels:
            self.parts.append(f'<text x="{u + 5:.2f}" y="{v - 5:.2f}" font-size="11" '
                              f'font-family="sans-serif">{escape(label)}</text>')

    def cross(self, x, y, color: str = "#000"):
        u, v = self.px(x, y)
        d = 5
        self.parts.append(f'<path d="M{u - d:.2f},{v - d:.2f}L{u + d:.2f},{v + d:.2f}'
                          f'M{u - d:.2f},{v + d:.2f}L{u + d:.2f},{v - d:.2f}" '
                          f'stroke="{color}" stroke-width="1.6"/>')

    def axes(self, xlabel: str, ylabel: str):
        s = self.s
        l, r = s.margin, s.width - s.margin
        t, b = s.margin, s.height - s.margin
        self.parts.insert(0, f'<rect x="{l}" y="{t}" width="{r - l}" height="{b - t}" '
                             f'fill="none" stroke="#999"/>')
        for val, (u, _) in ((x, self.px(x, self.y0)) for x in _ticks(self.x0, self.x1)):
            self.parts.append(f'<text x="{u:.2f}" y="{b + 14}" font-size="10" '
                              f'text-anchor="middle" font-family="sans-serif">{val:g}</text>')
        for val, (_, v) in ((y, self.px(self.x0, y)) for y in _ticks(self.y0, self.y1)):
            self.parts.append(f'<text x="{l - 4}" y="{v + 3:.2f}" font-size="10" '
                              f'text-anchor="end" font-family="sans-serif">{val:g}</text>')
        self.parts.append(f'<text x="{(l + r) / 2}" y="{s.height - 8}" font-size="12" '
                          f'text-anchor="middle" font-family="sans-serif">{escape(xlabel)}</text>')
        self.parts.append(f'<text x="12" y="{(t + b) / 2}" font-size="12" text-anchor="middle" '
                          f'font-family="sans-serif" transform="rotate(-90 12 {(t + b) / 2})">'
                          f'{escape(ylabel)}</text>')
        if s.title:
            self.parts.append(f'<text x="{(l + r) / 2}" y="{t - 14}" font-size="13" '
                              f'text-anchor="middle" font-family="sans-serif">'
                              f'{escape(s.title)}</text>')

    def render(self) -> bytes:
        s = self.s
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{s.width}" height="{s.height}" '
                f'viewBox="0 0 {s.width} {s.height}">')
        body = "\n".join([head, f'<rect width="{s.width}" height="{s.height}" fill="#fff"/>',
                          *self.parts, "</svg>", ""])
        return body.encode("utf-8")


def _pad(lo: float, hi: float) -> tuple[float, float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return -1.0, 1.0
    if hi - lo < 1e-12:
        return lo - 1, hi + 1
    d = 0.05 * (hi - lo)
    return lo - d, hi + d


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [round(start + i * step, 12) for i in range(int((hi - start) / step) + 1)]


def _segments(alphas: np.ndarray, n: int):
    """Split sample indices into runs inside and outside ``[0, n]``."""
    inside = (alphas >= 0) & (alphas <= n)
    runs = []
    start = 0
    for i in range(1, len(alphas) + 1):
        if i == len(alphas) or inside[i] != inside[start]:
            # share the boundary sample so the polyline stays connected
            runs.append((max(start - 1, 0), i, bool(inside[start])))
            start = i
    return runs


def emit_paths_svg(ps: PathSet, style: StyleOptions | None = None) -> bytes:
    style = style or StyleOptions()
    n = ps.source.degree
    center = ps.center
    mode = style.mode
    if mode == "plane":
        pts = np.concatenate([p.zs for p in ps.paths] + [np.array([center])])
        pts = pts[np.isfinite(pts)]
        cv = _Canvas(style, (pts.real.min(), pts.real.max()), (pts.imag.min(), pts.imag.max()),
                     equal=True)
    else:
        al = np.concatenate([p.alphas for p in ps.paths])
        if mode == "abs":
            ys = np.concatenate([np.abs(p.zs) for p in ps.paths])
        else:
            ys = np.concatenate([np.r_[p.zs.real, p.zs.imag] for p in ps.paths])
        ys = ys[np.isfinite(ys)]
        cv = _Canvas(style, (al.min(), al.max()), (ys.min(), ys.max()), equal=False)

    for k, p in enumerate(ps.paths):
        color = PALETTE[k % len(PALETTE)]
        for a, b, inside in _segments(p.alphas, n):
            seg_a, seg_z = p.alphas[a:b], p.zs[a:b]
            op = 1.0 if inside else 0.35
            if mode == "plane":
                cv.polyline(seg_z.real, seg_z.imag, color, op)
            elif mode == "abs":
                cv.polyline(seg_a, np.abs(seg_z), color, op)
            else:
                cv.polyline(seg_a, seg_z.real, color, op, width=3.5)
                cv.polyline(seg_a, seg_z.imag, color, op, width=1.0)

    # integer-order markers, merged per location
    filled: dict[tuple[float, float], list[int]] = {}
    hollow: dict[tuple[float, float], list[int]] = {}
    tol = 1e-9 * max(ps.scale, 1.0)
    for p in ps.paths:
        for a, z in zip(p.alphas, p.zs):
            if not is_integer(a) or not np.isfinite(z):
                continue
            at_center = abs(z - center) <= tol
            if at_center and a < 0:
                continue
            if mode == "plane":
                key = (round(z.real, 9), round(z.imag, 9))
            elif mode == "abs":
                key = (float(a), round(abs(z), 9))
            else:
                key = (float(a), round(z.real, 9))
            bucket = hollow if at_center and a > 0 else filled
            bucket.setdefault(key, [])
            if int(a) not in bucket[key]:
                bucket[key].append(int(a))
    for bucket, is_filled in ((filled, True), (hollow, False)):
        for (x, y), ks in sorted(bucket.items()):
            cv.dot(x, y, is_filled, " & ".join(str(k) for k in sorted(ks)))
    for a, i, _j in ps.collisions:
        p = ps.paths[i]
        hit = np.nonzero(p.alphas == a)[0]
        if not len(hit):
            continue
        z = p.zs[hit[0]]
        if mode == "plane":
            cv.cross(z.real, z.imag)
        elif mode == "abs":
            cv.cross(a, abs(z))
        else:
            cv.cross(a, z.real)
    labels = {"plane": ("Re z", "Im z"), "abs": ("alpha", "|z|"), "reim": ("alpha", "Re z, Im z")}
    cv.axes(*labels.get(mode, ("", "")))
    return cv.render()


def emit_sweep_svg(table: SweepTable, style: StyleOptions | None = None) -> bytes:
    style = style or StyleOptions()
    if not table.alphas:
        raise ValueError("empty sweep")
    al = np.asarray(table.alphas, dtype=float)
    series = [("measure", np.asarray(table.measure, dtype=float))]
    series += [(name, np.asarray(v, dtype=float)) for name, v in table.curves]
    ys = np.concatenate([v[np.isfinite(v)] for _, v in series])
    cv = _Canvas(style, (al.min(), al.max()), (ys.min(), ys.max()), equal=False)
    for k, (name, v) in enumerate(series):
        ok = np.isfinite(v)
        color = "#000" if k == 0 else PALETTE[(k - 1) % len(PALETTE)]
        # draw finite stretches separately so bounds with a limited range stay honest
        idx = np.nonzero(ok)[0]
        if len(idx):
            for run in np.split(idx, np.nonzero(np.diff(idx) > 1)[0] + 1):
                cv.polyline(al[run], v[run], color, 1.0, width=2.4 if k == 0 else 1.2)
        u, vpx = style.margin + 6, style.margin + 14 * k + 12
        cv.parts.append(f'<text x="{u}" y="{vpx}" font-size="10" fill="{color}" '
                        f'font-family="sans-serif">{escape(name)}</text>')
    cv.axes("alpha", "Mahler measure")
    return cv.render()
