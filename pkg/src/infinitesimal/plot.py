"""CSV and SVG renderings of the curve ``graph_delta(x)``.

The curve is drawn the way it is defined: the value ``p`` of the
representative goes on the horizontal axis and the parameter ``t`` on the
vertical one, so a standard real is a vertical segment and an infinitesimal
leaves the origin sideways.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from ._numbers import format_rational
from .errors import DomainError
from .fermat import FermatReal, graph_points, is_real, st

FORMATS = ("csv", "svg")


def _cell(v) -> str:
    return format_rational(v) if isinstance(v, Fraction) else repr(float(v))


def render_csv(points: list) -> str:
    lines = ["p,t"] + [f"{_cell(p)},{_cell(t)}" for p, t in points]
    return "\n".join(lines) + "\n"


def render_svg(x: FermatReal, points: list, size: int = 400, margin: int = 20) -> str:
    ps = [float(p) for p, _ in points]
    ts = [float(t) for _, t in points]
    p_lo, p_hi = min(ps + [0.0]), max(ps + [0.0])
    t_hi = max(ts) or 1.0
    span = (p_hi - p_lo) or 1.0
    inner = size - 2 * margin

    def sx(p):
        return margin + (p - p_lo) / span * inner

    def sy(t):
        return size - margin - t / t_hi * inner

    coords = " ".join(f"{sx(p):.3f},{sy(t):.3f}" for p, t in zip(ps, ts))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" y2="{size - margin}" stroke="gray"/>',
        f'<line x1="{sx(0):.3f}" y1="{margin}" x2="{sx(0):.3f}" y2="{size - margin}" stroke="gray"/>',
        f'<polyline fill="none" stroke="black" points="{coords}"/>',
    ]
    if is_real(x):
        tick = sx(float(st(x)))
        parts.append(
            f'<line class="tick" x1="{tick:.3f}" y1="{size - margin - 5}" x2="{tick:.3f}" y2="{size - margin + 5}" stroke="red"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_plot(x: FermatReal, delta, samples: int = 100, fmt: str = "csv") -> str:
    if fmt not in FORMATS:
        raise DomainError(f"plot: unknown format {fmt!r}")
    points = graph_points(x, delta, samples)
    return render_csv(points) if fmt == "csv" else render_svg(x, points)


def emit_plot(x: FermatReal, delta, samples: int, fmt: str, path) -> Path:
    """Write the plot of ``graph_delta(x)`` to ``path``; OSError propagates."""
    text = render_plot(x, delta, samples, fmt)
    path = Path(path)
    path.write_text(text)
    return path
