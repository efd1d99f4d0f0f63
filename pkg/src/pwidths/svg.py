"""Minimal SVG pictures of a domain outline with chain pieces drawn on top."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .geometry import ConvexPolygon, Segment2

SIZE = 400.0
MARGIN = 20.0


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def _polyline(piece):
    if isinstance(piece, Segment2):
        return [piece.a, piece.b]
    return list(piece)


def render(
    P: ConvexPolygon,
    pieces=(),
    title: str | None = None,
    timestamp: str | None = None,
) -> str:
    """SVG text for ``P`` with ``pieces`` (segments or point sequences) in red.

    The output depends only on the arguments; pass ``timestamp`` to add a
    comment line.
    """
    xs = [v[0] for v in P.vertices]
    ys = [v[1] for v in P.vertices]
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    k = (SIZE - 2 * MARGIN) / span

    def tr(p):
        return _fmt(MARGIN + k * (p[0] - min(xs))), _fmt(SIZE - MARGIN - k * (p[1] - min(ys)))

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(SIZE)}" '
        f'height="{_fmt(SIZE)}" viewBox="0 0 {_fmt(SIZE)} {_fmt(SIZE)}">',
    ]
    if timestamp is not None:
        lines.append(f"<!-- generated {escape(timestamp)} -->")
    if title:
        lines.append(f"<title>{escape(title)}</title>")
    outline = " ".join(",".join(tr(v)) for v in P.vertices)
    lines.append(f'<polygon points="{outline}" fill="none" stroke="black" stroke-width="1.5"/>')
    for piece in pieces:
        pts = " ".join(",".join(tr(p)) for p in _polyline(piece))
        lines.append(f'<polyline points="{pts}" fill="none" stroke="red" stroke-width="2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
