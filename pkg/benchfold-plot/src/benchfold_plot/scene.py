"""A tiny deterministic drawing model with SVG and PNG backends.

Figures are built as a flat list of primitives in pixel coordinates.
The SVG backend writes them as literal elements (circles stay <circle>,
triangles <polygon>), so tests and downstream tools can count glyphs; the
PNG backend rasterizes the same primitives with Pillow. Neither embeds
timestamps or environment details, so output bytes depend only on input.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Circle:
    x: float
    y: float
    r: float
    fill: str
    stroke: str = "none"
    cls: str = ""


@dataclass(frozen=True)
class Polygon:
    points: tuple  # ((x, y), ...)
    fill: str
    stroke: str = "none"
    cls: str = ""


@dataclass(frozen=True)
class Line:
    x1: float
    y1: float
    x2: float
    y2: float
    stroke: str
    width: float = 1.0
    cls: str = ""


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float
    fill: str
    stroke: str = "none"
    cls: str = ""


@dataclass(frozen=True)
class Text:
    x: float
    y: float
    s: str
    size: float = 11.0
    fill: str = "#222222"
    anchor: str = "start"  # start | middle | end
    cls: str = ""


@dataclass
class Scene:
    width: int
    height: int
    background: str = "#ffffff"
    elements: list = field(default_factory=list)

    def add(self, *items) -> None:
        self.elements.extend(items)


def _num(x: float) -> str:
    # fixed 2-decimal pixel coordinates keep files small and stable
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _esc(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;")
             .replace(">", "&gt;").replace('"', "&quot;"))


def to_svg(scene: Scene) -> str:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{scene.width}" '
        f'height="{scene.height}" viewBox="0 0 {scene.width} {scene.height}">',
        f'<rect class="background" width="{scene.width}" '
        f'height="{scene.height}" fill="{scene.background}"/>',
    ]
    for el in scene.elements:
        cls = f' class="{el.cls}"' if el.cls else ""
        if isinstance(el, Circle):
            out.append(
                f'<circle{cls} cx="{_num(el.x)}" cy="{_num(el.y)}" '
                f'r="{_num(el.r)}" fill="{el.fill}" stroke="{el.stroke}"/>'
            )
        elif isinstance(el, Polygon):
            pts = " ".join(f"{_num(x)},{_num(y)}" for x, y in el.points)
            out.append(
                f'<polygon{cls} points="{pts}" fill="{el.fill}" '
                f'stroke="{el.stroke}"/>'
            )
        elif isinstance(el, Line):
            out.append(
                f'<line{cls} x1="{_num(el.x1)}" y1="{_num(el.y1)}" '
                f'x2="{_num(el.x2)}" y2="{_num(el.y2)}" '
                f'stroke="{el.stroke}" stroke-width="{_num(el.width)}"/>'
            )
        elif isinstance(el, Rect):
            out.append(
                f'<rect{cls} x="{_num(el.x)}" y="{_num(el.y)}" '
                f'width="{_num(el.w)}" height="{_num(el.h)}" '
                f'fill="{el.fill}" stroke="{el.stroke}"/>'
            )
        elif isinstance(el, Text):
            anchor = f' text-anchor="{el.anchor}"' if el.anchor != "start" else ""
            out.append(
                f'<text{cls} x="{_num(el.x)}" y="{_num(el.y)}" '
                f'font-family="sans-serif" font-size="{_num(el.size)}" '
                f'fill="{el.fill}"{anchor}>{_esc(el.s)}</text>'
            )
        else:
            raise TypeError(f"unknown scene element {type(el).__name__}")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def to_png_bytes(scene: Scene, scale: int = 2) -> bytes:
    """Rasterize via Pillow at an integer supersampling scale."""
    import io

    from PIL import Image, ImageDraw

    img = Image.new("RGB", (scene.width * scale, scene.height * scale),
                    scene.background)
    draw = ImageDraw.Draw(img)

    def pt(x, y):
        return (x * scale, y * scale)

    for el in scene.elements:
        if isinstance(el, Circle):
            x0, y0 = pt(el.x - el.r, el.y - el.r)
            x1, y1 = pt(el.x + el.r, el.y + el.r)
            outline = None if el.stroke == "none" else el.stroke
            draw.ellipse([x0, y0, x1, y1], fill=el.fill, outline=outline)
        elif isinstance(el, Polygon):
            outline = None if el.stroke == "none" else el.stroke
            draw.polygon([pt(x, y) for x, y in el.points],
                         fill=None if el.fill == "none" else el.fill,
                         outline=outline)
        elif isinstance(el, Line):
            draw.line([*pt(el.x1, el.y1), *pt(el.x2, el.y2)],
                      fill=el.stroke, width=max(1, round(el.width * scale)))
        elif isinstance(el, Rect):
            outline = None if el.stroke == "none" else el.stroke
            draw.rectangle([*pt(el.x, el.y), *pt(el.x + el.w, el.y + el.h)],
                           fill=None if el.fill == "none" else el.fill,
                           outline=outline)
        elif isinstance(el, Text):
            x, y = pt(el.x, el.y - el.size)  # svg text y is the baseline
            if el.anchor in ("middle", "end"):
                box = draw.textbbox((0, 0), el.s)
                width = box[2] - box[0]
                x -= width if el.anchor == "end" else width / 2
            draw.text((x, y), el.s, fill=el.fill)
        else:
            raise TypeError(f"unknown scene element {type(el).__name__}")

    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def write(scene: Scene, path: str, fmt: str) -> None:
    if fmt == "svg":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(to_svg(scene))
    elif fmt == "png":
        with open(path, "wb") as fh:
            fh.write(to_png_bytes(scene))
    else:
        raise ValueError(f"unknown format {fmt!r}")
